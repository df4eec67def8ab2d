import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camel_qldpc.algebra import BinaryMatrix
from camel_qldpc.codes import PRESETS, build_code, build_qc_code
from camel_qldpc.css import (
    CodeValidationError,
    CssCode,
    TannerGraph,
    assemble_css,
    compute_syndrome,
    four_cycle_localization,
    girth,
    residual_in_stabilizer,
    residuals_in_stabilizer,
)
from oracles import ADD, stabilizer_span, syndrome


def test_assemble_rejects_missing_all_ones():
    h = np.eye(3, dtype=np.uint8)
    with pytest.raises(CodeValidationError) as exc:
        assemble_css(h, h)
    assert exc.value.row_pair == (0, 1)


def test_tampered_bit_names_row_pair(code):
    q1 = code("q1")
    hx = q1.hx.dense.copy()
    hx[3, 0] ^= 1
    bad = CssCode(BinaryMatrix(hx), q1.hz, "QC")
    with pytest.raises(CodeValidationError, match=r"twisted condition .* violated at row pair \(3, \d+\)") as exc:
        bad.validate()
    assert exc.value.row_pair[0] == 3


def test_shape_checks():
    with pytest.raises(CodeValidationError):
        CssCode(BinaryMatrix(np.ones((2, 3))), BinaryMatrix(np.ones((2, 4))), "QC")
    with pytest.raises(ValueError):
        CssCode(BinaryMatrix(np.ones((2, 3))), BinaryMatrix(np.ones((2, 3))), "XX")


@pytest.mark.parametrize("name", ["q1", "e1", "e2", "e3"])
def test_syndrome_matches_trace_definition(code, name):
    c = code(name)
    rng = np.random.default_rng(0)
    E = rng.integers(0, 4, size=(20, c.n)).astype(np.uint8)
    Z = compute_syndrome(c, E)
    for e, z in zip(E, Z):
        assert np.array_equal(z, syndrome(c.hx.dense, c.hz.dense, e))
        assert np.array_equal(compute_syndrome(c, e), z)


def test_syndrome_is_linear(code):
    c = code("e2")
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, 4, size=(2, c.n)).astype(np.uint8)
    assert np.array_equal(compute_syndrome(c, a ^ b), compute_syndrome(c, a) ^ compute_syndrome(c, b))


def test_rows_of_S_are_stabilizers(code):
    c = code("q1")
    for row in c.check_matrix.symbols:
        assert not compute_syndrome(c, row).any()
        assert residual_in_stabilizer(c, row)


def test_stabilizer_membership_exhaustive_e1(code):
    c = code("e1")
    span = stabilizer_span(c.hx.dense, c.hz.dense)
    assert len(span) == 2 ** (c.rank_x + c.rank_z)
    allv = np.array(list(itertools.product(range(4), repeat=c.n)), dtype=np.uint8)
    batch = residuals_in_stabilizer(c, allv)
    expected = np.array([tuple(v) in span for v in allv.tolist()])
    assert np.array_equal(batch, expected)
    for v in allv[::97]:
        assert residual_in_stabilizer(c, v) == (tuple(v.tolist()) in span)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_stabilizer_closed_under_addition(data):
    c = build_code("EG", {"s": 2})
    rows = c.check_matrix.symbols
    picks = data.draw(st.lists(st.integers(0, len(rows) - 1), min_size=1, max_size=6))
    v = np.zeros(c.n, dtype=np.uint8)
    for i in picks:
        v = ADD[v, rows[i]].astype(np.uint8)
    assert residual_in_stabilizer(c, v)
    assert not compute_syndrome(c, v).any()


def test_k_formula_and_label(code):
    c = code("e2")
    assert c.k == c.n - c.rank_x - c.rank_z == 3
    assert c.label == "[[21,3]]"


@pytest.mark.parametrize("s", [1, 2, 3])
def test_projective_codes_have_one_more_qubit_and_one_fewer_logical(s):
    eg, pg = build_code("EG", {"s": s}), build_code("PG", {"s": s})
    q = 2**s
    assert pg.n == eg.n + 1 == q * q + q + 2
    assert pg.k == eg.k - 1


# ---- Tanner graph and cycles -------------------------------------------------

def test_tanner_graph_layout(code):
    c = code("e1")
    g = c.tanner_graph
    S = c.check_matrix.symbols
    assert g.n_edges == np.count_nonzero(S)
    assert np.array_equal(g.symbols(), S)
    for j in range(g.n_cn):
        assert [v for v, _ in g.cn_neighbors(j)] == np.flatnonzero(S[j]).tolist()
    for i in range(g.n_vn):
        assert [j for j, _ in g.vn_neighbors(i)] == np.flatnonzero(S[:, i]).tolist()
    r = g.without_vn(g.n_vn - 1)
    assert np.array_equal(r.symbols(), S[:, :-1])


def test_girth_small_graphs():
    assert girth(np.ones((2, 2))) == 4
    assert girth(np.array([[1, 1, 0], [0, 1, 1]])) == math.inf
    hexagon = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert girth(hexagon) == 6
    assert girth(TannerGraph.from_binary(hexagon)) == 6


def test_four_cycles_sit_on_appended_qubit_for_qc(code):
    c = code("q1")
    rep = four_cycle_localization(c)
    assert len(rep.pairs) > 0 and len(rep.violations) == 0 and rep.passed
    # every pair that shares >= 2 columns shares the appended one
    for r1, r2 in rep.pairs[:50].tolist():
        assert c.n - 1 in rep.columns(r1, r2)


@pytest.mark.parametrize("name", ["e1", "e2", "e3"])
def test_fg_residual_cycles_only_between_paired_rows(code, name):
    c = code(name)
    rep = four_cycle_localization(c)
    assert rep.paired_only and rep.passed
    assert len(rep.violations) == c.m
    assert "share" in rep.describe()[0]


def test_unpaired_residual_cycle_is_reported():
    # two rows of H_X that overlap in two columns besides the appended one
    hx = np.array([[1, 1, 0, 1], [1, 1, 1, 1]], dtype=np.uint8)
    c = CssCode(BinaryMatrix(hx), BinaryMatrix(hx), "EG")
    rep = four_cycle_localization(c)
    assert not rep.paired_only


def test_qc_builder_records_preset(code):
    c = build_qc_code(7, 3)
    assert c.name == "q1" and c.claimed_d == 6
    assert build_qc_code(7, 3, ell1=2).name is None
    assert PRESETS["e3"].claimed_d == 9
