import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camel_qldpc.algebra import GF4_ALPHA, GF4_BETA, TRACE_TABLE
from camel_qldpc.bp import (
    BinaryPairBP,
    CamelDecoder,
    DecoderConfig,
    GenieDecoder,
    QuaternaryBP,
    bp2_decode,
    bp_decode,
    camel_decode,
    check_function,
    cn_update,
    decimated_decode,
    depolarizing_prior,
    make_decoder,
    pinned_decode,
    vn_update,
)
from camel_qldpc.codes import build_qc_code
from camel_qldpc.css import TannerGraph, compute_syndrome, residual_in_stabilizer
from oracles import cn_brute, reference_binary_bp, reference_bp

PRIOR = depolarizing_prior(0.05)


def random_messages(rng, d):
    m = rng.random((d, 4)) ** 3 + 1e-3
    return m / m.sum(axis=1, keepdims=True)


# ---- per-node rules ----------------------------------------------------------

@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5, 6])
def test_cn_update_matches_enumeration(degree):
    rng = np.random.default_rng(degree)
    worst = 0.0
    for _ in range(100):
        syms = rng.integers(1, 4, size=degree)
        z = int(rng.integers(0, 2))
        msgs = random_messages(rng, degree)
        fast = cn_update(syms, z, msgs)
        brute = cn_brute(syms, z, msgs)
        live = brute > 0
        worst = max(worst, float(np.max(np.abs(fast[live] - brute[live]) / brute[live])))
        # impossible symbols carry only the underflow floor
        assert np.all(fast[~live] <= 1e-299)
    assert worst <= 1e-12


def test_cn_output_symmetry():
    rng = np.random.default_rng(7)
    for d in range(1, 7):
        syms = rng.integers(1, 4, size=d)
        out = cn_update(syms, 1, random_messages(rng, d))
        for i, s in enumerate(syms):
            commuting = [a for a in range(4) if TRACE_TABLE[a, s] == 0]
            anti = [a for a in range(4) if TRACE_TABLE[a, s] == 1]
            assert out[i, commuting[0]] == pytest.approx(out[i, commuting[1]], rel=1e-14)
            assert out[i, anti[0]] == pytest.approx(out[i, anti[1]], rel=1e-14)
            assert out[i].sum() == pytest.approx(1.0, abs=1e-12)


def test_cn_single_neighbor_forces_syndrome():
    # with one neighbor the check is a hard constraint on that symbol
    out = cn_update([2], 1, [[0.25] * 4])
    assert out[0, 0] < 1e-200 and out[0, 2] < 1e-200
    assert out[0, 1] == pytest.approx(0.5) and out[0, 3] == pytest.approx(0.5)


def test_vn_update_products():
    rng = np.random.default_rng(3)
    msgs = random_messages(rng, 4)
    out = vn_update(PRIOR, msgs)
    for j, o in enumerate(out):
        expect = PRIOR * np.prod(np.delete(msgs, j, axis=0), axis=0)
        assert np.allclose(o, expect / expect.sum(), rtol=1e-13)
        assert o.sum() == pytest.approx(1.0, abs=1e-12) and (o >= 0).all()
    assert np.allclose(vn_update(PRIOR, [])[0], PRIOR)


def test_vn_update_zero_product_falls_back_to_prior_support():
    out = vn_update([0.0, 0.5, 0.5, 0.0], [[1.0, 0, 0, 0], [0.0, 0, 0, 1.0], [0.3, 0.3, 0.2, 0.2]])
    assert np.allclose(out[2], [0.0, 0.5, 0.5, 0.0])


def test_pinned_indicator_passes_through():
    out = vn_update([0, 0, 1.0, 0], random_messages(np.random.default_rng(0), 3))
    for o in out:
        assert np.array_equal(o, [0, 0, 1, 0])


def test_check_function_brute():
    syms = [1, 2, 3]
    for t in itertools.product(range(4), repeat=3):
        par = TRACE_TABLE[t[0], 1] ^ TRACE_TABLE[t[1], 2] ^ TRACE_TABLE[t[2], 3]
        assert check_function(syms, t, par) == 1
        assert check_function(syms, t, par ^ 1) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        DecoderConfig(schedule="layered")
    with pytest.raises(ValueError):
        DecoderConfig(decimated_vn=3)
    with pytest.raises(ValueError):
        DecoderConfig(max_iterations=-1)
    with pytest.raises(ValueError):
        make_decoder("osd", None, 0.1)


# ---- full decoder against the probability-domain reference ---------------------

@pytest.mark.parametrize("name,eps,trials", [("e2", 0.08, 40), ("q1", 0.05, 15), ("e1", 0.1, 40)])
def test_bp_matches_reference(code, name, eps, trials):
    c = code(name)
    S = c.check_matrix.symbols
    rng = np.random.default_rng(11)
    prior = depolarizing_prior(eps)
    for t in range(trials):
        e = rng.choice(4, size=c.n, p=prior).astype(np.uint8)
        z = compute_syndrome(c, e) if t % 4 else rng.integers(0, 2, size=2 * c.m).astype(np.uint8)
        res = bp_decode(c, z, prior, trace=True)
        est, ok, it, v_hist, c_hist = reference_bp(S, z, prior)
        assert (res.satisfied, res.iterations) == (ok, it)
        assert np.array_equal(res.estimate, est)
        g = c.tanner_graph
        for step, hist in enumerate(c_hist):
            for e_id in range(g.n_edges):
                key = (int(g.edge_cn[e_id]), int(g.edge_vn[e_id]))
                assert np.allclose(res.c2v_trace[step, e_id], hist[key], rtol=1e-9, atol=1e-300)
        for step, hist in enumerate(v_hist):
            for e_id in range(0, g.n_edges, 7):
                key = (int(g.edge_cn[e_id]), int(g.edge_vn[e_id]))
                assert np.allclose(res.v2c_trace[step, e_id], hist[key], rtol=1e-9)


def test_messages_stay_normalized(code):
    c = code("e2")
    rng = np.random.default_rng(2)
    z = rng.integers(0, 2, size=2 * c.m).astype(np.uint8)
    res = bp_decode(c, z, PRIOR, trace=True)
    for tr in (res.v2c_trace[: res.iterations + 1], res.c2v_trace[: res.iterations]):
        assert np.allclose(tr.sum(axis=-1), 1.0, atol=1e-9)
        assert (tr >= 0).all()


def test_zero_syndrome_is_immediately_satisfied(code):
    c = code("q1")
    res = bp_decode(c, np.zeros(2 * c.m, dtype=np.uint8), depolarizing_prior(0.1))
    assert res.satisfied and res.iterations == 0 and not res.estimate.any()


def test_e1_single_errors_off_the_appended_qubit_are_corrected_by_bp(code):
    c = code("e1")
    for i in range(c.n - 1):
        for a in (1, 2, 3):
            e = np.zeros(c.n, dtype=np.uint8)
            e[i] = a
            res = bp_decode(c, compute_syndrome(c, e), depolarizing_prior(0.01))
            assert res.satisfied and np.array_equal(res.estimate, e)


def test_e1_all_single_errors_are_corrected_by_camel(code):
    # every 4-cycle of E1 runs through the appended qubit, so plain BP may
    # stall on errors there; decimating that qubit removes the cycles
    c = code("e1")
    for i in range(c.n):
        for a in (1, 2, 3):
            e = np.zeros(c.n, dtype=np.uint8)
            e[i] = a
            out = camel_decode(c, compute_syndrome(c, e), 0.01)
            assert out.status == "success"
            assert residual_in_stabilizer(c, e ^ out.estimate)


def test_without_early_stop_runs_all_iterations(code):
    c = code("e1")
    res = bp_decode(c, np.zeros(2 * c.m, dtype=np.uint8), PRIOR, DecoderConfig(early_stop=False))
    assert res.iterations == 15 and res.satisfied


# ---- decimation ----------------------------------------------------------------

def test_decimation_with_zero_guess_keeps_syndrome(code):
    c = code("e2")
    res = decimated_decode(c, np.zeros(2 * c.m, dtype=np.uint8), PRIOR, 0)
    assert res.satisfied and not res.estimate.any() and len(res.estimate) == c.n


def _reduced_edge_map(g: TannerGraph):
    keep = np.flatnonzero(g.edge_vn != g.n_vn - 1)
    return keep


def test_pinned_prior_equals_graph_reduction(code):
    c = code("e2")
    g = c.tanner_graph
    keep = _reduced_edge_map(g)
    to_last = g.edge_vn != g.n_vn - 1
    rng = np.random.default_rng(5)
    worst = 0.0
    for t in range(50):
        if t % 2:
            z = rng.integers(0, 2, size=2 * c.m).astype(np.uint8)
        else:
            z = compute_syndrome(c, rng.choice(4, size=c.n, p=depolarizing_prior(0.1)).astype(np.uint8))
        guess = t % 4
        red = decimated_decode(g, z, PRIOR, guess, trace=True)
        pin = pinned_decode(g, z, PRIOR, guess, trace=True)
        assert (red.satisfied, red.iterations) == (pin.satisfied, pin.iterations)
        assert np.array_equal(red.estimate, pin.estimate)
        T = red.iterations
        worst = max(
            worst,
            float(np.max(np.abs(red.v2c_trace[: T + 1] - pin.v2c_trace[: T + 1][:, keep]))),
            float(np.max(np.abs(red.c2v_trace[:T] - pin.c2v_trace[:T][:, keep]))) if T else 0.0,
        )
        # the pinned qubit keeps sending its indicator
        last_edges = np.flatnonzero(~to_last)
        assert np.all(pin.v2c_trace[: T + 1][:, last_edges, guess] == 1.0)
    assert worst <= 1e-12


def test_reduced_qc_graph_has_girth_six(code):
    from camel_qldpc.css import girth

    c = code("q1")
    assert girth(c.tanner_graph) == 4
    assert girth(c.tanner_graph.without_vn(c.n - 1)) >= 6


# ---- ensemble ---------------------------------------------------------------

def test_camel_zero_syndrome(code):
    c = code("q1")
    out = camel_decode(c, np.zeros(2 * c.m, dtype=np.uint8), 0.01)
    assert out.status == "success" and out.chosen == 0 and not out.estimate.any()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["e1", "e2", "q1"]), st.sampled_from([0.03, 0.08, 0.15]))
def test_camel_chosen_estimate_satisfies_syndrome(seed, name, eps):
    from conftest import cached_preset

    c = cached_preset(name)
    rng = np.random.default_rng(seed)
    e = rng.choice(4, size=c.n, p=depolarizing_prior(eps)).astype(np.uint8)
    z = compute_syndrome(c, e)
    out = camel_decode(c, z, eps)
    sat = [x for x in out.candidates if x.satisfied]
    assert (out.status == "failure") == (not sat)
    for cand in out.candidates:
        assert cand.estimate[-1] == cand.guess
        assert cand.satisfied == bool(np.array_equal(compute_syndrome(c, cand.estimate), z))
    if out.chosen is not None:
        assert np.array_equal(compute_syndrome(c, out.estimate), z)
        best = min(x.weight for x in sat)
        assert out.estimate is out.candidates[out.chosen].estimate
        # lightest satisfied path, earliest on ties
        assert out.chosen == next(i for i, x in enumerate(out.candidates) if x.satisfied and x.weight == best)


def test_camel_paths_equal_single_decimated_runs(code):
    c = code("e2")
    rng = np.random.default_rng(9)
    for _ in range(10):
        z = compute_syndrome(c, rng.choice(4, size=c.n, p=depolarizing_prior(0.1)).astype(np.uint8))
        out = camel_decode(c, z, 0.1)
        for g, cand in enumerate(out.candidates):
            ref = decimated_decode(c, z, depolarizing_prior(0.1), g)
            assert np.array_equal(cand.estimate, ref.estimate)
            assert (cand.satisfied, cand.iterations) == (ref.satisfied, ref.iterations)


def test_batch_decoding_is_order_independent(code):
    c = code("q1")
    rng = np.random.default_rng(4)
    E = rng.choice(4, size=(30, c.n), p=depolarizing_prior(0.06)).astype(np.uint8)
    Z = compute_syndrome(c, E)
    dec = CamelDecoder(c, 0.06)
    full = dec.decode_batch(Z)
    perm = rng.permutation(30)
    shuffled = dec.decode_batch(Z[perm])
    assert np.array_equal(full.estimates[perm], shuffled.estimates)
    for b in (0, 7):
        single = dec.decode(Z[b])
        assert (single.chosen is not None) == bool(full.declared_success[b])


def test_genie_matches_decimated_with_true_value(code):
    c = code("e2")
    rng = np.random.default_rng(8)
    E = rng.choice(4, size=(20, c.n), p=depolarizing_prior(0.08)).astype(np.uint8)
    Z = compute_syndrome(c, E)
    res = GenieDecoder(c, 0.08).decode_batch(Z, E)
    for b in range(20):
        ref = decimated_decode(c, Z[b], depolarizing_prior(0.08), int(E[b, -1]))
        assert np.array_equal(res.estimates[b], ref.estimate)
        assert res.declared_success[b] == ref.satisfied


def test_plain_bp_batch_matches_single(code):
    c = code("e2")
    rng = np.random.default_rng(6)
    Z = compute_syndrome(c, rng.choice(4, size=(10, c.n), p=depolarizing_prior(0.08)).astype(np.uint8))
    res = QuaternaryBP(c, 0.08).decode_batch(Z)
    for b in range(10):
        assert np.array_equal(res.estimates[b], bp_decode(c, Z[b], depolarizing_prior(0.08)).estimate)


# ---- binary pair decoder ---------------------------------------------------

def test_bp2_zero_syndrome(code):
    c = code("e3")
    res = bp2_decode(c, np.zeros(2 * c.m, dtype=np.uint8), 0.05)
    assert res.satisfied and not res.estimate.any()


def test_bp2_components_match_binary_reference(code):
    c = code("q1")
    rng = np.random.default_rng(12)
    eps = 0.06
    dec = BinaryPairBP(c, eps)
    for _ in range(10):
        e = rng.choice(4, size=c.n, p=depolarizing_prior(eps)).astype(np.uint8)
        z = compute_syndrome(c, e)
        res = dec.decode_batch(z[None])
        beta, ok_b, _ = reference_binary_bp(c.hx.dense, z[: c.m], 2 * eps / 3)
        alpha, ok_a, _ = reference_binary_bp(c.hz.dense, z[c.m :], 2 * eps / 3)
        assert np.array_equal(GF4_ALPHA[res.estimates[0]], alpha)
        assert np.array_equal(GF4_BETA[res.estimates[0]], beta)
        assert res.declared_success[0] == (ok_a and ok_b)


def test_bp2_corrects_single_errors(code):
    c = code("e2")
    for i in range(0, c.n, 3):
        for a in (1, 2, 3):
            e = np.zeros(c.n, dtype=np.uint8)
            e[i] = a
            res = bp2_decode(c, compute_syndrome(c, e), 0.01)
            assert res.satisfied and np.array_equal(compute_syndrome(c, res.estimate), compute_syndrome(c, e))


def test_uneven_split_decodes():
    c = build_qc_code(7, 3, ell1=2)
    e = np.zeros(c.n, dtype=np.uint8)
    e[5] = 3
    z = compute_syndrome(c, e)
    assert len(z) == c.m + c.m_z
    out = camel_decode(c, z, 0.01)
    assert out.status == "success"
    assert np.array_equal(compute_syndrome(c, out.estimate), z)
