import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camel_qldpc.algebra import matmul_gf2, multiplicative_order, rank_gf2
from camel_qldpc.css import girth
from camel_qldpc.qc import (
    build_base_matrix,
    choose_coset_representatives,
    is_permutation_vector,
    qc_pair,
    row_differences_are_permutations,
    verify_lemma1,
)

# printed example for p = 7, sigma = 3
EXAMPLE_BASE = np.array([
    [1, 1, 3, 2, 6, 4, 5],
    [1, 5, 1, 3, 2, 6, 4],
    [1, 4, 5, 1, 3, 2, 6],
    [1, 6, 4, 5, 1, 3, 2],
    [1, 2, 6, 4, 5, 1, 3],
    [1, 3, 2, 6, 4, 5, 1],
])

# (p, sigma) pairs with even order, including ones with several cosets
EVEN_ORDER = [(p, s) for p in (5, 7, 11, 13, 17, 19, 23) for s in range(2, p)
              if multiplicative_order(s, p) % 2 == 0]


def test_example_base_matrix():
    params = choose_coset_representatives(7, 3)
    assert (params.ell, params.T, params.taus) == (6, 1, (1,))
    assert np.array_equal(build_base_matrix(params).entries, EXAMPLE_BASE)


def test_example_expansion_ranks():
    h1, h2 = qc_pair(choose_coset_representatives(7, 3))
    assert h1.shape == h2.shape == (21, 49)
    assert rank_gf2(h1) == rank_gf2(h2) == 19
    assert matmul_gf2(h1.dense, h2.dense.T).all()


def test_odd_order_rejected():
    with pytest.raises(ValueError, match="odd"):
        choose_coset_representatives(7, 2)
    with pytest.raises(ValueError):
        choose_coset_representatives(7, 7)


def test_cosets_partition_multiplicative_group():
    params = choose_coset_representatives(13, 5)  # ord(5) = 4, three cosets
    assert params.ell == 4 and params.T == 3
    sub = {pow(5, k, 13) for k in range(4)}
    cosets = [frozenset(t * g % 13 for g in sub) for t in params.taus]
    assert len(set(cosets)) == 3 and set().union(*cosets) == set(range(1, 13))
    assert params.taus == (1, 2, 4)  # 3 lies in the coset 2<5> = {2, 3, 10, 11}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(EVEN_ORDER), st.data())
def test_every_row_split_gives_all_ones(ps, data):
    p, sigma = ps
    ell = multiplicative_order(sigma, p)
    ell1 = data.draw(st.integers(1, ell - 1))
    params = choose_coset_representatives(p, sigma, ell1=ell1)
    base = build_base_matrix(params)
    assert row_differences_are_permutations(base)
    assert verify_lemma1(base.top, base.bottom, p)
    h1, h2 = qc_pair(params)
    assert matmul_gf2(h1.dense, h2.dense.T).all()


@pytest.mark.parametrize("p,sigma", [(7, 3), (11, 2), (13, 5)])
def test_stacked_components_have_girth_six(p, sigma):
    h1, h2 = qc_pair(choose_coset_representatives(p, sigma))
    assert girth(np.vstack([h1.dense, h2.dense])) >= 6


def test_all_ones_condition_detects_even_multiplicity():
    assert verify_lemma1([[0, 1, 2]], [[0, 0, 0]], 3)
    assert not verify_lemma1([[0, 0, 2]], [[0, 0, 0]], 3)
    with pytest.raises(ValueError):
        verify_lemma1([[0, 1]], [[0, 1, 2]], 3)


def test_permutation_vector():
    assert is_permutation_vector([3, 0, 1, 2, 4], 5)
    assert not is_permutation_vector([0, 0, 1, 2, 4], 5)
    assert not is_permutation_vector([0, 1, 2], 5)
