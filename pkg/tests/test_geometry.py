import numpy as np
import pytest

from camel_qldpc.algebra import matmul_gf2
from camel_qldpc.geometry import (
    construct_eg,
    construct_geometry,
    construct_pg,
    hht_is_all_ones,
    lines_meet_at_most_once,
    origin_lines,
    two_points_one_line,
)


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_euclidean_plane_axioms(s):
    inc = construct_eg(s)
    q = 2**s
    g = inc.geometry
    assert (g.N, g.M_lines, g.rho, g.gamma) == (q * q, q * q + q, q, q + 1)
    H = inc.H.dense
    assert set(H.sum(0)) == {q} and set(H.sum(1)) == {q + 1}
    assert two_points_one_line(inc) and lines_meet_at_most_once(inc)
    assert hht_is_all_ones(H)


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_projective_plane_axioms(s):
    inc = construct_pg(s)
    q = 2**s
    N = q * q + q + 1
    H = inc.H.dense
    assert H.shape == (N, N)
    assert set(H.sum(0)) == {q + 1} and set(H.sum(1)) == {q + 1}
    assert two_points_one_line(inc)
    # projective lines always meet in exactly one point
    shared = H.T.astype(int) @ H.astype(int)
    assert np.all(shared[~np.eye(N, dtype=bool)] == 1)
    assert hht_is_all_ones(H)


def test_dropping_origin_lines_breaks_all_ones():
    inc = construct_eg(2)
    lines = origin_lines(inc)
    assert len(lines) == 5
    # the construction needs every line; without the origin lines some pair
    # of points no longer shares a line and H H^T gets a zero entry
    H = np.delete(inc.H.dense, lines, axis=1)
    assert not hht_is_all_ones(H)
    H1 = np.delete(inc.H.dense, lines[:1], axis=1)
    assert not matmul_gf2(H1, H1.T).all()


def test_out_of_range():
    with pytest.raises(ValueError):
        construct_geometry("EG", 0)
    with pytest.raises(ValueError):
        construct_geometry("EG", 6)
    with pytest.raises(ValueError):
        construct_geometry("AG", 2)
