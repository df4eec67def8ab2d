"""Two-dimensional Euclidean and projective geometries over GF(2^s).

The point-line incidence matrix ``H`` (points as rows, lines as columns) of
either plane satisfies ``H H^T = all-ones`` over GF(2): two distinct points
share exactly one line, and every point lies on ``q + 1`` lines, an odd
number because ``q`` is a power of two.  All lines are used, including the
ones through the origin; dropping those breaks the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import BinaryField2s, BinaryMatrix, matmul_gf2

MAX_S = 5


@dataclass(frozen=True)
class FiniteGeometry:
    kind: str  # "EG" or "PG"
    s: int
    q: int
    points: tuple[tuple[int, ...], ...] = field(repr=False)
    lines: tuple[frozenset[int], ...] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def M_lines(self) -> int:
        return len(self.lines)

    @property
    def rho(self) -> int:
        """Points per line."""
        return self.q if self.kind == "EG" else self.q + 1

    @property
    def gamma(self) -> int:
        """Lines per point."""
        return self.q + 1


@dataclass(frozen=True)
class IncidenceMatrix:
    H: BinaryMatrix
    geometry: FiniteGeometry


def _incidence(geometry: FiniteGeometry) -> IncidenceMatrix:
    a = np.zeros((geometry.N, geometry.M_lines), dtype=np.uint8)
    for j, line in enumerate(geometry.lines):
        a[sorted(line), j] = 1
    return IncidenceMatrix(H=BinaryMatrix(a), geometry=geometry)


def _field(s: int) -> BinaryField2s:
    if not 1 <= s <= MAX_S:
        raise ValueError(f"s={s} out of the supported range 1..{MAX_S}")
    return BinaryField2s(s)


def construct_eg(s: int) -> IncidenceMatrix:
    """Affine plane EG(2, 2^s).

    Point ``(x, y)`` has index ``x*q + y``.  Lines ``y = a t + b`` come first,
    ordered by ``(a, b)``, followed by the vertical lines ``x = c``.
    """
    F = _field(s)
    q = F.q
    points = tuple((x, y) for x in range(q) for y in range(q))
    lines = []
    for a in range(q):
        for b in range(q):
            lines.append(frozenset(t * q + (F.mul(a, t) ^ b) for t in range(q)))
    for c in range(q):
        lines.append(frozenset(c * q + t for t in range(q)))
    return _incidence(FiniteGeometry("EG", s, q, points, tuple(lines)))


def _normalized_triples(q: int) -> list[tuple[int, int, int]]:
    # first nonzero coordinate equal to 1, lexicographic order
    return [t for t in itertools.product(range(q), repeat=3) if any(t) and t[next(i for i in range(3) if t[i])] == 1]


def construct_pg(s: int) -> IncidenceMatrix:
    """Projective plane PG(2, 2^s).

    Points and line coordinates are normalized triples in lexicographic order;
    line ``a`` holds the points ``x`` with ``a . x = 0``.
    """
    F = _field(s)
    triples = _normalized_triples(F.q)
    X = np.array(triples, dtype=np.int64)
    mt = F.mul_table
    lines = []
    for a in triples:
        dot = mt[a[0], X[:, 0]] ^ mt[a[1], X[:, 1]] ^ mt[a[2], X[:, 2]]
        lines.append(frozenset(np.flatnonzero(dot == 0).tolist()))
    return _incidence(FiniteGeometry("PG", s, F.q, tuple(triples), tuple(lines)))


def construct_geometry(kind: str, s: int) -> IncidenceMatrix:
    kind = kind.upper()
    if kind == "EG":
        return construct_eg(s)
    if kind == "PG":
        return construct_pg(s)
    raise ValueError(f"unknown geometry kind {kind!r}")


def two_points_one_line(g: FiniteGeometry | IncidenceMatrix) -> bool:
    """Exhaustively check that every pair of points shares exactly one line."""
    H = g.H.dense if isinstance(g, IncidenceMatrix) else _incidence(g).H.dense
    shared = H.astype(np.int64) @ H.T.astype(np.int64)
    off = ~np.eye(H.shape[0], dtype=bool)
    return bool(np.all(shared[off] == 1))


def lines_meet_at_most_once(g: FiniteGeometry | IncidenceMatrix) -> bool:
    """Two distinct lines are parallel or meet in exactly one point."""
    H = g.H.dense if isinstance(g, IncidenceMatrix) else _incidence(g).H.dense
    shared = H.T.astype(np.int64) @ H.astype(np.int64)
    off = ~np.eye(H.shape[1], dtype=bool)
    return bool(np.all(shared[off] <= 1))


def hht_is_all_ones(H) -> bool:
    H = np.asarray(H)
    return bool(matmul_gf2(H, H.T).all())


def origin_lines(inc: IncidenceMatrix) -> list[int]:
    """Indices of the lines through point 0 (the origin of an EG)."""
    return [j for j, line in enumerate(inc.geometry.lines) if 0 in line]
