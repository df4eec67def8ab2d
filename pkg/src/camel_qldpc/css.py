"""CSS codes with an appended all-ones column, their check matrix and graph.

The quaternary check matrix stacks ``w * H_X`` over ``w_bar * H_Z``.  With the
symplectic pair ``(alpha, beta)`` of each error symbol, the X-block syndrome
is ``H_X beta`` and the Z-block syndrome is ``H_Z alpha``.

Pauli labels use the fixed convention X <-> 1, Z <-> w, Y <-> w_bar.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from .algebra import (
    GF4_ALPHA,
    GF4_BETA,
    OMEGA,
    OMEGA_BAR,
    ONE,
    BinaryMatrix,
    as_bits,
    in_rowspace_gf2,
    matmul_gf2,
    nullspace_gf2,
    rank_gf2,
)

FAMILIES = ("QC", "EG", "PG")


class CodeValidationError(ValueError):
    """A structural guarantee of the code does not hold.

    ``row_pair`` names the first offending (row of the first matrix, row of
    the second matrix) when the failure is pairwise.
    """

    def __init__(self, message: str, row_pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.row_pair = row_pair


def _first_pair(mask: np.ndarray) -> tuple[int, int]:
    i, j = np.argwhere(mask)[0]
    return int(i), int(j)


def twisted_violation(hx, hz) -> tuple[int, int] | None:
    """First row pair with ``H_X[i] . H_Z[j] = 1``, or None if ``H_X H_Z^T = 0``."""
    prod = matmul_gf2(as_bits(hx), as_bits(hz).T)
    return _first_pair(prod == 1) if prod.any() else None


def all_ones_violation(h1, h2) -> tuple[int, int] | None:
    prod = matmul_gf2(as_bits(h1), as_bits(h2).T)
    return None if prod.all() else _first_pair(prod == 0)


@dataclass(frozen=True, eq=False)
class CssCode:
    """CSS code ``(H_X, H_Z)`` whose last column is the shared all-ones column."""

    hx: BinaryMatrix
    hz: BinaryMatrix
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    claimed_d: int | None = None
    name: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.hx.cols != self.hz.cols:
            raise CodeValidationError(f"H_X has {self.hx.cols} columns but H_Z has {self.hz.cols}")
        if self.hx.rows == 0 or self.hz.rows == 0 or self.hx.cols < 2:
            raise CodeValidationError("degenerate code: need m >= 1 checks and n >= 2 qubits")

    # ---- parameters -------------------------------------------------------
    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def m(self) -> int:
        """Rows of H_X; S has ``m + m_z`` rows, the X block first."""
        return self.hx.rows

    @property
    def m_z(self) -> int:
        return self.hz.rows

    @cached_property
    def rank_x(self) -> int:
        return rank_gf2(self.hx)

    @cached_property
    def rank_z(self) -> int:
        return rank_gf2(self.hz)

    @property
    def k(self) -> int:
        return self.n - self.rank_x - self.rank_z

    @property
    def label(self) -> str:
        return f"[[{self.n},{self.k}]]"

    # ---- derived structure ---------------------------------------------
    @cached_property
    def check_matrix(self) -> "QuaternaryCheckMatrix":
        return QuaternaryCheckMatrix(self.hx, self.hz)

    @cached_property
    def tanner_graph(self) -> "TannerGraph":
        return TannerGraph.from_symbols(self.check_matrix.symbols)

    @cached_property
    def stacked_components(self) -> BinaryMatrix:
        """``(H_1 ; H_2)``: both matrices without the appended column."""
        return BinaryMatrix(np.vstack([self.hx.dense[:, :-1], self.hz.dense[:, :-1]]))

    @cached_property
    def _kernel_x(self) -> np.ndarray:
        return nullspace_gf2(self.hx)

    @cached_property
    def _kernel_z(self) -> np.ndarray:
        return nullspace_gf2(self.hz)

    # ---- checks -------------------------------------------------------------
    def validate(self) -> None:
        """Raise CodeValidationError unless every structural invariant holds."""
        bad = twisted_violation(self.hx, self.hz)
        if bad is not None:
            raise CodeValidationError(
                f"twisted condition H_X H_Z^T = 0 violated at row pair {bad}", row_pair=bad
            )
        for name, h in (("H_X", self.hx), ("H_Z", self.hz)):
            if not h.dense[:, -1].all():
                raise CodeValidationError(f"last column of {name} is not all ones")
        if self.k < 0:
            raise CodeValidationError(f"negative logical dimension k={self.k}")


def assemble_css(
    h1,
    h2,
    family: str = "QC",
    params: dict[str, Any] | None = None,
    claimed_d: int | None = None,
    name: str | None = None,
) -> CssCode:
    """Append an all-ones column to ``H_1`` and ``H_2`` (needs ``H_1 H_2^T = 1``)."""
    h1, h2 = as_bits(h1), as_bits(h2)
    if h1.shape[1] != h2.shape[1]:
        raise CodeValidationError(f"H_1 {h1.shape} and H_2 {h2.shape} differ in width")
    if h1.shape[0] == 0 or h2.shape[0] == 0 or h1.shape[1] == 0:
        raise CodeValidationError("degenerate code: empty component matrix")
    bad = all_ones_violation(h1, h2)
    if bad is not None:
        raise CodeValidationError(f"H_1 H_2^T is not all-ones: row pair {bad} has even overlap", row_pair=bad)
    code = CssCode(
        hx=BinaryMatrix(np.hstack([h1, np.ones((h1.shape[0], 1), dtype=np.uint8)])),
        hz=BinaryMatrix(np.hstack([h2, np.ones((h2.shape[0], 1), dtype=np.uint8)])),
        family=family,
        params=dict(params or {}),
        claimed_d=claimed_d,
        name=name,
    )
    code.validate()
    return code


# --------------------------------------------------------------------------
# Check matrix and Tanner graph
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuaternaryCheckMatrix:
    """``S = (w H_X ; w_bar H_Z)``; every row is kept even when dependent."""

    hx: BinaryMatrix
    hz: BinaryMatrix

    @cached_property
    def symbols(self) -> np.ndarray:
        s = np.vstack([self.hx.dense * OMEGA, self.hz.dense * OMEGA_BAR]).astype(np.uint8)
        s.setflags(write=False)
        return s

    @property
    def rows(self) -> list[list[tuple[int, int]]]:
        return [[(int(i), int(r[i])) for i in np.flatnonzero(r)] for r in self.symbols]

    @property
    def support(self) -> np.ndarray:
        return (self.symbols != 0).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite graph in flat edge-list form.

    Edges are numbered check-major: the edges of check ``j`` are
    ``cn_ptr[j]:cn_ptr[j+1]`` with increasing variable index.  ``vn_edges``
    lists edge ids grouped by variable (``vn_ptr``), by increasing check index.
    """

    n_vn: int
    n_cn: int
    cn_ptr: np.ndarray
    edge_vn: np.ndarray
    edge_cn: np.ndarray
    edge_sym: np.ndarray
    vn_ptr: np.ndarray
    vn_edges: np.ndarray

    @classmethod
    def from_symbols(cls, symbols) -> "TannerGraph":
        s = np.asarray(symbols, dtype=np.uint8)
        n_cn, n_vn = s.shape
        edge_cn, edge_vn = np.nonzero(s)  # row-major: check-major, vn ascending
        edge_sym = s[edge_cn, edge_vn]
        cn_ptr = np.zeros(n_cn + 1, dtype=np.int64)
        np.cumsum(np.bincount(edge_cn, minlength=n_cn), out=cn_ptr[1:])
        vn_edges = np.argsort(edge_vn, kind="stable")
        vn_ptr = np.zeros(n_vn + 1, dtype=np.int64)
        np.cumsum(np.bincount(edge_vn, minlength=n_vn), out=vn_ptr[1:])
        return cls(
            n_vn=n_vn,
            n_cn=n_cn,
            cn_ptr=cn_ptr,
            edge_vn=edge_vn.astype(np.int64),
            edge_cn=edge_cn.astype(np.int64),
            edge_sym=edge_sym.astype(np.int64),
            vn_ptr=vn_ptr,
            vn_edges=vn_edges.astype(np.int64),
        )

    @classmethod
    def from_binary(cls, h) -> "TannerGraph":
        return cls.from_symbols(as_bits(h) * ONE)

    @property
    def n_edges(self) -> int:
        return len(self.edge_vn)

    def cn_neighbors(self, j: int) -> list[tuple[int, int]]:
        sl = slice(self.cn_ptr[j], self.cn_ptr[j + 1])
        return list(zip(self.edge_vn[sl].tolist(), self.edge_sym[sl].tolist()))

    def vn_neighbors(self, i: int) -> list[tuple[int, int]]:
        e = self.vn_edges[self.vn_ptr[i] : self.vn_ptr[i + 1]]
        return list(zip(self.edge_cn[e].tolist(), self.edge_sym[e].tolist()))

    def symbols(self) -> np.ndarray:
        s = np.zeros((self.n_cn, self.n_vn), dtype=np.uint8)
        s[self.edge_cn, self.edge_vn] = self.edge_sym
        return s

    def without_vn(self, i: int) -> "TannerGraph":
        """Graph with variable ``i`` and its edges removed (indices shift down)."""
        s = self.symbols()
        return TannerGraph.from_symbols(np.delete(s, i, axis=1))


# --------------------------------------------------------------------------
# Syndromes and stabilizer membership
# --------------------------------------------------------------------------

def _as_errors(code: CssCode, e) -> np.ndarray:
    e = np.asarray(e, dtype=np.uint8)
    if e.shape[-1] != code.n:
        raise ValueError(f"error length {e.shape[-1]} != n={code.n}")
    if e.size and e.max() > 3:
        raise ValueError("error entries must be GF(4) symbols 0..3")
    return e


def compute_syndrome(code: CssCode, e) -> np.ndarray:
    """Syndrome bits ``z_j = XOR_i <e_i, S_ji>``; accepts one error or a batch (rows)."""
    e = _as_errors(code, e)
    alpha, beta = GF4_ALPHA[e], GF4_BETA[e]
    zx = matmul_gf2(np.atleast_2d(beta), code.hx.dense.T)
    zz = matmul_gf2(np.atleast_2d(alpha), code.hz.dense.T)
    z = np.hstack([zx, zz])
    return z[0] if e.ndim == 1 else z


def residual_in_stabilizer(code: CssCode, r) -> bool:
    """True iff the Pauli ``r`` belongs to the stabilizer group."""
    r = _as_errors(code, r)
    if r.ndim != 1:
        raise ValueError("expected a single error vector")
    return in_rowspace_gf2(GF4_ALPHA[r], code.hx) and in_rowspace_gf2(GF4_BETA[r], code.hz)


def residuals_in_stabilizer(code: CssCode, R) -> np.ndarray:
    """Batched membership test through the kernels of ``H_X`` and ``H_Z``.

    ``alpha`` lies in rowspace(H_X) iff it is orthogonal to every vector of
    ker(H_X), which turns membership into one matrix product per batch.
    """
    R = np.atleast_2d(_as_errors(code, R))
    a_ok = ~matmul_gf2(GF4_ALPHA[R], code._kernel_x.T).any(axis=1)
    b_ok = ~matmul_gf2(GF4_BETA[R], code._kernel_z.T).any(axis=1)
    return a_ok & b_ok


# --------------------------------------------------------------------------
# Cycles
# --------------------------------------------------------------------------

def girth(graph) -> float:
    """Length of the shortest cycle of a Tanner graph (``math.inf`` for a forest).

    Accepts a TannerGraph or a binary matrix.  Runs a BFS from every variable
    node; every cycle passes through one, so the minimum over those roots is
    exact.
    """
    if not isinstance(graph, TannerGraph):
        graph = TannerGraph.from_binary(graph)
    n_vn = graph.n_vn
    # vertices: variables 0..n_vn-1, checks n_vn..
    adj: list[list[int]] = [[] for _ in range(n_vn + graph.n_cn)]
    for v, c in zip(graph.edge_vn.tolist(), graph.edge_cn.tolist()):
        adj[v].append(n_vn + c)
        adj[n_vn + c].append(v)
    best = math.inf
    for root in range(n_vn):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w == parent[u]:
                    continue
                if w in dist:
                    best = min(best, dist[u] + dist[w] + 1)
                else:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
    return best


@dataclass
class FourCycleReport:
    """Row pairs of S whose supports share at least two columns.

    ``pairs`` holds (row, row) with ``sizes`` the intersection sizes;
    ``violations`` are the pairs that share two or more columns other than
    the appended one, i.e. 4-cycles that avoid it.
    """

    family: str
    m: int
    n: int
    pairs: np.ndarray
    sizes: np.ndarray
    violations: np.ndarray
    _support: np.ndarray = field(repr=False)

    def columns(self, r1: int, r2: int) -> list[int]:
        return np.flatnonzero(self._support[r1] & self._support[r2]).tolist()

    @property
    def paired_only(self) -> bool:
        """Every violation is a (j, j + m) pair of copies of one row."""
        v = self.violations
        return bool(np.all(v[:, 1] == v[:, 0] + self.m)) if len(v) else True

    @property
    def passed(self) -> bool:
        if self.family == "QC":
            return len(self.violations) == 0
        return self.paired_only

    def describe(self, limit: int = 10) -> list[str]:
        lines = [
            f"{len(self.pairs)} row pairs share >= 2 columns; "
            f"{len(self.violations)} of them share >= 2 columns besides v_{self.n - 1}"
        ]
        for r1, r2 in self.violations[:limit].tolist():
            lines.append(f"  rows ({r1}, {r2}) share columns {self.columns(r1, r2)}")
        if len(self.violations) > limit:
            lines.append(f"  ... {len(self.violations) - limit} more")
        return lines


def four_cycle_localization(code: CssCode) -> FourCycleReport:
    support = code.check_matrix.support
    A = support.astype(np.float32)
    overlap = A @ A.T
    last = A[:, -1]
    overlap_rest = overlap - np.outer(last, last)
    iu = np.triu(np.ones(overlap.shape, dtype=bool), k=1)
    pairs = np.argwhere(iu & (overlap >= 2))
    sizes = overlap[pairs[:, 0], pairs[:, 1]].astype(np.int64)
    violations = np.argwhere(iu & (overlap_rest >= 2))
    return FourCycleReport(
        family=code.family,
        m=code.m,
        n=code.n,
        pairs=pairs,
        sizes=sizes,
        violations=violations,
        _support=support.astype(bool),
    )
