"""Finite-field scalars and GF(2) matrix helpers.

GF(4) symbols are the integers 0..3 standing for ``0, 1, w, w_bar`` in that
order.  Read as two-bit polynomials in ``w`` this coding makes field addition a
plain XOR (``1 ^ 2 == 3`` is ``1 + w == w_bar``).  Each symbol also carries the
symplectic pair ``(alpha, beta)`` with ``0<->(0,0), w<->(1,0), w_bar<->(0,1),
1<->(1,1)``; the pair map is linear, so pair addition is XOR as well.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# --------------------------------------------------------------------------
# GF(4)
# --------------------------------------------------------------------------

ZERO, ONE, OMEGA, OMEGA_BAR = 0, 1, 2, 3
GF4_SYMBOLS = (ZERO, ONE, OMEGA, OMEGA_BAR)
GF4_NAMES = ("0", "1", "w", "w_bar")

GF4_ALPHA = np.array([0, 1, 1, 0], dtype=np.uint8)
GF4_BETA = np.array([0, 1, 0, 1], dtype=np.uint8)

_GF4_MUL = np.array(
    [
        [0, 0, 0, 0],
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
    ],
    dtype=np.uint8,
)
_GF4_INV = np.array([0, 1, 3, 2], dtype=np.uint8)


def _check_gf4(x: int) -> int:
    if x not in GF4_SYMBOLS:
        raise ValueError(f"not a GF(4) symbol: {x!r}")
    return int(x)


def gf4_add(x: int, y: int) -> int:
    return _check_gf4(x) ^ _check_gf4(y)


def gf4_mul(x: int, y: int) -> int:
    return int(_GF4_MUL[_check_gf4(x), _check_gf4(y)])


def gf4_inv(x: int) -> int:
    if _check_gf4(x) == ZERO:
        raise ZeroDivisionError("0 has no inverse in GF(4)")
    return int(_GF4_INV[x])


def gf4_from_pair(alpha, beta):
    """Symbol(s) with the given symplectic pair; works on scalars and arrays."""
    alpha = np.asarray(alpha, dtype=np.uint8)
    beta = np.asarray(beta, dtype=np.uint8)
    # (1,1)->1, (1,0)->2, (0,1)->3
    out = np.where(alpha & beta, ONE, np.where(alpha, OMEGA, np.where(beta, OMEGA_BAR, ZERO)))
    return out.astype(np.uint8) if out.ndim else int(out)


def trace_inner_product(x: int, y: int) -> int:
    """Trace inner product ``<x, y>``: 1 iff both are nonzero and distinct.

    Evaluated as the symplectic form ``alpha_x*beta_y ^ beta_x*alpha_y``.
    """
    x, y = _check_gf4(x), _check_gf4(y)
    return int((GF4_ALPHA[x] & GF4_BETA[y]) ^ (GF4_BETA[x] & GF4_ALPHA[y]))


# TRACE_TABLE[x, y] == <x, y>
TRACE_TABLE = (np.outer(GF4_ALPHA, GF4_BETA) ^ np.outer(GF4_BETA, GF4_ALPHA)).astype(np.uint8)


# --------------------------------------------------------------------------
# GF(p) and GF(2^s)
# --------------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def multiplicative_order(x: int, p: int) -> int:
    """Smallest ``l >= 1`` with ``x**l == 1 (mod p)``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x %= p
    if x == 0:
        raise ValueError("0 has no multiplicative order")
    acc, order = x, 1
    while acc != 1:
        acc = acc * x % p
        order += 1
    return order


class PrimeField:
    """The prime field F_p with elements 0..p-1."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def pow(self, x: int, e: int) -> int:
        return pow(x % self.p, e, self.p)

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, self.p - 2, self.p)

    def order(self, x: int) -> int:
        return multiplicative_order(x, self.p)


# Irreducible (and primitive) moduli, bit i = coefficient of x^i.
IRREDUCIBLE_POLYS = {
    1: 0b11,  # x + 1
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
}


class BinaryField2s:
    """GF(2^s) in the polynomial basis; elements are ints in ``[0, 2^s)``.

    Multiplication goes through precomputed tables built from the fixed
    modulus in :data:`IRREDUCIBLE_POLYS`.
    """

    def __init__(self, s: int):
        if s not in IRREDUCIBLE_POLYS:
            raise ValueError(f"GF(2^{s}) not supported; s must be in 1..5")
        self.s = s
        self.q = 1 << s
        self.modulus = IRREDUCIBLE_POLYS[s]
        q = self.q
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                mul[a, b] = self._poly_mulmod(a, b)
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        self.inv_table = inv

    def __repr__(self) -> str:
        return f"BinaryField2s(s={self.s})"

    def _poly_mulmod(self, a: int, b: int) -> int:
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & self.q:
                a ^= self.modulus
        return acc

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        acc = 1
        for _ in range(e):
            acc = self.mul(acc, a)
        return acc

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        acc, k = a, 1
        while acc != 1:
            acc = self.mul(acc, a)
            k += 1
        return k


# --------------------------------------------------------------------------
# Binary matrices
# --------------------------------------------------------------------------

def as_bits(m) -> np.ndarray:
    """Coerce to a 2-D uint8 array of zeros and ones."""
    if isinstance(m, BinaryMatrix):
        return m.dense
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return (a.astype(np.int64) & 1).astype(np.uint8)


class BinaryMatrix:
    """Immutable GF(2) matrix with dense, packed and sparse views.

    ``dense`` is the canonical uint8 form; ``packed`` (numpy.packbits along
    rows), ``row_support`` and ``col_support`` are derived lazily.
    """

    def __init__(self, data):
        a = as_bits(data).copy()
        a.setflags(write=False)
        self._dense = a

    @classmethod
    def from_row_support(cls, rows: Sequence[Iterable[int]], n_cols: int) -> "BinaryMatrix":
        a = np.zeros((len(rows), n_cols), dtype=np.uint8)
        for r, cols in enumerate(rows):
            for c in cols:
                a[r, c] ^= 1
        return cls(a)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def ones(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(np.ones((rows, cols), dtype=np.uint8))

    @property
    def dense(self) -> np.ndarray:
        return self._dense

    @property
    def shape(self) -> tuple[int, int]:
        return self._dense.shape

    @property
    def rows(self) -> int:
        return self._dense.shape[0]

    @property
    def cols(self) -> int:
        return self._dense.shape[1]

    @cached_property
    def packed(self) -> np.ndarray:
        return np.packbits(self._dense, axis=1)

    @cached_property
    def row_support(self) -> tuple[np.ndarray, ...]:
        return tuple(np.flatnonzero(r) for r in self._dense)

    @cached_property
    def col_support(self) -> tuple[np.ndarray, ...]:
        return tuple(np.flatnonzero(c) for c in self._dense.T)

    @property
    def row_weights(self) -> np.ndarray:
        return self._dense.sum(axis=1, dtype=np.int64)

    @property
    def col_weights(self) -> np.ndarray:
        return self._dense.sum(axis=0, dtype=np.int64)

    @property
    def T(self) -> "BinaryMatrix":
        return BinaryMatrix(self._dense.T)

    def __array__(self, dtype=None, copy=None):
        return self._dense if dtype is None else self._dense.astype(dtype)

    def __matmul__(self, other) -> "BinaryMatrix":
        return BinaryMatrix(matmul_gf2(self._dense, as_bits(other)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._dense, other._dense))

    def __hash__(self) -> int:
        return hash((self.shape, self.packed.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={int(self._dense.sum())})"

    def hstack(self, other) -> "BinaryMatrix":
        return BinaryMatrix(np.hstack([self._dense, as_bits(other)]))

    def vstack(self, other) -> "BinaryMatrix":
        return BinaryMatrix(np.vstack([self._dense, as_bits(other)]))

    def rank(self) -> int:
        return rank_gf2(self._dense)


def matmul_gf2(a, b) -> np.ndarray:
    """Matrix product over GF(2) (integer product reduced mod 2)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


def cpm(x: int, p: int) -> BinaryMatrix:
    """Circulant permutation matrix: identity with rows right-shifted by ``x``."""
    if not 0 <= x < p:
        raise ValueError(f"shift {x} out of range [0, {p})")
    a = np.zeros((p, p), dtype=np.uint8)
    r = np.arange(p)
    a[r, (r + x) % p] = 1
    return BinaryMatrix(a)


def cyc_expand(base, p: int) -> BinaryMatrix:
    """Replace every entry ``c`` of an exponent matrix by ``cpm(c, p)``."""
    base = np.asarray(base, dtype=np.int64)
    if base.ndim != 2:
        raise ValueError("base matrix must be 2-D")
    if base.size and (base.min() < 0 or base.max() >= p):
        raise ValueError(f"base matrix entries must lie in [0, {p})")
    J, L = base.shape
    a = np.zeros((J * p, L * p), dtype=np.uint8)
    r = np.arange(p)
    for i in range(J):
        for j in range(L):
            a[i * p + r, j * p + (r + base[i, j]) % p] = 1
    return BinaryMatrix(a)


def rref_gf2(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns ``(R, pivot_columns)``.

    ``R`` keeps only the nonzero rows.
    """
    a = as_bits(m).astype(bool)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        k = r + hits[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        mask = a[:, c].copy()
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r].astype(np.uint8), pivots


def rank_gf2(m) -> int:
    """GF(2) rank via elimination on bit-packed rows."""
    a = as_bits(m)
    if a.size == 0:
        return 0
    rows, cols = a.shape
    packed = np.packbits(a, axis=1)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        byte, bit = divmod(c, 8)
        col = (packed[rank:, byte] >> (7 - bit)) & 1
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        k = rank + hits[0]
        if k != rank:
            packed[[rank, k]] = packed[[k, rank]]
        below = rank + 1 + np.flatnonzero((packed[rank + 1 :, byte] >> (7 - bit)) & 1)
        packed[below] ^= packed[rank]
        rank += 1
    return rank


def nullspace_gf2(m) -> np.ndarray:
    """Basis of ``{v : m v = 0}`` as the rows of a uint8 array."""
    a = as_bits(m)
    cols = a.shape[1]
    R, pivots = rref_gf2(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = R[r, f]
    return basis


def in_rowspace_gf2(v, m) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    a = as_bits(m)
    v = np.asarray(v, dtype=np.uint8).ravel() & 1
    if v.shape[0] != a.shape[1]:
        raise ValueError(f"vector length {v.shape[0]} != matrix width {a.shape[1]}")
    R, pivots = rref_gf2(a)
    v = v.copy()
    for r, c in enumerate(pivots):
        if v[c]:
            v ^= R[r]
    return not v.any()
