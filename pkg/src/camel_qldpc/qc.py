"""Quasi-cyclic base matrices whose two halves expand to ``H1 H2^T = 1``.

A generator ``sigma`` of even multiplicative order ``ell`` mod ``p`` gives the
subgroup ``{sigma^0, ..., sigma^(ell-1)}`` of F_p^*.  The base matrix is

    (1 | tau_0 M | tau_1 M | ... | tau_{T-1} M),   M[r, c] = sigma^((c - r) mod ell)

with one coset representative ``tau_i`` per coset of the subgroup.  Any two of
its rows differ by a permutation vector of F_p, which is what makes every
row split yield an all-ones product and keeps the expanded graph free of
4-cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import BinaryMatrix, PrimeField, cyc_expand, multiplicative_order


@dataclass(frozen=True)
class QcParams:
    p: int
    sigma: int
    ell: int
    T: int
    taus: tuple[int, ...]
    ell1: int
    ell2: int

    def __post_init__(self):
        if self.ell1 + self.ell2 != self.ell or self.ell1 < 1 or self.ell2 < 1:
            raise ValueError(f"row split ({self.ell1}, {self.ell2}) does not partition ell={self.ell}")


@dataclass(frozen=True)
class BaseMatrix:
    entries: np.ndarray = field(repr=False)
    params: QcParams

    @property
    def top(self) -> np.ndarray:
        return self.entries[: self.params.ell1]

    @property
    def bottom(self) -> np.ndarray:
        return self.entries[self.params.ell1 :]


def choose_coset_representatives(p: int, sigma: int, ell1: int | None = None) -> QcParams:
    """Coset representatives of ``<sigma>`` in F_p^*, smallest uncovered first."""
    F = PrimeField(p)
    sigma %= p
    if sigma == 0:
        raise ValueError("sigma must be a nonzero element of F_p")
    ell = multiplicative_order(sigma, p)
    if ell % 2:
        raise ValueError(f"ord({sigma}) mod {p} = {ell} is odd; the rows cannot be split in equal halves")
    subgroup = [F.pow(sigma, k) for k in range(ell)]
    covered: set[int] = set()
    taus: list[int] = []
    for tau in range(1, p):
        if tau in covered:
            continue
        taus.append(tau)
        covered.update(F.mul(tau, g) for g in subgroup)
    assert taus[0] == 1 and len(covered) == p - 1
    if ell1 is None:
        ell1 = ell // 2
    return QcParams(p=p, sigma=sigma, ell=ell, T=len(taus), taus=tuple(taus), ell1=ell1, ell2=ell - ell1)


def build_base_matrix(params: QcParams) -> BaseMatrix:
    p, sigma, ell = params.p, params.sigma, params.ell
    powers = np.array([pow(sigma, k, p) for k in range(ell)], dtype=np.int64)
    r = np.arange(ell)
    M = powers[(r[None, :] - r[:, None]) % ell]
    blocks = [np.ones((ell, 1), dtype=np.int64)] + [(tau * M) % p for tau in params.taus]
    entries = np.hstack(blocks)
    entries.setflags(write=False)
    return BaseMatrix(entries=entries, params=params)


def qc_pair(params: QcParams) -> tuple[BinaryMatrix, BinaryMatrix]:
    base = build_base_matrix(params)
    return cyc_expand(base.top, params.p), cyc_expand(base.bottom, params.p)


def is_permutation_vector(v, p: int) -> bool:
    v = np.asarray(v, dtype=np.int64) % p
    return v.shape == (p,) and np.array_equal(np.sort(v), np.arange(p))


def verify_lemma1(A, B, p: int) -> bool:
    """Exponent-domain test for ``Cyc(A) Cyc(B)^T == all-ones``.

    Holds iff for every row ``a`` of A and ``b`` of B the differences
    ``a_i - b_i mod p`` hit every element of F_p an odd number of times.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    B = np.atleast_2d(np.asarray(B, dtype=np.int64))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"column counts differ: {A.shape[1]} vs {B.shape[1]}")
    for a in A:
        for b in B:
            counts = np.bincount((a - b) % p, minlength=p)
            if np.any(counts % 2 == 0):
                return False
    return True


def row_differences_are_permutations(base: BaseMatrix) -> bool:
    e, p = base.entries, base.params.p
    return all(
        is_permutation_vector(e[i] - e[j], p) for i in range(len(e)) for j in range(i + 1, len(e))
    )
