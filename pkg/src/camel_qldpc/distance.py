"""Exhaustive low-weight logical search for CSS codes.

A binary vector ``v`` is a logical of one type when ``H v = 0`` and ``v`` is
outside the row space of the other check matrix ``G``.  The second condition
is ``K v != 0`` for a basis ``K`` of ker(G).  Each column ``i`` is packed into
machine words holding ``H[:, i]`` followed by ``K[:, i]``.  A weight-w
candidate is then the XOR of w column words: it is a logical iff the H-part
vanishes and the K-part does not.
"""

from __future__ import annotations

from math import comb

import numpy as np
from numba import njit

from .algebra import as_bits, nullspace_gf2
from .css import CssCode

DEFAULT_BUDGET = 5 * 10**8


def _column_words(h: np.ndarray, kernel_other: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pack columns into uint64 words; also return the mask of the H-part bits."""
    stacked = np.vstack([h, kernel_other]).astype(np.uint64)
    bits, n = stacked.shape
    n_words = max(1, -(-bits // 64))
    words = np.zeros((n, n_words), dtype=np.uint64)
    mask = np.zeros(n_words, dtype=np.uint64)
    for b in range(bits):
        w, off = divmod(b, 64)
        words[:, w] |= stacked[b] << np.uint64(off)
        if b < h.shape[0]:
            mask[w] |= np.uint64(1) << np.uint64(off)
    return words, mask


@njit(cache=True, nogil=True)
def _search_weight(words, mask, w):
    """First weight-w column set whose XOR is a logical, as a length-w index array."""
    n, nw = words.shape
    idx = np.empty(w, dtype=np.int64)
    acc = np.zeros((w + 1, nw), dtype=np.uint64)
    level = 0
    idx[0] = -1
    while level >= 0:
        idx[level] += 1
        if idx[level] > n - (w - level):
            level -= 1
            continue
        for k in range(nw):
            acc[level + 1, k] = acc[level, k] ^ words[idx[level], k]
        if level == w - 1:
            syn_zero = True
            ker_nonzero = False
            for k in range(nw):
                if acc[w, k] & mask[k]:
                    syn_zero = False
                    break
                if acc[w, k] & ~mask[k]:
                    ker_nonzero = True
            if syn_zero and ker_nonzero:
                return idx.copy()
        else:
            level += 1
            idx[level] = idx[level - 1]
    return np.empty(0, dtype=np.int64)


def find_low_weight_logical(code: CssCode, w_max: int, budget: int = DEFAULT_BUDGET):
    """Smallest-weight logical up to ``w_max`` as ``(weight, vector, type)``, or None.

    ``type`` is ``"alpha"`` for vectors in ker(H_Z) outside rowspace(H_X) and
    ``"beta"`` for ker(H_X) outside rowspace(H_Z).
    """
    n = code.n
    cost = 2 * sum(comb(n, w) for w in range(1, w_max + 1))
    if cost > budget:
        raise ValueError(f"enumerating weights <= {w_max} on n={n} needs {cost:.3g} candidates (> budget {budget:.3g})")
    hx, hz = as_bits(code.hx), as_bits(code.hz)
    sides = (
        ("beta",) + _column_words(hx, nullspace_gf2(hz)),
        ("alpha",) + _column_words(hz, nullspace_gf2(hx)),
    )
    for w in range(1, w_max + 1):
        for kind, words, mask in sides:
            hit = _search_weight(words, mask, w)
            if len(hit):
                v = np.zeros(n, dtype=np.uint8)
                v[hit] = 1
                return w, v, kind
    return None


def bounded_distance_search(code: CssCode, w_max: int, budget: int = DEFAULT_BUDGET) -> int | None:
    """Code distance if it is at most ``w_max``, else None (exhaustive)."""
    found = find_low_weight_logical(code, w_max, budget)
    return None if found is None else found[0]
