"""Compiled sum-product kernels (quaternary and binary), flooding schedule.

Graph arrays follow :class:`camel_qldpc.css.TannerGraph`.  A message on an
edge only matters through two numbers: the probability that the symbol
commutes with the edge's check entry and the probability that it
anticommutes.  Variable-to-check messages are kept as that pair; the check
update runs a forward/backward parity recursion over the pairs, which uses
only sums of products and so keeps tiny probabilities exact (the equivalent
``1 - prod(delta)`` form cancels).  Check-to-variable messages are stored as
the logs of the pair.
"""

from __future__ import annotations

import numpy as np
from numba import njit

FLOOR = 1e-300
LOG_FLOOR = np.log(FLOOR)

# COMM[s, a] = (-1) ** <a, s> for GF(4) symbols in the order 0, 1, w, w_bar
COMM = np.array(
    [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]
)
TRACE = ((1 - COMM) // 2).astype(np.uint8)


@njit(cache=True, nogil=True)
def _syndrome_ok(cn_ptr, edge_vn, edge_sym, est, z, trace):
    for j in range(len(cn_ptr) - 1):
        par = 0
        for e in range(cn_ptr[j], cn_ptr[j + 1]):
            par ^= trace[est[edge_vn[e]], edge_sym[e]]
        if par != z[j]:
            return False
    return True


@njit(cache=True, nogil=True)
def _normalize_log4(ext, prior_row, out):
    """exp-normalize four log-values into ``out``; uniform over the prior's support if all are -inf."""
    mx = -np.inf
    for a in range(4):
        if ext[a] > mx:
            mx = ext[a]
    total = 0.0
    if mx == -np.inf:
        for a in range(4):
            out[a] = 1.0 if prior_row[a] > -np.inf else 0.0
            total += out[a]
    else:
        for a in range(4):
            out[a] = np.exp(ext[a] - mx)
            total += out[a]
    for a in range(4):
        out[a] /= total


@njit(cache=True, nogil=True)
def _parity_pass(lo, hi, pc, pa, zbit, f0, f1, b0, b1, out_c, out_a):
    """For each edge of one check: P(rest has parity zbit), P(rest has the other parity)."""
    d = hi - lo
    f0[0] = 1.0
    f1[0] = 0.0
    for k in range(d):
        e = lo + k
        f0[k + 1] = f0[k] * pc[e] + f1[k] * pa[e]
        f1[k + 1] = f0[k] * pa[e] + f1[k] * pc[e]
    b0[d] = 1.0
    b1[d] = 0.0
    for k in range(d - 1, -1, -1):
        e = lo + k
        b0[k] = b0[k + 1] * pc[e] + b1[k + 1] * pa[e]
        b1[k] = b0[k + 1] * pa[e] + b1[k + 1] * pc[e]
    for k in range(d):
        even = f0[k] * b0[k + 1] + f1[k] * b1[k + 1]
        odd = f0[k] * b1[k + 1] + f1[k] * b0[k + 1]
        if zbit:
            even, odd = odd, even
        out_c[k] = even if even > FLOOR else FLOOR
        out_a[k] = odd if odd > FLOOR else FLOOR


@njit(cache=True, nogil=True)
def qbp_decode(
    cn_ptr,
    edge_vn,
    edge_sym,
    vn_ptr,
    vn_edges,
    z,
    log_prior,
    max_iter,
    early_stop,
    est,
    trace_v2c,
    trace_c2v,
    tracing,
):
    """Quaternary sum-product; writes the hard decision into ``est``.

    Returns ``(satisfied, iterations)``.  When ``tracing`` is set, the
    normalized variable-to-check messages after initialization and after
    every iteration go to ``trace_v2c[t]`` and the check-to-variable messages
    of iteration ``t`` (1-based) to ``trace_c2v[t - 1]``.
    """
    n_vn = len(vn_ptr) - 1
    n_cn = len(cn_ptr) - 1
    E = len(edge_vn)
    pc = np.empty(E)
    pa = np.empty(E)
    log_c = np.empty(E)
    log_a = np.empty(E)
    max_dc = 1
    for j in range(n_cn):
        max_dc = max(max_dc, cn_ptr[j + 1] - cn_ptr[j])
    max_dv = 1
    for i in range(n_vn):
        max_dv = max(max_dv, vn_ptr[i + 1] - vn_ptr[i])
    f0 = np.empty(max_dc + 1)
    f1 = np.empty(max_dc + 1)
    b0 = np.empty(max_dc + 1)
    b1 = np.empty(max_dc + 1)
    oc = np.empty(max_dc)
    oa = np.empty(max_dc)
    pre4 = np.empty((max_dv + 1, 4))
    ext = np.empty(4)
    msg = np.empty(4)

    # initial messages and hard decision from the priors alone
    for i in range(n_vn):
        _normalize_log4(log_prior[i], log_prior[i], msg)
        best = 0
        for a in range(1, 4):
            if log_prior[i, a] > log_prior[i, best]:
                best = a
        est[i] = best
        for t in range(vn_ptr[i], vn_ptr[i + 1]):
            e = vn_edges[t]
            s = edge_sym[e]
            c = 0.0
            an = 0.0
            for a in range(4):
                if COMM[s, a] > 0:
                    c += msg[a]
                else:
                    an += msg[a]
                if tracing:
                    trace_v2c[0, e, a] = msg[a]
            pc[e] = c
            pa[e] = an
    ok = _syndrome_ok(cn_ptr, edge_vn, edge_sym, est, z, TRACE)
    if ok and early_stop:
        return True, 0

    it = 0
    for it in range(1, max_iter + 1):
        # check nodes
        for j in range(n_cn):
            lo = cn_ptr[j]
            hi = cn_ptr[j + 1]
            _parity_pass(lo, hi, pc, pa, z[j], f0, f1, b0, b1, oc, oa)
            for k in range(hi - lo):
                e = lo + k
                c = oc[k]
                an = oa[k]
                log_c[e] = np.log(c)
                log_a[e] = np.log(an)
                if tracing:
                    tot = 2.0 * (c + an)
                    s = edge_sym[e]
                    for a in range(4):
                        trace_c2v[it - 1, e, a] = (c if COMM[s, a] > 0 else an) / tot
        # variable nodes
        for i in range(n_vn):
            lo = vn_ptr[i]
            hi = vn_ptr[i + 1]
            d = hi - lo
            for a in range(4):
                pre4[0, a] = 0.0
            for k in range(d):
                e = vn_edges[lo + k]
                s = edge_sym[e]
                for a in range(4):
                    pre4[k + 1, a] = pre4[k, a] + (log_c[e] if COMM[s, a] > 0 else log_a[e])
            best = 0
            bv = log_prior[i, 0] + pre4[d, 0]
            for a in range(1, 4):
                v = log_prior[i, a] + pre4[d, a]
                if v > bv:
                    bv = v
                    best = a
            est[i] = best
            suf0 = 0.0
            suf1 = 0.0
            suf2 = 0.0
            suf3 = 0.0
            for k in range(d - 1, -1, -1):
                e = vn_edges[lo + k]
                s = edge_sym[e]
                ext[0] = log_prior[i, 0] + (pre4[k, 0] + suf0)
                ext[1] = log_prior[i, 1] + (pre4[k, 1] + suf1)
                ext[2] = log_prior[i, 2] + (pre4[k, 2] + suf2)
                ext[3] = log_prior[i, 3] + (pre4[k, 3] + suf3)
                _normalize_log4(ext, log_prior[i], msg)
                c = 0.0
                an = 0.0
                for a in range(4):
                    if COMM[s, a] > 0:
                        c += msg[a]
                    else:
                        an += msg[a]
                    if tracing:
                        trace_v2c[it, e, a] = msg[a]
                pc[e] = c
                pa[e] = an
                suf0 += log_c[e] if COMM[s, 0] > 0 else log_a[e]
                suf1 += log_c[e] if COMM[s, 1] > 0 else log_a[e]
                suf2 += log_c[e] if COMM[s, 2] > 0 else log_a[e]
                suf3 += log_c[e] if COMM[s, 3] > 0 else log_a[e]
        ok = _syndrome_ok(cn_ptr, edge_vn, edge_sym, est, z, TRACE)
        if ok and early_stop:
            return True, it
    return ok, it


@njit(cache=True, nogil=True)
def qbp_batch(cn_ptr, edge_vn, edge_sym, vn_ptr, vn_edges, Z, log_prior, max_iter, early_stop, est, sat, iters):
    dummy = np.empty((0, 0, 4))
    for b in range(Z.shape[0]):
        ok, it = qbp_decode(
            cn_ptr, edge_vn, edge_sym, vn_ptr, vn_edges, Z[b], log_prior, max_iter, early_stop, est[b], dummy, dummy, False
        )
        sat[b] = ok
        iters[b] = it


@njit(cache=True, nogil=True)
def camel_batch(
    cn_ptr, edge_vn, edge_sym, vn_ptr, vn_edges, flips, Z, log_prior, max_iter, early_stop, cand, sat, iters, chosen
):
    """Four decimated decodings per syndrome, one per guess of the last qubit.

    The graph is the reduced graph (last qubit removed).  ``flips[g]`` is the
    syndrome correction ``<g, S_j,last>`` for guess ``g``.  ``cand[b, g]``
    receives the full-length estimate with the guess appended; ``chosen[b]``
    the satisfied path of least weight (-1 if none; ties keep path order).
    """
    n_red = len(vn_ptr) - 1
    dummy = np.empty((0, 0, 4))
    zr = np.empty(Z.shape[1], dtype=np.uint8)
    for b in range(Z.shape[0]):
        best = -1
        best_w = 1 << 60
        for g in range(4):
            for j in range(Z.shape[1]):
                zr[j] = Z[b, j] ^ flips[g, j]
            ok, it = qbp_decode(
                cn_ptr, edge_vn, edge_sym, vn_ptr, vn_edges, zr, log_prior, max_iter, early_stop,
                cand[b, g, :n_red], dummy, dummy, False,
            )
            cand[b, g, n_red] = g
            sat[b, g] = ok
            iters[b, g] = it
            if ok:
                w = 0
                for i in range(n_red + 1):
                    if cand[b, g, i] != 0:
                        w += 1
                if w < best_w:
                    best_w = w
                    best = g
        chosen[b] = best


@njit(cache=True, nogil=True)
def _parity_ok(cn_ptr, edge_vn, est, z):
    for j in range(len(cn_ptr) - 1):
        par = 0
        for e in range(cn_ptr[j], cn_ptr[j + 1]):
            par ^= est[edge_vn[e]]
        if par != z[j]:
            return False
    return True


@njit(cache=True, nogil=True)
def binary_bp_decode(cn_ptr, edge_vn, vn_ptr, vn_edges, z, log_prior, max_iter, early_stop, est):
    """Binary sum-product syndrome decoding; ``log_prior`` has shape (n, 2)."""
    n_vn = len(vn_ptr) - 1
    n_cn = len(cn_ptr) - 1
    E = len(edge_vn)
    q0 = np.empty(E)
    q1 = np.empty(E)
    l0 = np.empty(E)
    l1 = np.empty(E)
    max_dc = 1
    for j in range(n_cn):
        max_dc = max(max_dc, cn_ptr[j + 1] - cn_ptr[j])
    max_dv = 1
    for i in range(n_vn):
        max_dv = max(max_dv, vn_ptr[i + 1] - vn_ptr[i])
    f0 = np.empty(max_dc + 1)
    f1 = np.empty(max_dc + 1)
    b0 = np.empty(max_dc + 1)
    b1 = np.empty(max_dc + 1)
    oc = np.empty(max_dc)
    oa = np.empty(max_dc)
    pre0 = np.empty(max_dv + 1)
    pre1 = np.empty(max_dv + 1)

    for i in range(n_vn):
        a0 = log_prior[i, 0]
        a1 = log_prior[i, 1]
        mx = max(a0, a1)
        p0 = np.exp(a0 - mx)
        p1 = np.exp(a1 - mx)
        est[i] = 1 if a1 > a0 else 0
        for t in range(vn_ptr[i], vn_ptr[i + 1]):
            q0[vn_edges[t]] = p0 / (p0 + p1)
            q1[vn_edges[t]] = p1 / (p0 + p1)

    ok = _parity_ok(cn_ptr, edge_vn, est, z)
    if ok and early_stop:
        return True, 0
    it = 0
    for it in range(1, max_iter + 1):
        for j in range(n_cn):
            lo = cn_ptr[j]
            hi = cn_ptr[j + 1]
            _parity_pass(lo, hi, q0, q1, z[j], f0, f1, b0, b1, oc, oa)
            for k in range(hi - lo):
                l0[lo + k] = np.log(oc[k])
                l1[lo + k] = np.log(oa[k])
        for i in range(n_vn):
            lo = vn_ptr[i]
            hi = vn_ptr[i + 1]
            d = hi - lo
            pre0[0] = 0.0
            pre1[0] = 0.0
            for k in range(d):
                e = vn_edges[lo + k]
                pre0[k + 1] = pre0[k] + l0[e]
                pre1[k + 1] = pre1[k] + l1[e]
            est[i] = 1 if log_prior[i, 1] + pre1[d] > log_prior[i, 0] + pre0[d] else 0
            s0 = 0.0
            s1 = 0.0
            for k in range(d - 1, -1, -1):
                e = vn_edges[lo + k]
                a0 = log_prior[i, 0] + (pre0[k] + s0)
                a1 = log_prior[i, 1] + (pre1[k] + s1)
                if a0 == -np.inf and a1 == -np.inf:
                    q0[e] = 0.5
                elif a1 == -np.inf:
                    q0[e] = 1.0
                elif a0 == -np.inf:
                    q0[e] = 0.0
                elif a0 >= a1:
                    q0[e] = 1.0 / (1.0 + np.exp(a1 - a0))
                else:
                    q0[e] = np.exp(a0 - a1) / (1.0 + np.exp(a0 - a1))
                q1[e] = 1.0 - q0[e] if q0[e] < 0.5 else (np.exp(a1 - a0) / (1.0 + np.exp(a1 - a0)) if a1 > -np.inf and a0 > -np.inf else 1.0 - q0[e])
                s0 += l0[e]
                s1 += l1[e]
        ok = _parity_ok(cn_ptr, edge_vn, est, z)
        if ok and early_stop:
            return True, it
    return ok, it


@njit(cache=True, nogil=True)
def binary_bp_batch(cn_ptr, edge_vn, vn_ptr, vn_edges, Z, log_prior, max_iter, early_stop, est, sat, iters):
    for b in range(Z.shape[0]):
        ok, it = binary_bp_decode(cn_ptr, edge_vn, vn_ptr, vn_edges, Z[b], log_prior, max_iter, early_stop, est[b])
        sat[b] = ok
        iters[b] = it
