"""Quaternary belief propagation, decimation and the four-path ensemble.

Message vectors are length-4 probability arrays over ``(0, 1, w, w_bar)``.
:func:`vn_update` and :func:`cn_update` are the per-node rules in plain
numpy.  The decoders run the same rules in the compiled kernels of
``_kernels``.

Decimating the appended qubit to a guess ``g`` is done by graph reduction:
drop the qubit, then flip every syndrome bit ``j`` with ``<g, S_j,last> = 1``.
Pinning the qubit's prior to the indicator of ``g`` produces the same
messages (:func:`pinned_decode`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels as K
from .algebra import GF4_ALPHA, GF4_BETA, TRACE_TABLE, gf4_from_pair
from .css import CssCode, TannerGraph

SYMBOL_ORDER = (0, 1, 2, 3)


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 15
    schedule: str = "flooding"
    decimated_vn: int | None = None
    guess: int | None = None
    early_stop: bool = True

    def __post_init__(self):
        if self.schedule != "flooding":
            raise ValueError(f"only the flooding schedule is supported, got {self.schedule!r}")
        if (self.decimated_vn is None) != (self.guess is None):
            raise ValueError("decimated_vn and guess must be given together")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass
class BPResult:
    estimate: np.ndarray
    satisfied: bool
    iterations: int
    v2c_trace: np.ndarray | None = field(default=None, repr=False)
    c2v_trace: np.ndarray | None = field(default=None, repr=False)


@dataclass
class Candidate:
    guess: int
    estimate: np.ndarray
    satisfied: bool
    iterations: int

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.estimate))


@dataclass
class EnsembleOutcome:
    candidates: list[Candidate]
    chosen: int | None

    @property
    def status(self) -> str:
        return "failure" if self.chosen is None else "success"

    @property
    def estimate(self) -> np.ndarray | None:
        return None if self.chosen is None else self.candidates[self.chosen].estimate


# --------------------------------------------------------------------------
# Per-node rules
# --------------------------------------------------------------------------

def depolarizing_prior(eps: float) -> np.ndarray:
    if not 0.0 <= eps <= 0.75:
        raise ValueError(f"depolarizing probability {eps} outside [0, 0.75]")
    return np.array([1.0 - eps, eps / 3, eps / 3, eps / 3])


def indicator(symbol: int) -> np.ndarray:
    v = np.zeros(4)
    v[symbol] = 1.0
    return v


def _normalized(v: np.ndarray, prior: np.ndarray) -> np.ndarray:
    v = np.maximum(v, 0.0)
    s = v.sum()
    if s > 0:
        return v / s
    fallback = (np.asarray(prior) > 0).astype(float)
    return fallback / fallback.sum()


def vn_update(prior, incoming) -> list[np.ndarray]:
    """Outgoing variable-to-check messages, one per incoming edge.

    Entry ``a`` on edge ``j`` is proportional to ``prior[a]`` times the
    product of the other incoming messages at ``a``.  With no incoming edges
    the result is ``[prior]``.
    """
    prior = np.asarray(prior, dtype=float)
    incoming = [np.maximum(np.asarray(m, dtype=float), K.FLOOR) for m in incoming]
    if not incoming:
        return [_normalized(prior.copy(), prior)]
    out = []
    for j in range(len(incoming)):
        v = prior.copy()
        for k, m in enumerate(incoming):
            if k != j:
                v = v * m
        out.append(_normalized(v, prior))
    return out


def check_function(row_symbols, t, z_j: int) -> int:
    """1 iff ``XOR_i <t_i, S_i> == z_j`` over the row's support."""
    par = 0
    for s, x in zip(row_symbols, t):
        par ^= int(TRACE_TABLE[int(x), int(s)])
    return int(par == z_j)


def cn_update(row_symbols, syndrome_bit: int, incoming) -> np.ndarray:
    """Outgoing check-to-variable messages, shape ``(degree, 4)``.

    Each incoming message is reduced to (P(commutes), P(anticommutes)) with
    its check entry; a forward/backward parity recursion then gives, for
    every edge, the probability that the other symbols produce each syndrome
    parity.  Only sums of products appear, so tiny entries stay exact.
    """
    row_symbols = [int(s) for s in row_symbols]
    d = len(row_symbols)
    msgs = np.asarray(incoming, dtype=float).reshape(d, 4)
    anti = np.array([TRACE_TABLE[:, s] for s in row_symbols], dtype=bool)
    pa = np.where(anti, msgs, 0.0).sum(axis=1)
    pc = np.where(anti, 0.0, msgs).sum(axis=1)
    fwd = np.zeros((d + 1, 2))
    bwd = np.zeros((d + 1, 2))
    fwd[0] = bwd[d] = (1.0, 0.0)
    for k in range(d):
        fwd[k + 1] = (fwd[k, 0] * pc[k] + fwd[k, 1] * pa[k], fwd[k, 0] * pa[k] + fwd[k, 1] * pc[k])
    for k in range(d - 1, -1, -1):
        bwd[k] = (bwd[k + 1, 0] * pc[k] + bwd[k + 1, 1] * pa[k], bwd[k + 1, 0] * pa[k] + bwd[k + 1, 1] * pc[k])
    out = np.empty((d, 4))
    for i in range(d):
        rest = (fwd[i, 0] * bwd[i + 1, 0] + fwd[i, 1] * bwd[i + 1, 1],
                fwd[i, 0] * bwd[i + 1, 1] + fwd[i, 1] * bwd[i + 1, 0])
        v = np.maximum(np.where(anti[i], rest[syndrome_bit ^ 1], rest[syndrome_bit]), K.FLOOR)
        out[i] = v / v.sum()
    return out


# --------------------------------------------------------------------------
# Single decodings
# --------------------------------------------------------------------------

def _log_priors(priors, n: int) -> np.ndarray:
    p = np.asarray(priors, dtype=float)
    if p.shape == (4,):
        p = np.broadcast_to(p, (n, 4))
    if p.shape != (n, 4):
        raise ValueError(f"priors must have shape (4,) or ({n}, 4), got {p.shape}")
    with np.errstate(divide="ignore"):
        return np.ascontiguousarray(np.log(p))


def _graph_of(graph) -> TannerGraph:
    return graph.tanner_graph if isinstance(graph, CssCode) else graph


def bp_decode(graph, syndrome, priors, config: DecoderConfig = DecoderConfig(), trace: bool = False) -> BPResult:
    """Flooding quaternary sum-product on the Tanner graph of S.

    ``graph`` is a TannerGraph or a CssCode.  If ``config`` names a decimated
    variable, the call is routed to :func:`decimated_decode`.
    """
    g = _graph_of(graph)
    if config.decimated_vn is not None:
        return decimated_decode(g, syndrome, priors, config.guess, config)
    z = np.ascontiguousarray(syndrome, dtype=np.uint8)
    if z.shape != (g.n_cn,):
        raise ValueError(f"syndrome length {z.shape} != {g.n_cn} checks")
    lp = _log_priors(priors, g.n_vn)
    est = np.zeros(g.n_vn, dtype=np.uint8)
    T = config.max_iterations
    if trace:
        tv = np.full((T + 1, g.n_edges, 4), np.nan)
        tc = np.full((T, g.n_edges, 4), np.nan)
    else:
        tv = tc = np.empty((0, 0, 4))
    ok, it = K.qbp_decode(
        g.cn_ptr, g.edge_vn, g.edge_sym, g.vn_ptr, g.vn_edges, z, lp, T, config.early_stop, est, tv, tc, trace
    )
    return BPResult(est, bool(ok), int(it), tv if trace else None, tc if trace else None)


def decimation_flips(graph: TannerGraph, vn: int) -> np.ndarray:
    """``flips[g, j] = <g, S_j,vn>`` for every guess ``g``."""
    col = graph.symbols()[:, vn]
    return np.ascontiguousarray(TRACE_TABLE[:, col], dtype=np.uint8)


def decimated_decode(
    graph, syndrome, priors, guess: int, config: DecoderConfig = DecoderConfig(), trace: bool = False
) -> BPResult:
    """Decode with variable ``config.decimated_vn`` (default: last) fixed to ``guess``."""
    g = _graph_of(graph)
    vn = g.n_vn - 1 if config.decimated_vn is None else config.decimated_vn
    z = np.asarray(syndrome, dtype=np.uint8) ^ decimation_flips(g, vn)[guess]
    p = np.asarray(priors, dtype=float)
    if p.ndim == 2:
        p = np.delete(p, vn, axis=0)
    inner = DecoderConfig(config.max_iterations, config.schedule, None, None, config.early_stop)
    res = bp_decode(g.without_vn(vn), z, p, inner, trace=trace)
    res.estimate = np.insert(res.estimate, vn, guess).astype(np.uint8)
    return res


def pinned_decode(
    graph, syndrome, priors, guess: int, vn: int | None = None, config: DecoderConfig = DecoderConfig(), trace: bool = False
) -> BPResult:
    """Decimation by pinning the prior of ``vn`` to the indicator of ``guess`` on the full graph."""
    g = _graph_of(graph)
    vn = g.n_vn - 1 if vn is None else vn
    p = np.array(np.broadcast_to(np.asarray(priors, dtype=float), (g.n_vn, 4)))
    p[vn] = indicator(guess)
    inner = DecoderConfig(config.max_iterations, config.schedule, None, None, config.early_stop)
    return bp_decode(g, syndrome, p, inner, trace=trace)


# --------------------------------------------------------------------------
# Batch decoders used by the simulator
# --------------------------------------------------------------------------

@dataclass
class BatchResult:
    estimates: np.ndarray  # (B, n) GF(4) symbols
    declared_success: np.ndarray  # (B,) bool; False where the decoder declared failure
    iterations: np.ndarray


class QuaternaryBP:
    """Plain quaternary BP on the full graph of ``code``."""

    name = "bp"

    def __init__(self, code: CssCode, eps: float, config: DecoderConfig = DecoderConfig()):
        self.code, self.eps, self.config = code, eps, config
        self.graph = code.tanner_graph
        self.log_prior = _log_priors(depolarizing_prior(eps), code.n)

    def decode_batch(self, Z, errors=None) -> BatchResult:
        g = self.graph
        Z = np.ascontiguousarray(Z, dtype=np.uint8)
        est = np.zeros((len(Z), g.n_vn), dtype=np.uint8)
        sat = np.zeros(len(Z), dtype=np.bool_)
        it = np.zeros(len(Z), dtype=np.int64)
        K.qbp_batch(g.cn_ptr, g.edge_vn, g.edge_sym, g.vn_ptr, g.vn_edges, Z, self.log_prior,
                    self.config.max_iterations, self.config.early_stop, est, sat, it)
        return BatchResult(est, sat, it)


class _ReducedGraphMixin:
    code: CssCode

    @cached_property
    def reduced(self) -> TannerGraph:
        return self.code.tanner_graph.without_vn(self.code.n - 1)

    @cached_property
    def flips(self) -> np.ndarray:
        return decimation_flips(self.code.tanner_graph, self.code.n - 1)


class CamelDecoder(_ReducedGraphMixin):
    """Four decimated BP paths with minimum-weight selection among satisfied ones."""

    name = "camel"

    def __init__(self, code: CssCode, eps: float, config: DecoderConfig = DecoderConfig()):
        self.code, self.eps, self.config = code, eps, config
        self.log_prior = _log_priors(depolarizing_prior(eps), code.n - 1)

    def run(self, Z):
        g = self.reduced
        Z = np.ascontiguousarray(np.atleast_2d(Z), dtype=np.uint8)
        B = len(Z)
        cand = np.zeros((B, 4, self.code.n), dtype=np.uint8)
        sat = np.zeros((B, 4), dtype=np.bool_)
        it = np.zeros((B, 4), dtype=np.int64)
        chosen = np.zeros(B, dtype=np.int64)
        K.camel_batch(g.cn_ptr, g.edge_vn, g.edge_sym, g.vn_ptr, g.vn_edges, self.flips, Z, self.log_prior,
                      self.config.max_iterations, self.config.early_stop, cand, sat, it, chosen)
        return cand, sat, it, chosen

    def decode(self, syndrome) -> EnsembleOutcome:
        cand, sat, it, chosen = self.run(syndrome)
        cands = [Candidate(g, cand[0, g].copy(), bool(sat[0, g]), int(it[0, g])) for g in SYMBOL_ORDER]
        return EnsembleOutcome(cands, None if chosen[0] < 0 else int(chosen[0]))

    def decode_batch(self, Z, errors=None) -> BatchResult:
        cand, sat, it, chosen = self.run(Z)
        ok = chosen >= 0
        est = cand[np.arange(len(cand)), np.where(ok, chosen, 0)]
        est[~ok] = 0
        return BatchResult(est, ok, it.sum(axis=1))


class GenieDecoder(_ReducedGraphMixin):
    """Single decimated path fed the true value of the appended qubit."""

    name = "ga"

    def __init__(self, code: CssCode, eps: float, config: DecoderConfig = DecoderConfig()):
        self.code, self.eps, self.config = code, eps, config
        self.log_prior = _log_priors(depolarizing_prior(eps), code.n - 1)

    def decode_batch(self, Z, errors) -> BatchResult:
        g = self.reduced
        Z = np.ascontiguousarray(Z, dtype=np.uint8)
        truth = np.asarray(errors, dtype=np.uint8)[:, -1]
        Zr = np.ascontiguousarray(Z ^ self.flips[truth])
        est = np.zeros((len(Z), self.code.n), dtype=np.uint8)
        inner = np.zeros((len(Z), g.n_vn), dtype=np.uint8)
        sat = np.zeros(len(Z), dtype=np.bool_)
        it = np.zeros(len(Z), dtype=np.int64)
        K.qbp_batch(g.cn_ptr, g.edge_vn, g.edge_sym, g.vn_ptr, g.vn_edges, Zr, self.log_prior,
                    self.config.max_iterations, self.config.early_stop, inner, sat, it)
        est[:, :-1] = inner
        est[:, -1] = truth
        return BatchResult(est, sat, it)


class BinaryPairBP:
    """Two independent binary BP decoders, one per symplectic component.

    ``alpha`` (the w-part of each error symbol) is decoded on H_Z with the
    Z-block syndrome, ``beta`` on H_X with the X-block syndrome.  Each
    component is nonzero for two of the three Pauli errors, so its flip
    probability is ``2 eps / 3``.
    """

    name = "bp2"

    def __init__(self, code: CssCode, eps: float, config: DecoderConfig = DecoderConfig()):
        self.code, self.eps, self.config = code, eps, config
        pf = 2.0 * eps / 3.0
        with np.errstate(divide="ignore"):
            row = np.log(np.array([1.0 - pf, pf]))
        self.log_prior = np.ascontiguousarray(np.broadcast_to(row, (code.n, 2)))
        self.gx = TannerGraph.from_binary(code.hx)
        self.gz = TannerGraph.from_binary(code.hz)

    def _half(self, g: TannerGraph, Z):
        Z = np.ascontiguousarray(Z, dtype=np.uint8)
        est = np.zeros((len(Z), g.n_vn), dtype=np.uint8)
        sat = np.zeros(len(Z), dtype=np.bool_)
        it = np.zeros(len(Z), dtype=np.int64)
        K.binary_bp_batch(g.cn_ptr, g.edge_vn, g.vn_ptr, g.vn_edges, Z, self.log_prior,
                          self.config.max_iterations, self.config.early_stop, est, sat, it)
        return est, sat, it

    def decode_batch(self, Z, errors=None) -> BatchResult:
        Z = np.atleast_2d(Z)
        m = self.code.m  # X-block rows come first
        beta, sat_b, it_b = self._half(self.gx, Z[:, :m])
        alpha, sat_a, it_a = self._half(self.gz, Z[:, m:])
        return BatchResult(gf4_from_pair(alpha, beta), sat_a & sat_b, it_a + it_b)


DECODERS = {cls.name: cls for cls in (CamelDecoder, QuaternaryBP, GenieDecoder, BinaryPairBP)}


def make_decoder(name: str, code: CssCode, eps: float, config: DecoderConfig = DecoderConfig()):
    try:
        cls = DECODERS[name]
    except KeyError:
        raise ValueError(f"unknown decoder {name!r}; choose from {', '.join(DECODERS)}") from None
    return cls(code, eps, config)


# --------------------------------------------------------------------------
# Convenience entry points
# --------------------------------------------------------------------------

def camel_decode(code: CssCode, syndrome, eps: float, config: DecoderConfig = DecoderConfig()) -> EnsembleOutcome:
    return CamelDecoder(code, eps, config).decode(syndrome)


def bp2_decode(code: CssCode, syndrome, eps: float, config: DecoderConfig = DecoderConfig()) -> BPResult:
    res = BinaryPairBP(code, eps, config).decode_batch(np.atleast_2d(syndrome))
    return BPResult(res.estimates[0], bool(res.declared_success[0]), int(res.iterations[0]))


def split_pairs(e) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(e, dtype=np.uint8)
    return GF4_ALPHA[e], GF4_BETA[e]
