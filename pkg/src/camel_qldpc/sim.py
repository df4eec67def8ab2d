"""Monte Carlo frame-error-rate estimation over the depolarizing channel.

Trial ``t`` at the ``i``-th error probability draws its error from
``PCG64(SeedSequence(master_seed, spawn_key=(i, t)))``, so every trial is
reproducible on its own.  Trials are processed in fixed-size blocks that may
run on several threads; blocks are reduced in index order and the run stops
at the exact trial that reaches the frame-error target, so results do not
depend on the thread count.
"""

from __future__ import annotations

import csv
import io
import math
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist

import numpy as np

from .bp import DECODERS, DecoderConfig, make_decoder
from .css import CssCode, compute_syndrome, residual_in_stabilizer, residuals_in_stabilizer

CSV_HEADER = (
    "code", "decoder", "success_mode", "epsilon", "trials", "frame_errors",
    "fer", "ci95_low", "ci95_high", "iterations", "master_seed",
)
SUCCESS_MODES = ("degenerate", "strict")
SEED_DERIVATION = "numpy PCG64(SeedSequence(entropy=master_seed, spawn_key=(epsilon_index, trial_index)))"
Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class ChannelModel:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.75:
            raise ValueError(f"depolarizing probability {self.epsilon} outside [0, 0.75]")

    @property
    def thresholds(self) -> np.ndarray:
        """Cumulative bounds splitting [0, 1) into the four symbol events."""
        e = self.epsilon
        return np.array([1.0 - e, 1.0 - 2 * e / 3, 1.0 - e / 3])


def trial_seed(master_seed: int, eps_index: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(eps_index, trial))


def sample_error(channel: ChannelModel, n: int, seed) -> np.ndarray:
    """i.i.d. depolarizing error of length ``n``; ``seed`` is a SeedSequence or int."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    u = np.random.Generator(np.random.PCG64(seed)).random(n)
    return np.searchsorted(channel.thresholds, u, side="right").astype(np.uint8)


def _outcome_parts(outcome):
    """(estimate or None, declared_success) from any decoder result type."""
    if outcome is None:
        return None, False
    if isinstance(outcome, np.ndarray):
        return outcome, True
    if hasattr(outcome, "status"):
        return outcome.estimate, outcome.status == "success"
    return outcome.estimate, bool(outcome.satisfied)


def adjudicate(code: CssCode, e, outcome, mode: str = "degenerate") -> bool:
    """True when the trial is a frame error.

    ``outcome`` is an EnsembleOutcome, a BPResult, a bare estimate, or None
    for a declared failure.
    """
    if mode not in SUCCESS_MODES:
        raise ValueError(f"success mode must be one of {SUCCESS_MODES}, got {mode!r}")
    est, ok = _outcome_parts(outcome)
    if not ok or est is None:
        return True
    residual = np.asarray(e, dtype=np.uint8) ^ np.asarray(est, dtype=np.uint8)
    if mode == "strict":
        return bool(residual.any())
    return not residual_in_stabilizer(code, residual)


def adjudicate_batch(code: CssCode, E, estimates, declared_success, mode: str) -> np.ndarray:
    R = np.asarray(E, dtype=np.uint8) ^ np.asarray(estimates, dtype=np.uint8)
    ok = np.asarray(declared_success, dtype=bool).copy()
    if mode == "strict":
        ok &= ~R.any(axis=1)
    elif mode == "degenerate":
        if ok.any():
            ok[ok] = residuals_in_stabilizer(code, R[ok])
    else:
        raise ValueError(f"success mode must be one of {SUCCESS_MODES}, got {mode!r}")
    return ~ok


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = k / n
    den = 1.0 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return lo, hi


@dataclass(frozen=True)
class SimulationSpec:
    code: CssCode
    decoder: str = "camel"
    epsilons: tuple[float, ...] = ()
    min_frame_errors: int = 300
    max_trials: int = 10**8
    master_seed: int = 0
    success_mode: str = "degenerate"
    iterations: int = 15
    block_size: int = 256
    max_seconds: float | None = None

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {', '.join(DECODERS)}")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be >= 1")
        if self.max_trials < self.min_frame_errors:
            raise ValueError("max_trials must be >= min_frame_errors")
        if self.success_mode not in SUCCESS_MODES:
            raise ValueError(f"success mode must be one of {SUCCESS_MODES}")
        if self.iterations < 0 or self.block_size < 1:
            raise ValueError("iterations must be >= 0 and block_size >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        for e in self.epsilons:
            ChannelModel(e)
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))

    @property
    def code_name(self) -> str:
        return self.code.name or self.code.label


@dataclass
class PointResult:
    epsilon: float
    trials: int
    frame_errors: int
    ci95_low: float
    ci95_high: float
    wall_time: float
    master_seed: int
    success_mode: str
    upper_bound_only: bool = False
    truncated: bool = False
    frame_error_trials: list[int] = field(default_factory=list, repr=False)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0


@dataclass
class SimulationResult:
    spec: SimulationSpec
    points: list[PointResult]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for p in self.points:
            w.writerow([
                self.spec.code_name, self.spec.decoder, p.success_mode, f"{p.epsilon:.6g}", p.trials,
                p.frame_errors, f"{p.fer:.6g}", f"{p.ci95_low:.6g}", f"{p.ci95_high:.6g}",
                self.spec.iterations, p.master_seed,
            ])
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.csv_text(), encoding="utf-8")
        return path

    def metadata(self) -> dict:
        return {
            "code": self.spec.code_name,
            "decoder": self.spec.decoder,
            "seed_derivation": SEED_DERIVATION,
            "master_seed": self.spec.master_seed,
            "block_size": self.spec.block_size,
            "points": [
                {"epsilon": p.epsilon, "wall_time": p.wall_time, "upper_bound_only": p.upper_bound_only,
                 "truncated": p.truncated}
                for p in self.points
            ],
        }


def _run_block(spec: SimulationSpec, decoder, channel, eps_index: int, start: int, count: int) -> np.ndarray:
    n = spec.code.n
    E = np.empty((count, n), dtype=np.uint8)
    for b in range(count):
        E[b] = sample_error(channel, n, trial_seed(spec.master_seed, eps_index, start + b))
    Z = compute_syndrome(spec.code, E)
    res = decoder.decode_batch(Z, E)
    return adjudicate_batch(spec.code, E, res.estimates, res.declared_success, spec.success_mode)


def run_point(spec: SimulationSpec, epsilon: float, eps_index: int = 0, threads: int = 1) -> PointResult:
    """Run trials until ``min_frame_errors`` frame errors or ``max_trials`` trials."""
    channel = ChannelModel(epsilon)
    decoder = make_decoder(spec.decoder, spec.code, epsilon, DecoderConfig(max_iterations=spec.iterations))
    # build lazily cached graph data before any worker touches it
    for attr in ("reduced", "flips"):
        getattr(decoder, attr, None)
    t0 = time.perf_counter()
    trials = errors = 0
    error_trials: list[int] = []
    truncated = False

    starts = iter(range(0, spec.max_trials, spec.block_size))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        pending = deque()

        def submit():
            s = next(starts, None)
            if s is not None:
                count = min(spec.block_size, spec.max_trials - s)
                pending.append((s, pool.submit(_run_block, spec, decoder, channel, eps_index, s, count)))

        for _ in range(2 * max(1, threads)):
            submit()
        while pending:
            s, fut = pending.popleft()
            flags = fut.result()
            hits = np.flatnonzero(flags)
            need = spec.min_frame_errors - errors
            if len(hits) >= need:
                stop = int(hits[need - 1]) + 1
                trials += stop
                errors += need
                error_trials.extend((s + hits[:need]).tolist())
                break
            trials += len(flags)
            errors += len(hits)
            error_trials.extend((s + hits).tolist())
            if spec.max_seconds is not None and time.perf_counter() - t0 > spec.max_seconds:
                truncated = True
                break
            submit()
        for _, fut in pending:
            fut.cancel()

    lo, hi = wilson_interval(errors, trials)
    return PointResult(
        epsilon=float(epsilon),
        trials=trials,
        frame_errors=errors,
        ci95_low=lo,
        ci95_high=hi,
        wall_time=time.perf_counter() - t0,
        master_seed=spec.master_seed,
        success_mode=spec.success_mode,
        upper_bound_only=errors == 0,
        truncated=truncated,
        frame_error_trials=error_trials,
    )


def run_sweep(spec: SimulationSpec, threads: int = 1, progress=None) -> SimulationResult:
    points = []
    for i, eps in enumerate(spec.epsilons):
        p = run_point(spec, eps, eps_index=i, threads=threads)
        points.append(p)
        if progress is not None:
            progress(p)
    return SimulationResult(spec, points)
