"""Command-line interface: construct, validate, distance, simulate, sweep.

Exit codes: 0 success, 1 a validation check failed, 2 usage or input error.
Output files default to ``$CAMEL_QLDPC_OUTDIR`` (or the working directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bp import DECODERS
from .codes import PRESETS, build_code, preset_code
from .css import CssCode, all_ones_violation, four_cycle_localization, girth, twisted_violation
from .distance import DEFAULT_BUDGET, find_low_weight_logical
from .io import CodeFormatError, load_code, save_code
from .sim import SEED_DERIVATION, SUCCESS_MODES, SimulationSpec, run_sweep

OUTDIR_ENV = "CAMEL_QLDPC_OUTDIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _outdir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV) or ".")


def _positive_int(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _eps_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None


def _print_config(title: str, cfg: dict) -> None:
    print(f"# {title}")
    for k, v in cfg.items():
        print(f"#   {k} = {v}")
    sys.stdout.flush()


def resolve_code(ref: str, validate: bool = True) -> CssCode:
    """A preset name (q1..q5, e1..e5, pg1..pg5) or a descriptor path."""
    if ref.lower() in PRESETS:
        return preset_code(ref)
    path = Path(ref)
    if not path.exists():
        raise UsageError(f"{ref!r} is neither a preset ({', '.join(PRESETS)}) nor an existing descriptor")
    return load_code(path, validate=validate)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_construct(args) -> int:
    fam = args.family.upper()
    if fam == "QC":
        if args.p is None or args.sigma is None or args.s is not None:
            raise UsageError("--family qc needs --p and --sigma (and no --s)")
        params = {"p": args.p, "sigma": args.sigma}
        if args.ell1 is not None:
            params["ell1"] = args.ell1
    else:
        if args.s is None or args.p is not None or args.sigma is not None:
            raise UsageError(f"--family {args.family} needs --s (and no --p/--sigma)")
        params = {"s": args.s}
    out = Path(args.out) if args.out else None
    _print_config("construct", {"family": fam, **params, "out": out or f"{_outdir()}/<name>.json"})
    try:
        code = build_code(fam, params, name=args.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code.validate()
    name = code.name or (f"qc_p{args.p}_s{args.sigma}" if fam == "QC" else f"{fam.lower()}_s{args.s}")
    out = out or _outdir() / f"{name}.json"
    save_code(code, out)
    print(code.label)
    if code.claimed_d is not None:
        print(f"claimed d = {code.claimed_d} (preset {code.name})")
    print(f"wrote {out}")
    return EXIT_OK


def _check(ok: bool, label: str, detail: str = "") -> bool:
    print(f"{'PASS' if ok else 'FAIL'} {label}{': ' + detail if detail else ''}")
    return ok


def _recorded_k(ref: str) -> int | None:
    """k stated by the preset table or the descriptor file."""
    if ref.lower() in PRESETS:
        return PRESETS[ref.lower()].k
    try:
        return json.loads(Path(ref).read_text(encoding="utf-8")).get("k")
    except (OSError, ValueError, AttributeError):
        return None


def cmd_validate(args) -> int:
    _print_config("validate", {"code": args.code, "skip_cycles": args.skip_cycles})
    code = resolve_code(args.code, validate=False)
    print(f"code {code.name or args.code} family={code.family} {code.label}")
    results = []
    bad = twisted_violation(code.hx, code.hz)
    results.append(_check(bad is None, "twisted condition H_X H_Z^T = 0",
                          "" if bad is None else f"twisted condition violated at row pair {bad}"))
    last_ok = bool(code.hx.dense[:, -1].all() and code.hz.dense[:, -1].all())
    results.append(_check(last_ok, "appended column is all ones in H_X and H_Z"))
    h1, h2 = code.hx.dense[:, :-1], code.hz.dense[:, :-1]
    bad = all_ones_violation(h1, h2)
    results.append(_check(bad is None, "H_1 H_2^T is the all-ones matrix",
                          "" if bad is None else f"zero entry at row pair {bad}"))
    want = args.expect_k if args.expect_k is not None else _recorded_k(args.code)
    if want is not None:
        results.append(_check(code.k == want, f"k = {want}", f"computed k = {code.k}"))
    if args.skip_cycles:
        print("SKIP girth and 4-cycle checks")
    else:
        comp = code.stacked_components if code.family == "QC" else h1
        what = "(H_1 ; H_2)" if code.family == "QC" else "H_1"
        g = girth(comp)
        results.append(_check(g >= 6, f"girth of {what} >= 6", f"girth = {g}"))
        report = four_cycle_localization(code)
        rule = "no 4-cycle avoids the appended qubit" if code.family == "QC" else \
            "4-cycles avoiding the appended qubit only join rows (j, j+m)"
        results.append(_check(report.passed, rule))
        for line in report.describe(limit=args.limit):
            print(f"    {line}")
    ok = all(results)
    print("all checks passed" if ok else "validation FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_distance(args) -> int:
    _print_config("distance", {"code": args.code, "w_max": args.w_max, "budget": args.budget})
    code = resolve_code(args.code)
    try:
        found = find_low_weight_logical(code, args.w_max, budget=args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if found is None:
        print(f"no logical of weight <= {args.w_max}: d > {args.w_max}")
        d = None
    else:
        d, v, kind = found
        print(f"d = {d} ({kind} logical on qubits {np.flatnonzero(v).tolist()})")
    if code.claimed_d is None:
        return EXIT_OK
    if d is None:
        ok = code.claimed_d > args.w_max
    else:
        ok = d == code.claimed_d
    print(f"{'matches' if ok else 'DISAGREES WITH'} claimed d = {code.claimed_d}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    eps = [args.eps] if args.command == "simulate" else args.eps_list
    code = resolve_code(args.code)
    seed = args.seed if args.seed is not None else int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    try:
        spec = SimulationSpec(
            code=code,
            decoder=args.decoder,
            epsilons=tuple(eps),
            min_frame_errors=args.min_frame_errors,
            max_trials=args.max_trials,
            master_seed=seed,
            success_mode=args.success_mode,
            iterations=args.iters,
            max_seconds=args.max_seconds,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out) if args.out else _outdir() / f"{spec.code_name}_{args.decoder}.csv"
    _print_config(args.command, {
        "code": f"{spec.code_name} {code.label}",
        "decoder": spec.decoder,
        "epsilons": list(spec.epsilons),
        "min_frame_errors": spec.min_frame_errors,
        "max_trials": spec.max_trials,
        "master_seed": seed,
        "seed_derivation": SEED_DERIVATION,
        "success_mode": spec.success_mode,
        "iterations": spec.iterations,
        "threads": args.threads,
        "out": out,
    })

    def report(p):
        flag = " (upper bound only)" if p.upper_bound_only else ""
        flag += " (stopped by time limit)" if p.truncated else ""
        print(f"eps={p.epsilon:g} trials={p.trials} frame_errors={p.frame_errors} fer={p.fer:.6g} "
              f"ci95=[{p.ci95_low:.6g}, {p.ci95_high:.6g}] time={p.wall_time:.1f}s{flag}")

    result = run_sweep(spec, threads=args.threads, progress=report)
    result.write_csv(out)
    out.with_suffix(".meta.json").write_text(json.dumps(result.metadata(), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="camel-qldpc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and write its descriptor and alist files")
    p.add_argument("--family", required=True, choices=["qc", "eg", "pg", "QC", "EG", "PG"])
    p.add_argument("--p", type=int, help="prime (qc)")
    p.add_argument("--sigma", type=int, help="element of even multiplicative order mod p (qc)")
    p.add_argument("--ell1", type=int, help="rows in the top block (qc, default ell/2)")
    p.add_argument("--s", type=int, help="field exponent, q = 2^s, 1..5 (eg, pg)")
    p.add_argument("--name", help="code name stored in the descriptor")
    p.add_argument("--out", help=f"descriptor path (default ${OUTDIR_ENV}/<name>.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("validate", help="check the structural invariants of a code")
    p.add_argument("code", help="preset name or descriptor path")
    p.add_argument("--skip-cycles", action="store_true", help="skip girth and 4-cycle scans")
    p.add_argument("--expect-k", type=int, help="also require this logical dimension")
    p.add_argument("--limit", type=int, default=10, help="max offending row pairs to list")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", help="exhaustive search for logicals up to a weight")
    p.add_argument("code", help="preset name or descriptor path")
    p.add_argument("--w-max", type=int, required=True)
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="max candidate supports")
    p.set_defaults(func=cmd_distance)

    for name, helptext in (("simulate", "FER at one epsilon"), ("sweep", "FER over a list of epsilons")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--code", required=True, help="preset name or descriptor path")
        p.add_argument("--decoder", default="camel", help=f"one of {', '.join(DECODERS)}")
        if name == "simulate":
            p.add_argument("--eps", type=float, required=True)
        else:
            p.add_argument("--eps-list", type=_eps_list, required=True, help="comma-separated")
        p.add_argument("--min-frame-errors", type=_positive_int, default=300)
        p.add_argument("--max-trials", type=_positive_int, default=10**8)
        p.add_argument("--seed", type=_seed, help="64-bit master seed (default: random, printed)")
        p.add_argument("--iters", type=int, default=15, help="BP iteration cap")
        p.add_argument("--success-mode", choices=SUCCESS_MODES, default="degenerate")
        p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
        p.add_argument("--max-seconds", type=float, help="wall-clock guard per point")
        p.add_argument("--out", help=f"CSV path (default ${OUTDIR_ENV}/<code>_<decoder>.csv)")
        p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CodeFormatError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # CodeValidationError raised while loading a descriptor
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
