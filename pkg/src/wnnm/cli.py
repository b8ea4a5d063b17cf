"""Command-line front end.

Subcommands: ``norm``, ``prox``, ``jtau``, ``sdim`` and ``phase``. Each one
validates its inputs, runs the corresponding library routine with a fixed
seed and writes CSV or JSON (optionally an SVG chart). Exit status is 0 on
success, 1 on usage errors and 2 on numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from .cone import ProblemShape
from .errors import NumericalFailure, UsageError
from .linalg import ProxParams, WeightProfile, norms, weighted_nuclear_norm, wsvt_prox
from .phase import SolverConfig, crossing_and_window, isotonic_check, sweep_phase
from .sdim import GaussianSampleSet, TrialPlan, minimize_jtau

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected a comma-separated list of numbers, got {text!r}")


def _parse_grid(text: str) -> list[int]:
    """``"a:b:step"`` (inclusive) or a comma list of integers."""
    try:
        if ":" in text:
            a, b, step = (int(t) for t in text.split(":"))
            if step <= 0:
                raise UsageError("p grid step must be positive")
            return list(range(a, b + 1, step))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad p grid {text!r}")


def _weights(args, rank: int, total_length: int, convex: bool = True) -> WeightProfile:
    tail = 1.0 if args.tail_weight is None else args.tail_weight
    if args.weights == "ones":
        head = [1.0] * rank
    else:
        head = _parse_floats(args.weights, "--weights")
        if len(head) != rank:
            raise UsageError(f"--weights has {len(head)} entries, rank r is {rank}")
    return WeightProfile(tuple(head), tail, total_length, convex=convex)


def _shape(args) -> ProblemShape:
    for name in ("m", "n", "r"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")
    return ProblemShape(args.m, args.n, args.r)


_NOT_CONFIG = {"func", "out", "svg"}


def _config(args) -> dict:
    # Output destinations are excluded so identical runs produce identical bytes.
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}


def _csv(header: Sequence[str], rows, comments: Sequence[str]) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_matrix(args) -> np.ndarray:
    if args.input:
        try:
            a = np.loadtxt(args.input, delimiter=",", ndmin=2, comments="#")
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read matrix from {args.input}: {exc}")
        return a
    if args.m is None or args.n is None:
        raise UsageError("give --input or both --m and --n")
    if args.m < 1 or args.n < 1:
        raise UsageError("--m and --n must be positive")
    return np.random.default_rng(args.seed).standard_normal((args.m, args.n))


def cmd_norm(args):
    a = _load_matrix(args)
    w = _weights(args, args.r or 0, min(a.shape), convex=not args.allow_nonconvex)
    nrm = norms(a)
    out = {
        "frobenius": nrm.frobenius,
        "spectral": nrm.spectral,
        "nuclear": nrm.nuclear,
        "weighted_nuclear": weighted_nuclear_norm(a, w),
        "config": _config(args),
    }
    return _json(out), None


def cmd_prox(args):
    a = _load_matrix(args)
    w = _weights(args, args.r or 0, min(a.shape))
    x = wsvt_prox(a, ProxParams(args.lam), w)
    lines = [f"# config: {json.dumps(_config(args))}"]
    lines.extend(",".join(_fmt(v) for v in row) for row in x)
    return "\n".join(lines) + "\n", None


def _tau_grid(args, shape):
    if args.taus == "auto":
        top = 4.0 * (math.sqrt(shape.m) + math.sqrt(shape.n))
        return [top * i / 40 for i in range(41)]
    taus = _parse_floats(args.taus, "--taus")
    if not taus or any(t < 0 for t in taus):
        raise UsageError("--taus must be nonnegative")
    return taus


def cmd_jtau(args):
    shape = _shape(args)
    w = _weights(args, shape.r, shape.m)
    samples = GaussianSampleSet.build(shape, w, TrialPlan(args.seed, args.trials))
    points = [samples(t) for t in _tau_grid(args, shape)]
    rows = ([_fmt(p.tau), _fmt(p.mean), _fmt(p.stderr), str(p.n_trials)] for p in points)
    text = _csv(
        ["tau", "j_mean", "j_stderr", "n_trials"], rows, [f"config: {json.dumps(_config(args))}"]
    )
    chart = None
    if args.svg:
        from .plotting import jtau_chart

        chart = jtau_chart([p.tau for p in points], [p.mean for p in points], shape)
    return text, chart


def cmd_sdim(args):
    shape = _shape(args)
    w = _weights(args, shape.r, shape.m)
    plan = TrialPlan(args.seed, args.trials)
    samples = GaussianSampleSet.build(shape, w, plan)
    est = minimize_jtau(shape, w, plan, tol=args.tol, window_constant=args.window_constant,
                        samples=samples)
    out = {
        "m": shape.m,
        "n": shape.n,
        "r": shape.r,
        "head_weights": list(w.head),
        "tail_weight": w.tail_weight,
        "tau_star": est.tau_star,
        "delta_hat": est.delta_hat,
        "stderr": est.stderr,
        "window_constant": est.window_constant,
        "seed": args.seed,
        "trials": args.trials,
        "config": _config(args),
    }
    chart = None
    if args.svg:
        from .plotting import jtau_chart

        taus = [est.tau_max * i / 80 for i in range(81)]
        chart = jtau_chart(taus, [samples(t).mean for t in taus], shape, marker=est)
    return _json(out), chart


def cmd_phase(args):
    shape = _shape(args)
    w = _weights(args, shape.r, shape.m)
    cfg = SolverConfig(args.max_iters, args.feas_tol, args.success_tol)
    grid = _parse_grid(args.p_grid)
    res = sweep_phase(shape, w, grid, args.trials_per_p, cfg, args.seed,
                      sdim_trials=args.trials, window_constant=args.window_constant)
    cross = crossing_and_window(res)
    summary = {
        "tau_star": res.predicted.tau_star,
        "delta_hat": res.predicted.delta_hat,
        "stderr": res.predicted.stderr,
        "p50": cross.p50,
        "window_low": cross.window_low,
        "window_high": cross.window_high,
        "consistent": cross.consistent,
        "isotonic_ok": isotonic_check(res).passed,
    }
    rows = ([str(c.p), str(c.trials), str(c.successes), _fmt(c.rate)] for c in res.cells)
    text = _csv(
        ["p", "trials", "successes", "success_rate"],
        rows,
        [f"config: {json.dumps(_config(args))}", f"prediction: {json.dumps(summary)}"],
    )
    chart = None
    if args.svg:
        from .plotting import phase_chart

        chart = phase_chart(res, cross)
    return text, chart


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wnnm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser, required=True)

    def common(p, shape=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--svg", help="optional SVG chart path")
        p.add_argument("--weights", default="ones",
                       help="'ones' or comma-separated head weights (one per planted rank)")
        p.add_argument("--tail-weight", type=float, default=None)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--r", type=int, default=None if shape else 0)

    p = sub.add_parser("norm", help="Frobenius, spectral, nuclear and weighted nuclear norms")
    common(p, shape=False)
    p.add_argument("--input", help="CSV file holding the matrix (default: random Gaussian)")
    p.add_argument("--allow-nonconvex", action="store_true")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("prox", help="weighted singular value thresholding")
    common(p, shape=False)
    p.add_argument("--input")
    p.add_argument("--lam", type=float, required=True)
    p.set_defaults(func=cmd_prox)

    p = sub.add_parser("jtau", help="Monte Carlo J(tau) on a tau grid")
    common(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--taus", default="auto")
    p.set_defaults(func=cmd_jtau)

    p = sub.add_parser("sdim", help="statistical dimension estimate min_tau J(tau)")
    common(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--window-constant", type=float, default=1.0)
    p.set_defaults(func=cmd_sdim)

    p = sub.add_parser("phase", help="recovery success rate versus measurement count")
    common(p)
    p.add_argument("--p-grid", required=True, help="'start:stop:step' (inclusive) or comma list")
    p.add_argument("--trials-per-p", type=int, default=20)
    p.add_argument("--trials", type=int, default=10_000, help="Monte Carlo trials for the prediction")
    p.add_argument("--window-constant", type=float, default=1.0)
    p.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
    p.add_argument("--feas-tol", type=float, default=SolverConfig.feas_tol)
    p.add_argument("--success-tol", type=float, default=SolverConfig.success_tol)
    p.set_defaults(func=cmd_phase)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be positive")
        if not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        text, chart = args.func(args)
    except UsageError as exc:
        print(f"wnnm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"wnnm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if chart is not None:
        with open(args.svg, "w", newline="\n") as fh:
            fh.write(chart if chart.endswith("\n") else chart + "\n")
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
