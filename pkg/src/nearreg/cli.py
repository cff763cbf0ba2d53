"""Command-line entry point: ``nearreg {bench,props,filters,problem}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import linalg
from .analysis import random_spectrum, verify_propositions
from .bench import DEFAULT_METHODS, ExperimentConfig, emit_report, run_experiment
from .filters import RegMethod, filter_factor_csv, to_spectral
from .noise import BASES
from .problems import PROBLEMS, make_problem, write_matrix_text
from .select import DiscrepancySpec, discrepancy_mu

__all__ = ["main", "build_parser", "parse_methods", "read_config_file"]


def parse_methods(text: str) -> list[RegMethod]:
    return [RegMethod.parse(tok) for tok in text.split(",") if tok.strip()]


def _levels(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def read_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _add_output(p):
    p.add_argument("--out", type=Path, default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nearreg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a Monte-Carlo experiment")
    b.add_argument("--config", type=Path, help="key = value file; flags override it")
    b.add_argument("--problem", choices=sorted(PROBLEMS), default="phillips")
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--noise-levels", type=_levels, default=(0.10, 0.01, 0.005, 0.001))
    b.add_argument("--noise", choices=("white", "colored"), default="white")
    b.add_argument("--alpha", type=float, default=1.0)
    b.add_argument("--basis", choices=BASES, default="svd")
    b.add_argument("--methods", type=parse_methods, default=parse_methods(",".join(DEFAULT_METHODS)))
    b.add_argument("--runs", type=int, default=1000)
    b.add_argument("--eta", type=float, default=1.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=("discrepancy", "optimal"), default="discrepancy")
    b.add_argument("--format", choices=("csv", "md"), default="csv")
    b.add_argument("--workers", type=int, default=1)
    _add_output(b)

    p = sub.add_parser("props", help="check the proposition suite on random spectra")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--verbose", action="store_true", help="print every claim, not only failures")
    _add_output(p)

    f = sub.add_parser("filters", help="dump filter factors for a test problem")
    f.add_argument("--problem", choices=sorted(PROBLEMS), default="phillips")
    f.add_argument("--n", type=int, default=200)
    f.add_argument("--mu", type=float, default=None,
                   help="regularization parameter; default: discrepancy value for --noise-level")
    f.add_argument("--noise-level", type=float, default=0.01)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--k", type=int, default=None, help="truncation index for tsvd")
    f.add_argument("--methods", type=parse_methods,
                   default=parse_methods("tikhonov,frmod,shiftk,scaled,scaledk,theta:0.5"))
    _add_output(f)

    q = sub.add_parser("problem", help="export a test problem as text matrices")
    q.add_argument("name", choices=sorted(PROBLEMS))
    q.add_argument("--n", type=int, default=200)
    q.add_argument("--outdir", type=Path, default=Path("."))
    return parser


def _apply_config(parser, sub_name, args_list):
    """Re-parse with defaults taken from ``--config`` when one is given."""
    args = parser.parse_args(args_list)
    cfg_path = getattr(args, "config", None)
    if cfg_path is None:
        return args
    sub = parser._subparsers._group_actions[0].choices[sub_name]  # noqa: SLF001
    actions = {a.dest: a for a in sub._actions}  # noqa: SLF001
    try:
        entries = read_config_file(cfg_path)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    defaults = {}
    for key, value in entries.items():
        act = actions.get(key)
        if act is None or key == "config":
            parser.error(f"unknown config key {key!r} in {cfg_path}")
        conv = act.type or str
        try:
            val = conv(value)
        except (TypeError, ValueError) as exc:
            parser.error(f"bad value for {key!r} in {cfg_path}: {exc}")
        if act.choices is not None and val not in act.choices:
            parser.error(f"bad value for {key!r} in {cfg_path}: {value!r}")
        defaults[key] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(args_list)


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_bench(args):
    config = ExperimentConfig(
        problem=args.problem,
        n=args.n,
        levels=args.noise_levels,
        noise=args.noise,
        alpha=args.alpha,
        basis=args.basis,
        methods=tuple(args.methods),
        runs=args.runs,
        eta=args.eta,
        seed=args.seed,
        mode=args.mode,
        workers=args.workers,
    )
    _write(emit_report(run_experiment(config), args.format), args.out)
    return 0


def _cmd_props(args):
    rng = np.random.default_rng(args.seed)
    lines, failures, checked = [], 0, 0
    for trial in range(args.trials):
        sigma = random_spectrum(rng, args.n)
        mu = float(np.exp(rng.uniform(np.log(sigma[-1]), np.log(sigma[0]))))
        for theta in (0.0, 0.25, 0.5, 1.0):
            report = verify_propositions(sigma, mu, theta)
            checked += len(report.results) - report.count("n/a")
            failures += len(report.failures)
            shown = report.results if args.verbose else report.failures
            lines += [f"trial={trial} theta={theta} {r.line()}" for r in shown]
    lines.append(f"checked={checked} failed={failures} verdict={'pass' if failures == 0 else 'fail'}")
    _write("\n".join(lines) + "\n", args.out)
    return 0 if failures == 0 else 1


def _cmd_filters(args):
    prob = make_problem(args.problem, args.n)
    fac = linalg.svd(prob.A)
    mu = args.mu
    if mu is None:
        from .noise import white_noise, RngStream

        e = white_noise(prob.b_true, args.noise_level, RngStream(args.seed))
        sp = to_spectral(fac, prob.b_true + e)
        mu = discrepancy_mu(sp, DiscrepancySpec(float(np.linalg.norm(e))))
    else:
        sp = to_spectral(fac, prob.b_true)
    methods = []
    for m in args.methods:
        if m.kind == "tsvd":
            if args.k is None:
                raise ValueError("tsvd needs --k")
            methods.append(m.with_k(args.k))
        else:
            methods.append(m.with_mu(mu))
    _write(filter_factor_csv(sp, methods), args.out)
    return 0


def _cmd_problem(args):
    prob = make_problem(args.name, args.n)
    args.outdir.mkdir(parents=True, exist_ok=True)
    for suffix, arr in (("A", prob.A), ("x_true", prob.x_true), ("b_true", prob.b_true)):
        with open(args.outdir / f"{prob.name}_{args.n}_{suffix}.txt", "w") as fh:
            write_matrix_text(fh, arr)
    return 0


_COMMANDS = {"bench": _cmd_bench, "props": _cmd_props, "filters": _cmd_filters, "problem": _cmd_problem}


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.command == "bench":
        args = _apply_config(parser, "bench", argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"nearreg {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
