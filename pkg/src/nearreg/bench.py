"""Seeded Monte-Carlo experiments comparing regularization methods.

Each trial draws its noise from its own stream ``(seed, (level_index,
trial_index))``, so results do not depend on execution order and can be
computed by a thread pool. Means are taken over trials in index order.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .analysis import relative_error
from .filters import RegMethod, solve_spectral, to_spectral
from .noise import BASES, RngStream, colored_noise, white_noise
from .problems import PROBLEMS, make_problem
from .select import (
    DiscrepancySpec,
    DiscrepancyUnattainable,
    optimal_params,
    shared_mu_pipeline,
)

__all__ = [
    "DEFAULT_METHODS",
    "ExperimentConfig",
    "Cell",
    "ExperimentReport",
    "ExperimentFailed",
    "run_experiment",
    "emit_report",
    "parse_report_csv",
]

DEFAULT_METHODS = ("frmod", "tikhonov", "shiftk", "tsvd")
MAX_EXCLUDED_FRACTION = 0.01
CSV_HEADER = ["noise_level", "method", "mean_rel_err", "std_rel_err", "runs", "excluded"]


class ExperimentFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "phillips"
    n: int = 200
    levels: tuple[float, ...] = (0.10, 0.01, 0.005, 0.001)
    noise: str = "white"
    alpha: float = 1.0
    basis: str = "svd"
    methods: tuple[RegMethod, ...] = tuple(RegMethod.parse(m) for m in DEFAULT_METHODS)
    runs: int = 1000
    eta: float = 1.0
    seed: int = 0
    mode: str = "discrepancy"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.n < 4:
            raise ValueError("n must be >= 4")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not all(0 < v < 1 for v in self.levels):
            raise ValueError("noise levels must lie in (0, 1)")
        if self.noise not in ("white", "colored"):
            raise ValueError(f"unknown noise kind {self.noise!r}")
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.mode not in ("discrepancy", "optimal"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")
        labels = [m.label for m in self.methods]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate methods")


@dataclass(frozen=True)
class Cell:
    mean: float
    std: float
    runs: int
    excluded: int


@dataclass
class ExperimentReport:
    levels: tuple[float, ...]
    methods: tuple[str, ...]
    cells: dict[tuple[float, str], Cell]
    # per-trial errors, NaN for excluded trials; not serialized
    samples: dict[tuple[float, str], np.ndarray] = field(default_factory=dict, repr=False)

    def mean(self, level: float, method: str) -> float:
        return self.cells[(level, method)].mean


class _Trials:
    """Everything a trial needs that does not change between trials."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.problem = make_problem(config.problem, config.n)
        self.svd = linalg.svd(self.problem.A)
        m = self.problem.A.shape[0]
        if config.basis == "svd":
            self.basis = self.svd.U
        elif config.basis == "dct":
            self.basis = linalg.dct_matrix(m)
        else:
            self.basis = None  # fresh random orthogonal matrix per trial

    def noise(self, level: float, rng: np.random.Generator) -> np.ndarray:
        b_true = self.problem.b_true
        if self.config.noise == "white":
            return white_noise(b_true, level, rng)
        basis = self.basis
        if basis is None:
            basis = linalg.random_orthogonal(b_true.shape[0], rng)
        return colored_noise(basis, self.config.alpha, level, b_true, rng)

    def __call__(self, job):
        li, ti = job
        cfg = self.config
        level = cfg.levels[li]
        rng = RngStream(cfg.seed, (li, ti)).generator()
        e = self.noise(level, rng)
        b = self.problem.b_true + e
        sp = to_spectral(self.svd, b)
        x_true = self.problem.x_true

        if cfg.mode == "optimal":
            return [optimal_params(sp, x_true, m).rel_error for m in cfg.methods]

        spec = DiscrepancySpec(epsilon=float(np.linalg.norm(e)), eta=cfg.eta)
        try:
            bundle = shared_mu_pipeline(sp, spec, cfg.methods)
        except DiscrepancyUnattainable:
            return None
        errs = []
        for m in cfg.methods:
            bound = bundle.methods[m.label]
            assert not bound.uses_mu or bound.mu == bundle.mu
            errs.append(relative_error(solve_spectral(sp, bound), x_true))
        return errs


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    trials = _Trials(config)
    jobs = [(li, ti) for li in range(len(config.levels)) for ti in range(config.runs)]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(trials, jobs))
    else:
        results = [trials(j) for j in jobs]

    labels = tuple(m.label for m in config.methods)
    cells, samples = {}, {}
    for li, level in enumerate(config.levels):
        block = results[li * config.runs : (li + 1) * config.runs]
        excluded = sum(r is None for r in block)
        if excluded > MAX_EXCLUDED_FRACTION * config.runs:
            raise ExperimentFailed(
                f"{excluded} of {config.runs} trials at level {level} had an unattainable discrepancy"
            )
        errs = np.array(
            [r if r is not None else [math.nan] * len(labels) for r in block], dtype=float
        ).reshape(config.runs, len(labels))
        for j, lab in enumerate(labels):
            col = errs[:, j]
            ok = col[~np.isnan(col)]
            std = float(np.std(ok, ddof=1)) if ok.size > 1 else 0.0
            mean = float(np.mean(ok)) if ok.size else math.nan
            cells[(level, lab)] = Cell(mean, std, int(ok.size), excluded)
            samples[(level, lab)] = col
    return ExperimentReport(config.levels, labels, cells, samples)


# output -----------------------------------------------------------------------
def _fmt(v: float) -> str:
    return repr(float(v))


def _emit_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for level in report.levels:
        for lab in report.methods:
            c = report.cells[(level, lab)]
            w.writerow([_fmt(level), lab, _fmt(c.mean), _fmt(c.std), c.runs, c.excluded])
    return buf.getvalue()


def _sci(v: float) -> str:
    if not math.isfinite(v):
        return "nan"
    mant, exp = f"{v:.2e}".split("e")
    return f"{mant}e{int(exp)}"


def _emit_markdown(report: ExperimentReport) -> str:
    lines = [
        "| noise level % | " + " | ".join(report.methods) + " |",
        "|---" * (len(report.methods) + 1) + "|",
    ]
    for level in report.levels:
        row = [report.cells[(level, lab)].mean for lab in report.methods]
        best = int(np.nanargmin(row)) if row and not all(map(math.isnan, row)) else -1
        cells = [f"**{_sci(v)}**" if i == best else _sci(v) for i, v in enumerate(row)]
        lines.append(f"| {100 * level:g} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit_report(report: ExperimentReport, format: str = "csv") -> str:
    if format == "csv":
        return _emit_csv(report)
    if format in ("md", "markdown"):
        return _emit_markdown(report)
    raise ValueError(f"unknown report format {format!r}")


def parse_report_csv(text: str) -> ExperimentReport:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("not a report CSV")
    levels, labels, cells = [], [], {}
    for lvl, lab, mean, std, runs, excl in rows[1:]:
        level = float(lvl)
        if level not in levels:
            levels.append(level)
        if lab not in labels:
            labels.append(lab)
        cells[(level, lab)] = Cell(float(mean), float(std), int(runs), int(excl))
    return ExperimentReport(tuple(levels), tuple(labels), cells)
