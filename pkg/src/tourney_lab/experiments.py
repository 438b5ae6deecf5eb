"""Seeded Monte Carlo sweep engine with deterministic CSV output.

A sweep enumerates (n, gamma, trial) points for one experiment, draws each
trial from its own counter-based random stream, and writes one CSV row per
statistic.  Output bytes depend only on the configuration, never on thread
count or scheduling.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import detection, fourier, recovery, spectral
from .core import (
    ModelParams,
    RngStream,
    alignment,
    kendall_tau,
    sample_null,
    sample_planted_uniform,
    spearman_footrule,
)

__all__ = [
    "ConfigError",
    "EXPERIMENTS",
    "MalformedCsvError",
    "SweepConfig",
    "SweepResult",
    "run_sweep",
    "summarize",
    "write_summary",
]

CSV_HEADER = ["experiment", "n", "gamma", "trial", "statistic", "value"]
SUMMARY_HEADER = ["experiment", "n", "gamma", "statistic", "count", "mean", "sd", "success_rate"]
THREADS_ENV_VAR = "TOURNEY_LAB_THREADS"

# Null calibration for sweep verdicts: a draw is flagged planted when the
# wedge statistic exceeds this many null standard deviations.
WEDGE_NULL_SDS = 3.0


class ConfigError(ValueError):
    """Invalid sweep configuration."""


class MalformedCsvError(ValueError):
    """Input CSV does not follow the sweep schema."""


class SweepRow(NamedTuple):
    experiment: str
    n: int
    gamma: float
    trial: int
    statistic: str
    value: float


EXPERIMENTS = {
    "detect-wedge": ("wedge", "verdict"),
    "detect-spectral": ("spectral_scaled", "verdict"),
    "recover": ("kendall_error", "footrule_error", "pessimistic_error", "expected_error_bound"),
    "mle-compare": ("rbw_alignment", "mle_alignment", "alignment_ratio"),
    "chi2-table": ("chi2_exact", "chi2_fourier", "tv_exact"),
    "spectrum-verify": ("max_eigen_residual", "max_offdiag_inner_product"),
}

MAX_SPECTRUM_VERIFY_N = 1024


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: experiment name, grid, trial count, seed, and output path.

    ``gamma_spec`` is either an explicit list of values or a scaling rule
    ``{"c": c, "alpha": a}`` meaning gamma = c * n^(-alpha) at each n.
    ``epsilon`` is the spectral test margin (detect-spectral only).
    """

    experiment: str
    n_values: tuple
    gamma_spec: object
    trials: int
    seed: int
    threads: int = 1
    output_path: str = "sweep.csv"
    epsilon: float = 0.1

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {
            "experiment",
            "n_values",
            "gamma_spec",
            "trials",
            "seed",
            "threads",
            "output_path",
            "epsilon",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = {"experiment", "n_values", "gamma_spec", "trials", "seed"} - set(raw)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        cfg = cls(
            experiment=raw["experiment"],
            n_values=tuple(raw["n_values"]),
            gamma_spec=raw["gamma_spec"],
            trials=raw["trials"],
            seed=raw["seed"],
            threads=raw.get("threads", 1),
            output_path=raw.get("output_path", "sweep.csv"),
            epsilon=raw.get("epsilon", 0.1),
        )
        cfg.validate()
        return cfg

    def gammas_for(self, n: int) -> tuple:
        if isinstance(self.gamma_spec, (list, tuple)):
            return tuple(float(g) for g in self.gamma_spec)
        return (float(self.gamma_spec["c"]) * float(n) ** -float(self.gamma_spec["alpha"]),)

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; choose from {sorted(EXPERIMENTS)}"
            )
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError("threads must be a positive integer")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not self.n_values:
            raise ConfigError("n_values must be non-empty")
        for n in self.n_values:
            if not isinstance(n, int) or n < 2:
                raise ConfigError("every n must be an integer >= 2")
        if isinstance(self.gamma_spec, (list, tuple)):
            if not self.gamma_spec:
                raise ConfigError("gamma list must be non-empty")
        elif isinstance(self.gamma_spec, dict):
            if set(self.gamma_spec) != {"c", "alpha"}:
                raise ConfigError('gamma_spec object must have exactly the keys "c" and "alpha"')
            if not float(self.gamma_spec["c"]) > 0:
                raise ConfigError("gamma scaling requires c > 0")
            if not 0.0 <= float(self.gamma_spec["alpha"]) <= 1.0:
                raise ConfigError("gamma scaling requires alpha in [0, 1]")
        else:
            raise ConfigError("gamma_spec must be a list or a {c, alpha} object")
        if not isinstance(self.epsilon, (int, float)) or self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        for n in self.n_values:
            for gamma in self.gammas_for(n):
                self._validate_point(n, gamma)

    def _validate_point(self, n: int, gamma: float) -> None:
        if not 0.0 <= gamma <= 0.5:
            raise ConfigError(f"gamma={gamma} at n={n} falls outside [0, 1/2]")
        if self.experiment == "recover" and gamma > 0.25:
            raise ConfigError("recover sweeps require gamma <= 1/4 (error bound assumption)")
        if self.experiment == "mle-compare" and n > recovery.MAX_MLE_N:
            raise ConfigError(f"mle-compare requires n <= {recovery.MAX_MLE_N}")
        if self.experiment == "chi2-table" and n > fourier.MAX_DIVERGENCE_N:
            raise ConfigError(f"chi2-table requires n <= {fourier.MAX_DIVERGENCE_N}")
        if self.experiment == "spectrum-verify" and n > MAX_SPECTRUM_VERIFY_N:
            raise ConfigError(f"spectrum-verify requires n <= {MAX_SPECTRUM_VERIFY_N}")


@dataclass(frozen=True)
class SweepResult:
    rows: tuple


def _draw_tournament(n: int, gamma: float, rng: RngStream):
    if gamma == 0.0:
        return sample_null(n, rng)
    _, t = sample_planted_uniform(ModelParams(n, gamma), rng)
    return t


def _trial_values(task: tuple) -> list:
    """Statistics for one (experiment, n, gamma, trial) point."""
    experiment, n, gamma, seed, stream_index, epsilon = task
    rng = RngStream(seed, stream_index)

    if experiment == "detect-wedge":
        t = _draw_tournament(n, gamma, rng)
        f = detection.wedge_statistic(t)
        cutoff = WEDGE_NULL_SDS * math.sqrt(detection.wedge_null_moments(n)[1])
        return [("wedge", float(f)), ("verdict", 1.0 if f >= cutoff else 0.0)]

    if experiment == "detect-spectral":
        t = _draw_tournament(n, gamma, rng)
        scaled = detection.spectral_statistic(t) / math.sqrt(n)
        return [("spectral_scaled", scaled), ("verdict", 1.0 if scaled >= 2.0 + epsilon else 0.0)]

    if experiment == "recover":
        params = ModelParams(n, gamma)
        hidden, t = sample_planted_uniform(params, rng)
        estimate = recovery.ranking_by_wins(t)
        return [
            ("kendall_error", float(kendall_tau(hidden, estimate))),
            ("footrule_error", float(spearman_footrule(hidden, estimate))),
            ("pessimistic_error", float(recovery.pessimistic_error_statistic(t, hidden))),
            ("expected_error_bound", recovery.expected_error_bound(params)),
        ]

    if experiment == "mle-compare":
        params = ModelParams(n, gamma)
        _, t = sample_planted_uniform(params, rng)
        rbw = recovery.ranking_by_wins(t)
        rbw_value = alignment(rbw, t)
        mle = recovery.brute_force_mle(t)
        if mle.best_alignment == 0:
            ratio = 1.0  # all rankings align to zero, including RBW
        else:
            ratio = rbw_value / mle.best_alignment
        return [
            ("rbw_alignment", float(rbw_value)),
            ("mle_alignment", float(mle.best_alignment)),
            ("alignment_ratio", ratio),
        ]

    if experiment == "chi2-table":
        params = ModelParams(n, gamma)
        return [
            ("chi2_exact", fourier.chi2_exact(params)),
            ("chi2_fourier", fourier.chi2_fourier(params)),
            ("tv_exact", fourier.tv_exact(params)),
        ]

    if experiment == "spectrum-verify":
        a_matrix = spectral.build_A(n)
        vecs = np.empty((n, n), dtype=np.complex128)
        lams = np.empty(n)
        for i in range(1, n + 1):
            lams[i - 1], vecs[:, i - 1] = spectral.closed_form_eigenpair(n, i)
        residuals = np.linalg.norm(a_matrix @ vecs - vecs * lams[None, :], axis=0)
        gram = vecs.conj().T @ vecs
        np.fill_diagonal(gram, 0.0)
        return [
            ("max_eigen_residual", float(residuals.max())),
            ("max_offdiag_inner_product", float(np.abs(gram).max())),
        ]

    raise ConfigError(f"unknown experiment {experiment!r}")


def _tasks(config: SweepConfig) -> list:
    tasks = []
    stream_index = 0
    for n in config.n_values:
        for gamma in config.gammas_for(n):
            for trial in range(config.trials):
                tasks.append(
                    (
                        (config.experiment, n, gamma, config.seed, stream_index, config.epsilon),
                        trial,
                    )
                )
                stream_index += 1
    return tasks


def run_sweep(config: SweepConfig, threads: int | None = None) -> SweepResult:
    """Run every trial of the sweep and write the result CSV.

    ``threads`` overrides ``config.threads``; neither affects output bytes.
    Rows are sorted by (n, gamma, trial, statistic) before writing.
    """
    config.validate()
    workers = config.threads if threads is None else threads
    if workers < 1:
        raise ConfigError("threads must be a positive integer")
    tasks = _tasks(config)
    args = [task for task, _ in tasks]
    if workers == 1 or len(tasks) <= 1:
        results = [_trial_values(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_values, args))

    rows = []
    for ((experiment, n, gamma, _seed, _idx, _eps), trial), values in zip(tasks, results):
        for statistic, value in values:
            if not math.isfinite(value):
                raise RuntimeError(
                    f"non-finite value for {statistic} at n={n}, gamma={gamma}, trial={trial}"
                )
            rows.append(SweepRow(experiment, n, gamma, trial, statistic, float(value)))
    rows.sort(key=lambda r: (r.n, r.gamma, r.trial, r.statistic))

    _write_rows(Path(config.output_path), rows)
    return SweepResult(rows=tuple(rows))


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _write_rows(path: Path, rows: list) -> None:
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.experiment,
                    str(row.n),
                    _format_float(row.gamma),
                    str(row.trial),
                    row.statistic,
                    _format_float(row.value),
                ]
            )


def read_rows(path) -> list:
    """Parse a sweep CSV back into rows, checking the schema."""
    rows = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise MalformedCsvError(f"expected header {CSV_HEADER}, found {header}")
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(CSV_HEADER):
                raise MalformedCsvError(f"line {lineno}: expected {len(CSV_HEADER)} fields")
            try:
                rows.append(
                    SweepRow(
                        experiment=record[0],
                        n=int(record[1]),
                        gamma=float(record[2]),
                        trial=int(record[3]),
                        statistic=record[4],
                        value=float(record[5]),
                    )
                )
            except ValueError as exc:
                raise MalformedCsvError(f"line {lineno}: {exc}") from exc
    return rows


def summarize(result_path) -> list:
    """Aggregate a sweep CSV per (experiment, n, gamma, statistic).

    Returns rows of (experiment, n, gamma, statistic, count, mean, sd,
    success_rate) where sd is the population standard deviation and
    success_rate is the fraction of non-zero values (the mean verdict for
    0/1 statistics).
    """
    rows = read_rows(result_path)
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.experiment, row.n, row.gamma, row.statistic), []).append(row.value)
    summary = []
    for key in sorted(groups):
        values = np.asarray(groups[key])
        summary.append(
            (
                *key,
                values.size,
                float(values.mean()),
                float(values.std(ddof=0)),
                float((values != 0.0).mean()),
            )
        )
    return summary


def write_summary(summary: list, path) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for experiment, n, gamma, statistic, count, mean, sd, rate in summary:
            writer.writerow(
                [
                    experiment,
                    str(n),
                    _format_float(gamma),
                    statistic,
                    str(count),
                    _format_float(mean),
                    _format_float(sd),
                    _format_float(rate),
                ]
            )


def load_config_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return raw


def resolve_threads(config_threads: int, cli_threads: int | None) -> int:
    """Thread count precedence: CLI flag, then env var, then config value."""
    if cli_threads is not None:
        return cli_threads
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from exc
        if value < 1:
            raise ConfigError(f"{THREADS_ENV_VAR} must be positive")
        return value
    return config_threads
