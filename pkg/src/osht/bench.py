"""Conditioning and accuracy experiments with CSV output.

Random streams: trial ``t`` of method ``method`` at band-limit ``L`` draws
from ``numpy.random.default_rng([seed, L, METHOD_IDS[method], t])`` (PCG64
seeded through SeedSequence), so every cell is reproducible on its own.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean

import numpy as np

from .errors import OshtError, SingularSystemError
from .io import fmt_float
from .multipass import DEFAULT_MAX_PASSES, multipass_sht
from .sampling import METHODS, condition_report, design
from .transform import HarmonicCoeffs, _Tables, forward_sht, inverse_sht

__all__ = [
    "TrialConfig",
    "BenchRecord",
    "ConditionRow",
    "BenchError",
    "METHOD_IDS",
    "random_bandlimited",
    "trial_rng",
    "accuracy_experiment",
    "conditioning_experiment",
    "mean_errors",
    "write_cond_csv",
    "write_cond_max_csv",
    "write_accuracy_csv",
    "write_multipass_csv",
    "run_bench",
]

log = logging.getLogger(__name__)

METHOD_IDS = {"elimination": 0, "ascending": 1}


class BenchError(OshtError):
    pass


@dataclass
class TrialConfig:
    bandlimits: list
    trials: int = 10
    seed: int = 0
    methods: tuple = ("elimination",)
    multipass: bool = False
    max_passes: int = DEFAULT_MAX_PASSES

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.bandlimits or any(L < 2 for L in self.bandlimits):
            raise ValueError("bandlimits must be non-empty and all >= 2")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown methods: {bad}")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass
class BenchRecord:
    L: int
    method: str
    trial: int
    E_max: float
    E_max_k: list = field(default_factory=list)
    residual_k: list = field(default_factory=list)
    passes: int = 1
    wall_time: float = 0.0

    @property
    def E_max_final(self):
        return self.E_max_k[-1] if self.E_max_k else self.E_max


@dataclass(frozen=True)
class ConditionRow:
    L: int
    method: str
    m: int
    kappa: float


def trial_rng(seed, L, method, trial):
    return np.random.default_rng([seed, L, METHOD_IDS[method], trial])


def random_bandlimited(L, seed):
    """L^2 coefficients with re, im independently uniform on [0, 1).

    ``seed`` is anything ``numpy.random.default_rng`` accepts (an int or a
    sequence of non-negative ints); equal seeds give identical output.
    """
    rng = np.random.default_rng(seed)
    re = rng.random(L * L)
    im = rng.random(L * L)
    return HarmonicCoeffs(L, re + 1j * im)


def accuracy_experiment(config, schemes=None, skip_singular=False):
    """Round-trip accuracy per (L, method, trial).

    ``schemes`` may map (L, method) to a prebuilt scheme.  With
    ``skip_singular`` a cell whose scheme has a singular order is logged and
    left out instead of raising.
    """
    schemes = dict(schemes or {})
    records = []
    for L in config.bandlimits:
        for method in config.methods:
            scheme = schemes.get((L, method)) or design(L, method)
            tables = _Tables(scheme)
            cell = []
            for trial in range(config.trials):
                try:
                    cell.append(_run_trial(config, scheme, tables, trial))
                except SingularSystemError as exc:
                    if skip_singular:
                        log.warning("skipping L=%d method=%s: %s", L, method, exc)
                        cell = []
                        break
                    raise BenchError(f"L={L} method={method} trial={trial}: {exc}") from exc
                except OshtError as exc:
                    raise BenchError(f"L={L} method={method} trial={trial}: {exc}") from exc
            records.extend(cell)
    return records


def _run_trial(config, scheme, tables, trial):
    L, method = scheme.L, scheme.method
    truth = random_bandlimited(L, [config.seed, L, METHOD_IDS[method], trial])
    signal = inverse_sht(scheme, truth, _tables=tables)
    t0 = time.perf_counter()
    single = forward_sht(scheme, signal, _tables=tables)
    rec = BenchRecord(L, method, trial, single.max_abs_diff(truth))
    if config.multipass:
        res = multipass_sht(scheme, signal, config.max_passes, keep_iterates=True, _tables=tables)
        rec.E_max_k = [it.max_abs_diff(truth) for it in res.iterates]
        rec.residual_k = list(res.residual_history)
        rec.passes = res.passes
    rec.wall_time = time.perf_counter() - t0
    return rec


def mean_errors(records):
    """{(L, method): (mean E_max, mean final E_max^K)} over trials."""
    cells = {}
    for r in records:
        cells.setdefault((r.L, r.method), []).append(r)
    return {
        key: (fmean(r.E_max for r in rs), fmean(r.E_max_final for r in rs))
        for key, rs in cells.items()
    }


def conditioning_experiment(bandlimits, methods, schemes=None):
    """kappa_m for every (L, method, m); singular orders report +inf."""
    schemes = schemes or {}
    rows = []
    for L in bandlimits:
        for method in methods:
            scheme = schemes.get((L, method)) or design(L, method)
            report = condition_report(scheme, allow_singular=True)
            rows.extend(ConditionRow(L, method, m, float(k)) for m, k in enumerate(report.kappa))
    return rows


def _write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt_float(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def write_cond_csv(rows, path):
    _write(path, ["L", "method", "m", "kappa"], [(r.L, r.method, r.m, r.kappa) for r in rows])


def cond_max_rows(rows):
    best = {}
    for r in rows:
        key = (r.L, r.method)
        best[key] = max(best.get(key, r.kappa), r.kappa)
    return [(L, method, k) for (L, method), k in best.items()]


def write_cond_max_csv(rows, path):
    _write(path, ["L", "method", "kappa_max"], cond_max_rows(rows))


def write_accuracy_csv(records, path):
    _write(
        path,
        ["L", "method", "trial", "E_max", "passes", "E_max_final"],
        [(r.L, r.method, r.trial, r.E_max, r.passes, r.E_max_final) for r in records],
    )


def write_multipass_csv(records, path):
    rows = []
    for r in records:
        for k, (e, res) in enumerate(zip(r.E_max_k, r.residual_k), start=1):
            rows.append((r.L, r.method, r.trial, k, e, res))
    _write(path, ["L", "method", "trial", "pass", "E_max_k", "residual_max"], rows)


def run_bench(config, outdir, skip_singular=True):
    """Run both experiments and write the four CSV files into ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    schemes = {(L, m): design(L, m) for L in config.bandlimits for m in config.methods}
    cond = conditioning_experiment(config.bandlimits, config.methods, schemes)
    write_cond_csv(cond, outdir / "cond.csv")
    write_cond_max_csv(cond, outdir / "cond_max.csv")
    records = accuracy_experiment(config, schemes, skip_singular=skip_singular)
    write_accuracy_csv(records, outdir / "accuracy.csv")
    write_multipass_csv(records, outdir / "multipass.csv")
    return cond, records
