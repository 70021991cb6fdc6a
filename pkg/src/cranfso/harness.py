"""Seeded Monte-Carlo campaigns: trials, sweeps, aggregation and result files.

Every trial draws its own fading block from ``trial_seed(master, trial)``.
Geometry sweeps (``d_fr``, ``kappa``) reuse that seed for every sweep value, so
the curves compare the same small-scale fading.  An ``alpha0`` sweep evaluates
the inner loop at fixed alpha0 on a descending grid and passes each solution
on as a continuation start for the next (smaller) alpha0.
"""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import rate
from .baselines import fso_sq, fso_vq
from .capacity import link_capacities
from .channel import GeometryConfig, SystemConfig, generate_realization, trial_seed
from .errors import ConfigError
from .optimizer import SolverSettings, aco_best_start, optimize_sum_rate, recover_alpha

SCHEMES = ("hybrid", "fso_vq", "fso_sq")
AXES = ("none", "alpha0", "d_fr", "kappa")
KAPPA_VALUES = (4.2e-3, 42e-3, 125e-3)
ALPHA0_GRID = tuple(np.round(np.linspace(0.0, 1.0, 21), 10))
D_FR_VALUES = (100.0, 200.0, 300.0, 400.0, 500.0, 600.0)
MAX_FAILURE_RATE = 0.05


@dataclass(frozen=True)
class ExperimentSpec:
    system: SystemConfig = field(default_factory=SystemConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    trials: int = 100
    seed: int = 0
    axis: str = "none"
    values: tuple = ()
    schemes: tuple = SCHEMES
    settings: SolverSettings = field(default_factory=SolverSettings)
    workers: int = 1

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ConfigError(f"spec.trials must be >= 1, got {self.trials!r}")
        if int(self.workers) < 1:
            raise ConfigError(f"spec.workers must be >= 1, got {self.workers!r}")
        if int(self.seed) < 0 or int(self.seed) >= 2**64:
            raise ConfigError(f"spec.seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.axis not in AXES:
            raise ConfigError(f"spec.axis must be one of {AXES}, got {self.axis!r}")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigError(f"spec.schemes must be a non-empty subset of {SCHEMES}, got {self.schemes!r}")
        values = tuple(float(v) for v in self.values)
        if self.axis == "none":
            values = ()
        elif not values:
            values = {"alpha0": ALPHA0_GRID, "d_fr": D_FR_VALUES, "kappa": KAPPA_VALUES}[self.axis]
        for v in values:
            if not math.isfinite(v):
                raise ConfigError(f"spec.values: {v!r} is not finite")
            if self.axis == "alpha0" and not 0.0 <= v <= 1.0:
                raise ConfigError(f"spec.values: alpha0 grid point {v!r} outside [0, 1]")
            if self.axis == "d_fr" and not v > 0:
                raise ConfigError(f"spec.values: d_fr {v!r} must be > 0")
            if self.axis == "kappa" and v < 0:
                raise ConfigError(f"spec.values: kappa {v!r} must be >= 0")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "schemes", tuple(s for s in SCHEMES if s in self.schemes))


@dataclass
class TrialRecord:
    trial: int
    seed: int
    sweep: float | None
    scheme: str
    c_sum_mbps: float
    alpha0: float
    alpha_m: tuple
    c_fso_mbps: tuple
    c_rf_mbps: tuple
    iters_gss: int
    iters_aco: int
    status: str
    wall_ms: float


@dataclass
class ExperimentResult:
    records: list
    summary: dict
    failures: int
    work_items: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.work_items if self.work_items else 0.0

    @property
    def passed(self) -> bool:
        return self.failure_rate <= MAX_FAILURE_RATE


def _geometry_for(spec, value):
    if spec.axis == "d_fr":
        return replace(spec.geometry, d_fr=value)
    if spec.axis == "kappa":
        return replace(spec.geometry, kappa=value)
    return spec.geometry


def _record(trial, seed, sweep, scheme, caps, c_sum, alpha0, alpha_m, iters_gss, iters_aco, status, t0):
    return TrialRecord(trial=trial, seed=seed, sweep=sweep, scheme=scheme,
                       c_sum_mbps=float(c_sum) / 1e6, alpha0=float(alpha0),
                       alpha_m=tuple(float(a) for a in alpha_m),
                       c_fso_mbps=tuple(float(c) / 1e6 for c in caps.c_fso),
                       c_rf_mbps=tuple(float(c) / 1e6 for c in caps.c_rf),
                       iters_gss=int(iters_gss), iters_aco=int(iters_aco), status=status,
                       wall_ms=1e3 * (time.perf_counter() - t0))


def _failed(trial, seed, sweep, scheme, M, t0, caps=None):
    nan = float("nan")
    return TrialRecord(trial=trial, seed=seed, sweep=sweep, scheme=scheme, c_sum_mbps=nan, alpha0=nan,
                       alpha_m=(nan,) * M,
                       c_fso_mbps=tuple(c / 1e6 for c in caps.c_fso) if caps else (nan,) * M,
                       c_rf_mbps=tuple(c / 1e6 for c in caps.c_rf) if caps else (nan,) * M,
                       iters_gss=0, iters_aco=0, status="failed",
                       wall_ms=1e3 * (time.perf_counter() - t0))


def _run_schemes(spec, trial, seed, sweep, geometry):
    """Records for every requested scheme on one (trial, geometry) pair."""
    system, settings, M = spec.system, spec.settings, spec.system.M
    out = []
    t0 = time.perf_counter()
    try:
        real = generate_realization(system, geometry, np.random.default_rng(seed), seed=seed)
        caps = link_capacities(real, system)
    except Exception:
        return [_failed(trial, seed, sweep, s, M, t0) for s in spec.schemes]
    vq = None
    for scheme in ("fso_sq", "fso_vq", "hybrid"):
        if scheme not in spec.schemes and not (scheme == "fso_vq" and "hybrid" in spec.schemes):
            continue
        t0 = time.perf_counter()
        try:
            if scheme == "fso_sq":
                res = fso_sq(real, caps, system)
                rec = _record(trial, seed, sweep, scheme, caps, res.c_sum, 1.0, np.zeros(M), 0, 0, "ok", t0)
            elif scheme == "fso_vq":
                vq = fso_vq(real, caps, system, settings)
                rec = _record(trial, seed, sweep, scheme, caps, vq.c_sum, 1.0, np.zeros(M), 0,
                              vq.diagnostics.get("iters_aco", 0), "ok", t0)
            else:
                res = optimize_sum_rate(real, caps, system, settings, fso_only=vq)
                rec = _record(trial, seed, sweep, scheme, caps, res.c_sum, res.allocation.alpha0,
                              res.allocation.alpha_m, res.diagnostics["iters_gss"],
                              res.diagnostics["iters_aco"], "ok", t0)
        except Exception:
            rec = _failed(trial, seed, sweep, scheme, M, t0, caps)
        if scheme in spec.schemes:
            out.append(rec)
    return out


def _run_alpha0_sweep(spec, trial, seed):
    system, settings, M = spec.system, spec.settings, spec.system.M
    records = []
    t0 = time.perf_counter()
    try:
        real = generate_realization(system, spec.geometry, np.random.default_rng(seed), seed=seed)
        caps = link_capacities(real, system)
    except Exception:
        return [_failed(trial, seed, a, s, M, t0) for a in spec.values for s in spec.schemes]
    baselines = {}
    for scheme, fn in (("fso_sq", lambda: fso_sq(real, caps, system)),
                       ("fso_vq", lambda: fso_vq(real, caps, system, settings))):
        if scheme in spec.schemes:
            t0 = time.perf_counter()
            try:
                res = fn()
                baselines[scheme] = (res.c_sum, res.diagnostics.get("iters_aco", 0), "ok",
                                     time.perf_counter() - t0)
            except Exception:
                baselines[scheme] = None
    for a0 in spec.values:
        for scheme, b in baselines.items():
            if b is None:
                records.append(_failed(trial, seed, a0, scheme, M, time.perf_counter(), caps))
            else:
                records.append(_record(trial, seed, a0, scheme, caps, b[0], 1.0, np.zeros(M), 0, b[1],
                                       b[2], time.perf_counter() - b[3]))
    if "hybrid" in spec.schemes:
        cs = rate.build_subset_constraints(caps, system.f_s, system.W_rf)
        warm = None
        for a0 in sorted(spec.values, reverse=True):
            t0 = time.perf_counter()
            try:
                res = aco_best_start(a0, real, caps, system, settings, cs, warm=warm)
                if res.feasible:
                    alloc = recover_alpha(a0, res.solution.D, real, caps, system).alpha_m
                    if a0 > 0:
                        warm = res.solution.D
                else:
                    alloc = np.zeros(M)
                rec = _record(trial, seed, a0, "hybrid", caps, res.c_sum, a0, alloc, 0, res.iterations,
                              res.status, t0)
            except Exception:
                rec = _failed(trial, seed, a0, "hybrid", M, t0, caps)
            records.append(rec)
    return records


def run_trial(spec, trial):
    """All records of one trial (every sweep value and scheme)."""
    seed = trial_seed(spec.seed, trial)
    if spec.axis == "alpha0":
        return _run_alpha0_sweep(spec, trial, seed)
    if spec.axis == "none":
        return _run_schemes(spec, trial, seed, None, spec.geometry)
    out = []
    for v in spec.values:
        out.extend(_run_schemes(spec, trial, seed, v, _geometry_for(spec, v)))
    return out


def _run_trial_star(args):
    return run_trial(*args)


def _sort_key(rec):
    return (-math.inf if rec.sweep is None else rec.sweep, rec.trial, SCHEMES.index(rec.scheme))


def summarize(records):
    """Mean c_sum and alpha0 per (sweep, scheme) over non-failed records."""
    groups = {}
    for r in records:
        groups.setdefault((r.sweep, r.scheme), []).append(r)
    summary = {}
    for key, recs in groups.items():
        good = [r for r in recs if r.status != "failed"]
        summary[key] = {
            "mean_c_sum_mbps": float(np.mean([r.c_sum_mbps for r in good])) if good else float("nan"),
            "mean_alpha0": float(np.mean([r.alpha0 for r in good])) if good else float("nan"),
            "trials": len(good),
            "excluded": len(recs) - len(good),
        }
    return summary


def run_experiment(spec):
    """Run every trial, sort the records and aggregate means.

    Failed (trial, sweep, scheme) items are kept as flagged records and left out
    of the means.  The result's ``passed`` is False when more than 5% failed.
    """
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            chunks = list(pool.map(_run_trial_star, [(spec, t) for t in range(spec.trials)]))
    else:
        chunks = [run_trial(spec, t) for t in range(spec.trials)]
    records = sorted((r for chunk in chunks for r in chunk), key=_sort_key)
    failures = sum(r.status == "failed" for r in records)
    return ExperimentResult(records=records, summary=summarize(records), failures=failures,
                            work_items=len(records))


# ---------------------------------------------------------------------------
# Result files

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def result_columns(M):
    return (["trial", "seed", "sweep", "scheme", "c_sum_mbps", "alpha0"]
            + [f"alpha_{m + 1}" for m in range(M)]
            + [f"c_fso_mbps_{m + 1}" for m in range(M)]
            + [f"c_rf_mbps_{m + 1}" for m in range(M)]
            + ["iters_gss", "iters_aco", "status", "wall_ms"])


def _flat(rec):
    row = {"trial": rec.trial, "seed": rec.seed, "sweep": rec.sweep, "scheme": rec.scheme,
           "c_sum_mbps": rec.c_sum_mbps, "alpha0": rec.alpha0}
    for name, vals in (("alpha", rec.alpha_m), ("c_fso_mbps", rec.c_fso_mbps), ("c_rf_mbps", rec.c_rf_mbps)):
        for m, v in enumerate(vals):
            row[f"{name}_{m + 1}"] = v
    row.update(iters_gss=rec.iters_gss, iters_aco=rec.iters_aco, status=rec.status, wall_ms=rec.wall_ms)
    return row


def _json_value(v):
    if isinstance(v, str) or v is None:
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    v = float(v)
    return None if math.isnan(v) else float(f"{v:.9g}")


def write_results(records, fmt, stream):
    """Serialize records to an open text stream as CSV or JSON."""
    if not records:
        raise ValueError("no records to emit")
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    cols = result_columns(len(records[0].alpha_m))
    rows = [_flat(r) for r in records]
    if fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_fmt(row[c]) if c not in ("scheme", "status") else row[c] for c in cols])
    else:
        json.dump([{c: _json_value(row[c]) for c in cols} for row in rows], stream, indent=1)
        stream.write("\n")


def emit_results(records, fmt, path):
    """Write records to ``path`` as CSV or JSON (same fields, 9 significant digits)."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_results(records, fmt, fh)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def _parse_cell(col, text):
    if col in ("scheme", "status"):
        return text
    if text == "":
        return None
    if col in ("trial", "seed", "iters_gss", "iters_aco"):
        return int(text)
    return float(text)


def load_results(path):
    """Read a CSV or JSON result file back into a list of flat dicts."""
    with open(path, encoding="utf-8") as fh:
        if str(path).endswith(".json"):
            rows = json.load(fh)
            return [{k: (float("nan") if v is None and k not in ("sweep",) else v) for k, v in r.items()}
                    for r in rows]
        reader = csv.reader(fh)
        cols = next(reader)
        return [{c: _parse_cell(c, t) for c, t in zip(cols, line)} for line in reader]
