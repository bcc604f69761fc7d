"""Orchestrated experiment sweeps and their statistical summaries.

A sweep walks a population grid at a fixed range exponent, runs the
simulators from ``world`` under the deterministic stream contract, and
reduces the samples to tables or a log-log regression.  Nothing here
draws randomness of its own: every trial stream is derived from the
plan's master seed, so identical plans produce byte-identical outputs
whatever the worker count.

The goodness-of-fit harness places the probe node at the chart center,
where the neighbor count over the remaining nodes is exactly binomial;
a uniformly placed probe mixes position-dependent in-range
probabilities and is visibly overdispersed at large sample sizes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from .analytics import format_real, p_hat_bounds_iid, p_hat_bounds_levy, \
    p_out_bounds, cosine_diff_tail_constants, ccdf_geometric_bound, dumps_stable
from .flight import FlightLaw
from .world import (
    MODEL_IID,
    MODEL_LEVY,
    SALT_GOF,
    ModelConfig,
    pair_meeting_times,
    scheme_delays,
    trial_stream,
)

__all__ = [
    "SweepPlan",
    "PointStat",
    "ScalingFit",
    "GofResult",
    "fit_loglog",
    "run_delay_sweep",
    "run_ccdf_sweep",
    "run_dominance_check",
    "sample_neighbor_counts",
    "neighbor_binomial_gof",
    "write_rows_csv",
    "write_json",
]

# Placements per goodness-of-fit block; fixed so chunking never shows up
# in the sampled counts.
_GOF_BLOCK = 1024

_CENSORED_LIMIT = 0.01


@dataclass(frozen=True)
class SweepPlan:
    """One experiment: a population grid at range exponent beta.

    The grid must be strictly increasing; regressions need at least
    three points but single-point plans are valid for tables.  horizon
    of None defers to the model default.
    """

    n_grid: tuple[int, ...]
    beta: float
    model: str
    law: Optional[FlightLaw] = None
    trials_per_point: int = 1000
    horizon: Optional[int] = None
    master_seed: int = 0x5EED_CAFE

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if not grid:
            raise ValueError("n_grid must be nonempty")
        if any(n < 2 for n in grid):
            raise ValueError("populations must be at least 2")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        if not (0.0 <= self.beta <= 0.25):
            raise ValueError("beta must be in [0, 0.25]")
        if self.model not in (MODEL_LEVY, MODEL_IID):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == MODEL_LEVY and self.law is None:
            raise ValueError("heavy-flight plans need a FlightLaw")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be positive")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be positive")

    def config_for(self, n: int, point_index: int,
                   law: Optional[FlightLaw] = None) -> ModelConfig:
        # Distinct master seeds keep grid points statistically independent
        # while staying a pure function of the plan.
        return ModelConfig(
            n=n, beta=self.beta, model=self.model,
            law=law if law is not None else self.law,
            horizon_slots=self.horizon,
            master_seed=self.master_seed + point_index,
        )


@dataclass(frozen=True)
class PointStat:
    """Per-grid-point sample summary."""

    n: int
    r: float
    mean: float
    stderr: float
    median: float
    trials: int
    censored_fraction: float


@dataclass(frozen=True)
class ScalingFit:
    """Log-log OLS of mean delay against population size.

    slope and friends are NaN when valid is False, which happens when
    any grid point censored at least 1% of its trials; the per-point
    data is still carried so the failure is inspectable.
    """

    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float
    points: tuple[PointStat, ...]
    valid: bool = True
    note: str = ""

    def __post_init__(self):
        if self.valid and not (-1e-12 <= self.r_squared <= 1.0 + 1e-12):
            raise ValueError("r_squared must be in [0, 1]")

    def point_rows(self) -> list[dict]:
        return [
            {
                "n": p.n, "r": p.r, "trials": p.trials, "mean": p.mean,
                "stderr": p.stderr, "median": p.median,
                "censored_fraction": p.censored_fraction,
            }
            for p in self.points
        ]

    def summary(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "slope_stderr": self.slope_stderr,
            "valid": self.valid,
            "note": self.note,
            "points": self.point_rows(),
        }


class GofResult(NamedTuple):
    chi2: float
    dof: int
    passed: bool


def fit_loglog(points: Sequence[tuple]) -> ScalingFit:
    """Ordinary least squares of ln(mean) on ln(n).

    points are (n, mean, stderr) triples; all means must be positive.
    R squared is defined as 1 for a constant response, where the zero
    slope fits exactly.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 points")
    ns = np.array([float(p[0]) for p in points])
    means = np.array([float(p[1]) for p in points])
    errs = np.array([float(p[2]) for p in points])
    if np.any(means <= 0.0):
        raise ValueError("means must be positive")
    x = np.log(ns)
    y = np.log(means)
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise ValueError("points must span more than one n")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ssr = float(np.sum(resid ** 2))
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if sst == 0.0 else 1.0 - ssr / sst
    se = math.sqrt(ssr / (len(points) - 2) / sxx) if len(points) > 2 else math.nan
    stats_pts = tuple(
        PointStat(n=int(n), r=math.nan, mean=float(m), stderr=float(e),
                  median=math.nan, trials=0, censored_fraction=0.0)
        for n, m, e in zip(ns, means, errs))
    return ScalingFit(slope=slope, intercept=intercept,
                      r_squared=min(max(r2, 0.0), 1.0),
                      slope_stderr=se, points=stats_pts)


def run_delay_sweep(plan: SweepPlan, workers: int = 1) -> ScalingFit:
    """Mean relay-scheme delay across the population grid, fitted log-log.

    Censored trials are excluded from the mean but counted; a point with
    1% or more censoring invalidates the fit rather than biasing it, and
    the per-point data is returned either way.
    """
    if len(plan.n_grid) < 3:
        raise ValueError("regression sweeps need at least 3 grid points")
    if plan.trials_per_point < 1000:
        raise ValueError("regression sweeps need at least 10^3 trials per point")
    pts = []
    bad = []
    for i, n in enumerate(plan.n_grid):
        cfg = plan.config_for(n, i)
        _, _, delays = scheme_delays(cfg, plan.trials_per_point, workers=workers)
        finite = delays[np.isfinite(delays)]
        censored = 1.0 - finite.size / delays.size
        mean = float(finite.mean()) if finite.size else math.nan
        se = float(finite.std(ddof=1) / math.sqrt(finite.size)) if finite.size > 1 else math.nan
        med = float(np.median(finite)) if finite.size else math.nan
        pts.append(PointStat(n=n, r=cfg.r, mean=mean, stderr=se, median=med,
                             trials=plan.trials_per_point,
                             censored_fraction=censored))
        if censored >= _CENSORED_LIMIT:
            bad.append(n)
    if bad:
        return ScalingFit(slope=math.nan, intercept=math.nan,
                          r_squared=math.nan, slope_stderr=math.nan,
                          points=tuple(pts), valid=False,
                          note="censored fraction >= 1% at n in "
                               f"{sorted(bad)}")
    fit = fit_loglog([(p.n, p.mean, p.stderr) for p in pts])
    return ScalingFit(slope=fit.slope, intercept=fit.intercept,
                      r_squared=fit.r_squared, slope_stderr=fit.slope_stderr,
                      points=tuple(pts))


def _model_p_hat_upper(model: str, n: int, r: float,
                       law: Optional[FlightLaw]) -> float:
    if model == MODEL_IID:
        return p_hat_bounds_iid(n, r)[1]
    tail = cosine_diff_tail_constants(law.alpha, law.tail_c)
    up = p_hat_bounds_levy(n, r, tail, law.alpha)[1]
    return min(max(up, 0.0), 1.0)


def run_ccdf_sweep(plan: SweepPlan, tau_max: int = 30,
                   workers: int = 1) -> list[dict]:
    """Empirical meeting-time CCDF rows against the geometric bound.

    One row per (n, tau); the bound column is the geometric form at the
    model's no-contact upper bound and the out-of-range upper bound.
    """
    if tau_max < 0:
        raise ValueError("tau_max must be nonnegative")
    rows = []
    for i, n in enumerate(plan.n_grid):
        cfg = plan.config_for(n, i)
        if cfg.horizon_slots <= tau_max:
            raise ValueError("horizon must exceed tau_max")
        r = cfg.r
        p_out_up = p_out_bounds(n, r)[1]
        p_hat_up = _model_p_hat_upper(plan.model, n, r, plan.law)
        _, tm, _ = pair_meeting_times(cfg, plan.trials_per_point,
                                      workers=workers)
        censored = float(np.mean(np.isinf(tm)))
        for tau in range(tau_max + 1):
            p = float(np.mean(tm > tau))
            se = math.sqrt(p * (1.0 - p) / tm.size)
            rows.append({
                "model": plan.model, "n": n, "r": r, "tau": tau,
                "trials": int(tm.size), "ccdf": p, "stderr": se,
                "bound": ccdf_geometric_bound(tau, p_hat_up, p_out_up),
                "censored_fraction": censored,
            })
    return rows


def run_dominance_check(plan: SweepPlan, alpha_low: float, alpha_high: float,
                        t_grid: Optional[Sequence[int]] = None,
                        workers: int = 1) -> list[dict]:
    """Empirical CCDF comparison between two tail exponents.

    Heavier tails (smaller alpha) must not meet later: the low-alpha
    CCDF is required to sit at or below the high-alpha one within 3
    combined standard errors at every requested t.  At t=0 nobody has
    moved, so both columns estimate the same out-of-range probability.
    """
    if plan.model != MODEL_LEVY or plan.law is None:
        raise ValueError("dominance checks need the heavy-flight model")
    if plan.law.sampler != "truncated_pareto":
        raise ValueError("dominance checks need the truncated power-law sampler")
    if not (0.0 < alpha_low <= alpha_high <= 2.0):
        raise ValueError("need 0 < alpha_low <= alpha_high <= 2")
    taus = list(t_grid) if t_grid is not None else list(range(0, 51))
    if any(t < 0 for t in taus):
        raise ValueError("t values must be nonnegative")
    laws = [FlightLaw(alpha=a, scale_s=plan.law.scale_s, z_th=plan.law.z_th,
                      sampler="truncated_pareto")
            for a in (alpha_low, alpha_high)]
    rows = []
    for i, n in enumerate(plan.n_grid):
        ccdfs = []
        for law in laws:
            cfg = plan.config_for(n, i, law=law)
            if cfg.horizon_slots <= max(taus):
                raise ValueError("horizon must exceed the largest t")
            _, tm, _ = pair_meeting_times(cfg, plan.trials_per_point,
                                          workers=workers)
            ccdfs.append(tm)
        lo_t, hi_t = ccdfs
        r = plan.config_for(n, i).r
        for t in taus:
            p_lo = float(np.mean(lo_t > t))
            p_hi = float(np.mean(hi_t > t))
            se_lo = math.sqrt(p_lo * (1.0 - p_lo) / lo_t.size)
            se_hi = math.sqrt(p_hi * (1.0 - p_hi) / hi_t.size)
            rows.append({
                "n": n, "r": r, "t": t,
                "alpha_low": alpha_low, "alpha_high": alpha_high,
                "ccdf_low": p_lo, "stderr_low": se_lo,
                "ccdf_high": p_hi, "stderr_high": se_hi,
                "dominated": p_lo <= p_hi + 3.0 * math.hypot(se_lo, se_hi),
            })
    return rows


# ---------------------------------------------------------------------------
# neighbor-count goodness of fit


def sample_neighbor_counts(master_seed: int, n: int, r: float,
                           placements: int) -> np.ndarray:
    """Neighbor counts of a center probe, conditioned on the destination
    starting out of range.

    The probe sits at the chart center; n-1 further nodes are uniform on
    the disc of area pi*n.  Placements whose designated destination lands
    within r are rejected, and the returned counts run over the other
    n-2 nodes, so fewer than `placements` samples come back.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not (0.0 < r <= math.sqrt(n)):
        raise ValueError("r must be in (0, sqrt(n)]")
    if placements < 1:
        raise ValueError("placements must be positive")
    thr = r * r / n  # squared-radius fraction below which a node is in range
    out = []
    blocks = (placements + _GOF_BLOCK - 1) // _GOF_BLOCK
    for b in range(blocks):
        k = min(_GOF_BLOCK, placements - b * _GOF_BLOCK)
        rng = trial_stream(master_seed, SALT_GOF, b)
        u = rng.uniform(size=(k, n - 1))  # u = (rho/R)^2 is uniform
        in_range = u <= thr
        keep = ~in_range[:, 0]
        out.append(in_range[keep, 1:].sum(axis=1))
    return np.concatenate(out).astype(np.int64)


def _pool_expected(obs: np.ndarray, exp: np.ndarray, min_exp: float = 5.0):
    """Merge adjacent cells until each pooled expectation reaches min_exp."""
    po, pe = [], []
    co = ce = 0.0
    for o, e in zip(obs, exp):
        co += o
        ce += e
        if ce >= min_exp:
            po.append(co)
            pe.append(ce)
            co = ce = 0.0
    if ce > 0.0 and po:
        po[-1] += co
        pe[-1] += ce
    return np.asarray(po), np.asarray(pe)


def neighbor_binomial_gof(samples: Sequence[int], n: int, p_out_c: float,
                          p_from_samples: bool = True) -> GofResult:
    """Chi-square of observed neighbor counts against the binomial law.

    p_out_c is the in-range probability parameterizing Binomial(n-2, p);
    when it was estimated from these same samples one further degree of
    freedom is spent.  Cells are pooled so every expectation is at least
    5.  Passing means not rejected at the 1% level.
    """
    counts = np.asarray(samples, dtype=np.int64)
    if counts.size < 10_000:
        raise ValueError("need at least 10^4 samples")
    if not (0.0 < p_out_c < 1.0):
        raise ValueError("p_out_c must be in (0, 1)")
    m = n - 2
    if m < 1 or counts.max() > m or counts.min() < 0:
        raise ValueError("counts must lie in [0, n-2]")
    support = np.arange(0, m + 1)
    expected = stats.binom.pmf(support, m, p_out_c) * counts.size
    observed = np.bincount(counts, minlength=m + 1).astype(float)
    obs_p, exp_p = _pool_expected(observed, expected)
    if len(exp_p) < (3 if p_from_samples else 2):
        raise ValueError("too few cells after pooling")
    chi2 = float(np.sum((obs_p - exp_p) ** 2 / exp_p))
    dof = len(exp_p) - 1 - (1 if p_from_samples else 0)
    crit = float(stats.chi2.isf(0.01, dof))
    return GofResult(chi2=chi2, dof=dof, passed=chi2 < crit)


# ---------------------------------------------------------------------------
# emission


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = format_real(float(v))
        return "" if s == "null" else s
    return str(v)


def write_rows_csv(path: str, rows: Sequence[dict]) -> None:
    """RFC-4180 table, one header row, reals at 17 significant digits."""
    if not rows:
        raise ValueError("no rows to write")
    fields = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_csv_cell(row[f]) for f in fields])


def write_json(path: str, obj) -> None:
    """Stable-order JSON document, UTF-8, newline terminated."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_stable(obj))
        fh.write("\n")
