"""Command-line front end.

Six subcommands cover the package surface: closed-form bounds with their
Monte Carlo cross-checks (bounds), empirical meeting-time CCDFs against
the geometric bound (meet), single-population relay-delay statistics
(delay), delay-scaling regressions over a population grid (sweep), the
neighbor-count binomial goodness of fit (gof), and the tail-exponent
CCDF comparison (dominance).

Option precedence is flags over config file over built-in defaults; the
config file is a flat JSON object keyed by the RunConfig field names.
Exit codes: 0 on success, 1 on a usage or validation problem, 2 when a
--check assertion fails.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .analytics import compute_bound_report, tradeoff_curve
from .experiments import (
    SweepPlan,
    neighbor_binomial_gof,
    run_ccdf_sweep,
    run_delay_sweep,
    run_dominance_check,
    sample_neighbor_counts,
    write_json,
    write_rows_csv,
)
from .flight import FlightLaw
from .world import DEFAULT_SEED, MODEL_IID, MODEL_LEVY, ModelConfig, scheme_delays

__all__ = ["RunConfig", "parse_args", "run", "main"]

SUBCOMMANDS = ("bounds", "meet", "delay", "sweep", "gof", "dominance")
FORMATS = ("csv", "json", "both")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK = 2

# per-subcommand default for --trials (gof counts placements)
_TRIALS_DEFAULT = {
    "bounds": 100_000,
    "meet": 20_000,
    "delay": 2_000,
    "sweep": 1_000,
    "gof": 30_000,
    "dominance": 20_000,
}

# slack added to the model delay exponent in sweep --check
_SLOPE_SLACK = 0.15

_CENSORED_LIMIT = 0.01


class UsageError(ValueError):
    """Bad flags or config file; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; round-trips through a flat dict."""

    subcommand: str
    model: str = MODEL_IID
    alpha: tuple[float, ...] = ()
    n: tuple[int, ...] = (100,)
    r: Optional[float] = None
    beta: Optional[float] = None
    trials: Optional[int] = None
    horizon: Optional[int] = None
    seed: int = DEFAULT_SEED
    workers: int = 1
    out_dir: str = "out"
    fmt: str = "json"
    check: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.model not in (MODEL_LEVY, MODEL_IID):
            raise UsageError(f"--model must be one of {MODEL_LEVY}, {MODEL_IID}")
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        for a in self.alpha:
            if not (0.0 < a <= 2.0):
                raise UsageError("alpha must be in (0, 2]")
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if not self.n or any(v < 2 for v in self.n):
            raise UsageError("--n values must be integers >= 2")
        if self.r is not None and self.beta is not None:
            raise UsageError("give at most one of --r and --beta")
        if self.r is not None and self.r <= 0:
            raise UsageError("r must be positive")
        if self.beta is not None and not (0.0 <= self.beta <= 0.25):
            raise UsageError("beta must be in [0, 0.25]")
        if self.trials is not None and self.trials < 0:
            raise UsageError("--trials must be nonnegative")
        if self.horizon is not None and self.horizon < 1:
            raise UsageError("--horizon must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        if self.fmt not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise UsageError(f"unknown config key {sorted(bad)[0]!r}")
        kwargs = dict(data)
        for key in ("alpha", "n"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    @property
    def effective_trials(self) -> int:
        return self.trials if self.trials is not None else \
            _TRIALS_DEFAULT[self.subcommand]


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects a number or comma-separated numbers")


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects an integer or comma-separated integers")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through UsageError
    # instead so 2 stays reserved for failed --check assertions.
    def error(self, message):
        raise UsageError(message)


_DEFAULTS_NOTE = """\
defaults: --model iid, --n 100, --beta 0 when neither --r nor --beta is
given, --seed 0x5EED_CAFE, --workers 1, --out out, --format json;
--trials defaults per subcommand (bounds 100000, meet 20000, delay 2000,
sweep 1000, gof 30000, dominance 20000); --horizon defaults to the model
horizon (1000 slots i.i.d., 10000 heavy-flight); --alpha defaults to 1
for heavy-flight runs and to the pair 0.5,2.0 for dominance."""


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="mobidelay",
        description="meeting-time, delay, and capacity experiments",
        epilog=_DEFAULTS_NOTE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    descr = {
        "bounds": "closed-form bounds plus Monte Carlo cross-checks",
        "meet": "empirical meeting-time CCDF against the geometric bound",
        "delay": "relay-scheme delay statistics at one population size",
        "sweep": "log-log delay scaling over a population grid",
        "gof": "neighbor-count binomial goodness of fit",
        "dominance": "meeting-time CCDF comparison of two tail exponents",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=descr[name], epilog=_DEFAULTS_NOTE,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--model", choices=(MODEL_LEVY, MODEL_IID), default=None)
        p.add_argument("--alpha", default=None,
                       help="tail exponent; a comma pair for dominance")
        p.add_argument("--n", default=None,
                       help="population size; comma-separated grid for sweeps")
        p.add_argument("--r", type=float, default=None,
                       help="transmission range (exclusive with --beta)")
        p.add_argument("--beta", type=float, default=None,
                       help="range exponent, r = n**beta")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--horizon", type=int, default=None,
                       help="simulation horizon in slots")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", dest="out_dir", default=None,
                       help="output directory")
        p.add_argument("--format", dest="fmt", choices=FORMATS, default=None)
        p.add_argument("--check", action="store_true", default=None,
                       help="assert the run's pass condition; exit 2 on failure")
        p.add_argument("--config", default=None,
                       help="flat JSON file of RunConfig fields")
    return parser


def parse_args(argv) -> RunConfig:
    """Resolve argv (plus any config file) into a RunConfig.

    Raises UsageError on anything malformed; the message names the
    offending flag or config key.
    """
    ns = _build_parser().parse_args(list(argv))
    merged: dict = {}
    if ns.config is not None:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                file_conf = json.load(fh)
        except OSError as exc:
            raise UsageError(f"--config: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"--config: not valid JSON ({exc})")
        if not isinstance(file_conf, dict):
            raise UsageError("--config must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        for key, value in file_conf.items():
            if key == "subcommand":
                continue  # the positional argument decides
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
            merged[key] = value
    if ns.alpha is not None:
        merged["alpha"] = _parse_floats(ns.alpha, "--alpha")
    if ns.n is not None:
        merged["n"] = _parse_ints(ns.n, "--n")
    for flag in ("model", "r", "beta", "trials", "horizon", "seed",
                 "workers", "out_dir", "fmt", "check"):
        value = getattr(ns, flag)
        if value is not None:
            merged[flag] = value
    merged["subcommand"] = ns.subcommand
    try:
        return RunConfig.from_dict(merged)
    except TypeError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------------------
# dispatch helpers


def _law_for(config: RunConfig) -> Optional[FlightLaw]:
    if config.model != MODEL_LEVY:
        return None
    alpha = config.alpha[0] if config.alpha else 1.0
    return FlightLaw(alpha=alpha, sampler="truncated_pareto")


def _range_beta(config: RunConfig) -> float:
    """Range exponent for sweep-style runs; --r is converted when it
    stays inside the sweep family r = n**beta, beta in [0, 1/4]."""
    if config.beta is not None:
        return config.beta
    if config.r is None:
        return 0.0
    if len(config.n) != 1:
        raise ValueError("--r only applies to a single population; use --beta")
    n = config.n[0]
    beta = math.log(config.r) / math.log(n)
    if not (0.0 <= beta <= 0.25):
        raise ValueError("r must satisfy 1 <= r <= n**0.25 here; use --beta")
    return beta


def _single_r(config: RunConfig) -> float:
    if config.r is not None:
        return config.r
    beta = config.beta if config.beta is not None else 0.0
    return float(config.n[0]) ** beta


def _plan(config: RunConfig) -> SweepPlan:
    return SweepPlan(
        n_grid=config.n,
        beta=_range_beta(config),
        model=config.model,
        law=_law_for(config),
        trials_per_point=config.effective_trials,
        horizon=config.horizon,
        master_seed=config.seed,
    )


def _emit(config: RunConfig, name: str, rows, summary=None) -> list[str]:
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    if config.fmt in ("csv", "both"):
        path = os.path.join(config.out_dir, f"{name}.csv")
        write_rows_csv(path, rows)
        written.append(path)
    if config.fmt in ("json", "both"):
        path = os.path.join(config.out_dir, f"{name}.json")
        write_json(path, summary if summary is not None else rows)
        written.append(path)
    return written


def _checked(ok: bool, reason: str) -> int:
    if ok:
        print("check: pass")
        return EXIT_OK
    print(f"check: FAIL ({reason})")
    return EXIT_CHECK


# ---------------------------------------------------------------------------
# subcommands


def _run_bounds(config: RunConfig) -> int:
    n = config.n[0]
    r = _single_r(config)
    report = compute_bound_report(
        model=config.model, n=n, r=r, law=_law_for(config),
        trials=config.effective_trials, master_seed=config.seed)
    doc = report.to_obj()
    rows = []
    for key, value in doc.items():
        if isinstance(value, dict):
            rows.extend({"key": f"{key}.{k}", "value": v}
                        for k, v in value.items())
        else:
            rows.append({"key": key, "value": value})
    written = _emit(config, "bounds", rows, summary=doc)
    print(f"bounds: n={n} r={r:g} model={config.model} -> "
          + ", ".join(written))
    return EXIT_OK


def _run_meet(config: RunConfig) -> int:
    rows = run_ccdf_sweep(_plan(config), workers=config.workers)
    written = _emit(config, "meet", rows)
    print(f"meet: {len(rows)} rows -> " + ", ".join(written))
    if not config.check:
        return EXIT_OK
    bad = [row for row in rows
           if row["ccdf"] > row["bound"] + 3.0 * row["stderr"]]
    return _checked(not bad,
                    f"{len(bad)} rows exceed the geometric bound + 3 sigma")


def _run_delay(config: RunConfig) -> int:
    n = config.n[0]
    cfg = ModelConfig(n=n, r=_single_r(config), model=config.model,
                      law=_law_for(config), horizon_slots=config.horizon,
                      master_seed=config.seed)
    _, _, delays = scheme_delays(cfg, config.effective_trials,
                                 workers=config.workers)
    finite = delays[np.isfinite(delays)]
    censored = 1.0 - finite.size / delays.size
    row = {
        "model": config.model, "n": n, "r": cfg.r,
        "trials": int(delays.size),
        "mean": float(finite.mean()) if finite.size else math.nan,
        "stderr": (float(finite.std(ddof=1) / math.sqrt(finite.size))
                   if finite.size > 1 else math.nan),
        "median": float(np.median(finite)) if finite.size else math.nan,
        "mean_ceil": (float(np.ceil(finite).mean())
                      if finite.size else math.nan),
        "censored_fraction": censored,
    }
    written = _emit(config, "delay", [row], summary=row)
    print(f"delay: n={n} mean={row['mean']:.4g} "
          f"censored={censored:.4g} -> " + ", ".join(written))
    if not config.check:
        return EXIT_OK
    return _checked(censored < _CENSORED_LIMIT,
                    f"censored fraction {censored:.4g} >= 1%")


def _run_sweep(config: RunConfig) -> int:
    plan = _plan(config)
    fit = run_delay_sweep(plan, workers=config.workers)
    written = _emit(config, "sweep", fit.point_rows(), summary=fit.summary())
    print(f"sweep: slope={fit.slope:.4g} r2={fit.r_squared:.4g} "
          f"valid={fit.valid} -> " + ", ".join(written))
    if not config.check:
        return EXIT_OK
    if not fit.valid:
        return _checked(False, fit.note or "fit invalid")
    alpha = config.alpha[0] if config.alpha else 1.0
    eta = 2.0 * plan.beta  # capacity target n**-eta paired with this range
    (_, exponent), = tradeoff_curve(config.model, alpha, [eta])
    return _checked(fit.slope <= exponent + _SLOPE_SLACK,
                    f"slope {fit.slope:.4g} > {exponent:.4g} + {_SLOPE_SLACK}")


def _run_gof(config: RunConfig) -> int:
    n = config.n[0]
    r = _single_r(config)
    counts = sample_neighbor_counts(config.seed, n, r,
                                    config.effective_trials)
    p_hat = float(counts.mean() / (n - 2))
    res = neighbor_binomial_gof(counts, n, p_hat, p_from_samples=True)
    row = {
        "n": n, "r": r, "placements": config.effective_trials,
        "samples": int(counts.size), "p_hat": p_hat,
        "chi2": res.chi2, "dof": res.dof, "passed": res.passed,
    }
    written = _emit(config, "gof", [row], summary=row)
    print(f"gof: chi2={res.chi2:.4g} dof={res.dof} passed={res.passed} -> "
          + ", ".join(written))
    if not config.check:
        return EXIT_OK
    return _checked(res.passed, f"chi2 {res.chi2:.4g} rejected at 1%")


def _run_dominance(config: RunConfig) -> int:
    alphas = config.alpha if config.alpha else (0.5, 2.0)
    if len(alphas) != 2:
        raise ValueError("dominance needs exactly two --alpha values")
    if config.model != MODEL_LEVY:
        raise ValueError("dominance runs the heavy-flight model; "
                         "pass --model levy")
    plan = _plan(config)
    rows = run_dominance_check(plan, min(alphas), max(alphas),
                               workers=config.workers)
    written = _emit(config, "dominance", rows)
    bad = [row for row in rows if not row["dominated"]]
    print(f"dominance: {len(rows)} rows, {len(bad)} violations -> "
          + ", ".join(written))
    if not config.check:
        return EXIT_OK
    return _checked(not bad, f"{len(bad)} rows break the tail ordering")


_DISPATCH = {
    "bounds": _run_bounds,
    "meet": _run_meet,
    "delay": _run_delay,
    "sweep": _run_sweep,
    "gof": _run_gof,
    "dominance": _run_dominance,
}


def run(config: RunConfig) -> int:
    """Execute one resolved invocation; returns the process exit code."""
    try:
        return _DISPATCH[config.subcommand](config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
