"""Closed-form bounds and the Monte Carlo estimators that check them.

Everything here is a pure function of configuration parameters, except
the estimators, which take an explicit random stream.  Simulation of the
actual meeting process lives in ``world``; this module evaluates the
formulas that sandwich it: the out-of-range probability of a uniform
pair, per-slot no-contact probability for both mobility models, the
geometric CCDF and expected-meeting-time bounds, the relay-scheme delay
bound, per-node throughput of the two-hop scheme, and the tail constants
of the cosine-projected flight difference.

Bound conventions: "lower"/"upper" always bracket the true probability,
so upper bounds of no-contact quantities are the safe side for delay
bounds.  The heavy-tail no-contact bounds are only claimed above an
unspecified population threshold; callers receive that caveat as text
and decide what to gate on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np
from scipy.stats import binom

from .flight import FlightLaw, sample_flight_lengths
from .geometry import segment_point_dist_np, uniform_points_in_disc
from .world import DEFAULT_SEED, MODEL_IID, MODEL_LEVY, SALT_MC, trial_stream

__all__ = [
    "Estimate",
    "TailConstants",
    "BoundReport",
    "p_out_bounds",
    "estimate_p_out_mc",
    "p_hat_bounds_levy",
    "p_hat_bounds_iid",
    "estimate_p_hat_mc",
    "estimate_H1_mc",
    "ccdf_geometric_bound",
    "u_bar_from_ccdf",
    "u_bar_bound",
    "iid_delay_bound",
    "binomial_chernoff_tail",
    "chernoff_tail_relaxed",
    "capacity_per_node",
    "capacity_ratio",
    "cell_occupancy_prob",
    "asin_envelope",
    "cosine_diff_tail_constants",
    "estimate_cosine_diff_tail_mc",
    "tradeoff_curve",
    "levy_delay_upper",
    "compute_bound_report",
    "format_real",
    "dumps_stable",
]

_TWO_PI = 2.0 * math.pi

# Infinite sums over slot counts stop once a summand drops below this or
# the index reaches the tail cut; the remainder is closed off with a
# geometric continuation of the last observed ratio.
_SUMMAND_FLOOR = 1e-12
_DEFAULT_TAIL_CUT = 100_000

_MC_CHUNK = 1 << 20


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo point estimate with its binomial standard error."""

    value: float
    stderr: float
    trials: int

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0) or not math.isfinite(self.stderr):
            raise ValueError("estimate must be a probability with finite stderr")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass(frozen=True)
class TailConstants:
    """Lower/upper tail coefficients of the cosine-projected flight difference.

    c_l and c_u multiply z**(-alpha) to bracket the upper tail of
    Z1*cos(theta1) - Z2*cos(theta2); cos_integral is the quadrature value
    they share, kept for reporting.
    """

    c_l: float
    c_u: float
    cos_integral: float

    def __post_init__(self):
        if not (0.0 < self.c_l < self.c_u):
            raise ValueError("require 0 < c_l < c_u")
        if not (self.cos_integral > 0.0):
            raise ValueError("cos_integral must be positive")


@dataclass(frozen=True)
class BoundReport:
    """Bundle of the closed-form bounds and estimates for one configuration.

    The no-contact pair (p_hat_lower, p_hat_upper) is clamped into [0, 1];
    raw formula values below zero are vacuous and reported as 0.  h1_mc
    maps initial distances to no-contact estimates, u_bar maps copy counts
    to the discretized-minimum bound.
    """

    p_out_lower: float
    p_out_upper: float
    p_hat_lower: float
    p_hat_upper: float
    p_hat_mc: Optional[Estimate]
    h1_mc: Optional[Mapping[float, Estimate]]
    u_bar: Mapping[int, float]
    delay_upper: float
    capacity_lambda: Optional[float]
    n_th_note: str

    def __post_init__(self):
        for name in ("p_out_lower", "p_out_upper", "p_hat_lower", "p_hat_upper"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0, 1]")
        if self.p_out_lower > self.p_out_upper:
            raise ValueError("p_out_lower must not exceed p_out_upper")
        if self.p_hat_lower > self.p_hat_upper:
            raise ValueError("p_hat_lower must not exceed p_hat_upper")
        if self.delay_upper < 0.0:
            raise ValueError("delay_upper must be nonnegative")

    def to_obj(self) -> dict:
        return {
            "p_out_lower": self.p_out_lower,
            "p_out_upper": self.p_out_upper,
            "p_hat_lower": self.p_hat_lower,
            "p_hat_upper": self.p_hat_upper,
            "p_hat_mc": _estimate_obj(self.p_hat_mc),
            "h1_mc": None if self.h1_mc is None else {
                format_real(l0): _estimate_obj(est) for l0, est in self.h1_mc.items()
            },
            "u_bar": {str(m): v for m, v in self.u_bar.items()},
            "delay_upper": self.delay_upper,
            "capacity_lambda": self.capacity_lambda,
            "n_th_note": self.n_th_note,
        }

    def to_json(self) -> str:
        return dumps_stable(self.to_obj())


def _estimate_obj(est: Optional[Estimate]):
    if est is None:
        return None
    return {"value": est.value, "stderr": est.stderr, "trials": est.trials}


# ---------------------------------------------------------------------------
# stable serialization

def format_real(x: float) -> str:
    """Fixed 17-significant-digit decimal form; non-finite becomes null."""
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(float(x), ".17g")


def dumps_stable(obj, indent: int = 2) -> str:
    """JSON text with insertion-order keys and 17-significant-digit reals.

    The stdlib encoder prints floats with shortest round-trip repr, which
    is stable across runs but not fixed-width; reports pin the textual
    form instead so emitted files are byte-comparable.
    """
    import json as _json

    out: list[str] = []

    def emit(o, depth: int):
        pad = " " * (indent * depth)
        pad_in = " " * (indent * (depth + 1))
        if o is None:
            out.append("null")
        elif isinstance(o, bool):
            out.append("true" if o else "false")
        elif isinstance(o, (int, np.integer)):
            out.append(str(int(o)))
        elif isinstance(o, (float, np.floating)):
            out.append(format_real(float(o)))
        elif isinstance(o, str):
            out.append(_json.dumps(o))
        elif isinstance(o, Mapping):
            if not o:
                out.append("{}")
                return
            out.append("{\n")
            for i, (k, v) in enumerate(o.items()):
                out.append(pad_in + _json.dumps(str(k)) + ": ")
                emit(v, depth + 1)
                out.append(",\n" if i < len(o) - 1 else "\n")
            out.append(pad + "}")
        elif isinstance(o, (list, tuple)):
            if len(o) == 0:
                out.append("[]")
                return
            out.append("[\n")
            for i, v in enumerate(o):
                out.append(pad_in)
                emit(v, depth + 1)
                out.append(",\n" if i < len(o) - 1 else "\n")
            out.append(pad + "]")
        else:
            raise TypeError(f"cannot serialize {type(o).__name__}")

    emit(obj, 0)
    return "".join(out)


# ---------------------------------------------------------------------------
# out-of-range probability of a uniform pair

def p_out_bounds(n: int, r: float) -> tuple[float, float]:
    """Sandwich for the probability that a uniform pair starts out of range.

    Returns (1 - r**2/n, 1 - r**2/(3n)).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not (0.0 < r <= math.sqrt(n)):
        raise ValueError("r must be in (0, sqrt(n)]")
    return 1.0 - r * r / n, 1.0 - r * r / (3.0 * n)


def estimate_p_out_mc(rng_stream: np.random.Generator, n: int, r: float,
                      trials: int) -> Estimate:
    """MC fraction of uniform disc pairs at distance greater than r."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if n < 1 or r < 0.0:
        raise ValueError("need n >= 1 and r >= 0")
    radius = math.sqrt(n)
    hits = 0
    done = 0
    while done < trials:
        k = min(_MC_CHUNK, trials - done)
        x1, y1 = uniform_points_in_disc(rng_stream, radius, k)
        x2, y2 = uniform_points_in_disc(rng_stream, radius, k)
        hits += int(np.count_nonzero(np.hypot(x1 - x2, y1 - y2) > r))
        done += k
    return _binomial_estimate(hits, trials)


def _binomial_estimate(hits: int, trials: int) -> Estimate:
    p = hits / trials
    return Estimate(p, math.sqrt(p * (1.0 - p) / trials), trials)


# ---------------------------------------------------------------------------
# per-slot no-contact probability at the worst initial distance

def p_hat_bounds_levy(n: int, r: float, tail: TailConstants,
                      alpha: float) -> tuple[float, float, str]:
    """Closed-form sandwich for the heavy-flight no-contact probability.

    Values are the raw formulas and may be vacuous (below 0) for small n;
    the returned caveat records that validity needs the population to
    exceed an unspecified threshold.
    """
    if not (0.0 < alpha <= 2.0):
        raise ValueError("alpha must be in (0, 2]")
    two_rt = 2.0 * math.sqrt(n)
    if not (0.0 < r < two_rt):
        raise ValueError("r must be in (0, 2*sqrt(n))")
    a = math.asin(r / two_rt)
    upper = 1.0 - (2.0 * tail.c_l / math.pi) * (two_rt + r) ** (-alpha) * a
    lower = 1.0 - (2.0 ** (alpha / 2.0 + 2.0) * tail.c_u / math.pi) \
        * (two_rt - r) ** (-alpha) * a
    caveat = ("bounds hold only for populations above an unspecified "
              "threshold; checks here run at n >= 10^4")
    return lower, upper, caveat


def p_hat_bounds_iid(n: int, r: float) -> tuple[float, float]:
    """Closed-form sandwich for the teleport-model no-contact probability.

    Valid for every population size.  upper = 1 - asin(r/(2 sqrt(n)))/pi;
    lower subtracts the three boundary-correction terms and may be
    vacuous (below 0) when r is a large fraction of the disc.
    """
    two_rt = 2.0 * math.sqrt(n)
    if not (0.0 < r < two_rt):
        raise ValueError("r must be in (0, 2*sqrt(n))")
    a = math.asin(r / two_rt)
    upper = 1.0 - a / math.pi
    lower = (1.0 - r * r / (2.0 * n) - 2.0 * r / (math.pi * math.sqrt(n))
             - 5.0 * a / math.pi)
    return lower, upper


def _rotate(dx: np.ndarray, dy: np.ndarray, angle: float):
    # Counter-rotating the isotropic sample is the same as rotating the
    # obstruction anchor by +angle.
    if angle == 0.0:
        return dx, dy
    c, s = math.cos(angle), math.sin(angle)
    return c * dx + s * dy, -s * dx + c * dy


def _no_contact_fraction(rng: np.random.Generator, model: str,
                         law: Optional[FlightLaw], n: int, r: float,
                         l0: float, trials: int, anchor_rotation: float) -> int:
    """Count samples whose one-slot relative path misses the r-disc.

    The start sits at distance l0 from the obstruction.  Heavy-flight
    model: the path is the segment from the start through the flight
    differential.  Teleport model: the segment from the start to a fresh
    uniform-pair difference.
    """
    radius = math.sqrt(n)
    misses = 0
    done = 0
    while done < trials:
        k = min(_MC_CHUNK, trials - done)
        if model == MODEL_LEVY:
            if law is None:
                raise ValueError("heavy-flight model needs a FlightLaw")
            th = _TWO_PI * (1.0 - rng.uniform(size=2 * k))
            z = sample_flight_lengths(rng, law, 2 * k)
            vx = z * np.cos(th)
            vy = z * np.sin(th)
            dx = vx[:k] - vx[k:]
            dy = vy[:k] - vy[k:]
        else:
            x1, y1 = uniform_points_in_disc(rng, radius, k)
            x2, y2 = uniform_points_in_disc(rng, radius, k)
            dx = x1 - x2
            dy = y1 - y2
        dx, dy = _rotate(dx, dy, anchor_rotation)
        # Start at (0, l0), obstruction disc at the origin.
        ax = np.zeros(k)
        ay = np.full(k, l0)
        if model == MODEL_LEVY:
            bx, by = ax + dx, ay + dy
        else:
            bx, by = dx, dy
        d = segment_point_dist_np(ax, ay, bx, by)
        misses += int(np.count_nonzero(d > r))
        done += k
    return misses


def estimate_p_hat_mc(rng_stream: np.random.Generator, model: str,
                      law: Optional[FlightLaw], n: int, r: float,
                      trials: int, anchor_rotation: float = 0.0) -> Estimate:
    """MC estimate of the no-contact probability at initial distance 2*sqrt(n)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    _check_model(model)
    two_rt = 2.0 * math.sqrt(n)
    if not (0.0 < r < two_rt):
        raise ValueError("r must be in (0, 2*sqrt(n))")
    misses = _no_contact_fraction(rng_stream, model, law, n, r, two_rt,
                                  trials, anchor_rotation)
    return _binomial_estimate(misses, trials)


def estimate_H1_mc(rng_stream: np.random.Generator, model: str,
                   law: Optional[FlightLaw], n: int, r: float, l0: float,
                   trials: int, anchor_rotation: float = 0.0) -> Estimate:
    """MC estimate of the first-slot no-contact probability at distance l0."""
    if trials < 1:
        raise ValueError("trials must be positive")
    _check_model(model)
    if l0 <= r:
        raise ValueError("require l0 > r")
    if l0 > 2.0 * math.sqrt(n) * (1.0 + 1e-12):
        raise ValueError("require l0 <= 2*sqrt(n)")
    misses = _no_contact_fraction(rng_stream, model, law, n, r, l0,
                                  trials, anchor_rotation)
    return _binomial_estimate(misses, trials)


def _check_model(model: str):
    if model not in (MODEL_LEVY, MODEL_IID):
        raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# meeting-time distribution bounds

def ccdf_geometric_bound(tau: int, p_hat: float, p_out: float) -> float:
    """Geometric bound on P{first meeting time > tau}: p_hat**tau * p_out."""
    if tau < 0 or int(tau) != tau:
        raise ValueError("tau must be a nonnegative integer")
    _check_prob("p_hat", p_hat)
    _check_prob("p_out", p_out)
    return p_hat ** int(tau) * p_out


def _check_prob(name: str, v: float):
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must be in [0, 1]")


def u_bar_from_ccdf(ccdf, m: int, tail_cut: int = _DEFAULT_TAIL_CUT) -> float:
    """Sum of the m-th powers of a CCDF over all slot counts.

    ccdf is either a callable tau -> P{T > tau} or a sequence indexed by
    tau.  The sum runs until the summand falls below 1e-12 or tail_cut is
    reached, then a geometric continuation of the last ratio closes the
    remainder, which makes the result exact for geometric inputs.
    """
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    if tail_cut < 1:
        raise ValueError("tail_cut must be positive")
    m = int(m)
    if callable(ccdf):
        get = ccdf
        limit = tail_cut
    else:
        seq = list(ccdf)
        if not seq:
            raise ValueError("ccdf sequence must be nonempty")
        get = seq.__getitem__
        limit = min(tail_cut, len(seq) - 1)

    total = 0.0
    prev = None
    last = None
    for tau in range(limit + 1):
        v = float(get(tau))
        if not (-1e-12 <= v <= 1.0 + 1e-12):
            raise ValueError("ccdf values must be in [0, 1]")
        if last is not None and v > last + 1e-12:
            raise ValueError("ccdf must be nonincreasing")
        term = v ** m
        total += term
        prev, last = last, v
        if term < _SUMMAND_FLOOR:
            break
    # Close the sum with a geometric continuation of the final ratio;
    # for a truly geometric CCDF this reproduces the infinite sum exactly.
    if last is None or last <= 0.0 or prev is None or prev <= 0.0:
        return total
    ratio = last / prev
    if ratio >= 1.0 - 1e-15:
        return math.inf if last ** m >= _SUMMAND_FLOOR else total
    rm = ratio ** m
    return total + (last ** m) * rm / (1.0 - rm)


def u_bar_bound(m: int, p_hat: float, p_out: float) -> float:
    """Bound on the expected minimum of m discretized meeting times.

    p_out**m / (1 - p_hat**m); diverges as p_hat approaches 1, so p_hat
    must be strictly below it.
    """
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    _check_prob("p_out", p_out)
    if not (0.0 <= p_hat < 1.0):
        raise ValueError("p_hat must be in [0, 1)")
    m = int(m)
    return p_out ** m / (1.0 - p_hat ** m)


def levy_delay_upper(p_hat: float, p_out: float) -> float:
    """Bound on the expected ceiling of the first meeting time."""
    _check_prob("p_out", p_out)
    if not (0.0 <= p_hat < 1.0):
        raise ValueError("p_hat must be in [0, 1)")
    return p_out / (1.0 - p_hat)


def binomial_chernoff_tail(n_trials: int, p: float, x: float) -> float:
    """Chernoff bound on the lower binomial tail P{B <= x} for x <= n*p."""
    if n_trials < 1 or int(n_trials) != n_trials:
        raise ValueError("n_trials must be a positive integer")
    if not (0.0 < p <= 1.0):
        raise ValueError("p must be in (0, 1]")
    mu = n_trials * p
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x > mu:
        raise ValueError("x must not exceed n_trials * p")
    return math.exp(-((mu - x) ** 2) / (2.0 * mu))


def chernoff_tail_relaxed(n: int, r: float, gamma: float) -> float:
    """Algebraic relaxation of the neighbor-count Chernoff tail.

    2 * (3n / (n - 2 - 3*gamma*n))**2 / r**2, the form obtained by
    exp(-x) <= 1/x; needs n strictly above 2/(1 - 3*gamma).
    """
    _check_gamma(gamma)
    if r <= 0.0:
        raise ValueError("r must be positive")
    d = n - 2.0 - 3.0 * gamma * n
    if d <= 0.0:
        raise ValueError("n must exceed 2 / (1 - 3*gamma)")
    return 2.0 * (3.0 * n / d) ** 2 / (r * r)


def _check_gamma(gamma: float):
    if not (0.0 < gamma < 1.0 / 3.0):
        raise ValueError("gamma must be in (0, 1/3)")


def iid_delay_bound(n: int, r: float, p_hat: float, p_out: float,
                    gamma: float = 0.1,
                    u_bar_fn: Optional[Callable[[int], float]] = None,
                    tail: str = "exact") -> float:
    """Three-term bound on the mean relay-scheme delay, teleport model.

    p_out + p_out * U(1) * P{B <= ceil(gamma r^2) - 2} + p_out * U(k)
    with k = ceil(gamma r^2) and B binomial over the n-2 candidate relays
    with in-range probability 1 - p_out.  tail selects the exact binomial
    CDF or the Chernoff surrogate for the middle factor.
    """
    _check_gamma(gamma)
    if n * (1.0 - 3.0 * gamma) < 2.0:
        raise ValueError("need n >= 2 / (1 - 3*gamma)")
    if r <= 0.0:
        raise ValueError("r must be positive")
    _check_prob("p_out", p_out)
    if not (0.0 <= p_hat < 1.0):
        raise ValueError("p_hat must be in [0, 1)")
    if tail not in ("exact", "chernoff"):
        raise ValueError("tail must be 'exact' or 'chernoff'")
    if u_bar_fn is None:
        u_bar_fn = lambda mm: u_bar_bound(mm, p_hat, p_out)
    k = math.ceil(gamma * r * r)
    x = k - 2
    p_in = 1.0 - p_out
    if x < 0 or p_in == 0.0:
        few_neighbors = 1.0 if x >= 0 else 0.0
    elif tail == "exact":
        few_neighbors = float(binom.cdf(x, n - 2, p_in))
    else:
        few_neighbors = binomial_chernoff_tail(n - 2, p_in, x)
    return (p_out
            + p_out * u_bar_fn(1) * few_neighbors
            + p_out * u_bar_fn(k))


# ---------------------------------------------------------------------------
# per-node throughput of the two-hop scheme

def _occupancy_terms(n: int, q: float) -> tuple[float, float]:
    # (1-q)^n and (1-q)^(n-1) via log1p so n up to 10^6 keeps full precision.
    log1mq = math.log1p(-q)
    return math.exp(n * log1mq), math.exp((n - 1) * log1mq)


def _check_capacity_args(n: int, beta: float):
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 <= beta <= 0.25):
        raise ValueError("beta must be in [0, 0.25]")


def capacity_per_node(n: int, beta: float) -> float:
    """Per-node throughput of the two-hop relay scheme at range n**beta.

    n^(-2 beta) - n^(-2 beta) (1 - n^(2 beta - 1))^n
    - (1 - n^(2 beta - 1))^(n-1).
    """
    _check_capacity_args(n, beta)
    q = n ** (2.0 * beta - 1.0)
    pn, pn1 = _occupancy_terms(n, q)
    scale = n ** (-2.0 * beta)
    return scale * (1.0 - pn) - pn1


def capacity_ratio(n: int, beta: float) -> float:
    """Throughput normalized by its n**(-2 beta) scale; tends to 1 - 2/e at beta 0."""
    _check_capacity_args(n, beta)
    q = n ** (2.0 * beta - 1.0)
    pn, pn1 = _occupancy_terms(n, q)
    # n**(2 beta) == q * n
    return (1.0 - pn) - q * n * pn1


def cell_occupancy_prob(n: int, cell_area: float) -> float:
    """Probability a fixed cell of the given area holds two or more of n
    uniform nodes, over a region of total area n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < cell_area <= n):
        raise ValueError("cell_area must be in (0, n]")
    q = cell_area / n
    pn, pn1 = _occupancy_terms(n, q)
    return 1.0 - pn - n * q * pn1


# ---------------------------------------------------------------------------
# tail constants of the cosine-projected flight difference

def asin_envelope(x: float) -> tuple[float, float]:
    """The linear envelope x <= asin(x) <= (pi/2) x on [0, 1]."""
    if not (0.0 <= x <= 1.0):
        raise ValueError("x must be in [0, 1]")
    return x, 0.5 * math.pi * x


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    # Classic recursive Simpson with Richardson correction.  The
    # integrands used here are bounded with at worst a derivative cusp at
    # an endpoint, so depth 60 is far beyond what the tolerance needs.
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0

    def recurse(a, fa, b, fb, m, fm, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1))

    return recurse(a, fa, b, fb, m, fm, whole, tol, 60)


def cosine_diff_tail_constants(alpha: float, c: float) -> TailConstants:
    """Tail coefficients from the power-law flight coefficient c.

    c_l = (c / 2 pi) * I and c_u = (2**(1+alpha) c / pi) * I where I is
    the integral of cos**alpha over a quarter period, computed to 1e-10
    relative accuracy.
    """
    if not (0.0 < alpha <= 2.0):
        raise ValueError("alpha must be in (0, 2]")
    if c <= 0.0:
        raise ValueError("c must be positive")
    integral = _adaptive_simpson(lambda t: math.cos(t) ** alpha,
                                 0.0, 0.5 * math.pi, 1e-12)
    c_l = c / _TWO_PI * integral
    c_u = 2.0 ** (1.0 + alpha) * c / math.pi * integral
    return TailConstants(c_l=c_l, c_u=c_u, cos_integral=integral)


def estimate_cosine_diff_tail_mc(rng_stream: np.random.Generator,
                                 law: FlightLaw, z_values: Sequence[float],
                                 trials: int) -> dict[float, Estimate]:
    """MC upper-tail of Z1 cos(theta1) - Z2 cos(theta2) at each threshold."""
    if trials < 1:
        raise ValueError("trials must be positive")
    zs = [float(z) for z in z_values]
    if any(z <= 0.0 for z in zs):
        raise ValueError("thresholds must be positive")
    hits = {z: 0 for z in zs}
    done = 0
    while done < trials:
        k = min(_MC_CHUNK, trials - done)
        th = _TWO_PI * (1.0 - rng_stream.uniform(size=2 * k))
        z = sample_flight_lengths(rng_stream, law, 2 * k)
        proj = z * np.cos(th)
        diff = proj[:k] - proj[k:]
        for zv in zs:
            hits[zv] += int(np.count_nonzero(diff > zv))
        done += k
    return {zv: _binomial_estimate(h, trials) for zv, h in hits.items()}


# ---------------------------------------------------------------------------
# tradeoff curve and report assembly

def tradeoff_curve(model: str, alpha_opt: Optional[float],
                   eta_grid: Sequence[float]) -> list[tuple[float, float]]:
    """Delay-bound exponents along a throughput grid lambda = n**(-eta).

    Returns (eta, exponent) pairs with delay bounded by order
    n**exponent.  Heavy-flight model: min((1 + alpha)/2 - beta, 1); the
    teleport model: max(0, 1/2 - 3 beta); both with beta = eta / 2.
    """
    _check_model(model)
    if model == MODEL_LEVY:
        if alpha_opt is None or not (0.0 < alpha_opt <= 2.0):
            raise ValueError("heavy-flight curve needs alpha in (0, 2]")
    curve = []
    for eta in eta_grid:
        eta = float(eta)
        if not (0.0 <= eta <= 0.5):
            raise ValueError("eta must be in [0, 1/2]")
        beta = 0.5 * eta
        if model == MODEL_LEVY:
            expo = min((1.0 + alpha_opt) / 2.0 - beta, 1.0)
        else:
            expo = max(0.0, 0.5 - 3.0 * beta)
        curve.append((eta, expo))
    return curve


def compute_bound_report(model: str, n: int, r: float,
                         law: Optional[FlightLaw] = None,
                         trials: int = 100_000,
                         master_seed: int = DEFAULT_SEED,
                         gamma: float = 0.1,
                         u_bar_ms: Sequence[int] = tuple(range(1, 11)),
                         h1_grid: Optional[Sequence[float]] = None) -> BoundReport:
    """Evaluate every bound this module knows for one configuration.

    trials = 0 skips the Monte Carlo entries.  The delay bound uses the
    dominating (p_hat upper, p_out upper) pair, as does u_bar; h1
    defaults to the grid {1.5r, 3r, 2 sqrt(n)} clipped to its domain.
    """
    _check_model(model)
    if n < 2:
        raise ValueError("n must be at least 2")
    p_out_lo, p_out_up = p_out_bounds(n, r)
    if model == MODEL_LEVY:
        if law is None:
            raise ValueError("heavy-flight report needs a FlightLaw")
        tail = cosine_diff_tail_constants(law.alpha, law.tail_c)
        raw_lo, raw_up, note = p_hat_bounds_levy(n, r, tail, law.alpha)
    else:
        raw_lo, raw_up = p_hat_bounds_iid(n, r)
        note = "no-contact bounds valid for all n"
    p_hat_lo = min(max(raw_lo, 0.0), 1.0)
    p_hat_up = min(max(raw_up, 0.0), 1.0)

    p_hat_mc = None
    h1_mc = None
    if trials > 0:
        p_hat_mc = estimate_p_hat_mc(trial_stream(master_seed, SALT_MC, 0),
                                     model, law, n, r, trials)
        two_rt = 2.0 * math.sqrt(n)
        if h1_grid is None:
            h1_grid = [l0 for l0 in (1.5 * r, 3.0 * r, two_rt)
                       if r < l0 <= two_rt]
        h1_mc = {}
        for i, l0 in enumerate(h1_grid):
            h1_mc[float(l0)] = estimate_H1_mc(
                trial_stream(master_seed, SALT_MC, 1 + i),
                model, law, n, r, float(l0), trials)

    u_bar = {int(m): u_bar_bound(int(m), p_hat_up, p_out_up) for m in u_bar_ms}
    if model == MODEL_IID and n * (1.0 - 3.0 * gamma) >= 2.0:
        delay_upper = iid_delay_bound(n, r, p_hat_up, p_out_up, gamma)
    else:
        # Pathwise the scheme is never slower than the bare pair meeting,
        # so the geometric pair bound is a valid fallback.
        delay_upper = levy_delay_upper(p_hat_up, p_out_up)

    beta_eq = math.log(r) / math.log(n) if r > 0 else None
    capacity = None
    if beta_eq is not None and 0.0 <= beta_eq <= 0.25:
        capacity = capacity_per_node(n, beta_eq)

    return BoundReport(
        p_out_lower=p_out_lo, p_out_upper=p_out_up,
        p_hat_lower=p_hat_lo, p_hat_upper=p_hat_up,
        p_hat_mc=p_hat_mc, h1_mc=h1_mc, u_bar=u_bar,
        delay_upper=delay_upper, capacity_lambda=capacity,
        n_th_note=note,
    )
