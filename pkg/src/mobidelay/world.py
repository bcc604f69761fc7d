"""Pair meeting-process and relay-scheme delay simulation.

One slot of motion is piecewise linear: antipodal wraps split a node's
path into sub-segments, and within any time window where both nodes move
linearly the relative motion is linear too, so the continuous contact
event (distance dipping to r at any instant, boundary inclusive) reduces
to a clamped quadratic per window.

Flights with heavy-tailed lengths can wrap the disc astronomically many
times in one slot.  After the first boundary exit the antipodal rule
makes the path perfectly periodic with period two: it alternates between
two fixed chords of equal length, traversed with the node's constant
velocity.  The contact engine exploits that structure, so slots are exact
at any flight length:

  * no wrap on either side: one relative segment (fast path);
  * modest wrap counts: explicit walk over the merged sub-segment grid;
  * enormous wrap counts: positions come from the closed-form period-2
    cycle; candidate times are localised by convex distance functions of
    the slower node's pieces to the faster node's two chords, and only
    the chord-traversal windows inside those candidates are tested.

Randomness discipline: every public simulation entry point takes an
explicit Generator.  Batch runners shard trials into fixed-size blocks,
each with a stream derived from (master_seed, salt, block index), so
results are independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .flight import (
    FlightLaw,
    next_position_iid,
    next_position_levy,
    sample_flight,
    sample_stable_symmetric_np,
)
from .geometry import (
    ORIGIN,
    DiscWorld,
    Point2,
    SubSegment,
    _exit_fraction,
    segment_hits_disc,
    uniform_points_in_disc,
)

__all__ = [
    "ModelConfig",
    "MeetingSample",
    "DelaySample",
    "trial_stream",
    "slot_contact",
    "simulate_pair_meeting",
    "neighbor_set",
    "simulate_scheme_delay",
    "build_slot_trajectories",
]

MODEL_LEVY = "levy"
MODEL_IID = "iid"

# default horizons: relocation mixes fast; heavy-tailed pairs need longer
DEFAULT_HORIZON_IID = 1_000
DEFAULT_HORIZON_LEVY = 10_000

DEFAULT_SEED = 0x5EED_CAFE

# stream salts (one namespace per purpose)
SALT_MEET = 11
SALT_DELAY = 12
SALT_GOF = 13
SALT_MC = 14

# wrap-count threshold between the explicit union walk and the periodic
# candidate search
_CAP_UNION = 2048
# hard cap on exact window tests per slot in the periodic search
_WINDOW_BUDGET = 5_000_000

_TWO_PI = 2.0 * math.pi
_BLOCK = 1024


@dataclass(frozen=True)
class ModelConfig:
    """One network instance.

    Exactly one of r/beta must be given; beta in [0, 1/4] sets r = n**beta.
    The heavy-tailed model requires a FlightLaw.
    """

    n: int
    r: float | None = None
    beta: float | None = None
    model: str = MODEL_IID
    law: FlightLaw | None = None
    horizon_slots: int | None = None
    master_seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.model not in (MODEL_LEVY, MODEL_IID):
            raise ValueError(f"unknown model {self.model!r}")
        if (self.r is None) == (self.beta is None):
            raise ValueError("give exactly one of r or beta")
        if self.beta is not None:
            if not (0.0 <= self.beta <= 0.25):
                raise ValueError("beta must be in [0, 0.25]")
            object.__setattr__(self, "r", float(self.n) ** self.beta)
        # 2*sqrt(n) is the disc diameter, the largest meaningful range
        if not (0.0 < self.r <= 2.0 * math.sqrt(self.n)):
            raise ValueError("require 0 < r <= 2*sqrt(n)")
        if self.model == MODEL_LEVY and self.law is None:
            raise ValueError("heavy-tailed model requires a FlightLaw")
        if self.horizon_slots is None:
            object.__setattr__(
                self, "horizon_slots",
                DEFAULT_HORIZON_LEVY if self.model == MODEL_LEVY else DEFAULT_HORIZON_IID)
        if self.horizon_slots < 1:
            raise ValueError("horizon_slots must be >= 1")

    @property
    def radius(self) -> float:
        return math.sqrt(self.n)

    def world(self) -> DiscWorld:
        return DiscWorld.for_n(self.n)


@dataclass(frozen=True)
class MeetingSample:
    """Outcome of one pair-meeting trial.

    meeting_time is the continuous first time the pair distance reaches r
    (slot index minus one plus the in-slot root), inf when censored at the
    horizon.  slot_indicators stops at the first 1.
    """

    initial_distance: float
    meeting_time: float
    met_at_t0: bool
    slot_indicators: list[int]
    censored: bool

    def __post_init__(self):
        if self.met_at_t0 != (self.meeting_time == 0.0):
            raise ValueError("met_at_t0 must mirror meeting_time == 0")
        if self.censored != math.isinf(self.meeting_time):
            raise ValueError("censored must mirror an infinite meeting_time")


@dataclass(frozen=True)
class DelaySample:
    """Outcome of one relay-scheme delay trial.

    neighbor_count is |I(s)| including the source itself.  delay is the
    continuous delivery time, inf when censored.
    """

    neighbor_count: int
    dest_in_range: bool
    delay: float
    censored: bool

    def __post_init__(self):
        if self.dest_in_range and self.delay != 0.0:
            raise ValueError("dest_in_range implies zero delay")


def trial_stream(master_seed: int, salt: int, index: int) -> np.random.Generator:
    """Deterministic stream for one unit of work; independent across indices."""
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((int(master_seed), int(salt), int(index)))))


# ---------------------------------------------------------------------------
# slot paths and the exact contact engine


def _seg_hit(ax: float, ay: float, bx: float, by: float, r: float):
    """Earliest s in [0,1] with |(1-s)(ax,ay) + s(bx,by)| <= r, else None."""
    c = ax * ax + ay * ay - r * r
    if c <= 0.0:
        return 0.0
    dx = bx - ax
    dy = by - ay
    a = dx * dx + dy * dy
    if a == 0.0:
        return None
    b = ax * dx + ay * dy
    if b >= 0.0:
        return None
    disc = b * b - a * c
    if disc < 0.0:
        return None
    # disc == 0 is an exact tangent touch; contact is inclusive
    s = (-b - math.sqrt(disc)) / a
    return s if s <= 1.0 else None


class _SlotPath:
    """Closed-form description of one node's path over one slot.

    Constant velocity (dx, dy); antipodal wraps at t1, t1+dt, ... with the
    path alternating between chord A (anchor ax,ay) and chord B (anchor
    bx,by), both traversed at the same velocity.  A tangent exit (chord
    length ~ 0) freezes the node at its re-entry point; that case has one
    wrap and is handled by the explicit piece list.
    """

    __slots__ = ("x0", "y0", "dx", "dy", "R", "t1", "dt", "n_wraps",
                 "ax", "ay", "bx", "by", "frozen")

    def __init__(self, x0, y0, dx, dy, R):
        self.x0 = x0
        self.y0 = y0
        self.dx = dx
        self.dy = dy
        self.R = R
        self.frozen = False
        ex_end = x0 + dx
        ey_end = y0 + dy
        if ex_end * ex_end + ey_end * ey_end <= R * R:
            # endpoints inside; the straight chord stays inside by convexity
            self.t1 = math.inf
            self.n_wraps = 0
            return
        u = _exit_fraction(x0, y0, dx, dy, R)
        if u is None or u >= 1.0:
            self.t1 = math.inf
            self.n_wraps = 0
            return
        ex = x0 + u * dx
        ey = y0 + u * dy
        pin = R / math.hypot(ex, ey)
        p1x = ex * pin
        p1y = ey * pin
        self.t1 = u
        speed = math.hypot(dx, dy)
        vhx = dx / speed
        vhy = dy / speed
        s = 2.0 * (p1x * vhx + p1y * vhy)
        self.ax = -p1x
        self.ay = -p1y
        if s <= 1e-12 * R:
            self.frozen = True
            self.n_wraps = 1
            self.dt = math.inf
            self.bx = self.ax
            self.by = self.ay
            return
        p2x = -p1x + s * vhx
        p2y = -p1y + s * vhy
        self.bx = -p2x
        self.by = -p2y
        self.dt = s / speed
        self.n_wraps = 1 + int((1.0 - u) / self.dt)

    def pos(self, t: float):
        if self.n_wraps == 0 or t <= self.t1:
            return self.x0 + self.dx * t, self.y0 + self.dy * t
        if self.frozen:
            return self.ax, self.ay
        k = int((t - self.t1) / self.dt)
        ph = t - (self.t1 + k * self.dt)
        if k % 2 == 0:
            return self.ax + self.dx * ph, self.ay + self.dy * ph
        return self.bx + self.dx * ph, self.by + self.dy * ph

    def pieces_in(self, lo: float, hi: float):
        """Linear pieces (ta, tb, px, py, vx, vy) covering [lo, hi].

        Anchor (px, py) is the piece's position at ta' = piece start; the
        position at any t inside is anchor + v*(t - ta_piece).  Yielded
        tuples carry the piece's own start time for that purpose.
        """
        out = []
        if self.n_wraps == 0:
            out.append((max(0.0, lo), min(1.0, hi), 0.0, self.x0, self.y0, self.dx, self.dy))
            return out
        if lo < self.t1:
            out.append((max(0.0, lo), min(self.t1, hi), 0.0, self.x0, self.y0, self.dx, self.dy))
        if hi <= self.t1:
            return out
        if self.frozen:
            out.append((max(lo, self.t1), min(1.0, hi), self.t1, self.ax, self.ay, 0.0, 0.0))
            return out
        m_lo = max(0, int((max(lo, self.t1) - self.t1) / self.dt))
        m_hi = min(self.n_wraps - 1, int((min(hi, 1.0) - self.t1) / self.dt))
        for m in range(m_lo, m_hi + 1):
            ta = self.t1 + m * self.dt
            tb = min(ta + self.dt, 1.0)
            a = max(ta, lo)
            b = min(tb, hi)
            if b <= a:
                continue
            if m % 2 == 0:
                out.append((a, b, ta, self.ax, self.ay, self.dx, self.dy))
            else:
                out.append((a, b, ta, self.bx, self.by, self.dx, self.dy))
        return out

    def pieces(self):
        return self.pieces_in(0.0, 1.0)

    def end_pos(self):
        return self.pos(1.0)


def _walk_pieces(pieces1, pieces2, r: float):
    """Exact earliest contact over merged linear pieces; None if clear."""
    i = 0
    j = 0
    n1 = len(pieces1)
    n2 = len(pieces2)
    while i < n1 and j < n2:
        a1, b1, t01, px1, py1, vx1, vy1 = pieces1[i]
        a2, b2, t02, px2, py2, vx2, vy2 = pieces2[j]
        lo = a1 if a1 > a2 else a2
        hi = b1 if b1 < b2 else b2
        if hi > lo:
            rx0 = (px1 + vx1 * (lo - t01)) - (px2 + vx2 * (lo - t02))
            ry0 = (py1 + vy1 * (lo - t01)) - (py2 + vy2 * (lo - t02))
            rx1 = (px1 + vx1 * (hi - t01)) - (px2 + vx2 * (hi - t02))
            ry1 = (py1 + vy1 * (hi - t01)) - (py2 + vy2 * (hi - t02))
            s = _seg_hit(rx0, ry0, rx1, ry1, r)
            if s is not None:
                return lo + s * (hi - lo)
        if b1 <= b2:
            i += 1
        if b2 <= b1:
            j += 1
    return None


def _convex_sublevel(px, py, vx, vy, dur, sx0, sy0, sx1, sy1, r):
    """{phi in [0, dur] : dist(point(phi), segment) <= r} for a linear point.

    Distance from an affinely moving point to a fixed segment is convex in
    phi, so the sublevel set is one interval; returns (phi_lo, phi_hi) or
    None.  Crossings are bracketed by bisection to ~1e-13*dur; the caller
    pads its window enumeration by one window either side.
    """

    def g(ph):
        qx = px + vx * ph
        qy = py + vy * ph
        dx = sx1 - sx0
        dy = sy1 - sy0
        den = dx * dx + dy * dy
        ex = qx - sx0
        ey = qy - sy0
        if den > 0.0:
            t = (ex * dx + ey * dy) / den
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            ex -= t * dx
            ey -= t * dy
        return math.hypot(ex, ey)

    lo_v = g(0.0)
    hi_v = g(dur)
    # ternary search for the convex minimum
    a, b = 0.0, dur
    for _ in range(80):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if g(m1) <= g(m2):
            b = m2
        else:
            a = m1
    pm = 0.5 * (a + b)
    if g(pm) > r:
        return None

    def cross(lo, hi, inside_at_hi):
        # one crossing of r in [lo, hi]; keep the bracket around it
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            if (g(mid) <= r) == inside_at_hi:
                hi = mid
            else:
                lo = mid
        return lo if inside_at_hi else hi

    # enter branch: outside at 0, inside at pm; exit branch: the reverse
    phi_lo = 0.0 if lo_v <= r else cross(0.0, pm, True)
    phi_hi = dur if hi_v <= r else cross(pm, dur, False)
    return phi_lo, phi_hi


def _periodic_search(fast: _SlotPath, slow: _SlotPath, r: float):
    """Earliest contact when the faster node wraps too often to enumerate.

    For t >= fast.t1 the fast node occupies one of its two chords, so any
    contact instant satisfies dist(slow(t), chord) <= r for the active
    chord.  The slow node's pieces fall into at most four spatial classes
    (pre-wrap piece, chord A, chord B, final partial piece); per class and
    per fast chord the candidate times form one phase interval, repeated
    at the class period.  Only fast windows inside candidates are tested.
    """
    budget = _WINDOW_BUDGET
    best = math.inf

    # before the fast node's first wrap it is linear: walk explicitly
    if fast.t1 > 0.0:
        zhit = _walk_pieces(fast.pieces_in(0.0, min(fast.t1, 1.0)),
                            slow.pieces_in(0.0, min(fast.t1, 1.0)), r)
        if zhit is not None:
            return zhit
    if fast.t1 >= 1.0:
        return None

    dtf = fast.dt

    # slow-node classes: (piece duration, anchor, velocity, start0, step, count)
    classes = []
    if slow.n_wraps == 0:
        classes.append((1.0, slow.x0, slow.y0, slow.dx, slow.dy, 0.0, 1.0, 1))
    else:
        classes.append((slow.t1, slow.x0, slow.y0, slow.dx, slow.dy, 0.0, 1.0, 1))
        if slow.frozen:
            classes.append((1.0 - slow.t1, slow.ax, slow.ay, 0.0, 0.0, slow.t1, 1.0, 1))
        else:
            dts = slow.dt
            m_full = int((1.0 - slow.t1) / dts)
            n_a = (m_full + 1) // 2
            n_b = m_full // 2
            if n_a:
                classes.append((dts, slow.ax, slow.ay, slow.dx, slow.dy,
                                slow.t1, 2.0 * dts, n_a))
            if n_b:
                classes.append((dts, slow.bx, slow.by, slow.dx, slow.dy,
                                slow.t1 + dts, 2.0 * dts, n_b))
            t_part = slow.t1 + m_full * dts
            if t_part < 1.0:
                anch = (slow.ax, slow.ay) if m_full % 2 == 0 else (slow.bx, slow.by)
                classes.append((1.0 - t_part, anch[0], anch[1], slow.dx, slow.dy,
                                t_part, 1.0, 1))

    last_fast_piece = fast.n_wraps - 1
    for chord_par, (cx, cy) in ((0, (fast.ax, fast.ay)), (1, (fast.bx, fast.by))):
        sx1 = cx + fast.dx * dtf
        sy1 = cy + fast.dy * dtf
        for dur, px, py, vx, vy, start0, step, count in classes:
            if dur <= 0.0:
                continue
            sub = _convex_sublevel(px, py, vx, vy, dur, cx, cy, sx1, sy1, r)
            if sub is None:
                continue
            phi_lo, phi_hi = sub
            hit_t = None
            for k in range(count):
                o = start0 + k * step
                w_lo = max(o + phi_lo, fast.t1, o)
                w_hi = min(o + phi_hi, 1.0, o + dur)
                if w_hi < w_lo:
                    continue
                m0 = int((w_lo - fast.t1) / dtf) - 2
                m1 = int((w_hi - fast.t1) / dtf) + 2
                if m0 % 2 != chord_par:
                    m0 += 1
                for m in range(max(m0, chord_par), min(m1, last_fast_piece) + 1, 2):
                    wa = fast.t1 + m * dtf
                    wb = min(wa + dtf, 1.0)
                    a = max(wa, w_lo, o)
                    b = min(wb, w_hi, o + dur)
                    if b <= a:
                        continue
                    budget -= 1
                    if budget < 0:
                        raise RuntimeError("slot contact search budget exceeded")
                    fx0 = cx + fast.dx * (a - wa)
                    fy0 = cy + fast.dy * (a - wa)
                    fx1 = cx + fast.dx * (b - wa)
                    fy1 = cy + fast.dy * (b - wa)
                    yx0 = px + vx * (a - o)
                    yy0 = py + vy * (a - o)
                    yx1 = px + vx * (b - o)
                    yy1 = py + vy * (b - o)
                    s = _seg_hit(fx0 - yx0, fy0 - yy0, fx1 - yx1, fy1 - yy1, r)
                    if s is not None:
                        hit_t = a + s * (b - a)
                        break
                if hit_t is not None:
                    break
            if hit_t is not None and hit_t < best:
                best = hit_t
    return None if math.isinf(best) else best


def _pair_slot_contact(x1, y1, d1x, d1y, x2, y2, d2x, d2y, R, r):
    """Exact earliest in-slot contact time for two wrapped paths.

    Returns (t_hit or None, end1x, end1y, end2x, end2y).
    """
    e1x = x1 + d1x
    e1y = y1 + d1y
    e2x = x2 + d2x
    e2y = y2 + d2y
    if (e1x * e1x + e1y * e1y <= R * R) and (e2x * e2x + e2y * e2y <= R * R):
        s = _seg_hit(x1 - x2, y1 - y2, e1x - e2x, e1y - e2y, r)
        return s, e1x, e1y, e2x, e2y
    p1 = _SlotPath(x1, y1, d1x, d1y, R)
    p2 = _SlotPath(x2, y2, d2x, d2y, R)
    if p1.n_wraps + p2.n_wraps <= _CAP_UNION:
        t = _walk_pieces(p1.pieces(), p2.pieces(), r)
    elif p1.n_wraps >= p2.n_wraps:
        t = _periodic_search(p1, p2, r)
    else:
        t = _periodic_search(p2, p1, r)
    ex1, ey1 = p1.end_pos()
    ex2, ey2 = p2.end_pos()
    return t, ex1, ey1, ex2, ey2


# ---------------------------------------------------------------------------
# public operations


def slot_contact(rel_pieces: list[SubSegment], r: float) -> bool:
    """True iff any relative-motion piece comes within r of the origin."""
    if not rel_pieces:
        raise ValueError("need at least one relative-motion piece")
    return any(segment_hits_disc(p.start, p.end, ORIGIN, r) for p in rel_pieces)


def _draw_flight_vector(rng: np.random.Generator, law: FlightLaw):
    theta = _TWO_PI * (1.0 - rng.uniform())
    if law.sampler == "truncated_pareto":
        u = 1.0 - rng.uniform()
        z = law.z_th * u ** (-1.0 / law.alpha)
    else:
        z = abs(_scalar_stable(rng, law.alpha, law.scale_s))
    return z * math.cos(theta), z * math.sin(theta)


def _scalar_stable(rng, alpha, scale_s):
    u = rng.uniform(-math.pi / 2.0, math.pi / 2.0)
    w = rng.standard_exponential()
    if alpha == 1.0:
        return scale_s * math.tan(u)
    su = math.sin(alpha * u)
    cu = math.cos(u)
    cd = math.cos((1.0 - alpha) * u)
    return scale_s * (su / cu ** (1.0 / alpha)) * (cd / w) ** ((1.0 - alpha) / alpha)


def _simulate_pair_core(rng: np.random.Generator, cfg: ModelConfig,
                        slotted: bool = False):
    """One pair trial; returns (l0, t_meet, slots_run, t_slotted).

    t_meet is inf when censored.  When slotted is set the trial also runs
    the boundary-only detector on the same trajectory (first integer slot
    whose endpoint distance is <= r) and keeps simulating until both
    detectors fire or the horizon ends.
    """
    R = cfg.radius
    r = cfg.r
    th = rng.uniform(0.0, _TWO_PI, 2)
    rho = R * np.sqrt(rng.uniform(0.0, 1.0, 2))
    x1 = rho[0] * math.cos(th[0])
    y1 = rho[0] * math.sin(th[0])
    x2 = rho[1] * math.cos(th[1])
    y2 = rho[1] * math.sin(th[1])
    l0 = math.hypot(x1 - x2, y1 - y2)
    if l0 <= r:
        return l0, 0.0, 0, 0.0
    levy = cfg.model == MODEL_LEVY
    law = cfg.law
    t_cont = math.inf
    t_slot = math.inf
    for k in range(1, cfg.horizon_slots + 1):
        if levy:
            d1x, d1y = _draw_flight_vector(rng, law)
            d2x, d2y = _draw_flight_vector(rng, law)
            s, x1n, y1n, x2n, y2n = _pair_slot_contact(
                x1, y1, d1x, d1y, x2, y2, d2x, d2y, R, r)
        else:
            th1 = rng.uniform(0.0, _TWO_PI)
            rho1 = R * math.sqrt(rng.uniform())
            th2 = rng.uniform(0.0, _TWO_PI)
            rho2 = R * math.sqrt(rng.uniform())
            x1n = rho1 * math.cos(th1)
            y1n = rho1 * math.sin(th1)
            x2n = rho2 * math.cos(th2)
            y2n = rho2 * math.sin(th2)
            s = _seg_hit(x1 - x2, y1 - y2, x1n - x2n, y1n - y2n, r)
        if s is not None and math.isinf(t_cont):
            t_cont = (k - 1) + s
            if not slotted:
                return l0, t_cont, k, t_slot
        x1, y1, x2, y2 = x1n, y1n, x2n, y2n
        if slotted and math.isinf(t_slot):
            if math.hypot(x1 - x2, y1 - y2) <= r:
                t_slot = float(k)
        if not (math.isinf(t_cont) or (slotted and math.isinf(t_slot))):
            return l0, t_cont, k, t_slot
    return l0, t_cont, cfg.horizon_slots, t_slot


def simulate_pair_meeting(rng: np.random.Generator, cfg: ModelConfig) -> MeetingSample:
    """Simulate one uniformly placed pair until first contact or horizon."""
    l0, t, slots, _ = _simulate_pair_core(rng, cfg)
    censored = math.isinf(t)
    if t == 0.0:
        indicators: list[int] = []
    elif censored:
        indicators = [0] * slots
    else:
        indicators = [0] * (slots - 1) + [1]
    return MeetingSample(initial_distance=l0, meeting_time=t,
                         met_at_t0=(t == 0.0), slot_indicators=indicators,
                         censored=censored)


def neighbor_set(positions: list[Point2], s: int, r: float) -> set[int]:
    """Indices within range r of node s (plain distance), including s."""
    if not (0 <= s < len(positions)):
        raise IndexError("source index out of range")
    ps = positions[s]
    return {i for i, p in enumerate(positions)
            if i == s or (p - ps).norm() <= r}


def build_slot_trajectories(states: list[Point2], rng_streams, cfg: ModelConfig):
    """Advance every node one slot; per-node streams keep nodes independent."""
    world = cfg.world()
    out = []
    if cfg.model == MODEL_LEVY:
        for p, rng in zip(states, rng_streams):
            f = sample_flight(rng, cfg.law)
            out.append(next_position_levy(p, f, world))
    else:
        for p, rng in zip(states, rng_streams):
            q = next_position_iid(rng, world)
            out.append([SubSegment(p, q, 0.0, 1.0)])
    return out


def _relay_slot_hits_np(rxs, rys, rexs, reys, dx0, dy0, dx1, dy1, r):
    """Vectorised earliest-hit fractions of relays against the destination.

    Inputs are relay start/end coordinate arrays and the destination's
    start/end; all paths must be wrap-free (straight).  Returns an array
    of in-slot hit fractions (nan where no hit).
    """
    ax = rxs - dx0
    ay = rys - dy0
    bx = rexs - dx1
    by = reys - dy1
    c = ax * ax + ay * ay - r * r
    ddx = bx - ax
    ddy = by - ay
    a = ddx * ddx + ddy * ddy
    b = ax * ddx + ay * ddy
    out = np.full(ax.shape, np.nan)
    at0 = c <= 0.0
    out[at0] = 0.0
    disc = b * b - a * c
    ok = (~at0) & (b < 0.0) & (disc > 0.0) & (a > 0.0)
    s = np.full(ax.shape, np.nan)
    s[ok] = (-b[ok] - np.sqrt(disc[ok])) / a[ok]
    good = ok & (s <= 1.0)
    out[good] = s[good]
    return out


def _simulate_delay_core(rng: np.random.Generator, cfg: ModelConfig):
    """One relay-scheme trial; returns (neighbor_count, dest_in_range, delay)."""
    if cfg.n < 2:
        raise ValueError("need n >= 2")
    R = cfg.radius
    r = cfg.r
    xs, ys = uniform_points_in_disc(rng, R, cfg.n)
    d2s = (xs - xs[0]) ** 2 + (ys - ys[0]) ** 2
    in_range = d2s <= r * r
    ncount = int(in_range.sum())  # includes s
    if in_range[1]:
        return ncount, True, 0.0
    relay_idx = np.flatnonzero(in_range)
    relay_idx = relay_idx[relay_idx != 1]
    rx = xs[relay_idx].copy()
    ry = ys[relay_idx].copy()
    dxp = float(xs[1])
    dyp = float(ys[1])
    k_relays = rx.size
    levy = cfg.model == MODEL_LEVY
    law = cfg.law
    for k in range(1, cfg.horizon_slots + 1):
        if levy:
            # draw order: angles then lengths for [relays..., dest]
            thetas = _TWO_PI * (1.0 - rng.uniform(0.0, 1.0, k_relays + 1))
            if law.sampler == "truncated_pareto":
                u = 1.0 - rng.uniform(0.0, 1.0, k_relays + 1)
                zs = law.z_th * u ** (-1.0 / law.alpha)
            else:
                zs = np.abs(sample_stable_symmetric_np(rng, law.alpha, law.scale_s,
                                                       k_relays + 1))
            ddx = zs * np.cos(thetas)
            ddy = zs * np.sin(thetas)
            ex = rx + ddx[:-1]
            ey = ry + ddy[:-1]
            dex = dxp + ddx[-1]
            dey = dyp + ddy[-1]
            relay_wraps = ex * ex + ey * ey > R * R
            dest_wraps = dex * dex + dey * dey > R * R
            best = math.inf
            if dest_wraps or relay_wraps.any():
                for i in range(k_relays):
                    t, e1x, e1y, e2x, e2y = _pair_slot_contact(
                        float(rx[i]), float(ry[i]), float(ddx[i]), float(ddy[i]),
                        dxp, dyp, float(ddx[-1]), float(ddy[-1]), R, r)
                    ex[i] = e1x
                    ey[i] = e1y
                    dex, dey = e2x, e2y
                    if t is not None and t < best:
                        best = t
            else:
                hits = _relay_slot_hits_np(rx, ry, ex, ey, dxp, dyp, dex, dey, r)
                if not np.all(np.isnan(hits)):
                    best = float(np.nanmin(hits))
            if best < math.inf:
                return ncount, False, (k - 1) + best
            rx, ry = ex, ey
            dxp, dyp = float(dex), float(dey)
        else:
            # draw order: one batch of fresh locations for [relays..., dest]
            nex, ney = uniform_points_in_disc(rng, R, k_relays + 1)
            hits = _relay_slot_hits_np(rx, ry, nex[:-1], ney[:-1],
                                       dxp, dyp, float(nex[-1]), float(ney[-1]), r)
            if not np.all(np.isnan(hits)):
                return ncount, False, (k - 1) + float(np.nanmin(hits))
            rx = nex[:-1].copy()
            ry = ney[:-1].copy()
            dxp = float(nex[-1])
            dyp = float(ney[-1])
    return ncount, False, math.inf


def simulate_scheme_delay(rng: np.random.Generator, cfg: ModelConfig) -> DelaySample:
    """One delivery-delay trial of the broadcast-once relay scheme.

    n nodes are placed uniformly; the source's initial neighbours (and the
    source) carry the packet from t=0 and never hand it to each other; the
    delay is the earliest continuous contact between any carrier and the
    destination.
    """
    ncount, dest0, delay = _simulate_delay_core(rng, cfg)
    return DelaySample(neighbor_count=ncount, dest_in_range=dest0,
                       delay=delay, censored=math.isinf(delay))


# ---------------------------------------------------------------------------
# block-sharded batch runners (worker-count invariant)


def _meet_block(args):
    master_seed, salt, block, count, cfg, slotted = args
    rng = trial_stream(master_seed, salt, block)
    l0 = np.empty(count)
    tm = np.empty(count)
    ts = np.empty(count)
    for i in range(count):
        a, b, _, d = _simulate_pair_core(rng, cfg, slotted=slotted)
        l0[i] = a
        tm[i] = b
        ts[i] = d
    return l0, tm, ts


def _delay_block(args):
    master_seed, salt, block, count, cfg = args
    rng = trial_stream(master_seed, salt, block)
    nc = np.empty(count, dtype=np.int64)
    d0 = np.empty(count, dtype=bool)
    dl = np.empty(count)
    for i in range(count):
        a, b, c = _simulate_delay_core(rng, cfg)
        nc[i] = a
        d0[i] = b
        dl[i] = c
    return nc, d0, dl


def _run_sharded(fn, argl, workers):
    if workers <= 1:
        return [fn(a) for a in argl]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, argl))


def pair_meeting_times(cfg: ModelConfig, trials: int, salt: int = SALT_MEET,
                       workers: int = 1, slotted: bool = False):
    """Batch pair-meeting trials.

    Returns (l0, t_meet, t_slotted) float arrays; censored entries are inf.
    Trials are sharded into fixed blocks with per-block streams, so the
    result does not depend on the worker count.
    """
    blocks = [(cfg.master_seed, salt, b, min(_BLOCK, trials - b * _BLOCK), cfg, slotted)
              for b in range((trials + _BLOCK - 1) // _BLOCK)]
    parts = _run_sharded(_meet_block, blocks, workers)
    l0 = np.concatenate([p[0] for p in parts])
    tm = np.concatenate([p[1] for p in parts])
    ts = np.concatenate([p[2] for p in parts])
    return l0, tm, ts


def scheme_delays(cfg: ModelConfig, trials: int, salt: int = SALT_DELAY,
                  workers: int = 1):
    """Batch relay-scheme delay trials; returns (neighbor_counts, dest0, delays)."""
    blocks = [(cfg.master_seed, salt, b, min(_BLOCK, trials - b * _BLOCK), cfg)
              for b in range((trials + _BLOCK - 1) // _BLOCK)]
    parts = _run_sharded(_delay_block, blocks, workers)
    nc = np.concatenate([p[0] for p in parts])
    d0 = np.concatenate([p[1] for p in parts])
    dl = np.concatenate([p[2] for p in parts])
    return nc, d0, dl
