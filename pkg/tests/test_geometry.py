"""Geometry primitives: disc sampling, segment proximity, blocked-set
membership, the central-angle formula, and antipodal wrapping."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from mobidelay.geometry import (
    DiscWorld,
    Point2,
    SubSegment,
    central_angle_phi,
    in_S,
    in_S_star,
    min_dist_segment_to_point,
    segment_hits_disc,
    uniform_point_in_disc,
    wrap_flight,
)

RNG = lambda seed: np.random.default_rng(seed)


def _pt(x, y):
    return Point2(float(x), float(y))


# ---------------------------------------------------------------------------
# uniform_point_in_disc


def test_disc_sampling_support():
    rng = RNG(1)
    for _ in range(2000):
        p = uniform_point_in_disc(rng, 1.0)
        assert p.norm() <= 1.0


def test_disc_sampling_rejects_bad_radius():
    with pytest.raises(ValueError):
        uniform_point_in_disc(RNG(0), 0.0)
    with pytest.raises(ValueError):
        uniform_point_in_disc(RNG(0), -2.0)


def test_disc_sampling_moments():
    # E|p|^2 = R^2/2 and P{|p| <= R/2} = 1/4 for uniform area sampling
    rng = RNG(2)
    n = 10**6
    sq = np.empty(n)
    for i in range(n):
        p = uniform_point_in_disc(rng, 10.0)
        sq[i] = p.x * p.x + p.y * p.y
    mean_sq = sq.mean()
    se_sq = sq.std(ddof=1) / math.sqrt(n)
    assert abs(mean_sq - 50.0) <= 3.0 * se_sq

    inner = float(np.mean(sq <= 25.0))
    se_in = math.sqrt(0.25 * 0.75 / n)
    assert abs(inner - 0.25) <= 3.0 * se_in


# ---------------------------------------------------------------------------
# min_dist_segment_to_point / segment_hits_disc


@pytest.mark.parametrize("a,b,q,want", [
    ((0, 3), (0, 5), (0, 0), 3.0),            # nearest endpoint
    ((-2, 1), (2, 1), (0, 0), 1.0),           # interior foot
    ((1, 0), (0, 1), (0, 0), math.sqrt(2) / 2),
])
def test_min_dist_examples(a, b, q, want):
    got = min_dist_segment_to_point(_pt(*a), _pt(*b), _pt(*q))
    assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("a,b,c,r,want", [
    ((0, 3), (0, 5), (0, 0), 1.0, False),
    ((-2, 0), (2, 0), (0, 0), 1.0, True),
    ((0, 3), (0, 5), (0, 0), 3.0, True),      # boundary touch counts
])
def test_segment_hits_disc_examples(a, b, c, r, want):
    assert segment_hits_disc(_pt(*a), _pt(*b), _pt(*c), r) is want


def test_segment_hits_disc_rejects_negative_r():
    with pytest.raises(ValueError):
        segment_hits_disc(_pt(0, 0), _pt(1, 0), _pt(0, 0), -0.5)


finite_coord = st.floats(min_value=-50, max_value=50, allow_nan=False)


@given(ax=finite_coord, ay=finite_coord, bx=finite_coord, by=finite_coord,
       qx=finite_coord, qy=finite_coord)
@settings(max_examples=300, deadline=None)
def test_min_dist_symmetry_and_endpoint_bound(ax, ay, bx, by, qx, qy):
    a, b, q = _pt(ax, ay), _pt(bx, by), _pt(qx, qy)
    d_ab = min_dist_segment_to_point(a, b, q)
    d_ba = min_dist_segment_to_point(b, a, q)
    assert d_ab == pytest.approx(d_ba, abs=1e-9)
    assert d_ab <= min((a - q).norm(), (b - q).norm()) + 1e-12


@given(ax=finite_coord, ay=finite_coord, bx=finite_coord, by=finite_coord,
       r=st.floats(min_value=0, max_value=10),
       bump=st.floats(min_value=0, max_value=10))
@settings(max_examples=300, deadline=None)
def test_segment_hits_disc_monotone_in_r(ax, ay, bx, by, r, bump):
    a, b, c = _pt(ax, ay), _pt(bx, by), _pt(0, 0)
    if segment_hits_disc(a, b, c, r):
        assert segment_hits_disc(a, b, c, r + bump)


# ---------------------------------------------------------------------------
# blocked sets


def test_in_S_trivial_membership():
    assert in_S(10.0, _pt(5, 5), 1.0) is True
    assert in_S(10.0, _pt(0, -10), 1.0) is False


def test_in_S_rejects_bad_l0():
    with pytest.raises(ValueError):
        in_S(1.0, _pt(1, 1), 1.0)
    with pytest.raises(ValueError):
        in_S(0.5, _pt(1, 1), 1.0)


def test_in_S_tangent_angle_fraction():
    # x uniform on the circle of radius 20 around the blocking disc's
    # center (0,-l0); the visible fraction is set by the two tangent
    # half-angles asin(r/l0) (from the segment anchor) and asin(r/20).
    l0, r, rad = 10.0, 1.0, 20.0
    want = 1.0 - (math.asin(r / l0) + math.asin(r / rad)) / math.pi

    # independent oracle: exhaustive evenly spaced angle scan
    m = 400_000
    ang = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    hits = sum(
        in_S(l0, _pt(rad * math.cos(t), -l0 + rad * math.sin(t)), r)
        for t in ang[:: m // 4000])
    scan_frac = hits / len(ang[:: m // 4000])
    assert scan_frac == pytest.approx(want, abs=2e-3)

    rng = RNG(3)
    n = 200_000
    th = rng.uniform(0.0, 2.0 * math.pi, n)
    got = np.fromiter(
        (in_S(l0, _pt(rad * math.cos(t), -l0 + rad * math.sin(t)), r)
         for t in th), dtype=bool, count=n).mean()
    se = math.sqrt(want * (1.0 - want) / n)
    assert abs(got - want) <= 3.0 * se


def test_in_S_star_trivial_membership():
    assert in_S_star(10.0, _pt(0, 5), 1.0) is True
    assert in_S_star(10.0, _pt(0, -5), 1.0) is False
    with pytest.raises(ValueError):
        in_S_star(1.0, _pt(0, 5), 2.0)


@pytest.mark.parametrize("x_mag", [3.0, 8.0, 14.0, 20.0])
def test_in_S_star_arc_matches_central_angle(x_mag):
    # membership of x on the circle |x| = x_mag forms an arc whose central
    # angle is the phi formula at l0 = 2*sqrt(n)
    n = 100
    l0 = 2.0 * math.sqrt(n)
    r = 1.0
    m = 200_000
    ang = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    step = m // 5000
    sel = ang[::step]
    frac = sum(
        in_S_star(l0, _pt(x_mag * math.sin(t), x_mag * math.cos(t)), r)
        for t in sel) / len(sel)
    want = central_angle_phi(x_mag, r, n) / (2.0 * math.pi)
    assert frac == pytest.approx(want, abs=2e-3)


# ---------------------------------------------------------------------------
# central_angle_phi


def test_phi_no_obstruction_limit():
    assert central_angle_phi(20.0, 1e-12, 100) == pytest.approx(
        2.0 * math.pi, abs=1e-9)


def test_phi_reference_value():
    got = central_angle_phi(20.0, 2.0, 100)
    want = 2.0 * math.pi - 4.0 * math.asin(0.1)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(5.8824, abs=5e-4)


def test_phi_symmetric_at_diameter():
    n = 49
    r = 1.5
    got = central_angle_phi(2.0 * math.sqrt(n), r, n)
    want = 2.0 * math.pi - 4.0 * math.asin(r / (2.0 * math.sqrt(n)))
    assert got == pytest.approx(want, rel=1e-12)


def test_phi_domain_errors():
    with pytest.raises(ValueError):
        central_angle_phi(1.0, 2.0, 100)          # x_mag <= r
    with pytest.raises(ValueError):
        central_angle_phi(25.0, 1.0, 100)         # beyond diameter


@given(r=st.floats(min_value=0.01, max_value=1.5),
       bump=st.floats(min_value=1e-6, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_phi_decreasing_in_r(r, bump):
    if r + bump < 10.0:
        assert central_angle_phi(10.0, r + bump, 100) < central_angle_phi(10.0, r, 100)


@given(x=st.floats(min_value=2.0, max_value=19.0),
       bump=st.floats(min_value=1e-6, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_phi_increasing_in_x(x, bump):
    got_lo = central_angle_phi(x, 1.0, 100)
    got_hi = central_angle_phi(x + bump, 1.0, 100)
    assert got_hi > got_lo


# ---------------------------------------------------------------------------
# set monotonicity and rotation invariance

point_in_box = st.tuples(st.floats(min_value=-30, max_value=30),
                         st.floats(min_value=-30, max_value=30))


@given(xy=point_in_box,
       l0=st.floats(min_value=2.0, max_value=15.0),
       grow=st.floats(min_value=0.0, max_value=10.0))
@settings(max_examples=300, deadline=None)
def test_S_membership_monotone_in_l0(xy, l0, grow):
    x = _pt(*xy)
    r = 1.0
    if in_S(l0, x, r):
        assert in_S(l0 + grow, x, r)
    if in_S_star(l0, x, r):
        assert in_S_star(l0 + grow, x, r)


@given(ax=finite_coord, ay=finite_coord, bx=finite_coord, by=finite_coord,
       cx=finite_coord, cy=finite_coord,
       r=st.floats(min_value=0.1, max_value=5.0),
       theta=st.floats(min_value=0.0, max_value=2 * math.pi))
@settings(max_examples=300, deadline=None)
def test_contact_rotation_invariance(ax, ay, bx, by, cx, cy, r, theta):
    # rotating segment and disc center together never changes the verdict
    def rot(p):
        c, s = math.cos(theta), math.sin(theta)
        return _pt(c * p.x - s * p.y, s * p.x + c * p.y)

    a, b, c = _pt(ax, ay), _pt(bx, by), _pt(cx, cy)
    d0 = min_dist_segment_to_point(a, b, c)
    d1 = min_dist_segment_to_point(rot(a), rot(b), rot(c))
    assert d1 == pytest.approx(d0, abs=1e-9)
    if abs(d0 - r) > 1e-7:        # verdict stable away from the boundary
        assert segment_hits_disc(a, b, c, r) == segment_hits_disc(
            rot(a), rot(b), rot(c), r)


# ---------------------------------------------------------------------------
# wrap_flight


def test_wrap_flight_no_crossing():
    w = DiscWorld(10.0, 100)
    pieces = wrap_flight(_pt(0, 0), _pt(1, 0), w)
    assert len(pieces) == 1
    assert pieces[0].start == _pt(0, 0)
    assert pieces[0].end == _pt(1, 0)
    assert pieces[0].t_begin == 0.0 and pieces[0].t_end == 1.0


def test_wrap_flight_single_antipodal_crossing():
    w = DiscWorld(10.0, 100)
    pieces = wrap_flight(_pt(9, 0), _pt(2, 0), w)
    assert len(pieces) == 2
    assert pieces[0].start == _pt(9, 0)
    assert pieces[0].end.x == pytest.approx(10.0, abs=1e-12)
    assert pieces[0].end.y == pytest.approx(0.0, abs=1e-12)
    assert pieces[1].start.x == pytest.approx(-10.0, abs=1e-12)
    assert pieces[1].end.x == pytest.approx(-9.0, abs=1e-12)
    # time split at the boundary crossing
    assert pieces[0].t_end == pytest.approx(0.5, abs=1e-12)
    assert pieces[1].t_begin == pytest.approx(0.5, abs=1e-12)


def test_wrap_flight_rejects_outside_start():
    w = DiscWorld(10.0, 100)
    with pytest.raises(ValueError):
        wrap_flight(_pt(11, 0), _pt(1, 0), w)


def test_wrap_flight_zero_displacement():
    w = DiscWorld(10.0, 100)
    pieces = wrap_flight(_pt(3, 4), _pt(0, 0), w)
    assert len(pieces) == 1
    assert pieces[0].start == pieces[0].end == _pt(3, 4)


@given(sx=st.floats(min_value=-7, max_value=7),
       sy=st.floats(min_value=-7, max_value=7),
       dx=st.floats(min_value=-300, max_value=300),
       dy=st.floats(min_value=-300, max_value=300))
@settings(max_examples=300, deadline=None)
def test_wrap_flight_pieces_partition_and_stay_inside(sx, sy, dx, dy):
    w = DiscWorld(10.0, 100)
    start = _pt(sx, sy)
    disp = _pt(dx, dy)
    pieces = wrap_flight(start, disp, w)
    tol = 1e-9 * w.radius
    assert pieces[0].t_begin == 0.0
    assert pieces[-1].t_end == 1.0
    total = 0.0
    for i, p in enumerate(pieces):
        assert p.start.norm() <= w.radius + tol
        assert p.end.norm() <= w.radius + tol
        total += (p.end - p.start).norm()
        if i:
            assert p.t_begin == pytest.approx(pieces[i - 1].t_end, abs=1e-12)
    assert total == pytest.approx(disp.norm(), rel=1e-9, abs=1e-9)


def test_wrap_flight_preserves_uniform_stationarity():
    # uniform starts + wrapped flights of |d| <= R/2 keep uniform ends;
    # radial KS with F(rho) = (rho/R)^2 at the 1% level
    w = DiscWorld(10.0, 100)
    rng = RNG(5)
    n = 100_000
    th0 = rng.uniform(0, 2 * math.pi, n)
    rh0 = w.radius * np.sqrt(rng.uniform(0, 1, n))
    fa = rng.uniform(0, 2 * math.pi, n)
    fz = rng.uniform(0, w.radius / 2, n)
    u = np.empty(n)
    for i in range(n):
        start = _pt(rh0[i] * math.cos(th0[i]), rh0[i] * math.sin(th0[i]))
        disp = _pt(fz[i] * math.cos(fa[i]), fz[i] * math.sin(fa[i]))
        end = wrap_flight(start, disp, w)[-1].end
        u[i] = (end.norm() / w.radius) ** 2
    assert stats.kstest(u, "uniform").pvalue > 0.01


# ---------------------------------------------------------------------------
# dataclass invariants


def test_point2_requires_finite():
    with pytest.raises(ValueError):
        Point2(math.nan, 0.0)
    with pytest.raises(ValueError):
        Point2(0.0, math.inf)


def test_subsegment_time_ordering():
    with pytest.raises(ValueError):
        SubSegment(_pt(0, 0), _pt(1, 0), 0.7, 0.7)
    with pytest.raises(ValueError):
        SubSegment(_pt(0, 0), _pt(1, 0), -0.1, 0.5)


def test_discworld_radius_consistency():
    DiscWorld(math.sqrt(400), 400)
    with pytest.raises(ValueError):
        DiscWorld(21.0, 400)
    assert DiscWorld.for_n(400).radius == pytest.approx(20.0)
