import math

import pytest
from hypothesis import given, settings, strategies as st

from lorentzmaj import model as M
from lorentzmaj.errors import DomainError, NonRealizableError, OutOfRangeError

from _fixtures import KS, oracle_tau, rand_chain, rand_point, rng_for

CC = M.CausalClass


def pt(*c):
    return M.ModelPoint(tuple(float(x) for x in c))


# --- gauge -----------------------------------------------------------------

@pytest.mark.parametrize("K,s,D", [(0, 0, math.inf), (-1, 1, math.pi), (-4, 2, math.pi / 2), (1, 1, math.inf)])
def test_gauge(K, s, D):
    g = M.curvature_gauge(K)
    assert g.s == pytest.approx(s)
    assert g.D == pytest.approx(D)
    assert g.s ** 2 == pytest.approx(abs(K))


def test_gauge_rejects_nan():
    with pytest.raises(DomainError):
        M.curvature_gauge(float("nan"))


# --- tau / relation ---------------------------------------------------------

def test_flat_tau_examples():
    g = M.curvature_gauge(0)
    assert M.tau(g, pt(0, 0), pt(2, 1)) == pytest.approx(math.sqrt(3), rel=1e-12)
    assert M.tau(g, pt(0, 0), pt(1, 2)) == 0.0
    assert M.tau(g, pt(0, 0), pt(0, 0)) == 0.0
    assert M.relation(g, pt(0, 0), pt(2, 1)) is CC.CHRONOLOGICAL_FUTURE
    assert M.relation(g, pt(0, 0), pt(1, 1)) is CC.NULL_FUTURE
    assert M.relation(g, pt(0, 0), pt(1, 2)) is CC.UNRELATED
    assert M.relation(g, pt(2, 1), pt(0, 0)) is CC.CHRONOLOGICAL_PAST


@pytest.mark.parametrize("K", KS)
def test_tau_matches_closed_form(K):
    g = M.curvature_gauge(K)
    rng = rng_for(1)
    for _ in range(300):
        p, q = rand_point(g, rng), rand_point(g, rng)
        assert M.tau(g, p, q) == pytest.approx(oracle_tau(g, p, q), rel=1e-9, abs=1e-7)


@pytest.mark.parametrize("K", KS)
def test_relation_antisymmetric(K):
    g = M.curvature_gauge(K)
    rng = rng_for(2)
    for _ in range(300):
        p, q = rand_point(g, rng), rand_point(g, rng)
        assert M.relation(g, q, p) is M.relation(g, p, q).reverse()
        chron = M.relation(g, p, q) is CC.CHRONOLOGICAL_FUTURE
        assert chron == (M.tau(g, p, q) > 0)


@pytest.mark.parametrize("K", KS)
def test_reverse_triangle_inequality(K):
    g = M.curvature_gauge(K)
    rng = rng_for(3)
    for _ in range(300):
        p, q, r = rand_chain(g, rng, 3)
        assert M.tau(g, p, r) >= M.tau(g, p, q) + M.tau(g, q, r) - 1e-9


def test_ads_beyond_diameter_is_infinite():
    g = M.curvature_gauge(-1)
    o = M.origin(g)
    far = M.from_strip(g, 3.5, 0.0)
    assert M.relation(g, o, far) is CC.CHRONOLOGICAL_FUTURE
    assert M.tau(g, o, far) == math.inf


def test_ads_winding_separates_sheets():
    g = M.curvature_gauge(-1)
    o = M.origin(g)
    later = M.ModelPoint(o.coords, 1)
    assert M.relation(g, o, later) is CC.CHRONOLOGICAL_FUTURE
    assert M.relation(g, later, o) is CC.CHRONOLOGICAL_PAST


def test_validate_rejects_off_quadric():
    g = M.curvature_gauge(1)
    with pytest.raises(DomainError):
        M.make_point(g, (0.0, 2.0, 0.0))
    M.make_point(g, (0.0, 1.0, 0.0))


# --- geodesics -------------------------------------------------------------

def test_flat_midpoint():
    g = M.curvature_gauge(0)
    m = M.geodesic_point(g, pt(0, 0), pt(2, 1), 0.5)
    assert m.coords == pytest.approx((1.0, 0.5))
    assert M.geodesic_point(g, pt(0, 0), pt(2, 1), 0.0) == pt(0, 0)
    assert M.geodesic_point(g, pt(0, 0), pt(2, 1), 1.0) == pt(2, 1)


@pytest.mark.parametrize("K", KS)
def test_geodesic_point_splits_tau(K):
    g = M.curvature_gauge(K)
    rng = rng_for(4)
    for _ in range(100):
        p, q = rand_chain(g, rng, 2)
        t = rng.uniform()
        m = M.geodesic_point(g, p, q, t)
        T = M.tau(g, p, q)
        assert M.tau(g, p, m) == pytest.approx(t * T, abs=1e-9)
        assert M.tau(g, m, q) == pytest.approx((1 - t) * T, abs=1e-9)


def test_geodesic_point_needs_chronology():
    g = M.curvature_gauge(0)
    with pytest.raises(DomainError):
        M.geodesic_point(g, pt(0, 0), pt(1, 1), 0.5)


# --- law of cosines ----------------------------------------------------------

def test_loc_side_examples():
    g0 = M.curvature_gauge(0)
    assert M.loc_side(g0, 1, 2, M.SignedAngle(0.0, 1)) == pytest.approx(3.0)
    assert M.loc_side(g0, 1, 2, M.SignedAngle(0.5, 1)) == pytest.approx(math.sqrt(5 + 4 * math.cosh(0.5)), rel=1e-12)
    gm = M.curvature_gauge(-1)
    expect = math.acos(math.cos(0.5) ** 2 - math.cosh(1) * math.sin(0.5) ** 2)
    assert M.loc_side(gm, 0.5, 0.5, M.SignedAngle(1.0, 1)) == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(1.1424, abs=1e-4)


def test_loc_angle_examples():
    g0 = M.curvature_gauge(0)
    a = M.loc_angle(g0, 1, 1, 3)
    assert (a.omega, a.sigma) == (pytest.approx(math.acosh(3.5)), 1)
    assert a.omega == pytest.approx(1.924847, abs=1e-6)
    assert M.loc_angle(g0, 1, 2, 3).omega == pytest.approx(0.0, abs=1e-7)
    gp = M.curvature_gauge(1)
    assert M.loc_angle(gp, 1e-4, 1e-4, 3e-4).omega == pytest.approx(1.924847, abs=1e-6)


def test_loc_errors():
    g0 = M.curvature_gauge(0)
    with pytest.raises(NonRealizableError):
        M.loc_angle(g0, 1, 1, 1)
    gm = M.curvature_gauge(-1)
    with pytest.raises(OutOfRangeError):
        M.loc_side(gm, 1.5, 1.5, M.SignedAngle(0.2, 1))


@pytest.mark.parametrize("K", KS)
@settings(max_examples=200, deadline=None)
@given(a=st.floats(0.05, 1.4), b=st.floats(0.05, 1.4), w=st.floats(0.0, 3.0))
def test_loc_round_trip(K, a, b, w):
    g = M.curvature_gauge(K)
    try:
        c = M.loc_side(g, a, b, M.SignedAngle(w, 1))
    except OutOfRangeError:
        return
    back = M.loc_angle(g, a, b, c)
    assert back.sigma == 1
    assert M.loc_side(g, a, b, back) == pytest.approx(c, rel=1e-9)


@pytest.mark.parametrize("K", KS)
def test_monotonicity(K):
    g = M.curvature_gauge(K)
    a, b = 0.6, 0.7
    cs = [a + b + 0.01 * k for k in range(1, 60)]
    om = [M.loc_angle(g, a, b, c).omega for c in cs]
    assert all(y > x for x, y in zip(om, om[1:]))
    c = 2.0
    om2 = [M.loc_angle(g, aa, b, c).omega for aa in (0.2, 0.4, 0.6, 0.8, 1.0)]
    assert all(y < x for x, y in zip(om2, om2[1:]))


def test_flat_limit():
    g0 = M.curvature_gauge(0)
    for K in (1e-8, -1e-8):
        g = M.curvature_gauge(K)
        assert M.loc_side(g, 0.5, 0.9, M.SignedAngle(0.7, 1)) == pytest.approx(
            M.loc_side(g0, 0.5, 0.9, M.SignedAngle(0.7, 1)), abs=1e-6)


# --- angles --------------------------------------------------------------

def test_angle_at_examples():
    g = M.curvature_gauge(0)
    assert M.angle_at(g, pt(0, 0), pt(2, 0), pt(2, 0)).omega == pytest.approx(0.0, abs=1e-7)
    a = M.angle_at(g, pt(0, 0), pt(math.cosh(1), math.sinh(1)), pt(1, 0))
    assert a.omega == pytest.approx(1.0)
    b = M.angle_at(g, pt(0, 0), pt(math.cosh(1), -math.sinh(1)), pt(1, 0))
    assert (b.omega, b.sigma) == (pytest.approx(a.omega), a.sigma)
    with pytest.raises(DomainError):
        M.angle_at(g, pt(0, 0), pt(1, 1), pt(1, 0))


@pytest.mark.parametrize("K", KS)
def test_realized_triangle_satisfies_law(K):
    g = M.curvature_gauge(K)
    rng = rng_for(5)
    for _ in range(200):
        x, y, z = rand_chain(g, rng, 3)
        a, b, c = M.tau(g, x, y), M.tau(g, y, z), M.tau(g, x, z)
        ang = M.angle_at(g, y, x, z)
        assert ang.sigma == 1
        assert M.loc_side(g, a, b, ang) == pytest.approx(c, rel=1e-9)


def test_angle_additive():
    g = M.curvature_gauge(0)
    v = pt(0, 0)
    p, q, r = (pt(math.cosh(u), math.sinh(u)) for u in (0.1, 0.5, 1.2))
    tot = M.angle_at(g, v, p, r).omega
    assert M.angle_at(g, v, p, q).omega + M.angle_at(g, v, q, r).omega == pytest.approx(tot)


# --- isometries -------------------------------------------------------------

@pytest.mark.parametrize("K", KS)
@pytest.mark.parametrize("flip", [False, True])
def test_isometry_preserves_tau(K, flip):
    g = M.curvature_gauge(K)
    rng = rng_for(6)
    for _ in range(20):
        a, b = rand_chain(g, rng, 2)
        o = M.origin(g)
        e = M.boost(g, o, M.reference_direction(g, o), rng.uniform(-1, 1))
        b2 = M.exp_point(g, o, e, M.tau(g, a, b))
        f = M.isometry_from_segments(g, (a, b), (o, b2), flip=flip)
        assert f(a).coords == pytest.approx(o.coords, abs=1e-9)
        assert f(b).coords == pytest.approx(b2.coords, abs=1e-9)
        for _ in range(30):
            p, q = rand_point(g, rng), rand_point(g, rng)
            assert M.relation(g, f(p), f(q)) is M.relation(g, p, q)
            assert M.tau(g, f(p), f(q)) == pytest.approx(M.tau(g, p, q), abs=1e-9)


@pytest.mark.parametrize("K", KS)
def test_isometry_identity_and_involution(K):
    g = M.curvature_gauge(K)
    rng = rng_for(7)
    a, b = rand_chain(g, rng, 2)
    ident = M.isometry_from_segments(g, (a, b), (a, b))
    refl = M.isometry_from_segments(g, (a, b), (a, b), flip=True)
    for _ in range(20):
        p = rand_point(g, rng)
        assert ident(p).coords == pytest.approx(p.coords, abs=1e-9)
        assert refl(refl(p)).coords == pytest.approx(p.coords, abs=1e-9)
        s1, s2 = M.side_of(g, a, b, p), M.side_of(g, a, b, refl(p))
        if abs(s1) > 1e-6:
            assert s1 * s2 < 0


def test_flat_boost_isometry():
    g = M.curvature_gauge(0)
    o = pt(0, 0)
    dst = pt(math.cosh(0.3), math.sinh(0.3))
    f = M.isometry_from_segments(g, (o, pt(1, 0)), (o, dst))
    assert f.matrix[0][0] == pytest.approx(math.cosh(0.3))
    assert f.matrix[1][0] == pytest.approx(math.sinh(0.3))
    with pytest.raises(DomainError):
        M.isometry_from_segments(g, (o, pt(1, 0)), (o, pt(2, 0)))


@pytest.mark.parametrize("K", [-1.0, 1.0, 0.0])
def test_time_reflection_reverses_order(K):
    g = M.curvature_gauge(K)
    rng = rng_for(8)
    tr = M.time_reflection(g)
    for _ in range(50):
        p, q = rand_chain(g, rng, 2)
        assert M.relation(g, tr(p), tr(q)) is CC.CHRONOLOGICAL_PAST
        assert M.tau(g, tr(q), tr(p)) == pytest.approx(M.tau(g, p, q), abs=1e-9)


# --- hyperbolas and sectors ---------------------------------------------------

def test_hyperbola_examples():
    g = M.curvature_gauge(0)
    h = M.Hyperbola(pt(0, 0), 1.0)
    assert M.hyperbola_point(h, g, 0.0).coords == pytest.approx((1.0, 0.0))
    assert M.hyperbola_point(h, g, 0.3).coords == pytest.approx((math.cosh(0.3), math.sinh(0.3)))


@pytest.mark.parametrize("K", KS)
def test_hyperbola_radius(K):
    g = M.curvature_gauge(K)
    rng = rng_for(9)
    c = rand_point(g, rng)
    for fut in (True, False):
        h = M.Hyperbola(c, 0.8, fut)
        for phi in rng.uniform(-2, 2, 100):
            z = M.hyperbola_point(h, g, phi)
            r = M.tau(g, c, z) if fut else M.tau(g, z, c)
            assert r == pytest.approx(0.8, abs=1e-9)


def test_sector_collapse_examples():
    g = M.curvature_gauge(0)
    o, end = pt(0, 0), pt(2, 0)
    assert M.sector_collapse(g, o, end, pt(1, 0)).coords == pytest.approx((1.0, 0.0))
    p = pt(math.cosh(0.3), math.sinh(0.3))
    assert M.sector_collapse(g, o, end, p).coords == pytest.approx((1.0, 0.0))
    with pytest.raises(DomainError):
        M.sector_collapse(g, o, end, pt(3, 0))


@pytest.mark.parametrize("K", KS)
def test_sector_collapse_is_long(K):
    g = M.curvature_gauge(K)
    rng = rng_for(10)
    o = M.origin(g)
    e = M.reference_direction(g, o)
    end = M.exp_point(g, o, e, 1.5)

    def inside():
        v = M.boost(g, o, e, rng.uniform(0, 1.0))
        return M.exp_point(g, o, v, rng.uniform(0.01, 1.5))

    for _ in range(300):
        x, y = inside(), inside()
        fx, fy = (M.sector_collapse(g, o, end, p) for p in (x, y))
        assert M.tau(g, fx, fy) >= M.tau(g, x, y) - 1e-9
        if M.relation(g, x, y).is_future:
            assert M.relation(g, fx, fy).is_future


# --- point placement ---------------------------------------------------------

@pytest.mark.parametrize("K", KS)
@pytest.mark.parametrize("side", [1, -1])
def test_place_point_hits_separations(K, side):
    g = M.curvature_gauge(K)
    rng = rng_for(11)
    for _ in range(100):
        x, y, z = rand_chain(g, rng, 3)
        # y between x and z, z after y, x before y
        for p, q, target in ((x, z, y), (x, y, z), (y, z, x)):
            dp = M.abs_tau(g, p, target)
            dq = M.abs_tau(g, q, target)
            out = M.place_point(g, p, q, dp, dq, side)
            assert M.abs_tau(g, p, out) == pytest.approx(dp, abs=1e-9)
            assert M.abs_tau(g, q, out) == pytest.approx(dq, abs=1e-9)
            if min(dp, dq) > 1e-3:
                assert side * M.side_of(g, p, q, out) >= -1e-9


@pytest.mark.parametrize("K", KS)
def test_place_point_null(K):
    g = M.curvature_gauge(K)
    o = M.origin(g)
    z = M.exp_point(g, o, M.reference_direction(g, o), 1.5)
    for side in (1, -1):
        y = M.place_point(g, o, z, 0.0, 1.0, side)
        assert M.relation(g, o, y) is CC.NULL_FUTURE
        assert M.tau(g, y, z) == pytest.approx(1.0, abs=1e-9)
        assert side * M.side_of(g, o, z, y) > 0
        w = M.place_point(g, o, z, 1.0, 0.0, side)
        assert M.relation(g, w, z) is CC.NULL_FUTURE
        assert M.tau(g, o, w) == pytest.approx(1.0, abs=1e-9)
        assert side * M.side_of(g, o, z, w) > 0


@pytest.mark.parametrize("K", KS)
def test_strip_round_trip(K):
    g = M.curvature_gauge(K)
    for t, s in ((0.3, -0.4), (-1.2, 0.7), (0.05, 1.1)):
        if g.K > 0 and abs(t) >= math.pi / 2:
            continue
        p = M.from_strip(g, t, s)
        M.validate(g, p)
        assert M.strip_coords(g, p) == pytest.approx((t, s), abs=1e-12)
