"""Random configurations in the model spaces, shared by several test modules."""

import math

import numpy as np

from lorentzmaj import model as M

KS = (-1.0, 0.0, 1.0)


def rand_point(g, rng, spread=0.6):
    """A point reached from the origin by a short timelike or spacelike hop."""
    o = M.origin(g)
    e = M.reference_direction(g, o)
    v = M.boost(g, o, e, rng.uniform(-spread, spread))
    p = M.exp_point(g, o, v, rng.uniform(-0.5, 0.5))
    return p


def rand_chain(g, rng, n, total=None, max_rap=1.2):
    """``n`` points, each chronologically after the previous one.

    Per-step lengths sum to at most ``total`` (default 2.5 when the space
    has a finite diameter, 3 otherwise), keeping every pair below ``D_K``.
    """
    if total is None:
        total = 2.5 if g.K < 0 else 3.0
    while True:
        out = _chain(g, rng, n, total, max_rap)
        if g.K >= 0 or M.tau(g, out[0], out[-1]) < g.D - 0.2:
            return out


def _chain(g, rng, n, total, max_rap):
    steps = rng.uniform(0.1, 1.0, size=n - 1)
    steps *= rng.uniform(0.3, 1.0) * total / steps.sum()
    p = rand_point(g, rng)
    out = [p]
    for r in steps:
        e = M.reference_direction(g, p)
        v = M.boost(g, p, e, rng.uniform(-max_rap, max_rap))
        p = M.exp_point(g, p, v, float(r))
        out.append(p)
    return out


def oracle_tau(g, p, q):
    """Time separation from the textbook closed forms, with no cancellation
    safeguards; only used to cross-check the production path."""
    if M.relation(g, p, q) is not M.CausalClass.CHRONOLOGICAL_FUTURE:
        return 0.0
    a, b = p.coords, q.coords
    if g.K == 0:
        return math.sqrt((b[0] - a[0]) ** 2 - (b[1] - a[1]) ** 2)
    s = g.s
    ip = M.inner(g, a, b)
    if g.K > 0:
        return math.acosh(max(1.0, s * s * ip)) / s
    return math.acos(max(-1.0, min(1.0, -s * s * ip))) / s


def rng_for(seed):
    return np.random.default_rng(seed)


def rand_in_diamond(g, rng, a, b, max_rap=1.5):
    """A point of ``I(a, b)`` obtained by rejection along geodesics from ``a``."""
    T = M.tau(g, a, b)
    e = M.direction(g, a, b)[1]
    while True:
        v = M.boost(g, a, e, rng.uniform(-max_rap, max_rap))
        p = M.exp_point(g, a, v, rng.uniform(0.02, 0.98) * T)
        if M.relation(g, p, b) is M.CausalClass.CHRONOLOGICAL_FUTURE:
            return p


def rand_diamond_quad(g, rng):
    """``x1 << x4`` with ``x2, x3`` drawn from the diamond between them."""
    x1, x4 = rand_chain(g, rng, 2)
    return x1, rand_in_diamond(g, rng, x1, x4), rand_in_diamond(g, rng, x1, x4), x4


def concave_quad(g, rng, min_step=0.05):
    """Chronological quadrilateral ``x1 << x2 << x3 << x4`` concave at ``x3``
    whose sub-triangles at ``[x1, x3]`` do not overlap."""
    from lorentzmaj.majorize import is_concave_at_x3

    while True:
        x1, x4 = rand_chain(g, rng, 2)
        x2 = rand_in_diamond(g, rng, x1, x4)
        if M.tau(g, x1, x2) < min_step:
            continue
        x3 = rand_in_diamond(g, rng, x2, x4)
        if min(M.tau(g, x2, x3), M.tau(g, x3, x4)) < min_step:
            continue
        ch = M.ProjectiveChart(g, M.geodesic_point(g, x1, x4, 0.5))
        c = [ch(p) for p in (x1, x2, x3, x4)]
        if M.cross2(c[0], c[2], c[1]) * M.cross2(c[0], c[2], c[3]) >= 0:
            continue
        if is_concave_at_x3(g, x1, x2, x3, x4):
            return x1, x2, x3, x4


def fan_chain(g, rng, o, z, k, side):
    """``o, p_1..p_k, z`` with breakpoints on one side of ``[o, z]``, turning
    monotonically towards ``z`` as seen from ``o``."""
    T = M.tau(g, o, z)
    e = M.direction(g, o, z)[1]
    while True:
        raps = np.sort(rng.uniform(0.05, 1.2, size=k))[::-1]
        rads = np.sort(rng.uniform(0.15, 0.95, size=k)) * T
        pts = [M.exp_point(g, o, M.boost(g, o, e, side * f), r) for f, r in zip(raps, rads)]
        ch = [o] + pts + [z]
        if all(M.tau(g, a, b) > 0.02 for a, b in zip(ch, ch[1:])):
            return tuple(ch)


def rand_loop(g, rng, nmax=6, same_side=False):
    """Random fan-shaped timelike loop with at most ``nmax`` breakpoints."""
    from lorentzmaj.majorize import TimelikeLoop, chains_cross

    o, z = rand_chain(g, rng, 2)
    n = int(rng.integers(0, nmax + 1))
    ka = int(rng.integers(0, n + 1))
    sa = 1 if rng.uniform() < 0.5 else -1
    sb = sa if same_side else -sa
    while True:
        loop = TimelikeLoop(g, fan_chain(g, rng, o, z, ka, sa), fan_chain(g, rng, o, z, n - ka, sb))
        if not chains_cross(loop):
            return loop


def longness_defect(g, src_pts, chart, ring, images):
    """Worst ``tau(x, y) - tau_R(f x, f y)`` over related sample pairs, and the
    number of causal pairs whose images lose their relation."""
    from lorentzmaj.majorize import intrinsic_tau

    X, th = M.as_arrays(g, src_pts)
    T, L = M.batch_relations(g, X, th, X, th)
    Ti, Li = intrinsic_tau(g, chart, ring, images, images)
    d = np.where(L, T - Ti, -np.inf).max()
    return float(d), int((L & ~Li).sum())
