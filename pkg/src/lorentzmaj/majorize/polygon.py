"""Majorising a polygonal timelike loop by a convex one.

The loop ``(alpha, beta)`` runs from ``O`` to ``z``.  Inputs must be fans
around ``O``: within each chain the breakpoints sit on one side of
``[O, z]`` and turn monotonically towards ``z``.  When both chains bend to
the same side, ``beta`` is first reflected through ``[O, z]``.  The rest is
the usual induction: cut off the first triangle of ``alpha``, majorise the
remainder, glue the triangle back outside and straighten the junction.
"""

from __future__ import annotations

import math

from .. import model as M
from ..errors import DomainError, NotApplicableError, PreconditionError, TerminationError
from .alexandrov import is_concave_at_x3, straighten_alexandrov
from .loops import CONVEX_TOL, TimelikeLoop, chains_cross, convexity_check, same_point
from .maps import IdentityMap, IsometryMap, compose, piecewise
from .regions import ConvexPolygon, triangle


def _chart_sides(loop: TimelikeLoop):
    chart = loop.chart()
    o, z = chart(loop.start), chart(loop.end)
    return chart, o, z


def _chain_side(chart, o, z, chain) -> int:
    """Side (+1/-1) of ``[O, z]`` holding the chain's breakpoints, 0 if none
    leave the line.  Raises when a chain straddles the line."""
    signs = set()
    for v in chain[1:-1]:
        c = M.cross2(o, z, chart(v))
        scale = math.hypot(z[0] - o[0], z[1] - o[1]) ** 2
        if abs(c) > CONVEX_TOL * scale:
            signs.add(1 if c > 0 else -1)
    if len(signs) > 1:
        raise PreconditionError("chain crosses the segment [O,z]")
    return signs.pop() if signs else 0


def _check_fan(loop: TimelikeLoop) -> tuple:
    g = loop.gauge
    for chain in (loop.alpha, loop.beta):
        for a, b in zip(chain, chain[1:]):
            if not M.tau(g, a, b) > 0:
                raise PreconditionError("every loop segment must be timelike")
    if M.tau(g, loop.start, loop.end) >= g.D:
        raise PreconditionError("loop exceeds the timelike diameter")
    chart, o, z = _chart_sides(loop)
    sides = []
    for chain in (loop.alpha, loop.beta):
        s = _chain_side(chart, o, z, chain)
        pts = [chart(v) for v in chain[1:]]
        for p, q in zip(pts, pts[1:]):
            scale = math.hypot(p[0] - o[0], p[1] - o[1]) * math.hypot(q[0] - o[0], q[1] - o[1])
            if s * M.cross2(o, p, q) > CONVEX_TOL * scale:
                raise PreconditionError("chain is not star-shaped from O")
        sides.append(s)
    if chains_cross(loop):
        raise PreconditionError("the two chains cross")
    return tuple(sides)


def _strip_flat(loop: TimelikeLoop):
    """Drop breakpoints lying on the segment between their neighbours.

    Returns the reduced loop and, per chain, ``(kept indices, fractions)``
    where fractions give each dropped vertex's time position on its segment.
    """
    g = loop.gauge
    chart = loop.chart()
    plans = []
    chains = []
    for chain in (loop.alpha, loop.beta):
        keep = [0]
        for k in range(1, len(chain) - 1):
            u, v, w = chart(chain[keep[-1]]), chart(chain[k]), chart(chain[k + 1])
            d1 = math.hypot(v[0] - u[0], v[1] - u[1])
            d2 = math.hypot(w[0] - v[0], w[1] - v[1])
            if abs(M.cross2(u, v, w)) > CONVEX_TOL * d1 * d2:
                keep.append(k)
        keep.append(len(chain) - 1)
        fr = {}
        for a, b in zip(keep, keep[1:]):
            total = M.tau(g, chain[a], chain[b])
            run = 0.0
            for k in range(a + 1, b):
                run += M.tau(g, chain[k - 1], chain[k])
                fr[k] = (a, run / total)
        plans.append((keep, fr, len(chain)))
        chains.append(tuple(chain[k] for k in keep))
    return TimelikeLoop(g, chains[0], chains[1]), plans


def _restore(g, loop: TimelikeLoop, plans) -> TimelikeLoop:
    out = []
    for chain, (keep, fr, n) in zip((loop.alpha, loop.beta), plans):
        pos = {k: i for i, k in enumerate(keep)}
        full = []
        for k in range(n):
            if k in pos:
                full.append(chain[pos[k]])
            else:
                a, t = fr[k]
                i = pos[a]
                full.append(M.geodesic_point(g, chain[i], chain[i + 1], t))
        out.append(tuple(full))
    return TimelikeLoop(g, out[0], out[1])


def _interior_side(g, loop: TimelikeLoop, a, b) -> int:
    """Side (model ``side_of`` sign) of line ``a -> b`` holding the loop's
    interior, judged by the loop vertex farthest from the line."""
    chart = loop.chart()
    ca, cb = chart(a), chart(b)
    best, best_v = None, 0.0
    for v in loop.ring():
        c = abs(M.cross2(ca, cb, chart(v)))
        if c > best_v:
            best, best_v = v, c
    if best is None or best_v <= 1e-14:
        return 0
    return 1 if M.side_of(g, a, b, best) > 0 else -1


def _reflect_through(g, o, z) -> M.Isometry:
    return M.isometry_from_segments(g, (o, z), (o, z), flip=True)


def _fan_triangles(g, chart, o, chain):
    return [triangle(g, chart, o, a, b) for a, b in zip(chain[1:], chain[2:])]


def majorize_polygon(g: M.CurvatureGauge, loop: TimelikeLoop):
    """Convex loop ``C`` with the same segment lengths and a long map
    ``f: R(C) -> R(loop)``.

    Returns ``(C, f)``.
    """
    if loop.gauge != g:
        raise DomainError("loop lives in a different model space")
    sa, sb = _check_fan(loop)
    o, z = loop.start, loop.end
    pre = IdentityMap()
    if sa != 0 and sa == sb:
        chart = loop.chart()
        ref = _reflect_through(g, o, z)
        beta = tuple([o] + [ref(v) for v in loop.beta[1:-1]] + [z])
        pieces = [(t, IdentityMap()) for t in _fan_triangles(g, chart, o, loop.alpha)]
        pieces += [(t, IsometryMap(ref)) for t in _fan_triangles(g, chart, o, beta)]
        pre = piecewise(pieces)
        loop = TimelikeLoop(g, loop.alpha, beta)
    budget = loop.breakpoints
    out, f = _majorize(g, loop, 0, budget)
    return out, compose(f, pre)


def _majorize(g, loop: TimelikeLoop, level: int, budget: int):
    if level > budget:
        raise TerminationError("majorisation recursion exceeded the breakpoint count")
    reduced, plans = _strip_flat(loop)
    out, f = _majorize_reduced(g, reduced, level, budget)
    return _restore(g, out, plans), f


def _majorize_reduced(g, loop: TimelikeLoop, level: int, budget: int):
    if loop.breakpoints <= 1 or convexity_check(loop):
        return loop, IdentityMap()
    if len(loop.alpha) == 2:
        out, f = _majorize(g, loop.swapped(), level, budget)
        return out.swapped(), f
    if loop.breakpoints == 2 and len(loop.alpha) == 4:
        return _two_on_alpha(g, loop)
    if loop.breakpoints == 2:
        # one breakpoint per chain on opposite sides: convex up to rounding
        return loop, IdentityMap()
    return _induction_step(g, loop, level, budget)


def _two_on_alpha(g, loop: TimelikeLoop):
    o, a1, a2, z = loop.alpha
    chart = loop.chart()
    if is_concave_at_x3(g, o, a1, a2, z):
        tri, dec, phi = straighten_alexandrov(g, o, a1, a2, z)
        alpha = (o, dec.points["x2"], dec.points["x3"], z)
        return TimelikeLoop(g, alpha, loop.beta), piecewise([(triangle(g, chart, o, alpha[1], z), phi)])
    rev = M.time_reflection(g)
    y = [rev(p) for p in (z, a2, a1, o)]
    if not is_concave_at_x3(g, *y):
        return loop, IdentityMap()
    tri, dec, phi = straighten_alexandrov(g, *y)
    b2 = rev(dec.points["x2"])
    b1 = rev(dec.points["x3"])
    alpha = (o, b1, b2, z)
    rmap = IsometryMap(rev)
    f = compose(rmap, phi, rmap)
    return TimelikeLoop(g, alpha, loop.beta), piecewise([(triangle(g, chart, o, b2, z), f)])


def _induction_step(g, loop: TimelikeLoop, level: int, budget: int):
    o = loop.start
    a1, a2 = loop.alpha[1], loop.alpha[2]
    rest = TimelikeLoop(g, (o,) + loop.alpha[2:], loop.beta)
    cbar, frest = _majorize(g, rest, level + 1, budget)
    ob, ab2 = cbar.start, cbar.alpha[1]

    inner = _interior_side(g, cbar, ob, ab2)
    if inner == 0:
        inner = -(1 if M.side_of(g, o, a2, a1) > 0 else -1)
    ab1 = M.place_point(g, ob, ab2, M.tau(g, o, a1), M.tau(g, a1, a2), -inner)
    glue = _copy_back(g, (ob, ab2, ab1), (o, a2, a1))

    chart = loop.chart()
    f1 = piecewise([(triangle(g, chart, ob, ab1, ab2), IsometryMap(glue)),
                    (ConvexPolygon(g, chart, tuple(cbar.ring())), frest)])
    glued = TimelikeLoop(g, (ob, ab1) + cbar.alpha[1:], cbar.beta)
    report = convexity_check(glued)
    if report or len(glued.alpha) < 4 or same_point(g, ab2, glued.end):
        return glued, f1
    if not any(name == "alpha" and idx == 2 for name, idx, _ in report.concave):
        return glued, f1

    ab3 = glued.alpha[3]
    try:
        tri, dec, phi = straighten_alexandrov(g, ob, ab1, ab2, ab3)
    except NotApplicableError:
        return glued, f1
    hat1, hat2 = dec.points["x2"], dec.points["x3"]
    others = [v for v in cbar.ring() if v is not ab2]
    f2 = piecewise([(triangle(g, chart, ob, hat1, ab3), phi),
                    (ConvexPolygon(g, chart, tuple(others)), IdentityMap())])
    straight = TimelikeLoop(g, (ob, hat1, hat2) + glued.alpha[3:], glued.beta)
    out, f3 = _majorize(g, straight, level + 1, budget)
    return out, compose(f3, f2, f1)


def _copy_back(g, src, dst) -> M.Isometry:
    """Isometry taking triangle ``src`` onto ``dst`` (first side to first side)."""
    best = None
    for flip in (False, True):
        iso = M.isometry_from_segments(g, src[:2], dst[:2], flip=flip)
        err = max(abs(a - b) for a, b in zip(iso(src[2]).coords, dst[2].coords))
        if best is None or err < best[0]:
            best = (err, iso)
    return best[1]
