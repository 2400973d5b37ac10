"""Straightening a timelike quadrilateral that is concave at its third vertex.

Given ``x1 << x2 << x3 << x4`` concave at ``x3``, the base ``[x1, x4]`` is
kept in place and ``x2, x3`` are replaced by the apex of a triangle with
sides ``tau(x1,x2)``, ``tau(x2,x3) + tau(x3,x4)``, ``tau(x1,x4)``.  The map
back onto the quadrilateral is glued from two isometric triangle copies and
three collapsed hyperbolic sectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .. import model as M
from ..compare import RealizedTriangle, SideTriple
from ..errors import NonRealizableError, NotApplicableError, PreconditionError
from .maps import IdentityMap, IsometryMap, SectorCollapseMap, compose, piecewise
from .regions import Sector, triangle

ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class Decomposition:
    """Pieces covering the straightened triangle, in lookup order.

    ``points`` holds the constructed vertices: ``x1 x2 x3 x4`` of the
    triangle (``x3`` on the long side), ``x3p`` from the copy attached at
    ``[x1, x2]`` and ``x3pp`` from the copy attached at ``[x1, x4]``.
    """

    names: tuple
    regions: tuple
    points: dict
    copy2: M.Isometry
    copy4: M.Isometry


def _chart_side(chart, a, b, p) -> float:
    return M.cross2(chart(a), chart(b), chart(p))


def _interval_target(g: M.CurvatureGauge, t: float) -> float:
    """Chord interval ``-<q-p, q-p>`` of a chronological pair at separation ``t``."""
    if g.K == 0:
        return t * t
    s = g.s
    if g.K > 0:
        return 2.0 * (math.cosh(s * t) - 1.0) / g.K
    return 2.0 * (1.0 - math.cos(s * t)) / -g.K


def _interval(g, p, q) -> float:
    d = [b - a for a, b in zip(p.coords, q.coords)]
    return -M.inner(g, d, d)


def _apex_from_null_base(g, a, b, d_a, d_b, toward, chart):
    """Point ``y`` in the future of ``a`` and ``b`` with ``tau(a,y)=d_a`` and
    ``tau(b,y)=d_b``, on the side of line ``a b`` holding ``toward``.

    Used when ``a <= b`` is null, where frame-based placement is undefined.
    """
    e = M.direction(g, a, toward)[1]
    want = _interval_target(g, d_b)
    side = math.copysign(1.0, _chart_side(chart, a, b, toward))

    def y(phi):
        return M.exp_point(g, a, M.boost(g, a, e, phi), d_a)

    def f(phi):
        return _interval(g, b, y(phi)) - want

    grid = [k * 0.25 for k in range(-80, 81)]
    vals = [f(x) for x in grid]
    for x0, x1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
        if v0 == 0.0 or v0 * v1 < 0:
            root = x0 if v0 == 0.0 else brentq(f, x0, x1, xtol=1e-15, rtol=1e-15)
            cand = y(root)
            if M.relation(g, b, cand).is_future and _chart_side(chart, a, b, cand) * side >= -1e-12:
                return cand
    raise NonRealizableError("no copy of the first sub-triangle fits")


def _oriented_copy(g, src, dst, third, inward_ref, chart):
    """Isometry sending segment ``src`` to ``dst`` and ``third`` to the side
    of ``dst`` that holds ``inward_ref``."""
    want = _chart_side(chart, dst[0], dst[1], inward_ref)
    for flip in (False, True):
        iso = M.isometry_from_segments(g, src, dst, flip=flip)
        if _chart_side(chart, dst[0], dst[1], iso(third)) * want >= 0:
            return iso
    return iso


def is_concave_at_x3(g, x1, x2, x3, x4, chart=None, tol: float = ANGLE_TOL) -> bool:
    """Concavity at ``x3``: ``angle_x3(x1,x2) >= angle_x3(x1,x4)`` as unsigned
    hyperbolic angles.  Falls back on the chart turn when ``x2 <= x3`` is null."""
    if M.tau(g, x2, x3) > 0:
        return M.angle_at(g, x3, x1, x2).omega >= M.angle_at(g, x3, x1, x4).omega - tol
    chart = chart or M.ProjectiveChart(g, M.geodesic_point(g, x1, x4, 0.5))
    ring = [chart(p) for p in (x1, x2, x3, x4)]
    orient = M.cross2(ring[0], ring[1], ring[3])
    return M.cross2(ring[1], ring[2], ring[3]) * orient <= tol


def straighten_alexandrov(g: M.CurvatureGauge, x1, x2, x3, x4, allow_null: bool = False):
    """Straighten a quadrilateral concave at ``x3``.

    Returns ``(triangle, decomposition, phi)``: the triangle
    ``(x1, x2bar, x4)`` with the prescribed sides, its decomposition, and the
    long map ``phi`` from the filled triangle onto the filled quadrilateral.
    """
    t12, t23, t34 = M.tau(g, x1, x2), M.tau(g, x2, x3), M.tau(g, x3, x4)
    t13, t14 = M.tau(g, x1, x3), M.tau(g, x1, x4)
    for a, b, t, name in ((x1, x2, t12, "x1,x2"), (x2, x3, t23, "x2,x3")):
        if t > 0:
            continue
        if not (allow_null and M.relation(g, a, b).is_future):
            raise PreconditionError(f"{name} must be chronological")
    if not (t34 > 0 and t13 > 0 and t14 > 0):
        raise PreconditionError("x1 << x3 << x4 required")
    if t14 >= g.D:
        raise PreconditionError("quadrilateral exceeds the timelike diameter")

    chart = M.ProjectiveChart(g, M.geodesic_point(g, x1, x4, 0.5))
    s2 = _chart_side(chart, x1, x3, x2)
    s4 = _chart_side(chart, x1, x3, x4)
    if s2 * s4 > 0:
        raise PreconditionError("sub-triangles overlap: x2 and x4 on the same side of [x1,x3]")
    if not is_concave_at_x3(g, x1, x2, x3, x4, chart):
        raise NotApplicableError("quadrilateral is convex at x3")

    side = 1 if M.side_of(g, x1, x4, x2) >= 0 else -1
    b1, b4 = x1, x4
    long_side = t23 + t34
    b2 = M.place_point(g, b1, b4, t12, long_side, side)
    b3 = M.geodesic_point(g, b2, b4, t23 / long_side) if t23 > 0 else b2

    # copy of (x1, x3, x4) on the base: x3 already sits on the inner side
    if _chart_side(chart, b1, b4, x3) * _chart_side(chart, b1, b4, b2) >= 0:
        copy4 = M.identity_isometry(g)
    else:
        copy4 = _oriented_copy(g, (x1, x4), (b1, b4), x3, b2, chart)
    b3pp = copy4(x3)

    if t12 > 0:
        copy2 = _oriented_copy(g, (x1, x2), (b1, b2), x3, b4, chart)
        b3p = copy2(x3)
    else:
        b3p = _apex_from_null_base(g, b1, b2, t13, t23, b4, chart)
        copy2 = M.isometry_from_segments(g, (x1, x3), (b1, b3p))
        alt = M.isometry_from_segments(g, (x1, x3), (b1, b3p), flip=True)
        if _dist(alt(x2), b2) < _dist(copy2(x2), b2):
            copy2 = alt

    inv2 = IsometryMap(copy2.inverse())
    inv4 = IdentityMap() if _is_identity(copy4) else IsometryMap(copy4.inverse())

    names = ["T2", "T4", "H1"]
    regions = [triangle(g, chart, b1, b2, b3p), triangle(g, chart, b1, b3pp, b4),
               Sector(g, chart, b1, b3p, b3pp, t13)]
    maps = [inv2, inv4, compose(SectorCollapseMap(g, b1, b3pp), inv4)]
    if t23 > 0:
        names.append("H2")
        regions.append(Sector(g, chart, b2, b3, b3p, t23))
        maps.append(compose(SectorCollapseMap(g, b2, b3p), inv2))
    names.append("H4")
    regions.append(Sector(g, chart, b4, b3, b3pp, t34, past=True))
    maps.append(compose(SectorCollapseMap(g, b4, b3pp, past=True), inv4))

    tri = RealizedTriangle(g, b1, b2, b4, SideTriple(t12, long_side, t14))
    dec = Decomposition(tuple(names), tuple(regions),
                        {"x1": b1, "x2": b2, "x3": b3, "x4": b4, "x3p": b3p, "x3pp": b3pp},
                        copy2, copy4)
    return tri, dec, piecewise(list(zip(regions, maps)))


def _dist(p, q) -> float:
    return max(abs(a - b) for a, b in zip(p.coords, q.coords))


def _is_identity(iso: M.Isometry) -> bool:
    n = len(iso.matrix)
    return iso.time_sign == 1 and all(
        abs(iso.matrix[i][j] - (1.0 if i == j else 0.0)) < 1e-15 for i in range(n) for j in range(n)
    ) and all(abs(c) < 1e-15 for c in (iso.shift or ()))
