"""Regions of the model plane used to build piecewise maps.

Every membership test runs in a projective chart where geodesics are
straight, so polygon tests are plain 2-D orientation checks.  Each region
also reports a non-negative *violation*, its distance (in chart units, or
in time separation for the curved side of a sector) from containing the
point; zero means inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .. import model as M

REGION_TOL = 1e-9


def _edge_distance(a, b, p) -> float:
    """Signed distance of ``p`` to the chart line ``a -> b``, positive on the left."""
    L = math.hypot(b[0] - a[0], b[1] - a[1])
    if L == 0.0:
        return -math.hypot(p[0] - a[0], p[1] - a[1])
    return M.cross2(a, b, p) / L


class Region:
    def violation(self, p: M.ModelPoint) -> float:  # pragma: no cover
        raise NotImplementedError

    def contains(self, p: M.ModelPoint, tol: float = REGION_TOL) -> bool:
        return self.violation(p) <= tol


@dataclass
class ConvexPolygon(Region):
    """Convex polygon given by its corners, in either rotational order."""

    gauge: M.CurvatureGauge
    chart: M.ProjectiveChart
    vertices: tuple
    _c: list = field(init=False, repr=False)
    _sign: float = field(init=False, repr=False)

    def __post_init__(self):
        self._c = [self.chart(v) for v in self.vertices]
        area = 0.0
        n = len(self._c)
        for i in range(n):
            a, b = self._c[i], self._c[(i + 1) % n]
            area += a[0] * b[1] - a[1] * b[0]
        self._sign = 1.0 if area >= 0 else -1.0

    @property
    def corners(self) -> list:
        return list(self._c)

    def violation(self, p: M.ModelPoint) -> float:
        q = self.chart(p)
        n = len(self._c)
        worst = 0.0
        for i in range(n):
            d = self._sign * _edge_distance(self._c[i], self._c[(i + 1) % n], q)
            worst = max(worst, -d)
        return worst


def triangle(g, chart, a, b, c) -> ConvexPolygon:
    return ConvexPolygon(g, chart, (a, b, c))


@dataclass
class Sector(Region):
    """Points between the spokes ``center -> end1`` and ``center -> end2``
    whose time separation from ``center`` is at most ``radius``.

    ``past`` selects the sector opening into the past of ``center``.
    """

    gauge: M.CurvatureGauge
    chart: M.ProjectiveChart
    center: M.ModelPoint
    end1: M.ModelPoint
    end2: M.ModelPoint
    radius: float
    past: bool = False

    def __post_init__(self):
        self._c = self.chart(self.center)
        self._e1 = self.chart(self.end1)
        self._e2 = self.chart(self.end2)
        s = M.cross2(self._c, self._e1, self._e2)
        scale = math.hypot(self._e1[0] - self._c[0], self._e1[1] - self._c[1])
        scale *= math.hypot(self._e2[0] - self._c[0], self._e2[1] - self._c[1])
        self._flat = abs(s) <= 1e-14 * max(scale, 1e-300)
        self._sign = 1.0 if s >= 0 else -1.0

    def violation(self, p: M.ModelPoint) -> float:
        g = self.gauge
        rel = M.relation(g, p, self.center) if self.past else M.relation(g, self.center, p)
        if not rel.is_future:
            # wrong cone: report chart distance to the centre, at least 1
            q = self.chart(p)
            return 1.0 + math.hypot(q[0] - self._c[0], q[1] - self._c[1])
        t = M.tau(g, p, self.center) if self.past else M.tau(g, self.center, p)
        worst = max(0.0, t - self.radius)
        q = self.chart(p)
        if self._flat:
            return max(worst, abs(_edge_distance(self._c, self._e1, q)))
        d1 = self._sign * _edge_distance(self._c, self._e1, q)
        d2 = -self._sign * _edge_distance(self._c, self._e2, q)
        return max(worst, -d1, -d2)


def locate(regions: Sequence[Region], p: M.ModelPoint, tol: float = REGION_TOL) -> int:
    """Index of the first region containing ``p``; when none does, the
    region it violates least."""
    best, best_v = 0, math.inf
    for i, r in enumerate(regions):
        v = r.violation(p)
        if v <= tol:
            return i
        if v < best_v:
            best, best_v = i, v
    return best
