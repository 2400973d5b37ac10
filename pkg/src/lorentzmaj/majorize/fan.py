"""Comparison fans: a chain ``p_0, ..., p_m`` seen from a base point ``O``.

Each triangle ``(O, p_k, p_k+1)`` of the original is replaced by its
comparison triangle, and the copies are laid side by side around the model
origin so that neighbours share their spoke.  The last spoke lies on the
reference direction and the fan turns to ``side`` of it.

Labels of the original points are opaque; only time separations between
them are queried, through ``tau_oracle(label_a, label_b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.optimize import brentq

from .. import model as M
from ..compare import BUILD_TOL
from ..errors import DataError, DomainError
from .regions import locate, triangle

SKELETON_TOL = 1e-8


@dataclass(frozen=True)
class Fan:
    gauge: M.CurvatureGauge
    side: int
    base_label: Hashable
    labels: tuple
    radii: tuple          # tau(O, p_k)
    steps: tuple          # |tau| between p_k and p_k+1
    forward: tuple        # p_k << p_k+1 (else p_k+1 << p_k)
    angles: tuple         # apex angle of triangle k at O
    rapidities: tuple     # signed rapidity of spoke k from the reference direction
    apex: M.ModelPoint
    points: tuple         # spoke ends pbar_k

    @property
    def size(self) -> int:
        """Number of triangles."""
        return len(self.points) - 1

    @cached_property
    def _chart(self) -> M.ProjectiveChart:
        g = self.gauge
        return M.ProjectiveChart(g, M.geodesic_point(g, self.apex, self.points[-1], 0.5))

    def chart(self) -> M.ProjectiveChart:
        return self._chart

    @cached_property
    def _triangles(self) -> list:
        return [triangle(self.gauge, self._chart, self.apex, a, b) for a, b in zip(self.points, self.points[1:])]

    def triangles(self) -> list:
        return self._triangles

    def spoke_direction(self, k: int):
        g = self.gauge
        e = M.reference_direction(g, self.apex)
        return M.boost(g, self.apex, e, self.rapidities[k])

    def spoke_point(self, k: int, r: float) -> M.ModelPoint:
        if r <= 0.0:
            return self.apex
        return M.exp_point(self.gauge, self.apex, self.spoke_direction(k), r)


def _side_triple(r0, r1, d, forward):
    # sides (a, b, c) of the chain O << first << second
    return (r0, d, r1) if forward else (r1, d, r0)


def build_fan(g: M.CurvatureGauge, base_label, chain: Sequence, tau_oracle: Callable,
              side: int = 1) -> Fan:
    """Lay out the comparison triangles of ``(base, chain[k], chain[k+1])``."""
    if side not in (1, -1):
        raise DomainError("side must be +1 or -1")
    if len(chain) < 2:
        raise DomainError("chain needs at least two points")
    radii = []
    for lab in chain:
        r = float(tau_oracle(base_label, lab))
        if not (0.0 <= r < g.D):
            raise DataError(f"spoke length {r} outside [0, D_K)")
        radii.append(r)
    steps, forward, angles = [], [], []
    for k, (a, b) in enumerate(zip(chain, chain[1:])):
        fwd, bwd = float(tau_oracle(a, b)), float(tau_oracle(b, a))
        if fwd > 0 and bwd > 0:
            raise DataError("oracle reports both orders chronological")
        d = max(fwd, bwd)
        if not d > 0:
            raise DataError(f"chain points {k} and {k + 1} are not timelike related")
        is_fwd = fwd >= bwd
        r0, r1 = radii[k], radii[k + 1]
        a_, b_, c_ = _side_triple(r0, r1, d, is_fwd)
        if c_ < a_ + b_ - BUILD_TOL * max(1.0, c_):
            raise DataError("oracle violates the reverse triangle inequality")
        if min(r0, r1) == 0.0:
            omega = 0.0
        else:
            omega = M.loc_angle(g, r0, r1, d, tol=1e-9).omega
        steps.append(d)
        forward.append(is_fwd)
        angles.append(omega)
    raps = [0.0] * len(chain)
    for k in range(len(chain) - 2, -1, -1):
        raps[k] = raps[k + 1] + side * angles[k]
    o = M.origin(g)
    e = M.reference_direction(g, o)
    pts = tuple(o if r == 0.0 else M.exp_point(g, o, M.boost(g, o, e, ph), r) for r, ph in zip(radii, raps))
    return Fan(g, side, base_label, tuple(chain), tuple(radii), tuple(steps), tuple(forward),
               tuple(angles), tuple(raps), o, pts)


def triangle_index(fan: Fan, p: M.ModelPoint) -> int:
    return locate(fan.triangles(), p)


def _on_segment(chart, a, b, p, tol) -> float:
    """Chart distance from ``p`` to segment ``[a, b]``."""
    a, b, q = chart(a), chart(b), chart(p)
    ex, ey = b[0] - a[0], b[1] - a[1]
    L2 = ex * ex + ey * ey
    t = 0.0 if L2 == 0 else min(1.0, max(0.0, ((q[0] - a[0]) * ex + (q[1] - a[1]) * ey) / L2))
    return math.hypot(q[0] - a[0] - t * ex, q[1] - a[1] - t * ey)


@dataclass(frozen=True)
class SkeletonLabel:
    """Where a skeleton point sits in the original.

    ``kind`` is ``"apex"``, ``"spoke"`` (``param`` = time separation from
    the base) or ``"chain"`` (``param`` = fraction of the step from
    ``p_index`` to ``p_index+1``).
    """

    kind: str
    index: int
    param: float


def skeleton_label(fan: Fan, p: M.ModelPoint, tol: float = SKELETON_TOL):
    """Label of ``p`` if it lies on the skeleton, else ``None``.

    Only the sides of the triangle holding ``p`` are examined.
    """
    g = fan.gauge
    chart = fan.chart()
    if _on_segment(chart, fan.apex, fan.apex, p, tol) <= tol:
        return SkeletonLabel("apex", 0, 0.0)
    k = triangle_index(fan, p)
    a, b = fan.points[k], fan.points[k + 1]
    if _on_segment(chart, a, b, p, tol) <= tol:
        if fan.forward[k]:
            t = M.tau(g, a, p) / fan.steps[k]
        else:
            t = 1.0 - M.tau(g, b, p) / fan.steps[k]
        return SkeletonLabel("chain", k, min(1.0, max(0.0, t)))
    for j in (k, k + 1):
        if fan.radii[j] > 0 and _on_segment(chart, fan.apex, fan.points[j], p, tol) <= tol:
            return SkeletonLabel("spoke", j, min(fan.radii[j], M.tau(g, fan.apex, p)))
    return None


def skeleton_project(fan: Fan, p: M.ModelPoint) -> M.ModelPoint:
    """Move ``p`` onto the longer spoke of its triangle, keeping ``tau(O, p)``.
    Points already on the skeleton stay put."""
    if skeleton_label(fan, p) is not None:
        return p
    k = triangle_index(fan, p)
    j = k + 1 if fan.radii[k + 1] >= fan.radii[k] else k
    r = M.tau(fan.gauge, fan.apex, p) if M.relation(fan.gauge, fan.apex, p).is_future else 0.0
    return fan.spoke_point(j, min(r, fan.radii[j]))


def psi_eval(fan: Fan, p: M.ModelPoint) -> SkeletonLabel:
    """Original label of a skeleton point."""
    lab = skeleton_label(fan, p)
    if lab is None:
        raise DomainError("point is not on the fan skeleton")
    return lab


def resolve_label(fan: Fan, label: SkeletonLabel, geodesic: Callable):
    """Original point named by ``label``; ``geodesic(a, b, t)`` interpolates
    between original points ``a << b`` by time fraction."""
    if label.kind == "apex":
        return fan.base_label
    if label.kind == "spoke":
        k = label.index
        return geodesic(fan.base_label, fan.labels[k], label.param / fan.radii[k])
    k = label.index
    a, b = fan.labels[k], fan.labels[k + 1]
    if fan.forward[k]:
        return geodesic(a, b, label.param)
    return geodesic(b, a, 1.0 - label.param)


def max_spoke_angle(fan: Fan, i: int, j: int) -> float:
    """Largest apex angle among triangles ``k >= min(i, j)``."""
    tail = fan.angles[min(i, j):]
    return max(tail) if tail else 0.0


def _chord_crossing(fan: Fan, x: M.ModelPoint, y: M.ModelPoint, k: int):
    """Radius where the chart segment ``[x, y]`` meets spoke ``k``, if it does.

    Added to the spoke's samples so that a straight path through a convex fan
    is represented exactly; any extra sample keeps the result a lower bound.
    """
    ch = fan._chart
    cx, cy = ch(x), ch(y)

    def side(r):
        return M.cross2(cx, cy, ch(fan.spoke_point(k, r)))

    R = fan.radii[k]
    lo, hi = side(0.0), side(R)
    if lo == 0.0 or hi == 0.0 or lo * hi > 0:
        return None
    r = brentq(side, 0.0, R, xtol=1e-15, rtol=1e-15)
    p = ch(fan.spoke_point(k, r))
    # the crossing must lie between x and y, not on the line's extension
    d = (cy[0] - cx[0], cy[1] - cx[1])
    t = ((p[0] - cx[0]) * d[0] + (p[1] - cx[1]) * d[1]) / (d[0] ** 2 + d[1] ** 2)
    return r if 0.0 <= t <= 1.0 else None


def intrinsic_tau_fan(fan: Fan, x: M.ModelPoint, y: M.ModelPoint, resolution: int = 200) -> float:
    """Lower bound on the time separation from ``x`` to ``y`` through the fan.

    Causal curves are broken at sample points on each spoke they cross; the
    best chain is found by dynamic programming.  Converges from below as
    ``resolution`` grows.
    """
    g = fan.gauge
    i, j = triangle_index(fan, x), triangle_index(fan, y)
    if i == j:
        return M.tau(g, x, y)
    step = 1 if j > i else -1
    spokes = list(range(i + 1, j + 1)) if step == 1 else list(range(i, j, -1))
    layers = []
    for k in spokes:
        rs = np.linspace(0.0, fan.radii[k], resolution)
        hit = _chord_crossing(fan, x, y, k)
        if hit is not None:
            rs = np.append(rs, hit)
        layers.append([fan.spoke_point(k, float(r)) for r in rs])

    def rel(A, B):
        XA, tA = M.as_arrays(g, A)
        XB, tB = M.as_arrays(g, B)
        t, le = M.batch_relations(g, XA, tA, XB, tB)
        return np.where(le, t, -np.inf)

    best = rel([x], layers[0])[0]
    for prev, cur in zip(layers, layers[1:]):
        best = (best[:, None] + rel(prev, cur)).max(0)
    val = (best + rel(layers[-1], [y])[:, 0]).max()
    return float(val) if np.isfinite(val) else 0.0


@dataclass(frozen=True)
class ErrorBudget:
    B: float
    c: float
    A: float
    epsilon: float
    saturated: bool = False


def epsilon_certificate(g: M.CurvatureGauge, B: float, c: float, A: float) -> ErrorBudget:
    """Bound on how much the skeleton projection can shorten a pair.

    ``B`` bounds the distance from the base, ``c`` is the pair's separation
    and ``A`` the largest apex angle involved.  For ``K < 0`` the bound is
    capped at the diameter when the arcsine argument leaves ``[0, 1]``.
    """
    if A < 0 or B < 0:
        raise DomainError("A and B must be non-negative")
    if not c > 0:
        raise DomainError("c must be positive")
    if A == 0.0:
        return ErrorBudget(B, c, A, 0.0)
    sh = math.sinh(A / 2.0)
    if g.K == 0:
        return ErrorBudget(B, c, A, 4.0 * B * B / c * sh)
    s = g.s
    if g.K > 0:
        return ErrorBudget(B, c, A, math.asinh(2.0 * math.cosh(s * B) ** 2 / math.sinh(s * c / 2.0) * sh) / s)
    arg = 2.0 / abs(math.sin(s * c / 2.0)) * sh
    if arg >= 1.0:
        return ErrorBudget(B, c, A, g.D, saturated=True)
    return ErrorBudget(B, c, A, 2.0 * math.asin(arg) / s)


def epsilon_bound(g: M.CurvatureGauge, B: float, c: float, A: float) -> float:
    return epsilon_certificate(g, B, c, A).epsilon
