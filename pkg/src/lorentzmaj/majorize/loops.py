"""Timelike loops and polygon predicates in a model plane.

A loop is a pair of future-directed broken geodesics ``alpha`` and ``beta``
sharing both endpoints.  Polygon predicates (convexity, point location,
segment visibility) work in a projective chart where geodesics are lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import model as M
from ..errors import DomainError, PreconditionError

CONVEX_TOL = 1e-9
SAME_POINT_TOL = 1e-9


def same_point(g: M.CurvatureGauge, p: M.ModelPoint, q: M.ModelPoint, tol: float = SAME_POINT_TOL) -> bool:
    if g.K < 0 and p.winding != q.winding:
        return False
    return max(abs(a - b) for a, b in zip(p.coords, q.coords)) <= tol


@dataclass(frozen=True)
class TimelikeLoop:
    gauge: M.CurvatureGauge
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        g = self.gauge
        if len(self.alpha) < 2 or len(self.beta) < 2:
            raise DomainError("each chain needs at least two vertices")
        if not (same_point(g, self.alpha[0], self.beta[0]) and same_point(g, self.alpha[-1], self.beta[-1])):
            raise DomainError("chains must share both endpoints")
        for chain in (self.alpha, self.beta):
            for a, b in zip(chain, chain[1:]):
                if not M.relation(g, a, b).is_future:
                    raise DomainError("chain segments must be future-directed causal")
        if not M.tau(g, self.alpha[0], self.alpha[-1]) > 0:
            raise DomainError("endpoints must be chronologically related")

    @property
    def start(self) -> M.ModelPoint:
        return self.alpha[0]

    @property
    def end(self) -> M.ModelPoint:
        return self.alpha[-1]

    @property
    def breakpoints(self) -> int:
        return len(self.alpha) + len(self.beta) - 4

    def ring(self) -> list:
        """Boundary vertices in cyclic order: ``alpha`` forward, ``beta`` back."""
        return list(self.alpha) + list(self.beta[-2:0:-1])

    def chart(self) -> M.ProjectiveChart:
        g = self.gauge
        return M.ProjectiveChart(g, M.geodesic_point(g, self.start, self.end, 0.5))

    def swapped(self) -> "TimelikeLoop":
        return TimelikeLoop(self.gauge, self.beta, self.alpha)


def chain_length(g: M.CurvatureGauge, chain: Sequence[M.ModelPoint]) -> float:
    return sum(M.tau(g, a, b) for a, b in zip(chain, chain[1:]))


def loop_length(loop: TimelikeLoop) -> tuple:
    """Time lengths ``(L(alpha), L(beta))``."""
    g = loop.gauge
    return chain_length(g, loop.alpha), chain_length(g, loop.beta)


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    # (chain name, vertex index, turn) for every vertex bending inward
    concave: tuple

    def __bool__(self):
        return self.convex


def _turns(pts: np.ndarray) -> np.ndarray:
    """Sine of the chart turning angle at every vertex of a closed ring."""
    prev = np.roll(pts, 1, axis=0)
    nxt = np.roll(pts, -1, axis=0)
    u = pts - prev
    w = nxt - pts
    cr = u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]
    den = np.hypot(u[:, 0], u[:, 1]) * np.hypot(w[:, 0], w[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, cr / den, 0.0)


def ring_orientation(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    return 1.0 if area >= 0 else -1.0


def convexity_check(loop: TimelikeLoop, tol: float = CONVEX_TOL) -> ConvexityReport:
    """Convexity of the polygon bounded by the loop.

    A vertex is concave when the boundary turns against the polygon's
    orientation by more than ``tol`` (sine of the chart turning angle).
    """
    chart = loop.chart()
    ring = loop.ring()
    pts = np.array([chart(p) for p in ring])
    t = _turns(pts) * ring_orientation(pts)
    na = len(loop.alpha)
    bad = []
    for i in np.nonzero(t < -tol)[0]:
        i = int(i)
        if i < na:
            bad.append(("alpha", i, float(-t[i])))
        else:
            bad.append(("beta", len(loop.beta) - 1 - (i - na + 1), float(-t[i])))
    return ConvexityReport(not bad, tuple(bad))


# ---------------------------------------------------------------------------
# polygon geometry on chart coordinates

def _inside_ring(ring: np.ndarray, pts: np.ndarray, tol: float) -> np.ndarray:
    """Even-odd test, with points within ``tol`` of an edge counted inside."""
    a = ring
    b = np.roll(ring, -1, axis=0)
    px = pts[..., 0][..., None]
    py = pts[..., 1][..., None]
    ay, by = a[:, 1], b[:, 1]
    ax, bx = a[:, 0], b[:, 0]
    straddle = (ay > py) != (by > py)
    with np.errstate(invalid="ignore", divide="ignore"):
        xcross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < xcross)
    inside = (hits.sum(-1) % 2) == 1
    ex, ey = bx - ax, by - ay
    L2 = ex * ex + ey * ey
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip(((px - ax) * ex + (py - ay) * ey) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    dx = px - (ax + t * ex)
    dy = py - (ay + t * ey)
    near = (dx * dx + dy * dy).min(-1) <= tol * tol
    return inside | near


def segments_inside(ring: np.ndarray, A: np.ndarray, B: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Whether each segment ``A[i] -> B[j]`` lies in the closed polygon ``ring``.

    Returns an ``(len(A), len(B))`` mask.  Endpoints are assumed to lie in
    the polygon already.
    """
    e0 = ring
    e1 = np.roll(ring, -1, axis=0)
    a = A[:, None, None, :]
    b = B[None, :, None, :]

    def orient(o, p, q):
        return (p[..., 0] - o[..., 0]) * (q[..., 1] - o[..., 1]) - (p[..., 1] - o[..., 1]) * (q[..., 0] - o[..., 0])

    o1 = orient(a, b, e0)
    o2 = orient(a, b, e1)
    o3 = orient(e0, e1, a)
    o4 = orient(e0, e1, b)
    seg = np.hypot(*(B[None, :, :] - A[:, None, :]).transpose(2, 0, 1))[..., None]
    edge = np.hypot(*(e1 - e0).T)[None, None, :]
    eps = tol * seg * edge

    def strict(u, v):
        return (u * v < 0) & (np.abs(u) > eps) & (np.abs(v) > eps)

    proper = strict(o1, o2) & strict(o3, o4)
    ok = ~proper.any(-1)
    for t in (0.25, 0.5, 0.75):
        mid = (1 - t) * A[:, None, :] + t * B[None, :, :]
        ok &= _inside_ring(ring, mid, tol)
    return ok


def intrinsic_tau(g: M.CurvatureGauge, chart: M.ProjectiveChart, ring: Sequence[M.ModelPoint],
                  P: Sequence[M.ModelPoint], Q: Sequence[M.ModelPoint]) -> tuple:
    """Time separation measured by causal curves inside a polygon.

    A longest causal curve in a polygon of a model plane is a broken
    geodesic bending only at polygon corners, so this is a longest-path
    search over the corners.  Returns ``(tau, le)`` arrays of shape
    ``(len(P), len(Q))``; ``le`` says a causal curve exists.
    """
    rc = np.array([chart(v) for v in ring])
    XP, tP = M.as_arrays(g, P)
    XQ, tQ = M.as_arrays(g, Q)
    XV, tV = M.as_arrays(g, ring)
    cP, cQ = chart.array(XP), chart.array(XQ)
    cV = rc

    def leg(XA, tA, cA, XB, tB, cB):
        t, le = M.batch_relations(g, XA, tA, XB, tB)
        ok = le & segments_inside(rc, cA, cB)
        return np.where(ok, t, -np.inf)

    direct = leg(XP, tP, cP, XQ, tQ, cQ)
    PV = leg(XP, tP, cP, XV, tV, cV)
    VQ = leg(XV, tV, cV, XQ, tQ, cQ)
    W = leg(XV, tV, cV, XV, tV, cV)
    np.fill_diagonal(W, 0.0)
    for k in range(len(ring)):
        W = np.maximum(W, W[:, k:k + 1] + W[k:k + 1, :])
    PW = (PV[:, :, None] + W[None, :, :]).max(1) if len(ring) else PV
    via = (PW[:, :, None] + VQ[None, :, :]).max(1)
    best = np.maximum(direct, via)
    le = np.isfinite(best) | (best == np.inf)
    return np.where(le, np.maximum(best, 0.0), 0.0), le


def sample_in_polygon(g: M.CurvatureGauge, chart: M.ProjectiveChart, apex: M.ModelPoint,
                      ring: Sequence[M.ModelPoint], rng, n: int) -> list:
    """Points spread over a polygon that is star-shaped from ``apex``: pick a
    fan triangle ``(apex, ring[i], ring[i+1])`` by chart area, then a random
    barycentric point in it."""
    tris = []
    for a, b in zip(ring, ring[1:] + ring[:1]):
        if same_point(g, a, apex) or same_point(g, b, apex):
            continue
        tris.append((apex, a, b))
    if not tris:
        raise PreconditionError("degenerate polygon")
    areas = np.array([abs(M.cross2(chart(t[0]), chart(t[1]), chart(t[2]))) for t in tris])
    if areas.sum() <= 0:
        areas = np.ones(len(tris))
    idx = rng.choice(len(tris), size=n, p=areas / areas.sum())
    out = []
    for k in idx:
        o, a, b = tris[int(k)]
        u, v = rng.uniform(size=2)
        if u + v > 1:
            u, v = 1 - u, 1 - v
        out.append(triangle_point(g, o, a, b, u, v))
    return out


def triangle_point(g, o, a, b, u, v) -> M.ModelPoint:
    """Barycentric combination of the corners with weights ``(1-u-v, u, v)``.

    For ``K != 0`` the ambient combination is pushed back onto the surface
    along its ray from the ambient origin, which keeps it inside the
    geodesic triangle.
    """
    if g.K == 0:
        return M.make_point(g, tuple(oc + u * (ac - oc) + v * (bc - oc)
                                     for oc, ac, bc in zip(o.coords, a.coords, b.coords)))
    w = 1.0 - u - v
    raw = tuple(w * oc + u * ac + v * bc for oc, ac, bc in zip(o.coords, a.coords, b.coords))
    q = M.inner(g, raw, raw)
    scale = math.sqrt(g.quadric / q)
    coords = tuple(scale * c for c in raw)
    near = w * M.theta(g, o) + u * M.theta(g, a) + v * M.theta(g, b) if g.K < 0 else 0.0
    return M.lift(g, coords, near)


def chains_cross(loop: TimelikeLoop, tol: float = 1e-12) -> bool:
    """Whether a segment of ``alpha`` properly crosses a segment of ``beta``."""
    chart = loop.chart()
    A = [chart(v) for v in loop.alpha]
    B = [chart(v) for v in loop.beta]
    for a0, a1 in zip(A, A[1:]):
        for b0, b1 in zip(B, B[1:]):
            o1, o2 = M.cross2(a0, a1, b0), M.cross2(a0, a1, b1)
            o3, o4 = M.cross2(b0, b1, a0), M.cross2(b0, b1, a1)
            if o1 * o2 < -tol and o3 * o4 < -tol:
                return True
    return False


def fan_ring(loop: TimelikeLoop) -> list:
    """Boundary of the union of the fan triangles ``(O, v_k, v_k+1)`` of both
    chains.  This is the loop's own polygon when the chains bend to opposite
    sides of ``[O, z]``; when they bend to the same side it is the outer
    chain closed by ``[z, O]``."""
    chart = loop.chart()
    o, z = chart(loop.start), chart(loop.end)

    def area(chain):
        pts = [chart(v) for v in chain]
        return sum(M.cross2(o, p, q) for p, q in zip(pts, pts[1:]))

    aa, ab = area(loop.alpha), area(loop.beta)
    if aa * ab <= 0:
        return loop.ring()
    outer = loop.alpha if abs(aa) >= abs(ab) else loop.beta
    return list(outer)
