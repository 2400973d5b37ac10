"""Finite-stage majorant of a pair of causal curves.

At stage ``n`` both curves are sampled at ``2**n + 1`` parameters, their
comparison fans are laid out on opposite sides of ``[O, z]``, the glued
polygon is made convex, and the composite

    f_n = resolve . psi_n . S_n . phi_n

sends the convex region back to the original space.  Each tested pair gets
a certificate ``epsilon_n`` bounding how much ``f_n`` may shorten it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .. import model as M
from ..errors import DomainError
from .fan import Fan, build_fan, epsilon_certificate, psi_eval, resolve_label, skeleton_project, triangle_index
from .loops import TimelikeLoop, sample_in_polygon
from .polygon import majorize_polygon

PAIR_TOL = 1e-9


class ModelSpace:
    """A model space used as the target of a majorant; labels are points."""

    def __init__(self, g: M.CurvatureGauge):
        self.gauge = g

    def tau(self, p, q) -> float:
        return M.tau(self.gauge, p, q)

    def geodesic(self, p, q, t) -> M.ModelPoint:
        return M.geodesic_point(self.gauge, p, q, t)


@dataclass
class MajorantStage:
    gauge: M.CurvatureGauge
    n: int
    fans: tuple                   # (fan of alpha, fan of beta)
    glued: TimelikeLoop           # the fans as one loop
    convex: TimelikeLoop          # its convex majorant
    phi: Any
    B: float

    def locate(self, p: M.ModelPoint):
        """``(fan index, triangle index, phi(p))`` for a point of the convex region."""
        g = self.gauge
        q = self.phi(p)
        o, z = self.glued.start, self.glued.end
        k = 0 if M.side_of(g, o, z, q) * self.fans[0].side >= 0 else 1
        return k, triangle_index(self.fans[k], q), q

    def label(self, p: M.ModelPoint):
        k, _, q = self.locate(p)
        fan = self.fans[k]
        return k, psi_eval(fan, skeleton_project(fan, q))

    def __call__(self, p: M.ModelPoint, geodesic: Callable):
        k, lab = self.label(p)
        return resolve_label(self.fans[k], lab, geodesic)

    def certificate(self, x: M.ModelPoint, y: M.ModelPoint):
        """Error budget for the pair, or ``None`` when the images of ``x, y``
        under ``phi`` are not chronologically related."""
        g = self.gauge
        kx, ix, qx = self.locate(x)
        ky, iy, qy = self.locate(y)
        c = max(M.tau(g, qx, qy), M.tau(g, qy, qx))
        if not c > 0:
            return None
        fx, fy = self.fans[kx], self.fans[ky]
        if kx == ky:
            A = max(fx.angles[min(ix, iy):] or (0.0,))
        else:
            # the two points are pushed towards each other from both sides
            A = max(fx.angles[ix:] or (0.0,)) + max(fy.angles[iy:] or (0.0,))
        return epsilon_certificate(g, self.B, c, A)


@dataclass
class PairReport:
    pairs: list
    tau_source: np.ndarray
    tau_image: np.ndarray
    epsilon: np.ndarray
    c: np.ndarray

    @property
    def defects(self) -> np.ndarray:
        return self.tau_source - self.tau_image

    @property
    def slack(self) -> np.ndarray:
        """``epsilon - defect``; negative entries would break the bound."""
        return self.epsilon - self.defects

    def max_certificate(self, min_c: float = 0.0) -> float:
        sel = self.c >= min_c
        return float(self.epsilon[sel].max()) if sel.any() else 0.0


def _sample_chain(curve: Callable, n: int) -> list:
    N = 2 ** n
    return [curve(i / N) for i in range(N + 1)]


def majorant_of_curve(g: M.CurvatureGauge, alpha: Callable[[float], Any], beta: Callable[[float], Any],
                      n: int, tau_oracle: Callable) -> MajorantStage:
    """Stage-``n`` majorant of the loop formed by ``alpha`` and ``beta``.

    ``alpha`` and ``beta`` map ``[0, 1]`` to original labels with common
    endpoints; ``tau_oracle`` gives time separations between labels.
    """
    if n < 0:
        raise DomainError("stage must be non-negative")
    ca, cb = _sample_chain(alpha, n), _sample_chain(beta, n)
    o = ca[0]
    fa = build_fan(g, o, ca, tau_oracle, side=1)
    fb = build_fan(g, o, cb, tau_oracle, side=-1)
    glued = TimelikeLoop(g, tuple(fa.points), tuple(fb.points[:-1]) + (fa.points[-1],))
    convex, phi = majorize_polygon(g, glued)
    return MajorantStage(g, n, (fa, fb), glued, convex, phi, float(tau_oracle(o, ca[-1])))


def sample_pairs(stage: MajorantStage, count: int, rng) -> list:
    """Random point pairs of the stage's convex region."""
    loop = stage.convex
    chart = loop.chart()
    pts = sample_in_polygon(stage.gauge, chart, loop.start, loop.ring(), rng, 2 * count)
    return list(zip(pts[::2], pts[1::2]))


def check_pairs(stage: MajorantStage, pairs: Sequence, geodesic: Callable, tau_oracle: Callable) -> PairReport:
    """Time separation before and after ``f_n`` for chronological pairs,
    oriented so that the first point precedes the second."""
    g = stage.gauge
    kept, src, img, eps, cs = [], [], [], [], []
    for x, y in pairs:
        if M.tau(g, y, x) > 0:
            x, y = y, x
        t = M.tau(g, x, y)
        if not t > 0:
            continue
        cert = stage.certificate(x, y)
        if cert is None:
            continue
        kept.append((x, y))
        src.append(t)
        img.append(float(tau_oracle(stage(x, geodesic), stage(y, geodesic))))
        eps.append(cert.epsilon)
        cs.append(cert.c)
    return PairReport(kept, np.array(src), np.array(img), np.array(eps), np.array(cs))
