"""Comparison triangles and the two four-point configurations for upper
curvature bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional

import numpy as np

from . import model as M
from .errors import DataError, DomainError, InputError, NonRealizableError, UnsupportedConfigurationError

VERDICT_TOL = 1e-7
BUILD_TOL = 1e-9


@dataclass(frozen=True)
class SideTriple:
    """``a = tau(x,y)``, ``b = tau(y,z)``, ``c = tau(x,z)``."""

    a: float
    b: float
    c: float

    def validate(self, g: M.CurvatureGauge, tol: float = BUILD_TOL) -> None:
        a, b, c = self.a, self.b, self.c
        if min(a, b, c) < 0 or not all(math.isfinite(v) for v in (a, b, c)):
            raise DomainError(f"side lengths must be finite and non-negative: {self}")
        if a == 0 and b == 0:
            raise NonRealizableError("at most one side may be null")
        if c < a + b - tol * max(1.0, c):
            raise NonRealizableError(f"reverse triangle inequality fails: {c} < {a} + {b}")
        if c >= g.D:
            raise NonRealizableError(f"longest side {c} is not below the diameter {g.D}")


@dataclass(frozen=True)
class RealizedTriangle:
    gauge: M.CurvatureGauge
    x: M.ModelPoint
    y: M.ModelPoint
    z: M.ModelPoint
    sides: SideTriple

    @property
    def vertices(self):
        return self.x, self.y, self.z


def realize_triangle(g: M.CurvatureGauge, s: SideTriple, side: int = 1,
                     base: Optional[tuple] = None) -> RealizedTriangle:
    """Comparison triangle for ``s``.

    Without ``base`` the longest side runs from the origin along the
    reference future direction.  With ``base = (xbar, zbar)`` that segment is
    used instead; its length must equal ``s.c``.
    """
    s.validate(g)
    if base is None:
        x = M.origin(g)
        z = M.exp_point(g, x, M.reference_direction(g, x), s.c)
    else:
        x, z = base
        if abs(M.tau(g, x, z) - s.c) > BUILD_TOL * max(1.0, s.c):
            raise DomainError("base segment length differs from the longest side")
    y = M.place_point(g, x, z, s.a, s.b, side)
    return RealizedTriangle(g, x, y, z, s)


_SIDE_ENDS = {"xy": ("x", "y"), "yz": ("y", "z"), "xz": ("x", "z")}
_SIDE_LEN = {"xy": "a", "yz": "b", "xz": "c"}


def comparison_point(t: RealizedTriangle, side: str, dist: float) -> M.ModelPoint:
    """Point on ``side`` at time separation ``dist`` from its earlier end."""
    if side not in _SIDE_ENDS:
        raise DomainError(f"unknown side {side!r}")
    length = getattr(t.sides, _SIDE_LEN[side])
    if length <= 0:
        raise DomainError("comparison points are never taken on a null side")
    if not -BUILD_TOL <= dist <= length * (1 + BUILD_TOL) + BUILD_TOL:
        raise DomainError(f"distance {dist} outside [0, {length}]")
    a, b = (getattr(t, k) for k in _SIDE_ENDS[side])
    return M.geodesic_point(t.gauge, a, b, min(max(dist / length, 0.0), 1.0))


# ---------------------------------------------------------------------------
# four-point configurations

@dataclass(frozen=True)
class FourPointGauge:
    t12: float
    t13: float
    t14: float
    t23: float
    t24: float
    t34: float
    flags: Optional[Mapping[str, bool]] = None

    @classmethod
    def from_points(cls, g: M.CurvatureGauge, pts, with_flags: bool = False) -> "FourPointGauge":
        x1, x2, x3, x4 = pts
        t = lambda p, q: M.tau(g, p, q)  # noqa: E731
        flags = {"le23": M.relation(g, x2, x3).is_future} if with_flags else None
        return cls(t(x1, x2), t(x1, x3), t(x1, x4), t(x2, x3), t(x2, x4), t(x3, x4), flags)

    @classmethod
    def from_matrix(cls, tau_mat, idx, causal=None) -> "FourPointGauge":
        """Gauge of the quadruple ``idx`` read off a time-separation matrix.

        ``causal[i, j]`` (boolean, ``i <= j``) supplies the strict-mode flag.
        """
        i1, i2, i3, i4 = idx
        t = lambda a, b: float(tau_mat[a, b])  # noqa: E731
        flags = {"le23": bool(causal[i2, i3])} if causal is not None else None
        return cls(t(i1, i2), t(i1, i3), t(i1, i4), t(i2, i3), t(i2, i4), t(i3, i4), flags)

    def values(self):
        return (self.t12, self.t13, self.t14, self.t23, self.t24, self.t34)


@dataclass(frozen=True)
class FourPointRealization:
    points: tuple
    tau_hat: float
    relation_hat: M.CausalClass


@dataclass(frozen=True)
class Verdict:
    passed: bool
    margin: float
    which: str
    realization: Optional[FourPointRealization] = None
    flags: tuple = field(default=())

    @property
    def applicable(self) -> bool:
        return "not-applicable" not in self.flags


def fourpoint_opposite_realize(g: M.CurvatureGauge, q: FourPointGauge) -> FourPointRealization:
    """Realize the triangles on ``(1,2,4)`` and ``(1,3,4)`` on opposite sides
    of ``[x1, x4]``; report the resulting separation of ``x2`` and ``x3``."""
    if not 0 < q.t14 < g.D:
        raise DomainError(f"tau14 must lie in (0, {g.D})")
    SideTriple(q.t12, q.t24, q.t14).validate(g)
    SideTriple(q.t13, q.t34, q.t14).validate(g)
    x1 = M.origin(g)
    x4 = M.exp_point(g, x1, M.reference_direction(g, x1), q.t14)
    x2 = M.place_point(g, x1, x4, q.t12, q.t24, -1)
    x3 = M.place_point(g, x1, x4, q.t13, q.t34, +1)
    return FourPointRealization((x1, x2, x3, x4), M.tau(g, x2, x3), M.relation(g, x2, x3))


def fourpoint_sameside_realize(g: M.CurvatureGauge, q: FourPointGauge) -> FourPointRealization:
    """Realize the triangles on ``(1,2,3)`` and ``(2,3,4)`` on the same side
    of ``[x2, x3]``; report the separation of ``x1`` and ``x4``, which may be
    ``math.inf`` when ``K < 0``."""
    if not 0 < q.t23 < g.D:
        raise DomainError(f"tau23 must lie in (0, {g.D})")
    SideTriple(q.t12, q.t23, q.t13).validate(g)
    SideTriple(q.t23, q.t34, q.t24).validate(g)
    x2 = M.origin(g)
    x3 = M.exp_point(g, x2, M.reference_direction(g, x2), q.t23)
    x1 = M.place_point(g, x2, x3, q.t12, q.t13, +1)
    x4 = M.place_point(g, x2, x3, q.t24, q.t34, +1)
    return FourPointRealization((x1, x2, x3, x4), M.tau(g, x1, x4), M.relation(g, x1, x4))


def _opposite_applicable(q: FourPointGauge, strict: bool, D: float) -> bool:
    if not 0 < q.t14 < D:
        return False
    if strict:
        # x2, x3 in I+(x1) cap J-(x4) or J+(x1) cap I-(x4)
        ok2 = (q.t12 > 0 or q.t24 > 0) and q.t14 >= q.t12 + q.t24 - BUILD_TOL
        ok3 = (q.t13 > 0 or q.t34 > 0) and q.t14 >= q.t13 + q.t34 - BUILD_TOL
        return ok2 and ok3
    return min(q.t12, q.t13, q.t24, q.t34) > 0


def _sameside_applicable(q: FourPointGauge, strict: bool, D: float) -> bool:
    if q.t23 <= 0 or max(q.t13, q.t24, q.t14) >= D:
        return False
    if strict:
        return True
    return q.t12 > 0 and q.t34 > 0


def check_fourpoint_upper(g: M.CurvatureGauge, q: FourPointGauge, strict: bool = False,
                          tol: float = VERDICT_TOL) -> tuple:
    """Evaluate the opposite-side and same-side conditions for curvature
    bounded above by ``K``.

    Returns ``(opposite, sameside)``, plus a third verdict for the causal
    implication when ``strict``.  Gauges that do not have the causal shape a
    condition asks for, or that break the size bound ``< D_K``, give a
    passing verdict flagged ``not-applicable``;
    the strict (ii) cases with ``tau24 = 0`` or ``tau13 = 0`` are passed and
    flagged ``vacuous``.

    In strict mode the null patterns of the shape are taken from zero
    entries of the gauge, so ``tau12 = 0`` is read as ``x1 <= x2`` null.
    """
    if strict and (q.flags is None or "le23" not in q.flags):
        raise InputError("strict mode needs the causal flag 'le23'")
    if strict and q.t14 > 0 and ((q.t12 == 0 and q.t24 == 0) or (q.t13 == 0 and q.t34 == 0)):
        raise UnsupportedConfigurationError("a middle point is null related to both x1 and x4")

    if _opposite_applicable(q, strict, g.D):
        vac = strict and (q.t24 == 0 or q.t13 == 0)
        real = fourpoint_opposite_realize(g, q)
        margin = q.t23 - real.tau_hat
        flags = ("vacuous",) if vac else ()
        op = Verdict(vac or margin >= -tol, margin, "opposite", real, flags)
    else:
        real = None
        op = Verdict(True, 0.0, "opposite", None, ("not-applicable",))

    if _sameside_applicable(q, strict, g.D):
        rs = fourpoint_sameside_realize(g, q)
        if math.isinf(rs.tau_hat):
            ss = Verdict(True, math.inf, "sameside", rs, ("infinite",))
        else:
            margin = rs.tau_hat - q.t14
            ss = Verdict(margin >= -tol, margin, "sameside", rs)
    else:
        ss = Verdict(True, 0.0, "sameside", None, ("not-applicable",))

    if not strict:
        return op, ss

    if real is None:
        sc = Verdict(True, 0.0, "strict-causal", None, ("not-applicable",))
    elif "vacuous" in op.flags:
        sc = Verdict(True, 0.0, "strict-causal", real, ("vacuous",))
    else:
        hat_le = real.relation_hat.is_future
        ok = (not hat_le) or bool(q.flags["le23"])
        sc = Verdict(ok, 0.0 if ok else -1.0, "strict-causal", real)
    return op, ss, sc


# ---------------------------------------------------------------------------
# sampled one-sided triangle comparison

Label = Hashable
TauOracle = Callable[[Label, Label], float]

_OPPOSITE = {"x": "yz", "y": "xz", "z": "xy"}


def _check_oracle(s: SideTriple, oracle: TauOracle, tol: float) -> None:
    a, b, c = oracle("x", "y"), oracle("y", "z"), oracle("x", "z")
    for got, want, name in ((a, s.a, "xy"), (b, s.b, "yz"), (c, s.c, "xz")):
        if abs(got - want) > tol * max(1.0, want):
            raise DataError(f"oracle side {name} = {got}, triple says {want}")
    if c < a + b - tol * max(1.0, c):
        raise DataError("oracle violates the reverse triangle inequality")


def check_triangle_comparison_sampled(g: M.CurvatureGauge, s: SideTriple, tau_oracle: TauOracle,
                                      samples: int, seed: int = 0, tol: float = VERDICT_TOL,
                                      side: int = 1) -> list:
    """One-sided comparison on sampled (vertex, point on opposite side) pairs.

    ``tau_oracle(p, q)`` returns the time separation between labels of the
    original configuration: ``'x'``, ``'y'``, ``'z'`` for the vertices and
    ``(side, dist)`` for the point on ``side`` at separation ``dist`` from the
    side's earlier end.
    """
    _check_oracle(s, tau_oracle, 1e-9)
    tri = realize_triangle(g, s, side)
    rng = np.random.default_rng(seed)
    timelike = [v for v in "xyz" if getattr(s, _SIDE_LEN[_OPPOSITE[v]]) > 0]
    out = []
    if not timelike:
        return out
    for _ in range(samples):
        v = timelike[int(rng.integers(len(timelike)))]
        sd = _OPPOSITE[v]
        length = getattr(s, _SIDE_LEN[sd])
        dist = float(rng.uniform(0.0, length))
        lab = (sd, dist)
        pbar = comparison_point(tri, sd, dist)
        vbar = getattr(tri, v)
        # check both time orders; one of each pair is zero
        m1 = tau_oracle(v, lab) - M.tau(g, vbar, pbar)
        m2 = tau_oracle(lab, v) - M.tau(g, pbar, vbar)
        margin = min(m1, m2)
        out.append(Verdict(margin >= -tol, margin, "triangle", None, (v, sd, dist)))
    return out


def model_space_oracle(g: M.CurvatureGauge, x: M.ModelPoint, y: M.ModelPoint, z: M.ModelPoint) -> TauOracle:
    """Oracle backed by an actual triangle ``x << y << z`` of ``L2(g.K)``."""
    verts = {"x": x, "y": y, "z": z}

    def resolve(lab):
        if isinstance(lab, str):
            return verts[lab]
        sd, dist = lab
        a, b = (verts[k] for k in _SIDE_ENDS[sd])
        length = M.tau(g, a, b)
        return M.geodesic_point(g, a, b, min(dist / length, 1.0))

    return lambda p, q: M.tau(g, resolve(p), resolve(q))


__all__ = [
    "SideTriple", "RealizedTriangle", "FourPointGauge", "FourPointRealization", "Verdict",
    "realize_triangle", "comparison_point", "fourpoint_opposite_realize",
    "fourpoint_sameside_realize", "check_fourpoint_upper", "check_triangle_comparison_sampled",
    "model_space_oracle", "UnsupportedConfigurationError",
]
