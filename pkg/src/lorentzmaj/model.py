"""The two-dimensional Lorentzian model spaces of constant curvature.

Three charts are used:

* ``K == 0``: the Minkowski plane, points are ``(t, x)``.
* ``K > 0``: de Sitter space as the quadric ``<p,p> = 1/K`` in ambient
  coordinates ``(T, X, Y)`` with signature ``(-, +, +)``.  Time runs with ``T``.
* ``K < 0``: the universal cover of anti-de Sitter space, the quadric
  ``<p,p> = -1/|K|`` in ``(T, U, X)`` with signature ``(-, -, +)`` plus an
  integer winding number.  Global time is the angle ``atan2(U, T)`` shifted by
  ``2*pi*winding``.

All vector arithmetic is done on plain tuples; the vectors are two or three
long and the per-call overhead of numpy would dominate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, NonRealizableError, OutOfRangeError

NULL_TOL = 1e-10
QUADRIC_TOL = 1e-12
TWO_PI = 2.0 * math.pi

Vec = tuple


@dataclass(frozen=True)
class CurvatureGauge:
    K: float
    s: float
    D: float

    @property
    def kind(self) -> str:
        if self.K == 0:
            return "flat"
        return "ds" if self.K > 0 else "ads"

    @property
    def dim(self) -> int:
        return 2 if self.K == 0 else 3

    @property
    def radius(self) -> float:
        return 1.0 / self.s

    @property
    def quadric(self) -> float:
        return 1.0 / self.K if self.K else 0.0


def curvature_gauge(K: float) -> CurvatureGauge:
    K = float(K)
    if not math.isfinite(K):
        raise DomainError(f"curvature must be finite, got {K}")
    s = math.sqrt(abs(K))
    D = math.pi / s if K < 0 else math.inf
    return CurvatureGauge(K, s, D)


@dataclass(frozen=True)
class ModelPoint:
    coords: tuple
    winding: int = 0

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


class CausalClass(enum.Enum):
    CHRONOLOGICAL_FUTURE = "chronological-future"
    NULL_FUTURE = "null-future"
    UNRELATED = "unrelated"
    NULL_PAST = "null-past"
    CHRONOLOGICAL_PAST = "chronological-past"

    def reverse(self) -> "CausalClass":
        return _REVERSE[self]

    @property
    def is_future(self) -> bool:
        """``p <= q`` for ``relation(p, q)``."""
        return self in (CausalClass.CHRONOLOGICAL_FUTURE, CausalClass.NULL_FUTURE)

    @property
    def is_past(self) -> bool:
        return self in (CausalClass.CHRONOLOGICAL_PAST, CausalClass.NULL_PAST)


_REVERSE = {
    CausalClass.CHRONOLOGICAL_FUTURE: CausalClass.CHRONOLOGICAL_PAST,
    CausalClass.NULL_FUTURE: CausalClass.NULL_PAST,
    CausalClass.UNRELATED: CausalClass.UNRELATED,
    CausalClass.NULL_PAST: CausalClass.NULL_FUTURE,
    CausalClass.CHRONOLOGICAL_PAST: CausalClass.CHRONOLOGICAL_FUTURE,
}


@dataclass(frozen=True)
class SignedAngle:
    """Hyperbolic angle ``omega`` together with the sign of the cosine law."""

    omega: float
    sigma: int = 1

    @property
    def value(self) -> float:
        return self.sigma * math.cosh(self.omega)

    @classmethod
    def from_value(cls, val: float) -> "SignedAngle":
        sigma = 1 if val >= 0 else -1
        return cls(math.acosh(max(1.0, abs(val))), sigma)


# ---------------------------------------------------------------------------
# tuple vector helpers

def _eta(g: CurvatureGauge) -> tuple:
    if g.K == 0:
        return (-1.0, 1.0)
    if g.K > 0:
        return (-1.0, 1.0, 1.0)
    return (-1.0, -1.0, 1.0)


def inner(g: CurvatureGauge, u: Sequence[float], v: Sequence[float]) -> float:
    """Ambient Lorentzian product; on tangent vectors it is the metric."""
    if g.K == 0:
        return -u[0] * v[0] + u[1] * v[1]
    if g.K > 0:
        return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return -u[0] * v[0] - u[1] * v[1] + u[2] * v[2]


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _scale(c, u):
    return tuple(c * a for a in u)


def _lin(a, u, b, v):
    return tuple(a * x + b * y for x, y in zip(u, v))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _norm(u):
    return math.sqrt(sum(a * a for a in u))


# ---------------------------------------------------------------------------
# charts

def origin(g: CurvatureGauge) -> ModelPoint:
    if g.K == 0:
        return ModelPoint((0.0, 0.0))
    if g.K > 0:
        return ModelPoint((0.0, g.radius, 0.0))
    return ModelPoint((g.radius, 0.0, 0.0))


def theta(g: CurvatureGauge, p: ModelPoint) -> float:
    """Global time angle of a point in the anti-de Sitter cover."""
    return math.atan2(p.coords[1], p.coords[0]) + TWO_PI * p.winding


def strip_coords(g: CurvatureGauge, p: ModelPoint) -> tuple:
    """Conformal coordinates ``(time, space)`` in which the metric is a
    positive multiple of ``-dtime^2 + dspace^2``.

    For ``K < 0`` this is the strip ``|space| < pi/2``; for ``K > 0`` the
    cylinder ``|time| < pi/2``.  Flat points are returned unchanged.
    """
    c = p.coords
    if g.K == 0:
        return c
    if g.K < 0:
        return theta(g, p), math.atan2(c[2], g.radius)
    R = g.radius
    return math.atan2(c[0], R), math.atan2(c[2], c[1])


def from_strip(g: CurvatureGauge, time: float, space: float) -> ModelPoint:
    """Inverse of :func:`strip_coords`."""
    if g.K == 0:
        return ModelPoint((float(time), float(space)))
    R = g.radius
    if g.K < 0:
        ch = R / math.cos(space)
        w = math.floor((time + math.pi) / TWO_PI)
        return ModelPoint((ch * math.cos(time), ch * math.sin(time), R * math.tan(space)), int(w))
    sec = R / math.cos(time)
    return ModelPoint((R * math.tan(time), sec * math.cos(space), sec * math.sin(space)))


def volume_density(g: CurvatureGauge, time: float, space: float) -> float:
    """Volume element in :func:`strip_coords`."""
    if g.K == 0:
        return 1.0
    R = g.radius
    c = math.cos(space if g.K < 0 else time)
    return R * R / (c * c)


def lift(g: CurvatureGauge, coords: Sequence[float], near: float) -> ModelPoint:
    """Attach the winding whose global time is closest to ``near``."""
    coords = tuple(float(c) for c in coords)
    if g.K >= 0:
        return ModelPoint(coords)
    base = math.atan2(coords[1], coords[0])
    w = round((near - base) / TWO_PI)
    return ModelPoint(coords, int(w))


def make_point(g: CurvatureGauge, coords: Sequence[float], winding: int = 0) -> ModelPoint:
    p = ModelPoint(tuple(float(c) for c in coords), int(winding))
    validate(g, p)
    return p


def validate(g: CurvatureGauge, p: ModelPoint) -> None:
    if len(p.coords) != g.dim:
        raise DomainError(f"expected {g.dim} coordinates, got {len(p.coords)}")
    if not all(math.isfinite(c) for c in p.coords):
        raise DomainError("non-finite coordinate")
    if g.K == 0:
        return
    q = g.quadric
    if abs(inner(g, p.coords, p.coords) - q) > 1e-10 * max(1.0, abs(q), _norm(p.coords) ** 2):
        raise DomainError("point is off the model quadric")


# ---------------------------------------------------------------------------
# causality and time separation

def _time_sign(g: CurvatureGauge, p: ModelPoint, q: ModelPoint) -> float:
    if g.K == 0:
        return q.coords[0] - p.coords[0]
    if g.K > 0:
        return q.coords[0] - p.coords[0]
    return theta(g, q) - theta(g, p)


def _interval(g, p, q):
    d = _sub(q.coords, p.coords)
    return -inner(g, d, d), sum(a * a for a in d)


def relation(g: CurvatureGauge, p: ModelPoint, q: ModelPoint, tol: float = NULL_TOL) -> CausalClass:
    """Causal class of ``q`` as seen from ``p``."""
    dt = _time_sign(g, p, q)
    if g.K < 0 and abs(dt) >= math.pi:
        return CausalClass.CHRONOLOGICAL_FUTURE if dt > 0 else CausalClass.CHRONOLOGICAL_PAST
    I, scale = _interval(g, p, q)
    if scale == 0.0:
        return CausalClass.NULL_FUTURE
    if abs(I) <= tol * scale:
        return CausalClass.NULL_FUTURE if dt >= 0 else CausalClass.NULL_PAST
    if I < 0:
        return CausalClass.UNRELATED
    return CausalClass.CHRONOLOGICAL_FUTURE if dt > 0 else CausalClass.CHRONOLOGICAL_PAST


def _tau_from_interval(g: CurvatureGauge, I: float) -> float:
    if I <= 0:
        return 0.0
    if g.K == 0:
        return math.sqrt(I)
    s = g.s
    h = 0.5 * g.K * I if g.K > 0 else -0.5 * g.K * I
    if g.K > 0:
        # h = cosh(s tau) - 1
        return math.log1p(h + math.sqrt(h * (h + 2.0))) / s
    # h = 1 - cos(s tau)
    if h >= 2.0:
        return math.inf
    if h <= 1.0:
        return 2.0 * math.asin(math.sqrt(0.5 * h)) / s
    return math.acos(1.0 - h) / s


def tau(g: CurvatureGauge, p: ModelPoint, q: ModelPoint) -> float:
    """Positive part of the time separation.

    For ``K < 0`` pairs that are chronologically related beyond the timelike
    diameter get ``math.inf``.
    """
    rel = relation(g, p, q)
    if rel is not CausalClass.CHRONOLOGICAL_FUTURE:
        return 0.0
    if g.K < 0 and _time_sign(g, p, q) >= math.pi:
        return math.inf
    I, _ = _interval(g, p, q)
    return _tau_from_interval(g, I)


def abs_tau(g: CurvatureGauge, p: ModelPoint, q: ModelPoint) -> float:
    return max(tau(g, p, q), tau(g, q, p))


# ---------------------------------------------------------------------------
# tangent vectors

_ORIENT = {"flat": 1.0, "ds": -1.0, "ads": 1.0}


def reference_direction(g: CurvatureGauge, p: ModelPoint) -> Vec:
    """Unit future timelike tangent at ``p`` given by the chart's time."""
    c = p.coords
    if g.K == 0:
        return (1.0, 0.0)
    if g.K > 0:
        e = (1.0, 0.0, 0.0)
        v = _sub(e, _scale(inner(g, e, c) / g.quadric, c))
    else:
        v = (-c[1], c[0], 0.0)
    n = math.sqrt(-inner(g, v, v))
    return _scale(1.0 / n, v)


def perp(g: CurvatureGauge, p: ModelPoint, v: Vec) -> Vec:
    """Rotate a unit tangent at ``p`` to its oriented orthogonal partner.

    ``perp(origin, e_t)`` is the positive spatial direction of the chart.
    """
    if g.K == 0:
        return (v[1], v[0])
    n = _cross(p.coords, v)
    n = (-n[0], n[1], n[2]) if g.K > 0 else (-n[0], -n[1], n[2])
    size = math.sqrt(abs(inner(g, n, n)))
    return _scale(_ORIENT[g.kind] / size, n)


def boost(g: CurvatureGauge, p: ModelPoint, v: Vec, phi: float) -> Vec:
    """Rotate the tangent ``v`` at ``p`` by rapidity ``phi``."""
    return _lin(math.cosh(phi), v, math.sinh(phi), perp(g, p, v))


def exp_point(g: CurvatureGauge, p: ModelPoint, v: Vec, r: float) -> ModelPoint:
    """Point at time separation ``r`` along the unit timelike tangent ``v``."""
    c = p.coords
    if g.K == 0:
        return ModelPoint(_lin(1.0, c, r, v))
    s = g.s
    if g.K > 0:
        return ModelPoint(_lin(math.cosh(s * r), c, math.sinh(s * r) / s, v))
    q = _lin(math.cos(s * r), c, math.sin(s * r) / s, v)
    return lift(g, q, theta(g, p))


def null_point(g: CurvatureGauge, p: ModelPoint, n: Vec, lam: float) -> ModelPoint:
    """Move along the null tangent ``n``; null geodesics are straight lines
    in every chart."""
    q = _lin(1.0, p.coords, lam, n)
    if g.K < 0:
        return lift(g, q, theta(g, p))
    return ModelPoint(q)


def direction(g: CurvatureGauge, p: ModelPoint, q: ModelPoint) -> tuple:
    """Time separation and unit tangent at ``p`` pointing to ``q``.

    ``q`` must be chronologically related to ``p`` (either direction).
    """
    rel = relation(g, p, q)
    if rel not in (CausalClass.CHRONOLOGICAL_FUTURE, CausalClass.CHRONOLOGICAL_PAST):
        raise DomainError(f"points are not chronologically related ({rel.value})")
    a, b = (p, q) if rel is CausalClass.CHRONOLOGICAL_FUTURE else (q, p)
    if g.K < 0 and _time_sign(g, a, b) >= math.pi:
        raise OutOfRangeError("pair is beyond the timelike diameter")
    I, _ = _interval(g, p, q)
    r = _tau_from_interval(g, I)
    if not math.isfinite(r):
        raise OutOfRangeError("pair is beyond the timelike diameter")
    d = _sub(q.coords, p.coords)
    if g.K == 0:
        return r, _scale(1.0 / r, d)
    s = g.s
    if g.K > 0:
        # q - cosh(sr) p, written to avoid cancellation for short segments
        w = _sub(d, _scale(2.0 * math.sinh(0.5 * s * r) ** 2, p.coords))
        return r, _scale(s / math.sinh(s * r), w)
    w = _add(d, _scale(2.0 * math.sin(0.5 * s * r) ** 2, p.coords))
    return r, _scale(s / math.sin(s * r), w)


def geodesic_point(g: CurvatureGauge, p: ModelPoint, q: ModelPoint, t: float) -> ModelPoint:
    if relation(g, p, q) is not CausalClass.CHRONOLOGICAL_FUTURE:
        raise DomainError("geodesic_point needs a chronological pair p << q")
    if t == 0:
        return p
    if t == 1:
        return q
    r, v = direction(g, p, q)
    return exp_point(g, p, v, t * r)


def null_frame_point(g: CurvatureGauge, p: ModelPoint, axis: Vec, side: int, lam: float) -> ModelPoint:
    """Point ``p + lam*axis + side*|lam|*perp(axis)``: a null ray whose time
    component follows ``axis`` for ``lam > 0`` and opposes it otherwise."""
    n = _lin(lam, axis, side * abs(lam), perp(g, p, axis))
    return null_point(g, p, n, 1.0)


# ---------------------------------------------------------------------------
# law of cosines

def _check_sides(g, *sides):
    for x in sides:
        if not x >= 0 or not math.isfinite(x):
            raise DomainError(f"side lengths must be finite and non-negative, got {x}")
        if g.K < 0 and x >= g.D:
            raise OutOfRangeError(f"side {x} is not below the diameter {g.D}")


def loc_value(g: CurvatureGauge, a: float, b: float, c: float) -> float:
    """``sigma*cosh(omega)`` at the vertex between sides ``a`` and ``b``."""
    if g.K == 0:
        return (c * c - a * a - b * b) / (2.0 * a * b)
    s = g.s
    if g.K > 0:
        ha, hb, hc = (2.0 * math.sinh(0.5 * s * x) ** 2 for x in (a, b, c))
        num = hc - (ha * math.cosh(s * b) + hb)
        return num / (math.sinh(s * a) * math.sinh(s * b))
    ha, hb, hc = (2.0 * math.sin(0.5 * s * x) ** 2 for x in (a, b, c))
    num = hc - (ha * math.cos(s * b) + hb)
    return num / (math.sin(s * a) * math.sin(s * b))


def loc_angle(g: CurvatureGauge, a: float, b: float, c: float, tol: float = 1e-12) -> SignedAngle:
    """Solve the cosine law for the angle opposite ``c``.

    ``|sigma*cosh(omega)|`` may fall short of 1 by ``tol`` before the sides
    count as non-realizable; such values are rounded to a degenerate angle.
    """
    _check_sides(g, a, b)
    if a <= 0 or b <= 0:
        raise DomainError("adjacent sides must be positive")
    if not c >= 0:
        raise DomainError("opposite side must be non-negative")
    val = loc_value(g, a, b, c)
    if abs(val) < 1.0 - tol or not math.isfinite(val):
        raise NonRealizableError(f"sides ({a}, {b}, {c}) give sigma*cosh(omega) = {val}")
    return SignedAngle.from_value(val)


def loc_side(g: CurvatureGauge, a: float, b: float, angle: SignedAngle) -> float:
    """Side opposite the angle between the sides ``a`` and ``b``."""
    _check_sides(g, a, b)
    val = angle.value
    if g.K == 0:
        c2 = a * a + b * b + 2.0 * a * b * val
        if c2 < -1e-12 * (a * a + b * b):
            raise NonRealizableError("negative squared side")
        return math.sqrt(max(c2, 0.0))
    s = g.s
    if g.K > 0:
        # cosh(sc) - 1 in stable form
        h = 2.0 * math.sinh(0.5 * s * a) ** 2 * math.cosh(s * b) + 2.0 * math.sinh(0.5 * s * b) ** 2 \
            + val * math.sinh(s * a) * math.sinh(s * b)
        if h < -1e-12:
            raise NonRealizableError("cosh(sc) < 1")
        h = max(h, 0.0)
        return math.log1p(h + math.sqrt(h * (h + 2.0))) / s
    h = 2.0 * math.sin(0.5 * s * a) ** 2 * math.cos(s * b) + 2.0 * math.sin(0.5 * s * b) ** 2 \
        + val * math.sin(s * a) * math.sin(s * b)
    if h < -1e-12:
        raise NonRealizableError("cos(sc) > 1")
    if h >= 2.0:
        raise OutOfRangeError("no solution below the diameter")
    h = max(h, 0.0)
    if h <= 1.0:
        return 2.0 * math.asin(math.sqrt(0.5 * h)) / s
    return math.acos(1.0 - h) / s


def angle_at(g: CurvatureGauge, vertex: ModelPoint, p: ModelPoint, q: ModelPoint) -> SignedAngle:
    """Hyperbolic angle at ``vertex`` between the geodesics to ``p`` and ``q``."""
    for other in (p, q):
        rel = relation(g, vertex, other)
        if rel not in (CausalClass.CHRONOLOGICAL_FUTURE, CausalClass.CHRONOLOGICAL_PAST):
            raise DomainError(f"angle undefined: adjacent side is {rel.value}")
    _, u = direction(g, vertex, p)
    _, w = direction(g, vertex, q)
    return SignedAngle.from_value(inner(g, u, w))


def rapidity(g: CurvatureGauge, p: ModelPoint, v: Vec, ref: Vec | None = None) -> float:
    """Signed rapidity of the unit timelike ``v`` relative to ``ref``.

    Both are brought to the future cone first, so the result does not
    depend on their time orientation.
    """
    if ref is None:
        ref = reference_direction(g, p)
    if inner(g, v, reference_direction(g, p)) > 0:
        v = _scale(-1.0, v)
    if inner(g, ref, reference_direction(g, p)) > 0:
        ref = _scale(-1.0, ref)
    x = inner(g, v, perp(g, p, ref))
    return math.asinh(x)


def side_of(g: CurvatureGauge, a: ModelPoint, b: ModelPoint, p: ModelPoint) -> float:
    """Signed, scale-free position of ``p`` relative to the geodesic line
    through ``a`` and ``b``; positive on the chart's ``+x`` side when the
    line runs to the future."""
    if g.K == 0:
        u = _sub(b.coords, a.coords)
        w = _sub(p.coords, a.coords)
        nu, nw = _norm(u), _norm(w)
        if nu == 0 or nw == 0:
            return 0.0
        return (u[0] * w[1] - u[1] * w[0]) / (nu * nw)
    u = _sub(b.coords, a.coords)
    w = _sub(p.coords, a.coords)
    nu, nw = _norm(u), _norm(w)
    if nu == 0 or nw == 0:
        return 0.0
    return _ORIENT[g.kind] * _det3(a.coords, u, w) / (_norm(a.coords) * nu * nw)


# ---------------------------------------------------------------------------
# isometries

@dataclass(frozen=True)
class Isometry:
    """Ambient linear (``K != 0``) or affine (``K == 0``) map.

    ``time_sign`` is -1 for time-reversing maps.  For ``K < 0`` the lift to
    the universal cover is fixed by ``anchor_src -> anchor_dst``.
    """

    gauge: CurvatureGauge
    matrix: tuple
    shift: tuple
    anchor_src: ModelPoint
    anchor_dst: ModelPoint
    time_sign: int = 1

    def _raw(self, c):
        m = self.matrix
        out = tuple(sum(m[i][j] * c[j] for j in range(len(c))) for i in range(len(c)))
        return _add(out, self.shift)

    def __call__(self, p: ModelPoint) -> ModelPoint:
        g = self.gauge
        raw = self._raw(p.coords)
        if g.K >= 0:
            return ModelPoint(raw)
        dth = theta(g, p) - theta(g, self.anchor_src)
        k = round(dth / TWO_PI)
        base = lift(g, raw, theta(g, self.anchor_dst) + self.time_sign * (dth - TWO_PI * k))
        return ModelPoint(base.coords, base.winding + self.time_sign * k)

    def inverse(self) -> "Isometry":
        import numpy as np

        m = np.array(self.matrix, dtype=float)
        inv = np.linalg.inv(m)
        shift = tuple(-float(x) for x in inv @ np.array(self.shift, dtype=float))
        return Isometry(self.gauge, tuple(tuple(float(x) for x in row) for row in inv), shift,
                        self.anchor_dst, self.anchor_src, self.time_sign)

    def compose(self, other: "Isometry") -> "Isometry":
        """``self`` after ``other``."""
        import numpy as np

        a = np.array(self.matrix, dtype=float)
        b = np.array(other.matrix, dtype=float)
        m = a @ b
        shift = a @ np.array(other.shift, dtype=float) + np.array(self.shift, dtype=float)
        return Isometry(self.gauge, tuple(tuple(float(x) for x in row) for row in m),
                        tuple(float(x) for x in shift), other.anchor_src, self(other.anchor_dst),
                        self.time_sign * other.time_sign)


def identity_isometry(g: CurvatureGauge) -> Isometry:
    n = g.dim
    m = tuple(tuple(1.0 if i == j else 0.0 for j in range(n)) for i in range(n))
    o = origin(g)
    return Isometry(g, m, (0.0,) * n, o, o)


def time_reflection(g: CurvatureGauge) -> Isometry:
    """Time-reversing isometry fixing the spatial axis through the origin."""
    if g.K == 0:
        m = ((-1.0, 0.0), (0.0, 1.0))
    elif g.K > 0:
        m = ((-1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    else:
        m = ((1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, 1.0))
    o = origin(g)
    return Isometry(g, m, (0.0,) * g.dim, o, o, time_sign=-1)


def _frame(g, p, v):
    e = perp(g, p, v)
    if g.K == 0:
        return [v, e]
    return [p.coords, v, e]


def isometry_from_segments(g: CurvatureGauge, src: tuple, dst: tuple, flip: bool = False,
                           tol: float = 1e-9) -> Isometry:
    """Isometry taking the segment ``src`` onto ``dst``.

    With ``flip`` the image of the ``+`` side of ``src`` lands on the ``-``
    side of ``dst``.
    """
    import numpy as np

    a, b = src
    a2, b2 = dst
    r1, v1 = direction(g, a, b)
    r2, v2 = direction(g, a2, b2)
    if abs(r1 - r2) > tol * max(1.0, r1):
        raise DomainError(f"segment lengths differ: {r1} vs {r2}")
    if relation(g, a, b).is_future != relation(g, a2, b2).is_future:
        raise DomainError("segments have opposite time orientation")
    f1 = np.array(_frame(g, a, v1), dtype=float).T
    f2 = np.array(_frame(g, a2, v2), dtype=float).T
    if flip:
        f2[:, -1] *= -1.0
    m = f2 @ np.linalg.inv(f1)
    if g.K == 0:
        shift = np.array(a2.coords) - m @ np.array(a.coords)
    else:
        shift = np.zeros(3)
    return Isometry(g, tuple(tuple(float(x) for x in row) for row in m),
                    tuple(float(x) for x in shift), a, a2)


# ---------------------------------------------------------------------------
# hyperbolas and sectors

@dataclass(frozen=True)
class Hyperbola:
    center: ModelPoint
    r: float
    future: bool = True


def hyperbola_point(h: Hyperbola, g: CurvatureGauge, phi: float) -> ModelPoint:
    if not h.r > 0 or (g.K < 0 and h.r >= g.D):
        raise DomainError("hyperbola radius must lie in (0, D_K)")
    v = boost(g, h.center, reference_direction(g, h.center), phi)
    if not h.future:
        v = _scale(-1.0, v)
    return exp_point(g, h.center, v, h.r)


def sector_collapse(g: CurvatureGauge, center: ModelPoint, spoke_end: ModelPoint, p: ModelPoint,
                    past: bool = False, tol: float = 1e-9) -> ModelPoint:
    """Send ``p`` to the point of the spoke ``[center, spoke_end]`` at the
    same time separation from ``center``.  With ``past`` the sector opens to
    the past of ``center``."""
    if past:
        R0 = tau(g, spoke_end, center)
        r = tau(g, p, center)
        related = relation(g, p, center).is_future
    else:
        R0 = tau(g, center, spoke_end)
        r = tau(g, center, p)
        related = relation(g, center, p).is_future
    if not R0 > 0:
        raise DomainError("spoke must be timelike")
    if not related or r > R0 * (1.0 + tol) + tol:
        raise DomainError("point outside the radial range of the sector")
    t = min(r / R0, 1.0)
    if past:
        return geodesic_point(g, spoke_end, center, 1.0 - t)
    return geodesic_point(g, center, spoke_end, t)


# ---------------------------------------------------------------------------
# realizing a third point from two separations

def _null_offset(g: CurvatureGauge, c: float, d: float) -> float:
    """Offset along a null ray at one end of a timelike segment of length
    ``c`` so that the time separation to the other end becomes ``d``."""
    if g.K == 0:
        return (c * c - d * d) / (2.0 * c)
    s, R = g.s, g.radius
    if g.K > 0:
        return R * (math.cosh(s * c) - math.cosh(s * d)) / math.sinh(s * c)
    return R * (math.cos(s * d) - math.cos(s * c)) / math.sin(s * c)


def place_point(g: CurvatureGauge, p: ModelPoint, q: ModelPoint, d_p: float, d_q: float,
                side: int, tol: float = 1e-9) -> ModelPoint:
    """Point ``y`` with ``|tau|(p, y) = d_p`` and ``|tau|(q, y) = d_q`` on the
    ``side`` (+1/-1) of the line through the chronological pair ``p << q``.

    Whether ``y`` lies before, between or after ``p`` and ``q`` follows from
    the cosine law.  A zero separation puts ``y`` on a null ray.
    """
    c, v = direction(g, p, q)
    if relation(g, p, q) is not CausalClass.CHRONOLOGICAL_FUTURE:
        raise DomainError("base must be future directed")
    if d_p < 0 or d_q < 0:
        raise DomainError("separations must be non-negative")
    if d_p > 0 and d_q > 0:
        ang = loc_angle(g, c, d_p, d_q, tol=tol)
        if ang.sigma < 0:
            w = boost(g, p, v, side * ang.omega)
        else:
            w = _scale(-1.0, boost(g, p, v, -side * ang.omega))
        return exp_point(g, p, w, d_p)
    if d_p == 0 and d_q == 0:
        raise NonRealizableError("both separations vanish")
    if d_p == 0:
        lam = _null_offset(g, c, d_q)
        return null_frame_point(g, p, v, side, lam)
    _, vq = direction(g, q, p)
    lam = _null_offset(g, c, d_p)
    # perp of the reversed axis flips; compensate to keep ``side`` meaning
    return null_frame_point(g, q, vq, -side, lam)


# ---------------------------------------------------------------------------
# batch evaluation

def as_arrays(g: CurvatureGauge, points: Sequence[ModelPoint]):
    """Stack points into ``(coords, time)``; ``time`` is the global time
    angle for ``K < 0`` and the chart time otherwise."""
    import numpy as np

    if len(points) == 0:
        return np.zeros((0, g.dim)), np.zeros(0)
    X = np.array([p.coords for p in points], dtype=float)
    if g.K < 0:
        th = np.array([theta(g, p) for p in points])
    else:
        th = X[:, 0].copy()
    return X, th


def batch_relations(g: CurvatureGauge, A, thA, B, thB, tol: float = NULL_TOL):
    """Pairwise time separation and causal order between two point arrays.

    Returns ``(tau, le)`` where ``tau[i, j] = tau(A_i, B_j)`` and ``le[i, j]``
    says ``A_i <= B_j`` (chronological or null, future-directed).
    """
    import numpy as np

    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    eta = np.array(_eta(g))
    D = B[None, :, :] - A[:, None, :]
    I = -(D * D * eta).sum(2)
    scale = (D * D).sum(2)
    dt = np.asarray(thB)[None, :] - np.asarray(thA)[:, None]
    null = (np.abs(I) <= tol * scale) | (scale == 0.0)
    fut = dt > 0
    chron = (I > tol * scale) & fut
    le = (null & (dt >= 0)) | chron
    tau = np.zeros_like(I)
    if g.K == 0:
        tau[chron] = np.sqrt(I[chron])
    elif g.K > 0:
        h = 0.5 * g.K * I[chron]
        tau[chron] = np.log1p(h + np.sqrt(h * (h + 2.0))) / g.s
    else:
        far = dt >= math.pi
        chron = chron | far
        le = le | far
        h = -0.5 * g.K * I
        with np.errstate(invalid="ignore"):
            small = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * h, 0.0, 1.0))) / g.s
            big = np.arccos(np.clip(1.0 - h, -1.0, 1.0)) / g.s
        val = np.where(h <= 1.0, small, big)
        val = np.where((h >= 2.0) | far, np.inf, val)
        tau[chron] = val[chron]
    return tau, le


# ---------------------------------------------------------------------------
# projective chart

class ProjectiveChart:
    """Affine coordinates in which every geodesic is a straight line.

    For ``K != 0`` a point ``P`` gets ``(<P,e1>/<P,c>, <P,e2>/<P,c>)`` with
    ``c`` the chart centre and ``e1, e2`` a tangent frame there.  Geodesics
    are plane sections through the ambient origin, so they become lines.
    The denominator stays away from zero on any causal diamond below the
    timelike diameter that contains ``c``.  For ``K == 0`` the chart just
    swaps to ``(x, t)``.
    """

    def __init__(self, g: CurvatureGauge, center: ModelPoint | None = None):
        import numpy as np

        self.g = g
        if g.K == 0:
            self.basis = None
            return
        c = center or origin(g)
        e1 = reference_direction(g, c)
        e2 = perp(g, c, e1)
        eta = np.array(_eta(g))
        self.basis = np.stack([np.array(c.coords) * eta, np.array(e2) * eta, np.array(e1) * eta])

    def __call__(self, p: ModelPoint) -> tuple:
        if self.basis is None:
            return (p.coords[1], p.coords[0])
        n, e1, e2 = self.basis
        c = p.coords
        d = n[0] * c[0] + n[1] * c[1] + n[2] * c[2]
        return ((e1[0] * c[0] + e1[1] * c[1] + e1[2] * c[2]) / d,
                (e2[0] * c[0] + e2[1] * c[1] + e2[2] * c[2]) / d)

    def array(self, X):
        import numpy as np

        X = np.asarray(X, dtype=float)
        if self.basis is None:
            return X[:, ::-1].copy()
        Y = X @ self.basis.T
        return Y[:, 1:] / Y[:, :1]


def cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
