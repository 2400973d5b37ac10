"""Poisson sprinkling of model-space regions and four-point surveys.

Regions are described in the conformal chart of :func:`model.strip_coords`,
where light rays run at 45 degrees.  A causal diamond is then a rectangle in
the null coordinates ``u = time + space`` and ``v = time - space``, which
makes both exact volumes and uniform sampling straightforward: candidates
are drawn uniformly in the rectangle and thinned by the volume density.

Random streams come from numpy's counter-based Philox generator.  Stream
``keys`` are appended to the seed's spawn key, so ``make_rng(seed, 3)`` is
the same stream wherever it is created.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import model as M
from .compare import FourPointGauge, check_fourpoint_upper
from .errors import DataError, DomainError
from .formats import point_from_record, point_record

DEFAULT_MC = 20000
RESAMPLE_CAP = 100
SURVEY_HEADER = "K,samples,pass_ii,pass_iii,pass_both,min_margin,mean_margin"


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Philox stream for ``seed``, split by the integer ``keys``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# regions

@dataclass(frozen=True)
class Region:
    """A causal diamond ``J(x, y)`` or a box in conformal coordinates.

    For a diamond ``bounds`` holds the null-coordinate rectangle
    ``(u0, u1, v0, v1)``; for a box it is ``(t0, t1, s0, s1)``.
    """

    gauge: M.CurvatureGauge
    kind: str
    bounds: tuple
    corners: tuple = ()
    tau: float = 0.0

    @classmethod
    def diamond(cls, g: M.CurvatureGauge, x: M.ModelPoint, y: M.ModelPoint) -> "Region":
        if not M.relation(g, x, y).is_future:
            raise DomainError("diamond corners must satisfy x <= y")
        T = M.tau(g, x, y)
        if T >= g.D:
            raise DomainError("diamond reaches the timelike diameter")
        tx, sx = M.strip_coords(g, x)
        ty, sy = M.strip_coords(g, y)
        if g.K > 0:
            sy += 2 * math.pi * round((sx - sy) / (2 * math.pi))
        u0, u1, v0, v1 = tx + sx, ty + sy, tx - sx, ty - sy
        u1, v1 = max(u0, u1), max(v0, v1)
        r = cls(g, "diamond", (u0, u1, v0, v1), (x, y), T)
        r._check_chart()
        return r

    @classmethod
    def box(cls, g: M.CurvatureGauge, t0: float, t1: float, s0: float, s1: float) -> "Region":
        if not (t0 <= t1 and s0 <= s1):
            raise DomainError("box bounds must be ordered")
        r = cls(g, "box", (float(t0), float(t1), float(s0), float(s1)))
        r._check_chart()
        return r

    def _check_chart(self) -> None:
        g = self.gauge
        if g.K == 0:
            return
        t0, t1, s0, s1 = self.strip_box()
        half = math.pi / 2
        if g.K > 0 and not (-half < t0 and t1 < half):
            raise DomainError("region leaves the conformal time range")
        if g.K > 0 and s1 - s0 > 2 * math.pi:
            raise DomainError("box wraps around the spatial circle")
        if g.K < 0 and not (-half < s0 and s1 < half):
            raise DomainError("region leaves the conformal strip")

    def strip_box(self) -> tuple:
        """Enclosing ``(t0, t1, s0, s1)`` in conformal coordinates."""
        if self.kind == "box":
            return self.bounds
        u0, u1, v0, v1 = self.bounds
        return (u0 + v0) / 2, (u1 + v1) / 2, (u0 - v1) / 2, (u1 - v0) / 2

    def descriptor(self) -> dict:
        d = {"kind": self.kind, "bounds": list(self.bounds)}
        if self.kind == "diamond":
            d["corners"] = [point_record(p) for p in self.corners]
        return d

    @classmethod
    def from_descriptor(cls, g: M.CurvatureGauge, d: dict) -> "Region":
        try:
            if d["kind"] == "diamond":
                x, y = (point_from_record(g, r) for r in d["corners"])
                return cls.diamond(g, x, y)
            if d["kind"] == "box":
                return cls.box(g, *d["bounds"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed region: {exc}") from exc
        raise DataError(f"unknown region kind {d.get('kind')!r}")


def _logcos_sum(g, u0, u1, v0, v1) -> float:
    if g.K > 0:
        f = lambda u, v: math.log(math.cos((u + v) / 2))  # noqa: E731
    else:
        f = lambda u, v: math.log(math.cos((u - v) / 2))  # noqa: E731
    return f(u1, v1) - f(u1, v0) - f(u0, v1) + f(u0, v0)


def exact_volume(r: Region) -> float:
    """Closed-form volume of ``r`` from the conformal density."""
    g = r.gauge
    if r.kind == "box":
        t0, t1, s0, s1 = r.bounds
        if g.K == 0:
            return (t1 - t0) * (s1 - s0)
        R2 = g.radius ** 2
        if g.K > 0:
            return R2 * (math.tan(t1) - math.tan(t0)) * (s1 - s0)
        return R2 * (t1 - t0) * (math.tan(s1) - math.tan(s0))
    u0, u1, v0, v1 = r.bounds
    if u1 == u0 or v1 == v0:
        return 0.0
    if g.K == 0:
        return (u1 - u0) * (v1 - v0) / 2
    R2 = g.radius ** 2
    # du dv = 2 dt ds; integrate sec^2 of the conformal time (or space) twice
    if g.K > 0:
        return -2.0 * R2 * _logcos_sum(g, u0, u1, v0, v1)
    return 2.0 * R2 * _logcos_sum(g, u0, u1, v0, v1)


def _density(g, t, s):
    if g.K == 0:
        return np.ones_like(t)
    c = np.cos(s if g.K < 0 else t)
    return g.radius ** 2 / (c * c)


def _uniform_param(r: Region, rng, n):
    """``n`` uniform points of the parameter rectangle, as strip coordinates."""
    a0, a1, b0, b1 = r.bounds
    a = rng.uniform(a0, a1, n) if a1 > a0 else np.full(n, a0)
    b = rng.uniform(b0, b1, n) if b1 > b0 else np.full(n, b0)
    if r.kind == "box":
        return a, b
    return (a + b) / 2, (a - b) / 2


def _param_area(r: Region) -> float:
    a0, a1, b0, b1 = r.bounds
    area = (a1 - a0) * (b1 - b0)
    return area / 2 if r.kind == "diamond" else area


def region_volume(r: Region, mc_samples: int = DEFAULT_MC, seed: int = 0) -> tuple:
    """``(volume, standard error)``.

    Flat regions are exact.  Curved ones are Monte Carlo integrals of the
    volume density over the parameter rectangle.
    """
    if r.gauge.K == 0 or _param_area(r) == 0.0:
        return exact_volume(r), 0.0
    if mc_samples < 2:
        raise DomainError("need at least two Monte Carlo samples")
    rng = make_rng(seed, 0)
    t, s = _uniform_param(r, rng, mc_samples)
    w = _density(r.gauge, t, s) * _param_area(r)
    return float(w.mean()), float(w.std(ddof=1) / math.sqrt(mc_samples))


def sample_region(r: Region, n: int, rng) -> list:
    """``n`` points distributed uniformly by volume in ``r``."""
    g = r.gauge
    if n == 0:
        return []
    t0, t1, s0, s1 = r.strip_box()
    corner = np.array([t0, t1, t0, t1]), np.array([s0, s0, s1, s1])
    top = float(_density(g, *corner).max())
    out_t, out_s = [], []
    have = 0
    while have < n:
        m = max(64, 2 * (n - have))
        t, s = _uniform_param(r, rng, m)
        keep = rng.uniform(0.0, top, m) < _density(g, t, s)
        out_t.append(t[keep])
        out_s.append(s[keep])
        have += int(keep.sum())
    t = np.concatenate(out_t)[:n]
    s = np.concatenate(out_s)[:n]
    return [M.from_strip(g, float(a), float(b)) for a, b in zip(t, s)]


# ---------------------------------------------------------------------------
# causal sets

@dataclass(frozen=True, eq=False)
class CausalSet:
    """Points sorted by conformal time with the induced order and ``tau``."""

    gauge: M.CurvatureGauge
    points: tuple
    le: np.ndarray            # le[i, j]: i <= j, i != j
    tau: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.points)

    def relation(self, i: int, j: int) -> M.CausalClass:
        if i == j:
            return M.CausalClass.NULL_FUTURE
        if self.le[i, j]:
            return M.CausalClass.CHRONOLOGICAL_FUTURE if self.tau[i, j] > 0 else M.CausalClass.NULL_FUTURE
        if self.le[j, i]:
            return M.CausalClass.CHRONOLOGICAL_PAST if self.tau[j, i] > 0 else M.CausalClass.NULL_PAST
        return M.CausalClass.UNRELATED

    def is_partial_order(self) -> bool:
        """Irreflexive, antisymmetric and transitive (exhaustive)."""
        L = self.le
        if L.diagonal().any() or (L & L.T).any():
            return False
        A = L.astype(np.int64)
        return not ((A @ A > 0) & ~L).any()


def induced_relations(g: M.CurvatureGauge, points: Sequence[M.ModelPoint]):
    X, th = M.as_arrays(g, points)
    tau, le = M.batch_relations(g, X, th, X, th)
    np.fill_diagonal(le, False)
    np.fill_diagonal(tau, 0.0)
    return tau, le


def causal_set(g: M.CurvatureGauge, points: Sequence[M.ModelPoint], provenance: Optional[dict] = None,
               tau: Optional[np.ndarray] = None, le: Optional[np.ndarray] = None) -> CausalSet:
    """Causal set on ``points``; matrices are recomputed unless both are given."""
    pts = sorted(points, key=lambda p: M.strip_coords(g, p)[0])
    if tau is None or le is None or len(points) != len(pts) or list(pts) != list(points):
        tau, le = induced_relations(g, pts)
    return CausalSet(g, tuple(pts), np.asarray(le, dtype=bool), np.asarray(tau, dtype=float),
                     dict(provenance or {}))


def sprinkle(r: Region, rho: float, seed: int) -> CausalSet:
    """Poisson process of intensity ``rho`` in ``r``."""
    if not rho > 0:
        raise DomainError("density must be positive")
    vol = exact_volume(r)
    if not (math.isfinite(vol) and vol > 0):
        raise DomainError(f"region volume {vol} is not finite and positive")
    rng = make_rng(seed)
    n = int(rng.poisson(rho * vol))
    pts = sample_region(r, n, rng)
    prov = {"region": r.descriptor(), "density": float(rho), "seed": int(seed)}
    return causal_set(r.gauge, pts, prov)


def longest_chain(cs: CausalSet, i: int, j: int) -> int:
    """Most links in a chain from ``i`` to ``j``; 0 when unrelated."""
    if i == j or not cs.le[i, j]:
        return 0
    L = cs.le
    inside = [k for k in range(cs.size) if k == j or (L[i, k] and L[k, j])]
    # points are time-sorted, so the order refines the index order
    inside.sort()
    best = {}
    for k in inside:
        preds = [best[m] for m in best if L[m, k]]
        best[k] = 1 + max(preds) if preds else (1 if L[i, k] else 0)
    return best[j]


# ---------------------------------------------------------------------------
# surveys

@dataclass(frozen=True)
class SurveyRow:
    K: float
    samples: int
    pass_ii: int
    pass_iii: int
    pass_both: int
    min_margin: float
    mean_margin: float


@dataclass(frozen=True, eq=False)
class SurveyTable:
    """Per-``K`` verdict counts.

    ``verdicts[q, k]`` holds the (ii) and (iii) verdicts of quadruple ``q``
    at ``K_list[k]``; conditions that do not apply to the quadruple's shape
    count as passed.
    """

    rows: tuple
    seed: int
    requested: int
    quadruples: tuple
    verdicts: np.ndarray
    shortfall: dict

    def csv(self) -> str:
        lines = [SURVEY_HEADER]
        for r in self.rows:
            lines.append(",".join([fmt(r.K), str(r.samples), str(r.pass_ii), str(r.pass_iii),
                                   str(r.pass_both), fmt(r.min_margin), fmt(r.mean_margin)]))
        return "\n".join(lines) + "\n"


def fmt(x: float) -> str:
    """17 significant digits, with ``inf``/``nan`` spelled out."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _draw(cs: CausalSet, shape: str, count: int, rng) -> list:
    n = cs.size
    if n < 4 or count <= 0:
        return []
    chron = cs.tau > 0
    out = []
    for _ in range(RESAMPLE_CAP * count):
        idx = tuple(sorted(int(v) for v in rng.choice(n, 4, replace=False)))
        a, b, c, d = idx
        if shape == "chain":
            ok = chron[a, b] and chron[b, c] and chron[c, d]
        else:
            ok = chron[a, b] and chron[a, c] and chron[b, d] and chron[c, d]
        if ok:
            out.append(idx)
            if len(out) == count:
                break
    return out


def survey_fourpoint(cs: CausalSet, K_list: Sequence[float], samples: int, seed: int) -> SurveyTable:
    """Sample ``samples`` quadruples of each causal shape and check both
    upper-bound four-point conditions at every ``K`` in ``K_list``.

    The diamond-shaped pool (``x2, x3`` inside ``I(x1, x4)``) draws from
    stream ``(seed, 1)``, the chain pool from ``(seed, 2)``.
    """
    pool_ii = _draw(cs, "diamond", samples, make_rng(seed, 1))
    pool_iii = _draw(cs, "chain", samples, make_rng(seed, 2))
    quads = tuple(pool_ii + pool_iii)
    gauges = [FourPointGauge.from_matrix(cs.tau, q) for q in quads]
    verdicts = np.ones((len(quads), len(K_list), 2), dtype=bool)
    rows = []
    for k, K in enumerate(K_list):
        g = M.curvature_gauge(K)
        margins = []
        for qi, q in enumerate(gauges):
            op, ss = check_fourpoint_upper(g, q)
            verdicts[qi, k] = (op.passed, ss.passed)
            margins += [v.margin for v in (op, ss) if v.applicable and math.isfinite(v.margin)]
        v = verdicts[:, k]
        rows.append(SurveyRow(float(K), len(quads), int(v[:, 0].sum()), int(v[:, 1].sum()),
                              int((v[:, 0] & v[:, 1]).sum()),
                              float(min(margins)) if margins else math.nan,
                              float(np.mean(margins)) if margins else math.nan))
    short = {"ii": samples - len(pool_ii), "iii": samples - len(pool_iii)}
    return SurveyTable(tuple(rows), int(seed), int(samples), quads, verdicts, short)


# ---------------------------------------------------------------------------
# records

def causet_record(cs: CausalSet, with_matrices: bool = False) -> dict:
    """Plain-data form: ``K``, region, density, seed, points (and matrices)."""
    prov = cs.provenance
    rec = {"K": cs.gauge.K, "region": prov.get("region"), "density": prov.get("density"),
           "seed": prov.get("seed"), "points": [point_record(p) for p in cs.points]}
    if with_matrices:
        rec["tau"] = cs.tau.tolist()
        rec["le"] = cs.le.astype(int).tolist()
    return rec


def causet_from_record(rec: dict) -> CausalSet:
    try:
        g = M.curvature_gauge(rec["K"])
        pts = [point_from_record(g, r) for r in rec["points"]]
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed causal-set record: {exc}") from exc
    prov = {k: rec.get(k) for k in ("region", "density", "seed")}
    tau = le = None
    if "tau" in rec and "le" in rec:
        tau = np.asarray(rec["tau"], dtype=float).reshape(len(pts), len(pts))
        le = np.asarray(rec["le"], dtype=bool).reshape(len(pts), len(pts))
    return causal_set(g, pts, prov, tau, le)
