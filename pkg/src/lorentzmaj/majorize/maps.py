"""Maps between regions of a model plane, assembled piece by piece."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .. import model as M
from .regions import REGION_TOL, Region, locate


class Map:
    def __call__(self, p: M.ModelPoint) -> M.ModelPoint:  # pragma: no cover
        raise NotImplementedError


class IdentityMap(Map):
    def __call__(self, p):
        return p

    def __repr__(self):
        return "IdentityMap()"


@dataclass
class IsometryMap(Map):
    iso: M.Isometry

    def __call__(self, p):
        return self.iso(p)


@dataclass
class SectorCollapseMap(Map):
    """Radial collapse of a sector onto one spoke, keeping the time
    separation from the centre.  Points slightly outside the radial range
    (from region tolerance) are clamped to the spoke's far end."""

    gauge: M.CurvatureGauge
    center: M.ModelPoint
    spoke_end: M.ModelPoint
    past: bool = False

    def __call__(self, p):
        g = self.gauge
        if self.past:
            R0 = M.tau(g, self.spoke_end, self.center)
            r = M.tau(g, p, self.center) if M.relation(g, p, self.center).is_future else 0.0
        else:
            R0 = M.tau(g, self.center, self.spoke_end)
            r = M.tau(g, self.center, p) if M.relation(g, self.center, p).is_future else 0.0
        if R0 <= 0.0:
            return self.center
        t = min(r / R0, 1.0)
        if self.past:
            return M.geodesic_point(g, self.spoke_end, self.center, 1.0 - t)
        return M.geodesic_point(g, self.center, self.spoke_end, t)


@dataclass
class Composition(Map):
    """Apply ``maps`` left to right."""

    maps: tuple

    def __call__(self, p):
        for m in self.maps:
            p = m(p)
        return p


@dataclass
class Piecewise(Map):
    """Each point goes through the map of the first region that holds it.

    Points outside every region (only possible through rounding) use the
    region they violate least.
    """

    pieces: tuple
    tol: float = REGION_TOL

    @property
    def regions(self) -> list:
        return [r for r, _ in self.pieces]

    def piece_index(self, p: M.ModelPoint) -> int:
        return locate(self.regions, p, self.tol)

    def __call__(self, p):
        return self.pieces[self.piece_index(p)][1](p)


def compose(*maps: Map) -> Map:
    """Composition applying ``maps`` in the given order, skipping identities."""
    flat = []
    for m in maps:
        if isinstance(m, IdentityMap):
            continue
        if isinstance(m, Composition):
            flat.extend(m.maps)
        else:
            flat.append(m)
    if not flat:
        return IdentityMap()
    if len(flat) == 1:
        return flat[0]
    return Composition(tuple(flat))


def piecewise(pieces: Sequence[tuple[Region, Map]], tol: float = REGION_TOL) -> Piecewise:
    return Piecewise(tuple(pieces), tol)
