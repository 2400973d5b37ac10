"""Majorisation of timelike loops by convex regions of a model plane."""

from .alexandrov import Decomposition, is_concave_at_x3, straighten_alexandrov
from .fan import (ErrorBudget, Fan, SkeletonLabel, build_fan, epsilon_bound, epsilon_certificate,
                  intrinsic_tau_fan, max_spoke_angle, psi_eval, resolve_label, skeleton_label,
                  skeleton_project, triangle_index)
from .loops import (ConvexityReport, TimelikeLoop, chain_length, chains_cross, convexity_check,
                    fan_ring, intrinsic_tau, loop_length, sample_in_polygon, same_point)
from .maps import (Composition, IdentityMap, IsometryMap, Map, Piecewise, SectorCollapseMap,
                   compose, piecewise)
from .pipeline import MajorantStage, ModelSpace, PairReport, check_pairs, majorant_of_curve, sample_pairs
from .polygon import majorize_polygon
from .regions import ConvexPolygon, Region, Sector, locate, triangle
