"""Executable comparison geometry in the two-dimensional Lorentzian model spaces."""

from .errors import (DataError, DomainError, GeometryError, InputError, NonRealizableError,
                     NotApplicableError, OutOfRangeError, PreconditionError, TerminationError,
                     UnsupportedConfigurationError)
from .model import (CausalClass, CurvatureGauge, Hyperbola, Isometry, ModelPoint, SignedAngle,
                    angle_at, curvature_gauge, geodesic_point, hyperbola_point,
                    isometry_from_segments, loc_angle, loc_side, relation, sector_collapse, tau)

__version__ = "0.1.0"
