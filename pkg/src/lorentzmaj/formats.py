"""Text formats shared by the command-line tools.

JSON is written with sorted keys and every float at 17 significant digits,
so files are byte-stable and parse back to the same doubles.  Infinities
use the ``Infinity`` token that :mod:`json` reads back.
"""

from __future__ import annotations

import json
import math
from numbers import Integral, Real

from . import model as M
from .errors import InputError


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return "%.17g" % x


def _scalar(v) -> str | None:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, Integral):
        return str(int(v))
    if isinstance(v, Real):
        return fmt_float(v)
    return None


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON text; lists of scalars stay on one line."""
    s = _scalar(obj)
    if s is not None:
        return s
    pad, inner = " " * indent, " " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(obj[k], indent + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)) or hasattr(obj, "tolist"):
        seq = obj.tolist() if hasattr(obj, "tolist") else obj
        parts = [dumps(v, indent + 1) for v in seq]
        if all(_scalar(v) is not None for v in seq):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def loads(text: str, what: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def point_record(p: M.ModelPoint) -> list:
    """Coordinates, followed by the winding when it is non-zero."""
    return list(p.coords) + ([p.winding] if p.winding else [])


def point_from_record(g: M.CurvatureGauge, rec) -> M.ModelPoint:
    try:
        vals = [float(v) for v in rec]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad point {rec!r}") from exc
    if len(vals) == g.dim + 1 and g.K < 0:
        return M.make_point(g, vals[:-1], int(vals[-1]))
    if len(vals) != g.dim:
        raise InputError(f"point {rec!r} needs {g.dim} coordinates")
    return M.make_point(g, vals)


def points_from_records(g: M.CurvatureGauge, recs) -> tuple:
    if not isinstance(recs, list):
        raise InputError("expected a list of points")
    return tuple(point_from_record(g, r) for r in recs)
