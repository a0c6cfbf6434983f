"""Number formatting and JSON emission shared by every report."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any


def fmt_real(x: float) -> float | str:
    """Round to 15 significant digits; non-finite values become strings."""
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.15g}")


def fmt_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _default(obj: Any):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"
