"""Shared numeric tolerances and enumeration caps."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_CAP = 24


class CapExceeded(RuntimeError):
    """Raised when an exhaustive computation would exceed the enumeration cap."""


def enumeration_cap() -> int:
    """Per-component vertex cap for exhaustive enumeration (env ``OCCUCERT_CAP`` overrides)."""
    raw = os.environ.get("OCCUCERT_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"OCCUCERT_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError("OCCUCERT_CAP must be positive")
    return cap


@dataclass(frozen=True)
class Tolerances:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    # required gap below 1 for floating strict inequalities (rho < 1, d*gamma/beta < 1)
    strict_margin: float = 1e-9

    def as_dict(self) -> dict:
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol, "strict_margin": self.strict_margin}


TOL = Tolerances()
