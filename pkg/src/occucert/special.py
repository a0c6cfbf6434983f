"""Principal-branch Lambert W on (0, inf) and the bracketed root solves for c(0) and eta."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

# Published (downward-truncated) constants for the bounded-local-mad bound.
C0_PUBLISHED = 0.109597
ETA_PUBLISHED = 0.0896883
C0_DIGITS = 6
ETA_DIGITS = 7


@dataclass(frozen=True)
class SolverConfig:
    abs_tol: float = 1e-13
    max_iterations: int = 200
    bracket: tuple[float, float] = (0.0, 0.5)

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        lo, hi = self.bracket
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError("bracket must be a finite increasing pair")


def _w_guess(x: float) -> float:
    if x < 0.25:
        return x * (1.0 - x * (1.0 - 1.5 * x))
    if x <= math.e:
        return math.log1p(x) * 0.8
    l1 = math.log(x)
    l2 = math.log(l1)
    return l1 - l2 + l2 / l1


def lambert_w(x: float) -> float:
    """W(x) for x > 0: the positive w with w e^w = x."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"lambert_w needs a finite positive argument, got {x!r}")
    w = _w_guess(x)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 4e-16 * (abs(w) + 1e-300):
            break
    if not (0.0 < w < x) or abs(w * math.exp(w) - x) > 1e-12 * x:
        w = _bisect_w(x)
    return w


def _bisect_w(x: float) -> float:
    lo, hi = 0.0, min(x, max(1.0, math.log(x) + 1.0))
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return 0.5 * (lo + hi)


def lambert_w_derivative(x: float) -> float:
    w = lambert_w(x)
    return w / (x * (1.0 + w))


def bracketed_root(f: Callable[[float], float], config: SolverConfig) -> float:
    """Root of f in the bracket: bisection down to a small interval, then guarded secant steps."""
    lo, hi = config.bracket
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"objective has the same sign at both bracket ends ({flo:.3g}, {fhi:.3g})")
    for _ in range(config.max_iterations):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo < 1e-6:
            break
    x0, x1, f0, f1 = lo, hi, flo, fhi
    for _ in range(config.max_iterations):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo <= x2 <= hi:
            x2 = 0.5 * (lo + hi)
        f2 = f(x2)
        if (f2 > 0) == (flo > 0):
            lo, flo = x2, f2
        else:
            hi, fhi = x2, f2
        x0, f0, x1, f1 = x1, f1, x2, f2
        if abs(x1 - x0) <= config.abs_tol or f2 == 0:
            return x2
    return x1


def series_lhs(big_c: float) -> float:
    """e^{-4C} / (1+C)^8."""
    return math.exp(-4.0 * big_c) / (1.0 + big_c) ** 8


def series_rhs(big_c: float) -> float:
    """2C / (1 - 2C)."""
    return 2.0 * big_c / (1.0 - 2.0 * big_c)


def c0_objective(big_c: float) -> float:
    return series_lhs(big_c) - series_rhs(big_c)


def eta_objective(eta: float) -> float:
    u = eta * math.exp(eta)
    return series_lhs(u) - math.exp(3.0 * eta) * series_rhs(u)


def solve_c0(config: SolverConfig | None = None) -> float:
    """Raw root of the b = 0 balance equation in (0, 1/2)."""
    config = config or SolverConfig(bracket=(0.0, 0.4))
    return bracketed_root(c0_objective, config)


def _eta_upper() -> float:
    # eta e^eta = 1/2 is where the right-hand side blows up
    return lambert_w(0.5)


def solve_eta(config: SolverConfig | None = None) -> float:
    """Raw root of the b >= 1 balance equation in eta, with eta e^eta < 1/2."""
    config = config or SolverConfig(bracket=(0.0, 0.9 * _eta_upper()))
    return bracketed_root(eta_objective, config)


def truncate_down(x: float, digits: int) -> float:
    scale = 10**digits
    return math.floor(x * scale) / scale


def c_of_b(b: float) -> float:
    """Operative constant: 0.109597 for b = 0 and 0.0896883 / b for b >= 1."""
    b = float(b)
    if b == 0:
        return truncate_down(solve_c0(), C0_DIGITS)
    if b >= 1:
        return truncate_down(solve_eta(), ETA_DIGITS) / b
    raise ValueError(f"b must be 0 or at least 1, got {b}")


def big_c(b: float) -> float:
    """C = c (1 + c)^b at the operative constant c = c(b)."""
    c = c_of_b(b)
    return c * (1.0 + c) ** b


def constants_report(bs=()) -> dict:
    c0, eta = solve_c0(), solve_eta()
    return {
        "c0_raw": c0,
        "c0": truncate_down(c0, C0_DIGITS),
        "c0_residual": c0_objective(c0),
        "eta_raw": eta,
        "eta": truncate_down(eta, ETA_DIGITS),
        "eta_residual": eta_objective(eta),
        "eta_u": eta * math.exp(eta),
        "c_of_b": {str(b): c_of_b(b) for b in bs},
        "note": "operative constants are the raw roots truncated downward (6 digits for c(0), 7 for eta)",
    }
