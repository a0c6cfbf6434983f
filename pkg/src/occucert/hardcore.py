"""Exact hard-core model quantities by enumerating independent sets in rational arithmetic.

This is the ground truth every bound is compared against.  A fugacity vector is a
tuple of :class:`fractions.Fraction`; floats passed in are converted exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from occucert.config import CapExceeded, enumeration_cap
from occucert.graph import Graph

Fugacity = tuple[Fraction, ...]


@dataclass(frozen=True)
class HardCoreSummary:
    partition_function: Fraction
    marginals: tuple[Fraction, ...]
    expected_size: Fraction


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fugacity(values: Iterable, n: int | None = None) -> Fugacity:
    lam = tuple(to_fraction(v) for v in values)
    if n is not None and len(lam) != n:
        raise ValueError(f"fugacity has length {len(lam)}, graph has {n} vertices")
    if any(v < 0 for v in lam):
        raise ValueError("fugacity entries must be nonnegative")
    return lam


def uniform(n: int, value) -> Fugacity:
    return fugacity([value] * n)


def fugacity_from_json(obj: dict | str, n: int) -> Fugacity:
    """Accepts ``{"uniform": "p/q"}`` or ``{"values": ["p/q", ...]}`` (dict or JSON text)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "uniform" in obj:
        return uniform(n, obj["uniform"])
    if "values" in obj:
        return fugacity(obj["values"], n)
    raise ValueError('fugacity JSON needs a "uniform" or "values" key')


def fugacity_to_json(lam: Sequence[Fraction]) -> dict:
    if lam and all(v == lam[0] for v in lam):
        return {"uniform": str(lam[0])}
    return {"values": [str(v) for v in lam]}


def _component_sets(g: Graph, comp: Sequence[int]) -> list[int]:
    """Independent sets inside one component as bitmasks over the original labels."""
    out = []
    masks = g.masks

    def grow(i: int, current: int, blocked: int) -> None:
        if i == len(comp):
            out.append(current)
            return
        v = comp[i]
        grow(i + 1, current, blocked)
        if not (blocked >> v) & 1:
            grow(i + 1, current | (1 << v), blocked | masks[v])

    grow(0, 0, 0)
    out.sort()
    return out


def _check_cap(size: int, cap: int | None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if size > cap:
        raise CapExceeded(f"component with {size} vertices exceeds enumeration cap {cap}")


def _members(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def enumerate_independent_sets(g: Graph, cap: int | None = None) -> list[tuple[int, ...]]:
    """All independent sets (including the empty set), ordered by indicator bitmask (vertex 0 lowest)."""
    _check_cap(g.n, cap)
    masks = [0]
    for comp in g.components():
        sets = _component_sets(g, comp)
        masks = [a | b for a in masks for b in sets]
    masks.sort()
    return [_members(m) for m in masks]


def _weight(mask: int, lam: Sequence[Fraction]) -> Fraction:
    w = Fraction(1)
    for v in _members(mask):
        w *= lam[v]
    return w


def _component_tables(g: Graph, lam: Sequence[Fraction], cap: int | None):
    """Per component: (Z_c, {v: sum of weights of sets containing v})."""
    if len(lam) != g.n:
        raise ValueError(f"fugacity has length {len(lam)}, graph has {g.n} vertices")
    tables = []
    for comp in g.components():
        _check_cap(len(comp), cap)
        z = Fraction(0)
        occ = {v: Fraction(0) for v in comp}
        for mask in _component_sets(g, comp):
            w = _weight(mask, lam)
            z += w
            for v in _members(mask):
                occ[v] += w
        tables.append((z, occ))
    return tables


def hardcore_summary(g: Graph, lam: Sequence, cap: int | None = None) -> HardCoreSummary:
    lam = fugacity(lam, g.n)
    z = Fraction(1)
    marg = [Fraction(0)] * g.n
    for zc, occ in _component_tables(g, lam, cap):
        z *= zc
        for v, w in occ.items():
            marg[v] = w / zc
    return HardCoreSummary(z, tuple(marg), sum(marg, Fraction(0)))


def partition_function(g: Graph, lam: Sequence, cap: int | None = None) -> Fraction:
    lam = fugacity(lam, g.n)
    z = Fraction(1)
    for zc, _ in _component_tables(g, lam, cap):
        z *= zc
    return z


def marginals(g: Graph, lam: Sequence, cap: int | None = None) -> tuple[Fraction, ...]:
    return hardcore_summary(g, lam, cap).marginals


def expected_size(g: Graph, lam: Sequence, cap: int | None = None) -> Fraction:
    return hardcore_summary(g, lam, cap).expected_size


def log_fraction(z: Fraction) -> float:
    """Natural log of a positive rational without overflow or cancellation near 1."""
    if z <= 0:
        raise ValueError("log of a nonpositive rational")
    if Fraction(1, 2) < z < 2:
        return math.log1p(float(z - 1))
    return math.log(z.numerator) - math.log(z.denominator)


def log_partition(g: Graph, lam: Sequence, cap: int | None = None) -> float:
    return log_fraction(partition_function(g, lam, cap))


def set_probabilities(g: Graph, lam: Sequence, cap: int | None = None) -> list[tuple[tuple[int, ...], Fraction]]:
    """Every independent set with its exact probability, in enumeration order."""
    lam = fugacity(lam, g.n)
    sets = enumerate_independent_sets(g, cap)
    weights = [_weight(sum(1 << v for v in s), lam) for s in sets]
    z = sum(weights, Fraction(0))
    return [(s, w / z) for s, w in zip(sets, weights)]


def induced_model(g: Graph, lam: Sequence, active: Iterable[int]) -> tuple[Graph, Fugacity, list[int]]:
    """Hard-core model restricted to ``active``: induced graph, restricted fugacity, new->old map."""
    lam = fugacity(lam, g.n)
    sub, vmap = g.induced(active)
    return sub, tuple(lam[v] for v in vmap), vmap
