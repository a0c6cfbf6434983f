"""Exact event-driven weight process certifying that a demand vector lies in the independence polytope.

While a vertex is active (its accumulated weight is below its demand) every independent
set of the active induced subgraph gains weight at its hard-core probability there.
Between events all rates are constant, so the whole trajectory is piecewise linear with
rational breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from occucert.graph import Graph
from occucert.hardcore import induced_model, set_probabilities
from occucert.occupancy import OccupancyParams, verify_local_occupancy

SetKey = tuple[int, ...]


class DemandError(ValueError):
    pass


@dataclass(frozen=True)
class DemandCheck:
    values: tuple[Fraction, ...]  # beta_u q_u + gamma_u sum_{v in N(u)} q_v
    slack: tuple[Fraction, ...]  # 1 - values
    nonnegative: bool

    @property
    def feasible(self) -> bool:
        return self.nonnegative and all(s >= 0 for s in self.slack)


def demand_vector(q: Sequence) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in q)


def check_demand(g: Graph, p: OccupancyParams, q: Sequence) -> DemandCheck:
    """Exact per-vertex slack of (B + Gamma A) q <= 1."""
    q = demand_vector(q)
    if len(q) != g.n or p.n != g.n:
        raise DemandError("demand, parameters and graph must have equal length")
    beta, gamma = p.exact()
    vals = tuple(beta[u] * q[u] + gamma[u] * sum((q[v] for v in g.neighbors[u]), Fraction(0)) for u in range(g.n))
    return DemandCheck(vals, tuple(1 - v for v in vals), all(x >= 0 for x in q))


@dataclass
class FractionalColoring:
    weights: dict[SetKey, Fraction]  # accumulated w^I at the stopping time
    distribution: dict[SetKey, Fraction]  # weights padded on the empty set to total 1
    breakpoints: list[Fraction]
    hit_times: list[Fraction]
    total_mass: Fraction
    phase_masses: list[Fraction]  # mass added during each phase
    active_sets: list[tuple[int, ...]]
    certifying: bool  # every hit time <= 1
    occupancy_failures: list[tuple[tuple[int, ...], int]] = field(default_factory=list)

    def marginals(self, n: int) -> list[Fraction]:
        out = [Fraction(0)] * n
        for s, w in self.distribution.items():
            for v in s:
                out[v] += w
        return out

    def to_json(self, n: int) -> dict:
        return {
            "breakpoints": [str(t) for t in self.breakpoints],
            "hit_times": [str(t) for t in self.hit_times],
            "total_mass": str(self.total_mass),
            "distribution": [{"set": list(s), "mass": str(w)} for s, w in sorted(self.distribution.items())],
            "marginals": [str(x) for x in self.marginals(n)],
            "certifying": self.certifying,
        }


def run_demand_process(
    g: Graph, p: OccupancyParams, q: Sequence, strict: bool = False, require_feasible: bool = True
) -> FractionalColoring:
    """Simulate the weight process exactly until every demand is met.

    Vertices with zero demand start inactive.  All vertices that reach their demand at
    the same breakpoint leave together.  With ``strict`` the local occupancy inequality
    is checked on every active induced subgraph that is visited.
    """
    q = demand_vector(q)
    chk = check_demand(g, p, q)
    if require_feasible and not chk.feasible:
        bad = [u for u, s in enumerate(chk.slack) if s < 0]
        raise DemandError(f"demand violates (B + Gamma A) q <= 1 at vertices {bad}")
    if not chk.nonnegative:
        raise DemandError("demand entries must be nonnegative")
    lam = [Fraction(x) for x in p.lam]
    if any(v <= 0 for v in lam):
        raise DemandError("the process needs positive fugacities")
    t = Fraction(0)
    reached = [Fraction(0)] * g.n
    hit = [Fraction(0)] * g.n
    active = [v for v in range(g.n) if q[v] > 0]
    weights: dict[SetKey, Fraction] = {}
    breakpoints = [t]
    phase_masses, visited, failures = [], [], []
    while active:
        sub, sub_lam, vmap = induced_model(g, lam, active)
        probs = set_probabilities(sub, sub_lam)
        if strict:
            from occucert.occupancy import OccupancyParams as _P

            sub_p = _P(
                tuple(p.beta[v] for v in vmap), tuple(p.gamma[v] for v in vmap), tuple(sub_lam), p.flavor, p.b
            )
            failures += [(tuple(vmap), vmap[r.vertex]) for r in verify_local_occupancy(sub, sub_p) if not r.ok]
        rate = {v: Fraction(0) for v in vmap}
        for s, pr in probs:
            for i in s:
                rate[vmap[i]] += pr
        dt = min((q[v] - reached[v]) / rate[v] for v in active)
        mass = Fraction(0)
        for s, pr in probs:
            if pr:
                key = tuple(vmap[i] for i in s)
                weights[key] = weights.get(key, Fraction(0)) + dt * pr
                mass += dt * pr
        phase_masses.append(mass)
        visited.append(tuple(active))
        t += dt
        breakpoints.append(t)
        still = []
        for v in active:
            reached[v] += dt * rate[v]
            if reached[v] >= q[v]:
                hit[v] = t
            else:
                still.append(v)
        active = still
    total = sum(weights.values(), Fraction(0))
    dist = dict(weights)
    if total <= 1:
        dist[()] = dist.get((), Fraction(0)) + (1 - total)
    return FractionalColoring(
        weights=weights,
        distribution=dict(sorted(dist.items())),
        breakpoints=breakpoints,
        hit_times=hit,
        total_mass=total,
        phase_masses=phase_masses,
        active_sets=visited,
        certifying=all(x <= 1 for x in hit),
        occupancy_failures=failures,
    )


@dataclass(frozen=True)
class MembershipVerdict:
    support_independent: bool
    weights_nonnegative: bool
    sums_to_one: bool
    marginals_meet_demand: bool
    hit_times_at_most_one: bool
    # T_u <= beta_u q_u + gamma_u sum_{v in N(u)} q_v (integrated local occupancy)
    hit_time_neighbourhood_bound: bool | None
    # T_u <= (beta_u + d_u gamma_u) q_u (stated for uniform demands)
    hit_time_degree_bound: bool | None
    witnesses: tuple[str, ...]

    @property
    def ok(self) -> bool:
        core = (
            self.support_independent,
            self.weights_nonnegative,
            self.sums_to_one,
            self.marginals_meet_demand,
            self.hit_times_at_most_one,
        )
        return all(core) and self.hit_time_neighbourhood_bound is not False

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "support_independent": self.support_independent,
            "weights_nonnegative": self.weights_nonnegative,
            "sums_to_one": self.sums_to_one,
            "marginals_meet_demand": self.marginals_meet_demand,
            "hit_times_at_most_one": self.hit_times_at_most_one,
            "hit_time_neighbourhood_bound": self.hit_time_neighbourhood_bound,
            "hit_time_degree_bound": self.hit_time_degree_bound,
            "witnesses": list(self.witnesses),
        }


def verify_membership(
    g: Graph, fc: FractionalColoring, q: Sequence, p: OccupancyParams | None = None
) -> MembershipVerdict:
    """Exact audit of a produced distribution; hit-time bounds need the parameters."""
    q = demand_vector(q)
    wit = []
    indep = True
    for s in fc.distribution:
        mask = sum(1 << v for v in s)
        if any(not (0 <= v < g.n) for v in s) or any(g.masks[v] & mask for v in s):
            indep = False
            wit.append(f"set {list(s)} is not independent")
    nonneg = True
    for s, w in fc.distribution.items():
        if w < 0:
            nonneg = False
            wit.append(f"set {list(s)} has negative mass {w}")
    total = sum(fc.distribution.values(), Fraction(0))
    if total != 1:
        wit.append(f"masses sum to {total}")
    marg = fc.marginals(g.n)
    meets = True
    for v in range(g.n):
        if marg[v] < q[v]:
            meets = False
            wit.append(f"vertex {v} marginal {marg[v]} < demand {q[v]}")
    within = all(t <= 1 for t in fc.hit_times)
    if not within:
        wit.append("hit times above 1: " + ", ".join(f"{v}:{t}" for v, t in enumerate(fc.hit_times) if t > 1))
    nb_bound = deg_bound = None
    if p is not None:
        beta, gamma = p.exact()
        nb = [beta[u] * q[u] + gamma[u] * sum((q[v] for v in g.neighbors[u]), Fraction(0)) for u in range(g.n)]
        dg = [(beta[u] + g.degrees[u] * gamma[u]) * q[u] for u in range(g.n)]
        nb_bound = all(fc.hit_times[u] <= nb[u] for u in range(g.n))
        deg_bound = all(fc.hit_times[u] <= dg[u] for u in range(g.n))
        for u in range(g.n):
            if fc.hit_times[u] > nb[u]:
                wit.append(f"T_{u}={fc.hit_times[u]} exceeds beta q + gamma sum q = {nb[u]}")
            if fc.hit_times[u] > dg[u]:
                wit.append(f"T_{u}={fc.hit_times[u]} exceeds (beta + d gamma) q = {dg[u]}")
    return MembershipVerdict(indep, nonneg, total == 1, meets, within, nb_bound, deg_bound, tuple(wit))
