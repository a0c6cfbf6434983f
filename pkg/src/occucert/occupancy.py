"""Local occupancy parameters, the occupancy LP and its dual certificate, and the bound formulas.

Two arithmetic regimes live here.  The general parameters (beta_u = 1 + 1/lambda_u,
gamma = 1) stay exact rationals end to end.  The bounded-local-mad parameters involve
Lambert W and are IEEE doubles; wherever they enter an exact computation they are
converted to rationals exactly, so the certificate is exact for the float-specified data.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from occucert import linalg
from occucert.config import TOL, Tolerances
from occucert.graph import Graph, GraphError, disparity_energy, laplacian, neighborhood_mad_profile
from occucert.hardcore import Fugacity, fugacity, hardcore_summary, to_fraction
from occucert.special import big_c, c_of_b, lambert_w

LP_MAX_VERTICES = 12
MAX_SERIES_TERMS = 100_000
SERIES_TAIL_TARGET = 1e-12


class ParameterError(ValueError):
    """Fugacity or b outside the admissible range for a parameter family."""


class CertificateError(ValueError):
    """The dual certificate cannot be built (conditions fail or the system is singular)."""


@dataclass(frozen=True)
class OccupancyParams:
    beta: tuple
    gamma: tuple
    lam: tuple
    flavor: str  # "general" or "mad(b)"
    b: float | None = None

    def __post_init__(self):
        if not (len(self.beta) == len(self.gamma) == len(self.lam)):
            raise ValueError("beta, gamma and lambda must have equal length")

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in (*self.beta, *self.gamma))

    def exact(self) -> tuple[list[Fraction], list[Fraction]]:
        return [Fraction(x) for x in self.beta], [Fraction(x) for x in self.gamma]

    def floats(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([float(x) for x in self.beta]), np.array([float(x) for x in self.gamma])


def general_params(lam: Sequence) -> OccupancyParams:
    """beta_u = 1 + 1/lambda_u, gamma = 1; exact."""
    lam = fugacity(lam)
    if any(v == 0 for v in lam):
        raise ParameterError("general parameters need every fugacity entry positive")
    return OccupancyParams(
        tuple(1 + 1 / v for v in lam), tuple(Fraction(1) for _ in lam), lam, "general"
    )


def _check_b(b: float) -> float:
    b = float(b)
    if not (b == 0 or b >= 1):
        raise ParameterError(f"b must be 0 or at least 1, got {b}")
    return b


def lambda_max(b: float, max_degree: int) -> float:
    """Exclusive upper end c(b)/Delta of the admissible fugacity range."""
    return c_of_b(_check_b(b)) / max(max_degree, 1)


def mad_params(g: Graph, lam: float, b: float, check_range: bool = True) -> OccupancyParams:
    """Lambert-W parameters for graphs whose neighbourhoods have mad at most b."""
    b = _check_b(b)
    lam = float(lam)
    iso = g.isolated_vertices()
    if iso:
        raise GraphError(f"bounded-mad parameters need no isolated vertices; isolated: {iso}")
    if check_range and not 0 < lam < lambda_max(b, g.max_degree):
        raise ParameterError(f"lambda={lam} outside (0, c(b)/Delta) = (0, {lambda_max(b, g.max_degree)})")
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    pref = (1 + lam) / lam
    grow = (1 + lam) ** b * math.log1p(lam)
    beta, gamma = [], []
    for d in g.degrees:
        big_d = d * grow
        w = lambert_w(big_d)
        beta.append(pref * big_d / (w * (1 + w)))
        gamma.append(pref * big_d / (d * (1 + w)))
    return OccupancyParams(tuple(beta), tuple(gamma), tuple([lam] * g.n), f"mad({b:g})", b)


@dataclass(frozen=True)
class OccupancyRow:
    vertex: int
    value: Fraction
    ok: bool


def verify_local_occupancy(g: Graph, p: OccupancyParams, tol: float = 1e-12) -> list[OccupancyRow]:
    """beta_u Pr(u in X) + gamma_u sum_{v in N(u)} Pr(v in X) for every u, from exact marginals."""
    marg = hardcore_summary(g, [to_fraction(x) for x in p.lam]).marginals
    beta, gamma = p.exact()
    rows = []
    for u in range(g.n):
        val = beta[u] * marg[u] + gamma[u] * sum((marg[v] for v in g.neighbors[u]), Fraction(0))
        rows.append(OccupancyRow(u, val, val >= 1 - Fraction(tol)))
    return rows


@dataclass(frozen=True)
class DualConditions:
    positive: bool
    degree_ratio_ok: bool  # d_u gamma_u / beta_u < 1 (with margin)
    neighbor_sum_ok: bool  # sum_{v in N(u)} gamma_v / beta_v <= 1
    degree_ratios: tuple[Fraction, ...]
    neighbor_sums: tuple[Fraction, ...]
    margin: float

    @property
    def all_ok(self) -> bool:
        return self.positive and self.degree_ratio_ok and self.neighbor_sum_ok

    @property
    def worst_degree_ratio(self) -> Fraction:
        return max(self.degree_ratios, default=Fraction(0))

    @property
    def worst_neighbor_sum(self) -> Fraction:
        return max(self.neighbor_sums, default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "positive": self.positive,
            "degree_ratio_ok": self.degree_ratio_ok,
            "neighbor_sum_ok": self.neighbor_sum_ok,
            "worst_degree_ratio": float(self.worst_degree_ratio),
            "worst_neighbor_sum": float(self.worst_neighbor_sum),
            "margin": self.margin,
        }


def check_dual_conditions(g: Graph, p: OccupancyParams, tol: Tolerances = TOL) -> DualConditions:
    beta, gamma = p.exact()
    lam = [to_fraction(x) for x in p.lam]
    positive = all(x > 0 for x in (*beta, *gamma, *lam))
    if not positive:
        return DualConditions(False, False, False, (), (), tol.strict_margin)
    ratio = [gamma[u] / beta[u] for u in range(g.n)]
    deg = tuple(g.degrees[u] * ratio[u] for u in range(g.n))
    nsum = tuple(sum((ratio[v] for v in g.neighbors[u]), Fraction(0)) for u in range(g.n))
    limit = 1 - Fraction(tol.strict_margin)
    return DualConditions(
        True,
        all(x <= limit for x in deg),
        all(x <= 1 for x in nsum),
        deg,
        nsum,
        tol.strict_margin,
    )


def dual_matrix_exact(g: Graph, p: OccupancyParams) -> list[list[Fraction]]:
    """B + A Gamma (the dual constraint matrix)."""
    beta, gamma = p.exact()
    m = [[Fraction(0)] * g.n for _ in range(g.n)]
    for u in range(g.n):
        m[u][u] = beta[u]
        for v in g.neighbors[u]:
            m[u][v] = gamma[v]
    return m


def primal_matrix_exact(g: Graph, p: OccupancyParams) -> list[list[Fraction]]:
    """B + Gamma A (the LP constraint matrix)."""
    beta, gamma = p.exact()
    m = [[Fraction(0)] * g.n for _ in range(g.n)]
    for u in range(g.n):
        m[u][u] = beta[u]
        for v in g.neighbors[u]:
            m[u][v] = gamma[u]
    return m


def rho_bagamma(g: Graph, p: OccupancyParams) -> float:
    """rho(B^{-1} A Gamma) through the similarity with B^{-1/2} Gamma^{1/2} A B^{-1/2} Gamma^{1/2}."""
    beta, gamma = p.floats()
    t = g.adjacency() * gamma[None, :] / beta[:, None]
    return linalg.spectral_radius_similar(t, beta * gamma)


def rho_lgh(g: Graph, p: OccupancyParams) -> float:
    """rho(L Gamma H^{-1}) through M = K^{1/2} L K^{1/2}, K = Gamma H^{-1}."""
    beta, gamma = p.floats()
    deg = np.asarray(g.degrees, dtype=float)
    k = gamma / (beta + deg * gamma)
    return linalg.spectral_radius_similar(laplacian(g) * k[None, :], k)


@dataclass(frozen=True)
class DualCertificate:
    y_prime: tuple[Fraction, ...]
    objective: Fraction
    baseline: Fraction
    residual_max: float
    conditions: DualConditions
    rho_bagamma: float
    rho_lgh: float
    feasible_exact: bool  # (B + A Gamma) y' == 1 as a rational identity
    nonnegative: bool

    @property
    def beats_baseline(self) -> bool:
        return self.objective >= self.baseline

    def to_json(self) -> dict:
        from occucert.report import fmt_real

        return {
            "y_prime": [str(x) for x in self.y_prime],
            "objective": str(self.objective),
            "baseline": str(self.baseline),
            "objective_minus_baseline": fmt_real(float(self.objective - self.baseline)),
            "residual_max": fmt_real(self.residual_max),
            "rho_bagamma": fmt_real(self.rho_bagamma),
            "rho_lgh": fmt_real(self.rho_lgh),
            "feasible_exact": self.feasible_exact,
            "nonnegative": self.nonnegative,
            "conditions": self.conditions.to_json(),
        }


def baseline(g: Graph, p: OccupancyParams) -> Fraction:
    """sum_u 1 / (beta_u + d_u gamma_u) = 1^T H^{-1} 1, exact."""
    beta, gamma = p.exact()
    return sum((1 / (beta[u] + g.degrees[u] * gamma[u]) for u in range(g.n)), Fraction(0))


def dual_certificate(g: Graph, p: OccupancyParams, tol: Tolerances = TOL) -> DualCertificate:
    """y' = (B + A Gamma)^{-1} 1 with its exact feasibility checks and spectral diagnostics."""
    cond = check_dual_conditions(g, p, tol)
    if not cond.all_ok:
        raise CertificateError(
            "dual conditions fail: "
            f"positive={cond.positive}, max d*gamma/beta={float(cond.worst_degree_ratio):.6g}, "
            f"max neighbour sum={float(cond.worst_neighbor_sum):.6g}"
        )
    m = dual_matrix_exact(g, p)
    try:
        y = linalg.solve_exact(m, [Fraction(1)] * g.n) if g.n else []
    except linalg.SingularMatrixError as exc:
        raise CertificateError(f"B + A Gamma is singular (rank {exc.rank})") from exc
    back = linalg.matvec_exact(m, y) if g.n else []
    feasible = all(x == 1 for x in back)
    mf = np.array([[float(x) for x in row] for row in m]) if g.n else np.zeros((0, 0))
    yf = np.array([float(x) for x in y])
    residual = float(np.max(np.abs(mf @ yf - 1))) if g.n else 0.0
    return DualCertificate(
        y_prime=tuple(y),
        objective=sum(y, Fraction(0)),
        baseline=baseline(g, p),
        residual_max=residual,
        conditions=cond,
        rho_bagamma=rho_bagamma(g, p) if g.n else 0.0,
        rho_lgh=rho_lgh(g, p) if g.n else 0.0,
        feasible_exact=feasible,
        nonnegative=all(x >= 0 for x in y),
    )


@dataclass(frozen=True)
class SeriesDiagnostics:
    s_terms: tuple[float, ...]  # S_1..S_K
    s_terms_matpow: tuple[float, ...]  # same terms through explicit matrix powers
    num_terms: int
    tail_bound: float  # bound on |sum_{k > K} S_k|
    m_norm: float  # ||T^{1/2} L T^{1/2}||
    h_vec: tuple[float, ...]
    tau_vec: tuple[float, ...]
    h_l_h: float
    tau_l_tau: float
    disparity: int
    series_sum: float
    certificate_gap: float  # 1^T y' - 1^T H^{-1} 1 from a float solve
    s1_edge_form: float  # sum over edges of (h_u - h_v)(tau_u - tau_v)
    s1_lower_est: float | None = None
    tail_upper_est: float | None = None
    big_c: float | None = None
    c: float | None = None

    @property
    def tail_sum(self) -> float:
        """sum_{k=2..K} S_k."""
        return float(sum(self.s_terms[1:]))

    def cauchy_schwarz_bound(self, k: int) -> float:
        return self.m_norm ** (k - 1) * math.sqrt(max(self.h_l_h, 0.0) * max(self.tau_l_tau, 0.0))

    def to_json(self) -> dict:
        from occucert.report import fmt_real

        return {
            "S": [fmt_real(x) for x in self.s_terms],
            "num_terms": self.num_terms,
            "tail_bound": fmt_real(self.tail_bound),
            "m_norm": fmt_real(self.m_norm),
            "series_sum": fmt_real(self.series_sum),
            "certificate_gap": fmt_real(self.certificate_gap),
            "disparity": self.disparity,
            "s1_lower_est": None if self.s1_lower_est is None else fmt_real(self.s1_lower_est),
            "tail_upper_est": None if self.tail_upper_est is None else fmt_real(self.tail_upper_est),
            "C": None if self.big_c is None else fmt_real(self.big_c),
        }


def series_terms(g: Graph, p: OccupancyParams, k: int | None = None) -> SeriesDiagnostics:
    """S_k = 1^T H^{-1} (L Gamma H^{-1})^k 1 for k = 1..K.

    With ``k=None`` the number of terms is chosen so that the geometric tail
    ||M||^{K+1} / (1 - ||M||) * ||T^{-1/2} h|| ||T^{1/2} 1|| drops below 1e-12.
    """
    beta, gamma = p.floats()
    deg = np.asarray(g.degrees, dtype=float)
    hdiag = beta + deg * gamma
    h = 1.0 / hdiag
    tau = gamma / hdiag
    lap = laplacian(g)
    lt = lap * tau[None, :]
    sq = np.sqrt(tau)
    m = sq[:, None] * lap * sq[None, :]
    m_norm = linalg.spectral_radius_symmetric(m) if g.n else 0.0
    if m_norm >= 1 - TOL.strict_margin:
        raise linalg.SpectralRadiusError(f"rho(L Gamma H^-1) = {m_norm:.12g} is not below 1")
    unorm = float(np.linalg.norm(h / sq)) if g.n else 0.0
    vnorm = float(np.linalg.norm(sq)) if g.n else 0.0

    def tail_after(kk: int) -> float:
        return m_norm ** (kk + 1) / (1 - m_norm) * unorm * vnorm

    if k is None:
        k = 1
        while tail_after(k) >= SERIES_TAIL_TARGET and k < MAX_SERIES_TERMS:
            k += 1
    terms, terms_pow = [], []
    vec = np.ones(g.n)
    for j in range(1, k + 1):
        vec = lt @ vec
        terms.append(float(h @ vec))
    for j in range(1, min(k, 64) + 1):
        terms_pow.append(float(h @ np.linalg.matrix_power(lt, j) @ np.ones(g.n)))
    if g.n:
        y = np.linalg.solve(np.diag(beta) + g.adjacency() * gamma[None, :], np.ones(g.n))
        gap = float(y.sum() - h.sum())
    else:
        gap = 0.0
    edge_form = float(sum((h[u] - h[v]) * (tau[u] - tau[v]) for u, v in g.edges))
    energy = disparity_energy(g)
    extra = {}
    if p.b is not None:
        lam = float(p.lam[0])
        c = c_of_b(p.b)
        cc = big_c(p.b)
        extra = dict(
            c=c,
            big_c=cc,
            s1_lower_est=2 * lam**4 * math.exp(-4 * cc) / (1 + cc) ** 8 * energy,
            tail_upper_est=2 * lam**4 * (1 + c) ** max(3 * p.b - 1, 0) * (2 * cc / (1 - 2 * cc)) * energy,
        )
    return SeriesDiagnostics(
        s_terms=tuple(terms),
        s_terms_matpow=tuple(terms_pow),
        num_terms=k,
        tail_bound=tail_after(k),
        m_norm=m_norm,
        h_vec=tuple(h.tolist()),
        tau_vec=tuple(tau.tolist()),
        h_l_h=float(h @ lap @ h),
        tau_l_tau=float(tau @ lap @ tau),
        disparity=energy,
        series_sum=float(sum(terms)),
        certificate_gap=gap,
        s1_edge_form=edge_form,
        **extra,
    )


@dataclass(frozen=True)
class HTauProfile:
    lam: float
    b: float
    max_degree: int
    s: float
    big_c: float
    xs: tuple[float, ...]
    h: tuple[float, ...]
    tau: tuple[float, ...]
    dh: tuple[float, ...]
    dtau: tuple[float, ...]
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(all(v) for v in self.checks.values())

    def h_at(self, x: float) -> float:
        w = lambert_w(self.s * x)
        return self.lam / ((1 + self.lam) * self.s) * w / x

    def tau_at(self, x: float) -> float:
        w = lambert_w(self.s * x)
        return w / (x * (1 + w))


def h_tau_profiles(lam: float, b: float, max_degree: int, points_between: int = 0) -> HTauProfile:
    """h, tau and their derivatives on [1, Delta], with the four derivative bounds checked.

    The grid is the integers 1..Delta plus ``points_between`` evenly spaced points in
    each unit gap.
    """
    b = _check_b(b)
    lam = float(lam)
    if not 0 < lam < lambda_max(b, max_degree):
        raise ParameterError(f"lambda={lam} outside (0, c(b)/Delta)")
    s = (1 + lam) ** b * math.log1p(lam)
    cc = big_c(b)
    xs = []
    for x in range(1, max(max_degree, 1) + 1):
        xs.append(float(x))
        if x < max_degree:
            xs += [x + (j + 1) / (points_between + 1) for j in range(points_between)]
    pref = lam / ((1 + lam) * s)
    h, tau, dh, dtau = [], [], [], []
    for x in xs:
        w = lambert_w(s * x)
        h.append(pref * w / x)
        tau.append(w / (x * (1 + w)))
        dh.append(-pref * w * w / (x * x * (1 + w)))
        dtau.append(-w * w * (2 + w) / (x * x * (1 + w) ** 3))
    bounds = {
        "neg_dh_lower": lam**2 * math.exp(-2 * cc) / (1 + cc) ** 3,
        "neg_dh_upper": lam**2 * (1 + lam) ** (b - 1),
        "neg_dtau_lower": 2 * lam**2 * math.exp(-2 * cc) / (1 + cc) ** 5,
        "neg_dtau_upper": 2 * lam**2 * (1 + lam) ** (2 * b),
    }
    checks = {
        "dh_bounds": [bounds["neg_dh_lower"] < -d < bounds["neg_dh_upper"] for d in dh],
        "dtau_bounds": [bounds["neg_dtau_lower"] < -d < bounds["neg_dtau_upper"] for d in dtau],
        "h_decreasing": [h[i + 1] < h[i] for i in range(len(h) - 1)],
        "tau_decreasing": [tau[i + 1] < tau[i] for i in range(len(tau) - 1)],
    }
    return HTauProfile(lam, b, max_degree, s, cc, tuple(xs), tuple(h), tuple(tau), tuple(dh), tuple(dtau), bounds, checks)


def thm1_bound(g: Graph, lam: Sequence) -> Fraction:
    """sum_u lambda_u / (1 + (d_u + 1) lambda_u), exact."""
    lam = fugacity(lam, g.n)
    return sum((v / (1 + (d + 1) * v) for v, d in zip(lam, g.degrees)), Fraction(0))


def thm1_admissible(g: Graph, lam: Sequence) -> bool:
    """Every lambda_u below 1/Delta (vacuous when Delta = 0)."""
    lam = fugacity(lam, g.n)
    delta = g.max_degree
    return delta == 0 or all(v * delta < 1 for v in lam)


def check_local_mad(g: Graph, b: float) -> list[Fraction]:
    prof = neighborhood_mad_profile(g)
    bad = [u for u, x in enumerate(prof) if x > b]
    if bad:
        raise ParameterError(f"neighbourhood mad exceeds b={b} at vertices {bad}")
    return prof


def thm2_bound(g: Graph, lam: float, b: float, check_mad: bool = True) -> float:
    """sum_u 1 / (beta_u + d_u gamma_u) with the Lambert-W parameters."""
    if check_mad:
        check_local_mad(g, b)
    p = mad_params(g, lam, b)
    beta, gamma = p.floats()
    return float(np.sum(1.0 / (beta + np.asarray(g.degrees, dtype=float) * gamma)))


def logz_bound_thm1(g: Graph, lam: Sequence) -> float:
    """sum_u log(1 + (d_u + 1) lambda_u) / (d_u + 1): the first bound integrated along t*lambda."""
    lam = fugacity(lam, g.n)
    return math.fsum(math.log1p((d + 1) * float(v)) / (d + 1) for v, d in zip(lam, g.degrees))


def trianglefree_logz_term(d: int, lam: float) -> float:
    """Per-vertex term [W(d log(1+lam))^2 + 2 W(d log(1+lam))] / (2d); d = 0 gives its limit log(1+lam)."""
    if d == 0:
        return math.log1p(lam)
    w = lambert_w(d * math.log1p(lam))
    return (w * w + 2 * w) / (2 * d)


def logz_bound_trianglefree(g: Graph, lam: float) -> float:
    if not g.is_triangle_free():
        raise ParameterError("graph is not triangle-free")
    iso = g.isolated_vertices()
    if iso:
        raise GraphError(f"triangle-free log Z bound needs no isolated vertices; isolated: {iso}")
    lam = float(lam)
    if not 0 < lam < lambda_max(0, g.max_degree):
        raise ParameterError(f"lambda={lam} outside (0, c(0)/Delta)")
    return math.fsum(trianglefree_logz_term(d, lam) for d in g.degrees)


@dataclass(frozen=True)
class LPResult:
    optimum: Fraction
    witness: tuple[Fraction, ...]
    dual: tuple[Fraction, ...] | None  # optimal dual y >= 0 with (B + A Gamma) y <= 1
    method: str
    bases_examined: int


def _lp_rows(g: Graph, p: OccupancyParams):
    m = primal_matrix_exact(g, p)
    n = g.n
    rows = m + [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rhs = [Fraction(1)] * n + [Fraction(0)] * n
    return rows, rhs


def _feasible(rows, rhs, x) -> bool:
    return all(sum((a * b for a, b in zip(r, x)), Fraction(0)) >= c for r, c in zip(rows, rhs))


def _lp_exact(rows, rhs, n) -> LPResult:
    best = None
    count = 0
    for basis in combinations(range(2 * n), n):
        count += 1
        try:
            x = linalg.solve_exact([rows[i] for i in basis], [rhs[i] for i in basis])
        except linalg.SingularMatrixError:
            continue
        if not _feasible(rows, rhs, x):
            continue
        obj = sum(x, Fraction(0))
        if best is None or obj < best[0]:
            best = (obj, tuple(x))
    return LPResult(best[0], best[1], None, "exact-enumeration", count)


def _certify_basis(rows, rhs, basis, n):
    """Exact vertex and dual multipliers for a basis; None unless both are feasible and equal."""
    sub = [rows[i] for i in basis]
    try:
        x = linalg.solve_exact(sub, [rhs[i] for i in basis])
    except linalg.SingularMatrixError:
        return None
    if not _feasible(rows, rhs, x):
        return None
    transpose = [list(col) for col in zip(*sub)]
    z = linalg.solve_exact(transpose, [Fraction(1)] * n)
    if any(v < 0 for v in z):
        return None
    obj = sum(x, Fraction(0))
    if sum((z[k] * rhs[i] for k, i in enumerate(basis)), Fraction(0)) != obj:
        return None
    y = [Fraction(0)] * n
    for k, i in enumerate(basis):
        if i < n:
            y[i] = z[k]
    return obj, tuple(x), tuple(y)


def lp_optimum_bruteforce(g: Graph, p: OccupancyParams, method: str = "fast") -> LPResult:
    """Exact optimum of min 1^T x s.t. (B + Gamma A) x >= 1, x >= 0 by enumerating bases.

    ``method="fast"`` screens all C(2n, n) bases in floating point, then re-solves the
    best candidates exactly and certifies optimality with an exact dual vector from the
    same basis (falling back to exact enumeration if no candidate certifies).
    ``method="exact"`` solves every basis in rational arithmetic.
    """
    n = g.n
    if n == 0:
        return LPResult(Fraction(0), (), (), "trivial", 0)
    if n > LP_MAX_VERTICES:
        raise ValueError(f"basis enumeration limited to {LP_MAX_VERTICES} vertices, got {n}")
    rows, rhs = _lp_rows(g, p)
    if method == "exact":
        return _lp_exact(rows, rhs, n)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    gf = np.array([[float(x) for x in r] for r in rows])
    rf = np.array([float(x) for x in rhs])
    all_bases = np.array(list(combinations(range(2 * n), n)), dtype=np.int64)
    candidates = []
    chunk = 100_000
    for start in range(0, len(all_bases), chunk):
        idx = all_bases[start : start + chunk]
        mats = gf[idx]
        sign, logdet = np.linalg.slogdet(mats)
        scale = np.sum(np.log(np.linalg.norm(mats, axis=2)), axis=1)
        ok = (sign != 0) & (logdet - scale > math.log(1e-12))
        if not np.any(ok):
            continue
        xs = np.linalg.solve(mats[ok], rf[idx[ok]][..., None])[..., 0]
        slack = xs @ gf.T - rf
        feas = np.all(slack >= -1e-9, axis=1)
        objs = xs.sum(axis=1)
        for j in np.nonzero(feas)[0]:
            candidates.append((float(objs[j]), start + int(np.nonzero(ok)[0][j])))
    if candidates:
        candidates.sort()
        top = candidates[0][0]
        for obj, bi in candidates:
            if obj > top + 1e-9 * (1 + abs(top)):
                break
            cert = _certify_basis(rows, rhs, tuple(int(i) for i in all_bases[bi]), n)
            if cert is not None:
                return LPResult(cert[0], cert[1], cert[2], "float-screen+exact-dual", len(all_bases))
    return _lp_exact(rows, rhs, n)


def random_fugacity_below(n: int, bound: Fraction, rng: random.Random, denominator: int = 97) -> Fugacity:
    """Per-vertex rationals bound * k / denominator with 1 <= k < denominator (strictly inside (0, bound))."""
    bound = Fraction(bound)
    return tuple(bound * Fraction(rng.randint(1, denominator - 1), denominator) for _ in range(n))


@dataclass(frozen=True)
class ScanConfig:
    sizes: tuple[int, ...] = (3, 4, 5, 6)
    edge_probs: tuple[float, ...] = (0.3, 0.5, 0.7)
    samples_per_cell: int = 5
    lam_mode: str = "uniform"  # or "multivariate"
    lam_max: Fraction = Fraction(2)
    relative_to_delta: bool = False  # lam_max is multiplied by 1/Delta when set
    seed: int = 0
    graphs: tuple = ()  # explicit (key, Graph) pairs scanned in addition to random ones


@dataclass(frozen=True)
class ScanRecord:
    key: str
    gap: Fraction
    expected_size: Fraction
    bound: Fraction
    lam: tuple


@dataclass(frozen=True)
class ScanReport:
    instances: int
    violations: tuple[ScanRecord, ...]
    worst: ScanRecord | None

    def to_json(self) -> dict:
        from occucert.hardcore import fugacity_to_json

        def rec(r: ScanRecord | None):
            if r is None:
                return None
            return {
                "key": r.key,
                "gap": str(r.gap),
                "expected_size": str(r.expected_size),
                "bound": str(r.bound),
                "lambda": fugacity_to_json(r.lam),
            }

        return {
            "instances": self.instances,
            "violations": [rec(r) for r in self.violations],
            "worst_gap": None if self.worst is None else str(self.worst.gap),
            "worst": rec(self.worst),
        }


def _scan_lambda(g: Graph, cfg: ScanConfig, rng: random.Random) -> Fugacity:
    top = Fraction(cfg.lam_max)
    if cfg.relative_to_delta:
        top /= max(g.max_degree, 1)
    if cfg.lam_mode == "uniform":
        return tuple([random_fugacity_below(1, top, rng)[0]] * g.n)
    if cfg.lam_mode == "multivariate":
        return random_fugacity_below(g.n, top, rng)
    raise ValueError(f"unknown lam_mode {cfg.lam_mode!r}")


def conjecture_scan(cfg: ScanConfig) -> ScanReport:
    """Exact gaps E|X| - sum_u lambda_u/(1+(d_u+1)lambda_u) on sampled instances; any negative gap is recorded."""
    from occucert.families import gnp

    rng = random.Random(cfg.seed)
    instances = list(cfg.graphs)
    for n in cfg.sizes:
        for pr in cfg.edge_probs:
            for i in range(cfg.samples_per_cell):
                instances.append((f"gnp:{n},{pr}:{i}", gnp(n, pr, rng)))
    records = []
    for key, g in instances:
        lam = _scan_lambda(g, cfg, rng)
        ex = hardcore_summary(g, lam).expected_size
        bd = thm1_bound(g, lam)
        records.append(ScanRecord(key, ex - bd, ex, bd, lam))
    worst = min(records, key=lambda r: r.gap) if records else None
    return ScanReport(len(records), tuple(r for r in records if r.gap < 0), worst)
