import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from occucert import occupancy as occ
from occucert.families import complete, connected_graphs, cycle, parse_family, path, star
from occucert.graph import GraphError, from_edge_list
from occucert.hardcore import expected_size, hardcore_summary, log_partition, uniform
from occucert.special import lambert_w

from test_graph import graphs

F = Fraction


def fug_below_delta(g, rng):
    return occ.random_fugacity_below(g.n, F(1, max(g.max_degree, 1)), rng)


def test_general_params():
    for lam, beta in ((1, 2), (F(7, 5), F(12, 7)), (F(1, 4), 5)):
        p = occ.general_params(uniform(3, lam))
        assert p.beta == (beta,) * 3 and p.gamma == (1, 1, 1) and p.is_exact
    with pytest.raises(occ.ParameterError):
        occ.general_params([1, 0])


def test_local_occupancy_examples():
    rows = occ.verify_local_occupancy(complete(2), occ.general_params(uniform(2, 1)))
    assert [r.value for r in rows] == [1, 1]
    rows = occ.verify_local_occupancy(complete(3), occ.general_params(uniform(3, 1)))
    assert [r.value for r in rows] == [1, 1, 1]
    rows = occ.verify_local_occupancy(star(2), occ.general_params(uniform(3, F(7, 5))))
    assert rows[0].value == F(228, 179) and all(r.ok for r in rows)


@pytest.mark.parametrize("n", range(2, 6))
def test_general_params_are_locally_occupied(n):
    rng = random.Random(n)
    for g in connected_graphs(n):
        lam = occ.random_fugacity_below(g.n, F(3), rng)
        rows = occ.verify_local_occupancy(g, occ.general_params(lam))
        assert all(r.ok for r in rows)
        # tight exactly when the neighbourhood is a clique
        for r in rows:
            nb = sorted(g.neighbors[r.vertex])
            clique = all(g.has_edge(a, b) for i, a in enumerate(nb) for b in nb[i + 1 :])
            assert (r.value == 1) == clique


def test_mad_params_formulas():
    g = from_edge_list(4, [(0, 1), (0, 2), (0, 3)])
    lam = 0.03
    p = occ.mad_params(g, lam, 0.0)
    beta, gamma = p.floats()
    big_d = 3 * math.log1p(lam)
    assert big_d == pytest.approx(0.08867641, abs=1e-8)
    w = lambert_w(big_d)
    assert beta[0] == pytest.approx((1 + lam) / lam * big_d / (w * (1 + w)), rel=1e-15)
    assert gamma[0] / beta[0] == pytest.approx(w / 3, rel=1e-14)
    reg = occ.mad_params(cycle(6), 0.01, 0.0)
    assert len(set(reg.beta)) == 1 and len(set(reg.gamma)) == 1


def test_mad_params_errors():
    with pytest.raises(GraphError):
        occ.mad_params(from_edge_list(3, [(0, 1)]), 0.01, 0)
    with pytest.raises(occ.ParameterError):
        occ.mad_params(cycle(5), 0.06, 0)
    with pytest.raises(occ.ParameterError):
        occ.mad_params(cycle(5), 0.01, 0.5)


def test_mad_params_are_locally_occupied_on_triangle_free():
    for key, g in parse_family("trianglefree:2-6"):
        lam = 0.9 * occ.lambda_max(0, g.max_degree)
        rows = occ.verify_local_occupancy(g, occ.mad_params(g, lam, 0))
        assert all(r.ok for r in rows), key


def test_dual_conditions():
    for g in connected_graphs(5):
        p = occ.general_params(uniform(g.n, F(9, 10 * g.max_degree)))
        assert occ.check_dual_conditions(g, p).all_ok
    p = occ.OccupancyParams((F(1), F(1)), (F(1), F(1)), (F(1), F(1)), "custom")
    cond = occ.check_dual_conditions(complete(2), p)
    assert cond.positive and not cond.degree_ratio_ok
    with pytest.raises(occ.CertificateError):
        occ.dual_certificate(complete(2), p)
    for key, g in parse_family("trianglefree:2-6"):
        p = occ.mad_params(g, 0.9 * occ.lambda_max(0, g.max_degree), 0)
        assert occ.check_dual_conditions(g, p).all_ok, key


def test_certificate_examples():
    for beta0 in (F(3), F(7, 2)):
        p = occ.OccupancyParams((beta0, beta0), (F(1), F(1)), (F(1, 9), F(1, 9)), "custom")
        cert = occ.dual_certificate(complete(2), p)
        assert cert.y_prime == (1 / (beta0 + 1),) * 2
        assert cert.objective == cert.baseline == 2 / (beta0 + 1)
    cert = occ.dual_certificate(star(2), occ.general_params(uniform(3, F(1, 4))))
    assert cert.y_prime == (F(3, 23), F(4, 23), F(4, 23))
    assert cert.objective == F(11, 23) and cert.baseline == F(10, 21)
    assert cert.feasible_exact and cert.nonnegative and cert.beats_baseline


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 10**6))
def test_spectral_radii_against_numpy(g, seed):
    lam = fug_below_delta(g, random.Random(seed))
    p = occ.general_params(lam)
    beta, gamma = p.floats()
    deg = np.array(g.degrees, dtype=float)
    t1 = g.adjacency() * gamma[None, :] / beta[:, None]
    h = beta + deg * gamma
    lap = np.diag(deg) - g.adjacency()
    t2 = lap * (gamma / h)[None, :]
    assert occ.rho_bagamma(g, p) == pytest.approx(max(abs(np.linalg.eigvals(t1))), abs=1e-10)
    assert occ.rho_lgh(g, p) == pytest.approx(max(abs(np.linalg.eigvals(t2))), abs=1e-10)
    assert occ.rho_bagamma(g, p) < 1 and occ.rho_lgh(g, p) < 1


def test_series_regular_graphs_vanish():
    for g in (cycle(5), complete(4)):
        d = occ.series_terms(g, occ.general_params(uniform(g.n, F(1, 2 * g.max_degree))), k=10)
        assert max(abs(s) for s in d.s_terms) < 1e-15


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 10**6))
def test_series_identities(g, seed):
    if g.m == 0:
        return
    p = occ.general_params(fug_below_delta(g, random.Random(seed)))
    d = occ.series_terms(g, p)
    assert min(d.s_terms) >= -1e-10
    assert d.s_terms[0] == pytest.approx(d.s1_edge_form, abs=1e-10)
    assert np.allclose(d.s_terms[: len(d.s_terms_matpow)], d.s_terms_matpow, atol=1e-12)
    cert = occ.dual_certificate(g, p)
    assert d.series_sum == pytest.approx(float(cert.objective - cert.baseline), abs=1e-10)
    assert abs(float(cert.objective - cert.baseline) - d.series_sum) <= d.tail_bound + 1e-12
    for k in range(1, min(len(d.s_terms), 15) + 1):
        assert abs(d.s_terms[k - 1]) <= d.cauchy_schwarz_bound(k) + 1e-12


def test_h_tau_profile_examples():
    for b, lam_frac in ((0, 0.9), (1, 0.5), (2, 0.9)):
        for delta in (1, 3, 7):
            lam = lam_frac * occ.lambda_max(b, delta)
            prof = occ.h_tau_profiles(lam, b, delta, points_between=3)
            assert prof.all_ok
            for x, dh, dt in zip(prof.xs, prof.dh, prof.dtau):
                step = 1e-5
                fd_h = (prof.h_at(x + step) - prof.h_at(x - step)) / (2 * step)
                fd_t = (prof.tau_at(x + step) - prof.tau_at(x - step)) / (2 * step)
                assert dh == pytest.approx(fd_h, rel=1e-6)
                assert dt == pytest.approx(fd_t, rel=1e-6)
    with pytest.raises(occ.ParameterError):
        occ.h_tau_profiles(0.2, 0, 3)


def test_first_bound_examples():
    assert occ.thm1_bound(star(2), uniform(3, F(7, 5))) == F(497, 494)
    for n in (3, 4, 5):
        lam = uniform(n, F(2, 7))
        assert occ.thm1_bound(complete(n), lam) == n * F(2, 7) / (1 + n * F(2, 7)) == expected_size(complete(n), lam)
    assert occ.thm1_bound(cycle(4), uniform(4, 0)) == 0
    assert occ.thm1_admissible(star(2), uniform(3, F(1, 3)))
    assert not occ.thm1_admissible(star(2), uniform(3, F(1, 2)))


def test_second_bound_examples():
    g = cycle(5)
    bound = occ.thm2_bound(g, 0.05, 0)
    assert bound <= float(expected_size(g, uniform(5, F(0.05))))
    s = math.log1p(0.05)
    closed = 5 * (0.05 / (1.05 * s)) * lambert_w(2 * s) / 2
    assert bound == pytest.approx(closed, rel=1e-14)
    ratios = [occ.thm2_bound(g, lam, 0) / (5 * lam) for lam in (1e-3, 1e-5, 1e-7)]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1) and ratios[-1] == pytest.approx(1, abs=1e-6)
    with pytest.raises(occ.ParameterError):
        occ.thm2_bound(complete(3), 0.01, 0)


def test_logz_bounds():
    single = from_edge_list(1, [])
    assert occ.logz_bound_thm1(single, [1]) == pytest.approx(math.log(2), abs=1e-15)
    for n in (2, 4, 6):
        lam = uniform(n, F(1, 3))
        assert occ.logz_bound_thm1(complete(n), lam) == pytest.approx(log_partition(complete(n), lam), abs=1e-14)
    g = cycle(5)
    assert occ.logz_bound_trianglefree(g, 0.05) <= log_partition(g, uniform(5, F(0.05)))
    small = [occ.logz_bound_trianglefree(g, lam) / (5 * lam) for lam in (1e-4, 1e-7)]
    assert small[-1] == pytest.approx(1, abs=1e-6)
    with pytest.raises(occ.ParameterError):
        occ.logz_bound_trianglefree(complete(3), 0.01)
    assert occ.trianglefree_logz_term(0, 0.3) == math.log1p(0.3)


@pytest.mark.parametrize("d", [1, 2, 5])
def test_trianglefree_term_derivative(d):
    # d/dlam of the per-vertex term is h(d)/lam
    lam, step = 0.01, 1e-7
    fd = (occ.trianglefree_logz_term(d, lam + step) - occ.trianglefree_logz_term(d, lam - step)) / (2 * step)
    s = math.log1p(lam)
    h = lam / ((1 + lam) * s) * lambert_w(d * s) / d
    assert fd == pytest.approx(h / lam, rel=1e-6)


def test_lp_examples():
    res = occ.lp_optimum_bruteforce(star(2), occ.general_params(uniform(3, F(7, 5))))
    assert res.optimum == 1 and res.witness == (1, 0, 0)
    res = occ.lp_optimum_bruteforce(complete(2), occ.general_params(uniform(2, 1)))
    assert res.optimum == F(2, 3) and res.witness == (F(1, 3), F(1, 3))
    with pytest.raises(ValueError):
        occ.lp_optimum_bruteforce(path(13), occ.general_params(uniform(13, F(1, 3))))


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6), st.integers(0, 10**6), st.sampled_from([F(1, 2), F(2), F(5)]))
def test_lp_fast_equals_exact_and_scipy(g, seed, top):
    lam = occ.random_fugacity_below(g.n, top, random.Random(seed))
    p = occ.general_params(lam)
    fast = occ.lp_optimum_bruteforce(g, p)
    exact = occ.lp_optimum_bruteforce(g, p, method="exact")
    assert fast.optimum == exact.optimum
    m = np.array([[float(x) for x in row] for row in occ.primal_matrix_exact(g, p)])
    ref = linprog(np.ones(g.n), A_ub=-m, b_ub=-np.ones(g.n), bounds=[(0, None)] * g.n, method="highs")
    assert float(fast.optimum) == pytest.approx(ref.fun, rel=1e-9)
    if all(v * max(g.max_degree, 1) < 1 for v in lam):
        assert fast.optimum >= occ.dual_certificate(g, p).objective


def test_scan_examples():
    cfg = occ.ScanConfig(sizes=(), graphs=tuple(parse_family("cliques:1-4")), lam_max=F(5))
    rep = occ.conjecture_scan(cfg)
    assert rep.worst.gap == 0 and not rep.violations
    cfg = occ.ScanConfig(sizes=(), graphs=(("cherry", star(2)),), lam_max=F(7, 5))
    rec = occ.conjecture_scan(cfg).worst
    assert rec.gap == rec.expected_size - rec.bound
    cherry = hardcore_summary(star(2), uniform(3, F(7, 5))).expected_size - F(497, 494)
    assert cherry > 0
    cfg = occ.ScanConfig(sizes=(3, 4, 5, 6), lam_max=F(1), relative_to_delta=True, lam_mode="multivariate")
    assert not occ.conjecture_scan(cfg).violations
