import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occucert import occupancy as occ
from occucert.demand import DemandError, check_demand, run_demand_process, verify_membership
from occucert.families import complete, connected_graphs, star
from occucert.graph import from_edge_list
from occucert.hardcore import uniform
from occucert.linalg import solve_exact

from test_graph import graphs

F = Fraction
K2 = complete(2)


def k2_params():
    return occ.general_params(uniform(2, 1))


def test_check_demand_examples():
    chk = check_demand(K2, k2_params(), [F(1, 3)] * 2)
    assert chk.slack == (0, 0) and chk.feasible
    chk = check_demand(K2, k2_params(), [0, 0])
    assert chk.slack == (1, 1) and chk.feasible
    chk = check_demand(K2, k2_params(), [F(1, 2)] * 2)
    assert chk.values == (F(3, 2), F(3, 2)) and not chk.feasible


def test_k2_hand_computation():
    fc = run_demand_process(K2, k2_params(), [F(1, 3)] * 2)
    third = F(1, 3)
    assert fc.distribution == {(): third, (0,): third, (1,): third}
    assert fc.breakpoints == [0, 1] and fc.hit_times == [1, 1]
    assert fc.marginals(2) == [third, third]
    v = verify_membership(K2, fc, [third] * 2, k2_params())
    assert v.ok and v.hit_time_degree_bound and v.hit_time_neighbourhood_bound


def test_single_vertex():
    g = from_edge_list(1, [])
    fc = run_demand_process(g, occ.general_params([1]), [F(1, 2)])
    assert fc.hit_times == [1]
    assert fc.distribution == {(): F(1, 2), (0,): F(1, 2)}


def test_cherry_multi_phase():
    g = star(2)
    p = occ.general_params(uniform(3, 1))
    q = [F(1, 4)] * 3
    fc = run_demand_process(g, p, q)
    assert len(fc.breakpoints) > 2
    assert fc.total_mass <= 1
    assert all(m >= F(1, 4) for m in fc.marginals(3))
    assert verify_membership(g, fc, q, p).ok


def test_infeasible_demand_rejected():
    with pytest.raises(DemandError):
        run_demand_process(K2, k2_params(), [F(1, 2)] * 2)
    with pytest.raises(DemandError):
        run_demand_process(K2, k2_params(), [F(-1, 9), F(1, 9)], require_feasible=False)


def test_tampering_is_detected():
    fc = run_demand_process(K2, k2_params(), [F(1, 3)] * 2)
    neg = replace(fc, distribution={**fc.distribution, (): F(2, 3), (0,): F(-1, 3), (1,): F(2, 3)})
    v = verify_membership(K2, neg, [F(1, 3)] * 2)
    assert not v.weights_nonnegative and not v.ok and any("negative" in w for w in v.witnesses)
    bad = replace(fc, distribution={(): F(1, 3), (0, 1): F(1, 3), (1,): F(1, 3)})
    v = verify_membership(K2, bad, [F(1, 3)] * 2)
    assert not v.support_independent and any("not independent" in w for w in v.witnesses)


def test_uniform_demands_meet_degree_bound():
    # with q constant the integrated bound reduces to (beta + d gamma) q
    for n in range(2, 6):
        for g in connected_graphs(n):
            p = occ.general_params(uniform(n, F(1, 2 * g.max_degree)))
            beta, gamma = p.exact()
            q = [1 / max(beta[u] + g.degrees[u] * gamma[u] for u in range(n))] * n
            fc = run_demand_process(g, p, q)
            v = verify_membership(g, fc, q, p)
            assert v.ok and v.hit_time_degree_bound


def test_certificate_demand_on_cherry_breaks_degree_bound():
    g = star(2)
    p = occ.general_params(uniform(3, F(1, 4)))
    q = solve_exact(occ.primal_matrix_exact(g, p), [1, 1, 1])
    assert q == [F(3, 23), F(4, 23), F(4, 23)]
    fc = run_demand_process(g, p, q)
    assert fc.hit_times == [F(87, 92), 1, 1]
    v = verify_membership(g, fc, q, p)
    assert v.ok and v.hit_time_neighbourhood_bound
    assert v.hit_time_degree_bound is False


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.integers(0, 10**6), st.fractions(min_value=F(1, 10), max_value=1, max_denominator=10))
def test_random_feasible_demands(g, seed, sigma):
    rng = random.Random(seed)
    lam = occ.random_fugacity_below(g.n, F(1, max(g.max_degree, 1)), rng)
    p = occ.general_params(lam)
    q = [sigma * x for x in solve_exact(occ.primal_matrix_exact(g, p), [1] * g.n)]
    fc = run_demand_process(g, p, q, strict=True)
    assert not fc.occupancy_failures
    assert fc.total_mass <= 1 and fc.certifying
    v = verify_membership(g, fc, q, p)
    assert v.ok, v.witnesses
