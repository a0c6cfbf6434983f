"""``occucert`` command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from occucert import campaign, demand
from occucert import occupancy as occ
from occucert.config import CapExceeded
from occucert.families import parse_family, star
from occucert.graph import Graph, GraphError, degree_profile_json, mad, neighborhood_mad_profile, read_edge_list
from occucert.hardcore import fugacity_to_json, hardcore_summary, log_fraction, set_probabilities, uniform
from occucert.linalg import SpectralRadiusError
from occucert.report import fmt_real
from occucert.special import constants_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _graphs(args) -> list[tuple[str, Graph]]:
    if args.graph and args.family:
        raise InputError("give either --graph or --family, not both")
    if args.graph:
        return [(Path(args.graph).name, read_edge_list(args.graph))]
    if args.family:
        return parse_family(args.family, seed=args.seed)
    raise InputError("a graph is required (--graph FILE or --family SPEC)")


def _one_graph(args) -> tuple[str, Graph]:
    gs = _graphs(args)
    if len(gs) != 1:
        raise InputError(f"this mode needs exactly one graph, the family gave {len(gs)}")
    return gs[0]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    key, g = _one_graph(args)
    lam = campaign.parse_lambda(args.lam or "1", g)
    hc = hardcore_summary(g, lam)
    bound = occ.thm1_bound(g, lam)
    rep = {
        "graph": g.to_json(),
        "lambda": fugacity_to_json(lam),
        "degree_profile": degree_profile_json(g),
        "mad": str(mad(g)) if g.n else None,
        "neighborhood_mad": [str(x) for x in neighborhood_mad_profile(g)] if g.n and not g.isolated_vertices() else None,
        "triangle_free": g.is_triangle_free(),
        "partition_function": str(hc.partition_function),
        "log_partition": fmt_real(log_fraction(hc.partition_function)),
        "marginals": [str(x) for x in hc.marginals],
        "expected_size": str(hc.expected_size),
        "thm1_bound": str(bound),
        "thm1_admissible": occ.thm1_admissible(g, lam),
        "gap": str(hc.expected_size - bound),
        "logz_bound_thm1": fmt_real(occ.logz_bound_thm1(g, lam)),
    }
    if args.verbose:
        rep["set_probabilities"] = [{"set": list(s), "probability": str(p)} for s, p in set_probabilities(g, lam)]
    _emit(args, campaign.stable_json(rep))
    return EXIT_OK


def cmd_certify(args) -> int:
    key, g = _one_graph(args)
    if args.b is None:
        lam = campaign.parse_lambda(args.lam or "delta:9/10", g)
        p = occ.general_params(lam)
        hc = hardcore_summary(g, lam)
        bound = occ.thm1_bound(g, lam)
        bound_s, ex_s, gap_s = str(bound), str(hc.expected_size), str(hc.expected_size - bound)
        holds = hc.expected_size >= bound
    else:
        lam_f = float(campaign.parse_lambda(args.lam or "crit:0.9", g, b=args.b)[0])
        lam = uniform(g.n, Fraction(lam_f))
        p = occ.mad_params(g, lam_f, args.b)
        hc = hardcore_summary(g, lam)
        bound = occ.thm2_bound(g, lam_f, args.b)
        ex = float(hc.expected_size)
        bound_s, ex_s, gap_s = fmt_real(bound), str(hc.expected_size), fmt_real(ex - bound)
        holds = ex >= bound - 1e-9
    rep = {
        "graph": g.to_json(),
        "lambda": fugacity_to_json(lam),
        "flavor": p.flavor,
        "bound": bound_s,
        "expected_size": ex_s,
        "gap": gap_s,
    }
    try:
        cert = occ.dual_certificate(g, p)
    except occ.CertificateError as exc:
        rep["certificate"] = {"error": str(exc)}
        _emit(args, campaign.stable_json(rep))
        return EXIT_FAIL
    rep["certificate"] = cert.to_json()
    try:
        rep["series"] = occ.series_terms(g, p, args.terms).to_json()
    except SpectralRadiusError as exc:
        rep["series"] = {"error": str(exc)}
    if g.n <= occ.LP_MAX_VERTICES:
        res = occ.lp_optimum_bruteforce(g, p)
        rep["lp"] = {"optimum": str(res.optimum), "witness": [str(x) for x in res.witness], "method": res.method}
    _emit(args, campaign.stable_json(rep))
    ok = holds and cert.feasible_exact and cert.nonnegative and cert.beats_baseline
    return EXIT_OK if ok else EXIT_FAIL


def counterexample_report() -> dict:
    g = star(2)
    lam = uniform(3, Fraction(7, 5))
    p = occ.general_params(lam)
    x = [Fraction(1), Fraction(0), Fraction(0)]
    m = occ.primal_matrix_exact(g, p)
    primal_feasible = all(sum((a * b for a, b in zip(row, x)), Fraction(0)) >= 1 for row in m)
    res = occ.lp_optimum_bruteforce(g, p)
    bound = occ.thm1_bound(g, lam)
    ex = hardcore_summary(g, lam).expected_size
    return {
        "graph": g.to_json(),
        "lambda": fugacity_to_json(lam),
        "beta": [str(v) for v in p.beta],
        "gamma": [str(v) for v in p.gamma],
        "x": [str(v) for v in x],
        "x_primal_feasible": primal_feasible,
        "optimum": str(res.optimum),
        "witness": [str(v) for v in res.witness],
        "bound": str(bound),
        "expected_size": str(ex),
        "lp_below_bound": res.optimum < bound,
        "conclusion": (
            f"LP optimum {res.optimum} < target {bound} <= E|X| = {ex}: "
            "the local occupancy LP alone cannot certify the bound here"
        ),
    }


def cmd_counterexample(args) -> int:
    rep = counterexample_report()
    _emit(args, campaign.stable_json(rep))
    ok = rep["x_primal_feasible"] and rep["optimum"] == "1" and rep["bound"] == "497/494"
    return EXIT_OK if ok else EXIT_FAIL


def cmd_constants(args) -> int:
    _emit(args, campaign.stable_json(constants_report(args.b or [])))
    return EXIT_OK


def _verify_exit(summary: dict) -> int:
    if summary["failures"]:
        return EXIT_FAIL
    if summary["errors"]:
        return EXIT_CAP
    return EXIT_OK


def cmd_verify_thm1(args) -> int:
    graphs = _graphs(args) if (args.graph or args.family) else parse_family("connected:6")
    summary, records = campaign.run_thm1(graphs, args.lam or "delta:9/10", args.seed, lp=args.lp)
    if args.details:
        summary["records"] = records
    _emit(args, campaign.stable_json(summary))
    return _verify_exit(summary)


def cmd_verify_thm2(args) -> int:
    graphs = _graphs(args) if (args.graph or args.family) else parse_family("trianglefree:8")
    b = 0.0 if args.b is None else args.b
    summary, records = campaign.run_thm2(graphs, args.lam or "crit:0.9", b)
    if args.details:
        summary["records"] = records
    _emit(args, campaign.stable_json(summary))
    return _verify_exit(summary)


def cmd_scan(args) -> int:
    spec = args.lam or "2"
    rel = spec.startswith("delta:")
    top = Fraction(spec[6:] if rel else spec)
    cfg = occ.ScanConfig(
        sizes=() if (args.family and args.no_random) else tuple(args.sizes),
        samples_per_cell=args.samples,
        lam_mode=args.lam_mode,
        lam_max=top,
        relative_to_delta=rel,
        seed=args.seed,
        graphs=tuple(parse_family(args.family, seed=args.seed)) if args.family else (),
    )
    rep = occ.conjecture_scan(cfg).to_json()
    rep["config"] = {
        "sizes": list(cfg.sizes),
        "edge_probs": list(cfg.edge_probs),
        "samples_per_cell": cfg.samples_per_cell,
        "lam_mode": cfg.lam_mode,
        "lam_max": str(cfg.lam_max),
        "relative_to_delta": cfg.relative_to_delta,
        "seed": cfg.seed,
        "family": args.family,
    }
    _emit(args, campaign.stable_json(rep))
    return EXIT_OK


def _parse_demand(spec: str, g: Graph, p: occ.OccupancyParams) -> tuple[Fraction, ...]:
    if spec == "certificate":
        return occ.dual_certificate(g, p).y_prime
    if spec == "uniform-min":
        beta, gamma = p.exact()
        return tuple([1 / max(beta[u] + g.degrees[u] * gamma[u] for u in range(g.n))] * g.n)
    parts = spec.split(",")
    if len(parts) == 1:
        return tuple([Fraction(parts[0])] * g.n)
    if len(parts) != g.n:
        raise InputError(f"demand has {len(parts)} entries, graph has {g.n} vertices")
    return tuple(Fraction(x) for x in parts)


def cmd_frac_color(args) -> int:
    key, g = _one_graph(args)
    lam = campaign.parse_lambda(args.lam or "1", g)
    p = occ.general_params(lam)
    q = _parse_demand(args.demand, g, p)
    chk = demand.check_demand(g, p, q)
    rep = {
        "graph": g.to_json(),
        "lambda": fugacity_to_json(lam),
        "demand": [str(x) for x in q],
        "demand_slack": [str(x) for x in chk.slack],
        "demand_feasible": chk.feasible,
    }
    if not chk.feasible:
        rep["verdict"] = {"ok": False, "witnesses": ["demand violates (B + Gamma A) q <= 1"]}
        _emit(args, campaign.stable_json(rep))
        return EXIT_FAIL
    fc = demand.run_demand_process(g, p, q, strict=args.strict)
    verdict = demand.verify_membership(g, fc, q, p)
    rep.update(fc.to_json(g.n))
    rep["verdict"] = verdict.to_json()
    if args.strict:
        rep["occupancy_failures"] = [{"active": list(a), "vertex": v} for a, v in fc.occupancy_failures]
    _emit(args, campaign.stable_json(rep))
    return EXIT_OK if verdict.ok and not fc.occupancy_failures else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="occucert", description="Exact checks of occupancy lower bounds for the hard-core model.")
    sub = parser.add_subparsers(dest="mode", required=True)

    def common(sp, lam=True):
        sp.add_argument("--graph", help="edge-list file ('n m' header, then 'u v' lines)")
        sp.add_argument("--family", help="family spec, e.g. complete:4, star:2, connected:6, trianglefree:8")
        if lam:
            sp.add_argument("--lambda", dest="lam", help="fugacity spec (7/5, 1/2,1/3, delta:9/10, crit:0.9, @f.json)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cap", type=int, help="enumeration cap (overrides OCCUCERT_CAP)")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--strict", action="store_true")

    sp = sub.add_parser("analyze", help="exact hard-core summary and first bound for one graph")
    common(sp)
    sp.add_argument("--verbose", action="store_true", help="include every independent set's probability")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("certify", help="dual certificate, series diagnostics and LP optimum")
    common(sp)
    sp.add_argument("--b", type=float, help="use the bounded-local-mad parameters with this b")
    sp.add_argument("--terms", type=int, help="number of series terms (default: adaptive)")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify-thm1", help="first-bound campaign over a family")
    common(sp)
    sp.add_argument("--lp", action="store_true", help="also check LP weak duality (slower)")
    sp.add_argument("--details", action="store_true", help="include per-instance records")
    sp.set_defaults(func=cmd_verify_thm1)

    sp = sub.add_parser("verify-thm2", help="bounded-local-mad campaign over a family")
    common(sp)
    sp.add_argument("--b", type=float)
    sp.add_argument("--details", action="store_true")
    sp.set_defaults(func=cmd_verify_thm2)

    sp = sub.add_parser("frac-color", help="run the demand process and audit the distribution")
    common(sp)
    sp.add_argument("--demand", default="certificate", help="certificate | uniform-min | p/q | comma list")
    sp.set_defaults(func=cmd_frac_color)

    sp = sub.add_parser("counterexample", help="reproduce the K_{1,2} LP relaxation gap")
    sp.add_argument("--out")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("constants", help="root-found constants c(0), eta and c(b)")
    sp.add_argument("--b", type=float, action="append", help="also report c(b); repeatable")
    sp.add_argument("--out")
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("scan", help="random search for violations of the first bound without the fugacity cap")
    common(sp)
    sp.add_argument("--sizes", type=int, nargs="+", default=[3, 4, 5, 6])
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--mode", dest="lam_mode", choices=["uniform", "multivariate"], default="uniform")
    sp.add_argument("--no-random", action="store_true", help="scan only the --family graphs")
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved_cap = os.environ.get("OCCUCERT_CAP")
    if args.cap is not None:
        os.environ["OCCUCERT_CAP"] = str(args.cap)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"occucert: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, GraphError, occ.ParameterError, demand.DemandError, ValueError, OSError) as exc:
        print(f"occucert: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if saved_cap is None:
            os.environ.pop("OCCUCERT_CAP", None)
        else:
            os.environ["OCCUCERT_CAP"] = saved_cap


if __name__ == "__main__":
    sys.exit(main())
