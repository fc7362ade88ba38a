"""Command-line interface and report serialization.

Subcommands: ``solve`` (one spectrum), ``cheeger`` (exact multiway constants
and optional sweep rounding), ``certify`` (the one-shot pipeline that solves
spectra over a list of exponents and certifies the nodal-count bounds, the
two-sided isoperimetric bounds, and the supporting inequalities).

Exit codes: 0 all certified / success, 1 certificate failure, 2 usage or
parse error, 3 solver non-convergence.

Reports are deterministic for a fixed (input, parameters, seed): the JSON
document carries no timing or host information (timings go to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from fractions import Fraction

import numpy as np

from . import cheeger, nodal, one_laplacian, plaplacian
from .eigensolver import (
    BracketError,
    ContinuationError,
    Spectrum,
    path_spectrum,
    solve_p2_spectrum,
    variational_spectrum,
)
from .graph import (
    Graph,
    GraphParseError,
    graph_digest,
    is_connected,
    is_unit_path,
    parse_graph,
)

SCHEMA_VERSION = 1
DEFAULT_CERTIFY_P = (1.1, 1.5, 2.0, 3.0)

EXIT_OK = 0
EXIT_CERT_FAILURE = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3


def _load_graph(path: str, mu_mode: str | None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if mu_mode is None:
        has_mu = any(line.split("#", 1)[0].split()[:1] == ["mu"]
                     for line in text.splitlines())
        mu_mode = "explicit" if has_mu else "unit"
    return parse_graph(text, mu_mode)


def _load_vertex_function(path: str, n: int) -> np.ndarray:
    vals = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                vals.append(float(line))
    if len(vals) != n:
        raise ValueError(f"eigenfunction file has {len(vals)} values, expected {n}")
    return np.array(vals)


def _spectrum_for(g: Graph, p: float, steps: int, hk_values=None) -> Spectrum:
    if p == 2.0:
        return solve_p2_spectrum(g)
    if is_unit_path(g):
        return path_spectrum(g.n, p)
    return variational_spectrum(g, p, steps=steps, hk_values=hk_values)


def _spectrum_rows(sp: Spectrum, with_f: bool):
    rows = []
    for i, pair in enumerate(sp.pairs):
        row = {"k": i + 1, "lambda": float(pair.lam),
               "residual": float(pair.residual)}
        if with_f:
            row["f"] = [float(x) for x in pair.f]
        rows.append(row)
    return rows


def _input_block(path: str, g: Graph):
    return {"path": path, "sha256": graph_digest(g), "n": g.n, "m": g.m,
            "mu_mode": g.mu_mode}


def _emit(report: dict, json_path: str | None) -> None:
    doc = json.dumps(report, indent=2) + "\n"
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)


def _write_csv(rows: list[dict], fields: list[str], csv_path: str) -> None:
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(",".join(fields) + "\n")
        for row in rows:
            fh.write(",".join(str(row[f]) for f in fields) + "\n")


def _frac_str(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# solve

def _cmd_solve(args) -> int:
    g = _load_graph(args.graph, args.mu)
    t0 = time.perf_counter()
    sp = _spectrum_for(g, args.p, args.steps)
    elapsed = time.perf_counter() - t0
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "input": _input_block(args.graph, g),
        "parameters": {"p": args.p, "steps": args.steps, "seed": args.seed},
        "method": sp.method,
        "spectrum": _spectrum_rows(sp, with_f=True),
        "notes": list(sp.notes),
    }
    _emit(report, args.json)
    if args.csv:
        rows = [{"p": sp.p, **r} for r in _spectrum_rows(sp, with_f=False)]
        _write_csv(rows, ["p", "k", "lambda", "residual"], args.csv)
    print(f"solve: {len(sp.pairs)} eigenpairs via {sp.method} "
          f"in {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# cheeger

def _cmd_cheeger(args) -> int:
    g = _load_graph(args.graph, args.mu)
    if not 1 <= args.k <= g.n:
        print(f"error: k must satisfy 1 <= k <= n = {g.n}, got {args.k}",
              file=sys.stderr)
        return EXIT_USAGE
    exact = g.n <= cheeger.EXACT_HK_CAP
    if not exact and not args.approx:
        print(f"error: n = {g.n} exceeds the exact enumeration cap "
              f"{cheeger.EXACT_HK_CAP}; pass --approx for the labeled "
              f"heuristic", file=sys.stderr)
        return EXIT_USAGE
    if exact:
        results = cheeger.multiway_cheeger_all(g, args.k)
    else:
        results = [cheeger.multiway_cheeger_greedy(g, k)
                   for k in range(1, args.k + 1)]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "cheeger",
        "input": _input_block(args.graph, g),
        "parameters": {"k": args.k, "exact": exact,
                       "definition": "k pairwise-disjoint nonempty subsets; "
                                     "subsets need not cover V"},
        "h": [float(h) for h, _ in results],
        "families": [[sorted(s) for s in fam] for _, fam in results],
    }
    if args.sweep:
        f = _load_vertex_function(args.sweep, g.n)
        subset, c = cheeger.sweep_cut(g, f, args.p)
        bound = cheeger.sweep_bound(g, f, args.p)
        report["sweep"] = {
            "p": args.p,
            "subset": sorted(subset),
            "cut_ratio": float(c),
            "bound": float(bound),
            "bound_holds": bool(c <= bound + 1e-12),
        }
        print(f"sweep: c(A) = {c:.12g} <= {bound:.12g} "
              f"(threshold bound)", file=sys.stderr)
    _emit(report, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify

def _kernel_inequality_check(rng, draws=20000) -> dict:
    """Random suite for the two-term power inequality behind the nodal bounds."""
    ps = rng.uniform(1.0, 4.0, draws)
    a = rng.standard_normal(draws) * 3
    b = rng.standard_normal(draws) * 3
    x = np.abs(rng.standard_normal(draws)) * 2
    y = -np.abs(rng.standard_normal(draws)) * 2
    worst = 0.0
    for p in np.unique(np.round(ps, 2)):
        sel = np.abs(ps - p) < 0.005
        if not np.any(sel):
            continue
        gap = plaplacian.ax_by_gap(float(p), a[sel], b[sel], x[sel], y[sel])
        scale = (np.abs(a[sel] * x[sel]) + np.abs(b[sel] * y[sel]) + 1.0) ** p
        worst = max(worst, float(np.max(gap / scale)))
    return {"draws": draws, "max_normalized_gap": worst,
            "pass": bool(worst <= 1e-12)}


def _operator_checks(g: Graph, p: float, rng) -> dict:
    f = rng.standard_normal(g.n)
    lap = plaplacian.apply_p_laplacian(g, f, p)
    sum_zero = abs(float(np.sum(lap))) <= 1e-12 * (float(np.sum(np.abs(lap))) + 1.0)
    r0 = plaplacian.rayleigh_quotient(g, f, p)
    r1 = plaplacian.rayleigh_quotient(g, -2.5 * f, p)
    scale_inv = abs(r1 - r0) <= 1e-12 * max(1.0, abs(r0))
    return {"sum_zero": bool(sum_zero), "scale_invariant": bool(scale_inv),
            "pass": bool(sum_zero and scale_inv)}


def _certify_one_p(g, p, steps, seed, tol_base, hk_values):
    sp = _spectrum_for(g, p, steps, hk_values=hk_values)
    nrep = nodal.certify_nodal_bounds(sp)
    certs = (cheeger.certify_cheeger(g, sp, hk_values=hk_values,
                                     tol_base=tol_base) if p > 1 else [])
    span_checks = []
    for i, pair in enumerate(sp.pairs):
        entry = {"k": i + 1}
        for kind in ("strong", "weak"):
            mx = nodal.nodal_space_max_rq(g, pair, kind=kind, seed=seed + i)
            entry[kind] = {"max_rq": float(mx),
                           "pass": bool(mx <= pair.lam + 1e-8)}
        span_checks.append(entry)
    run = {
        "p": p,
        "method": sp.method,
        "spectrum": _spectrum_rows(sp, with_f=False),
        "nodal": {
            "all_pass": nrep.all_pass,
            "checks": [{
                "k": c.k, "lambda": c.lam, "multiplicity": c.multiplicity,
                "strong": c.strong_count, "weak": c.weak_count,
                "strong_bound": c.strong_bound, "weak_bound": c.weak_bound,
                "weak_must_equal_two": c.weak_must_equal_two,
                "pass": c.passed,
            } for c in nrep.checks],
        },
        "cheeger": [{
            "k": c.k, "lambda": c.lam, "m": c.m, "h_k": c.h_k, "h_m": c.h_m,
            "tau": c.tau, "lower": c.lower, "upper": c.upper, "pass": c.passed,
        } for c in certs],
        "nodal_space": span_checks,
        "notes": list(sp.notes),
    }
    ok = (nrep.all_pass and all(c.passed for c in certs)
          and all(e["strong"]["pass"] and e["weak"]["pass"] for e in span_checks)
          and all(pair.residual <= 1e-9 for pair in sp.pairs))
    return run, ok, sp, nrep


def _one_laplacian_section(g: Graph) -> tuple[dict, bool]:
    records = one_laplacian.enumerate_1lap_eigenvalues(g)
    merged = one_laplacian.merged_eigenvalues(records)
    noncon = one_laplacian.merged_eigenvalues(records, nonconstant_only=True)
    h2 = cheeger.multiway_cheeger(g, 2)[0] if g.n >= 2 else None
    h2_member = False
    if h2 is not None:
        h2_member = any(float(lo) - 1e-9 <= h2 <= float(hi) + 1e-9
                        for lo, hi in merged)
    example = None
    example_ok = True
    noncon_records = [r for r in records if not r.pattern.constant]
    if noncon_records:
        lo_best = min(r.lo for r in noncon_records)
        lowest = [r for r in noncon_records if r.lo == lo_best]

        def strong_count(r):
            f = [float(x) for x in r.pattern.example_function()]
            return nodal.strong_nodal_domains(g, f).count

        # showcase the nodal-count bound: among the smallest nonzero
        # eigenvalue's patterns, report the one with the most strong domains
        rep = max(lowest, key=strong_count)
        fvals = rep.pattern.example_function()
        cert = one_laplacian.verify_1lap_eigenpair(g, fvals, rep.lo)
        example_ok = cert.feasible and one_laplacian.check_certificate(
            g, fvals, rep.lo, cert)
        strong = nodal.strong_nodal_domains(g, [float(x) for x in fvals])
        weak = nodal.weak_nodal_domains(g, [float(x) for x in fvals])
        example = {
            "lambda": _frac_str(rep.lo),
            "f": [_frac_str(x) for x in fvals],
            "feasible": bool(cert.feasible),
            "strong_domains": strong.count,
            "weak_domains": weak.count,
        }
    section = {
        "eigenvalues": [[_frac_str(lo), _frac_str(hi)] for lo, hi in merged],
        "nonconstant_eigenvalues": [[_frac_str(lo), _frac_str(hi)]
                                    for lo, hi in noncon],
        "h2": None if h2 is None else float(h2),
        "h2_is_eigenvalue": bool(h2_member),
        "example": example,
    }
    return section, bool(h2_member and example_ok)


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph, args.mu)
    p_list = args.p if args.p else list(DEFAULT_CERTIFY_P)
    rng = np.random.default_rng(args.seed)
    if not is_connected(g):
        print("warning: graph is disconnected; certificates may be vacuous",
              file=sys.stderr)
    if args.one_laplacian and g.n > one_laplacian.ENUMERATION_CAP:
        print(f"error: --one-laplacian requires n <= "
              f"{one_laplacian.ENUMERATION_CAP}, got n = {g.n}", file=sys.stderr)
        return EXIT_USAGE
    hk_values = None
    if g.n <= cheeger.EXACT_HK_CAP:
        hk_values = [h for h, _ in cheeger.multiway_cheeger_all(g, g.n)]
    checks = []
    runs = []
    t0 = time.perf_counter()
    kernel_check = _kernel_inequality_check(rng)
    checks.append({"name": "power_inequality_suite", "pass": kernel_check["pass"]})
    for p in p_list:
        t1 = time.perf_counter()
        run, ok, sp, _ = _certify_one_p(g, p, args.steps, args.seed,
                                        args.tol, hk_values)
        op_check = _operator_checks(g, p, np.random.default_rng(args.seed + 7))
        run["operator_checks"] = op_check
        runs.append(run)
        checks.append({"name": f"certificates[p={p:g}]",
                       "pass": bool(ok and op_check["pass"])})
        print(f"certify: p = {p:g} done in {time.perf_counter() - t1:.3f}s",
              file=sys.stderr)
    one_lap_section = None
    if args.one_laplacian:
        one_lap_section, ol_ok = _one_laplacian_section(g)
        checks.append({"name": "one_laplacian", "pass": bool(ol_ok)})
    all_pass = all(c["pass"] for c in checks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "certify",
        "input": _input_block(args.graph, g),
        "parameters": {
            "p_list": [float(p) for p in p_list],
            "steps": args.steps,
            "seed": args.seed,
            "tol": args.tol,
            "one_laplacian": bool(args.one_laplacian),
        },
        "kernel_inequality": kernel_check,
        "runs": runs,
        "one_laplacian": one_lap_section,
        "checks": checks,
        "all_pass": bool(all_pass),
    }
    _emit(report, args.json)
    if args.csv:
        rows = []
        for run in runs:
            counts = {c["k"]: c for c in run["nodal"]["checks"]}
            for r in run["spectrum"]:
                rows.append({"p": run["p"], **r,
                             "strong": counts[r["k"]]["strong"],
                             "weak": counts[r["k"]]["weak"]})
        _write_csv(rows, ["p", "k", "lambda", "residual", "strong", "weak"],
                   args.csv)
    print(f"certify: total {time.perf_counter() - t0:.3f}s, "
          f"all_pass = {all_pass}", file=sys.stderr)
    if not all_pass:
        for c in checks:
            if not c["pass"]:
                print(f"FAILED: {c['name']}", file=sys.stderr)
        for run in runs:
            for c in run["nodal"]["checks"]:
                if not c["pass"]:
                    print(f"  nodal p={run['p']:g}: {c}", file=sys.stderr)
            for c in run["cheeger"]:
                if not c["pass"]:
                    print(f"  cheeger p={run['p']:g}: {c}", file=sys.stderr)
        return EXIT_CERT_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plap",
        description="Graph p-Laplacian spectra, nodal domains, and "
                    "multiway Cheeger certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("graph", help="edge-list file (header 'n <count>', "
                                      "optional 'mu <v> <value>' lines, edges "
                                      "'<u> <v> <w>')")
        sp.add_argument("--mu", choices=("unit", "degree", "explicit"),
                        default=None,
                        help="vertex measure mode (default: explicit when mu "
                             "lines are present, else unit)")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for sampled checks (recorded in the report)")
        sp.add_argument("--json", metavar="PATH",
                        help="write the JSON report here instead of stdout")

    p_solve = sub.add_parser("solve", help="compute one spectrum")
    common(p_solve)
    p_solve.add_argument("--p", type=float, default=2.0, help="exponent p > 1")
    p_solve.add_argument("--steps", type=int, default=16,
                         help="continuation grid steps from p = 2")
    p_solve.add_argument("--csv", metavar="PATH", help="spectrum table as CSV")
    p_solve.set_defaults(func=_cmd_solve)

    p_cert = sub.add_parser("certify",
                            help="solve and certify every bound per instance")
    common(p_cert)
    p_cert.add_argument("--p", type=float, action="append",
                        help="exponent (repeatable; default 1.1 1.5 2 3)")
    p_cert.add_argument("--steps", type=int, default=16)
    p_cert.add_argument("--tol", type=float, default=1e-9,
                        help="additive certificate tolerance base")
    p_cert.add_argument("--one-laplacian", action="store_true",
                        help="also enumerate and verify the exact p = 1 "
                             "eigenvalues (n <= 6)")
    p_cert.add_argument("--csv", metavar="PATH",
                        help="per-pair table (p, k, lambda, residual, counts)")
    p_cert.set_defaults(func=_cmd_certify)

    p_ch = sub.add_parser("cheeger", help="exact multiway constants h_1..h_k")
    common(p_ch)
    p_ch.add_argument("--k", type=int, required=True)
    p_ch.add_argument("--approx", action="store_true",
                      help="allow the labeled greedy heuristic beyond the "
                           "exact cap")
    p_ch.add_argument("--sweep", metavar="FILE",
                      help="vertex function file (one value per line) to "
                           "round by threshold sweep")
    p_ch.add_argument("--p", type=float, default=2.0,
                      help="exponent for the sweep bound")
    p_ch.set_defaults(func=_cmd_cheeger)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.func(args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return code
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContinuationError, BracketError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
