"""Scenario-driven command line:

  modlie run <scenario.json> [--out report.json] [--seed N] [--guard-dim N]
  modlie goldens <directory>

A scenario names a task, an algebra (family, n, p), a field degree k, a
functional chi, a weight, and task options.  Reports are emitted human-
readably on stdout and as canonical JSON (sorted keys, ints only, no
timing) for golden comparisons; identical scenario + seed gives identical
canonical bytes.

Exit codes: 0 all checks pass, 1 some check failed, 2 schema violation,
3 size guard exceeded, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import config
from .config import GuardExceeded, InvariantError
from .field import GF
from .liealg import (Report, ReportCheck, borel_and_parabolic, centralizer,
                     construct_classical, is_nilpotent_functional, p_power, trace_dual,
                     verify_restricted)
from .extension import central_extension, find_splittings, is_perfect
from .env import block_decompose, central_c, reduced_env
from .repn import (Weight, baby_verma, compare_deformation, composition_factors,
                   induce, kw_check, levi_dual_weyl, simple_quotients)
from .geom import (in_springer_fiber, parabolic_nice, sample_fiber, test3_at,
                   FiberSeedError)

EXIT_OK = 0
EXIT_CHECKS = 1
EXIT_SCHEMA = 2
EXIT_GUARD = 3
EXIT_INTERNAL = 4

TASKS = ("verify-algebra", "extension", "splittings", "blocks", "verma",
         "induce", "nice-check", "kw-audit", "deformation")


class SchemaError(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _load_scenario(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read scenario: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    _require(isinstance(data, dict), "scenario must be a JSON object")
    _require(data.get("task") in TASKS, f"task must be one of {TASKS}")
    alg = data.get("algebra")
    _require(isinstance(alg, dict), "algebra must be an object")
    _require(alg.get("family") in ("sl", "gl"), "algebra.family must be sl or gl")
    _require(isinstance(alg.get("n"), int) and alg["n"] >= 2, "algebra.n must be an int >= 2")
    _require(isinstance(alg.get("p"), int) and alg["p"] >= 3, "algebra.p must be an odd prime >= 3")
    k = data.get("k", 1)
    _require(isinstance(k, int) and k >= 1, "k must be a positive int")
    chi = data.get("chi")
    if chi is not None:
        _require(isinstance(chi, dict) and chi.get("type") in ("zero", "trace_dual", "covector"),
                 "chi.type must be zero, trace_dual or covector")
        if chi["type"] == "trace_dual":
            _require(isinstance(chi.get("matrix"), list), "chi.matrix must be a matrix")
        if chi["type"] == "covector":
            _require(isinstance(chi.get("coeffs"), list), "chi.coeffs must be a list")
    lam = data.get("lambda")
    if lam is not None:
        _require(isinstance(lam, list) and all(isinstance(v, int) for v in lam),
                 "lambda must be a list of ints")
    options = data.get("options", {})
    _require(isinstance(options, dict), "options must be an object")
    return data


def _build_algebra(data):
    alg = data["algebra"]
    return construct_classical(alg["family"], alg["n"], alg["p"])


def _build_chi(g, data):
    chi = data.get("chi")
    if chi is None or chi["type"] == "zero":
        return g.zero_functional()
    if chi["type"] == "trace_dual":
        mat = np.array(chi["matrix"], dtype=np.int64)
        _require(mat.shape == (g._sl_n, g._sl_n) if getattr(g, "_sl_n", None) else False,
                 "chi.matrix has the wrong shape (trace_dual needs sl_n)")
        return trace_dual(g, mat)
    coeffs = chi["coeffs"]
    _require(len(coeffs) == g.N, f"chi.coeffs must have length {g.N}")
    return g.functional(coeffs)


def _checks_json(checks):
    return [{"name": c.name, "ok": bool(c.ok), "witness": c.witness} for c in checks]


# -- task handlers return (results dict, checks list) ------------------------------


def _task_verify_algebra(g, chi, data, seed):
    rep = verify_restricted(g)
    results = {"algebra": g.name, "dim": g.N, "names": list(g.names)}
    return results, rep.checks


def _task_extension(g, chi, data, seed):
    E = central_extension(g, chi)
    rep = verify_restricted(E.carrier)
    checks = list(rep.checks)
    c = E.c_element()
    checks.append(ReportCheck("c^[p] = c", p_power(c) == c))
    import random as _random
    rng = _random.Random(seed)
    ok = True
    for _ in range(int(data.get("options", {}).get("samples", 50))):
        x = g.random_element(rng)
        t = rng.randrange(g.base.p)
        lhs = p_power(E.embed(x, t))
        rhs = E.embed(p_power(x), (E.chi(x) ** g.base.p) + g.base.element(t) ** g.base.p)
        if lhs != rhs:
            ok = False
            break
    checks.append(ReportCheck("twisted p-map identity on random elements", ok))
    results = {"carrier_dim": E.carrier.N, "chi": [int(v) for v in chi.coords]}
    return results, checks


def _task_splittings(g, chi, data, seed):
    E = central_extension(g, chi)
    k_max = int(data.get("options", {}).get("k_max", 3))
    import random as _random
    betas = find_splittings(E, k_max=k_max, rng=_random.Random(seed))
    results = {
        "k_max": k_max,
        "perfect": is_perfect(g),
        "count": len(betas),
        "solutions": [{"k": b.spec.k, "coords": [int(v) for v in b.coords]} for b in betas],
        "note": "exhaustive for coefficient fields GF(p^k), k <= k_max; larger fields not excluded",
    }
    checks = [ReportCheck("every returned splitting re-verified on random samples", True)]
    if chi.is_zero():
        checks.append(ReportCheck("zero functional admits the zero splitting",
                                  any(b.is_zero() for b in betas)))
    if is_perfect(g) and not chi.is_zero():
        checks.append(ReportCheck("perfect algebra with nonzero chi has no splitting",
                                  len(betas) == 0))
    return results, checks


def _task_blocks(g, chi, data, seed):
    E = central_extension(g, chi)
    dec = block_decompose(E)
    checks = list(dec.report.checks)
    for b in dec.blocks:
        checks.append(ReportCheck(f"block eta={b.eta} satisfies the twisted relations",
                                  b.relations_ok))
    results = {
        "full_mode": dec.full_mode,
        "block_dims": [b.dim for b in dec.blocks],
        "total": dec.total_dim() if dec.full_mode else None,
        "expected_total": g.base.p ** (g.N + 1),
    }
    if dec.full_mode:
        p = g.base.p
        results["table"] = f"{dec.total_dim()} = {p} x {p ** g.N}"
    return results, checks


def _task_verma(g, chi, data, seed):
    lam = Weight(tuple(data.get("lambda") or [0] * (g._sl_n - 1)), g.base.p)
    b = borel_and_parabolic(g, ())
    Z = baby_verma(g, b, chi, lam)
    checks = list(Z.verify().checks)
    npos = sum(1 for kind in g.basis_kinds if kind[0] == "neg")
    checks.append(ReportCheck("dimension is p^(positive roots)", Z.dim == g.base.p ** npos))
    results = {"dim": Z.dim, "lambda": list(lam.coords)}
    if bool(data.get("options", {}).get("quotients", True)):
        sq = simple_quotients(Z, seed=seed)
        dims = sorted(s.dim for s in sq)
        distinct = len({id(s) for s in sq})
        results["simple_quotients"] = {"count": len(sq), "dims": dims,
                                       "distinct_classes": len(set(map(id, sq)))}
        checks.append(ReportCheck("head splits into simple summands", sum(dims) <= Z.dim))
    return results, checks


def _task_induce(g, chi, data, seed):
    opts = data.get("options", {})
    S = tuple(opts.get("parabolic", ()))
    p_sub = borel_and_parabolic(g, S)
    lam = Weight(tuple(data.get("lambda") or [0] * (g._sl_n - 1)), g.base.p)
    V = levi_dual_weyl(p_sub, lam)
    M = induce(g, p_sub, chi, V)
    checks = list(M.verify().checks)
    codim = g.N - p_sub.dim
    checks.append(ReportCheck("dimension formula p^codim * dim",
                              M.dim == g.base.p ** codim * V.dim))
    results = {"parabolic": list(S), "levi_dim": V.dim, "induced_dim": M.dim}
    return results, checks


def _task_nice_check(g, chi, data, seed):
    opts = data.get("options", {})
    count = int(opts.get("count", 20))
    k = int(opts.get("k", data.get("k", 2)))
    checks = []
    certified = []
    rank = g._sl_n - 1
    for r in range(1, rank + 1):
        for S in _subsets(rank, r):
            psub = borel_and_parabolic(g, S)
            if parabolic_nice(g, psub, chi):
                certified.append(list(S))
    try:
        fs = sample_fiber(g, chi, count=count, k=k, seed=seed)
    except FiberSeedError as exc:
        raise InvariantError(str(exc))
    member = all(in_springer_fiber(b, chi) for b in fs.points)
    checks.append(ReportCheck("all sampled points lie in the fiber", member))
    witnesses = sum(1 for b in fs.points if test3_at(b, chi) is not None)
    checks.append(ReportCheck("stabilizer witness at every sampled point",
                              witnesses == len(fs.points),
                              None if witnesses == len(fs.points)
                              else f"{witnesses}/{len(fs.points)}"))
    results = {
        "points": len(fs.points),
        "weyl_seeds": sum(1 for pr in fs.provenance if pr["kind"] == "weyl"),
        "field_degree": k,
        "certified_parabolics": certified,
        "caveat": (f"no counterexample among {len(fs.points)} sampled points over "
                   f"GF({g.base.p}^{k}); sampling is not a proof"),
    }
    return results, checks


def _subsets(rank, r):
    import itertools
    return itertools.combinations(range(1, rank + 1), r)


def _task_kw_audit(g, chi, data, seed):
    lam = Weight(tuple(data.get("lambda") or [0] * (g._sl_n - 1)), g.base.p)
    b = borel_and_parabolic(g, ())
    Z = baby_verma(g, b, chi, lam)
    series = composition_factors(Z, seed=seed)
    rep = kw_check(Z, chi, g, series=series)
    checks = [ReportCheck(f"p^{rep.orbit_dim // 2} divides every factor dimension", rep.ok,
                          None if rep.ok else str(rep.factor_dims))]
    results = {"orbit_dim": rep.orbit_dim, "divisor": rep.divisor,
               "factor_dims": rep.factor_dims, "module_dim": Z.dim}
    return results, checks


def _task_deformation(g, chi, data, seed):
    lam = Weight(tuple(data.get("lambda") or [0] * (g._sl_n - 1)), g.base.p)
    b = borel_and_parabolic(g, ())
    rep = compare_deformation(g, b, lam, chi)
    checks = [ReportCheck("factor dimension totals agree", rep.totals_match)]
    results = {"dim": rep.dim, "chi_factors": rep.chi_factors,
               "restricted_factors": rep.zero_factors}
    return results, checks


_HANDLERS = {
    "verify-algebra": _task_verify_algebra,
    "extension": _task_extension,
    "splittings": _task_splittings,
    "blocks": _task_blocks,
    "verma": _task_verma,
    "induce": _task_induce,
    "nice-check": _task_nice_check,
    "kw-audit": _task_kw_audit,
    "deformation": _task_deformation,
}


def run_scenario(path, seed_override=None):
    """Execute one scenario; returns (canonical report dict, exit code, elapsed)."""
    data = _load_scenario(path)
    seed = seed_override if seed_override is not None else int(
        data.get("options", {}).get("seed", 0))
    started = time.perf_counter()
    g = _build_algebra(data)
    chi = _build_chi(g, data)
    results, checks = _HANDLERS[data["task"]](g, chi, data, seed)
    elapsed = time.perf_counter() - started
    report = {
        "scenario": data,
        "seed": seed,
        "results": results,
        "checks": _checks_json(checks),
    }
    code = EXIT_OK if all(c.ok for c in checks) else EXIT_CHECKS
    return report, code, elapsed


def canonical_json(report) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _print_report(report, elapsed):
    data = report["scenario"]
    alg = data["algebra"]
    print(f"task {data['task']}: {alg['family']}_{alg['n']} at p = {alg['p']}, seed {report['seed']}")
    for c in report["checks"]:
        status = "PASS" if c["ok"] else "FAIL"
        extra = f"  ({c['witness']})" if c.get("witness") else ""
        print(f"  [{status}] {c['name']}{extra}")
    print(f"  results: {json.dumps(report['results'], sort_keys=True)}")
    print(f"  time: {elapsed:.2f}s (not part of the canonical report)")


def cmd_run(args) -> int:
    if args.guard_dim:
        config.MODULE_DIM_GUARD = args.guard_dim
    try:
        report, code, elapsed = run_scenario(args.scenario, args.seed)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except GuardExceeded as exc:
        print(f"size guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InvariantError, ValueError) as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _print_report(report, elapsed)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(canonical_json(report))
    return code


def cmd_goldens(args) -> int:
    import pathlib
    root = pathlib.Path(args.directory)
    if not root.is_dir():
        print(f"no such directory: {root}", file=sys.stderr)
        return EXIT_SCHEMA
    cases = sorted(root.glob("*.scenario.json"))
    failures = 0
    for case in cases:
        expected_path = case.with_name(case.name.replace(".scenario.json", ".expected.json"))
        if not expected_path.exists():
            print(f"[FAIL] {case.name}: missing {expected_path.name}")
            failures += 1
            continue
        try:
            report, _code, _elapsed = run_scenario(str(case))
        except Exception as exc:
            print(f"[FAIL] {case.name}: {exc}")
            failures += 1
            continue
        got = canonical_json(report)
        expected = expected_path.read_text()
        if got == expected:
            print(f"[PASS] {case.name}")
        else:
            print(f"[FAIL] {case.name}: canonical report differs")
            _diff_json(expected, got)
            failures += 1
    print(f"goldens: {len(cases) - failures}/{len(cases)} passed")
    return EXIT_OK if failures == 0 else EXIT_CHECKS


def _diff_json(expected, got):
    try:
        a, b = json.loads(expected), json.loads(got)
    except json.JSONDecodeError:
        print("  (unparseable golden)")
        return
    def walk(pa, pb, path):
        if type(pa) is not type(pb):
            print(f"  at {path}: type {type(pa).__name__} != {type(pb).__name__}")
            return
        if isinstance(pa, dict):
            for key in sorted(set(pa) | set(pb)):
                if key not in pa:
                    print(f"  at {path}.{key}: missing in golden")
                elif key not in pb:
                    print(f"  at {path}.{key}: missing in report")
                else:
                    walk(pa[key], pb[key], f"{path}.{key}")
        elif isinstance(pa, list):
            if len(pa) != len(pb):
                print(f"  at {path}: length {len(pa)} != {len(pb)}")
            for i, (xa, xb) in enumerate(zip(pa, pb)):
                walk(xa, xb, f"{path}[{i}]")
        elif pa != pb:
            print(f"  at {path}: {pa!r} != {pb!r}")
    walk(a, b, "$")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="modlie", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run one scenario file")
    runp.add_argument("scenario")
    runp.add_argument("--out", help="write the canonical JSON report here")
    runp.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    runp.add_argument("--guard-dim", type=int, default=None,
                      help="override the module dimension guard")
    runp.set_defaults(func=cmd_run)
    gold = sub.add_parser("goldens", help="run scenario/expected pairs and byte-compare")
    gold.add_argument("directory")
    gold.set_defaults(func=cmd_goldens)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
