"""Command-line interface: ``sheafdual <command> [options]``.

Exit codes: 0 success, 1 a checked property fails (the report shows the
counterexample), 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .dot import lattice_dot, sheaf_dot, site_dot
from .enumeration import generate_corpus, join_irreducibles
from .errors import ParseError, SheafDualError
from .formula import default_suite, parse_formula
from .ideals import (classify_regularity, congruence_lattice, enumerate_ideals,
                     gratzer_schmidt_check, is_simple)
from .io import dumps, load
from .kripke import (FiniteSite, KJForcing, KJName, is_restriction_closed, persistence_check)
from .lattice import (Homomorphism, check_homomorphism, is_boolean, is_distributive,
                      is_epi_upto, is_relatively_complemented, NotEpi, zd)
from .mv import (MVAlgebra, MVModel, check_generic_theorems, default_envs,
                 lukasiewicz_chain, ultrafilters, validate_mv)
from .priestley import NotIsomorphism, duality_unit, spectrum
from .sheaf import build_sheaf, eta, regular_ideal_open_iso

__all__ = ["main", "generate_corpus"]


class _Exit(Exception):
    def __init__(self, code, report):
        self.code = code
        self.report = report


def _load_kind(path, *kinds):
    inst = load(path)
    if inst.kind not in kinds:
        raise _Exit(2, {"error": "WrongKind", "message": f"expected {' or '.join(kinds)}, got {inst.kind}"})
    return inst.value


def _algebra(path):
    A = _load_kind(path, "lattice", "blo")
    return A


def _hosts(args):
    if getattr(args, "corpus", None) is not None:
        return [(f"corpus[{k}]", L) for k, L in enumerate(generate_corpus(args.corpus))]
    if not args.file:
        raise _Exit(2, {"error": "UsageError", "message": "give a file or --corpus N"})
    return [(args.file, _algebra(args.file))]


# ------------------------------------------------------------- commands

def cmd_validate(args):
    inst = load(args.file)
    v = inst.value
    report = {"kind": inst.kind, "valid": True}
    if inst.kind in ("lattice", "blo"):
        L = v.lattice
        report.update(size=L.size, operators=len(v.operators),
                      distributive=is_distributive(L).holds, boolean=is_boolean(L))
    elif inst.kind == "mv":
        rep = validate_mv(v)
        report.update(size=v.size, valid=rep.passed,
                      failures={k: list(w) for k, w in rep.failures.items()})
        return (0 if rep.passed else 1), report
    elif inst.kind == "site":
        report.update(points=v.size, monoidal=v.monoidal)
    elif inst.kind == "name":
        report.update(rank=v[0].rank, entries=len(v[0]))
    else:
        report.update(formulas=len(v))
    return 0, report


def cmd_spectrum(args):
    L = _algebra(args.file).lattice
    X = spectrum(L)
    return 0, {
        "points": [X.point_label(i) for i in range(X.n_points)],
        "order": [[i, j] for i in range(X.n_points) for j in range(X.n_points)
                  if i != j and X.order[i][j]],
        "basis": {L.labels[a]: sorted(X.basis[a]) for a in range(L.size)},
    }


def cmd_duality_check(args):
    rows, ok = [], True
    for name, L in _hosts(args):
        try:
            duality_unit(L)
            good = True
        except NotIsomorphism:
            good = False
        ok &= good
        rows.append({"instance": name, "size": L.size, "isomorphism": good})
    return (0 if ok else 1), {"all_pass": ok, "instances": rows}


def cmd_sheaf(args):
    A = _algebra(args.file)
    S = build_sheaf(A, mode=args.stalk_mode)
    return 0, {
        "points": [S.base.point_label(i) for i in range(S.n_points)],
        "stalk_sizes": [G.size for G in S.stalks],
        "gamma_size": S.gamma_size,
        "mode": S.mode,
    }


def cmd_eta(args):
    A = _algebra(args.file)
    d = eta(A, build_sheaf(A, mode=args.stalk_mode))
    return 0, {"homomorphism": d.homomorphism, "injective": d.injective,
               "surjective": d.surjective, "gamma_size": d.gamma_size, "image_size": d.image_size}


def cmd_classify(args):
    A = _algebra(args.file)
    L = A.lattice
    reg = classify_regularity(A) if is_distributive(L).holds else None
    report = {
        "size": L.size,
        "operators": len(A.operators),
        "distributive": is_distributive(L).holds,
        "boolean": is_boolean(L),
        "relatively_complemented": is_relatively_complemented(L).holds,
        "simple": is_simple(A),
        "zd_size": zd(A)[0].size,
        "ideals": len(enumerate_ideals(A)),
        "congruences": len(congruence_lattice(A)),
    }
    if reg is not None:
        report.update(regular=reg.regular, strongly_regular=reg.strongly_regular,
                      congruence_strongly_regular=reg.congruence_strongly_regular)
    return 0, report


def cmd_regular_ideals(args):
    A = _algebra(args.file)
    r = regular_ideal_open_iso(build_sheaf(A, mode=args.stalk_mode))
    return (0 if r.holds else 1), {
        "opens": r.n_opens, "regular_ideals": r.n_regular,
        "regular_ideals_fixed_point_reading": r.n_regular_fixed_point_reading,
        "bijection": r.bijection, "order_isomorphism": r.order_isomorphism}


def cmd_gratzer_schmidt(args):
    rows, ok = [], True
    for name, L in _hosts(args):
        r = gratzer_schmidt_check(L)
        ok &= r.theorem_holds
        rows.append({"instance": name, "bijection": r.bijection, "conditions": r.conditions,
                     "ideals": r.n_ideals, "congruences": r.n_congruences,
                     "theorem_holds": r.theorem_holds})
    return (0 if ok else 1), {"all_pass": ok, "instances": rows}


def _mv_algebra(args) -> MVAlgebra:
    if args.lukasiewicz is not None:
        return lukasiewicz_chain(args.lukasiewicz)
    if not args.algebra:
        raise _Exit(2, {"error": "UsageError", "message": "give --algebra FILE or --lukasiewicz N"})
    inst = load(args.algebra)
    if inst.kind == "name":
        return inst.value[1]
    if inst.kind != "mv":
        raise _Exit(2, {"error": "WrongKind", "message": f"expected mv, got {inst.kind}"})
    return inst.value


def cmd_mv_validate(args):
    A = _mv_algebra(args)
    rep = validate_mv(A)
    return (0 if rep.passed else 1), {
        "size": A.size, "passed": rep.passed, "checked": rep.checked,
        "failures": {k: list(w) for k, w in rep.failures.items()}}


def _split_env(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise _Exit(2, {"error": "UsageError", "message": f"--env expects VAR=VALUE, got {item!r}"})
        var, text = item.split("=", 1)
        out[var] = text
    return out


def _mv_env(args, L):
    from .io import _name_from, _Fail

    env = {}
    for var, text in _split_env(args.env).items():
        if text.startswith("@"):
            inst = load(text[1:])
            if inst.kind != "name":
                raise _Exit(2, {"error": "WrongKind", "message": f"{text[1:]} is not a name file"})
            x, M = inst.value
            if M.labels != L.labels:
                raise _Exit(2, {"error": "AlgebraMismatch", "message": f"{var} is over another algebra"})
            env[var] = x
        else:
            try:
                env[var] = _name_from(json.loads(text), L)
            except (json.JSONDecodeError, _Fail) as exc:
                raise _Exit(2, {"error": "ParseError", "message": f"--env {var}: {exc}"}) from exc
    return env


def cmd_mv_eval(args):
    L = _mv_algebra(args)
    phi = parse_formula(args.formula)
    env = _mv_env(args, L)
    model = MVModel(L, args.rank, args.subset_mode, max_domain=args.max_domain)
    from .mv import eval_formula
    v = eval_formula(phi, env, L, args.rank, model=model)
    return 0, {"formula": args.formula, "mode": args.subset_mode, "rank": args.rank,
               "value": L.labels[v]}


def cmd_generic_check(args):
    L = _mv_algebra(args)
    model = MVModel(L, args.rank, args.subset_mode, max_domain=args.max_domain)
    names = model.universe
    rows, ok = [], True
    for G in ultrafilters(L):
        r = check_generic_theorems(L, names, G, model=model, envs=default_envs(names, args.env_pool))
        ok &= r.holds
        rows.append({"ultrafilter": r.ultrafilter, "pairs": r.pairs_checked,
                     "membership_holds": r.membership_holds, "equality_holds": r.equality_holds,
                     "formulas_checked": r.formulas_checked, "formulas_hold": r.formulas_hold})
    boolean = L.is_boolean
    code = 1 if (boolean and not ok) else 0
    return code, {"boolean": boolean, "mode": args.subset_mode, "names": len(names),
                  "all_hold": ok, "ultrafilters": rows}


def _kj_name(S: FiniteSite, data, base: int) -> KJName:
    if not isinstance(data, list):
        raise _Exit(2, {"error": "ParseError", "message": "a site name is a list of [point, name] pairs"})
    entries = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and item[0] in S.labels):
            raise _Exit(2, {"error": "ParseError", "message": f"bad entry {item!r}"})
        J = S.labels.index(item[0])
        entries.append((J, _kj_name(S, item[1], J)))
    return KJName(base, entries)


def cmd_kj_force(args):
    S = _load_kind(args.site, "site")
    if args.point not in S.labels:
        raise _Exit(2, {"error": "UnknownPoint", "message": args.point})
    I = S.labels.index(args.point)
    env = {}
    for var, text in _split_env(args.env).items():
        try:
            a = _kj_name(S, json.loads(text), I)
        except json.JSONDecodeError as exc:
            raise _Exit(2, {"error": "ParseError", "message": f"--env {var}: {exc}"}) from exc
        if not is_restriction_closed(S, a):
            raise _Exit(2, {"error": "NotRestrictionClosed", "message": f"--env {var}"})
        env[var] = a
    engine = KJForcing(S, args.rank, args.tensor_scope)
    phi = parse_formula(args.formula)
    return 0, {"point": args.point, "formula": args.formula, "rank": args.rank,
               "forced": engine.forces(I, phi, env)}


def cmd_persistence(args):
    S = _load_kind(args.site, "site")
    suite = _load_kind(args.suite, "formula-suite") if args.suite else default_suite()
    rep = persistence_check(S, suite, args.rank, env_pool=args.env_pool,
                            engine=KJForcing(S, args.rank, args.tensor_scope))
    return (0 if rep.holds else 1), {
        "checks": rep.checks, "holds": rep.holds,
        "violations": [{"formula": f, "from": S.labels[I], "to": S.labels[J],
                        "env": {v: a.show(S) for v, a in sorted(env.items())}}
                       for f, I, J, env in rep.violations]}


def cmd_epi_search(args):
    A = _algebra(args.source)
    B = _algebra(args.target)
    try:
        table = tuple(B.lattice.labels.index(t) if t in B.lattice.labels else int(t)
                      for t in args.map.split(","))
    except ValueError as exc:
        raise _Exit(2, {"error": "UsageError", "message": f"bad --map: {exc}"}) from exc
    h = Homomorphism(A, B, table)
    check_homomorphism(h)
    res = is_epi_upto(h, args.bound)
    if isinstance(res, NotEpi):
        C = res.algebra.lattice
        return 0, {"result": "NotEpi", "surjective": h.is_surjective(),
                   "witness_size": C.size, "witness_labels": list(C.labels),
                   "f": [C.labels[v] for v in res.f.table], "g": [C.labels[v] for v in res.g.table]}
    return 0, {"result": "NoWitnessUpTo", "surjective": h.is_surjective(), "bound": res.k}


def corpus_row(item):
    k, L = item
    X = spectrum(L)
    try:
        duality_unit(L)
        dual = True
    except NotIsomorphism:
        dual = False
    d = eta(L)
    return {"index": k, "size": L.size, "spectrum": X.n_points,
            "join_irreducibles": len(join_irreducibles(L)), "duality": dual,
            "eta_isomorphism": d.isomorphism, "gamma_size": d.gamma_size}


def cmd_corpus_run(args):
    corpus = list(enumerate(generate_corpus(args.max_poset)))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(corpus_row, corpus, chunksize=4))
    else:
        rows = [corpus_row(item) for item in corpus]
    ok = all(r["duality"] and r["spectrum"] == r["join_irreducibles"] for r in rows)
    return (0 if ok else 1), {"max_poset": args.max_poset, "lattices": len(rows),
                              "all_pass": ok, "instances": rows}


def cmd_dot(args):
    inst = load(args.file)
    if inst.kind == "site":
        return 0, site_dot(inst.value)
    if inst.kind not in ("lattice", "blo"):
        raise _Exit(2, {"error": "WrongKind", "message": f"cannot draw {inst.kind}"})
    if args.sheaf:
        return 0, sheaf_dot(build_sheaf(inst.value, mode=args.stalk_mode))
    return 0, lattice_dot(inst.value)


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sheafdual", description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, help="search budget (overrides SHEAFDUAL_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    def stalk(sp):
        sp.add_argument("--stalk-mode", choices=("congruence", "ideal"), default="congruence")

    def mv_opts(sp):
        sp.add_argument("--algebra", help="mv or name file")
        sp.add_argument("--lukasiewicz", type=int, help="use the (N+1)-element Łukasiewicz chain")
        sp.add_argument("--subset-mode", choices=("standard", "paper-literal"), default="standard")
        sp.add_argument("--rank", type=int, default=2)
        sp.add_argument("--max-domain", type=int, default=2)

    add("validate", cmd_validate, "parse and validate an instance file").add_argument("file")
    add("spectrum", cmd_spectrum, "prime spectrum of a distributive lattice").add_argument("file")
    sp = add("duality-check", cmd_duality_check, "check the duality unit is an isomorphism")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--corpus", type=int, metavar="N", help="all downset lattices of N-point posets")
    sp = add("sheaf", cmd_sheaf, "build the dual sheaf")
    sp.add_argument("file")
    stalk(sp)
    sp = add("eta-diagnose", cmd_eta, "diagnose the representation map")
    sp.add_argument("file")
    stalk(sp)
    add("classify", cmd_classify, "structural properties of an algebra").add_argument("file")
    sp = add("regular-ideals", cmd_regular_ideals, "regular ideals versus opens of the base")
    sp.add_argument("file")
    stalk(sp)
    sp = add("gratzer-schmidt", cmd_gratzer_schmidt, "ideals versus congruences")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--corpus", type=int, metavar="N")
    sp = add("mv-validate", cmd_mv_validate, "check MV axioms and residuation")
    mv_opts(sp)
    sp = add("mv-eval", cmd_mv_eval, "truth value of a formula over names")
    mv_opts(sp)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--env", action="append", metavar="VAR=NAME",
                    help="NAME is inline JSON or @file")
    sp = add("generic-check", cmd_generic_check, "generic-filter theorems per ultrafilter")
    mv_opts(sp)
    sp.add_argument("--env-pool", type=int, default=6)
    for name, func, help_ in (("kj-force", cmd_kj_force, "Kripke–Joyal forcing at a point"),
                              ("persistence", cmd_persistence, "persistence of forcing along the order")):
        sp = add(name, func, help_)
        sp.add_argument("--site", required=True)
        sp.add_argument("--rank", type=int, default=1)
        sp.add_argument("--tensor-scope", choices=("below", "all"), default="below")
    sp = sub.choices["kj-force"]
    sp.add_argument("--point", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--env", action="append", metavar="VAR=NAME")
    sp = sub.choices["persistence"]
    sp.add_argument("--suite", help="formula-suite file (default: built-in suite)")
    sp.add_argument("--env-pool", type=int, default=8)
    sp = add("epi-search", cmd_epi_search, "bounded search for a non-epi witness")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--map", required=True, help="comma-separated images (labels or indices)")
    sp.add_argument("--bound", type=int, default=4)
    sp = add("corpus-run", cmd_corpus_run, "run the standard checks over the corpus")
    sp.add_argument("--max-poset", type=int, default=4)
    sp.add_argument("--jobs", type=int, default=1)
    sp = add("dot", cmd_dot, "Graphviz text for a lattice, site or sheaf base")
    sp.add_argument("file")
    sp.add_argument("--sheaf", action="store_true")
    stalk(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is not None:
        os.environ["SHEAFDUAL_BUDGET"] = str(args.budget)
    try:
        code, report = args.func(args)
    except _Exit as exc:
        code, report = exc.code, exc.report
    except ParseError as exc:
        code, report = 2, {"error": "ParseError", "line": exc.line, "column": exc.column,
                           "message": exc.message}
    except (SheafDualError, ValueError, OSError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("line", "column"):
            if hasattr(exc, attr):
                report[attr] = getattr(exc, attr)
        code = 2
    if isinstance(report, str):
        sys.stdout.write(report)
    else:
        sys.stdout.write(dumps(report))
    if code == 2:
        sys.stderr.write(f"error: {report.get('message', report)}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
