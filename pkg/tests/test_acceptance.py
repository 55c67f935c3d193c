"""Acceptance suite: one PASS/FAIL line per criterion with its runtime against the limit.

Run with ``pytest tests/test_acceptance.py -s`` or read the lines from the
verbose log; they are written straight to the terminal either way.
"""
import itertools
import json
import pathlib
import random
import time

import pytest

import sheafdual
from oracles import BooleanNames, classical, hf_universe, join_irreducible, mv_name_to_tuple
from sheafdual.cli import main
from sheafdual.enumeration import generate_corpus, lattices_upto, posets
from sheafdual.errors import TensorAxiomViolation
from sheafdual.formula import And, Tensor, default_suite, free_vars, parse_formula, uses_tensor
from sheafdual.io import emit, parse
from sheafdual.ideals import gratzer_schmidt_check, is_simple
from sheafdual.kripke import KJForcing, build_site, meet_tensor, persistence_check
from sheafdual.lattice import (BLO, NoWitnessUpTo, NotEpi, boolean_lattice, build_blo, chain,
                               enumerate_homomorphisms, homomorphism, is_distributive, is_epi_upto,
                               product)
from sheafdual.mv import (EMPTY, MVModel, MVName, atomic_value, boolean_as_mv,
                          check_generic_theorems, lukasiewicz_chain, ultrafilters, validate_mv)
from sheafdual.priestley import spectrum, duality_unit
from sheafdual.sheaf import build_sheaf, eta, regular_ideal_open_iso

DATA = pathlib.Path(sheafdual.__file__).parent / "data"
CORPUS_POSET_SIZE = 5


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(CORPUS_POSET_SIZE)


class Criterion:
    """Times a block and prints a single verdict line for it."""

    def __init__(self, request, label, limit):
        self.request, self.label, self.limit = request, label, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        return False

    def verdict(self, ok, detail=""):
        elapsed = time.perf_counter() - self.start
        in_time = elapsed < self.limit
        status = "PASS" if ok and in_time else "FAIL"
        line = f"{status} {self.label}: {detail} [{elapsed:.2f}s / limit {self.limit:g}s]"
        capman = self.request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line
        assert in_time, line


@pytest.fixture
def criterion(request):
    return lambda label, limit: Criterion(request, label, limit)


# ------------------------------------------------------------------ 1-3

def test_c1_priestley_unit_is_isomorphism(criterion, corpus):
    with criterion("C1 duality unit is an isomorphism on the corpus", 10) as c:
        bad = [k for k, L in enumerate(corpus) if not duality_unit(L).is_isomorphism()]
        c.verdict(not bad and len(corpus) > 0, f"{len(corpus)} lattices, failures={bad}")


def test_c2_spectrum_counts_join_irreducibles(criterion, corpus):
    with criterion("C2 |Spec L| = #join-irreducibles on the corpus", 5) as c:
        bad = [k for k, L in enumerate(corpus)
               if spectrum(L).n_points != len(join_irreducible(L.leq))]
        c.verdict(not bad, f"{len(corpus)} lattices, failures={bad}")


def test_c3_gratzer_schmidt_biconditional(criterion, corpus):
    with criterion("C3 ideals-congruences bijection iff conditions", 60) as c:
        extra = [L for L in lattices_upto(6) if not is_distributive(L).holds]
        hosts = list(corpus) + extra
        bad = [k for k, L in enumerate(hosts) if not gratzer_schmidt_check(L).theorem_holds]
        c.verdict(not bad and len(extra) > 0,
                  f"{len(corpus)} corpus + {len(extra)} non-distributive, failures={bad}")


# -------------------------------------------------------------------- 4

def simple_test_set():
    """Simple BLOs sharing a two-operator signature."""
    two = build_blo(chain(2), [[0, 1], [0, 1]])
    b4 = build_blo(boolean_lattice(2), [[0, 3, 2, 3], [0, 1, 3, 3]])
    c3 = build_blo(chain(3), [[0, 2, 2], [0, 0, 2]])
    return [two, b4, c3]


def test_c4a_boolean_algebras(criterion):
    with criterion("C4a eta is an isomorphism for Boolean algebras up to 16 elements", 30) as c:
        sizes = [k for k in range(0, 5) if not eta(BLO(boolean_lattice(k), ())).isomorphism]
        c.verdict(not sizes, f"atoms 0..4, failures={sizes}")


def test_c4b_products_of_simple_algebras(criterion):
    with criterion("C4b eta is an isomorphism for products of simple BLOs", 30) as c:
        factors = simple_test_set()
        assert all(is_simple(A) for A in factors)
        combos = [cmb for r in (2, 3) for cmb in itertools.combinations_with_replacement(
            range(len(factors)), r)]
        bad = [cmb for cmb in combos if not eta(product(*(factors[i] for i in cmb))).isomorphism]
        c.verdict(not bad, f"{len(combos)} products, failures={bad}")


def test_c4c_three_chain_counterexample(criterion):
    with criterion("C4c eta on C3 is injective, not surjective, |Gamma| = 6", 30) as c:
        d = eta(chain(3))
        ok = d.injective and not d.surjective and d.gamma_size == 6
        c.verdict(ok, f"injective={d.injective} surjective={d.surjective} |Gamma|={d.gamma_size}")


# -------------------------------------------------------------------- 5

def test_c5_regular_ideals_match_opens(criterion, corpus):
    with criterion("C5 regular ideals of Gamma correspond to opens", 60) as c:
        hosts = [L for L in corpus if L.size <= 12]
        bad = [k for k, L in enumerate(hosts) if not regular_ideal_open_iso(build_sheaf(L)).holds]
        c.verdict(not bad and hosts, f"{len(hosts)} hosts, failures={bad}")


# -------------------------------------------------------------------- 6

def boolean_agreement(L, atoms, rng, env_samples):
    model = MVModel(L, 2, "standard", max_domain=2)
    U = model.universe
    oracle = BooleanNames(atoms)
    tup = {x: mv_name_to_tuple(x) for x in U}
    ouni = [tup[x] for x in U]
    assert sorted(ouni) == sorted(oracle.universe(2, 2))
    triples = list(itertools.product(U, repeat=3))
    if env_samples is not None and len(triples) > env_samples:
        triples = rng.sample(triples, env_samples)
    mismatches, evaluated = 0, 0
    for phi in default_suite():
        for x, y, z in triples:
            env = {"x": x, "y": y, "z": z}
            oenv = {v: tup[a] for v, a in env.items()}
            evaluated += 1
            if model.value(phi, env) != oracle.value(phi, oenv, ouni):
                mismatches += 1
    generic = all(check_generic_theorems(L, U, G, model=model).holds for G in ultrafilters(L))
    return len(U), evaluated, mismatches, generic


def test_c6_boolean_forcing_oracle(criterion):
    with criterion("C6 Boolean-valued evaluation equals the oracle; generic theorems", 60) as c:
        rng = random.Random(2024)
        two = boolean_as_mv(boolean_lattice(1))
        b4 = boolean_as_mv(boolean_lattice(2))
        n2, e2, m2, g2 = boolean_agreement(two, 1, rng, None)
        n4, e4, m4, g4 = boolean_agreement(b4, 2, rng, 400)
        ok = m2 == 0 and m4 == 0 and g2 and g4 and n4 == 181
        c.verdict(ok, f"2: {n2} names {e2} evals {m2} mismatches; "
                      f"B4: {n4} names {e4} evals {m4} mismatches; generic={g2 and g4}")


# -------------------------------------------------------------------- 7

def test_c7_mv_findings(criterion):
    with criterion("C7 MV axioms for chains up to 7 elements; literal-mode reflexivity gap", 10) as c:
        failing = [n for n in range(1, 7) if not validate_mv(lukasiewicz_chain(n)).passed]
        L3 = lukasiewicz_chain(2)
        half = L3.index("1/2")
        x = MVName([(EMPTY, half)])
        literal = atomic_value("equality", x, x, L3, "paper-literal")
        standard = atomic_value("equality", x, x, L3, "standard")
        ok = not failing and literal == 0 and standard == L3.one
        c.verdict(ok, f"failing chains={failing}; ||x=x|| literal={L3.labels[literal]} "
                      f"standard={L3.labels[standard]}")


# -------------------------------------------------------------------- 8

def to_set(a):
    return frozenset(to_set(b) for _, b in a.entries)


def small_sites(max_points):
    for n in range(1, max_points + 1):
        for order in posets(n):
            try:
                yield build_site(order, meet_tensor(order))
            except TensorAxiomViolation:
                yield build_site(order)


def env_stream(engine, I, phi, limit):
    fv = sorted(free_vars(phi))
    pool = engine.universe[I]
    combos = itertools.product(pool, repeat=len(fv))
    return (dict(zip(fv, c)) for c in itertools.islice(combos, limit))


def test_c8a_one_point_site_is_classical(criterion):
    with criterion("C8a one-point-site forcing equals classical satisfaction", 60) as c:
        R = 2
        engine = KJForcing(build_site([[True]]), R)
        names = engine.universe[0]
        domain = [to_set(a) for a in names]
        assert sorted(domain, key=repr) == sorted(hf_universe(R + 1), key=repr)
        checked, bad = 0, 0
        for phi in default_suite():
            for env in env_stream(engine, 0, phi, None):
                checked += 1
                want = classical(phi, {v: to_set(a) for v, a in env.items()}, domain)
                bad += engine.forces(0, phi, env) != want
        c.verdict(bad == 0, f"{checked} checks, {bad} mismatches")


def test_c8b_persistence(criterion):
    with criterion("C8b persistence for the tensor-free fragment, sites up to 4 points", 60) as c:
        suite = [p for p in default_suite() if not uses_tensor(p)]
        sites, checks, violations = 0, 0, []
        for S in small_sites(4):
            rep = persistence_check(S, suite, R=2, env_pool=8)
            sites += 1
            checks += rep.checks
            violations += rep.violations
        c.verdict(not violations, f"{sites} sites, {checks} checks, violations={violations[:1]}")


@pytest.mark.xfail(strict=True, reason="tensor and conjunction differ on meet sites; "
                                       "counterexample on the 2-chain")
def test_c8c_tensor_matches_conjunction_on_meet_sites(criterion):
    with criterion("C8c tensor equals conjunction on meet sites", 60) as c:
        pairs = [(p.left, p.right) for p in default_suite() if isinstance(p, And)]
        mem = parse_formula("(mem x y)")
        pairs.append((mem, mem))
        checks, witness = 0, None
        for S in small_sites(3):
            if not S.monoidal or S.tensor != meet_tensor(S.leq):
                continue
            engine = KJForcing(S, 1)
            for left, right in pairs:
                for I in S.points:
                    for env in env_stream(engine, I, And(left, right), 200):
                        checks += 1
                        if (engine.forces(I, Tensor(left, right), env)
                                != engine.forces(I, And(left, right), env)):
                            witness = witness or (S.labels, I, env)
        c.verdict(witness is None, f"{checks} checks, first disagreement={witness}")


# -------------------------------------------------------------------- 9

def test_c9_epi_diagnostics(criterion):
    with criterion("C9 surjections give NoWitnessUpTo; 2-chain into C3 gives NotEpi", 10) as c:
        rng = random.Random(9)
        hosts = generate_corpus(3, cumulative=True)
        surj = [h for A in hosts for B in hosts for h in enumerate_homomorphisms(A, B)
                if h.is_surjective()]
        sample = rng.sample(surj, min(12, len(surj)))
        bad = [h for h in sample if not isinstance(is_epi_upto(h, 4), NoWitnessUpTo)]
        inc = homomorphism(chain(2), chain(3), (0, 2))
        res = is_epi_upto(inc, 4)
        found = isinstance(res, NotEpi) and res.algebra.size == 2
        c.verdict(not bad and found and sample,
                  f"{len(sample)} surjections, {len(bad)} refuted; inclusion witness size="
                  f"{res.algebra.size if isinstance(res, NotEpi) else None}")


# ------------------------------------------------------------------- 10

def test_c10_cli_determinism(criterion, capsys, monkeypatch):
    # main() writes --budget into the environment; setenv first so teardown restores it
    monkeypatch.setenv("SHEAFDUAL_BUDGET", "")
    monkeypatch.delenv("SHEAFDUAL_BUDGET")
    with criterion("C10 byte-identical round trips and corpus-run output", 5) as c:
        files = sorted(p for p in DATA.glob("*.json") if p.name != "broken_blo.json")
        diffs = [p.name for p in files if emit(parse(p.read_text())) != p.read_text()]
        outs = []
        for _ in range(2):
            code = main(["corpus-run"])
            outs.append((code, capsys.readouterr().out))
        same = outs[0] == outs[1] and outs[0][0] == 0 and json.loads(outs[0][1])["all_pass"]
        c.verdict(not diffs and same, f"{len(files)} files, differing={diffs}; corpus-run stable={same}")
