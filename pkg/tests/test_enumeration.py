import pytest

from oracles import join_irreducible, lattice_count, poset_count
from sheafdual.enumeration import (admissible_operators, downset_lattice, generate_corpus,
                                   join_irreducibles, lattices_of_size, posets)
from sheafdual.errors import BudgetExceeded
from sheafdual.lattice import boolean_lattice, build_blo, is_distributive


@pytest.mark.parametrize("n, known", [(1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_poset_counts_match_known_values(n, known):
    assert len(posets(n)) == known


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_poset_counts_match_brute_force(n):
    assert len(posets(n)) == poset_count(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_lattice_counts_match_brute_force(n):
    assert len(lattices_of_size(n)) == lattice_count(n)


def test_corpus_small_sizes():
    one = generate_corpus(1)
    assert [L.size for L in one] == [2]
    two = generate_corpus(2)
    assert [L.size for L in two] == [3, 4]
    assert len(generate_corpus(3)) == 5


def test_corpus_is_distributive_and_deduplicated():
    corpus = generate_corpus(5)
    assert len(corpus) == 63
    assert all(is_distributive(L).holds for L in corpus)
    sizes = [L.size for L in corpus]
    assert sizes == sorted(sizes)


def test_corpus_bound():
    with pytest.raises(BudgetExceeded):
        generate_corpus(9)


def test_downset_lattice_of_antichain_is_boolean():
    L = downset_lattice(((True, False), (False, True)))
    assert L.size == 4
    assert L.labels == ("{}", "{0}", "{1}", "{0,1}")


def test_join_irreducibles_match_oracle():
    for L in generate_corpus(4, cumulative=True):
        assert join_irreducibles(L) == join_irreducible(L.leq)


def test_birkhoff_join_irreducibles_count_points():
    for n in (1, 2, 3, 4):
        for P in posets(n):
            assert len(join_irreducibles(downset_lattice(P))) == n


def test_admissible_operators_pass_validation():
    B = boolean_lattice(2)
    ops = admissible_operators(B)
    assert (0, 1, 2, 3) in ops and (0, 3, 2, 3) in ops
    for f in ops:
        build_blo(B, [f])
