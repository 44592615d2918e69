"""CRT solver tests, including brute-force oracle equivalence."""

import itertools
import random

import pytest

from polyshare.crt import CongruenceSystem, check_pairwise_coprime, crt_solve
from polyshare.errors import EmptySystemError, NotPairwiseCoprimeError
from polyshare.fieldpoly import Polynomial, PrimeModulus, iter_polys, random_poly

F2 = PrimeModulus(2)
F3 = PrimeModulus(3)


def P(field, *coeffs):
    return Polynomial(field, coeffs)


def brute_force_solutions(field, items):
    """All y with deg(y) < sum(deg m_i) satisfying every congruence,
    found by scanning the entire candidate space."""
    total = sum(m.degree for m, _ in items)
    return [
        y
        for y in iter_polys(field, total)
        if all(y % m == g for m, g in items)
    ]


def test_two_congruences_mod2():
    system = CongruenceSystem([(P(F2, 0, 1), P(F2, 1)), (P(F2, 1, 1), P(F2))])
    y = crt_solve(system)
    assert y == P(F2, 1, 1)
    # confirmed against the full scan of the 4 candidates
    assert brute_force_solutions(F2, system.items) == [y]


def test_single_item_returns_residue():
    g = P(F3, 2, 1)
    system = CongruenceSystem([(P(F3, 1, 0, 1), g)])
    assert crt_solve(system) == g


def test_residues_reduced_on_construction():
    big = P(F2, 1, 1, 1, 1)
    system = CongruenceSystem([(P(F2, 1, 1), big)])
    m, g = system.items[0]
    assert g == big % m
    assert g.degree < m.degree


def test_empty_system_rejected():
    with pytest.raises(EmptySystemError):
        CongruenceSystem([])


def test_non_coprime_rejected():
    with pytest.raises(NotPairwiseCoprimeError):
        CongruenceSystem([(P(F2, 1, 1), P(F2)), (P(F2, 1, 0, 1), P(F2, 1))])


def test_check_pairwise_coprime():
    assert check_pairwise_coprime([P(F2, 0, 1), P(F2, 1, 1), P(F2, 1, 1, 1)])
    assert not check_pairwise_coprime([P(F2, 1, 1), P(F2, 1, 0, 1)])
    assert check_pairwise_coprime([P(F2, 1, 1, 1)])
    with pytest.raises(ValueError):
        check_pairwise_coprime([P(F2, 1)])


def test_permutation_invariance():
    rng = random.Random(5)
    moduli = [P(F3, 1, 1), P(F3, 2, 1), P(F3, 1, 0, 1)]
    residues = [random_poly(F3, m.degree, rng) for m in moduli]
    items = list(zip(moduli, residues))
    base = crt_solve(CongruenceSystem(items))
    for perm in itertools.permutations(items):
        assert crt_solve(CongruenceSystem(perm)) == base


def _coprime_subsets(field, max_total_degree, max_poly_degree):
    """All pairwise-coprime sets of monic polynomials (any factorization)
    within the given total-degree budget."""
    monics = []
    for d in range(1, max_poly_degree + 1):
        for coeffs in itertools.product(range(field.p), repeat=d):
            monics.append(Polynomial(field, coeffs + (1,)))
    found = []

    def extend(start, chosen, total):
        if chosen:
            found.append(tuple(chosen))
        for idx in range(start, len(monics)):
            m = monics[idx]
            if total + m.degree > max_total_degree:
                continue
            if all(check_pairwise_coprime([m, c]) for c in chosen):
                chosen.append(m)
                extend(idx + 1, chosen, total + m.degree)
                chosen.pop()

    extend(0, [], 0)
    return found


@pytest.mark.parametrize("field,max_total", [(F2, 5), (F3, 4)])
def test_oracle_equivalence_exhaustive_small(field, max_total):
    # Every pairwise-coprime moduli set within the degree budget, every
    # residue combination: the solver must match the unique brute-force
    # solution. One scan per moduli set classifies all residue vectors.
    for moduli in _coprime_subsets(field, max_total, max_total):
        total = sum(m.degree for m in moduli)
        by_residues = {}
        for y in iter_polys(field, total):
            key = tuple((y % m).coeffs for m in moduli)
            assert key not in by_residues, "brute force found a collision"
            by_residues[key] = y
        for key, y in by_residues.items():
            items = [
                (m, Polynomial(field, coeffs))
                for m, coeffs in zip(moduli, key)
            ]
            assert crt_solve(CongruenceSystem(items)) == y


@pytest.mark.parametrize(
    "field,max_total,samples", [(F2, 8, 150), (F3, 5, 150)]
)
def test_oracle_equivalence_sampled_to_bound(field, max_total, samples):
    # Random systems at the full degree bounds, checked against the
    # complete candidate scan.
    rng = random.Random(field.p * 1000 + max_total)
    sets = _coprime_subsets(field, max_total, max_total)
    for _ in range(samples):
        moduli = sets[rng.randrange(len(sets))]
        items = [(m, random_poly(field, m.degree, rng)) for m in moduli]
        solutions = brute_force_solutions(field, items)
        assert len(solutions) == 1
        assert crt_solve(CongruenceSystem(items)) == solutions[0]


def test_plant_and_recover_randomized():
    # 10^3 cases: pick a solution first, read off its residues, solve,
    # and require the original back.
    rng = random.Random(99)
    for field in (F2, F3):
        sets = [s for s in _coprime_subsets(field, 6, 3) if len(s) >= 2]
        for _ in range(500):
            moduli = sets[rng.randrange(len(sets))]
            total = sum(m.degree for m in moduli)
            planted = random_poly(field, total, rng)
            items = [(m, planted % m) for m in moduli]
            assert crt_solve(CongruenceSystem(items)) == planted


def test_residue_consistency_and_degree_bound():
    rng = random.Random(123)
    moduli = [P(F3, 1, 1), P(F3, 2, 1), P(F3, 1, 0, 1)]
    for _ in range(100):
        items = [(m, random_poly(F3, m.degree, rng)) for m in moduli]
        y = crt_solve(CongruenceSystem(items))
        assert y.degree < sum(m.degree for m in moduli)
        for m, g in items:
            assert y % m == g
