"""Hierarchy validation, authorization, and worst-case set tests."""

import random

import pytest

from polyshare.access import (
    COND_COPRIME,
    COND_DEGREE_BUDGET,
    COND_DEGREES_SORTED,
    COND_THRESHOLD_ORDER,
    COND_THRESHOLD_RANGE,
    HierarchyConfig,
    build_config,
    degree_slack,
    is_authorized,
    level_prefix,
    minimal_authorized_sets,
    validate_config,
    worst_case_unauthorized_sets,
)
from polyshare.errors import BudgetExceededError, IrreducibleExhaustedError
from polyshare.fieldpoly import Polynomial, PrimeModulus

F2 = PrimeModulus(2)
F3 = PrimeModulus(3)
F5 = PrimeModulus(5)


def P(field, *coeffs):
    return Polynomial(field, coeffs)


def cfg_reference():
    """p=2, two levels (1, 2), thresholds (1, 2), degrees (1, 3, 3)."""
    return HierarchyConfig(
        field=F2,
        d0=1,
        level_sizes=(1, 2),
        thresholds=(1, 2),
        moduli=(P(F2, 1, 1), P(F2, 1, 1, 0, 1), P(F2, 1, 0, 1, 1)),
    )


def cfg_flat(p=5, n=3, t=2, degree=1):
    field = PrimeModulus(p)
    moduli = tuple(P(field, c, *([0] * (degree - 1) + [1])) for c in range(1, n + 1))
    return HierarchyConfig(
        field=field,
        d0=degree,
        level_sizes=(n,),
        thresholds=(t,),
        moduli=moduli,
    )


# -- structural construction --------------------------------------------


def test_structural_errors():
    with pytest.raises(ValueError):
        HierarchyConfig(F2, 0, (1,), (1,), (P(F2, 1, 1),))
    with pytest.raises(ValueError):
        HierarchyConfig(F2, 1, (1, 1), (1,), (P(F2, 1, 1), P(F2, 1, 1, 1)))
    with pytest.raises(ValueError):
        HierarchyConfig(F2, 1, (2,), (1,), (P(F2, 1, 1),))
    with pytest.raises(ValueError):
        HierarchyConfig(F2, 1, (1,), (1,), (P(F3, 1, 1),))


def test_layout_helpers():
    cfg = cfg_reference()
    assert cfg.n == 3
    assert cfg.num_levels == 2
    assert cfg.level_bounds == (1, 3)
    assert [cfg.level_of(i) for i in (1, 2, 3)] == [1, 2, 2]
    assert cfg.degrees == (1, 3, 3)
    assert cfg.secret_modulus == P(F2, 0, 1)
    assert cfg.threshold_degree_sum(1) == 1
    assert cfg.threshold_degree_sum(2) == 4


# -- validation ---------------------------------------------------------


def test_reference_config_valid():
    assert validate_config(cfg_reference()).ok


def test_equal_degrees_always_pass_degree_budget():
    # With every degree equal to d0, the budget condition holds with
    # equality at every level.
    report = validate_config(cfg_flat(p=5, n=3, t=2, degree=1))
    assert report.ok


def test_degree_budget_violation_reported():
    # degrees (1, 1, 2) with thresholds (1, 2): the top level needs
    # d0 + d_3 <= d_1 + d_2, i.e. 3 <= 2, which fails.
    cfg = HierarchyConfig(
        field=F3,
        d0=1,
        level_sizes=(1, 2),
        thresholds=(1, 2),
        moduli=(P(F3, 1, 1), P(F3, 2, 1), P(F3, 1, 0, 1)),
    )
    report = validate_config(cfg)
    assert report.codes() == [COND_DEGREE_BUDGET]


def test_degree_budget_violation_p2_variant():
    # The same profile over F_2 additionally trips the coprimality
    # check (two linear moduli cannot avoid x and each other).
    cfg = HierarchyConfig(
        field=F2,
        d0=1,
        level_sizes=(1, 2),
        thresholds=(1, 2),
        moduli=(P(F2, 1, 1), P(F2, 1, 1), P(F2, 1, 1, 1)),
    )
    codes = validate_config(cfg).codes()
    assert COND_DEGREE_BUDGET in codes
    assert COND_COPRIME in codes


def test_threshold_monotonicity_violation():
    cfg = HierarchyConfig(
        field=F5,
        d0=1,
        level_sizes=(2, 2),
        thresholds=(2, 2),
        moduli=tuple(P(F5, c, 1) for c in (1, 2, 3, 4)),
    )
    assert COND_THRESHOLD_ORDER in validate_config(cfg).codes()


def test_threshold_feasibility_violation():
    cfg = HierarchyConfig(
        field=F5,
        d0=1,
        level_sizes=(1, 1),
        thresholds=(2, 3),
        moduli=(P(F5, 1, 1), P(F5, 2, 1)),
    )
    assert COND_THRESHOLD_RANGE in validate_config(cfg).codes()


def test_nonsorted_degrees_violation():
    cfg = HierarchyConfig(
        field=F2,
        d0=1,
        level_sizes=(2,),
        thresholds=(2,),
        moduli=(P(F2, 1, 1, 1), P(F2, 1, 1)),
    )
    assert COND_DEGREES_SORTED in validate_config(cfg).codes()


def test_x_power_shares_factor_with_x():
    # x as a participant modulus collides with the secret modulus x^d0.
    cfg = HierarchyConfig(
        field=F3,
        d0=1,
        level_sizes=(2,),
        thresholds=(2,),
        moduli=(P(F3, 0, 1), P(F3, 1, 1)),
    )
    assert COND_COPRIME in validate_config(cfg).codes()


# -- authorization ------------------------------------------------------


def test_is_authorized_examples():
    cfg = cfg_reference()
    assert is_authorized(cfg, {1, 2})
    assert not is_authorized(cfg, {2, 3})
    assert is_authorized(cfg, {1, 2, 3})


def test_is_authorized_range_check():
    with pytest.raises(ValueError):
        is_authorized(cfg_reference(), {0})
    with pytest.raises(ValueError):
        is_authorized(cfg_reference(), {4})


def test_level_prefix():
    cfg = HierarchyConfig(
        field=F5,
        d0=1,
        level_sizes=(2, 3),
        thresholds=(1, 3),
        moduli=tuple(P(F5, c, 1) for c in range(5)),
    )
    # note participant modulus x is invalid; irrelevant for prefixes
    assert level_prefix(cfg, {1, 3, 5}, 1) == {1}
    assert level_prefix(cfg, {1, 3, 5}, 2) == {1, 3, 5}
    with pytest.raises(ValueError):
        level_prefix(cfg, {1}, 3)


def test_full_set_always_authorized_for_valid_config():
    cfg = cfg_reference()
    assert is_authorized(cfg, set(range(1, cfg.n + 1)))


def test_monotonicity_of_authorization():
    rng = random.Random(11)
    cfg = cfg_reference()
    everyone = list(range(1, cfg.n + 1))
    for _ in range(10_000):
        a = {i for i in everyone if rng.random() < 0.5}
        extra = {i for i in everyone if rng.random() < 0.5}
        if is_authorized(cfg, a):
            assert is_authorized(cfg, a | extra)


# -- worst-case sets and degree slack -----------------------------------


def test_worst_case_sets_single_level():
    cfg = cfg_flat(p=5, n=3, t=2)
    assert sorted(worst_case_unauthorized_sets(cfg)) == [
        frozenset({1}),
        frozenset({2}),
        frozenset({3}),
    ]


def test_worst_case_sets_two_levels():
    assert worst_case_unauthorized_sets(cfg_reference()) == [frozenset({1})]


def test_worst_case_sets_unsatisfiable():
    # t_1 = 2 but the worst-case size is t_2 - 1 = 1: no set clears it.
    cfg = HierarchyConfig(
        field=F5,
        d0=1,
        level_sizes=(2, 1),
        thresholds=(2, 2),
        moduli=tuple(P(F5, c, 1) for c in (1, 2, 3)),
    )
    with_constraints = worst_case_unauthorized_sets(cfg)
    assert with_constraints == []


def test_worst_case_sets_budget():
    field = PrimeModulus(257)
    n = 13
    cfg = HierarchyConfig(
        field=field,
        d0=1,
        level_sizes=(n,),
        thresholds=(2,),
        moduli=tuple(Polynomial(field, (c, 1)) for c in range(1, n + 1)),
    )
    with pytest.raises(BudgetExceededError):
        worst_case_unauthorized_sets(cfg)


def test_worst_case_sets_fail_authorization():
    for cfg in (cfg_reference(), cfg_flat(p=5, n=4, t=3)):
        for b in worst_case_unauthorized_sets(cfg):
            assert not is_authorized(cfg, b)


def test_degree_slack_nonnegative_exhaustive():
    # For valid configs, every worst-case set leaves nonnegative slack.
    rng = random.Random(3)
    profiles = [
        (2, 1, (1, 2), (1, 2), (1, 3, 3)),
        (3, 1, (1, 2), (1, 2), (1, 2, 2)),
        (5, 1, (3,), (2,), (1, 1, 1)),
        (5, 2, (2, 2), (1, 3), (2, 2, 2, 2)),
        (5, 1, (2, 2), (2, 3), (1, 1, 1, 1)),
    ]
    for p, d0, sizes, ts, degrees in profiles:
        cfg = build_config(p, d0, sizes, ts, degrees, rng)
        assert validate_config(cfg).ok, (p, degrees)
        for b in worst_case_unauthorized_sets(cfg):
            assert degree_slack(cfg, b) >= 0


def test_minimal_authorized_sets_reference():
    cfg = cfg_reference()
    minimal = minimal_authorized_sets(cfg)
    assert frozenset({1, 2}) in minimal and frozenset({1, 3}) in minimal
    for a in minimal:
        assert is_authorized(cfg, a)
        for i in a:
            assert not is_authorized(cfg, a - {i})


# -- config generation --------------------------------------------------


def test_build_config_produces_valid_configs():
    rng = random.Random(17)
    cfg = build_config(2, 1, (1, 2), (1, 2), (1, 3, 3), rng)
    assert validate_config(cfg).ok
    assert cfg.degrees == (1, 3, 3)
    assert len(set(cfg.moduli)) == 3


def test_build_config_deterministic_under_seed():
    a = build_config(3, 1, (2,), (2,), (1, 2), random.Random(5))
    b = build_config(3, 1, (2,), (2,), (1, 2), random.Random(5))
    assert a.moduli == b.moduli


def test_build_config_exhaustion():
    # F_2 offers a single linear modulus coprime to x: a second one
    # cannot exist.
    with pytest.raises(IrreducibleExhaustedError):
        build_config(2, 1, (2,), (2,), (1, 1), random.Random(0))


def test_build_config_length_mismatch():
    with pytest.raises(ValueError):
        build_config(5, 1, (2,), (2,), (1,), random.Random(0))
