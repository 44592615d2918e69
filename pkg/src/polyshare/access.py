"""Hierarchy layout, admissibility conditions, and authorization.

Participants carry 1-based global ids assigned level-contiguously:
level 1 owns ids 1..N_1, level 2 owns N_1+1..N_2, and so on. Share
moduli degrees are nondecreasing across that global order, so the
first t ids always carry the smallest t degrees.

Config construction only enforces structural shape; the mathematical
admissibility conditions are reported (not raised) by
``validate_config`` so an operator can fix every problem in one pass.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExceededError
from .fieldpoly import (
    Polynomial,
    PrimeModulus,
    poly_gcd,
    random_monic_irreducible,
)

ParticipantSet = frozenset

ENUMERATION_MAX_N = 12

# Violation codes used by validation reports.
COND_COPRIME = "(i)"
COND_DEGREES_SORTED = "(ii)"
COND_DEGREE_BUDGET = "(iii)"
COND_THRESHOLD_ORDER = "threshold-monotonicity"
COND_THRESHOLD_RANGE = "threshold-feasibility"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def lines(self) -> list[str]:
        if self.ok:
            return ["valid"]
        return [f"{v.code}: {v.message}" for v in self.violations]


@dataclass(frozen=True)
class HierarchyConfig:
    """Prime field, secret degree bound d0, level sizes, thresholds,
    and one modulus polynomial per participant."""

    field: PrimeModulus
    d0: int
    level_sizes: tuple[int, ...]
    thresholds: tuple[int, ...]
    moduli: tuple[Polynomial, ...]
    hash_family_id: str = "std-v1"

    def __post_init__(self):
        object.__setattr__(self, "level_sizes", tuple(self.level_sizes))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        object.__setattr__(self, "moduli", tuple(self.moduli))
        if self.d0 < 1:
            raise ValueError("d0 must be >= 1")
        if not self.level_sizes:
            raise ValueError("at least one level is required")
        if any(n < 1 for n in self.level_sizes):
            raise ValueError("level sizes must be positive")
        if len(self.thresholds) != len(self.level_sizes):
            raise ValueError("thresholds and level sizes must have equal length")
        if len(self.moduli) != sum(self.level_sizes):
            raise ValueError("need exactly one modulus per participant")
        for m in self.moduli:
            if m.field.p != self.field.p:
                raise ValueError("modulus over the wrong field")
            if m.degree < 1:
                raise ValueError("moduli must have degree >= 1")

    @property
    def n(self) -> int:
        return len(self.moduli)

    @property
    def num_levels(self) -> int:
        return len(self.level_sizes)

    @cached_property
    def level_bounds(self) -> tuple[int, ...]:
        """Cumulative sizes N_1..N_m."""
        return tuple(itertools.accumulate(self.level_sizes))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.degree for m in self.moduli)

    @cached_property
    def secret_modulus(self) -> Polynomial:
        """x**d0: the modulus the secret lives under."""
        return Polynomial.x_pow(self.field, self.d0)

    def level_of(self, participant: int) -> int:
        if not 1 <= participant <= self.n:
            raise ValueError(f"participant id out of range: {participant}")
        for level, bound in enumerate(self.level_bounds, start=1):
            if participant <= bound:
                return level
        raise AssertionError("unreachable")

    def modulus_of(self, participant: int) -> Polynomial:
        if not 1 <= participant <= self.n:
            raise ValueError(f"participant id out of range: {participant}")
        return self.moduli[participant - 1]

    def degree_of(self, participant: int) -> int:
        return self.modulus_of(participant).degree

    def threshold_degree_sum(self, level: int) -> int:
        """Sum of the first t_level modulus degrees: the degree budget
        of that level's polynomial."""
        t = self.thresholds[level - 1]
        return sum(self.degrees[:t])


def validate_profile(
    d0: int,
    level_sizes: Sequence[int],
    thresholds: Sequence[int],
    degrees: Sequence[int],
) -> ValidationReport:
    """The moduli-independent conditions: threshold ordering and
    feasibility, degree monotonicity, and the per-level degree budget.
    Lets a dealer reject a degree profile before generating moduli."""
    violations = []

    ts = tuple(thresholds)
    if ts[0] < 1 or any(a >= b for a, b in zip(ts, ts[1:])):
        violations.append(
            Violation(
                COND_THRESHOLD_ORDER,
                f"thresholds must satisfy 1 <= t_1 < ... < t_m: {list(ts)}",
            )
        )
    bounds = tuple(itertools.accumulate(level_sizes))
    for level, (t, bound) in enumerate(zip(ts, bounds), start=1):
        if t > bound:
            violations.append(
                Violation(
                    COND_THRESHOLD_RANGE,
                    f"t_{level} = {t} exceeds the {bound} participants "
                    f"in levels 1..{level}",
                )
            )

    degrees = tuple(degrees)
    if any(a > b for a, b in zip((d0,) + degrees, degrees)):
        violations.append(
            Violation(
                COND_DEGREES_SORTED,
                f"degrees must be nondecreasing starting from d0={d0}: "
                f"{list(degrees)}",
            )
        )

    n = len(degrees)
    for level, t in enumerate(ts, start=1):
        if not 1 <= t <= n:
            continue  # threshold problems already reported
        top = sum(degrees[n - t + 1 :]) if t >= 2 else 0
        low = sum(degrees[:t])
        if d0 + top > low:
            violations.append(
                Violation(
                    COND_DEGREE_BUDGET,
                    f"level {level}: d0 + sum of the {t - 1} largest degrees "
                    f"= {d0 + top} exceeds the sum of the {t} smallest "
                    f"= {low}",
                )
            )

    return ValidationReport(tuple(violations))


def validate_config(cfg: HierarchyConfig) -> ValidationReport:
    """Check the threshold sequence and the three admissibility
    conditions; every violated condition becomes a report entry."""
    violations = list(
        validate_profile(cfg.d0, cfg.level_sizes, cfg.thresholds, cfg.degrees).violations
    )

    all_moduli = (cfg.secret_modulus,) + cfg.moduli
    for i in range(len(all_moduli)):
        bad = False
        for j in range(i + 1, len(all_moduli)):
            if not poly_gcd(all_moduli[i], all_moduli[j]).is_one():
                bad = True
                violations.append(
                    Violation(
                        COND_COPRIME,
                        f"moduli {i} and {j} share a factor "
                        f"(0 denotes x^d0): {all_moduli[i].to_string()}, "
                        f"{all_moduli[j].to_string()}",
                    )
                )
        if bad:
            break

    return ValidationReport(tuple(violations))


def _check_ids(cfg: HierarchyConfig, ids: Iterable[int]) -> frozenset:
    ids = frozenset(ids)
    for i in ids:
        if not 1 <= i <= cfg.n:
            raise ValueError(f"participant id out of range: {i}")
    return ids


def level_prefix(cfg: HierarchyConfig, ids: Iterable[int], level: int) -> frozenset:
    """Members of ``ids`` belonging to levels 1..level."""
    if not 1 <= level <= cfg.num_levels:
        raise ValueError(f"level out of range: {level}")
    bound = cfg.level_bounds[level - 1]
    return frozenset(i for i in _check_ids(cfg, ids) if i <= bound)


def is_authorized(cfg: HierarchyConfig, ids: Iterable[int]) -> bool:
    """True iff the set meets the threshold at every level prefix."""
    ids = _check_ids(cfg, ids)
    return all(
        len(level_prefix(cfg, ids, level)) >= t
        for level, t in enumerate(cfg.thresholds, start=1)
    )


def worst_case_unauthorized_sets(cfg: HierarchyConfig) -> list[frozenset]:
    """All sets of size t_m - 1 that clear every lower-level threshold:
    the strongest coalitions that still cannot reconstruct."""
    if cfg.n > ENUMERATION_MAX_N:
        raise BudgetExceededError("participants", cfg.n, ENUMERATION_MAX_N)
    t_top = cfg.thresholds[-1]
    out = []
    for combo in itertools.combinations(range(1, cfg.n + 1), t_top - 1):
        ids = frozenset(combo)
        if all(
            len(level_prefix(cfg, ids, level)) >= t
            for level, t in enumerate(cfg.thresholds[:-1], start=1)
        ):
            out.append(ids)
    return out


def minimal_authorized_sets(cfg: HierarchyConfig) -> list[frozenset]:
    """Authorized sets none of whose proper subsets are authorized."""
    if cfg.n > ENUMERATION_MAX_N:
        raise BudgetExceededError("participants", cfg.n, ENUMERATION_MAX_N)
    out = []
    for size in range(cfg.n + 1):
        for combo in itertools.combinations(range(1, cfg.n + 1), size):
            ids = frozenset(combo)
            if is_authorized(cfg, ids) and all(
                not is_authorized(cfg, ids - {i}) for i in ids
            ):
                out.append(ids)
    return out


def degree_slack(cfg: HierarchyConfig, adversary: Iterable[int]) -> int:
    """Degree margin between the top-level polynomial and what an
    unauthorized set pins down; stays >= 0 for valid configs."""
    ids = _check_ids(cfg, adversary)
    return (
        cfg.threshold_degree_sum(cfg.num_levels)
        - sum(cfg.degree_of(i) for i in ids)
        - cfg.d0
    )


def build_config(
    p: int,
    d0: int,
    level_sizes: Sequence[int],
    thresholds: Sequence[int],
    degrees: Sequence[int],
    rng: random.Random,
    hash_family_id: str = "std-v1",
) -> HierarchyConfig:
    """Generate a config with fresh distinct monic irreducible moduli of
    the requested degrees (distinctness gives pairwise coprimality).

    The result still needs ``validate_config``: degree profiles that
    break the admissibility conditions are built as requested and
    reported there.
    """
    field = PrimeModulus(p)
    if len(degrees) != sum(level_sizes):
        raise ValueError("need exactly one degree per participant")
    chosen: list[Polynomial] = []
    for d in degrees:
        chosen.append(random_monic_irreducible(field, d, rng, frozenset(chosen)))
    return HierarchyConfig(
        field=field,
        d0=d0,
        level_sizes=tuple(level_sizes),
        thresholds=tuple(thresholds),
        moduli=tuple(chosen),
        hash_family_id=hash_family_id,
    )
