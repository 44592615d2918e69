"""Built-in sanity suite and the reference hierarchy it runs on."""

from __future__ import annotations

import math
import random

from .access import (
    build_config,
    minimal_authorized_sets,
    validate_config,
    worst_case_unauthorized_sets,
)
from .crt import CongruenceSystem, crt_solve
from .fieldpoly import random_poly
from .hashing import hash_family
from .oracle import adversary_view, count_preimages, enumerate_candidates
from .scheme import reconstruct, split
from .schemas import SelftestCheck, SelftestResponse


def reference_config():
    """A small two-level hierarchy over F_2: one level-1 participant
    with a linear modulus, two level-2 participants with cubic moduli,
    thresholds (1, 2). The smallest shape over F_2 that exercises
    masking, the bulletin, and a nonempty worst-case coalition."""
    return build_config(
        p=2,
        d0=1,
        level_sizes=(1, 2),
        thresholds=(1, 2),
        degrees=(1, 3, 3),
        rng=random.Random(0),
    )


def run_selftest() -> SelftestResponse:
    checks = []

    def check(name, fn):
        try:
            detail = fn() or ""
            checks.append(SelftestCheck(name=name, ok=True, detail=detail))
        except Exception as err:  # noqa: BLE001 - report, never crash
            checks.append(SelftestCheck(name=name, ok=False, detail=str(err)))

    cfg = reference_config()
    family = hash_family(cfg.hash_family_id, cfg.field)

    def check_config():
        report = validate_config(cfg)
        assert report.ok, report.lines()
        return f"n={cfg.n}, degrees={list(cfg.degrees)}"

    def check_crt():
        rng = random.Random(1)
        for _ in range(50):
            planted = random_poly(cfg.field, sum(cfg.degrees), rng)
            items = [(m, planted % m) for m in cfg.moduli]
            assert crt_solve(CongruenceSystem(items)) == planted
        return "50 plant-and-recover rounds"

    def check_round_trip():
        rng = random.Random(2)
        sets = minimal_authorized_sets(cfg)
        for _ in range(20):
            secret = random_poly(cfg.field, cfg.d0, rng)
            result = split(secret, cfg, family, rng)
            assert reconstruct(result.bulletin, family, result.shares) == secret
            for ids in sets:
                shares = [result.shares[i - 1] for i in ids]
                assert reconstruct(result.bulletin, family, shares) == secret
        return f"20 secrets x {len(sets)} minimal sets"

    def check_counting():
        rng = random.Random(3)
        secret = random_poly(cfg.field, cfg.d0, rng)
        result = split(secret, cfg, family, rng)
        for coalition in worst_case_unauthorized_sets(cfg):
            view = adversary_view(result, family, coalition)
            candidates = enumerate_candidates(view)
            report = count_preimages(
                view, candidates, result.transcript.secret_parts[:-1]
            )
            assert report.counts_uniform and report.total_matches
            assert result.transcript.level_polys[-1] in candidates
            expected = cfg.d0 * math.log2(cfg.field.p)
            assert math.isclose(
                report.empirical_entropy_bits, expected, rel_tol=0, abs_tol=1e-12
            )
        return "counting identities hold on the reference hierarchy"

    check("config-valid", check_config)
    check("crt-plant-recover", check_crt)
    check("deal-reconstruct-round-trip", check_round_trip)
    check("counting-identities", check_counting)

    return SelftestResponse(ok=all(c.ok for c in checks), checks=checks)
