"""Dealing and reconstruction for the hierarchical scheme.

Dealing builds one blinded polynomial per level: the level's additive
secret part plus a random blinder shifted past the secret's degree
window. Participants below the top level hold fresh uniform shares;
top-level participants hold residues of the top polynomial. Public
bulletin entries let a share stand in for a congruence at any level at
or above its own without exposing the share: entry (level, i) is the
level polynomial minus the masked share, reduced mod the participant's
modulus.

Reconstruction re-derives each level polynomial by solving the
congruence system over the available participants and sums them modulo
x^d0.

``split`` and ``reconstruct`` are pure given an explicit rng; configs,
bulletins and shares are immutable and safe to share across threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .access import HierarchyConfig, is_authorized, level_prefix, validate_config
from .crt import CongruenceSystem, crt_solve
from .errors import (
    BulletinDomainError,
    InsufficientSharesError,
    InvalidConfigError,
    NotAuthorizedError,
    SecretTooLargeError,
)
from .fieldpoly import Polynomial, random_poly
from .hashing import HashFamily, mask_poly


@dataclass(frozen=True)
class ShareBundle:
    """One participant's private share."""

    participant: int
    level: int
    c: Polynomial


@dataclass(frozen=True)
class PublicBulletin:
    """Everything an adversary sees: the config and the published
    values keyed by (level, participant).

    The key domain is exactly (level, i) for level < m, i <= N_level,
    plus (m, i) for i <= N_{m-1}.
    """

    config: HierarchyConfig
    u: Mapping[tuple[int, int], Polynomial]

    def expected_keys(self) -> set[tuple[int, int]]:
        cfg = self.config
        m = cfg.num_levels
        keys = {
            (level, i)
            for level in range(1, m)
            for i in range(1, cfg.level_bounds[level - 1] + 1)
        }
        top_bound = cfg.level_bounds[m - 2] if m >= 2 else 0
        keys.update((m, i) for i in range(1, top_bound + 1))
        return keys


@dataclass(frozen=True)
class LevelPolynomial:
    level: int
    f: Polynomial


@dataclass(frozen=True)
class DealerTranscript:
    """Dealer-side intermediates (secret parts, blinders, level
    polynomials). Needed by the verification oracle and debug flows;
    never published in normal operation."""

    secret_parts: tuple[Polynomial, ...]
    blinders: tuple[Polynomial, ...]
    level_polys: tuple[Polynomial, ...]


@dataclass(frozen=True)
class DealResult:
    shares: tuple[ShareBundle, ...]
    bulletin: PublicBulletin
    transcript: DealerTranscript


def _require_valid(cfg: HierarchyConfig):
    report = validate_config(cfg)
    if not report.ok:
        raise InvalidConfigError(report)


def _require_family(cfg: HierarchyConfig, family: HashFamily):
    if family.field.p != cfg.field.p:
        raise ValueError("hash family is over the wrong field")
    if family.family_id != cfg.hash_family_id:
        raise ValueError(
            f"config expects hash family {cfg.hash_family_id!r}, "
            f"got {family.family_id!r}"
        )


def split(
    secret: Polynomial,
    cfg: HierarchyConfig,
    family: HashFamily,
    rng: random.Random,
) -> DealResult:
    """Deal a secret: returns shares, the public bulletin, and the
    dealer transcript."""
    _require_valid(cfg)
    _require_family(cfg, family)
    if secret.field.p != cfg.field.p:
        raise ValueError("secret is over the wrong field")
    if secret.degree >= cfg.d0:
        raise SecretTooLargeError(
            f"secret degree {secret.degree} must be < d0 = {cfg.d0}"
        )

    field = cfg.field
    m = cfg.num_levels

    # Additive parts: the first m-1 uniform, the last forced so the sum
    # is exactly the secret (the unique choice keeping each part uniform).
    parts = [random_poly(field, cfg.d0, rng) for _ in range(m - 1)]
    forced = secret
    for part in parts:
        forced = forced - part
    parts.append(forced)

    blinders = []
    level_polys = []
    for level in range(1, m + 1):
        blind_width = cfg.threshold_degree_sum(level) - cfg.d0
        blinder = (
            random_poly(field, blind_width, rng)
            if blind_width > 0
            else Polynomial.zero(field)
        )
        blinders.append(blinder)
        level_polys.append(parts[level - 1] + blinder.shift(cfg.d0))

    top_start = cfg.level_bounds[m - 2] if m >= 2 else 0
    shares = []
    for i in range(1, cfg.n + 1):
        if i <= top_start:
            c = random_poly(field, cfg.degree_of(i), rng)
        else:
            c = level_polys[m - 1] % cfg.modulus_of(i)
        shares.append(ShareBundle(participant=i, level=cfg.level_of(i), c=c))

    u = {}
    for level in range(1, m + 1):
        bound = cfg.level_bounds[level - 1] if level < m else top_start
        for i in range(1, bound + 1):
            modulus = cfg.modulus_of(i)
            masked = mask_poly(family, level, shares[i - 1].c, cfg.degree_of(i))
            u[(level, i)] = (level_polys[level - 1] - masked) % modulus

    return DealResult(
        shares=tuple(shares),
        bulletin=PublicBulletin(config=cfg, u=u),
        transcript=DealerTranscript(
            secret_parts=tuple(parts),
            blinders=tuple(blinders),
            level_polys=tuple(level_polys),
        ),
    )


def level_residue(
    bulletin: PublicBulletin,
    family: HashFamily,
    share: ShareBundle,
    level: int,
) -> Polynomial:
    """The congruence right-hand side this share contributes at the
    given level: masked share plus the published value, except that
    top-level participants contribute their raw share at the top level.
    """
    cfg = bulletin.config
    _require_family(cfg, family)
    m = cfg.num_levels
    if not 1 <= level <= m:
        raise ValueError(f"level out of range: {level}")
    i = share.participant
    if i > cfg.level_bounds[level - 1]:
        raise BulletinDomainError(
            f"participant {i} is above level {level} and cannot contribute"
        )
    top_start = cfg.level_bounds[m - 2] if m >= 2 else 0
    if level == m and i > top_start:
        return share.c
    try:
        published = bulletin.u[(level, i)]
    except KeyError:
        raise BulletinDomainError(
            f"bulletin has no entry for level {level}, participant {i}"
        ) from None
    masked = mask_poly(family, level, share.c, cfg.degree_of(i))
    return (masked + published) % cfg.modulus_of(i)


def recover_level(
    bulletin: PublicBulletin,
    family: HashFamily,
    shares: Iterable[ShareBundle],
    level: int,
) -> LevelPolynomial:
    """Solve the level's congruence system over every provided share at
    or below the level. Extra consistent congruences beyond the
    threshold cannot change the unique solution, so all are used."""
    cfg = bulletin.config
    shares = list(shares)
    _check_share_consistency(cfg, shares)
    if not 1 <= level <= cfg.num_levels:
        raise ValueError(f"level out of range: {level}")
    bound = cfg.level_bounds[level - 1]
    usable = sorted(
        (s for s in shares if s.participant <= bound),
        key=lambda s: s.participant,
    )
    need = cfg.thresholds[level - 1]
    if len(usable) < need:
        raise InsufficientSharesError(level, len(usable), need)
    items = [
        (cfg.modulus_of(s.participant), level_residue(bulletin, family, s, level))
        for s in usable
    ]
    return LevelPolynomial(level=level, f=crt_solve(CongruenceSystem(items)))


def reconstruct(
    bulletin: PublicBulletin,
    family: HashFamily,
    shares: Iterable[ShareBundle],
) -> Polynomial:
    """Recover the secret from an authorized set of shares.

    Refuses unauthorized sets up front: a below-threshold solve would
    produce an unrelated polynomial, never a partial secret.
    """
    cfg = bulletin.config
    shares = list(shares)
    _check_share_consistency(cfg, shares)
    ids = frozenset(s.participant for s in shares)
    for level, t in enumerate(cfg.thresholds, start=1):
        have = len(level_prefix(cfg, ids, level))
        if have < t:
            raise NotAuthorizedError(level, have, t)
    assert is_authorized(cfg, ids)
    total = Polynomial.zero(cfg.field)
    for level in range(1, cfg.num_levels + 1):
        total = total + recover_level(bulletin, family, shares, level).f
    return total % cfg.secret_modulus


def _check_share_consistency(cfg: HierarchyConfig, shares: Sequence[ShareBundle]):
    seen = set()
    for s in shares:
        if not 1 <= s.participant <= cfg.n:
            raise ValueError(f"participant id out of range: {s.participant}")
        if s.participant in seen:
            raise ValueError(f"duplicate share for participant {s.participant}")
        seen.add(s.participant)
        if s.level != cfg.level_of(s.participant):
            raise ValueError(
                f"share for participant {s.participant} claims level "
                f"{s.level}, config says {cfg.level_of(s.participant)}"
            )
        if s.c.field.p != cfg.field.p:
            raise ValueError("share polynomial over the wrong field")
        if s.c.degree >= cfg.degree_of(s.participant):
            raise ValueError(
                f"share degree {s.c.degree} too large for participant "
                f"{s.participant} (modulus degree {cfg.degree_of(s.participant)})"
            )
