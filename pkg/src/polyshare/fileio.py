"""Bit-exact JSON file formats for configs, shares, and bulletins.

All polynomial values use the decimal comma-separated coefficient
encoding, lowest degree first. Share and bulletin values are padded
with explicit zero coefficients to the width of the owning
participant's modulus, so a serialized share always carries exactly
d_i field coefficients; parsing strips the padding back to canonical
form. Files are JSON with sorted keys, two-space indent, and a
trailing newline; the config digest is SHA-256 over the compact
(separator-free) canonical config JSON and binds shares to bulletins.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .access import HierarchyConfig
from .errors import BindingMismatchError, FormatError
from .fieldpoly import Polynomial, PrimeModulus
from .hashing import FAMILY_IDS
from .scheme import PublicBulletin, ShareBundle


def dumps_document(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads_document(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"not valid JSON: {err.msg}", offset=err.pos) from None
    if not isinstance(obj, dict):
        raise FormatError("top-level value must be an object")
    return obj


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise FormatError(f"{where}: key {key!r} must be an integer")
    if not isinstance(value, kind):
        raise FormatError(f"{where}: key {key!r} has wrong type")
    return value


# -- config --------------------------------------------------------------


def config_to_dict(cfg: HierarchyConfig) -> dict[str, Any]:
    return {
        "p": cfg.field.p,
        "d0": cfg.d0,
        "levels": list(cfg.level_sizes),
        "thresholds": list(cfg.thresholds),
        "moduli": [m.to_string() for m in cfg.moduli],
        "hash_family": cfg.hash_family_id,
    }


def config_from_dict(obj: dict) -> HierarchyConfig:
    where = "config"
    p = _require(obj, "p", int, where)
    d0 = _require(obj, "d0", int, where)
    levels = _require(obj, "levels", list, where)
    thresholds = _require(obj, "thresholds", list, where)
    moduli = _require(obj, "moduli", list, where)
    family = _require(obj, "hash_family", str, where)
    if family not in FAMILY_IDS:
        raise FormatError(f"{where}: unknown hash family {family!r}")
    try:
        field = PrimeModulus(p)
    except ValueError as err:
        raise FormatError(f"{where}: {err}") from None
    try:
        parsed = tuple(Polynomial.parse(field, s) for s in moduli)
    except (TypeError, ValueError) as err:
        raise FormatError(f"{where}: bad modulus: {err}") from None
    try:
        return HierarchyConfig(
            field=field,
            d0=d0,
            level_sizes=tuple(levels),
            thresholds=tuple(thresholds),
            moduli=parsed,
            hash_family_id=family,
        )
    except (TypeError, ValueError) as err:
        raise FormatError(f"{where}: {err}") from None


def config_digest(cfg: HierarchyConfig) -> str:
    canonical = json.dumps(
        config_to_dict(cfg), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode()).hexdigest()


# -- share ---------------------------------------------------------------


def share_to_dict(share: ShareBundle, cfg: HierarchyConfig) -> dict[str, Any]:
    width = cfg.degree_of(share.participant)
    return {
        "participant": share.participant,
        "level": share.level,
        "c": share.c.padded_string(width),
        "config_digest": config_digest(cfg),
    }


def share_from_dict(obj: dict, cfg: HierarchyConfig, digest: str) -> ShareBundle:
    where = "share"
    participant = _require(obj, "participant", int, where)
    level = _require(obj, "level", int, where)
    c_text = _require(obj, "c", str, where)
    bound = _require(obj, "config_digest", str, where)
    if bound != digest:
        raise BindingMismatchError(
            f"share for participant {participant} was issued under a "
            f"different config (digest {bound[:12]}..., expected {digest[:12]}...)"
        )
    if not 1 <= participant <= cfg.n:
        raise FormatError(f"{where}: participant {participant} out of range")
    try:
        c = Polynomial.parse(cfg.field, c_text)
    except ValueError as err:
        raise FormatError(f"{where}: {err}") from None
    if c.degree >= cfg.degree_of(participant):
        raise FormatError(
            f"{where}: polynomial degree {c.degree} too large for "
            f"participant {participant}"
        )
    if level != cfg.level_of(participant):
        raise FormatError(
            f"{where}: level {level} does not match the config layout"
        )
    return ShareBundle(participant=participant, level=level, c=c)


# -- bulletin ------------------------------------------------------------


def bulletin_to_dict(bulletin: PublicBulletin) -> dict[str, Any]:
    cfg = bulletin.config
    entries = [
        {
            "level": level,
            "participant": i,
            "value": value.padded_string(cfg.degree_of(i)),
        }
        for (level, i), value in sorted(bulletin.u.items())
    ]
    return {
        "config": config_to_dict(cfg),
        "hash_family": cfg.hash_family_id,
        "u": entries,
    }


def bulletin_from_dict(obj: dict) -> PublicBulletin:
    where = "bulletin"
    cfg = config_from_dict(_require(obj, "config", dict, where))
    family = _require(obj, "hash_family", str, where)
    if family != cfg.hash_family_id:
        raise FormatError(
            f"{where}: hash_family {family!r} disagrees with the config's "
            f"{cfg.hash_family_id!r}"
        )
    entries = _require(obj, "u", list, where)
    u = {}
    for entry in entries:
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: u entries must be objects")
        level = _require(entry, "level", int, where)
        i = _require(entry, "participant", int, where)
        text = _require(entry, "value", str, where)
        if not 1 <= i <= cfg.n:
            raise FormatError(f"{where}: participant {i} out of range")
        try:
            value = Polynomial.parse(cfg.field, text)
        except ValueError as err:
            raise FormatError(f"{where}: {err}") from None
        if value.degree >= cfg.degree_of(i):
            raise FormatError(
                f"{where}: value for ({level}, {i}) exceeds the modulus degree"
            )
        if (level, i) in u:
            raise FormatError(f"{where}: duplicate entry for ({level}, {i})")
        u[(level, i)] = value
    bulletin = PublicBulletin(config=cfg, u=u)
    expected = bulletin.expected_keys()
    if set(u) != expected:
        missing = sorted(expected - set(u))
        extra = sorted(set(u) - expected)
        raise FormatError(
            f"{where}: key domain mismatch (missing {missing}, extra {extra})"
        )
    return bulletin


def detect_kind(obj: dict) -> str:
    """Classify a parsed document by its keys."""
    if {"p", "d0", "levels", "moduli"} <= set(obj):
        return "config"
    if {"participant", "c", "config_digest"} <= set(obj):
        return "share"
    if {"config", "u"} <= set(obj):
        return "bulletin"
    if {"theta", "candidate_count"} <= set(obj) or "views" in obj:
        return "report"
    raise FormatError("unrecognized document type")
