"""Level-indexed one-way functions and coefficient-wise share masking.

Each level gets its own function by domain separation inside one
digest (a level tag in the input), producing floor(log2 p) output bits
so every output is a valid field element. When p is not a power of
two the outputs cover only [0, 2^floor(log2 p)) and are therefore not
uniform over F_p; that range is kept deliberately and noted here.

The "test-identity" family passes coefficients through unchanged. It
exists for the verification oracle and debugging only - it is
trivially invertible and must never be used to protect anything.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

from .errors import UnknownHashFamilyError
from .fieldpoly import Polynomial, PrimeModulus

STD_FAMILY = "std-v1"
TEST_FAMILY = "test-identity"

FAMILY_IDS = (STD_FAMILY, TEST_FAMILY)


@dataclass(frozen=True)
class HashFamily:
    """A named family of per-level functions on field elements."""

    family_id: str
    field: PrimeModulus

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise UnknownHashFamilyError(
                f"unknown hash family {self.family_id!r}; "
                f"known: {', '.join(FAMILY_IDS)}"
            )

    @property
    def out_bits(self) -> int:
        """floor(log2 p): the fixed output width in bits."""
        return self.field.p.bit_length() - 1


def hash_family(family_id: str, field: PrimeModulus) -> HashFamily:
    return HashFamily(family_id, field)


@lru_cache(maxsize=1 << 16)
def h(family: HashFamily, level: int, value: int) -> int:
    """The level's one-way function on a single field element.

    For the standard family this is the top ``out_bits`` bits of
    SHA-256 over (family id, level tag, fixed-width value), giving a
    bit-exact result on every platform.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1: {level}")
    if not 0 <= value < family.field.p:
        raise ValueError(f"input {value} outside [0, {family.field.p})")
    if family.family_id == TEST_FAMILY:
        return value
    material = (
        family.family_id.encode()
        + b"\x1f"
        + level.to_bytes(4, "big")
        + value.to_bytes(8, "big")
    )
    digest = hashlib.sha256(material).digest()
    return int.from_bytes(digest, "big") >> (256 - family.out_bits)


def mask_poly(family: HashFamily, level: int, c: Polynomial, width: int) -> Polynomial:
    """Apply the level's function to each of the first ``width``
    coefficients of ``c`` (missing coefficients count as 0)."""
    if c.degree >= width:
        raise ValueError(f"degree {c.degree} does not fit mask width {width}")
    masked = [h(family, level, c.coeff(j)) for j in range(width)]
    return Polynomial(family.field, masked)
