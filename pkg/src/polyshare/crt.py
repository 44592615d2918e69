"""Systems of polynomial congruences with pairwise-coprime moduli.

Validation happens at construction (fail fast: the dealing code builds
systems from trusted moduli, but file-driven callers may not), and the
solver returns the unique solution of degree below the product modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import EmptySystemError, NotPairwiseCoprimeError
from .fieldpoly import Polynomial, inv_mod, poly_gcd


def check_pairwise_coprime(moduli: Sequence[Polynomial]) -> bool:
    """True iff every pair of moduli has monic gcd 1.

    All moduli must be nonconstant and over the same field.
    """
    for m in moduli:
        if m.degree < 1:
            raise ValueError(f"modulus must have degree >= 1: {m!r}")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if not poly_gcd(moduli[i], moduli[j]).is_one():
                return False
    return True


@dataclass(frozen=True)
class CongruenceSystem:
    """y = residue_i (mod modulus_i): residues are stored reduced and
    moduli are checked pairwise coprime up front."""

    items: tuple[tuple[Polynomial, Polynomial], ...]

    def __init__(self, items: Iterable[tuple[Polynomial, Polynomial]]):
        reduced = []
        for modulus, residue in items:
            if modulus.degree < 1:
                raise ValueError(f"modulus must have degree >= 1: {modulus!r}")
            modulus._check_field(residue)
            reduced.append((modulus, residue % modulus))
        if not reduced:
            raise EmptySystemError("congruence system has no items")
        if not check_pairwise_coprime([m for m, _ in reduced]):
            raise NotPairwiseCoprimeError("moduli are not pairwise coprime")
        object.__setattr__(self, "items", tuple(reduced))

    @property
    def moduli(self) -> tuple[Polynomial, ...]:
        return tuple(m for m, _ in self.items)


@lru_cache(maxsize=4096)
def _crt_basis(moduli: tuple[Polynomial, ...]) -> tuple[Polynomial, tuple[Polynomial, ...]]:
    # e_i = lambda_i * M_i mod M is 1 mod m_i and 0 mod every other
    # modulus, so solutions assemble as sum(e_i * g_i) mod M.
    product = moduli[0]
    for m in moduli[1:]:
        product = product * m
    basis = []
    for m in moduli:
        partial, rem = divmod(product, m)
        assert rem.is_zero()
        lam = inv_mod(partial % m, m)
        basis.append(lam * partial % product)
    return product, tuple(basis)


def crt_solve(system: CongruenceSystem) -> Polynomial:
    """The unique y with deg(y) < deg(prod m_i) and y = g_i (mod m_i)."""
    product, basis = _crt_basis(system.moduli)
    field = product.field
    y = Polynomial.zero(field)
    for e, (_, residue) in zip(basis, system.items):
        y = y + e * residue
    return y % product
