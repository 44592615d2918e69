"""Exact arithmetic for F_p and the polynomial ring F_p[x].

Polynomials are dense coefficient tuples, lowest degree first, every
coefficient reduced into [0, p). Canonical form has no trailing zero
coefficients; the zero polynomial is the empty tuple and reports
degree -1 (standing in for "minus infinity" in degree comparisons).

All values are immutable and all operations are pure functions of
their inputs (randomness is an explicit ``random.Random``), so values
can be shared freely between threads.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import FieldMismatchError, IrreducibleExhaustedError, NotCoprimeError

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10^24,
# which comfortably covers the supported 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_PRIME = 2**64


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, slots=True)
class PrimeModulus:
    """A prime p < 2**64 defining the coefficient field F_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME:
            raise ValueError(f"prime must be an integer in [2, 2^64): {self.p!r}")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __repr__(self):
        return f"PrimeModulus({self.p})"


class Polynomial:
    """An element of F_p[x] in canonical (trailing-zero-free) form."""

    __slots__ = ("coeffs", "field")

    coeffs: tuple[int, ...]
    field: PrimeModulus

    def __init__(self, field: PrimeModulus, coeffs=()):
        p = field.p
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, field: PrimeModulus) -> Polynomial:
        return cls(field)

    @classmethod
    def one(cls, field: PrimeModulus) -> Polynomial:
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: PrimeModulus, c: int) -> Polynomial:
        return cls(field, (c,))

    @classmethod
    def x_pow(cls, field: PrimeModulus, k: int) -> Polynomial:
        """The monomial x**k."""
        if k < 0:
            raise ValueError("negative exponent")
        return cls(field, (0,) * k + (1,))

    @classmethod
    def parse(cls, field: PrimeModulus, text: str) -> Polynomial:
        """Parse the canonical text encoding: decimal coefficients,
        lowest degree first, comma-separated ("1,0,1" is x^2 + 1).

        Trailing zero coefficients are accepted and stripped.
        """
        parts = [t.strip() for t in text.split(",")]
        if not parts or any(not t for t in parts):
            raise ValueError(f"malformed polynomial string: {text!r}")
        try:
            cs = [int(t) for t in parts]
        except ValueError:
            raise ValueError(f"malformed polynomial string: {text!r}") from None
        if any(not 0 <= c < field.p for c in cs):
            raise ValueError(f"coefficient out of range [0, {field.p}): {text!r}")
        return cls(field, cs)

    # -- basic queries -----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def leading_coeff(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, j: int) -> int:
        """The coefficient of x**j (0 beyond the stored length)."""
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def to_string(self) -> str:
        """Canonical text encoding; the zero polynomial prints as "0"."""
        if not self.coeffs:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    def padded_string(self, width: int) -> str:
        """Text encoding padded with explicit zeros to ``width`` coefficients."""
        if len(self.coeffs) > width:
            raise ValueError(f"degree {self.degree} does not fit width {width}")
        cs = self.coeffs + (0,) * (width - len(self.coeffs))
        return ",".join(str(c) for c in cs)

    # -- ring operations ---------------------------------------------

    def _check_field(self, other: Polynomial):
        if self.field.p != other.field.p:
            raise FieldMismatchError(
                f"mixed moduli: {self.field.p} vs {other.field.p}"
            )

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check_field(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        p = self.field.p
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Polynomial(self.field, out)

    def __sub__(self, other: Polynomial) -> Polynomial:
        self._check_field(other)
        p = self.field.p
        n = max(len(self.coeffs), len(other.coeffs))
        out = [(self.coeff(i) - other.coeff(i)) % p for i in range(n)]
        return Polynomial(self.field, out)

    def __neg__(self) -> Polynomial:
        p = self.field.p
        return Polynomial(self.field, [(-c) % p for c in self.coeffs])

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check_field(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial(self.field)
        p = self.field.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
        return Polynomial(self.field, out)

    def scale(self, c: int) -> Polynomial:
        p = self.field.p
        c %= p
        return Polynomial(self.field, [a * c % p for a in self.coeffs])

    def shift(self, k: int) -> Polynomial:
        """Multiply by x**k."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs:
            return self
        return Polynomial(self.field, (0,) * k + self.coeffs)

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        self._check_field(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = self.field.p
        db = other.degree
        if self.degree < db:
            return Polynomial(self.field), self
        inv_lead = pow(other.leading_coeff, p - 2, p)
        rem = list(self.coeffs)
        b = other.coeffs
        q = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            factor = c * inv_lead % p
            q[i - db] = factor
            for j in range(db + 1):
                rem[i - db + j] = (rem[i - db + j] - factor * b[j]) % p
        return Polynomial(self.field, q), Polynomial(self.field, rem)

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        """Scale so the leading coefficient is 1."""
        if self.is_zero():
            raise ValueError("zero polynomial cannot be made monic")
        p = self.field.p
        return self.scale(pow(self.leading_coeff, p - 2, p))

    # -- dunder plumbing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field.p == other.field.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Polynomial(p={self.field.p}, '{self.to_string()}')"


def ext_gcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Extended Euclid: returns (g, u, v) with g = u*a + v*b and g the
    monic gcd of a and b."""
    a._check_field(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    field = a.field
    r0, r1 = a, b
    u0, u1 = Polynomial.one(field), Polynomial.zero(field)
    v0, v1 = Polynomial.zero(field), Polynomial.one(field)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    inv_lead = pow(r0.leading_coeff, field.p - 2, field.p)
    return r0.scale(inv_lead), u0.scale(inv_lead), v0.scale(inv_lead)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check_field(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def inv_mod(a: Polynomial, m: Polynomial) -> Polynomial:
    """Inverse of a modulo m; requires gcd(a mod m, m) = 1 and deg(m) >= 1."""
    a._check_field(m)
    if m.degree < 1:
        raise ValueError(f"modulus must have degree >= 1: {m!r}")
    a = a % m
    if a.is_zero():
        raise NotCoprimeError(f"{a!r} is not invertible mod {m!r}")
    g, u, _ = ext_gcd(a, m)
    if not g.is_one():
        raise NotCoprimeError(f"gcd is {g!r}, not a unit")
    return u % m


def pow_mod(a: Polynomial, e: int, m: Polynomial) -> Polynomial:
    """a**e modulo m by square-and-multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    result = Polynomial.one(a.field)
    base = a % m
    while e:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


def _is_irreducible_gcd_powers(f: Polynomial) -> bool:
    # f of degree d is reducible iff it has an irreducible factor of
    # degree k <= d/2; x^(p^k) - x is the product of all monic
    # irreducibles of degree dividing k, so a nontrivial gcd with it
    # detects exactly those factors.
    field = f.field
    d = f.degree
    x = Polynomial.x_pow(field, 1)
    h = x % f
    for _ in range(d // 2):
        h = pow_mod(h, field.p, f)
        if not poly_gcd(f, h - x).is_one():
            return False
    return True


def _is_irreducible_trial_division(f: Polynomial) -> bool:
    field = f.field
    d = f.degree
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(field.p), repeat=k):
            divisor = Polynomial(field, low + (1,))
            if (f % divisor).is_zero():
                return False
    return True


def is_irreducible(f: Polynomial) -> bool:
    """True iff f has no nontrivial factor. Requires deg(f) >= 1."""
    d = f.degree
    if d < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    if d == 1:
        return True
    # The trial-division path is cheaper when the divisor space is tiny.
    if f.field.p ** (d // 2) <= 256:
        return _is_irreducible_trial_division(f)
    return _is_irreducible_gcd_powers(f)


def _mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def count_monic_irreducibles(p: int, degree: int) -> int:
    """Number of monic irreducible polynomials of a given degree over F_p
    (Gauss's necklace-counting formula)."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for e in range(1, degree + 1):
        if degree % e == 0:
            total += _mobius(e) * p ** (degree // e)
    return total // degree


def random_poly(field: PrimeModulus, width: int, rng: random.Random) -> Polynomial:
    """Uniform polynomial with ``width`` independent coefficients,
    i.e. uniform over all polynomials of degree < width."""
    if width < 1:
        raise ValueError("width must be >= 1")
    return Polynomial(field, [rng.randrange(field.p) for _ in range(width)])


def random_monic_irreducible(
    field: PrimeModulus,
    degree: int,
    rng: random.Random,
    exclusions: frozenset[Polynomial] | set[Polynomial] = frozenset(),
) -> Polynomial:
    """Uniform monic irreducible of the given degree, never equal to x
    (so it stays coprime to any power of x) and outside ``exclusions``."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    banned = {q for q in exclusions if q.degree == degree and q.is_monic()}
    x = Polynomial.x_pow(field, 1)
    if degree == 1:
        banned.add(x)
    banned = {q for q in banned if is_irreducible(q)}
    available = count_monic_irreducibles(field.p, degree) - len(banned)
    if available <= 0:
        raise IrreducibleExhaustedError(
            f"no monic irreducible of degree {degree} over F_{field.p} remains "
            f"({len(banned)} excluded)"
        )
    while True:
        low = [rng.randrange(field.p) for _ in range(degree)]
        cand = Polynomial(field, low + [1])
        if cand == x or cand in banned:
            continue
        if is_irreducible(cand):
            return cand


def iter_polys(field: PrimeModulus, width: int):
    """All p**width polynomials of degree < width, in a fixed order."""
    if width < 0:
        raise ValueError("width must be >= 0")
    for coeffs in itertools.product(range(field.p), repeat=width):
        yield Polynomial(field, coeffs)
