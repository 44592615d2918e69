"""Exception types shared across the package.

The service layer maps these onto structured error codes (and the CLI
onto exit codes), so new failure modes should get a class here rather
than a bare ValueError when callers need to tell them apart.
"""


class PolyshareError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatchError(PolyshareError):
    """Operands live over different prime fields."""


class NotCoprimeError(PolyshareError):
    """A modular inverse was requested for a non-coprime pair."""


class IrreducibleExhaustedError(PolyshareError):
    """No irreducible polynomial of the requested degree remains."""


class EmptySystemError(PolyshareError):
    """A congruence system with no items was constructed."""


class NotPairwiseCoprimeError(PolyshareError):
    """Congruence moduli share a nontrivial factor."""


class InvalidConfigError(PolyshareError):
    """A hierarchy config failed validation.

    Carries the validation report so callers can surface every
    violated condition at once.
    """

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{v.code}: {v.message}" for v in report.violations)
        super().__init__(f"invalid hierarchy config: {lines}")


class SecretTooLargeError(PolyshareError):
    """Secret polynomial degree is not below the configured bound."""


class NotAuthorizedError(PolyshareError):
    """A participant set is not authorized to reconstruct."""

    def __init__(self, level: int, have: int, need: int):
        self.level = level
        self.have = have
        self.need = need
        super().__init__(f"level {level}: have {have}, need {need}")


class InsufficientSharesError(PolyshareError):
    """Too few shares at or below the requested level."""

    def __init__(self, level: int, have: int, need: int):
        self.level = level
        self.have = have
        self.need = need
        super().__init__(f"level {level}: have {have}, need {need}")


class BulletinDomainError(PolyshareError):
    """A public value was requested outside the bulletin's key domain."""


class BindingMismatchError(PolyshareError):
    """A share's config digest does not match the bulletin it is used with."""


class BudgetExceededError(PolyshareError):
    """An enumeration would exceed its hard budget."""

    def __init__(self, what: str, actual, limit):
        self.what = what
        self.actual = actual
        self.limit = limit
        super().__init__(f"{what}: {actual} exceeds budget {limit}")


class UnknownHashFamilyError(PolyshareError):
    """An unrecognized hash family identifier was used."""


class FormatError(PolyshareError):
    """A serialized document could not be parsed.

    ``offset`` is the byte position of the failure when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class OracleConsistencyError(PolyshareError):
    """Internal cross-check of the verification oracle failed."""
