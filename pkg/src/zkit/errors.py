"""Exception types shared across the package."""


class ZkitError(Exception):
    """Base class for all library errors."""


class NotPrime(ZkitError, ValueError):
    """Modulus is not an odd prime greater than 3."""


class DivisionByZero(ZkitError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class ModulusMismatch(ZkitError, ValueError):
    """Operands live in different prime fields."""


class NotDiagonalizable(ZkitError, ValueError):
    """Order-3 matrix has no eigenvectors over Z_p (p = 2 mod 3)."""


class NotScalar(ZkitError, ValueError):
    """U^n is not proportional to the identity."""


class NonUnitary(ZkitError, ValueError):
    """Matrix fails the unitarity check."""


class ZeroExponent(ZkitError, ValueError):
    """Magic-gate exponent x must be nonzero."""


class NotOrderThree(ZkitError, ValueError):
    """Operator does not have projective order 3."""


class WrongResidueClass(ZkitError, ValueError):
    """Operation requires p = 1 mod 3."""


class DimensionMismatch(ZkitError, ValueError):
    """Vector or operator dimensions do not agree."""


class NotAConfiguration(ZkitError, ValueError):
    """Incidence counts are not uniform; carries the offenders."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations or []


class ParseError(ZkitError, ValueError):
    """State/operator file could not be parsed."""


class NonUnitNorm(ZkitError, ValueError):
    """Loaded vector norm deviates too far from 1."""


class ZeroManaResource(ZkitError, ValueError):
    """Copy lower bound against a zero-mana resource state."""


class UnsupportedDim(ZkitError, ValueError):
    """Dimension is not p or p^2 for a supported prime p."""
