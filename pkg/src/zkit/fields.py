"""Exact arithmetic in Z_p for odd primes p > 3, plus the cubic-residue
structure that separates the p = 3k+1 and p = 3k+2 cases."""

from __future__ import annotations

from .errors import DivisionByZero, ModulusMismatch, NotPrime

_VALIDATED_PRIMES: set[int] = set()


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine at desk-scale moduli."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def check_modulus(p: int) -> int:
    """Validate p as an odd prime > 3 (cached); raise NotPrime otherwise."""
    if p not in _VALIDATED_PRIMES:
        if not isinstance(p, int) or p <= 3 or not is_prime(p):
            raise NotPrime(f"modulus must be a prime > 3, got {p!r}")
        _VALIDATED_PRIMES.add(p)
    return p


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def inverse_mod(a: int, p: int) -> int:
    """Multiplicative inverse of a modulo p, by extended Euclid."""
    a = a % p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse mod {p}")
    g, x, _ = egcd(a, p)
    if g != 1:  # unreachable for prime p, kept as a guard
        raise DivisionByZero(f"{a} is not invertible mod {p}")
    return x % p


def half_exponent(p: int) -> int:
    """The inverse of 2 mod p, i.e. (p+1)/2; realizes half-integer
    phase exponents as integer powers of the p-th root of unity."""
    check_modulus(p)
    return (p + 1) // 2


class FieldScalar:
    """An integer modulo an odd prime p > 3, with exact field arithmetic.

    Values are always stored reduced.  Mixed arithmetic with plain ints is
    allowed; mixing two scalars from different fields raises.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        check_modulus(modulus)
        self.value = int(value) % modulus
        self.modulus = modulus

    def _coerce(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot mix Z_{self.modulus} and Z_{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def _wrap(self, value: int) -> "FieldScalar":
        return FieldScalar(value, self.modulus)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._wrap(v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, n: int):
        if n < 0:
            return self._wrap(pow(inverse_mod(self.value, self.modulus), -n, self.modulus))
        return self._wrap(pow(self.value, n, self.modulus))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * inverse_mod(v, self.modulus))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self._wrap(v * inverse_mod(self.value, self.modulus))

    def inverse(self) -> "FieldScalar":
        return self._wrap(inverse_mod(self.value, self.modulus))

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        # hash by value so that sets of scalars compare equal to sets of ints
        return hash(self.value)

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldScalar({self.value}, mod {self.modulus})"


def inverse(x: FieldScalar) -> FieldScalar:
    """Multiplicative inverse in Z_p; DivisionByZero on zero input."""
    return x.inverse()


def cube_roots_of_unity(p: int) -> set[FieldScalar]:
    """All solutions of a^3 = 1 mod p: three of them iff p = 1 mod 3,
    only a = 1 otherwise."""
    check_modulus(p)
    return {FieldScalar(a, p) for a in range(1, p) if pow(a, 3, p) == 1}


def cubic_residues(p: int) -> set[int]:
    """The set {y^3 mod p : y nonzero} as plain ints."""
    check_modulus(p)
    return {pow(y, 3, p) for y in range(1, p)}


def cubic_residue_cosets(p: int) -> list[set[FieldScalar]]:
    """Partition of the nonzero field elements by the cubic-residue subgroup.

    For p = 1 mod 3 this returns three disjoint cosets of size (p-1)/3,
    the residue subgroup first; for p = 2 mod 3 cubing is a bijection and
    the single returned set is all of Z_p minus zero.
    """
    check_modulus(p)
    residues = cubic_residues(p)
    cosets = [residues]
    covered = set(residues)
    while len(covered) < p - 1:
        u = min(a for a in range(1, p) if a not in covered)
        coset = {(u * r) % p for r in residues}
        cosets.append(coset)
        covered |= coset
    return [{FieldScalar(a, p) for a in coset} for coset in cosets]
