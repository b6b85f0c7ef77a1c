"""SL(2, Z_p): group arithmetic, the Mobius action on the projective line
of basis labels, order/trace classification, and enumeration of the
order-3 elements."""

from __future__ import annotations

import enum
from functools import lru_cache

from .errors import ModulusMismatch, NotDiagonalizable, NotPrime
from .fields import check_modulus, inverse_mod

#: Label of the Fourier basis on the projective line.
INFINITY = float("inf")


def projective_line(p: int) -> list:
    """The p+1 labels [0, 1, ..., p-1, INFINITY]."""
    check_modulus(p)
    return list(range(p)) + [INFINITY]


class MobiusClass(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


class SymplecticMatrix:
    """A 2x2 matrix ((a, b), (c, d)) over Z_p with determinant 1."""

    __slots__ = ("a", "b", "c", "d", "p")

    def __init__(self, a, b, c, d, p):
        check_modulus(p)
        self.a, self.b, self.c, self.d = (int(a) % p, int(b) % p,
                                          int(c) % p, int(d) % p)
        self.p = p
        if (self.a * self.d - self.b * self.c) % p != 1:
            raise ValueError(f"determinant must be 1 mod {p}: "
                             f"{(a, b, c, d)}")

    @classmethod
    def identity(cls, p):
        return cls(1, 0, 0, 1, p)

    @classmethod
    def t(cls, p):
        """Standard shear generator ((1,1),(0,1)); acts as z -> z+1."""
        return cls(1, 1, 0, 1, p)

    @classmethod
    def f(cls, p):
        """Standard rotation generator ((0,-1),(1,0)); acts as z -> -1/z."""
        return cls(0, -1, 1, 0, p)

    @classmethod
    def diagonal(cls, a, p):
        """diag(a, 1/a)."""
        return cls(a, 0, 0, inverse_mod(a, p), p)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")
        p = self.p
        return SymplecticMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d, p)

    def inverse(self) -> "SymplecticMatrix":
        # determinant is 1, so the adjugate is the inverse
        return SymplecticMatrix(self.d, -self.b, -self.c, self.a, self.p)

    def __pow__(self, n: int) -> "SymplecticMatrix":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = SymplecticMatrix.identity(self.p)
        for _ in range(n):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return self.entries() == (1, 0, 0, 1)

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        """Matrix action on a column vector of Z_p^2."""
        p = self.p
        return ((self.a * v[0] + self.b * v[1]) % p,
                (self.c * v[0] + self.d * v[1]) % p)

    def __eq__(self, other):
        return (isinstance(other, SymplecticMatrix)
                and self.p == other.p and self.entries() == other.entries())

    def __hash__(self):
        return hash((self.entries(), self.p))

    def __repr__(self):
        return f"SymplecticMatrix(({self.a},{self.b}),({self.c},{self.d}) mod {self.p})"

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]


def compose(g: SymplecticMatrix, h: SymplecticMatrix) -> SymplecticMatrix:
    """Group law g @ h; moduli must agree."""
    return g @ h


def order(g: SymplecticMatrix) -> int:
    """Smallest n >= 1 with g^n = I, by iteration, cross-checked against
    the trace rules (trace -1 <=> order 3; trace 2 and g != I => order p)."""
    p = g.p
    n, power = 1, g
    bound = 2 * p * (p + 1)
    while not power.is_identity():
        power = power @ g
        n += 1
        if n > bound:  # cannot happen for a valid group element
            raise RuntimeError("order iteration exceeded group exponent bound")
    if (n == 3) != (g.trace == p - 1):
        raise RuntimeError(f"trace rule violated for {g}: order {n}")
    if g.trace == 2 and not g.is_identity() and n != p:
        raise RuntimeError(f"trace rule violated for {g}: order {n}")
    return n


def mobius_apply(g: SymplecticMatrix, z):
    """Mobius action z -> (az+b)/(cz+d) on the projective line;
    z may be an int mod p or INFINITY."""
    p = g.p
    if z == INFINITY:
        if g.c % p == 0:
            return INFINITY
        return (g.a * inverse_mod(g.c, p)) % p
    z = int(z) % p
    den = (g.c * z + g.d) % p
    if den == 0:
        return INFINITY
    return ((g.a * z + g.b) * inverse_mod(den, p)) % p


def fixed_points(g: SymplecticMatrix) -> list:
    """Exhaustive scan of the p+1 projective points for fixed points."""
    return [z for z in projective_line(g.p) if mobius_apply(g, z) == z]


def classify_mobius(g: SymplecticMatrix) -> MobiusClass:
    """Fixed-point classification; +-I act trivially and map to IDENTITY."""
    p = g.p
    if g.entries() in ((1, 0, 0, 1), (p - 1, 0, 0, p - 1)):
        return MobiusClass.IDENTITY
    n = len(fixed_points(g))
    if n == 2:
        return MobiusClass.HYPERBOLIC
    if n == 1:
        return MobiusClass.PARABOLIC
    if n == 0:
        return MobiusClass.ELLIPTIC
    # more than 2 fixed points forces the identity Mobius map
    return MobiusClass.IDENTITY


def enumerate_sl2(p: int):
    """Yield every element of SL(2, Z_p); |SL(2,Z_p)| = p(p^2-1)."""
    check_modulus(p)
    for a in range(p):
        for b in range(p):
            for c in range(p):
                # a*d - b*c = 1
                if a != 0:
                    d = ((1 + b * c) * inverse_mod(a, p)) % p
                    yield SymplecticMatrix(a, b, c, d, p)
                elif (-b * c) % p == 1:
                    for d in range(p):
                        yield SymplecticMatrix(a, b, c, d, p)


@lru_cache(maxsize=None)
def _enumerate_order3_cached(p: int) -> tuple[SymplecticMatrix, ...]:
    out = []
    for a in range(p):
        d = (-1 - a) % p  # trace -1 is equivalent to order 3 when p > 3
        need = (a * d - 1) % p  # b*c must equal a*d - 1
        for b in range(p):
            if b == 0:
                if need == 0:
                    out.extend(SymplecticMatrix(a, 0, c, d, p) for c in range(p))
            else:
                c = (need * inverse_mod(b, p)) % p
                out.append(SymplecticMatrix(a, b, c, d, p))
    return tuple(out)


def enumerate_order3(p: int) -> list[SymplecticMatrix]:
    """All order-3 elements of SL(2, Z_p): the matrices of trace -1.
    Count is p(p+1) for p = 1 mod 3 and p(p-1) for p = 2 mod 3."""
    check_modulus(p)
    return list(_enumerate_order3_cached(p))


def diagonalize_order3(g: SymplecticMatrix) -> tuple[SymplecticMatrix, SymplecticMatrix]:
    """Return (h, d) with h g h^-1 = d = diag(a, a^2), a a nontrivial cube
    root of unity.  Requires p = 1 mod 3; raises NotDiagonalizable otherwise."""
    p = g.p
    if p % 3 != 1:
        raise NotDiagonalizable(f"order-3 elements are elliptic for p={p} (p = 2 mod 3)")
    if order(g) != 3:
        raise ValueError(f"{g} does not have order 3")
    if g.b == 0 and g.c == 0:
        return SymplecticMatrix.identity(p), g
    # eigenvalues are the two nontrivial cube roots of unity
    roots = sorted(a for a in range(2, p) if pow(a, 3, p) == 1)
    lam1, lam2 = roots[0], roots[1]

    def eigvec(lam):
        if g.b % p != 0:
            return (g.b % p, (lam - g.a) % p)
        return ((lam - g.d) % p, g.c % p)

    v1, v2 = eigvec(lam1), eigvec(lam2)
    det = (v1[0] * v2[1] - v1[1] * v2[0]) % p
    v2 = ((v2[0] * inverse_mod(det, p)) % p, (v2[1] * inverse_mod(det, p)) % p)
    h_inv = SymplecticMatrix(v1[0], v2[0], v1[1], v2[1], p)
    h = h_inv.inverse()
    d = (h @ g) @ h_inv
    if (d.b, d.c) != (0, 0):
        raise RuntimeError("diagonalization failed")  # defensive
    return h, d
