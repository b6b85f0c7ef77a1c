"""Concrete unitaries on C^p: displacement operators, phase-fixed
symplectic unitaries, the cubic-phase magic gate, symbolic Clifford
elements, and Clifford-hierarchy level testing.

Conventions (all phases are integer powers of w = exp(2*pi*i/p)):
  X|r> = |r+1>,  Z|r> = w^r |r>
  D_(p1,p2) = w^(p1*p2/2) X^p1 Z^p2          with 1/2 := (p+1)/2 mod p
  U_G for G=((a,b),(c,d)):  Gaussian-sum matrix for b != 0, monomial
  matrix with the positive sign for b = 0; the free overall phase is
  fixed so that the order of U_G equals the order of G.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (DimensionMismatch, ModulusMismatch, NonUnitary,
                     NotScalar)
from .fields import check_modulus, half_exponent, inverse_mod
from .symplectic import SymplecticMatrix, order as sl2_order

DEFAULT_TOL = 1e-9


def omega(p: int) -> complex:
    return cmath.exp(2j * cmath.pi / p)


def _as_matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)


def is_scalar_matrix(m: np.ndarray, tol: float = DEFAULT_TOL):
    """Return the scalar s if m = s*I within tol (max norm), else None."""
    n = m.shape[0]
    s = np.trace(m) / n
    if np.max(np.abs(m - s * np.eye(n))) <= tol:
        return s
    return None


def equal_up_to_phase(u, v, tol: float = DEFAULT_TOL) -> bool:
    """Projective equality: u = e^(i*phi) v for some global phase."""
    mu, mv = _as_matrix(u), _as_matrix(v)
    if mu.shape != mv.shape:
        raise DimensionMismatch(f"shape mismatch: {mu.shape} vs {mv.shape}")
    s = is_scalar_matrix(mu.conj().T @ mv, tol)
    return s is not None and abs(abs(s) - 1.0) <= tol


class Operator:
    """Dense complex matrix with tolerance-aware, phase-insensitive equality.

    Unitarity is checked at construction unless ``unitary=False`` (used for
    Hermitian projectors, which share the container but not the invariant).
    """

    __slots__ = ("matrix", "dim", "tol")

    def __init__(self, matrix, tol: float = DEFAULT_TOL, unitary: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if unitary:
            err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
            if err > tol:
                raise NonUnitary(f"unitarity violated by {err:.3e}")
        m.flags.writeable = False
        self.matrix = m
        self.dim = m.shape[0]
        self.tol = tol

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return Operator(self.matrix @ other.matrix, max(self.tol, other.tol))
        return self.matrix @ np.asarray(other)

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.tol)

    def power(self, n: int) -> "Operator":
        return Operator(np.linalg.matrix_power(self.matrix, n), self.tol)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vec, dtype=complex)

    def equal_up_to_phase(self, other, tol: float | None = None) -> bool:
        return equal_up_to_phase(self, other, self.tol if tol is None else tol)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def tensor(self, other: "Operator") -> "Operator":
        return Operator(np.kron(self.matrix, _as_matrix(other)),
                        max(self.tol, getattr(other, "tol", self.tol)))

    def __repr__(self):
        return f"Operator(dim={self.dim})"


# ---------------------------------------------------------------------------
# Weyl-Heisenberg layer
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _clock_shift(p: int) -> tuple[np.ndarray, np.ndarray]:
    check_modulus(p)
    shift = np.zeros((p, p), dtype=complex)
    for r in range(p):
        shift[(r + 1) % p, r] = 1.0
    clock = np.diag([omega(p) ** r for r in range(p)])
    for m in (shift, clock):
        m.flags.writeable = False
    return shift, clock


@lru_cache(maxsize=None)
def _displacement_matrix(p: int, p1: int, p2: int) -> np.ndarray:
    x, z = _clock_shift(p)
    h = half_exponent(p)
    w = omega(p)
    m = (w ** ((h * p1 * p2) % p)) * (np.linalg.matrix_power(x, p1)
                                      @ np.linalg.matrix_power(z, p2))
    m.flags.writeable = False
    return m


def displacement(p: int, p1, p2) -> Operator:
    """Displacement operator D_(p1,p2) = w^(p1*p2/2) X^p1 Z^p2."""
    check_modulus(p)
    return Operator(_displacement_matrix(p, int(p1) % p, int(p2) % p))


@lru_cache(maxsize=None)
def _displacement_stack(p: int) -> np.ndarray:
    """All p^2 displacement matrices, indexed [p1*p + p2]."""
    stack = np.stack([_displacement_matrix(p, p1, p2)
                      for p1 in range(p) for p2 in range(p)])
    stack.flags.writeable = False
    return stack


# ---------------------------------------------------------------------------
# Symplectic unitaries
# ---------------------------------------------------------------------------

def fix_phase(u, n: int, tol: float = DEFAULT_TOL) -> Operator:
    """Rescale u by an n-th root so the result has order exactly n.

    Requires u^n to be a scalar e^(i*phi) I within tol; tries all n root
    branches and returns the first whose order is exactly n.
    """
    m = _as_matrix(u)
    d = m.shape[0]
    s = is_scalar_matrix(np.linalg.matrix_power(m, n), tol)
    if s is None:
        raise NotScalar(f"u^{n} is not proportional to the identity")
    phi = cmath.phase(s)
    eye = np.eye(d)
    for k in range(n):
        cand = cmath.exp(-1j * (phi + 2 * cmath.pi * k) / n) * m
        power = np.eye(d, dtype=complex)
        ok = True
        for _ in range(n - 1):
            power = power @ cand
            if np.max(np.abs(power - eye)) <= tol:  # order divides a smaller m
                ok = False
                break
        if ok and np.max(np.abs(power @ cand - eye)) <= tol:
            return Operator(cand, tol)
    raise NotScalar(f"no phase branch of order {n} found")


def _symplectic_matrix_raw(g: SymplecticMatrix) -> np.ndarray:
    p = g.p
    w = omega(p)
    a, b, c, d = g.entries()
    if b % p != 0:
        inv2b = (half_exponent(p) * inverse_mod(b, p)) % p
        r = np.arange(p).reshape(-1, 1)
        s = np.arange(p).reshape(1, -1)
        expo = (inv2b * (d * r * r - 2 * r * s + a * s * s)) % p
        return (w ** expo) / np.sqrt(p)
    # monomial branch, positive sign: |s> -> w^(a*c*s^2/2) |a*s>
    h = half_exponent(p)
    m = np.zeros((p, p), dtype=complex)
    for s_ in range(p):
        m[(a * s_) % p, s_] = w ** ((h * a * c * s_ * s_) % p)
    return m


@lru_cache(maxsize=None)
def _symplectic_unitary_cached(entries: tuple[int, int, int, int], p: int) -> Operator:
    g = SymplecticMatrix(*entries, p)
    return fix_phase(_symplectic_matrix_raw(g), sl2_order(g))


def symplectic_unitary(g: SymplecticMatrix) -> Operator:
    """The unitary representing g, phase-fixed so ord(U_g) = ord(g).

    Satisfies the covariance U_g D_q U_g^-1 = D_(g q) on displacements.
    """
    return _symplectic_unitary_cached(g.entries(), g.p)


def fourier_operator(p: int) -> Operator:
    """U_F: the standard discrete Fourier matrix w^(rs)/sqrt(p), order 4."""
    return symplectic_unitary(SymplecticMatrix.f(p))


def parity_operator(p: int) -> Operator:
    """U_A = U_F^2: the permutation |r> -> |-r> with the positive sign."""
    return symplectic_unitary(SymplecticMatrix(-1, 0, 0, -1, p))


def magic_gate(p: int) -> Operator:
    """Diagonal third-level gate with entries w^(r^3); has order p."""
    check_modulus(p)
    w = omega(p)
    return Operator(np.diag([w ** (pow(r, 3, p)) for r in range(p)]))


# ---------------------------------------------------------------------------
# Symbolic Clifford elements and hierarchy testing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CliffordElement:
    """Symbolic Clifford group element w^k D_(p1,p2) U_G.

    The displacement and symplectic parts are exact; the phase exponent k
    is bookkeeping modulo the projective phase convention of U_G.
    """
    phase_exponent: int
    displacement: tuple[int, int]
    symplectic: SymplecticMatrix

    @property
    def p(self) -> int:
        return self.symplectic.p

    @classmethod
    def identity(cls, p: int) -> "CliffordElement":
        return cls(0, (0, 0), SymplecticMatrix.identity(p))

    def unitary(self) -> Operator:
        p = self.p
        u = symplectic_unitary(self.symplectic)
        d = _displacement_matrix(p, *self.displacement)
        return Operator((omega(p) ** (self.phase_exponent % p)) * (d @ u.matrix))

    def __matmul__(self, other: "CliffordElement") -> "CliffordElement":
        """Composition; exact in (displacement, symplectic), with the phase
        exponent combined through the displacement cocycle only."""
        if not isinstance(other, CliffordElement):
            return NotImplemented
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")
        p, h = self.p, half_exponent(self.p)
        q1 = self.displacement
        q2 = self.symplectic.apply(other.displacement)
        # D_q1 D_q2 = w^((q2_1 q1_2 - q2_2 q1_1)/2) D_(q1+q2)
        cocycle = (h * (q2[0] * q1[1] - q2[1] * q1[0])) % p
        return CliffordElement(
            (self.phase_exponent + other.phase_exponent + cocycle) % p,
            ((q1[0] + q2[0]) % p, (q1[1] + q2[1]) % p),
            self.symplectic @ other.symplectic)

    def projective_key(self):
        return (self.displacement, self.symplectic.entries())


class _Above:
    """Sentinel for hierarchy levels beyond the tested cap."""

    def __repr__(self):
        return "ABOVE"


ABOVE = _Above()


def weyl_match(u, tol: float = DEFAULT_TOL, phase_must_be_root: bool = False):
    """Match u against w^k D_q up to a global phase.

    Returns (k, (p1, p2)) or None.  With phase_must_be_root the residual
    phase is additionally required to be a p-th root of unity (the case for
    conjugates of displacements under genuine Clifford elements).
    """
    m = _as_matrix(u)
    p = m.shape[0]
    check_modulus(p)
    stack = _displacement_stack(p)
    overlaps = np.einsum("qji,ji->q", stack.conj(), m) / p
    idx = int(np.argmax(np.abs(overlaps)))
    s = overlaps[idx]
    if abs(abs(s) - 1.0) > tol:
        return None
    q = (idx // p, idx % p)
    if np.max(np.abs(m - s * stack[idx])) > tol:
        return None
    k = round(cmath.phase(s) / (2 * cmath.pi / p)) % p
    if phase_must_be_root and abs(s - omega(p) ** k) > tol:
        return None
    return k, q


def clifford_match(u, tol: float = DEFAULT_TOL) -> CliffordElement | None:
    """Lift a unitary to the CliffordElement matching it up to global phase,
    or None if it is not a Clifford operation."""
    m = _as_matrix(u)
    p = m.shape[0]
    check_modulus(p)
    x, z = _clock_shift(p)
    cols = []
    for gen in (x, z):
        hit = weyl_match(m @ gen @ m.conj().T, tol, phase_must_be_root=True)
        if hit is None:
            return None
        cols.append(hit[1])
    (g11, g21), (g12, g22) = cols
    if (g11 * g22 - g12 * g21) % p != 1:
        return None
    g = SymplecticMatrix(g11, g12, g21, g22, p)
    rest = weyl_match(m @ symplectic_unitary(g).matrix.conj().T, tol)
    if rest is None:
        return None
    k, q = rest
    return CliffordElement(k, q, g)


def hierarchy_level(u, max_level: int = 3, tol: float = DEFAULT_TOL):
    """Smallest hierarchy level of u: 1 for Weyl-Heisenberg elements (up to
    phase), 2 for Clifford, k if conjugating the two generators X and Z
    lands in level k-1; ABOVE if not within max_level."""
    m = _as_matrix(u)
    if np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) > max(tol, 1e-7):
        raise NonUnitary("hierarchy_level requires a unitary input")
    if weyl_match(m, tol) is not None:
        return 1
    if max_level < 2:
        return ABOVE
    if clifford_match(m, tol) is not None:
        return 2
    x, z = _clock_shift(m.shape[0])
    for level in range(3, max_level + 1):
        def at_most(v, k):
            if k == 2:
                return weyl_match(v, tol) is not None or clifford_match(v, tol) is not None
            return all(at_most(v @ gen @ v.conj().T, k - 1) for gen in (x, z))
        if all(at_most(m @ gen @ m.conj().T, level - 1) for gen in (x, z)):
            return level
    return ABOVE
