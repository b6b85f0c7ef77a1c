"""Discrete Wigner function on the Z_p x Z_p phase space, the mana
monotone ln(sum |W|), per-orbit mana of the Alltop (magic) vectors, and a
seeded random-restart mana maximizer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedDim, ZeroManaResource
from .fields import check_modulus, cubic_residue_cosets, is_prime
from .mub import Ray, canonicalize, ivanovic_mub
from .operators import Operator, _displacement_matrix, magic_gate, \
    parity_operator, symplectic_unitary
from .symplectic import SymplecticMatrix

DEFAULT_SEED = 20177


def phase_point_operator(p: int, r1: int, r2: int) -> Operator:
    """A_r = D_r U_A D_r^dagger: the displaced parity operator.
    Hermitian, unitary, trace 1, square = identity."""
    check_modulus(p)
    return Operator(_phase_point_stack(p)[(r1 % p) * p + (r2 % p)])


@lru_cache(maxsize=None)
def _phase_point_stack(p: int) -> np.ndarray:
    """All p^2 phase-point operators, indexed [r1*p + r2]."""
    parity = parity_operator(p).matrix
    stack = np.empty((p * p, p, p), dtype=complex)
    for r1 in range(p):
        for r2 in range(p):
            d = _displacement_matrix(p, r1, r2)
            stack[r1 * p + r2] = d @ parity @ d.conj().T
    stack.flags.writeable = False
    return stack


@lru_cache(maxsize=None)
def _phase_point_stack_2q(p: int) -> np.ndarray:
    """Tensor products A_(r1) x A_(r2) for two qudits, p^4 of them."""
    single = _phase_point_stack(p)
    stack = np.einsum("aij,bkl->abikjl", single, single)
    stack = stack.reshape(p * p * p * p, p * p, p * p)
    stack.flags.writeable = False
    return stack


def _decompose_dim(dim: int) -> tuple[int, int]:
    """Return (p, n) with dim = p^n, n in {1, 2}; UnsupportedDim otherwise."""
    if is_prime(dim) and dim > 3:
        return dim, 1
    root = math.isqrt(dim)
    if root * root == dim and is_prime(root) and root > 3:
        return root, 2
    raise UnsupportedDim(f"dimension {dim} is not p or p^2 for a prime p > 3")


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix within tol."""

    entries: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > self.tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > self.tol:
            raise ValueError(f"trace is {np.trace(m).real}, not 1")
        if np.linalg.eigvalsh(m).min() < -self.tol:
            raise ValueError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        self.entries = m

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def pure(cls, state) -> "DensityMatrix":
        v = state.amplitudes if isinstance(state, Ray) else canonicalize(state)
        return cls(np.outer(v, v.conj()))

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.entries, other.entries))


@dataclass
class WignerFunction:
    """Real quasi-probabilities indexed by phase-space points Z_p^(2n),
    stored flat; sums to 1."""

    values: np.ndarray
    p: int
    qudits: int

    def total(self) -> float:
        return float(self.values.sum())

    def negativity(self) -> float:
        return float(np.abs(self.values).sum())


def wigner(rho: DensityMatrix | np.ndarray) -> WignerFunction:
    """W(r) = Tr(rho A_r) / p^n for n in {1, 2} qudits."""
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    p, n = _decompose_dim(m.shape[0])
    stack = _phase_point_stack(p) if n == 1 else _phase_point_stack_2q(p)
    vals = np.einsum("rij,ji->r", stack, m) / (p ** n)
    if np.max(np.abs(vals.imag)) > 1e-9:
        raise ValueError("Wigner values are not real; invalid state input")
    w = WignerFunction(vals.real, p, n)
    if abs(w.total() - 1.0) > 1e-9:
        raise ValueError(f"Wigner function sums to {w.total()}, not 1")
    return w


def mana(rho: DensityMatrix | np.ndarray) -> float:
    """ln of the Wigner negativity sum; zero exactly on states with a
    non-negative Wigner representation."""
    return float(np.log(wigner(rho).negativity()))


def mana_of_vector(vec: np.ndarray) -> float:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return mana(np.outer(v, v.conj()))


def copies_lower_bound(sigma: DensityMatrix, rho: DensityMatrix,
                       tol: float = 1e-9) -> float:
    """Lower bound mana(sigma)/mana(rho) on the number of copies of the
    resource rho needed to distill sigma with stabilizer operations."""
    denom = mana(rho)
    if denom <= tol:
        raise ZeroManaResource(f"resource state has mana {denom:.3e}")
    return mana(sigma) / denom


@dataclass
class OrbitManaRow:
    coset: tuple[int, ...] | None
    representative_x: int
    mana: float
    spread: float  # max deviation across the sampled orbit members
    samples: int


def mana_report(p: int, samples_per_orbit: int | None = None) -> list[OrbitManaRow]:
    """Mana per Clifford orbit of Alltop vectors: one row for p = 2 mod 3,
    three rows labelled by the cubic-residue cosets of the magic exponent
    for p = 1 mod 3.  Within each orbit the sampled rays agree to 1e-9."""
    check_modulus(p)
    if p % 3 == 1:
        cosets = [tuple(sorted(int(s) for s in c)) for c in cubic_residue_cosets(p)]
    else:
        cosets = [None]
    mgate = magic_gate(p).matrix
    base = ivanovic_mub(p, validate=False)
    rows = []
    for coset in cosets:
        xs = [1] if coset is None else list(coset)
        ref = None
        worst = 0.0
        count = 0
        # sample over the full coset in x, all labels z != 0, and two basis
        # vectors per basis; Clifford invariance makes the value constant
        for x in xs:
            mx = np.linalg.matrix_power(mgate, x)
            for z in base.labels:
                if z == 0:
                    continue
                basis = base.basis(z)
                for a in (0, 1):
                    val = mana_of_vector(mx @ basis[:, a])
                    ref = val if ref is None else ref
                    worst = max(worst, abs(val - ref))
                    count += 1
                    if samples_per_orbit and count >= samples_per_orbit:
                        break
                else:
                    continue
                break
            else:
                continue
            break
        rows.append(OrbitManaRow(coset, xs[0], float(ref), float(worst), count))
        if worst > 1e-9:
            raise RuntimeError(
                f"mana varies by {worst:.2e} within one Clifford orbit")
    return rows


def maximize_mana(p: int, restarts: int = 50, iterations: int = 200,
                  kicks: int = 60, seed: int = DEFAULT_SEED) -> tuple[Ray, float]:
    """Random-restart projected ascent for the largest single-qudit mana.

    Each restart polishes a fresh random state by subgradient ascent
    (direction H_s psi with H_s = sum_r sign(W(r)) A_r, step halving) and
    then re-polishes ``kicks`` perturbations of the incumbent at random
    scales, which hops between the nearby local maxima of the nonsmooth
    objective.  Deterministic for a fixed seed."""
    check_modulus(p)
    stack = _phase_point_stack(p)
    rng = np.random.default_rng(seed)

    def negativity(v):
        quad = np.einsum("rij,j,i->r", stack, v, v.conj()).real / p
        return np.abs(quad).sum(), quad

    def polish(v):
        v = v / np.linalg.norm(v)
        val, quad = negativity(v)
        step = 1.0
        for _ in range(iterations):
            h = np.einsum("r,rij->ij", np.sign(quad), stack) / p
            grad = h @ v
            improved = False
            while step > 1e-12:
                cand = v + step * grad
                cand /= np.linalg.norm(cand)
                cval, cquad = negativity(cand)
                if cval > val + 1e-15:
                    v, val, quad = cand, cval, cquad
                    improved = True
                    step *= 1.5
                    break
                step *= 0.5
            if not improved:
                break
        return v, val

    best_val, best_vec = -np.inf, None
    for _ in range(restarts):
        v, val = polish(rng.normal(size=p) + 1j * rng.normal(size=p))
        if val > best_val:
            best_val, best_vec = val, v
        for _ in range(kicks):
            scale = 10.0 ** rng.uniform(-2, 0.3)
            noise = rng.normal(size=p) + 1j * rng.normal(size=p)
            v, val = polish(best_vec + scale * noise)
            if val > best_val + 1e-15:
                best_val, best_vec = val, v
    return Ray(best_vec), float(np.log(best_val))
