"""Complete sets of mutually unbiased bases in odd prime dimension: the
standard (stabilizer) MUB built from the shear and Fourier unitaries, its
cubic-phase (Alltop) relatives, and the deduplicated set of all Alltop
vectors (the single-qudit magic states)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ZeroExponent
from .fields import check_modulus
from .operators import (CliffordElement, Operator, fourier_operator,
                        magic_gate, symplectic_unitary, _clock_shift)
from .symplectic import INFINITY, SymplecticMatrix, projective_line

CANONICAL_ROUND = 8  # decimals used for ray hash keys
LEAD_THRESHOLD = 1e-6  # modulus above which an amplitude may anchor the phase


def canonicalize(vec: np.ndarray) -> np.ndarray:
    """Canonical representative of the ray through vec: unit norm, first
    amplitude of modulus > LEAD_THRESHOLD made real positive."""
    v = np.asarray(vec, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no ray")
    v = v / n
    lead = int(np.argmax(np.abs(v) > LEAD_THRESHOLD))
    ph = v[lead] / abs(v[lead])
    return v / ph


def canonicalize_rows(mat: np.ndarray) -> np.ndarray:
    """Row-wise canonicalization (vectorized over many rays)."""
    v = np.asarray(mat, dtype=complex)
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    lead = np.argmax(np.abs(v) > LEAD_THRESHOLD, axis=1)
    amp = v[np.arange(v.shape[0]), lead]
    return v / (amp / np.abs(amp))[:, None]


def _ray_key(canonical: np.ndarray) -> bytes:
    r = np.round(canonical, CANONICAL_ROUND) + 0.0  # normalize -0.0
    return np.ascontiguousarray(r).tobytes()


class Ray:
    """A unit vector up to global phase, stored in canonical form."""

    __slots__ = ("amplitudes", "dim")

    def __init__(self, amplitudes, _canonical: bool = False):
        v = np.asarray(amplitudes, dtype=complex)
        v = v.copy() if _canonical else canonicalize(v)
        v.flags.writeable = False
        self.amplitudes = v
        self.dim = v.shape[0]

    def key(self) -> bytes:
        return _ray_key(self.amplitudes)

    def overlaps(self, other: "Ray", tol: float = 1e-9) -> bool:
        """Same ray: |<u|v>| = 1 within tol."""
        return abs(abs(np.vdot(self.amplitudes, other.amplitudes)) - 1.0) <= tol

    def is_real(self, tol: float = 1e-9) -> bool:
        """All canonical amplitudes real within tol (basis-dependent notion)."""
        return float(np.max(np.abs(self.amplitudes.imag))) <= tol

    def __eq__(self, other):
        return isinstance(other, Ray) and self.dim == other.dim and self.overlaps(other)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Ray(dim={self.dim})"


class RaySet:
    """Deduplicating container of rays.

    Keys are canonical coordinates rounded to CANONICAL_ROUND decimals;
    key collisions fall back to exact overlap comparison, so two distinct
    rays can never be merged.
    """

    def __init__(self):
        self._buckets: dict[bytes, list[Ray]] = {}
        self._count = 0

    def add(self, ray: Ray) -> bool:
        """Insert; returns True if the ray was new."""
        bucket = self._buckets.setdefault(ray.key(), [])
        for existing in bucket:
            if existing.overlaps(ray):
                return False
        bucket.append(ray)
        self._count += 1
        return True

    def __contains__(self, ray: Ray) -> bool:
        for existing in self._buckets.get(ray.key(), ()):
            if existing.overlaps(ray):
                return True
        return False

    def __len__(self) -> int:
        return self._count

    def __iter__(self):
        for bucket in self._buckets.values():
            yield from bucket

    def matrix(self) -> np.ndarray:
        """All rays stacked as rows (deterministic order by key)."""
        rows = [r.amplitudes for key in sorted(self._buckets)
                for r in self._buckets[key]]
        return np.array(rows)


@dataclass
class MubFamily:
    """p+1 orthonormal bases, pairwise mutually unbiased.

    bases[i] is a dim x dim matrix whose columns are the vectors of the
    basis labelled labels[i]."""

    bases: list[np.ndarray]
    labels: list
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    def basis(self, label) -> np.ndarray:
        return self.bases[self.labels.index(label)]

    def rays(self) -> RaySet:
        out = RaySet()
        for b in self.bases:
            for col in canonicalize_rows(b.T):
                out.add(Ray(col, _canonical=True))
        return out

    def max_unbiasedness_deviation(self) -> float:
        """Worst |overlap^2 - 1/p| over all cross-basis vector pairs."""
        p = self.dim
        worst = 0.0
        for i in range(len(self.bases)):
            for j in range(i + 1, len(self.bases)):
                ov = np.abs(self.bases[i].conj().T @ self.bases[j]) ** 2
                worst = max(worst, float(np.max(np.abs(ov - 1.0 / p))))
        return worst

    def verify(self, tol: float = 1e-9) -> None:
        dev = self.max_unbiasedness_deviation()
        if dev > tol:
            raise ValueError(f"bases are not mutually unbiased: deviation {dev:.3e}")


def is_unbiased(basis_a: np.ndarray, basis_b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff every cross overlap-squared equals 1/p within tol."""
    a = np.asarray(basis_a, dtype=complex)
    b = np.asarray(basis_b, dtype=complex)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"basis shapes differ: {a.shape} vs {b.shape}")
    p = a.shape[0]
    return bool(np.max(np.abs(np.abs(a.conj().T @ b) ** 2 - 1.0 / p)) <= tol)


def ivanovic_mub(p: int, validate: bool = True) -> MubFamily:
    """The standard complete MUB: computational basis at label 0, shear
    images at labels z = 1..p-1, Fourier basis at label infinity.  Each
    basis is the eigenbasis of a maximally abelian Weyl-Heisenberg
    subgroup; its vectors are the stabilizer states."""
    check_modulus(p)
    u_t = symplectic_unitary(SymplecticMatrix.t(p)).matrix
    bases = [np.eye(p, dtype=complex)]
    for _ in range(p - 1):
        bases.append(u_t @ bases[-1])
    bases.append(fourier_operator(p).matrix)
    fam = MubFamily(bases, projective_line(p), {"family": "ivanovic"})
    if validate:
        fam.verify()
    return fam


def alltop_mub(p: int, x: int, conjugator: CliffordElement | None = None,
               validate: bool = True) -> MubFamily:
    """Image of the standard MUB under C M^x C^-1 for a Clifford C.

    With the identity conjugator the basis at label 0 coincides with the
    standard one up to phases; with the Fourier conjugator the label-
    infinity basis does.  x = 0 is rejected."""
    check_modulus(p)
    x = int(x) % p
    if x == 0:
        raise ZeroExponent("magic exponent x must be nonzero")
    m_x = np.linalg.matrix_power(magic_gate(p).matrix, x)
    if conjugator is None or (conjugator.displacement == (0, 0)
                              and conjugator.symplectic.is_identity()):
        n = m_x
        tag = "identity"
    else:
        c = conjugator.unitary().matrix
        n = c @ m_x @ c.conj().T
        tag = {"displacement": list(conjugator.displacement),
               "symplectic": conjugator.symplectic.to_json()}
    base = ivanovic_mub(p, validate=False)
    fam = MubFamily([n @ b for b in base.bases], list(base.labels),
                    {"family": "alltop", "x": x, "conjugator": tag})
    if validate:
        fam.verify()
    return fam


def _generator_matrices(p: int) -> list[np.ndarray]:
    """Projective generators of the Clifford group: U_T, U_F, X, Z."""
    x, z = _clock_shift(p)
    return [symplectic_unitary(SymplecticMatrix.t(p)).matrix,
            fourier_operator(p).matrix, x, z]


def _closure(seeds: np.ndarray, generators: list[np.ndarray]) -> RaySet:
    """Breadth-first orbit closure over canonical rays."""
    out = RaySet()
    frontier = []
    for row in canonicalize_rows(seeds):
        ray = Ray(row, _canonical=True)
        if out.add(ray):
            frontier.append(row)
    while frontier:
        block = np.array(frontier)
        frontier = []
        for g in generators:
            for row in canonicalize_rows(block @ g.T):
                ray = Ray(row, _canonical=True)
                if out.add(ray):
                    frontier.append(row)
    return out


def alltop_seed_vectors(p: int, xs=None) -> np.ndarray:
    """The vectors M^x |standard MUB vector> for labels z != 0 (rows).

    Label-0 vectors are fixed by M^x up to phases, so they are omitted;
    the remaining seeds generate every Alltop vector under the Clifford
    group."""
    check_modulus(p)
    base = ivanovic_mub(p, validate=False)
    m = magic_gate(p).matrix
    xs = range(1, p) if xs is None else list(xs)
    seeds = []
    for x in xs:
        m_x = np.linalg.matrix_power(m, int(x) % p)
        for z in base.labels:
            if z == 0:
                continue
            seeds.append((m_x @ base.basis(z)).T)
    return np.vstack(seeds)


def enumerate_alltop_vectors(p: int) -> RaySet:
    """All p^2(p+1)(p-1) Alltop vectors, deduplicated as canonical rays:
    the Clifford-group closure of the cubic-phase images of the standard
    MUB vectors."""
    return _closure(alltop_seed_vectors(p), _generator_matrices(p))
