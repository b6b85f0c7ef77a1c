"""Anti-unitary symmetries from the extended Clifford group and the real
subspaces in which the Alltop vectors live."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .fields import check_modulus
from .mub import Ray, RaySet, ivanovic_mub
from .operators import Operator, fourier_operator, magic_gate, parity_operator
from .symplectic import INFINITY
from .zauner import subspace_contains, zauner_projector
from . import zauner as _zauner


@dataclass(frozen=True)
class AntiUnitary:
    """An (anti-)unitary U or UK, where K is complex conjugation in the
    computational basis.  Never materialized as a matrix: application
    conjugates the argument first when the flag is set."""

    unitary_part: Operator
    conjugates: bool = True

    @property
    def dim(self) -> int:
        return self.unitary_part.dim

    def apply_vector(self, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=complex)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"dim {self.dim} operator vs {v.shape[0]} vector")
        return self.unitary_part.matrix @ (v.conj() if self.conjugates else v)

    def __matmul__(self, other: "AntiUnitary") -> "AntiUnitary":
        """(U1 K^a)(U2 K^b) = U1 conj^a(U2) K^(a xor b)."""
        if not isinstance(other, AntiUnitary):
            return NotImplemented
        u2 = other.unitary_part.matrix
        mat = self.unitary_part.matrix @ (u2.conj() if self.conjugates else u2)
        return AntiUnitary(Operator(mat), self.conjugates != other.conjugates)


def conjugation(p: int) -> AntiUnitary:
    """K itself."""
    check_modulus(p)
    return AntiUnitary(Operator(np.eye(p, dtype=complex)), True)


def parity_conjugation(p: int) -> AntiUnitary:
    """U_A K: parity composed with complex conjugation."""
    return AntiUnitary(parity_operator(p), True)


def apply_antiunitary(t: AntiUnitary, ray: Ray) -> Ray:
    """Image ray, renormalized to canonical form."""
    return Ray(t.apply_vector(ray.amplitudes))


def invariant_under(t: AntiUnitary, ray: Ray, tol: float = 1e-9) -> bool:
    return ray.overlaps(apply_antiunitary(t, ray), tol)


def check_real_structure(p: int) -> dict:
    """Certificate of the real-subspace structure of Alltop vectors.

    Checks, with residuals: (a) the magic gate commutes with U_A K;
    (b) the x-indexed Alltop vectors fixed by U_A K, and the manifestly
    real ones fixed by K, form p-1 distinct rays each; (c) for p = 1 mod 3
    the 2(p-1) Alltop rays in the representative Zauner subspace split
    evenly between those two real families.
    """
    check_modulus(p)
    m = magic_gate(p).matrix
    ua = parity_operator(p).matrix
    f = fourier_operator(p).matrix
    base = ivanovic_mub(p, validate=False)
    uak = parity_conjugation(p)
    kk = conjugation(p)
    report: dict = {"p": p, "checks": {}}

    def record(name, residual, extra=None):
        entry = {"residual": float(residual), "pass": bool(residual <= 1e-9)}
        if extra:
            entry.update(extra)
        report["checks"][name] = entry

    # (a) M (U_A K) = (U_A K) M, as operators: M U_A = U_A conj(M)
    record("magic_commutes_with_parity_conjugation",
           np.max(np.abs(m @ ua - ua @ m.conj())))
    rng = np.random.default_rng(7)
    probe = rng.normal(size=p) + 1j * rng.normal(size=p)
    probe /= np.linalg.norm(probe)
    record("magic_parity_conjugation_probe",
           np.linalg.norm(m @ uak.apply_vector(probe)
                          - uak.apply_vector(m @ probe)))

    # (U_A K)^2 acts as the identity on rays
    sq = uak @ uak
    assert not sq.conjugates
    record("parity_conjugation_squares_to_identity",
           np.max(np.abs(sq.unitary_part.matrix - np.eye(p))))

    # extended-group relation diag(1,-1) * (-I) = F^-1 diag(1,-1) F over Z_p
    gk = np.array([[1, 0], [0, p - 1]])
    a_mat = np.array([[p - 1, 0], [0, p - 1]])
    f_mat = np.array([[0, p - 1], [1, 0]])
    f_inv = np.array([[0, 1], [p - 1, 0]])
    lhs = (gk @ a_mat) % p
    rhs = (f_inv @ gk @ f_mat) % p
    record("extended_group_relation", 0.0 if np.array_equal(lhs, rhs) else 1.0)

    # standard vectors fixed by both the parity unitary and conjugation
    e0 = base.basis(0)[:, 0]
    uniform = base.basis(INFINITY)[:, 0]
    record("first_vectors_parity_invariant",
           max(np.linalg.norm(ua @ e0 - e0), np.linalg.norm(ua @ uniform - uniform)))
    record("first_vectors_conjugation_invariant",
           max(np.linalg.norm(e0.conj() - e0), np.linalg.norm(uniform.conj() - uniform)))

    # (b) the two x-indexed families of Alltop rays
    fam_parity = RaySet()  # M^x |uniform>: fixed by U_A K
    fam_real = RaySet()  # F M^x F^-1 |e_0>: manifestly real
    worst_parity = worst_real = 0.0
    for x in range(1, p):
        mx = np.linalg.matrix_power(m, x)
        v = Ray(mx @ uniform)
        img = apply_antiunitary(uak, v)
        worst_parity = max(worst_parity, abs(
            1 - abs(np.vdot(v.amplitudes, img.amplitudes))))
        fam_parity.add(v)
        w = Ray(f @ mx @ f.conj().T @ e0)
        worst_real = max(worst_real, float(np.max(np.abs(w.amplitudes.imag))))
        fam_real.add(w)
    record("parity_conjugation_family_invariant", worst_parity,
           {"distinct_rays": len(fam_parity), "expected": p - 1})
    record("manifestly_real_family", worst_real,
           {"distinct_rays": len(fam_real), "expected": p - 1})
    report["checks"]["parity_conjugation_family_invariant"]["pass"] &= \
        len(fam_parity) == p - 1
    report["checks"]["manifestly_real_family"]["pass"] &= len(fam_real) == p - 1

    # (c) the split inside the representative Zauner subspace
    if p % 3 == 1:
        sub = zauner_projector(_zauner.representative_zauner(p))
        alltop = _zauner.enumerate_alltop_vectors(p)
        members = [r for r in alltop if subspace_contains(sub, r)]
        n_parity = sum(1 for r in members if invariant_under(uak, r))
        n_real = sum(1 for r in members if r.is_real())
        both = sum(1 for r in members if invariant_under(uak, r) and r.is_real())
        report["checks"]["zauner_real_split"] = {
            "members": len(members), "parity_conjugation_invariant": n_parity,
            "manifestly_real": n_real, "overlap": both,
            "pass": (len(members) == 2 * (p - 1) and n_parity == p - 1
                     and n_real == p - 1 and both == 0),
        }
        in_parity_family = sum(1 for r in members if r in fam_parity)
        in_real_family = sum(1 for r in members if r in fam_real)
        report["checks"]["zauner_families_identified"] = {
            "in_parity_family": in_parity_family, "in_real_family": in_real_family,
            "pass": in_parity_family == in_real_family == p - 1,
        }

    report["pass"] = all(c["pass"] for c in report["checks"].values())
    return report
