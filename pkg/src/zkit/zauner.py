"""Order-3 Clifford (Zauner) unitaries, their eigenvalue-1 subspaces, the
point/subspace incidence configurations they form with the standard and
Alltop MUB vectors, and the Clifford-orbit decomposition of the Alltop
(magic) vectors."""

from __future__ import annotations

import cmath
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, NotAConfiguration, NotOrderThree,
                     WrongResidueClass)
from .fields import check_modulus, cubic_residue_cosets, inverse_mod
from .mub import (Ray, RaySet, _closure, _generator_matrices,
                  canonicalize_rows, enumerate_alltop_vectors, ivanovic_mub)
from .operators import (CliffordElement, Operator, clifford_match,
                        _displacement_stack, is_scalar_matrix, magic_gate,
                        omega, symplectic_unitary)
from .symplectic import SymplecticMatrix, enumerate_order3

MEMBER_TOL = 1e-7  # subspace membership
STRICT_TOL = 1e-10  # boundary re-verification
DEDUP_TOL = 1e-8  # projector identity


def worker_count(explicit: int | None = None) -> int:
    """Thread count: explicit argument, else ZKIT_THREADS, else cpu count."""
    if explicit is not None and explicit > 0:
        return explicit
    env = os.environ.get("ZKIT_THREADS")
    if env and env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def _require_one_mod_three(p: int):
    check_modulus(p)
    if p % 3 != 1:
        raise WrongResidueClass(
            f"Zauner subspaces require p = 1 mod 3, got p = {p}")


def zauner_rank(p: int) -> int:
    """Eigenvalue-1 multiplicity (p-1)/3 + 1 of a suitably phased
    order-3 Clifford unitary, for p = 1 mod 3."""
    _require_one_mod_three(p)
    return (p - 1) // 3 + 1


@dataclass
class ZaunerSubspace:
    """Rank-(k+1) eigenvalue-1 projector of an order-3 Clifford unitary."""

    projector: np.ndarray
    source: CliffordElement | None
    rank: int

    def __post_init__(self):
        p = np.asarray(self.projector, dtype=complex)
        if np.max(np.abs(p - p.conj().T)) > 1e-9:
            raise ValueError("projector is not Hermitian")
        if np.max(np.abs(p @ p - p)) > 1e-9:
            raise ValueError("projector is not idempotent")
        p.flags.writeable = False
        self.projector = p

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    def contains(self, ray: Ray, tol: float = MEMBER_TOL) -> bool:
        return subspace_contains(self, ray, tol)


def representative_zauner(p: int) -> Operator:
    """The monomial order-3 unitary |s> -> |a*s> for the smallest
    nontrivial cube root a mod p; commutes with the magic gate and is
    conjugated to its own square by the Fourier unitary."""
    _require_one_mod_three(p)
    a = min(x for x in range(2, p) if pow(x, 3, p) == 1)
    return symplectic_unitary(SymplecticMatrix.diagonal(a, p))


def _rank_one_projector_branch(c: np.ndarray, c2: np.ndarray, want: int):
    """Among the three spectral projectors of an order-3 unitary, return
    (projector, branch) for the one of rank ``want``, or None."""
    d = c.shape[0]
    theta = cmath.exp(2j * cmath.pi / 3)
    t1, t2 = np.trace(c), np.trace(c2)
    for b in range(3):
        r = (d + (theta ** (-b)) * t1 + (theta ** (-2 * b)) * t2).real / 3.0
        if abs(r - want) < 0.1:
            proj = (np.eye(d) + (theta ** (-b)) * c + (theta ** (-2 * b)) * c2) / 3.0
            return proj, b
    return None


def zauner_projector(u, tol: float = 1e-9) -> ZaunerSubspace:
    """Eigenvalue-1 projector (I + U + U^2)/3 of an order-3 unitary, on
    the phase branch of rank (p-1)/3 + 1.

    Rejects inputs whose projective order is not 3 (NotOrderThree) and
    dimensions with p = 2 mod 3 (WrongResidueClass)."""
    m = u.matrix if isinstance(u, Operator) else np.asarray(u, dtype=complex)
    p = m.shape[0]
    want = zauner_rank(p)
    if is_scalar_matrix(m, tol) is not None:
        raise NotOrderThree("input is proportional to the identity")
    s = is_scalar_matrix(np.linalg.matrix_power(m, 3), tol)
    if s is None:
        raise NotOrderThree("u^3 is not proportional to the identity")
    c = cmath.exp(-1j * cmath.phase(s) / 3) * m
    c2 = c @ c
    hit = _rank_one_projector_branch(c, c2, want)
    if hit is None:
        raise NotOrderThree(
            f"no phase branch has eigenvalue-1 multiplicity {want}")
    proj, b = hit
    theta = cmath.exp(2j * cmath.pi / 3)
    return ZaunerSubspace(proj, clifford_match((theta ** (-b)) * c), want)


def enumerate_zauner_subspaces(p: int) -> list[ZaunerSubspace]:
    """One subspace per unordered pair {C, C^2} of order-3 Clifford
    elements w^k D_q U_G, over all order-3 G and all p^2 displacements,
    deduplicated by projector equality; exactly p^3(p+1)/2 of them."""
    _require_one_mod_three(p)
    want = zauner_rank(p)
    w = omega(p)
    theta = cmath.exp(2j * cmath.pi / 3)
    inv3 = inverse_mod(3, p)
    dstack = _displacement_stack(p)
    eye = np.eye(p)
    buckets: dict[bytes, list[int]] = {}
    out: list[ZaunerSubspace] = []
    for g in enumerate_order3(p):
        ug = symplectic_unitary(g).matrix
        c0 = dstack @ ug
        c0_2 = c0 @ c0
        c0_3 = c0_2 @ c0
        # C0^3 = w^s I; the unique Clifford phase w^kk with (w^kk C0)^3 = I
        scal = np.einsum("qii->q", c0_3) / p
        s = np.rint(np.angle(scal) / (2 * np.pi / p)).astype(int) % p
        kk = (-s * inv3) % p
        ph = w ** kk
        c = ph[:, None, None] * c0
        c2 = (ph ** 2)[:, None, None] * c0_2
        t1 = np.einsum("qii->q", c)
        t2 = np.einsum("qii->q", c2)
        # pick the spectral branch with eigenvalue-1 multiplicity k+1
        ranks = np.stack([(p + theta ** (-b) * t1 + theta ** (-2 * b) * t2).real / 3
                          for b in range(3)], axis=1)
        branch = np.argmin(np.abs(ranks - want), axis=1)
        if np.max(np.abs(np.take_along_axis(ranks, branch[:, None], 1) - want)) > 0.1:
            raise RuntimeError("missing rank-(k+1) branch")  # defensive
        tb = theta ** (-branch)
        projs = (eye + tb[:, None, None] * c + (tb ** 2)[:, None, None] * c2) / 3.0
        for idx in range(p * p):
            proj = projs[idx]
            key = _projector_key(proj)
            hit = False
            for j in buckets.get(key, ()):
                if np.max(np.abs(out[j].projector - proj)) <= DEDUP_TOL:
                    hit = True
                    break
            if hit:
                continue
            q = (idx // p, idx % p)
            sub = ZaunerSubspace(proj, CliffordElement(int(kk[idx]), q, g), want)
            buckets.setdefault(key, []).append(len(out))
            out.append(sub)
    expected = p ** 3 * (p + 1) // 2
    if len(out) != expected:
        raise RuntimeError(
            f"subspace count {len(out)} != p^3(p+1)/2 = {expected}")
    return out


def _projector_key(proj: np.ndarray) -> bytes:
    r = np.round(proj, 6) + 0.0
    return np.ascontiguousarray(r).tobytes()


def subspace_contains(sub: ZaunerSubspace, ray: Ray, tol: float = MEMBER_TOL) -> bool:
    """Membership test ||P psi - psi|| <= tol."""
    if sub.dim != ray.dim:
        raise DimensionMismatch(f"dim {sub.dim} subspace vs dim {ray.dim} ray")
    v = ray.amplitudes
    return float(np.linalg.norm(sub.projector @ v - v)) <= tol


@dataclass
class IncidenceReport:
    """Uniform incidence structure (m points each on gamma lines,
    n lines each containing pi points); m*gamma = n*pi."""

    m: int
    gamma: int
    n: int
    pi: int
    per_point: list[list[int]]
    per_line: list[list[int]]
    ambiguous: int = 0
    ok: bool = True
    violations: list = field(default_factory=list)

    def incidence_runs(self) -> list[int]:
        """The full n x m incidence bitmap, row-major, as run lengths of
        alternating 0/1 blocks starting with zeros."""
        runs = [0]
        bit = 0
        for hits in self.per_line:
            cursor = 0
            for h in sorted(hits):
                for want, length in ((0, h - cursor), (1, 1)):
                    if length == 0:
                        continue
                    if bit == want:
                        runs[-1] += length
                    else:
                        runs.append(length)
                        bit = want
                cursor = h + 1
            tail = self.m - cursor
            if tail:
                if bit == 0:
                    runs[-1] += tail
                else:
                    runs.append(tail)
                    bit = 0
        return runs

    def to_json(self, include_incidence: bool = False) -> dict:
        doc = {"m": self.m, "gamma": self.gamma, "n": self.n, "pi": self.pi,
               "ok": self.ok, "ambiguous": self.ambiguous,
               "violations": self.violations}
        if include_incidence:
            doc["incidence_rle"] = self.incidence_runs()
        return doc


def _points_matrix(points) -> np.ndarray:
    if isinstance(points, RaySet):
        return points.matrix()
    if isinstance(points, np.ndarray):
        return canonicalize_rows(points)
    return np.array([r.amplitudes for r in points])


def _subspace_factor(sub: ZaunerSubspace) -> np.ndarray:
    """Orthonormal columns spanning the subspace: P = V V^dagger."""
    vals, vecs = np.linalg.eigh(sub.projector)
    return np.ascontiguousarray(vecs[:, vals > 0.5])


def _incidence_scan(rmat: np.ndarray, lines, tol: float,
                    threads: int | None = None):
    """Streamed incidence sweep: per-line member lists, never a dense
    residual matrix.

    The cheap test evaluates <psi|P|psi> = |V^dagger psi|^2 through the
    rank-(k+1) factor V, whose sqrt residual has only ~sqrt(machine eps)
    precision; memberships beyond STRICT_TOL there are re-verified
    directly as ||P psi - psi|| and counted as ambiguous if they still
    fail.  Returns (per_line member lists, ambiguous_count)."""
    nthreads = worker_count(threads)
    block_rows = max(1, 4_000_000 // max(1, rmat.shape[0]))

    def scan(sl):
        stack = np.vstack([_subspace_factor(ln).conj().T for ln in lines[sl]])
        big = np.abs(stack @ rmat.T) ** 2  # (sum of ranks, n_points)
        members, ambiguous = [], 0
        row = 0
        for ln in lines[sl]:
            quad = big[row:row + ln.rank].sum(axis=0)
            row += ln.rank
            resid = np.sqrt(np.clip(1.0 - quad, 0.0, None))
            hits = np.nonzero(resid <= tol)[0]
            boundary = hits[resid[hits] > STRICT_TOL]
            if boundary.size:
                vs = rmat[boundary]
                direct = np.linalg.norm(vs @ ln.projector.T - vs, axis=1)
                ambiguous += int(np.count_nonzero(direct > STRICT_TOL))
            members.append(hits)
        return members, ambiguous

    slices = [slice(i, min(i + block_rows, len(lines)))
              for i in range(0, len(lines), block_rows)]
    if nthreads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(scan, slices))
    else:
        parts = [scan(sl) for sl in slices]
    per_line = [hits for members, _ in parts for hits in members]
    ambiguous = sum(a for _, a in parts)
    return per_line, ambiguous


def incidence_matrix(points, lines, tol: float = MEMBER_TOL,
                     threads: int | None = None):
    """Dense boolean incidence between rays (rows) and subspaces; suited
    to desk-scale inputs.  Returns (incidence, ambiguous_count)."""
    rmat = _points_matrix(points)
    per_line, ambiguous = _incidence_scan(rmat, lines, tol, threads)
    inc = np.zeros((len(lines), rmat.shape[0]), dtype=bool)
    for j, hits in enumerate(per_line):
        inc[j, hits] = True
    return inc, ambiguous


def verify_configuration(points, lines, tol: float = MEMBER_TOL,
                         threads: int | None = None) -> IncidenceReport:
    """Full brute-force incidence of rays versus Zauner subspaces;
    succeeds only if incidence counts are uniform in both directions."""
    rmat = _points_matrix(points)
    if rmat.size == 0 or not lines:
        raise ValueError("configuration requires nonempty points and lines")
    if rmat.shape[1] != lines[0].dim:
        raise DimensionMismatch("points and lines have different dimensions")
    per_line_hits, ambiguous = _incidence_scan(rmat, lines, tol, threads)
    n_points = rmat.shape[0]
    point_counts = np.zeros(n_points, dtype=int)
    per_point: list[list[int]] = [[] for _ in range(n_points)]
    for j, hits in enumerate(per_line_hits):
        point_counts[hits] += 1
        for i in hits:
            per_point[int(i)].append(j)
    line_counts = np.array([len(h) for h in per_line_hits])
    violations = []
    gamma = int(np.bincount(point_counts).argmax())
    pi = int(np.bincount(line_counts).argmax())
    for i in np.nonzero(point_counts != gamma)[0]:
        violations.append({"point": int(i), "count": int(point_counts[i])})
    for j in np.nonzero(line_counts != pi)[0]:
        violations.append({"line": int(j), "count": int(line_counts[j])})
    if violations:
        raise NotAConfiguration(
            f"incidence counts not uniform ({len(violations)} offenders)",
            violations)
    report = IncidenceReport(
        m=n_points, gamma=gamma, n=len(lines), pi=pi,
        per_point=per_point,
        per_line=[list(map(int, hits)) for hits in per_line_hits],
        ambiguous=ambiguous)
    assert report.m * report.gamma == report.n * report.pi
    return report


@dataclass
class Orbit:
    """A Clifford orbit of Alltop rays, labelled by the cubic-residue
    coset of the magic exponent (None when p = 2 mod 3)."""

    coset: frozenset | None
    rays: RaySet

    @property
    def size(self) -> int:
        return len(self.rays)


def clifford_orbits_of_alltop(p: int) -> list[Orbit]:
    """Partition of the Alltop vectors under the Clifford group: one orbit
    for p = 2 mod 3, three equal orbits labelled by the cubic-residue
    cosets of the magic exponent for p = 1 mod 3.

    The breadth-first numeric closure is cross-checked against the
    symbolic coset rule (lower-triangular symplectics rescale the magic
    exponent by a cube), raising on any disagreement."""
    check_modulus(p)
    gens = _generator_matrices(p)
    mgate = magic_gate(p).matrix
    shear = symplectic_unitary(SymplecticMatrix.t(p)).matrix
    e0 = np.zeros(p, dtype=complex)
    e0[0] = 1.0
    if p % 3 == 1:
        cosets = [frozenset(int(s) for s in c) for c in cubic_residue_cosets(p)]
    else:
        cosets = [None]
    orbits = []
    for coset in cosets:
        x0 = 1 if coset is None else min(coset)
        seed = np.linalg.matrix_power(mgate, x0) @ (shear @ e0)
        orbits.append(Orbit(coset, _closure(seed[None, :], gens)))
    total = enumerate_alltop_vectors(p)
    if sum(o.size for o in orbits) != len(total):
        raise RuntimeError("orbits do not partition the Alltop vectors")
    for i, orb in enumerate(orbits):
        for j, other in enumerate(orbits):
            if i != j and next(iter(orb.rays)) in other.rays:
                raise RuntimeError("orbit closures intersect")
    # mandatory symbolic cross-check: membership is decided by the coset of x
    base = ivanovic_mub(p, validate=False)
    for x in range(1, p):
        target = next(o for o in orbits if o.coset is None or x in o.coset)
        m_x = np.linalg.matrix_power(mgate, x)
        for z in base.labels:
            if z == 0:
                continue
            for row in canonicalize_rows((m_x @ base.basis(z)).T):
                if Ray(row, _canonical=True) not in target.rays:
                    raise RuntimeError(
                        f"coset rule broken: x={x}, z={z} not in its orbit")
    return orbits
