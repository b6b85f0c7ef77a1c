"""Verification-only support for symmetric informationally complete
(SIC) fiducial vectors: ingest from the shared state format, check the
defining overlap condition on the Weyl-Heisenberg orbit, test Zauner
subspace membership, and compute the fiducial's mana.

Fiducial data is external input; the library ships the format and the
validator, not fiducial values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonUnitNorm, WrongResidueClass
from .fields import check_modulus
from .magic import mana_of_vector
from .mub import Ray
from .operators import _displacement_stack
from .stateio import load_state
from .zauner import MEMBER_TOL, ZaunerSubspace, enumerate_zauner_subspaces, \
    subspace_contains

NORM_TOL = 1e-6
SIC_TOL = 1e-6


@dataclass(frozen=True)
class Fiducial:
    ray: Ray
    label: str = ""

    @property
    def dim(self) -> int:
        return self.ray.dim


def load_fiducial(path, expected_dim: int | None = None) -> Fiducial:
    """Read, validate, normalize and canonicalize a fiducial vector.

    Raises ParseError on malformed files, DimensionMismatch if the file's
    dimension is not the requested one, NonUnitNorm if the stored vector
    is not normalized to within NORM_TOL."""
    vec, doc = load_state(path, expected_dim)
    check_modulus(int(doc["dim"]))
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise NonUnitNorm(f"{path}: norm {norm:.8f} deviates from 1 "
                          f"by more than {NORM_TOL}")
    return Fiducial(Ray(vec), str(doc.get("label", "")))


@dataclass
class SicReport:
    passed: bool
    max_deviation: float
    n_vectors: int
    distinct: bool

    def to_json(self) -> dict:
        return {"pass": self.passed, "max_deviation": self.max_deviation,
                "n_vectors": self.n_vectors, "distinct": self.distinct}


def verify_sic(fid: Fiducial, tol: float = SIC_TOL) -> SicReport:
    """Generate all p^2 Weyl-Heisenberg translates of the fiducial and
    check that every distinct pair has overlap-squared 1/(p+1) within tol."""
    p = fid.dim
    check_modulus(p)
    translates = _displacement_stack(p) @ fid.ray.amplitudes  # (p^2, p)
    gram2 = np.abs(translates.conj() @ translates.T) ** 2
    off = ~np.eye(p * p, dtype=bool)
    max_dev = float(np.max(np.abs(gram2[off] - 1.0 / (p + 1))))
    distinct = bool(np.max(gram2[off]) < 1.0 - 1e-6)
    return SicReport(max_dev <= tol, max_dev, p * p, distinct)


def fiducial_zauner_check(fid: Fiducial,
                          subspaces: list[ZaunerSubspace] | None = None,
                          tol: float = MEMBER_TOL) -> list[ZaunerSubspace]:
    """All Zauner subspaces containing the fiducial; expected nonempty for
    a genuine SIC fiducial when p = 1 mod 3."""
    p = fid.dim
    if p % 3 != 1:
        raise WrongResidueClass(f"Zauner membership needs p = 1 mod 3, got {p}")
    if subspaces is None:
        subspaces = enumerate_zauner_subspaces(p)
    return [s for s in subspaces if subspace_contains(s, fid.ray, tol)]


def sic_mana(fid: Fiducial) -> float:
    """Mana of the fiducial's pure state."""
    return mana_of_vector(fid.ray.amplitudes)
