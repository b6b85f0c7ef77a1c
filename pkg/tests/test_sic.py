import os

import numpy as np
import pytest

from zkit.errors import (DimensionMismatch, NonUnitNorm, ParseError,
                         WrongResidueClass)
from zkit.magic import mana_of_vector
from zkit.mub import Ray, ivanovic_mub
from zkit.operators import _displacement_stack
from zkit.sic import (Fiducial, fiducial_zauner_check, load_fiducial,
                      sic_mana, verify_sic)
from zkit.stateio import save_state
from zkit.zauner import representative_zauner, zauner_projector

FIDUCIAL_ENV = "ZKIT_FIDUCIAL_7"


def _write_state(tmp_path, vec, name="state.json", **meta):
    path = tmp_path / name
    save_state(path, vec, **meta)
    return path


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def test_load_wellformed_fiducial(tmp_path):
    rng = np.random.default_rng(1)
    v = rng.normal(size=7) + 1j * rng.normal(size=7)
    v /= np.linalg.norm(v)
    fid = load_fiducial(_write_state(tmp_path, v, label="x"), expected_dim=7)
    assert fid.dim == 7
    assert fid.label == "x"
    assert abs(abs(np.vdot(fid.ray.amplitudes, v)) - 1) < 1e-12


def test_load_dimension_mismatch(tmp_path):
    v = np.ones(6) / np.sqrt(6)
    with pytest.raises(DimensionMismatch):
        load_fiducial(_write_state(tmp_path, v), expected_dim=7)


def test_load_zero_vector_rejected(tmp_path):
    with pytest.raises(NonUnitNorm):
        load_fiducial(_write_state(tmp_path, np.zeros(7)))


def test_load_unnormalized_rejected(tmp_path):
    with pytest.raises(NonUnitNorm):
        load_fiducial(_write_state(tmp_path, np.ones(7)))


def test_load_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_fiducial(path)


# ---------------------------------------------------------------------------
# overlap verification on synthetic inputs
# ---------------------------------------------------------------------------

def test_random_vector_is_not_a_sic(tmp_path):
    rng = np.random.default_rng(3)
    v = rng.normal(size=7) + 1j * rng.normal(size=7)
    v /= np.linalg.norm(v)
    rep = verify_sic(Fiducial(Ray(v)))
    assert not rep.passed
    assert rep.max_deviation > 1e-3
    assert rep.n_vectors == 49


def test_basis_vector_is_not_a_sic():
    rep = verify_sic(Fiducial(Ray(np.eye(7)[:, 0])))
    assert not rep.passed
    assert not rep.distinct  # translates collide up to phase


# ---------------------------------------------------------------------------
# Zauner membership
# ---------------------------------------------------------------------------

def test_constructed_member_is_found():
    p = 7
    sub = zauner_projector(representative_zauner(p))
    rng = np.random.default_rng(5)
    v = sub.projector @ (rng.normal(size=p) + 1j * rng.normal(size=p))
    v /= np.linalg.norm(v)
    hits = fiducial_zauner_check(Fiducial(Ray(v)), subspaces=[sub])
    assert len(hits) == 1


def test_random_vector_in_no_subspace():
    rng = np.random.default_rng(6)
    v = rng.normal(size=7) + 1j * rng.normal(size=7)
    sub = zauner_projector(representative_zauner(7))
    assert fiducial_zauner_check(Fiducial(Ray(v)), subspaces=[sub]) == []


def test_zauner_check_needs_1_mod_3():
    with pytest.raises(WrongResidueClass):
        fiducial_zauner_check(Fiducial(Ray(np.ones(5) / np.sqrt(5))))


# ---------------------------------------------------------------------------
# mana
# ---------------------------------------------------------------------------

def test_stabilizer_vector_mana_zero():
    fid = Fiducial(Ray(np.eye(7)[:, 0]))
    assert abs(sic_mana(fid)) < 1e-9


def test_translates_share_mana():
    p = 5
    rng = np.random.default_rng(8)
    v = rng.normal(size=p) + 1j * rng.normal(size=p)
    v /= np.linalg.norm(v)
    ref = mana_of_vector(v)
    for d in _displacement_stack(p):
        assert abs(mana_of_vector(d @ v) - ref) < 1e-9


# ---------------------------------------------------------------------------
# conditional suite: runs only against an externally supplied fiducial
# ---------------------------------------------------------------------------

def _external_fiducial():
    path = os.environ.get(FIDUCIAL_ENV)
    if not path or not os.path.exists(path):
        pytest.skip(f"no external p=7 fiducial: set {FIDUCIAL_ENV} to a "
                    "state file to enable the SIC verification suite")
    return load_fiducial(path, expected_dim=7)


def test_external_fiducial_verifies():
    fid = _external_fiducial()
    rep = verify_sic(fid)
    assert rep.passed and rep.max_deviation <= 1e-6


def test_external_fiducial_in_some_zauner_subspace():
    fid = _external_fiducial()
    assert len(fiducial_zauner_check(fid)) >= 1


def test_external_fiducial_mana_identifies_orbit():
    fid = _external_fiducial()
    value = sic_mana(fid)
    orbit = {"a": abs(value - 0.8354), "b": abs(value - 0.8116)}
    assert min(orbit.values()) <= 5e-4, f"mana {value} matches neither orbit"
