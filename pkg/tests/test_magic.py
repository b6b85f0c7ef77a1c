import numpy as np
import pytest

from zkit.errors import UnsupportedDim, ZeroManaResource
from zkit.magic import (DensityMatrix, copies_lower_bound, mana,
                        mana_of_vector, mana_report, maximize_mana,
                        phase_point_operator, wigner)
from zkit.mub import Ray, ivanovic_mub
from zkit.operators import (CliffordElement, displacement, magic_gate,
                            parity_operator)
from zkit.symplectic import INFINITY, SymplecticMatrix, enumerate_sl2


def random_density(p, rng, rank=None):
    """Ginibre random state."""
    k = rank or p
    g = rng.normal(size=(p, k)) + 1j * rng.normal(size=(p, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure(p, rng):
    v = rng.normal(size=p) + 1j * rng.normal(size=p)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# phase-point operators
# ---------------------------------------------------------------------------

def test_phase_point_at_origin_is_parity():
    p = 7
    a0 = phase_point_operator(p, 0, 0).matrix
    assert np.allclose(a0, parity_operator(p).matrix)


def test_phase_point_traces_are_one():
    p = 7
    for r1, r2 in [(0, 0), (1, 2), (3, 5), (6, 6)]:
        assert abs(np.trace(phase_point_operator(p, r1, r2).matrix) - 1) < 1e-9


def test_phase_points_hermitian_involutions():
    p = 5
    for r1 in range(p):
        for r2 in range(p):
            a = phase_point_operator(p, r1, r2).matrix
            assert np.max(np.abs(a - a.conj().T)) < 1e-12
            assert np.max(np.abs(a @ a - np.eye(p))) < 1e-12


def test_phase_points_sum_to_p_times_identity():
    # oracle: brute-force sum of all 25 operators
    p = 5
    total = sum(phase_point_operator(p, r1, r2).matrix
                for r1 in range(p) for r2 in range(p))
    assert np.max(np.abs(total / p - np.eye(p))) < 1e-9


# ---------------------------------------------------------------------------
# Wigner function
# ---------------------------------------------------------------------------

def test_maximally_mixed_state_is_flat():
    p = 7
    w = wigner(DensityMatrix(np.eye(p, dtype=complex) / p))
    assert np.allclose(w.values, 1.0 / p ** 2)


def test_stabilizer_vectors_nonnegative_wigner():
    p = 7
    for ray in ivanovic_mub(p).rays():
        w = wigner(DensityMatrix.pure(ray))
        assert w.values.min() > -1e-10


def test_alltop_vector_has_negative_values():
    p = 7
    v = magic_gate(p).matrix @ ivanovic_mub(p).basis(1)[:, 0]
    w = wigner(DensityMatrix.pure(Ray(v)))
    assert w.values.min() < -1e-3


@pytest.mark.parametrize("p", [5, 7])
def test_wigner_normalization_random_states(p):
    rng = np.random.default_rng(100 + p)
    for _ in range(100):
        w = wigner(random_density(p, rng))
        assert abs(w.total() - 1.0) < 1e-9


def test_two_qudit_wigner_factorizes():
    p = 5
    rng = np.random.default_rng(4)
    a, b = random_density(p, rng), random_density(p, rng)
    w_ab = wigner(a.tensor(b))
    w_prod = np.outer(wigner(a).values, wigner(b).values).ravel()
    assert np.max(np.abs(w_ab.values - w_prod)) < 1e-12


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDim):
        wigner(DensityMatrix(np.eye(6, dtype=complex) / 6))


# ---------------------------------------------------------------------------
# mana: the five monotone properties
# ---------------------------------------------------------------------------

def test_stabilizer_states_have_zero_mana():
    for p in (5, 7):
        for ray in ivanovic_mub(p).rays():
            assert abs(mana(DensityMatrix.pure(ray))) <= 1e-9


def test_positivity_over_random_states():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        assert mana(random_density(5, rng)) >= -1e-12


def test_clifford_invariance():
    p = 5
    rng = np.random.default_rng(12)
    sl2 = list(enumerate_sl2(p))
    for _ in range(50):
        rho = random_density(p, rng)
        el = CliffordElement(int(rng.integers(p)),
                            (int(rng.integers(p)), int(rng.integers(p))),
                            sl2[rng.integers(len(sl2))])
        u = el.unitary().matrix
        assert abs(mana(rho) - mana(DensityMatrix(u @ rho.entries @ u.conj().T))) < 1e-9


def test_additivity_on_products():
    p = 5
    rng = np.random.default_rng(15)
    for _ in range(20):
        a, b = random_density(p, rng), random_density(p, rng)
        assert abs(mana(a.tensor(b)) - mana(a) - mana(b)) < 1e-9


def test_depolarizing_mixing_never_increases_mana():
    p = 5
    rng = np.random.default_rng(21)
    mixed = np.eye(p, dtype=complex) / p
    for _ in range(100):
        rho = random_density(p, rng)
        lam = rng.uniform(0, 1)
        noisy = DensityMatrix((1 - lam) * rho.entries + lam * mixed)
        assert mana(noisy) <= mana(rho) + 1e-12


# ---------------------------------------------------------------------------
# Alltop mana table
# ---------------------------------------------------------------------------

def test_p7_table_matches_reference_values():
    rows = mana_report(7)
    assert [r.coset for r in rows] == [(1, 6), (2, 5), (3, 4)]
    values = [r.mana for r in rows]
    assert abs(values[0] - 0.8148) < 5e-4
    assert abs(values[1] - 0.8148) < 5e-4
    assert abs(values[2] - 0.8962) < 5e-4
    assert all(r.spread < 1e-9 for r in rows)


def test_p5_table_single_row():
    rows = mana_report(5)
    assert len(rows) == 1 and rows[0].coset is None
    assert rows[0].mana > 0.5  # positive resource, no reference value


def test_p13_table_three_rows():
    rows = mana_report(13, samples_per_orbit=6)
    assert len(rows) == 3
    assert all(r.spread < 1e-9 for r in rows)
    # recorded, not asserted: whether all three orbit values differ
    assert all(r.mana > 0 for r in rows)


# ---------------------------------------------------------------------------
# copies bound and maximizer
# ---------------------------------------------------------------------------

def test_copies_bound_of_state_against_itself():
    v = magic_gate(5).matrix @ ivanovic_mub(5).basis(1)[:, 0]
    rho = DensityMatrix.pure(Ray(v))
    assert abs(copies_lower_bound(rho, rho) - 1.0) < 1e-12


def test_copies_bound_additive_on_two_copies():
    v = magic_gate(5).matrix @ ivanovic_mub(5).basis(1)[:, 0]
    rho = DensityMatrix.pure(Ray(v))
    assert abs(copies_lower_bound(rho.tensor(rho), rho) - 2.0) < 1e-6


def test_copies_bound_rejects_stabilizer_resource():
    rho = DensityMatrix.pure(Ray(np.eye(5)[:, 0]))
    sigma = DensityMatrix.pure(Ray(magic_gate(5).matrix @ ivanovic_mub(5).basis(1)[:, 0]))
    with pytest.raises(ZeroManaResource):
        copies_lower_bound(sigma, rho)


def test_maximizer_beats_alltop_vectors_p7():
    ray, val = maximize_mana(7, restarts=12, kicks=25)
    assert val >= 0.8962
    assert abs(mana_of_vector(ray.amplitudes) - val) < 1e-12


def test_maximizer_deterministic_given_seed():
    r1, v1 = maximize_mana(5, restarts=4, kicks=5, seed=33)
    r2, v2 = maximize_mana(5, restarts=4, kicks=5, seed=33)
    assert v1 == v2
    assert r1 == r2


def test_maximizer_p5_beats_alltop():
    _, val = maximize_mana(5, restarts=8, kicks=10)
    assert val >= mana_report(5)[0].mana - 1e-9
