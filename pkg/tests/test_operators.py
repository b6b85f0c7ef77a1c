import numpy as np
import pytest

from zkit.errors import NonUnitary, NotScalar
from zkit.fields import half_exponent
from zkit.operators import (ABOVE, CliffordElement, Operator, clifford_match,
                            displacement, equal_up_to_phase, fix_phase,
                            fourier_operator, hierarchy_level, magic_gate,
                            omega, parity_operator, symplectic_unitary,
                            weyl_match)
from zkit.symplectic import SymplecticMatrix, enumerate_order3, enumerate_sl2

RNG = np.random.default_rng(20240831)


def random_sl2(p, rng=RNG):
    elements = list(enumerate_sl2(p))
    return elements[rng.integers(len(elements))]


def random_point(p, rng=RNG):
    return (int(rng.integers(p)), int(rng.integers(p)))


# ---------------------------------------------------------------------------
# displacements
# ---------------------------------------------------------------------------

def test_displacement_zero_is_identity():
    assert np.allclose(displacement(7, 0, 0).matrix, np.eye(7))


def test_displacement_shift_action():
    d = displacement(7, 1, 0)
    e0 = np.zeros(7)
    e0[0] = 1
    out = d.apply(e0)
    assert abs(out[1] - 1) < 1e-12  # |0> -> |1>


def test_displacement_clock_action():
    d = displacement(7, 0, 1)
    v = np.ones(7) / np.sqrt(7)
    out = d.apply(v)
    w = omega(7)
    assert np.allclose(out, np.array([w ** r for r in range(7)]) / np.sqrt(7))


@pytest.mark.parametrize("p", [5, 7])
def test_displacement_has_order_p(p):
    d = displacement(p, 1, 3).matrix
    assert np.allclose(np.linalg.matrix_power(d, p), np.eye(p))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_displacement_adjoint_is_negation(p):
    for _ in range(10):
        q1, q2 = random_point(p)
        d = displacement(p, q1, q2)
        dm = displacement(p, -q1, -q2)
        assert np.allclose(d.matrix.conj().T, dm.matrix, atol=1e-12)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_displacement_composition_rule(p):
    # D_q D_r = w^((r1 q2 - r2 q1)/2) D_(q+r), with 1/2 = (p+1)/2 mod p
    h, w = half_exponent(p), omega(p)
    for _ in range(40):
        q, r = random_point(p), random_point(p)
        lhs = displacement(p, *q).matrix @ displacement(p, *r).matrix
        phase = w ** ((h * (r[0] * q[1] - r[1] * q[0])) % p)
        rhs = phase * displacement(p, q[0] + r[0], q[1] + r[1]).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-9


@pytest.mark.parametrize("p", [5, 7, 13])
def test_displacement_commutation_phase(p):
    # commutator carries the full symplectic phase w^(r1 q2 - r2 q1)
    w = omega(p)
    for _ in range(20):
        q, r = random_point(p), random_point(p)
        dq, dr = displacement(p, *q).matrix, displacement(p, *r).matrix
        phase = w ** ((r[0] * q[1] - r[1] * q[0]) % p)
        assert np.max(np.abs(dq @ dr - phase * (dr @ dq))) < 1e-9


# ---------------------------------------------------------------------------
# symplectic unitaries
# ---------------------------------------------------------------------------

def test_fourier_is_standard_dft():
    p = 7
    w = omega(p)
    dft = np.array([[w ** (r * s) for s in range(p)] for r in range(p)]) / np.sqrt(p)
    assert np.max(np.abs(fourier_operator(p).matrix - dft)) < 1e-12


def test_parity_has_positive_sign():
    p = 7
    u = parity_operator(p).matrix
    expect = np.zeros((p, p))
    for r in range(p):
        expect[(-r) % p, r] = 1.0
    assert np.max(np.abs(u - expect)) < 1e-12


def test_shear_unitary_has_order_p():
    p = 5
    u = symplectic_unitary(SymplecticMatrix.t(p)).matrix
    assert np.max(np.abs(np.linalg.matrix_power(u, p) - np.eye(p))) < 1e-9


@pytest.mark.parametrize("p", [5, 7, 13])
def test_covariance_on_random_pairs(p):
    n = 100 if p == 7 else 30
    for _ in range(n):
        g = random_sl2(p)
        q = random_point(p)
        u = symplectic_unitary(g).matrix
        lhs = u @ displacement(p, *q).matrix @ u.conj().T
        rhs = displacement(p, *g.apply(q)).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_representation_is_projective():
    # U_g U_h equals U_(gh) up to a global phase
    p = 7
    for _ in range(20):
        g, h = random_sl2(p), random_sl2(p)
        prod = symplectic_unitary(g).matrix @ symplectic_unitary(h).matrix
        assert equal_up_to_phase(prod, symplectic_unitary(g @ h).matrix)


def test_order_matching_for_all_order3_mod_7():
    for g in enumerate_order3(7):
        u = symplectic_unitary(g).matrix
        assert np.max(np.abs(np.linalg.matrix_power(u, 3) - np.eye(7))) < 1e-9
        assert not np.allclose(u, np.eye(7))


def test_order_matching_random_mod_13():
    from zkit.symplectic import order as sl2_order
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = random_sl2(13, rng)
        n = sl2_order(g)
        u = symplectic_unitary(g).matrix
        assert np.max(np.abs(np.linalg.matrix_power(u, n) - np.eye(13))) < 1e-8
        for m in range(1, n):
            if n % m == 0 and np.max(np.abs(np.linalg.matrix_power(u, m) - np.eye(13))) < 1e-8:
                pytest.fail(f"order of U_g divides {m} < {n}")


# ---------------------------------------------------------------------------
# fix_phase
# ---------------------------------------------------------------------------

def test_fix_phase_keeps_correct_input():
    u = fourier_operator(7)
    fixed = fix_phase(u, 4)
    assert np.max(np.abs(fixed.matrix - u.matrix)) < 1e-9


def test_fix_phase_repairs_scaled_input():
    p = 7
    u = np.exp(0.37j) * symplectic_unitary(SymplecticMatrix(2, 0, 0, 4, p)).matrix
    fixed = fix_phase(u, 3).matrix
    assert np.max(np.abs(np.linalg.matrix_power(fixed, 3) - np.eye(p))) < 1e-9


def test_fix_phase_rejects_non_scalar_power():
    m = np.diag(np.exp(2j * np.pi * np.arange(5) / 4.7))
    with pytest.raises(NotScalar):
        fix_phase(m, 3)


# ---------------------------------------------------------------------------
# magic gate
# ---------------------------------------------------------------------------

def test_magic_gate_entries():
    m = magic_gate(7).matrix
    w = omega(7)
    assert abs(m[2, 2] - w ** 1) < 1e-12  # 2^3 = 8 = 1 mod 7
    assert abs(m[0, 0] - 1) < 1e-12


def test_magic_gate_has_order_p():
    m = magic_gate(5).matrix
    assert np.allclose(np.linalg.matrix_power(m, 5), np.eye(5))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_magic_conjugation_formula(p):
    # M D_q M^-1 = w^(-q1^3/2) D_(q1, q2+3q1^2) U_((1,0),(6q1,1))
    h, w = half_exponent(p), omega(p)
    m = magic_gate(p).matrix
    for _ in range(40):
        q1, q2 = random_point(p)
        lhs = m @ displacement(p, q1, q2).matrix @ m.conj().T
        g = SymplecticMatrix(1, 0, (6 * q1) % p, 1, p)
        rhs = (w ** ((-h * q1 ** 3) % p)) \
            * displacement(p, q1, (q2 + 3 * q1 * q1) % p).matrix \
            @ symplectic_unitary(g).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_magic_conjugate_spectrum_nondegenerate():
    p = 7
    m = magic_gate(p).matrix
    for q1 in range(1, p):
        conj = m @ displacement(p, q1, 2).matrix @ m.conj().T
        eigs = np.linalg.eigvals(conj)
        assert len({round(np.angle(e), 6) for e in eigs}) == p


def test_magic_commutes_with_cube_root_diagonal_unitaries():
    p = 7
    m = magic_gate(p).matrix
    for a in (2, 4):  # nontrivial cube roots mod 7
        u = symplectic_unitary(SymplecticMatrix.diagonal(a, p)).matrix
        assert np.max(np.abs(m @ u - u @ m)) < 1e-12


# ---------------------------------------------------------------------------
# clifford matching and hierarchy
# ---------------------------------------------------------------------------

def test_weyl_match_displacement():
    hit = weyl_match(displacement(5, 1, 2).matrix)
    assert hit is not None
    assert hit[1] == (1, 2)


def test_clifford_match_displacement():
    el = clifford_match(displacement(5, 1, 2).matrix)
    assert el is not None
    assert el.displacement == (1, 2)
    assert el.symplectic.is_identity()


def test_clifford_match_magic_is_none():
    assert clifford_match(magic_gate(7).matrix) is None


def test_clifford_match_magic_conjugate():
    p = 7
    m = magic_gate(p).matrix
    conj = m @ displacement(p, 1, 0).matrix @ m.conj().T
    el = clifford_match(conj)
    assert el is not None
    assert el.displacement == (1, 3)
    assert el.symplectic.entries() == (1, 0, 6, 1)
    assert el.phase_exponent == (-half_exponent(p)) % p
    assert equal_up_to_phase(el.unitary().matrix, conj)


def test_clifford_element_roundtrip_and_composition():
    p = 5
    rng = np.random.default_rng(11)
    for _ in range(10):
        e1 = CliffordElement(int(rng.integers(p)), random_point(p, rng), random_sl2(p, rng))
        e2 = CliffordElement(int(rng.integers(p)), random_point(p, rng), random_sl2(p, rng))
        matched = clifford_match(e1.unitary().matrix)
        assert matched.projective_key() == e1.projective_key()
        prod = e1 @ e2
        assert equal_up_to_phase(prod.unitary().matrix,
                                 e1.unitary().matrix @ e2.unitary().matrix)


def test_hierarchy_level_one_for_displacements():
    assert hierarchy_level(displacement(5, 1, 1).matrix) == 1


def test_hierarchy_level_two_for_symplectic():
    assert hierarchy_level(fourier_operator(5).matrix) == 2


def test_hierarchy_level_three_for_magic():
    assert hierarchy_level(magic_gate(7).matrix) == 3


def test_hierarchy_level_rejects_non_unitary():
    with pytest.raises(NonUnitary):
        hierarchy_level(np.ones((5, 5)))


def test_hierarchy_level_above_for_generic_unitary():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    q, _ = np.linalg.qr(m)
    assert hierarchy_level(q) is ABOVE


# ---------------------------------------------------------------------------
# Operator container
# ---------------------------------------------------------------------------

def test_operator_rejects_non_unitary():
    with pytest.raises(NonUnitary):
        Operator(np.ones((3, 3)))


def test_operator_equality_up_to_phase():
    u = fourier_operator(5)
    assert u.equal_up_to_phase(np.exp(1.3j) * u.matrix)
    assert not u.equal_up_to_phase(np.eye(5))
