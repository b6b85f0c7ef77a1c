"""Weyl-Heisenberg / Clifford toolkit for odd prime dimensions."""

from .errors import ZkitError
from .fields import (FieldScalar, cube_roots_of_unity, cubic_residue_cosets,
                     half_exponent, inverse, is_prime)
from .symplectic import (INFINITY, MobiusClass, SymplecticMatrix,
                         classify_mobius, compose, diagonalize_order3,
                         enumerate_order3, enumerate_sl2, mobius_apply, order,
                         projective_line)
from .operators import (ABOVE, CliffordElement, Operator, clifford_match,
                        displacement, equal_up_to_phase, fix_phase,
                        fourier_operator, hierarchy_level, magic_gate, omega,
                        parity_operator, symplectic_unitary, weyl_match)
from .mub import (MubFamily, Ray, RaySet, alltop_mub, canonicalize,
                  enumerate_alltop_vectors, is_unbiased, ivanovic_mub)
from .zauner import (IncidenceReport, Orbit, ZaunerSubspace,
                     clifford_orbits_of_alltop, enumerate_zauner_subspaces,
                     representative_zauner, subspace_contains,
                     verify_configuration, zauner_projector)
from .reality import (AntiUnitary, apply_antiunitary, check_real_structure,
                      conjugation, parity_conjugation)
from .magic import (DensityMatrix, WignerFunction, copies_lower_bound, mana,
                    mana_of_vector, mana_report, maximize_mana,
                    phase_point_operator, wigner)
from .sic import (Fiducial, fiducial_zauner_check, load_fiducial, sic_mana,
                  verify_sic)
from .stateio import (load_operator, load_state, save_operator, save_state)

__version__ = "0.1.0"
