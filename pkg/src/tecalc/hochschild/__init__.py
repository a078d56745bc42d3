"""Chain-level Hochschild and cyclic calculus of finite-dimensional curved A-infinity algebras."""
from __future__ import annotations

from .algebra import (AInftyAlgebra, AInftyReport, EulerGrading, MissingGrading, verify_ainfty,
                      verify_cyclic, verify_euler_grading, verify_unit)
from .chains import Chain, LengthOverflow, random_chain
from .cochains import (Cochain, TableCochain, cup, gerstenhaber, grading_cochain, m_prime,
                       random_cochain, structure_cochain)
from .harness import IdentityResult, SuiteReport, check_cartan, run_identity_suite
from .operators import (B11, b11, cap, connes_B, euler_u_connection, ggm_connection, gr_minus,
                        hochschild_b, i_op, length_gamma, lie_derivative, pairing, u_connection)
from .ring import BaseRing, d_dt
from .samples import (OddParityViolation, clifford_algebra, e_deformation, exterior_algebra,
                      field_algebra, matrix_algebra, negative, negative_opposite, opposite,
                      s_deformation, sample_zoo, uncurved, weakly_curved)
from .spec_io import parse_algebra, read_algebra, serialize_algebra

__all__ = [
    "AInftyAlgebra", "AInftyReport", "EulerGrading", "MissingGrading", "verify_ainfty",
    "verify_cyclic", "verify_euler_grading", "verify_unit",
    "Chain", "LengthOverflow", "random_chain",
    "Cochain", "TableCochain", "cup", "gerstenhaber", "grading_cochain", "m_prime",
    "random_cochain", "structure_cochain",
    "IdentityResult", "SuiteReport", "check_cartan", "run_identity_suite",
    "B11", "b11", "cap", "connes_B", "euler_u_connection", "ggm_connection", "gr_minus",
    "hochschild_b", "i_op", "length_gamma", "lie_derivative", "pairing", "u_connection",
    "BaseRing", "d_dt",
    "OddParityViolation", "clifford_algebra", "e_deformation", "exterior_algebra",
    "field_algebra", "matrix_algebra", "negative", "negative_opposite", "opposite",
    "s_deformation", "sample_zoo", "uncurved", "weakly_curved",
    "parse_algebra", "read_algebra", "serialize_algebra",
]
