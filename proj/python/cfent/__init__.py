"""Composite fermion entanglement toolkit.

Schmidt data and entanglement witnesses of structural matrices, the
closed-form entropy expressions for the two- and three-mode solution
families, realization-condition checks, and Fock-space identity verifiers
backed by the C++ core.
"""

from cfent._core import (
    canonicalize,
    check_realization,
    deformed_linear_system,
    entropy,
    entropy_K,
    entropy_of_weights,
    entropy_pair_3mode,
    entropy_s2_threeangle,
    entropy_trW,
    entropy_two_equal_s1,
    entropy_two_equal_s2,
    family_names,
    purity,
    purity_of_weights,
    purity_theta,
    quasiboson_entropy_purity,
    quasiboson_phi,
    quasiboson_structural_matrix,
    refine_solution,
    residual,
    s2,
    sample_family,
    schmidt,
    su3_orthonormal_pair,
    verify_on_fock,
)

__all__ = [
    "canonicalize",
    "check_realization",
    "deformed_linear_system",
    "entropy",
    "entropy_K",
    "entropy_of_weights",
    "entropy_pair_3mode",
    "entropy_s2_threeangle",
    "entropy_trW",
    "entropy_two_equal_s1",
    "entropy_two_equal_s2",
    "family_names",
    "purity",
    "purity_of_weights",
    "purity_theta",
    "quasiboson_entropy_purity",
    "quasiboson_phi",
    "quasiboson_structural_matrix",
    "refine_solution",
    "residual",
    "s2",
    "sample_family",
    "schmidt",
    "su3_orthonormal_pair",
    "verify_on_fock",
]

__version__ = "0.1.0"
