"""Isospectral diagonal perturbations and Floquet isospectrality of discrete periodic operators."""

from .errors import NotZeroDimensionalError, ResourceLimitError
from .polycore import (
    ExactPoly,
    GroebnerBasis,
    GroebnerConfig,
    MonomialOrder,
    buchberger,
    complete_homogeneous,
    elementary_symmetric,
    normal_form,
    quotient_dimension,
    vanishes_only_at_origin,
)
from .minors import RationalMatrix, all_principal_minors, as_matrix, has_symmetrized_principal_minors, principal_minor
from .invariants import PerturbationTable, SpectralIdeal, elementary_ideal, spectral_invariants
from .coinvariant import QuotientEngine, lambda_closed_form, lambda_via_trace, normal_form_mod_E, top_obstruction_value
from .solver import SolveConfig, Witness, certify_rigid, find_nonzero_witness, verify_witness
from .floquet import (
    DispersionPoly,
    FloquetMatrix,
    Periods,
    Potential,
    build_floquet_matrix,
    dispersion_poly,
    find_isospectral_potential,
    floquet_isospectral,
    lift_potential,
)

__version__ = "0.1.0"
