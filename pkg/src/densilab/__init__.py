"""Density points of expansive dilations: witness sets, equivalence, lattices.

Three layers: ``spectral`` handles self-adjoint expansive maps exactly where
possible (integer entries) and by a Jacobi eigensolver otherwise; ``density``
estimates |E ∩ A^{-j}K| / |A^{-j}K| with a deterministic counter-based
sampler and classifies the trend; ``equivalence`` and ``lattice`` decide when
two maps share a density family and classify expanding integer matrices up to
integral similarity, with exact witnesses whenever the spectra are integral.
"""
from .density import (CONVERGES_TO_ONE, CONVERGES_TO_ZERO, DEFAULT_SAMPLES,
                      OTHER, DensityEstimate, DensitySeries, Region, all_space,
                      ball, classify_series, complement, complement_basis,
                      cone, cube, custom_region, cylinder, cylinder_reduce,
                      density_ratio, density_sweep, ealpha, exact_ealpha_ratio,
                      fdelta, gdelta, inverse_power, make_region,
                      subspace_basis, translate)
from .equivalence import (CERT_EXACT, CERT_NUMERIC, OBSTRUCTION_MISMATCH,
                          OBSTRUCTION_NSD, EquivalenceVerdict, Obstruction,
                          aligned_integer_pairs, conjugate_map,
                          conjugate_transport, decide_equivalence,
                          simultaneous_diagonalization)
from .errors import (BadParameter, BadRow, DegenerateWindow, DensilabError,
                     NotExpanding, NotExpansive, NotInvariant, NotPositive,
                     NotSymmetric, NotUnimodular, ParseError,
                     PreconditionViolated, SingularMatrix, WrongDeterminant,
                     WrongSign)
from .lattice import (REPRESENTATIVES, CommonBaseWitness, IntMatrix2,
                      LatticeClassification, MraReport, RationalExponentWitness,
                      check_lattice_condition, classify_det2, dyadic_class,
                      enumerate_expanding, is_expanding,
                      minimal_root_of_identity, mra_equivalence_report,
                      multiplicative_dependence, negative_det_square_check,
                      perfect_power, scalar_power_table_check,
                      scalar_power_witness, scan_classification, scan_to_csv,
                      search_swap_factorization, trivially_equivalent,
                      verify_factorization)
from .spectral import (DEFAULT_TOL, DiagonalMap, SpectralDecomposition,
                       SymMatrix, absolutize, decompose, exact_integer_spectrum,
                       is_expansive, is_positive, power, sym_diag, sym_matrix)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SAMPLES", "DEFAULT_TOL", "CONVERGES_TO_ONE", "CONVERGES_TO_ZERO",
    "OTHER", "CERT_EXACT", "CERT_NUMERIC", "OBSTRUCTION_MISMATCH",
    "OBSTRUCTION_NSD", "REPRESENTATIVES",
    "DensilabError", "NotSymmetric", "NotExpansive", "NotPositive",
    "SingularMatrix", "BadParameter", "NotInvariant", "DegenerateWindow",
    "ParseError", "NotExpanding", "WrongDeterminant", "WrongSign", "BadRow",
    "NotUnimodular", "PreconditionViolated",
    "SymMatrix", "DiagonalMap", "SpectralDecomposition", "sym_matrix",
    "sym_diag", "decompose", "is_expansive", "is_positive", "power",
    "absolutize", "exact_integer_spectrum",
    "Region", "ball", "cube", "ealpha", "gdelta", "fdelta", "cone", "cylinder",
    "complement", "translate", "all_space", "custom_region", "make_region",
    "subspace_basis", "complement_basis", "inverse_power", "DensityEstimate",
    "DensitySeries", "density_ratio", "density_sweep", "classify_series",
    "exact_ealpha_ratio", "cylinder_reduce",
    "EquivalenceVerdict", "Obstruction", "decide_equivalence",
    "simultaneous_diagonalization", "aligned_integer_pairs", "conjugate_map",
    "conjugate_transport",
    "IntMatrix2", "is_expanding", "LatticeClassification", "classify_det2",
    "minimal_root_of_identity", "scalar_power_table_check",
    "negative_det_square_check", "scalar_power_witness", "verify_factorization",
    "search_swap_factorization", "check_lattice_condition",
    "trivially_equivalent", "RationalExponentWitness", "CommonBaseWitness",
    "MraReport", "mra_equivalence_report", "dyadic_class",
    "enumerate_expanding", "scan_classification", "scan_to_csv",
    "perfect_power", "multiplicative_dependence",
    "__version__",
]
