"""Constructive spectral theory on cones.

A fixed-point engine that finds eigenvectors of cone-preserving maps
inside the cone, and the pipelines built on it: symmetric eigenvalues
without any classical eigensolver, complete real polynomial
factorization into degree <= 2 pieces without complex arithmetic, a
Perron route for nonnegative matrices, and an exact polyhedral cone
toolkit (duals, extremal rays, separation, image chains). A fully
independent oracle module (Sturm sequences, characteristic polynomials)
exists solely to referee the main pipelines in tests.
"""

from .cones import (
    ChainResult,
    PolyhedralCone,
    SeparatingFunctional,
    chain_iterate,
    contains,
    double_dual_check,
    dual_cone,
    extremal_rays,
    image_cone,
    separate,
)
from .engine import (
    ConeFixedPoint,
    ConeHandle,
    PerronResult,
    birkhoff_eigenvector,
    congruence_action,
    extremal_decomposition_check,
    orthant_handle,
    perron_frobenius,
    psd_handle,
    psd_invariant_form,
)
from .errors import ConeSpectraError
from .polyfactor import (
    FactorList,
    IrreducibleCertificate,
    RootReport,
    SplitOutcome,
    companion_matrix,
    factor_completely,
    polish_factor,
    roots,
    split_once,
    squarefree_decomposition,
)
from .polynomial import Polynomial, format_polynomial
from .spectral import (
    CommutantBasis,
    SpectralCertificate,
    commutant_selfadjoint_basis,
    eigen_decomposition,
    invariant_form_path,
    spectral_eigenvalue,
)

__version__ = "0.1.0"

__all__ = [
    "ChainResult",
    "CommutantBasis",
    "ConeFixedPoint",
    "ConeHandle",
    "ConeSpectraError",
    "FactorList",
    "IrreducibleCertificate",
    "PerronResult",
    "PolyhedralCone",
    "Polynomial",
    "RootReport",
    "SeparatingFunctional",
    "SpectralCertificate",
    "SplitOutcome",
    "birkhoff_eigenvector",
    "chain_iterate",
    "commutant_selfadjoint_basis",
    "companion_matrix",
    "congruence_action",
    "contains",
    "double_dual_check",
    "dual_cone",
    "eigen_decomposition",
    "extremal_decomposition_check",
    "extremal_rays",
    "factor_completely",
    "format_polynomial",
    "image_cone",
    "invariant_form_path",
    "orthant_handle",
    "perron_frobenius",
    "polish_factor",
    "psd_handle",
    "psd_invariant_form",
    "roots",
    "separate",
    "spectral_eigenvalue",
    "split_once",
    "squarefree_decomposition",
    "__version__",
]
