"""Separability of bipartite quantum states from the largest separable balls around the identity."""

__version__ = "0.1.0"

from .bipartite import (
    BipartiteShape,
    PureState,
    SchmidtData,
    embedded_bell,
    maximally_entangled,
    partial_transpose,
    product_state,
    pure_pt_spectrum,
    schmidt,
    swap_operator,
)
from .criteria import (
    CriterionReport,
    Verdict,
    analyze,
    frobenius_ball_test,
    pball_membership,
    ppt_test,
    purity_test,
    scaled_separability_test,
    scaling_score,
)
from .estimator import SeparabilityClassifier
from .exceptions import (
    DegenerateShapeError,
    InvalidInputError,
    InvalidParameterError,
    InvalidShapeError,
    NotAProjectorError,
    NotPSDError,
    NumericError,
    SepballError,
)
from .extremal import (
    antisymmetric_projector,
    ball_radius,
    interior_boundary_delta,
    npt_witness,
    projector_negativity,
    pseudopure_bounds,
    pure_perturbation_thresholds,
    pure_pt_negativity,
)
from .linalg import (
    block_norm_compression,
    hermitian_eigensystem,
    psd_check,
    singular_values,
    spectral_p_norm,
)
from .stategen import Stream, random_density, random_projector, random_pure
from .toeplitz import (
    BlockToeplitz,
    SeparableDecomposition,
    assemble,
    contraction_certificate,
    separable_decomposition,
    verify_decomposition,
)
from .validation import INF
