"""Length-seven power sum decompositions of ternary quartics."""

from .binary import (
    BinaryContext,
    Frame,
    ProjMap,
    ProjPoint,
    binary_context,
    frame_from_matrix,
    is_square,
    make_frame,
    omega_map,
    omega_point,
    quadric_perp,
    roots_of_dual_quadratic,
    standard_frame,
    sum_of_squares_coeffs,
)
from .decompose import FailureReason, Reason, Result, decompose_seven, decompose_six, verify
from .experiments import (
    GeneratorSpec,
    Kind,
    experiment_special_cases,
    generate,
    incidence_check,
    probe_frames,
)
from .poly import (
    DUAL,
    PRIMAL,
    Decomposition,
    DecompositionTerm,
    HomogeneousForm,
    antiderivative,
    apolar_apply,
    catalecticant_matrix,
    dual,
    dual_multiply,
    evaluate_dual,
    power_of_linear,
    primal,
)
from .theta import ThetaChain, build_chain, build_theta, fixed_points, lambda_functional, psi_apply
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"
