"""shiftdyn: weighted backward shifts, their tensor products, and the
computable side of their chaotic dynamics, on log-domain arithmetic."""

from .numerics import (
    LC_ONE,
    LC_ZERO,
    LogComplex,
    lc_abs_log,
    lc_add,
    lc_conj,
    lc_from_cartesian,
    lc_from_complex,
    lc_mul,
    lc_neg,
    lc_pow_int,
    lc_sub,
    lc_to_cartesian,
    lc_to_complex,
    wrap_phase,
)
from .weights import (
    BargmannActionWeights,
    BargmannRawWeights,
    BlockPatternWeights,
    TableWeights,
    ThetaActionWeights,
    ThetaParams,
    ThetaRawWeights,
    WeightSequence,
    bargmann_action_log,
    bargmann_raw_log,
    block_pattern_log,
    theta_action_log,
    theta_raw_log,
    weight_sequence_from_json,
)
from .basis import (
    BargmannBasis,
    CoeffVector,
    ThetaBasis,
    bargmann_basis_eval,
    coeff_add,
    coeff_inner,
    coeff_neg,
    coeff_norm_log,
    coeff_scale,
    coeff_sub,
    synth,
    theta_basis_eval,
)
from .shift_ops import (
    Direction,
    ShiftOperator,
    adjoint,
    adjoint_pairing_gap_log,
    apply,
    apply_power,
    matrix_triplets,
    right_inverse,
    shift_operator_from_json,
)
from .tensor_ops import (
    TensorOperator,
    TensorVector,
    tensor_add,
    tensor_adjoint,
    tensor_adjoint_pairing_gap_log,
    tensor_apply,
    tensor_inner,
    tensor_neg,
    tensor_norm_log,
    tensor_of,
    tensor_operator_from_json,
    tensor_power_apply,
    tensor_right_inverse,
    tensor_right_inverse_apply,
    tensor_scale,
    tensor_sub,
)
from .criteria import (
    BcsReport,
    CriterionReport,
    Verdict,
    bcs_premise_check,
    salas_scan,
    tensor_salas_scan,
)
from .dynamics import (
    EigenSpec,
    OrbitTrace,
    eigen_residual_log,
    eigen_residual_numeric_log,
    eigenvector_build,
    hypercyclic_vector_build,
    orbit,
    periodic_from_target,
    periodic_point_from_eigen,
    periodic_residual_numeric_log,
)
from .errors import (
    IndexBelowOffset,
    OffsetMismatch,
    OverflowNotRepresentable,
    QTooSmall,
    ScheduleOverflow,
    ShiftDynError,
    TableRangeError,
    TailNotCertifiable,
    ValidationError,
)

__version__ = "0.1.0"


def theta_backward_shift(nu: float, alpha: float = 0.0, p: int = 0) -> ShiftOperator:
    """The order-p theta-family backward shift."""
    return ShiftOperator(ThetaActionWeights(ThetaParams(nu=nu, alpha=alpha, p=p)))


def bargmann_backward_shift(p: int = 0) -> ShiftOperator:
    """The order-p shift z^p d^{p+1}/dz^{p+1} on the monomial basis."""
    return ShiftOperator(BargmannActionWeights(p=p))


def default_tensor_shift(p: int = 0, nu: float = 3.141592653589793, alpha: float = 0.0) -> TensorOperator:
    """theta(nu, alpha, p) (x) bargmann(p), the reference chaotic pair."""
    return TensorOperator(theta_backward_shift(nu, alpha, p), bargmann_backward_shift(p))
