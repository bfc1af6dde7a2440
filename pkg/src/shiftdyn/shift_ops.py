"""Weighted shift operators on a single coefficient space.

A `ShiftOperator` couples an action-weight sequence a(m) (defined for
m >= p+1) with a direction:

* backward        -- e_m -> a(m) e_{m-1} for m > p, e_p -> exact zero
* right inverse   -- e_m -> (1/a(m+1)) e_{m+1}; the backward shift composed
                     after it is the identity, with the log-weight added
                     back being the very float that was subtracted
* adjoint forward -- e_m -> a(m+1) e_{m+1}, the adjoint of the backward
                     shift (weights are real positive)

All applications act entrywise on finite-support vectors; weights never
touch phases, so phases survive every direction bit-for-bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .basis import CoeffVector
from .errors import OffsetMismatch, ValidationError
from .numerics import LogComplex, lc_sub
from .weights import WeightSequence


class Direction(enum.Enum):
    BACKWARD = "backward"
    RIGHT_INVERSE = "right_inverse"
    ADJOINT_FORWARD = "adjoint_forward"


@dataclass(frozen=True, slots=True)
class ShiftOperator:
    weights: WeightSequence
    direction: Direction = Direction.BACKWARD

    @property
    def offset_p(self) -> int:
        return self.weights.offset_p

    def log_action_weight(self, m: int) -> float:
        return self.weights.log_weight(m)

    def to_json_dict(self) -> dict:
        return {"direction": self.direction.value, "weights": self.weights.to_json_dict()}


def right_inverse(op: ShiftOperator) -> ShiftOperator:
    if op.direction is not Direction.BACKWARD:
        raise ValidationError("right inverse is defined for the backward direction")
    return ShiftOperator(op.weights, Direction.RIGHT_INVERSE)


def adjoint(op: ShiftOperator) -> ShiftOperator:
    if op.direction is Direction.BACKWARD:
        return ShiftOperator(op.weights, Direction.ADJOINT_FORWARD)
    if op.direction is Direction.ADJOINT_FORWARD:
        return ShiftOperator(op.weights, Direction.BACKWARD)
    raise ValidationError("adjoint of the right inverse is not represented")


def _check_offsets(op: ShiftOperator, v: CoeffVector) -> None:
    if v.offset_p != op.offset_p:
        raise OffsetMismatch(
            f"vector offset {v.offset_p} does not match operator offset {op.offset_p}"
        )


def apply(op: ShiftOperator, v: CoeffVector) -> CoeffVector:
    """One application of the operator, extended linearly over the support."""
    _check_offsets(op, v)
    p = op.offset_p
    out: dict[int, LogComplex] = {}
    if op.direction is Direction.BACKWARD:
        for m, c in v.entries.items():
            if m == p:
                continue
            out[m - 1] = LogComplex(c.logmag + op.log_action_weight(m), c.phase)
    elif op.direction is Direction.RIGHT_INVERSE:
        for m, c in v.entries.items():
            out[m + 1] = LogComplex(c.logmag - op.log_action_weight(m + 1), c.phase)
    else:
        for m, c in v.entries.items():
            out[m + 1] = LogComplex(c.logmag + op.log_action_weight(m + 1), c.phase)
    return CoeffVector(p, out)


def _weight_span_log(op: ShiftOperator, lo: int, hi: int) -> float:
    """Sum of log action weights over source indices lo..hi, ascending."""
    acc = 0.0
    for j in range(lo, hi + 1):
        acc += op.log_action_weight(j)
    return acc


def apply_power(op: ShiftOperator, v: CoeffVector, k: int) -> CoeffVector:
    """k-fold application, with the weight product taken as one log-sum.

    For the backward direction the output is exactly zero on any entry with
    k > m - p; past the whole support the result is the exact zero vector.
    """
    if k < 0:
        raise ValidationError(f"power must be >= 0, got {k}")
    _check_offsets(op, v)
    if k == 0:
        return CoeffVector(v.offset_p, dict(v.entries))
    p = op.offset_p
    out: dict[int, LogComplex] = {}
    if op.direction is Direction.BACKWARD:
        for m, c in v.entries.items():
            if k > m - p:
                continue
            s = _weight_span_log(op, m - k + 1, m)
            out[m - k] = LogComplex(c.logmag + s, c.phase)
    elif op.direction is Direction.RIGHT_INVERSE:
        for m, c in v.entries.items():
            s = _weight_span_log(op, m + 1, m + k)
            out[m + k] = LogComplex(c.logmag - s, c.phase)
    else:
        for m, c in v.entries.items():
            s = _weight_span_log(op, m + 1, m + k)
            out[m + k] = LogComplex(c.logmag + s, c.phase)
    return CoeffVector(p, out)


def adjoint_pairing_gap_log(op: ShiftOperator, u: CoeffVector, v: CoeffVector) -> float:
    """log |<T u, v> - <u, T* v>|; -inf when the pairing matches exactly."""
    from .basis import coeff_inner

    lhs = coeff_inner(apply(op, u), v)
    rhs = coeff_inner(u, apply(adjoint(op), v))
    return lc_sub(lhs, rhs).logmag


def matrix_triplets(op: ShiftOperator, n_max: int) -> list[tuple[int, int, float]]:
    """Sparse triplets (row, col, log-weight) of the truncated matrix.

    Covers basis columns up to n_max; all row/col indices stay in
    [offset_p, n_max].
    """
    p = op.offset_p
    if n_max <= p:
        raise ValidationError(f"truncation must exceed the offset {p}, got {n_max}")
    if op.direction is Direction.BACKWARD:
        return [(m - 1, m, op.log_action_weight(m)) for m in range(p + 1, n_max + 1)]
    if op.direction is Direction.RIGHT_INVERSE:
        return [(m + 1, m, -op.log_action_weight(m + 1)) for m in range(p, n_max)]
    return [(m + 1, m, op.log_action_weight(m + 1)) for m in range(p, n_max)]


def shift_operator_from_json(obj: dict) -> ShiftOperator:
    from .weights import weight_sequence_from_json

    try:
        direction = Direction(obj.get("direction", "backward"))
    except ValueError:
        raise ValidationError(f"unknown direction {obj.get('direction')!r}") from None
    return ShiftOperator(weight_sequence_from_json(obj["weights"]), direction)
