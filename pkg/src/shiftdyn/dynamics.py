"""Orbits, eigenvector series, periodic points and hypercyclic vectors.

The eigenvector of the tensor backward shift for the eigenvalue pair
(lambda, mu) is the rank-one series whose (m, n) coefficient is
lambda^{m-p1} mu^{n-p2} divided by the running products of the factor
action weights up to m and n.  Because the weights grow super-exponentially
the series converges for every (lambda, mu); truncation is chosen
adaptively and certified by geometric domination: once the per-term log
ratio log|lambda| - log a(m+1) is negative (the weights are monotone), the
omitted tail is below a closed-form geometric bound.

Residual evaluation exploits the same telescoping the convergence argument
rests on: for the truncated series, T^q g - (lambda*mu)^q g cancels
identically on the interior and equals -(lambda*mu)^q times the outermost
width-q band of the truncation rectangle.  `eigen_residual_log` evaluates
exactly that band; `eigen_residual_numeric_log` is the generic entrywise
subtraction, whose floor is set by float rounding (~1e-13 relative) rather
than by the truncation, and is kept as an independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .basis import CoeffVector, coeff_add, coeff_norm_log
from .errors import (
    QTooSmall,
    ScheduleOverflow,
    TableRangeError,
    TailNotCertifiable,
    ValidationError,
)
from .numerics import (
    NEG_INF,
    LogComplex,
    lc_from_complex,
    lc_pow_int,
    log_add_exp,
    log_sum_exp,
    wrap_phase,
)
from .shift_ops import Direction, ShiftOperator, apply, apply_power, right_inverse
from .tensor_ops import (
    TensorOperator,
    TensorVector,
    tensor_apply,
    tensor_norm_log,
    tensor_power_apply,
    tensor_scale,
    tensor_sub,
)

_AXIS_CAP = 10_000


@dataclass(slots=True)
class OrbitStep:
    k: int
    log_norm: float
    vector: object | None


@dataclass(slots=True)
class OrbitTrace:
    steps: list[OrbitStep]
    annihilation_k: int | None

    def log_norms(self) -> list[float]:
        return [s.log_norm for s in self.steps]


def orbit(op, seed, k_max: int, keep_vectors: bool = True) -> OrbitTrace:
    """Iterate the operator on a finite-support seed, recording norms.

    Works for single-space and tensor operators; exact annihilation (the
    empty vector) is detected and recorded, after which the trace stays at
    log-norm -inf without further applications.
    """
    if k_max < 0:
        raise ValidationError(f"k_max must be >= 0, got {k_max}")
    if isinstance(op, TensorOperator):
        apply_fn, norm_fn = tensor_apply, tensor_norm_log
    else:
        apply_fn, norm_fn = apply, coeff_norm_log
    steps = []
    annihilation_k = None
    cur = seed
    for k in range(k_max + 1):
        if k > 0:
            cur = apply_fn(op, cur)
        if cur.is_zero and annihilation_k is None:
            annihilation_k = k
        steps.append(OrbitStep(k, norm_fn(cur), cur if keep_vectors else None))
        if cur.is_zero:
            # the zero state is absorbing; fill the remaining slots
            for kk in range(k + 1, k_max + 1):
                steps.append(OrbitStep(kk, NEG_INF, cur if keep_vectors else None))
            break
    return OrbitTrace(steps, annihilation_k)


@dataclass(slots=True)
class EigenSpec:
    lam: complex
    mu: complex
    trunc_m: int
    trunc_n: int
    tail_log_bound: float

    def to_json_dict(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "mu": [self.mu.real, self.mu.imag],
            "trunc_m": self.trunc_m,
            "trunc_n": self.trunc_n,
            "tail_log_bound": self.tail_log_bound,
        }


class _AxisSeries:
    """One axis of the rank-one eigenvector: term logs and tail bounds."""

    def __init__(self, op: ShiftOperator, scale: LogComplex):
        self.op = op
        self.p = op.offset_p
        self.log_scale = scale.logmag
        self.phase_step = scale.phase if not scale.is_zero else 0.0
        self.term_logs = [0.0]
        self.term_phases = [0.0]
        self._last_lw = None
        self.frozen = scale.is_zero

    def __len__(self) -> int:
        return len(self.term_logs)

    def top_index(self) -> int:
        return self.p + len(self.term_logs) - 1

    def extend(self) -> None:
        """Append the next term; weight monotonicity is checked as we go."""
        if self.frozen:
            return
        m_next = self.top_index() + 1
        try:
            lw = self.op.log_action_weight(m_next)
        except TableRangeError as exc:
            raise TailNotCertifiable(
                f"weight table exhausted at index {m_next} before the tail could be certified"
            ) from exc
        if self._last_lw is not None and lw < self._last_lw:
            raise TailNotCertifiable(
                f"action weights are not monotone at index {m_next}; "
                "the geometric tail argument does not apply"
            )
        self._last_lw = lw
        self.term_logs.append(self.term_logs[-1] + self.log_scale - lw)
        self.term_phases.append(wrap_phase(self.term_phases[-1] + self.phase_step))

    def head_sq_log(self, cut: int) -> float:
        """log sum of squared term magnitudes for indices p..cut."""
        hi = min(cut - self.p, len(self.term_logs) - 1)
        return log_sum_exp(2.0 * t for t in self.term_logs[: hi + 1])

    def tail_sq_log(self, cut: int) -> float:
        """Certified log bound on the squared-magnitude sum beyond `cut`.

        The ratio of consecutive squared terms is exp(2*(log_scale - lw)),
        decreasing because the weights increase, so once it is below 1 the
        tail is dominated by the closed-form geometric sum.
        """
        if self.frozen:
            return NEG_INF
        i = cut - self.p + 1  # first omitted term position
        if i < len(self.term_logs):
            first_omitted = self.term_logs[i]
        elif i == len(self.term_logs):
            first_omitted = (
                self.term_logs[-1] + self.log_scale - self.op.log_action_weight(cut + 1)
            )
        else:
            raise TailNotCertifiable("truncation cut beyond materialized terms")
        try:
            ratio_log = 2.0 * (self.log_scale - self.op.log_action_weight(cut + 2))
        except TableRangeError:
            return math.inf
        if not ratio_log < 0.0:
            return math.inf
        first_omitted_sq = 2.0 * first_omitted
        if ratio_log > -700.0:
            return first_omitted_sq - math.log1p(-math.exp(ratio_log))
        return first_omitted_sq

    def full_sq_log(self, cut: int) -> float:
        return log_add_exp(self.head_sq_log(cut), self.tail_sq_log(cut))


def _rect_tail_log(ax1: _AxisSeries, ax2: _AxisSeries, cut1: int, cut2: int) -> float:
    """Certified log bound on the norm omitted outside the rectangle."""
    t1 = ax1.tail_sq_log(cut1)
    t2 = ax2.tail_sq_log(cut2)
    if t1 == math.inf or t2 == math.inf:
        return math.inf
    total_sq = log_add_exp(t1 + ax2.full_sq_log(cut2), ax1.head_sq_log(cut1) + t2)
    return total_sq / 2.0


def _build_eigenvector(
    op: TensorOperator,
    lam_lc: LogComplex,
    mu_lc: LogComplex,
    lam: complex,
    mu: complex,
    tail_tol_log: float,
    band_margin: int,
) -> tuple[TensorVector, EigenSpec]:
    if op.direction is not Direction.BACKWARD:
        raise ValidationError("eigenvectors are built for the backward tensor operator")
    if band_margin < 1:
        raise ValidationError(f"band margin must be >= 1, got {band_margin}")
    p1, p2 = op.offsets
    ax1 = _AxisSeries(op.left, lam_lc)
    ax2 = _AxisSeries(op.right, mu_lc)

    lm_abs = lam_lc.logmag + mu_lc.logmag  # -inf when either eigenvalue is 0
    target = tail_tol_log - max(0.0, lm_abs) if lm_abs != NEG_INF else tail_tol_log

    for ax in (ax1, ax2):
        while not ax.frozen and len(ax) < band_margin + 3:
            ax.extend()

    def certified(margin: int) -> float:
        cut1 = ax1.top_index() - (0 if ax1.frozen else margin)
        cut2 = ax2.top_index() - (0 if ax2.frozen else margin)
        return _rect_tail_log(ax1, ax2, cut1, cut2)

    while True:
        bound = certified(band_margin)
        if bound <= target:
            break
        grew = False
        for ax in (ax1, ax2):
            if not ax.frozen and len(ax) < _AXIS_CAP:
                ax.extend()
                grew = True
        if not grew:
            raise TailNotCertifiable(
                f"tail bound {bound:.3g} not below target {target:.3g} within the axis cap"
            )

    entries: dict[tuple[int, int], LogComplex] = {}
    for i1, s1 in enumerate(ax1.term_logs):
        for i2, s2 in enumerate(ax2.term_logs):
            entries[(p1 + i1, p2 + i2)] = LogComplex(
                s1 + s2, wrap_phase(ax1.term_phases[i1] + ax2.term_phases[i2])
            )
    g = TensorVector((p1, p2), entries)
    spec = EigenSpec(
        lam=lam,
        mu=mu,
        trunc_m=ax1.top_index(),
        trunc_n=ax2.top_index(),
        tail_log_bound=certified(0) if not (ax1.frozen and ax2.frozen) else NEG_INF,
    )
    return g, spec


def eigenvector_build(
    op: TensorOperator,
    lam: complex,
    mu: complex,
    tail_tol_log: float,
    band_margin: int = 1,
) -> tuple[TensorVector, EigenSpec]:
    """Truncated eigenvector of the tensor backward shift for lambda*mu.

    The truncation rectangle is grown until the certified tail bound of the
    rectangle shrunk by `band_margin` is below tail_tol_log (adjusted by
    log|lambda*mu| when that is positive), so the residual band of T^q for
    q <= band_margin is certified as well.
    """
    return _build_eigenvector(
        op, lc_from_complex(lam), lc_from_complex(mu), lam, mu, tail_tol_log, band_margin
    )


def eigen_residual_log(g: TensorVector, lam: complex, mu: complex, q: int = 1) -> float:
    """log ||T^q g - (lambda*mu)^q g|| for a truncated eigenvector g.

    The interior of the truncation telescopes identically (the applied
    weight products are the coefficients' own denominators), leaving
    -(lambda*mu)^q times the outermost width-q band, whose norm is
    evaluated here.
    """
    if q < 1:
        raise ValidationError(f"power must be >= 1, got {q}")
    lm = lc_from_complex(lam * mu)
    if lm.is_zero or g.is_zero:
        return NEG_INF
    trunc_m = max(m for m, _ in g.entries)
    trunc_n = max(n for _, n in g.entries)
    band_sq = log_sum_exp(
        2.0 * c.logmag
        for (m, n), c in g.entries.items()
        if m > trunc_m - q or n > trunc_n - q
    )
    return q * lm.logmag + band_sq / 2.0


def eigen_residual_numeric_log(
    op: TensorOperator, g: TensorVector, lam: complex, mu: complex, q: int = 1
) -> float:
    """log ||T^q g - (lambda*mu)^q g|| by generic entrywise subtraction.

    Floored by float rounding at roughly 1e-13 of ||g||; use the band
    evaluator for tolerances below that.
    """
    if q < 1:
        raise ValidationError(f"power must be >= 1, got {q}")
    scaled = tensor_scale(g, lc_pow_int(lc_from_complex(lam * mu), q))
    return tensor_norm_log(tensor_sub(tensor_power_apply(op, g, q), scaled))


def periodic_residual_numeric_log(op: TensorOperator, g: TensorVector, q: int) -> float:
    """log ||T^q g - g||, the direct periodicity defect.

    Used to confirm that a point of order q is NOT periodic for proper
    divisors of q; for the passing direction (tiny defects) use
    `eigen_residual_log`, since this one bottoms out at float noise.
    """
    if q < 1:
        raise ValidationError(f"power must be >= 1, got {q}")
    return tensor_norm_log(tensor_sub(tensor_power_apply(op, g, q), g))


def periodic_point_from_eigen(
    op: TensorOperator, q_order: int, tail_tol_log: float
) -> TensorVector:
    """A truncated q-periodic point: the eigenvector for a primitive root.

    lambda = mu = exp(i*pi/q) so lambda*mu = exp(2*pi*i/q); both factors
    have exactly unit log-magnitude in the polar representation, and the
    truncation is certified with a width-q residual band.
    """
    if q_order < 1:
        raise ValidationError(f"q_order must be >= 1, got {q_order}")
    phase = math.pi / q_order
    lam = cmath.exp(1j * phase)
    lam_lc = LogComplex(0.0, wrap_phase(phase))
    g, _spec = _build_eigenvector(
        op, lam_lc, lam_lc, lam, lam, tail_tol_log, band_margin=q_order
    )
    return g


def periodic_from_target(
    op: ShiftOperator, y: CoeffVector, q: int, tail_tol_log: float, r_cap: int = 10_000
) -> CoeffVector:
    """Periodic approximant x = sum_r S^{q r} y with T^q x = x up to the tail.

    Requires T^q y = 0 exactly, i.e. q > max(support(y)) - p.  Terms are
    added (always at least the r = 1 correction) until the last retained
    term's norm is at or below tail_tol_log; by telescoping, T^q x - x is
    exactly minus that last term.
    """
    if op.direction is not Direction.BACKWARD:
        raise ValidationError("periodic points are built for the backward operator")
    if y.is_zero:
        return y
    top = max(y.entries) - op.offset_p
    if q <= top:
        raise QTooSmall(f"q must exceed max(support) - p = {top}, got {q}")
    s_op = right_inverse(op)
    x = y
    for r in range(1, r_cap + 1):
        term = apply_power(s_op, y, q * r)
        x = coeff_add(x, term)
        if coeff_norm_log(term) <= tail_tol_log:
            return x
    raise TailNotCertifiable(f"series did not reach tail_tol_log within {r_cap} terms")


def hypercyclic_vector_build(
    op: ShiftOperator,
    targets: list[CoeffVector],
    eps: float,
    n_cap: int = 100_000,
) -> tuple[CoeffVector, list[int]]:
    """A vector whose orbit visits every target within eps, with schedule.

    The vector is sum_j S^{n_j} y_j.  Gaps annihilate all earlier terms
    exactly under T^{n_j} (nilpotence), and each later term is pushed far
    enough up that its pullback norms fit a geometric budget: the i-th term
    contributes at most eps * 2^{-j'} * 2^{-(i-j')} at checkpoint j'.
    """
    if op.direction is not Direction.BACKWARD:
        raise ValidationError("hypercyclic vectors are built over the backward operator")
    if not targets:
        raise ValidationError("at least one target is required")
    if not (eps > 0.0):
        raise ValidationError(f"eps must be > 0, got {eps}")
    for y in targets:
        if y.offset_p != op.offset_p:
            raise ValidationError("targets must share the operator's offset")
    p = op.offset_p
    s_op = right_inverse(op)
    schedule: list[int] = []
    for j, y in enumerate(targets, start=1):
        n = schedule[-1] + 1 if schedule else 1
        if j > 1:
            # exact annihilation of every earlier block under T^{n_j}
            for i, yi in enumerate(targets[: j - 1], start=1):
                if yi.is_zero:
                    continue
                need = schedule[i - 1] + (max(yi.entries) - p) + 1
                n = max(n, need)
        budget = math.log(eps) - j * math.log(2.0)
        while True:
            if n > n_cap:
                raise ScheduleOverflow(
                    f"schedule time exceeded {n_cap}; weights grow too slowly for eps={eps}"
                )
            ok = True
            if not y.is_zero:
                for jp in range(1, j):
                    if coeff_norm_log(apply_power(s_op, y, n - schedule[jp - 1])) > budget:
                        ok = False
                        break
            if ok:
                break
            n += 1
        schedule.append(n)
    psi = CoeffVector(p, {})
    for n, y in zip(schedule, targets):
        psi = coeff_add(psi, apply_power(s_op, y, n))
    return psi, schedule
