"""Orbits, eigenvector series, periodic points, hypercyclic vectors."""

import cmath
import math
import random

import pytest

from shiftdyn import (
    CoeffVector,
    LogComplex,
    QTooSmall,
    ScheduleOverflow,
    ShiftOperator,
    TableWeights,
    TailNotCertifiable,
    TensorOperator,
    ValidationError,
    apply_power,
    bargmann_backward_shift,
    coeff_norm_log,
    coeff_sub,
    default_tensor_shift,
    eigen_residual_log,
    eigen_residual_numeric_log,
    eigenvector_build,
    hypercyclic_vector_build,
    orbit,
    periodic_from_target,
    periodic_point_from_eigen,
    periodic_residual_numeric_log,
    right_inverse,
    tensor_norm_log,
    theta_backward_shift,
)

from conftest import NEG_INF, rand_coeff_vector


def test_orbit_unit_seed_annihilation():
    op = bargmann_backward_shift(0)
    trace = orbit(op, CoeffVector.unit(5, 0), 8)
    assert trace.annihilation_k == 6
    norms = trace.log_norms()
    assert all(math.isfinite(v) for v in norms[:6])
    assert norms[6] == NEG_INF and norms[8] == NEG_INF
    assert len(trace.steps) == 9


def test_orbit_retraces_right_inverse_seed():
    op = theta_backward_shift(math.pi, 0.0, 0)
    s = right_inverse(op)
    seed = apply_power(s, CoeffVector.unit(0, 0), 10)
    trace = orbit(op, seed, 12)
    assert trace.annihilation_k == 11
    norms = trace.log_norms()
    assert all(norms[k + 1] > norms[k] for k in range(10))  # climbing back up
    assert norms[10] == 0.0  # back to the unit vector exactly


def test_orbit_zero_steps():
    op = bargmann_backward_shift(0)
    trace = orbit(op, CoeffVector.unit(2, 0), 0)
    assert len(trace.steps) == 1
    assert trace.steps[0].k == 0
    assert trace.annihilation_k is None


def test_eigenvector_zero_eigenvalues_is_corner():
    op = default_tensor_shift()
    g, spec = eigenvector_build(op, 0.0, 0.0, -60.0)
    assert g.entries == {(0, 0): LogComplex(0.0, 0.0)}
    assert spec.tail_log_bound == NEG_INF
    assert eigen_residual_log(g, 0.0, 0.0) == NEG_INF


def test_eigenvector_first_coefficient():
    op = default_tensor_shift()
    lam, mu = 0.4 + 0.3j, -0.2 + 0.6j
    g, _ = eigenvector_build(op, lam, mu, -60.0)
    # entry (1,1) = lam*mu / (a1(1) * a2(1)); log weights are 1 and 0
    expect_logmag = math.log(abs(lam * mu)) - 1.0
    got = g.entries[(1, 1)]
    assert abs(got.logmag - expect_logmag) <= 1e-12
    assert abs(got.phase - cmath.phase(lam * mu)) <= 1e-12
    assert g.entries[(0, 0)] == LogComplex(0.0, 0.0)


def test_eigenvector_certified_tail_and_residual():
    op = default_tensor_shift()
    rng = random.Random(301)
    for _ in range(8):
        lam = cmath.rect(rng.uniform(0.05, 1.4), rng.uniform(-math.pi, math.pi))
        mu = cmath.rect(rng.uniform(0.05, 1.4), rng.uniform(-math.pi, math.pi))
        g, spec = eigenvector_build(op, lam, mu, -60.0)
        assert spec.tail_log_bound <= -60.0
        rel = eigen_residual_log(g, lam, mu) - tensor_norm_log(g)
        assert rel <= -58.0  # certified band is below the tail tolerance
        # independent cross-check: generic subtraction, float-noise floor
        assert eigen_residual_numeric_log(op, g, lam, mu) - tensor_norm_log(g) <= -20.0


def test_eigenvector_coefficients_against_extended_precision():
    import mpmath

    op = default_tensor_shift()
    lam, mu = 0.7 - 0.4j, -0.35 + 0.55j
    g, _ = eigenvector_build(op, lam, mu, -60.0)
    lam_m = mpmath.mpc(lam.real, lam.imag)
    mu_m = mpmath.mpc(mu.real, mu.imag)
    for m in range(0, 5):
        for n in range(0, 5):
            denom = mpmath.mpf(1)
            for j in range(1, m + 1):
                denom *= mpmath.exp(op.left.log_action_weight(j))
            for j in range(1, n + 1):
                denom *= mpmath.exp(op.right.log_action_weight(j))
            want = lam_m**m * mu_m**n / denom
            got = g.entries[(m, n)]
            assert abs(got.logmag - float(mpmath.log(abs(want)))) <= 1e-11 * max(
                1.0, abs(got.logmag)
            )
            phase_gap = abs(math.remainder(got.phase - float(mpmath.arg(want)), 2 * math.pi))
            assert phase_gap <= 1e-11


def test_certified_band_residual_matches_numeric_at_coarse_tail():
    # with a coarse tail the true residual sits far above float noise, so
    # the band evaluator and the independent entrywise subtraction must agree
    op = default_tensor_shift()
    for lam, mu in ((0.6 + 0.2j, 0.5 - 0.3j), (1.1 + 0.0j, 0.4 + 0.9j)):
        g, _ = eigenvector_build(op, lam, mu, -18.0)
        certified = eigen_residual_log(g, lam, mu)
        numeric = eigen_residual_numeric_log(op, g, lam, mu)
        assert abs(certified - numeric) <= 1e-6 * max(1.0, abs(numeric))


def test_eigenvector_nonzero_offsets():
    rng = random.Random(311)
    for p in (1, 2):
        op = default_tensor_shift(p=p)
        lam = cmath.rect(rng.uniform(0.2, 1.2), rng.uniform(-math.pi, math.pi))
        mu = cmath.rect(rng.uniform(0.2, 1.2), rng.uniform(-math.pi, math.pi))
        g, spec = eigenvector_build(op, lam, mu, -50.0)
        assert g.entries[(p, p)] == LogComplex(0.0, 0.0)
        assert min(m for m, _ in g.entries) == p
        assert min(n for _, n in g.entries) == p
        rel = eigen_residual_log(g, lam, mu) - tensor_norm_log(g)
        assert rel <= -48.0
        assert spec.tail_log_bound <= -50.0


def test_eigenvector_single_zero_axis():
    op = default_tensor_shift()
    g, spec = eigenvector_build(op, 0.0, 0.5 + 0.1j, -50.0)
    assert all(m == 0 for (m, _n) in g.entries)
    assert spec.trunc_m == 0
    assert eigen_residual_log(g, 0.0, 0.5 + 0.1j) == NEG_INF


def test_eigenvector_rejects_non_backward():
    from shiftdyn import tensor_right_inverse

    op = tensor_right_inverse(default_tensor_shift())
    with pytest.raises(ValidationError):
        eigenvector_build(op, 0.5, 0.5, -40.0)


def test_eigenvector_flat_weights_not_certifiable():
    flat = ShiftOperator(TableWeights.from_weights([1.0] * 200))
    op = TensorOperator(flat, ShiftOperator(TableWeights.from_weights([1.0] * 200)))
    with pytest.raises(TailNotCertifiable):
        eigenvector_build(op, 0.9, 0.9, -40.0)


def test_periodic_point_q4():
    op = default_tensor_shift()
    g = periodic_point_from_eigen(op, 4, -60.0)
    lam = cmath.exp(1j * math.pi / 4)
    gnorm = tensor_norm_log(g)
    assert eigen_residual_log(g, lam, lam, q=4) - gnorm <= -55.0
    # genuinely period 4: proper divisors leave a large defect
    assert periodic_residual_numeric_log(op, g, 1) - gnorm >= -5.0
    assert periodic_residual_numeric_log(op, g, 2) - gnorm >= -5.0


def test_periodic_point_q1_fixed_point():
    op = default_tensor_shift()
    g = periodic_point_from_eigen(op, 1, -50.0)
    gnorm = tensor_norm_log(g)
    assert eigen_residual_log(g, 1.0 + 0j, 1.0 + 0j, q=1) - gnorm <= -45.0


def test_periodic_point_rejects_bad_order():
    with pytest.raises(ValidationError):
        periodic_point_from_eigen(default_tensor_shift(), 0, -40.0)


def test_periodic_from_target_support_and_residual():
    op = theta_backward_shift(math.pi, 0.0, 0)
    y = CoeffVector.unit(0, 0)
    q = 3
    x = periodic_from_target(op, y, q, -60.0)
    assert all(m % q == 0 for m in x.support())
    assert len(x.support()) >= 2  # at least the r=1 correction is retained
    # telescoping: T^q x - x is exactly minus the last retained term
    residual = coeff_sub(apply_power(op, x, q), x)
    assert coeff_norm_log(residual) <= -20.0
    top = max(x.support())
    s = right_inverse(op)
    last_term = apply_power(s, y, top)
    assert abs(coeff_norm_log(last_term) - coeff_norm_log(residual)) <= 1e-6 or coeff_norm_log(
        residual
    ) == NEG_INF


def test_periodic_from_target_two_term_case():
    # when the first correction is already below tolerance the result is
    # x = y + S^q y, never bare y
    op = theta_backward_shift(math.pi, 0.0, 0)
    y = CoeffVector.unit(0, 0)
    x = periodic_from_target(op, y, 12, -30.0)
    assert x.support() == [0, 12]


def test_periodic_from_target_approximation_improves_with_q():
    op = bargmann_backward_shift(0)
    rng = random.Random(303)
    y = rand_coeff_vector(rng, 0, 4, 5)
    q0 = max(y.support()) + 1
    errs = []
    for q in (q0, 2 * q0, 4 * q0):
        x = periodic_from_target(op, y, q, -80.0)
        errs.append(coeff_norm_log(coeff_sub(x, y)))
    assert errs[0] > errs[1] > errs[2]


def test_periodic_from_target_q_too_small():
    op = bargmann_backward_shift(0)
    y = CoeffVector.unit(5, 0)
    with pytest.raises(QTooSmall):
        periodic_from_target(op, y, 5, -40.0)


def test_hypercyclic_single_target_exact():
    op = bargmann_backward_shift(0)
    y = CoeffVector.unit(0, 0)
    psi, schedule = hypercyclic_vector_build(op, [y], 1e-8)
    assert len(schedule) == 1
    replay = apply_power(op, psi, schedule[0])
    assert replay.entries == y.entries  # unit-chain roundtrip is exact


def test_hypercyclic_two_targets_replay():
    op = bargmann_backward_shift(0)
    t1 = CoeffVector.unit(0, 0)
    t2 = CoeffVector(0, {0: LogComplex(0.0, 0.0), 1: LogComplex(0.0, 0.0)})
    psi, schedule = hypercyclic_vector_build(op, [t1, t2], 1e-6)
    assert schedule[0] < schedule[1]
    for n, y in zip(schedule, (t1, t2)):
        err = coeff_norm_log(coeff_sub(apply_power(op, psi, n), y))
        assert err <= math.log(1e-6)


def test_hypercyclic_orbit_replay_via_trace():
    op = bargmann_backward_shift(0)
    rng = random.Random(307)
    targets = [rand_coeff_vector(rng, 0, 3, 4) for _ in range(3)]
    psi, schedule = hypercyclic_vector_build(op, targets, 1e-6)
    trace = orbit(op, psi, max(schedule))
    for n, y in zip(schedule, targets):
        err = coeff_norm_log(coeff_sub(trace.steps[n].vector, y))
        assert err <= math.log(1e-6)


def test_hypercyclic_schedule_overflow_on_flat_weights():
    flat = ShiftOperator(TableWeights.from_weights([1.0] * 300))
    targets = [CoeffVector.unit(0, 0), CoeffVector.unit(1, 0)]
    with pytest.raises(ScheduleOverflow):
        hypercyclic_vector_build(flat, targets, 1e-6, n_cap=100)


def test_hypercyclic_validations():
    op = bargmann_backward_shift(0)
    with pytest.raises(ValidationError):
        hypercyclic_vector_build(op, [], 1e-6)
    with pytest.raises(ValidationError):
        hypercyclic_vector_build(op, [CoeffVector.unit(0, 0)], 0.0)
    with pytest.raises(ValidationError):
        hypercyclic_vector_build(op, [CoeffVector.unit(1, 1)], 1e-6)
