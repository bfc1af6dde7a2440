"""Weight families: closed forms, action weights, block pattern, tables."""

import math
from fractions import Fraction

import numpy as np
import pytest

from shiftdyn import (
    BargmannActionWeights,
    BargmannRawWeights,
    BlockPatternWeights,
    IndexBelowOffset,
    TableRangeError,
    TableWeights,
    ThetaActionWeights,
    ThetaParams,
    ThetaRawWeights,
    ValidationError,
    bargmann_action_log,
    bargmann_raw_log,
    block_pattern_log,
    theta_action_log,
    theta_raw_log,
    weight_sequence_from_json,
)

LN2 = math.log(2.0)


def bargmann_action_oracle(n: int, p: int) -> float:
    """Symbolic differentiation of z^p d^{p+1}/dz^{p+1} on z^n/sqrt(n!).

    The derivative gives n!/(n-p-1)! * z^{n-1}; re-expressed on the
    orthonormal monomials the coefficient is that integer over sqrt(n),
    so the squared weight is the exact rational (n!/(n-p-1)!)^2 / n.
    """
    c = 1
    for j in range(n - p, n + 1):
        c *= j  # n! / (n-p-1)!
    sq = Fraction(c * c, n)
    return 0.5 * math.log(sq)


def test_theta_raw_closed_form_examples():
    assert abs(theta_raw_log(0, ThetaParams(nu=math.pi)) - 1.0) <= 1e-15
    assert abs(theta_raw_log(3, ThetaParams(nu=2 * math.pi, alpha=1.0)) - 5.5) <= 1e-12


def test_theta_raw_constant_increment():
    for nu, alpha in [(math.pi, 0.0), (1.7, -0.4), (2 * math.pi, 1.0)]:
        params = ThetaParams(nu=nu, alpha=alpha)
        step = 2 * math.pi / nu
        for m in range(0, 60):
            inc = theta_raw_log(m + 1, params) - theta_raw_log(m, params)
            assert abs(inc - step) <= 1e-9 * max(1.0, step)


def test_theta_raw_negative_index():
    with pytest.raises(IndexBelowOffset):
        theta_raw_log(-1, ThetaParams(nu=1.0))


def test_theta_params_invariants():
    with pytest.raises(ValidationError):
        ThetaParams(nu=0.0)
    with pytest.raises(ValidationError):
        ThetaParams(nu=-2.0)
    with pytest.raises(ValidationError):
        ThetaParams(nu=1.0, p=-1)


def test_theta_action_p0_equals_raw_shifted():
    params = ThetaParams(nu=math.pi, alpha=0.3, p=0)
    for m in range(1, 201):
        assert theta_action_log(m, params) == theta_raw_log(m - 1, params)


def test_theta_action_example_p1():
    # log a(2) = log w(1) + 2 log w(0) = 3 + 2 = 5 at nu=pi, alpha=0
    assert abs(theta_action_log(2, ThetaParams(nu=math.pi, p=1)) - 5.0) <= 1e-12


def test_theta_action_monotone_increment():
    for p in range(4):
        for nu, alpha in [(math.pi, 0.0), (2.0, 0.5)]:
            params = ThetaParams(nu=nu, alpha=alpha, p=p)
            expected = (2 * p + 1) * (2 * math.pi / nu)
            for m in range(p + 1, 51):
                inc = theta_action_log(m + 1, params) - theta_action_log(m, params)
                assert abs(inc - expected) <= 1e-9 * max(1.0, expected)


def test_theta_action_below_offset():
    params = ThetaParams(nu=1.0, p=2)
    for m in (0, 1, 2):
        with pytest.raises(IndexBelowOffset):
            theta_action_log(m, params)


def test_bargmann_raw():
    for n in range(0, 50):
        assert bargmann_raw_log(n) == 0.5 * math.log(n + 1.0)


def test_bargmann_action_against_symbolic_oracle():
    for p in range(0, 4):
        for n in range(p + 1, 40):
            assert abs(bargmann_action_log(n, p) - bargmann_action_oracle(n, p)) <= 1e-12


def test_bargmann_action_examples():
    assert abs(bargmann_action_log(4, 0) - math.log(2.0)) <= 1e-12
    assert abs(bargmann_action_log(2, 1) - 0.5 * math.log(2.0)) <= 1e-12
    with pytest.raises(IndexBelowOffset):
        bargmann_action_log(3, 3)


def test_bargmann_action_p0_is_sqrt_n():
    for n in range(1, 201):
        assert abs(bargmann_action_log(n, 0) - 0.5 * math.log(n)) <= 1e-12


def test_block_pattern_prefix_matches_display():
    omega = [block_pattern_log(i, "omega") for i in range(1, 6)]
    assert omega == [LN2, -LN2, -LN2, LN2, LN2]
    varpi = [block_pattern_log(i, "varpi") for i in range(1, 6)]
    assert varpi == [-LN2, LN2, LN2, -LN2, -LN2]


def test_block_pattern_reciprocal_pair_exact():
    for i in range(1, 5000):
        assert block_pattern_log(i, "omega") + block_pattern_log(i, "varpi") == 0.0


def test_block_pattern_block_structure():
    # run k spans the k indices after the (k-1)-th triangular number;
    # odd runs are twos, even runs are halves
    for k in range(1, 40):
        lo = k * (k - 1) // 2 + 1
        expected = LN2 if k % 2 == 1 else -LN2
        for i in range(lo, lo + k):
            assert block_pattern_log(i, "omega") == expected


def test_block_pattern_partial_sums_swing_both_ways():
    # after run k the partial log2-sum is (k+1)/2 for odd k, -k/2 for even k
    w = BlockPatternWeights(role="omega")
    acc = 0.0
    for k in range(1, 60):
        lo = k * (k - 1) // 2 + 1
        for i in range(lo, lo + k):
            acc += w.log_weight(i)
        expected = (k + 1) // 2 if k % 2 == 1 else -(k // 2)
        assert abs(acc - expected * LN2) <= 1e-9


def test_block_pattern_running_max_unbounded_both_roles():
    for role in ("omega", "varpi"):
        w = BlockPatternWeights(role=role)
        idx = np.arange(1, 1_000_000, dtype=np.int64)
        partials = np.cumsum(w.log_weights(idx))
        running_max = np.maximum.accumulate(partials)
        # every K*ln2 level up to K=32 is attained within the first 1e6 terms
        for k in range(1, 33):
            assert running_max[-1] >= k * LN2


def test_block_pattern_vector_matches_scalar():
    w = BlockPatternWeights(role="varpi")
    idx = np.arange(1, 3000, dtype=np.int64)
    bulk = w.log_weights(idx)
    for i, v in zip(idx, bulk):
        assert v == block_pattern_log(int(i), "varpi")


def test_all_families_positive_finite():
    seqs = [
        ThetaRawWeights(ThetaParams(nu=1.3, alpha=-0.7)),
        ThetaActionWeights(ThetaParams(nu=2.2, alpha=0.1, p=2)),
        BargmannRawWeights(),
        BargmannActionWeights(p=1),
        BlockPatternWeights(role="omega"),
        TableWeights.from_weights([0.5, 2.0, 3.5]),
    ]
    for w in seqs:
        for i in range(w.scan_start, w.scan_start + 3):
            v = w.log_weight(i)
            assert math.isfinite(v)


def test_table_weights():
    t = TableWeights.from_weights([1.0, 2.0, 0.25], start=1)
    assert t.log_weight(1) == 0.0
    assert t.log_weight(2) == math.log(2.0)
    assert t.log_weight(3) == math.log(0.25)
    with pytest.raises(TableRangeError):
        t.log_weight(4)
    with pytest.raises(TableRangeError):
        t.log_weight(0)
    with pytest.raises(ValidationError):
        TableWeights.from_weights([1.0, -2.0])


def test_scan_start_per_family():
    assert ThetaRawWeights(ThetaParams(nu=1.0)).scan_start == 1
    assert ThetaActionWeights(ThetaParams(nu=1.0, p=2)).scan_start == 3
    assert BargmannActionWeights(p=1).scan_start == 2
    assert BlockPatternWeights().scan_start == 1
    assert TableWeights.from_weights([1.0], start=5).scan_start == 5


def test_json_round_trip_all_families():
    seqs = [
        ThetaRawWeights(ThetaParams(nu=1.3, alpha=-0.7)),
        ThetaActionWeights(ThetaParams(nu=2.2, alpha=0.1, p=2)),
        BargmannRawWeights(),
        BargmannActionWeights(p=1),
        BlockPatternWeights(role="varpi"),
        TableWeights.from_weights([1.0, 2.0], start=3),
    ]
    for w in seqs:
        w2 = weight_sequence_from_json(w.to_json_dict())
        assert w2.family == w.family
        for i in range(w.scan_start, w.scan_start + 2):
            assert abs(w2.log_weight(i) - w.log_weight(i)) <= 1e-15


def test_json_rejects_bad_specs():
    with pytest.raises(ValidationError):
        weight_sequence_from_json({"family": "nope"})
    with pytest.raises(ValidationError):
        weight_sequence_from_json({"family": "theta_raw", "nu": -1.0})
    with pytest.raises(ValidationError):
        weight_sequence_from_json([1, 2, 3])
