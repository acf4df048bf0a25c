"""Validation of recovered points and per-cell aggregation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from oride_attack.exact_attack import CandidateSet
from oride_attack.geometry import Point
from oride_attack.scoring import TrialReport, aggregate, validate


def cs(*pts: tuple[float, float]) -> CandidateSet:
    return CandidateSet(np.array(pts, dtype=np.float64).reshape(-1, 2))


TRUTH = [Point(0.0, 0.0), Point(1000.0, 1000.0)]


def test_exact_recovery_scores_100():
    truth = [Point(10.0, 20.0), Point(500.0, 700.0), Point(900.0, 100.0)]
    report = validate(cs(*[(p.x, p.y) for p in truth]), truth, rho=0.0)
    assert report.percentage == 100.0
    assert report.valid == report.n == report.eta == 3
    assert all(d == 0.0 for d in report.matched_dist)
    assert all(d == 0.0 for d in report.min_dist_to_truth)


def test_empty_recovery_scores_0():
    report = validate(CandidateSet(np.empty((0, 2))), TRUTH, rho=50.0)
    assert report.percentage == 0.0
    assert report.eta == 0 and report.valid == 0
    assert report.matched_dist == () and report.min_dist_to_truth == ()


def test_empty_truth_scores_0():
    report = validate(cs((1.0, 2.0)), [], rho=50.0)
    assert report.percentage == 0.0 and report.n == 0


def test_overreporting_penalized_by_max_rule():
    # n=2, eta=4, one valid -> 100 * 1 / max(2, 4) = 25.
    recovered = cs((0.0, 0.0), (5000.0, 5000.0), (6000.0, 5000.0), (7000.0, 5000.0))
    report = validate(recovered, TRUTH, rho=0.0)
    assert report.valid == 1
    assert report.percentage == 25.0


def test_one_to_one_matching_under_crowding():
    # Five recovered points around one driver validate only once.
    rho = 50.0
    recovered = cs(*[(float(k), 0.0) for k in range(5)])
    report = validate(recovered, [Point(0.0, 0.0)], rho=rho)
    assert report.valid == 1
    assert report.percentage == 100.0 * 1 / 5


def test_validity_threshold_is_two_rho():
    rho = 50.0
    inside = validate(cs((2 * rho - 0.001, 0.0)), [Point(0, 0)], rho=rho)
    boundary = validate(cs((2 * rho, 0.0)), [Point(0, 0)], rho=rho)
    outside = validate(cs((2 * rho + 0.001, 0.0)), [Point(0, 0)], rho=rho)
    assert inside.valid == 1 and boundary.valid == 1
    assert outside.valid == 0
    assert all(d <= 2 * rho for d in boundary.matched_dist)


def test_zero_rho_threshold_is_eps():
    report = validate(cs((0.0, 1e-7)), [Point(0, 0)], rho=0.0)
    assert report.valid == 1
    report = validate(cs((0.0, 1e-3)), [Point(0, 0)], rho=0.0)
    assert report.valid == 0


def test_greedy_matching_prefers_closest_pairs():
    # Two recovered points near one driver and one near the other: the
    # closest pair matches first, leaving the farther twin unmatched.
    rho = 50.0
    recovered = cs((1.0, 0.0), (30.0, 0.0), (1000.0, 1001.0))
    report = validate(recovered, TRUTH, rho=rho)
    assert report.valid == 2
    assert sorted(report.matched_dist)[0] == pytest.approx(1.0)


def test_min_dist_to_truth_reported_per_point():
    report = validate(cs((0.0, 3.0), (1000.0, 996.0)), TRUTH, rho=50.0)
    assert report.min_dist_to_truth == (3.0, 4.0)


def test_percentage_formula_random_instances():
    rng = np.random.default_rng(71)
    for _ in range(50):
        n = int(rng.integers(1, 12))
        eta = int(rng.integers(0, 12))
        truth = [Point(*xy) for xy in rng.uniform(0, 1000, (n, 2))]
        recovered = CandidateSet(rng.uniform(0, 1000, (eta, 2)))
        report = validate(recovered, truth, rho=60.0)
        assert report.percentage == 100.0 * report.valid / max(n, eta)
        assert 0.0 <= report.percentage <= 100.0
        assert report.valid <= min(n, eta) if eta else report.valid == 0
        assert all(d <= 120.0 for d in report.matched_dist)


def test_validate_rejects_negative_rho():
    with pytest.raises(ValueError):
        validate(cs((0.0, 0.0)), TRUTH, rho=-1.0)


# ---------------------------------------------------------------- aggregate --


def _report(pct: float, eta: int = 10, valid: int = 5, ms: float = 1.0) -> TrialReport:
    return TrialReport(10, eta, valid, pct, (), (), runtime_ms=ms)


def test_aggregate_mean_of_two():
    s = aggregate([_report(50.0), _report(70.0)])
    assert s.mean_pct == 60.0
    assert s.stddev_pct == pytest.approx(math.sqrt(200.0))
    assert s.min_pct == 50.0 and s.max_pct == 60.0 + 10.0
    assert s.per_trial_pct == (50.0, 70.0)


def test_aggregate_identical_reports():
    s = aggregate([_report(42.8)] * 20)
    assert s.count == 20
    assert s.mean_pct == pytest.approx(42.8)
    assert s.stddev_pct == pytest.approx(0.0, abs=1e-9)


def test_aggregate_single_report():
    s = aggregate([_report(33.0)])
    assert s.count == 1 and s.stddev_pct == 0.0


def test_aggregate_side_statistics():
    s = aggregate([_report(0.0, eta=4, valid=1, ms=2.0), _report(0.0, eta=8, valid=3, ms=4.0)])
    assert s.mean_eta == 6.0
    assert s.mean_valid == 2.0
    assert s.mean_runtime_ms == 3.0


def test_aggregate_empty_errors():
    with pytest.raises(ValueError):
        aggregate([])
