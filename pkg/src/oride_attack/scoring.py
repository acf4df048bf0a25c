"""Scoring of recovered locations against ground truth.

A recovered point is valid when it lies within 2*rho of a true driver
location (within the geometric tolerance for noiseless runs), and each driver
can validate at most one point: pairs are matched greedily, closest first.
The recovery percentage is 100 * valid / max(n, eta), penalizing both missed
drivers and over-reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact_attack import CandidateSet
from .geometry import EPS, Point


@dataclass(frozen=True)
class TrialReport:
    n: int
    eta: int
    valid: int
    percentage: float
    min_dist_to_truth: tuple[float, ...]  # per recovered point
    matched_dist: tuple[float, ...]  # per validated pair
    runtime_ms: float = 0.0


@dataclass(frozen=True)
class ExperimentSummary:
    count: int
    mean_pct: float
    stddev_pct: float
    min_pct: float
    max_pct: float
    mean_eta: float
    mean_valid: float
    mean_runtime_ms: float
    per_trial_pct: tuple[float, ...]


def validate(
    recovered: CandidateSet,
    truth: Sequence[Point],
    rho: float,
    eps: float = EPS,
) -> TrialReport:
    """Match recovered points one-to-one to nearby drivers and score the trial."""
    if rho < 0:
        raise ValueError(f"noise radius must be >= 0, got rho={rho}")
    threshold = 2.0 * rho if rho > 0 else eps
    eta = len(recovered)
    n = len(truth)
    if eta == 0 or n == 0:
        return TrialReport(n, eta, 0, 0.0, (), ())

    rec = recovered.coords
    tru = np.array([(p.x, p.y) for p in truth], dtype=np.float64)
    dx = rec[:, 0][:, None] - tru[:, 0][None, :]
    dy = rec[:, 1][:, None] - tru[:, 1][None, :]
    dist = np.sqrt(dx * dx + dy * dy)
    min_dist = dist.min(axis=1)

    # Greedy closest-first one-to-one matching within the threshold.
    ri, ti = np.nonzero(dist <= threshold)
    order = np.lexsort((ti, ri, dist[ri, ti]))
    rec_used = np.zeros(eta, dtype=bool)
    tru_used = np.zeros(n, dtype=bool)
    matched: list[float] = []
    for k in order:
        i = ri[k]
        j = ti[k]
        if rec_used[i] or tru_used[j]:
            continue
        rec_used[i] = True
        tru_used[j] = True
        matched.append(float(dist[i, j]))
    valid = len(matched)
    pct = 100.0 * valid / max(n, eta)
    return TrialReport(
        n, eta, valid, pct, tuple(float(d) for d in min_dist), tuple(matched)
    )


def aggregate(trials: Sequence[TrialReport]) -> ExperimentSummary:
    """Mean/spread of the recovery percentage over a cell's trials."""
    if not trials:
        raise ValueError("no trials to aggregate")
    pct = [t.percentage for t in trials]
    mean = sum(pct) / len(pct)
    if len(pct) > 1:
        var = sum((p - mean) ** 2 for p in pct) / (len(pct) - 1)
        stddev = math.sqrt(var)
    else:
        stddev = 0.0
    return ExperimentSummary(
        count=len(trials),
        mean_pct=mean,
        stddev_pct=stddev,
        min_pct=min(pct),
        max_pct=max(pct),
        mean_eta=sum(t.eta for t in trials) / len(trials),
        mean_valid=sum(t.valid for t in trials) / len(trials),
        mean_runtime_ms=sum(t.runtime_ms for t in trials) / len(trials),
        per_trial_pct=tuple(pct),
    )
