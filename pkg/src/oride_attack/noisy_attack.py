"""Location recovery from noise-perturbed permuted distance lists.

With location noise of radius rho, a disclosed radius differs from the true
driver distance by at most rho, so exact circle membership no longer works.
Instead, a candidate point survives an adversary when one of that adversary's
circles comes within 2*rho of it, i.e. crosses the circle of radius 2*rho
around the candidate.  Two independently filtered candidate sets are built
from two pivot pairs; a point is reported only when both sets agree on it to
within the matching radius tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .exact_attack import CandidateSet, obtain_circle_intersection_points
from .geometry import EPS, Point
from .world import ConfigurationError, DistanceList, ScenarioParams

NEARBY_FILTER_MODES = ("dedup", "pseudocode")


@dataclass(frozen=True)
class NoisyStages:
    """Intermediate candidate sets of one noisy attack run."""

    pivot_a: CandidateSet  # pivot pair (1, 2) after per-adversary filtering
    pivot_b: CandidateSet  # pivot pair (3, 4) after per-adversary filtering
    pruned_a: CandidateSet
    pruned_b: CandidateSet
    final: CandidateSet


def filter_out_superfluous_points(
    dlist: DistanceList,
    pos: Point,
    candidates: CandidateSet,
    rho: float,
    eps: float = EPS,
) -> CandidateSet:
    """Keep candidates whose 2*rho circle is crossed by one of the adversary's
    circles (tangency counts, containment without crossing does not)."""
    if rho <= 0:
        raise ConfigurationError(f"noise radius must be > 0, got rho={rho}")
    mask = kernels.band_mask(
        candidates.coords, pos.x, pos.y, dlist.radii, 2.0 * rho, eps
    )
    return CandidateSet(candidates.coords[mask])


def filter_out_nearby_invalid_points(
    candidates: CandidateSet,
    tau: float,
    mode: str = "dedup",
    scores: np.ndarray | None = None,
) -> CandidateSet:
    """Collapse groups of candidates closer than tau.

    mode="dedup": greedy scan keeping the first point of each tau-cluster;
    isolated points survive.  When ``scores`` is given, the scan visits
    candidates in ascending score order so the best-supported point of each
    cluster becomes its representative.  mode="pseudocode": keep a point only
    when a later point of the scan lies within tau, so isolated points are
    dropped and a tau-cluster loses its last member.
    """
    if tau <= 0:
        raise ConfigurationError(f"matching radius must be > 0, got tau={tau}")
    if mode == "dedup":
        coords = candidates.coords
        if scores is not None and coords.shape[0] > 1:
            coords = np.ascontiguousarray(coords[np.argsort(scores, kind="stable")])
        mask = kernels.dedup_leaders_mask(coords, tau)
        return CandidateSet(coords[mask])
    if mode == "pseudocode":
        mask = kernels.has_later_neighbor_mask(candidates.coords, tau)
        return CandidateSet(kernels.unique_rows_stable(candidates.coords[mask]))
    raise ConfigurationError(f"unknown nearby filter mode {mode!r}")


def select_likely_points(
    set_a: CandidateSet, set_b: CandidateSet, tau: float, eps: float = EPS
) -> CandidateSet:
    """Points of set_a confirmed by a distinct point of set_b within tau.

    A point of set_b equal to the probe (coordinate-wise within eps) does not
    count as confirmation.
    """
    if tau <= 0:
        raise ConfigurationError(f"matching radius must be > 0, got tau={tau}")
    mask = kernels.near_partner_mask(set_a.coords, set_b.coords, tau, eps)
    return CandidateSet(kernels.unique_rows_stable(set_a.coords[mask]))


def noisy_attack_stages(
    positions: Sequence[Point],
    lists: Sequence[DistanceList],
    rho: float,
    tau: float,
    mode: str = "dedup",
    eps: float = EPS,
    crowded_tau: float | None = None,
    flood_factor: float = 3.0,
) -> NoisyStages:
    """Full noisy-attack pipeline, keeping the intermediate candidate sets.

    Pivot pair (adversary 1, 2) and pivot pair (3, 4) each produce a candidate
    set filtered through all other adversaries; the sets are then pruned of
    nearby points and matched against each other.

    With ``crowded_tau`` set, pruning first runs at 2*rho; when the larger
    pruned list still holds more than ``flood_factor * n`` points it is ghost
    dominated, and pruning plus selection rerun at the wider ``crowded_tau``.
    Otherwise selection uses ``tau``.
    """
    m = len(positions)
    if m < 4:
        raise ConfigurationError(f"noisy attack needs at least 4 adversaries, got {m}")
    if len(lists) != m:
        raise ConfigurationError("one distance list per adversary required")
    if rho <= 0:
        raise ConfigurationError(f"noisy attack needs rho > 0, got rho={rho}")

    cand_a = obtain_circle_intersection_points(lists[0], positions[0], lists[1], positions[1], eps)
    for g in range(2, m):
        cand_a = filter_out_superfluous_points(lists[g], positions[g], cand_a, rho, eps)

    cand_b = obtain_circle_intersection_points(lists[2], positions[2], lists[3], positions[3], eps)
    for g in (0, 1, *range(4, m)):
        cand_b = filter_out_superfluous_points(lists[g], positions[g], cand_b, rho, eps)

    if mode == "dedup":
        centers = np.array([(p.x, p.y) for p in positions], dtype=np.float64)
        radii = np.ascontiguousarray(np.stack([dl.radii for dl in lists]))
        score_a = kernels.residual_score(cand_a.coords, centers, radii)
        score_b = kernels.residual_score(cand_b.coords, centers, radii)
    else:
        score_a = score_b = None

    if crowded_tau is None:
        pruned_a = filter_out_nearby_invalid_points(cand_a, tau, mode, score_a)
        pruned_b = filter_out_nearby_invalid_points(cand_b, tau, mode, score_b)
        select_tau = tau
    else:
        n = len(lists[0])
        pruned_a = filter_out_nearby_invalid_points(cand_a, 2.0 * rho, mode, score_a)
        pruned_b = filter_out_nearby_invalid_points(cand_b, 2.0 * rho, mode, score_b)
        if max(len(pruned_a), len(pruned_b)) > flood_factor * n:
            pruned_a = filter_out_nearby_invalid_points(cand_a, crowded_tau, mode, score_a)
            pruned_b = filter_out_nearby_invalid_points(cand_b, crowded_tau, mode, score_b)
            select_tau = crowded_tau
        else:
            select_tau = tau
    final = select_likely_points(pruned_a, pruned_b, select_tau, eps).sorted_lex()
    return NoisyStages(cand_a, cand_b, pruned_a, pruned_b, final)


def run_noisy_attack(
    positions: Sequence[Point],
    lists: Sequence[DistanceList],
    params: ScenarioParams,
    eps: float = EPS,
) -> CandidateSet:
    """Recover approximate driver locations from noisy rounds of m >= 4 adversaries."""
    stages = noisy_attack_stages(
        positions,
        lists,
        params.rho,
        params.tau,
        params.nearby_filter,
        eps,
        params.crowded_tau,
        params.flood_factor,
    )
    return stages.final
