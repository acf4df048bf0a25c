"""Location recovery from noiseless permuted distance lists.

With exact distances every driver lies on one circle per adversary, so the
pairwise intersections of two adversaries' circle families contain all driver
locations plus spurious crossings.  Keeping only the points that also land on
a circle of every remaining adversary removes the spurious ones: a wrong
pairing survives one extra adversary only by coincidence, and all of them
only on a measure-zero set of configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .geometry import EPS, Circle, Point, circle_intersection, distance, point_on_circle
from .world import ConfigurationError, DistanceList


@dataclass(frozen=True)
class CandidateSet:
    """An ordered set of candidate locations, stored as a (k, 2) float array."""

    coords: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coords = np.ascontiguousarray(self.coords, dtype=np.float64).reshape(-1, 2)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_points(cls, pts: Iterable[Point]) -> "CandidateSet":
        return cls(np.array([(p.x, p.y) for p in pts], dtype=np.float64).reshape(-1, 2))

    @property
    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.coords]

    def sorted_lex(self) -> "CandidateSet":
        order = np.lexsort((self.coords[:, 1], self.coords[:, 0]))
        return CandidateSet(self.coords[order])

    def __len__(self) -> int:
        return int(self.coords.shape[0])

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)


def obtain_circle_intersection_points(
    list_a: DistanceList,
    pos_a: Point,
    list_b: DistanceList,
    pos_b: Point,
    eps: float = EPS,
) -> CandidateSet:
    """All pairwise intersections of two adversaries' circle families.

    At most 2 * len(a) * len(b) points, in (i, j) scan order.
    """
    if distance(pos_a, pos_b) <= eps:
        raise ConfigurationError("pivot adversaries coincide")
    pts = kernels.pairwise_circle_intersections(
        pos_a.x, pos_a.y, list_a.radii, pos_b.x, pos_b.y, list_b.radii, eps
    )
    return CandidateSet(pts)


def filter_in_correct_coordinates(
    dlist: DistanceList, pos: Point, candidates: CandidateSet, eps: float = EPS
) -> CandidateSet:
    """Keep candidates lying within eps of at least one circle of this adversary."""
    mask = kernels.on_any_circle_mask(candidates.coords, pos.x, pos.y, dlist.radii, eps)
    return CandidateSet(kernels.unique_rows_stable(candidates.coords[mask]))


def run_exact_attack(
    positions: Sequence[Point],
    lists: Sequence[DistanceList],
    eps: float = EPS,
) -> CandidateSet:
    """Recover driver locations from noiseless rounds of m >= 3 adversaries.

    Intersects the first two adversaries' circles and filters the result
    through every remaining adversary; near-duplicates (within eps) merge.
    The output is sorted lexicographically.
    """
    m = len(positions)
    if m < 3:
        raise ConfigurationError(f"exact attack needs at least 3 adversaries, got {m}")
    if len(lists) != m:
        raise ConfigurationError("one distance list per adversary required")
    cand = obtain_circle_intersection_points(lists[0], positions[0], lists[1], positions[1], eps)
    for g in range(2, m):
        cand = filter_in_correct_coordinates(lists[g], positions[g], cand, eps)
    merged = cand.coords[kernels.dedup_leaders_mask(cand.coords, eps)]
    return CandidateSet(merged).sorted_lex()


def triangulate_labeled(
    positions: Sequence[Point], dists: Sequence[float], eps: float = EPS
) -> Point:
    """Classic trilateration: distances are labeled, i.e. all belong to one driver.

    Slow scalar reference path, useful as an oracle: with exact distances from
    3+ non-collinear adversaries the driver is the unique common point.
    """
    if len(positions) < 3 or len(dists) != len(positions):
        raise ConfigurationError("need 3+ adversaries with one distance each")
    cands = circle_intersection(
        Circle(positions[0], dists[0]), Circle(positions[1], dists[1]), eps
    )
    hits = [
        p
        for p in cands
        if all(
            point_on_circle(p, Circle(positions[g], dists[g]), eps)
            for g in range(2, len(positions))
        )
    ]
    if len(hits) != 1:
        raise ValueError(f"expected a unique common point, found {len(hits)}")
    return hits[0]
