"""Simulated ride-hailing zone.

A square zone holds n drivers placed uniformly at random and m colluding
riders ("adversaries") at fixed positions.  For each ride request the service
provider computes the squared Euclidean distance from the requesting rider to
every driver and returns the list in random order, so distances carry no
driver identity.  With location noise enabled, every driver reports a fresh
uniform random point within ``rho`` meters of its true location to each
request, and distances are computed from those points.

All randomness is derived from a master seed through named substreams, so any
(cell, trial, adversary) draw is reproducible in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Point, distance

# Adversary ring: radius as a fraction of the zone side, centered in the zone.
RING_RADIUS_FRACTION = 0.35
# The two pivot pairs sit ~90 degrees apart, the second rotated 45 degrees
# from the first so a driver collinear with one pair is covered by the other.
PIVOT_ANGLES_DEG = (0.0, 90.0, 45.0, 135.0)

# Substream roles.
ROLE_DRIVERS = 0
ROLE_SP = 1


class ConfigurationError(ValueError):
    """Invalid scenario or run configuration."""


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (master_seed, key...); stable across runs."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=key)))


@dataclass(frozen=True)
class Zone:
    """Square operating area, side in meters, origin at the southwest corner."""

    side: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.side) or self.side <= 0:
            raise ConfigurationError(f"zone side must be positive, got {self.side}")

    @classmethod
    def from_area_km2(cls, area_km2: float) -> "Zone":
        return cls(side=math.sqrt(area_km2) * 1000.0)

    @property
    def area_km2(self) -> float:
        return (self.side / 1000.0) ** 2

    @property
    def center(self) -> Point:
        return Point(self.side / 2.0, self.side / 2.0)

    def contains(self, p: Point) -> bool:
        return 0.0 <= p.x <= self.side and 0.0 <= p.y <= self.side


@dataclass(frozen=True)
class ScenarioParams:
    """One experiment cell: driver count, adversary count, noise and matching radii.

    ``tau`` is the matching radius used for pruning and final selection.  When
    ``crowded_tau`` is set, pruning first runs at 2*rho; if the pruned
    candidate list still exceeds ``flood_factor * n`` points (a ghost-dominated
    list), pruning and selection switch to the wider ``crowded_tau``.
    """

    n: int
    m: int
    rho: float
    tau: float
    seed: int
    nearby_filter: str = "dedup"
    integer_coords: bool = False
    crowded_tau: float | None = None
    flood_factor: float = 3.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"need at least one driver, got n={self.n}")
        if self.m < 4:
            raise ConfigurationError(f"need at least four adversaries, got m={self.m}")
        if self.rho < 0:
            raise ConfigurationError(f"noise radius must be >= 0, got rho={self.rho}")
        if self.nearby_filter not in ("dedup", "pseudocode"):
            raise ConfigurationError(f"unknown nearby filter {self.nearby_filter!r}")
        if self.crowded_tau is not None and self.crowded_tau <= 0:
            raise ConfigurationError(f"crowded_tau must be > 0, got {self.crowded_tau}")
        if self.flood_factor <= 0:
            raise ConfigurationError(f"flood_factor must be > 0, got {self.flood_factor}")


@dataclass(frozen=True)
class DistanceList:
    """One adversary's view of a round: permuted distances, as metric radii.

    The provider discloses squared distances; radii are their square roots,
    kept in the disclosed (random) order.
    """

    adversary_index: int
    radii: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        radii = np.ascontiguousarray(self.radii, dtype=np.float64)
        object.__setattr__(self, "radii", radii)
        if radii.ndim != 1:
            raise ValueError("radii must be a flat array")
        if radii.size and (not np.all(np.isfinite(radii)) or radii.min() < 0):
            raise ValueError("radii must be finite and non-negative")

    def __len__(self) -> int:
        return int(self.radii.shape[0])


@dataclass(frozen=True)
class World:
    zone: Zone
    drivers: tuple[Point, ...]
    adversaries: tuple[Point, ...]
    min_adversary_separation: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "drivers", tuple(self.drivers))
        object.__setattr__(self, "adversaries", tuple(self.adversaries))
        for p in self.drivers:
            if not self.zone.contains(p):
                raise ConfigurationError(f"driver outside zone: {p}")
        for p in self.adversaries:
            if not self.zone.contains(p):
                raise ConfigurationError(f"adversary outside zone: {p}")
        adv = self.adversaries
        for i in range(len(adv)):
            for j in range(i + 1, len(adv)):
                if distance(adv[i], adv[j]) < self.min_adversary_separation:
                    raise ConfigurationError(
                        f"adversaries {i} and {j} closer than "
                        f"{self.min_adversary_separation} m"
                    )

    @property
    def n(self) -> int:
        return len(self.drivers)

    @property
    def m(self) -> int:
        return len(self.adversaries)


def _maybe_snap(xy: np.ndarray, integer_coords: bool) -> np.ndarray:
    return np.rint(xy) if integer_coords else xy


def place_drivers(
    zone: Zone, n: int, rng: np.random.Generator, integer_coords: bool = False
) -> list[Point]:
    """n i.i.d. uniform points over the zone square."""
    if n < 0:
        raise ConfigurationError(f"driver count must be >= 0, got {n}")
    xy = _maybe_snap(rng.uniform(0.0, zone.side, size=(n, 2)), integer_coords)
    return [Point(float(x), float(y)) for x, y in xy]


def place_adversaries(zone: Zone, m: int, integer_coords: bool = False) -> list[Point]:
    """Deterministic adversary layout on a ring around the zone center.

    The first four sit at 0, 90, 45 and 135 degrees: two pivot pairs roughly
    90 degrees apart, the second rotated 45 degrees from the first.  No three
    of them are collinear (distinct points on a circle never are).  Any
    remaining adversaries are spread evenly over the rest of the circle.
    """
    if m < 4:
        raise ConfigurationError(f"need at least four adversaries, got m={m}")
    radius = RING_RADIUS_FRACTION * zone.side
    angles = list(PIVOT_ANGLES_DEG)
    arc = 360.0 - PIVOT_ANGLES_DEG[-1]
    for k in range(1, m - 3):
        angles.append(PIVOT_ANGLES_DEG[-1] + k * arc / (m - 3))
    cx = zone.center.x
    cy = zone.center.y
    pts = []
    for deg in angles:
        theta = math.radians(deg)
        xy = np.array([cx + radius * math.cos(theta), cy + radius * math.sin(theta)])
        xy = _maybe_snap(xy, integer_coords)
        pts.append(Point(float(xy[0]), float(xy[1])))
    return pts


def anonymize(p: Point, rho: float, rng: np.random.Generator) -> Point:
    """A uniform random point in the closed disk of radius rho around p.

    Area-uniform: radius rho*sqrt(u), angle 2*pi*v with u, v ~ U[0, 1).
    rho = 0 returns p exactly.
    """
    if rho < 0:
        raise ConfigurationError(f"noise radius must be >= 0, got rho={rho}")
    r = rho * math.sqrt(rng.random())
    theta = 2.0 * math.pi * rng.random()
    return Point(p.x + r * math.cos(theta), p.y + r * math.sin(theta))


def sp_round(
    world: World,
    adversary_index: int,
    rho: float,
    rng: np.random.Generator,
    integer_coords: bool = False,
) -> DistanceList:
    """One ride request by one adversary, as answered by the provider.

    Every driver samples a fresh anonymized location (see :func:`anonymize`),
    the provider computes squared distances to the adversary and returns them
    in a fresh uniform random order; the caller keeps their square roots.
    """
    if not 0 <= adversary_index < world.m:
        raise ConfigurationError(f"no adversary with index {adversary_index}")
    if rho < 0:
        raise ConfigurationError(f"noise radius must be >= 0, got rho={rho}")
    n = world.n
    xy = np.array([(p.x, p.y) for p in world.drivers], dtype=np.float64).reshape(n, 2)
    u = rng.random(n)
    v = rng.random(n)
    r = rho * np.sqrt(u)
    theta = 2.0 * np.pi * v
    qx = xy[:, 0] + r * np.cos(theta)
    qy = xy[:, 1] + r * np.sin(theta)
    if integer_coords:
        qx = np.rint(qx)
        qy = np.rint(qy)
    adv = world.adversaries[adversary_index]
    dx = qx - adv.x
    dy = qy - adv.y
    squared = dx * dx + dy * dy
    perm = rng.permutation(n)
    return DistanceList(adversary_index=adversary_index, radii=np.sqrt(squared[perm]))
