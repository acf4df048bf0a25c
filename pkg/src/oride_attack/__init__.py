"""Simulator and attack toolkit for permuted distance disclosure in ride hailing.

The service provider model follows ORide: a rider request returns the set of
squared rider-driver distances in random order, optionally with drivers
reporting noise-perturbed locations.  Colluding riders placed at known
positions can triangulate driver locations from those permuted lists; this
package simulates the protocol side and implements the recovery attacks,
along with scoring and the experiment grids behind the headline numbers.
"""

from .exact_attack import CandidateSet, run_exact_attack
from .geometry import EPS, Circle, Point, circle_intersection, distance
from .noisy_attack import run_noisy_attack
from .scoring import TrialReport, aggregate, validate
from .world import DistanceList, ScenarioParams, World, Zone

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "Circle",
    "DistanceList",
    "EPS",
    "Point",
    "ScenarioParams",
    "TrialReport",
    "World",
    "Zone",
    "aggregate",
    "circle_intersection",
    "distance",
    "run_exact_attack",
    "run_noisy_attack",
    "validate",
    "__version__",
]
