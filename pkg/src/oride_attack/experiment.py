"""Experiment harness: cells, trials, presets and result files.

A cell is one (zone, n, rho, m) configuration; a run executes a grid of cells
for a fixed number of seeded trials each and aggregates recovery statistics.
The preset grids reproduce the headline result tables: noiseless recovery
(table1), noisy recovery over zone/noise grids (table2, table3) and the
adversary-count sweep (table4).
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .exact_attack import CandidateSet, run_exact_attack
from .noisy_attack import noisy_attack_stages
from .scoring import ExperimentSummary, TrialReport, aggregate, validate
from .world import (
    ROLE_DRIVERS,
    ROLE_SP,
    ConfigurationError,
    World,
    Zone,
    place_adversaries,
    place_drivers,
    sp_round,
    substream,
)

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 20
DEFAULT_SEED = 1234

CSV_COLUMNS = (
    "zone_km2",
    "n",
    "rho_m",
    "m",
    "tau_m",
    "trials",
    "mean_pct",
    "stddev_pct",
    "mean_eta",
    "mean_runtime_ms",
)


@dataclass(frozen=True)
class CellSpec:
    zone_km2: float
    n: int
    rho: float
    m: int
    variant: str  # "exact" | "noisy"
    tau: float | None = None  # None: resolved by default_tau at run time
    crowded_tau: float | None = None  # fallback radius for ghost-flooded lists

    def __post_init__(self) -> None:
        if self.variant not in ("exact", "noisy"):
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        if self.zone_km2 <= 0:
            raise ConfigurationError(f"zone area must be positive, got {self.zone_km2}")
        if self.variant == "noisy" and self.rho <= 0:
            raise ConfigurationError("noisy attack needs rho > 0")


@dataclass(frozen=True)
class TrialArtifacts:
    """Everything needed to render or re-inspect a single trial."""

    cell: CellSpec
    trial_index: int
    world: World
    recovered: CandidateSet
    report: TrialReport


# Default pruning/selection radius for ghost-flooded candidate lists: a
# multiple of rho, capped so merging never exceeds the typical inter-driver
# spacing; see noisy_attack_stages for the flood rule.
CROWDED_TAU_FACTOR = 7.0
CROWDED_TAU_CAP = 700.0


def default_tau(zone_km2: float, n: int, rho: float) -> float:
    """Matching radius for lists that are not ghost-flooded.

    Below 2*rho (tighter in the small zone) so weakly-confirmed points are
    shed; ghost-flooded lists are handled separately by the crowded_tau
    fallback.  Override per cell via the tau config knob, which disables the
    fallback and fixes the radius.
    """
    if zone_km2 <= 25.0:
        return 1.0 * rho
    return 1.25 * rho


def resolve_cell(cell: CellSpec) -> CellSpec:
    if cell.variant == "exact":
        if cell.tau is not None or cell.crowded_tau is not None:
            return replace(cell, tau=None, crowded_tau=None)
        return cell
    if cell.tau is None:
        return replace(
            cell,
            tau=default_tau(cell.zone_km2, cell.n, cell.rho),
            crowded_tau=min(CROWDED_TAU_FACTOR * cell.rho, CROWDED_TAU_CAP),
        )
    if cell.tau <= 0:
        raise ConfigurationError(f"matching radius must be > 0, got tau={cell.tau}")
    return cell


def _cell_key(cell: CellSpec, trial: int) -> tuple[int, ...]:
    # Substream key from physical cell parameters (not grid position), so a
    # cell reproduces identically whether run alone or inside a preset.
    zone = Zone.from_area_km2(cell.zone_km2)
    return (int(round(zone.side)), cell.n, int(round(cell.rho * 1000)), cell.m, trial)


def run_trial(
    cell: CellSpec,
    trial_index: int,
    seed: int,
    nearby_filter: str = "dedup",
    integer_coords: bool = False,
    keep_artifacts: bool = False,
) -> tuple[TrialReport, TrialArtifacts | None]:
    """Build one world, run one attack, score it."""
    cell = resolve_cell(cell)
    zone = Zone.from_area_km2(cell.zone_km2)
    key = _cell_key(cell, trial_index)
    drivers = place_drivers(zone, cell.n, substream(seed, *key, ROLE_DRIVERS), integer_coords)
    adversaries = place_adversaries(zone, cell.m, integer_coords)
    world = World(zone, tuple(drivers), tuple(adversaries))
    lists = [
        sp_round(world, a, cell.rho, substream(seed, *key, ROLE_SP, a), integer_coords)
        for a in range(cell.m)
    ]
    t0 = time.perf_counter()
    if cell.variant == "exact":
        recovered = run_exact_attack(world.adversaries, lists)
    else:
        stages = noisy_attack_stages(
            world.adversaries,
            lists,
            cell.rho,
            cell.tau,
            nearby_filter,
            crowded_tau=cell.crowded_tau,
        )
        recovered = stages.final
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    report = replace(validate(recovered, world.drivers, cell.rho), runtime_ms=elapsed_ms)
    artifacts = (
        TrialArtifacts(cell, trial_index, world, recovered, report)
        if keep_artifacts
        else None
    )
    return report, artifacts


def _trial_worker(args: tuple) -> TrialReport:
    cell, trial_index, seed, nearby_filter, integer_coords = args
    report, _ = run_trial(cell, trial_index, seed, nearby_filter, integer_coords)
    return report


def run_cell(
    cell: CellSpec,
    trials: int,
    seed: int,
    nearby_filter: str = "dedup",
    integer_coords: bool = False,
    jobs: int = 1,
    keep_trial: int | None = None,
) -> tuple[ExperimentSummary, TrialArtifacts | None]:
    """Run all trials of one cell; optionally retain one trial's artifacts."""
    cell = resolve_cell(cell)
    if trials < 1:
        raise ConfigurationError(f"trial count must be >= 1, got {trials}")
    artifacts = None
    if jobs > 1:
        args = [(cell, t, seed, nearby_filter, integer_coords) for t in range(trials)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_trial_worker, args))
        if keep_trial is not None:
            _, artifacts = run_trial(
                cell, keep_trial, seed, nearby_filter, integer_coords, keep_artifacts=True
            )
    else:
        reports = []
        for t in range(trials):
            keep = keep_trial == t
            report, art = run_trial(
                cell, t, seed, nearby_filter, integer_coords, keep_artifacts=keep
            )
            reports.append(report)
            if keep:
                artifacts = art
    return aggregate(reports), artifacts


# ---------------------------------------------------------------- presets --

ZONE_SMALL_KM2 = 25.0
ZONE_LARGE_KM2 = 100.0
DRIVER_COUNTS = (25, 50, 75, 100)


def preset_table1() -> list[CellSpec]:
    """Noiseless recovery, both zones, m=4."""
    return [
        CellSpec(zone, n, 0.0, 4, "exact")
        for zone in (ZONE_SMALL_KM2, ZONE_LARGE_KM2)
        for n in DRIVER_COUNTS
    ]


def preset_table2() -> list[CellSpec]:
    """Noisy recovery over the large zone, m=12."""
    return [
        CellSpec(ZONE_LARGE_KM2, n, rho, 12, "noisy")
        for n in DRIVER_COUNTS
        for rho in (50.0, 75.0, 100.0, 125.0, 150.0)
    ]


def preset_table3() -> list[CellSpec]:
    """Noisy recovery over the small zone, m=12."""
    return [
        CellSpec(ZONE_SMALL_KM2, n, rho, 12, "noisy")
        for n in DRIVER_COUNTS
        for rho in (50.0, 75.0, 100.0)
    ]


def preset_table4() -> list[CellSpec]:
    """Adversary-count sweep at n=75, rho=50, both zones."""
    return [
        CellSpec(zone, 75, 50.0, m, "noisy")
        for zone in (ZONE_LARGE_KM2, ZONE_SMALL_KM2)
        for m in (4, 8, 12, 16)
    ]


PRESETS = {
    "table1": preset_table1,
    "table2": preset_table2,
    "table3": preset_table3,
    "table4": preset_table4,
}


# ------------------------------------------------------------ run + output --


@dataclass(frozen=True)
class RunConfig:
    cells: tuple[CellSpec, ...]
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    nearby_filter: str = "dedup"
    integer_coords: bool = False
    jobs: int = 1
    timing: bool = True
    svg_trial: tuple[int, int] | None = None  # (cell index, trial index)


@dataclass(frozen=True)
class CellResult:
    cell: CellSpec
    summary: ExperimentSummary


def run_experiment(config: RunConfig) -> tuple[list[CellResult], TrialArtifacts | None]:
    if not config.cells:
        raise ConfigurationError("no cells to run")
    if config.svg_trial is not None:
        ci, ti = config.svg_trial
        if not 0 <= ci < len(config.cells):
            raise ConfigurationError(f"svg cell index {ci} out of range")
        if not 0 <= ti < config.trials:
            raise ConfigurationError(f"svg trial index {ti} out of range")
    results = []
    artifacts = None
    for idx, cell in enumerate(config.cells):
        cell = resolve_cell(cell)
        keep = None
        if config.svg_trial is not None and config.svg_trial[0] == idx:
            keep = config.svg_trial[1]
        summary, art = run_cell(
            cell,
            config.trials,
            config.seed,
            config.nearby_filter,
            config.integer_coords,
            config.jobs,
            keep_trial=keep,
        )
        if art is not None:
            artifacts = art
        results.append(CellResult(cell, summary))
        log.info(
            "cell %d/%d zone=%g n=%d rho=%g m=%d: mean %.1f%% over %d trials",
            idx + 1,
            len(config.cells),
            cell.zone_km2,
            cell.n,
            cell.rho,
            cell.m,
            summary.mean_pct,
            summary.count,
        )
    return results, artifacts


def _row_values(result: CellResult, timing: bool) -> dict[str, str]:
    cell = result.cell
    s = result.summary
    return {
        "zone_km2": format(cell.zone_km2, "g"),
        "n": str(cell.n),
        "rho_m": format(cell.rho, "g"),
        "m": str(cell.m),
        "tau_m": format(cell.tau if cell.tau is not None else 0.0, "g"),
        "trials": str(s.count),
        "mean_pct": format(s.mean_pct, ".4f"),
        "stddev_pct": format(s.stddev_pct, ".4f"),
        "mean_eta": format(s.mean_eta, ".3f"),
        "mean_runtime_ms": format(s.mean_runtime_ms if timing else 0.0, ".3f"),
    }


def write_csv(results: list[CellResult], path: Path, timing: bool = True) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for result in results:
        values = _row_values(result, timing)
        lines.append(",".join(values[c] for c in CSV_COLUMNS))
    path.write_text("\n".join(lines) + "\n")


def write_json(results: list[CellResult], path: Path, timing: bool = True) -> None:
    rows = []
    for result in results:
        row: dict = {k: v for k, v in _row_values(result, timing).items()}
        row["per_trial_pct"] = [round(p, 4) for p in result.summary.per_trial_pct]
        rows.append(row)
    path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
