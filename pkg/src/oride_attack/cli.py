"""Command line front end.

Runs a preset grid or a custom (zone x drivers x rho x adversaries) grid and
writes one CSV/JSON row per cell.  Configuration is merged from defaults, an
optional flat key=value config file, and command line flags, in that order.

Exit codes: 0 on success, 2 for configuration errors, 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import kernels
from .experiment import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    PRESETS,
    CellSpec,
    RunConfig,
    run_experiment,
    write_csv,
    write_json,
)
from .svg_render import render_scatter
from .world import ConfigurationError

log = logging.getLogger(__name__)

# config-file keys and their parsers; identical to the long CLI flag names
_SCALAR_KEYS = {
    "preset": str,
    "variant": str,
    "tau": float,
    "trials": int,
    "seed": int,
    "out": str,
    "format": str,
    "svg": str,
    "nearby_filter": str,
    "jobs": int,
    "backend": str,
    "integer_coords": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "no_timing": lambda v: v.lower() in ("1", "true", "yes", "on"),
}
_LIST_KEYS = {
    "zone_km2": float,
    "drivers": int,
    "rho": float,
    "adversaries": int,
}


def _parse_list(raw, kind):
    if isinstance(raw, (list, tuple)):
        return [kind(v) for v in raw]
    return [kind(part) for part in str(raw).split(",") if part.strip()]


def read_config_file(path: Path) -> dict:
    """Flat key = value file; '#' starts a comment, lists are comma separated."""
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    out: dict = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _SCALAR_KEYS:
            out[key] = _SCALAR_KEYS[key](value)
        elif key in _LIST_KEYS:
            out[key] = _parse_list(value, _LIST_KEYS[key])
        else:
            raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="oride-attack",
        description="Simulate permuted distance disclosure and run location recovery attacks.",
    )
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="predefined result-table grid")
    p.add_argument("--zone-km2", dest="zone_km2", help="zone area(s) in km^2, comma separated")
    p.add_argument("--drivers", help="driver count(s), comma separated")
    p.add_argument("--rho", help="driver location noise radius(es) in meters, comma separated")
    p.add_argument("--adversaries", help="adversary count(s), comma separated")
    p.add_argument("--tau", type=float, help="matching radius in meters (default: derived from rho)")
    p.add_argument("--variant", choices=("exact", "noisy"), help="attack variant for custom grids")
    p.add_argument("--trials", type=int, help=f"trials per cell (default {DEFAULT_TRIALS})")
    p.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--out", help="output directory (default ./out)")
    p.add_argument("--format", choices=("csv", "json"), help="result file format (default csv)")
    p.add_argument("--svg", metavar="CELL:TRIAL", help="also render one trial as an SVG scatter")
    p.add_argument(
        "--nearby-filter",
        dest="nearby_filter",
        choices=("pseudocode", "dedup"),
        help="nearby-point pruning semantics (default dedup)",
    )
    p.add_argument("--jobs", type=int, help="parallel trial workers per cell (default 1)")
    p.add_argument("--backend", choices=("auto", "python", "compiled"), help="kernel backend")
    p.add_argument("--integer-coords", action="store_true", default=None,
                   help="snap all coordinates to whole meters")
    p.add_argument("--no-timing", action="store_true", default=None,
                   help="write 0 for mean_runtime_ms so output is byte-stable")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")
    return p


def _merged_settings(args: argparse.Namespace) -> dict:
    settings: dict = {
        "preset": None,
        "variant": None,
        "zone_km2": None,
        "drivers": None,
        "rho": None,
        "adversaries": None,
        "tau": None,
        "trials": DEFAULT_TRIALS,
        "seed": DEFAULT_SEED,
        "out": "out",
        "format": "csv",
        "svg": None,
        "nearby_filter": "dedup",
        "jobs": 1,
        "backend": None,
        "integer_coords": False,
        "no_timing": False,
    }
    if args.config is not None:
        settings.update(read_config_file(args.config))
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _build_cells(settings: dict) -> list[CellSpec]:
    if settings["preset"]:
        name = settings["preset"]
        if name not in PRESETS:
            raise ConfigurationError(f"unknown preset {name!r}")
        cells = PRESETS[name]()
        if settings["tau"] is not None:
            cells = [replace(c, tau=settings["tau"]) for c in cells]
        return cells

    variant = settings["variant"] or "noisy"
    zones = _parse_list(settings["zone_km2"], float) if settings["zone_km2"] else [100.0]
    drivers = _parse_list(settings["drivers"], int) if settings["drivers"] else [25]
    if settings["rho"]:
        rhos = _parse_list(settings["rho"], float)
    else:
        rhos = [0.0] if variant == "exact" else [50.0]
    if settings["adversaries"]:
        ms = _parse_list(settings["adversaries"], int)
    else:
        ms = [4] if variant == "exact" else [12]
    return [
        CellSpec(zone, n, rho, m, variant, tau=settings["tau"])
        for zone in zones
        for n in drivers
        for rho in rhos
        for m in ms
    ]


def _parse_svg_id(raw: str | None, n_cells: int) -> tuple[int, int] | None:
    if raw is None:
        return None
    try:
        if ":" in raw:
            cell_s, trial_s = raw.split(":", 1)
            cell, trial = int(cell_s), int(trial_s)
        else:
            cell, trial = 0, int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad --svg trial id {raw!r}, expected CELL:TRIAL") from exc
    if not 0 <= cell < n_cells:
        raise ConfigurationError(f"--svg cell index {cell} out of range (grid has {n_cells})")
    return cell, trial


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    try:
        settings = _merged_settings(args)
        if settings["backend"]:
            kernels.use_backend(settings["backend"])
        cells = _build_cells(settings)
        svg_id = _parse_svg_id(settings["svg"], len(cells))
        if settings["trials"] < 1:
            raise ConfigurationError(f"trial count must be >= 1, got {settings['trials']}")
        if settings["jobs"] < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {settings['jobs']}")
        out_dir = Path(settings["out"])
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            probe = out_dir / ".write_probe"
            probe.write_text("")
            probe.unlink()
        except OSError as exc:
            raise ConfigurationError(f"output path not writable: {out_dir} ({exc})") from exc
        config = RunConfig(
            cells=tuple(cells),
            trials=settings["trials"],
            seed=settings["seed"],
            nearby_filter=settings["nearby_filter"],
            integer_coords=settings["integer_coords"],
            jobs=settings["jobs"],
            timing=not settings["no_timing"],
            svg_trial=svg_id,
        )
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        log.info("kernel backend: %s", kernels.BACKEND)
        results, artifacts = run_experiment(config)
        if settings["format"] == "json":
            out_file = out_dir / "results.json"
            write_json(results, out_file, timing=config.timing)
        else:
            out_file = out_dir / "results.csv"
            write_csv(results, out_file, timing=config.timing)
        log.info("wrote %s", out_file)
        if svg_id is not None:
            cell_idx, trial_idx = svg_id
            svg_file = out_dir / f"scatter_cell{cell_idx}_trial{trial_idx}.svg"
            cell = results[cell_idx].cell
            label = (
                f"zone {cell.zone_km2:g} km^2, n={cell.n}, rho={cell.rho:g} m, "
                f"m={cell.m}, trial {trial_idx}"
            )
            svg_file.write_text(
                render_scatter(artifacts.world if artifacts else None,
                               artifacts.recovered if artifacts else None,
                               label=label)
            )
            log.info("wrote %s", svg_file)
        return 0
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
