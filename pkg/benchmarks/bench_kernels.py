"""Benchmark the compiled kernels against the pure NumPy fallback.

Times each hot kernel on a representative workload (circle families and
candidate sets at the scale of a noisy n=100, m=12 trial) plus one full
noisy-attack run per backend, and prints a speedup table.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat N] [--n DRIVERS]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from oride_attack import kernels
from oride_attack.experiment import CellSpec, resolve_cell
from oride_attack.noisy_attack import noisy_attack_stages
from oride_attack.world import (
    World,
    Zone,
    place_adversaries,
    place_drivers,
    sp_round,
    substream,
)

EPS = 1e-6
SEED = 1234


def build_workload(n: int):
    """Inputs at the scale one noisy trial feeds the kernels."""
    rng = np.random.default_rng(SEED)
    zone = Zone.from_area_km2(100.0)
    rho, m = 100.0, 12
    drivers = place_drivers(zone, n, substream(SEED, 0))
    world = World(zone, tuple(drivers), tuple(place_adversaries(zone, m)))
    lists = [sp_round(world, a, rho, substream(SEED, 1, a)) for a in range(m)]
    cand = kernels.pairwise_circle_intersections(
        world.adversaries[0].x, world.adversaries[0].y, lists[0].radii,
        world.adversaries[1].x, world.adversaries[1].y, lists[1].radii, EPS,
    )
    centers = np.array([(p.x, p.y) for p in world.adversaries])
    radii = np.ascontiguousarray(np.stack([dl.radii for dl in lists]))
    small = np.ascontiguousarray(cand[rng.permutation(len(cand))[: 4 * n]])
    return {
        "world": world,
        "lists": lists,
        "rho": rho,
        "cand": cand,
        "small": small,
        "small_rev": np.ascontiguousarray(small[::-1]),
        "centers": centers,
        "radii": radii,
    }


def kernel_cases(w):
    a1, a2 = w["world"].adversaries[:2]
    r1, r2 = w["lists"][0].radii, w["lists"][1].radii
    g = w["world"].adversaries[2]
    rg = w["lists"][2].radii
    return [
        ("pairwise_circle_intersections",
         lambda k: k.pairwise_circle_intersections(a1.x, a1.y, r1, a2.x, a2.y, r2, EPS)),
        ("on_any_circle_mask",
         lambda k: k.on_any_circle_mask(w["cand"], g.x, g.y, rg, EPS)),
        ("band_mask",
         lambda k: k.band_mask(w["cand"], g.x, g.y, rg, 2 * w["rho"], EPS)),
        ("residual_score",
         lambda k: k.residual_score(w["cand"], w["centers"], w["radii"])),
        ("has_later_neighbor_mask",
         lambda k: k.has_later_neighbor_mask(w["small"], 125.0)),
        ("dedup_leaders_mask",
         lambda k: k.dedup_leaders_mask(w["small"], 125.0)),
        ("near_partner_mask",
         lambda k: k.near_partner_mask(w["small"], w["small_rev"], 125.0, EPS)),
    ]


def time_case(fn, repeat: int) -> float:
    fn()  # warm up
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples) * 1e3


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=7, help="samples per case (median)")
    parser.add_argument("--n", type=int, default=100, help="driver count of the workload")
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; benchmarking the fallback only")
    w = build_workload(args.n)
    cell = resolve_cell(CellSpec(100.0, args.n, w["rho"], 12, "noisy"))

    rows = []
    from oride_attack.kernels import _reference

    impls = {"python": _reference}
    if "compiled" in backends:
        from oride_attack.kernels import _speedups

        impls["compiled"] = _speedups

    for name, call in kernel_cases(w):
        times = {b: time_case(lambda k=impl: call(k), args.repeat) for b, impl in impls.items()}
        rows.append((name, times))

    def full_attack():
        noisy_attack_stages(
            w["world"].adversaries, w["lists"], w["rho"], cell.tau,
            crowded_tau=cell.crowded_tau,
        )

    attack_times = {}
    before = kernels.BACKEND
    try:
        for b in impls:
            kernels.use_backend(b)
            attack_times[b] = time_case(full_attack, args.repeat)
    finally:
        kernels.use_backend(before)
    rows.append(("noisy attack (end to end)", attack_times))

    width = max(len(name) for name, _ in rows) + 2
    header = f"{'case':<{width}}" + "".join(f"{b + ' (ms)':>16}" for b in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(f"\nworkload: n={args.n}, m=12, rho={w['rho']:g}, zone 100 km^2, "
          f"median of {args.repeat}")
    print(header)
    print("-" * len(header))
    for name, times in rows:
        line = f"{name:<{width}}" + "".join(f"{times[b]:>16.3f}" for b in impls)
        if len(impls) == 2:
            line += f"{times['python'] / times['compiled']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
