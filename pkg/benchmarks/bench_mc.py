#!/usr/bin/env python3
"""Benchmark the Monte Carlo sampling backends (numba kernel vs numpy fallback).

Runs the same tally on both backends, checks they are bit-identical, and
reports wall times and speedup.
"""

import argparse
import time

from eprlink import ErrorDensities, LinkGeometry, monte_carlo_transmit, transmit_at_length
from eprlink._mc import HAS_NUMBA, active_backend


def run_backend(backend, mu, geom, segments_per_km, samples, seed):
    start = time.perf_counter()
    est = monte_carlo_transmit(
        mu, geom, segments_per_km=segments_per_km, samples=samples, seed=seed,
        backend=backend,
    )
    return est, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mu", type=float, default=0.008, help="per-axis error density, 1/km")
    parser.add_argument("--l1", type=float, default=5.0)
    parser.add_argument("--l2", type=float, default=5.0)
    parser.add_argument("--segments-per-km", type=int, default=100)
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    mu = ErrorDensities(args.mu, args.mu, args.mu)
    geom = LinkGeometry(args.l1, args.l2)
    total_draws = args.samples * round(geom.total_km * args.segments_per_km)
    print(f"numba available: {HAS_NUMBA} (active default: {active_backend()})")
    print(f"config: {args.samples} samples x {round(geom.total_km * args.segments_per_km)} "
          f"segments = {total_draws:.2e} draws")
    print()

    if HAS_NUMBA:
        # throwaway call so JIT compilation is not billed to the benchmark
        run_backend("numba", mu, geom, args.segments_per_km, 100, args.seed)

    est_np, t_np = run_backend("numpy", mu, geom, args.segments_per_km, args.samples, args.seed)
    print(f"numpy backend: {t_np:.3f}s  ({total_draws / t_np:.2e} draws/s)")

    if HAS_NUMBA:
        est_nb, t_nb = run_backend("numba", mu, geom, args.segments_per_km, args.samples, args.seed)
        print(f"numba backend: {t_nb:.3f}s  ({total_draws / t_nb:.2e} draws/s)")
        print(f"speedup: {t_np / t_nb:.1f}x")
        print(f"tallies bit-identical: {est_np == est_nb}")
    else:
        print("numba backend: not available")

    reference = transmit_at_length(mu, geom)
    z = [
        0.0 if e == r else (e - r) / se
        for e, r, se in zip(
            est_np.bell_diagonal.as_tuple(), reference.as_tuple(), est_np.standard_errors
        )
    ]
    print(f"z-scores vs closed form: {', '.join(f'{v:+.2f}' for v in z)}")


if __name__ == "__main__":
    main()
