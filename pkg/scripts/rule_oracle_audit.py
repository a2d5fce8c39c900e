#!/usr/bin/env python3
"""Exhaustive rule-versus-oracle audit over multidegree boxes.

Sweeps every sum-zero vector with |d_i| <= bound on each requested fiber
through the cyclic-word rule and the subcurve oracle, optionally also
through the disconnected-subcurve oracle and a batch of random
polarizations, and reports counts, disagreements and timing.
"""

from __future__ import annotations

import argparse
import random
import time

from fiberjac.fibers import Polarization, build_fiber, parse_fiber_label
from fiberjac.stability import (
    enumerate_stratification,
    iter_degree_vectors,
    oracle_classify,
)

DEFAULT_FIBERS = ["I2", "I3", "I4", "I5", "I6", "III", "IV"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("fibers", nargs="*", default=DEFAULT_FIBERS)
    parser.add_argument("--bound", type=int, default=2)
    parser.add_argument("--disconnected", action="store_true",
                        help="also audit the disconnected-subcurve oracle mode")
    parser.add_argument("--polarizations", type=int, default=0,
                        help="random polarizations to cross-check per fiber")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    total_disagreements = 0
    for label in args.fibers:
        graph = build_fiber(parse_fiber_label(label))
        start = time.perf_counter()
        report = enumerate_stratification(graph, args.bound)
        vectors = list(iter_degree_vectors(graph.n, args.bound))
        line = (f"{report.fiber:<5} bound {args.bound}: {len(vectors)} vectors, "
                f"counts {report.counts}, {len(report.disagreements)} disagreements")
        total_disagreements += len(report.disagreements)

        if args.disconnected:
            flips = sum(
                1
                for vec in vectors
                if oracle_classify(graph, None, vec).verdict
                is not oracle_classify(graph, None, vec, include_disconnected=True).verdict
            )
            line += f", {flips} disconnected-mode flips"
            total_disagreements += flips

        if args.polarizations:
            rng = random.Random(args.seed)
            baseline = [oracle_classify(graph, None, v).verdict for v in vectors]
            mismatches = 0
            for _ in range(args.polarizations):
                pol = Polarization(tuple(rng.randint(1, 10) for _ in range(graph.n)))
                mismatches += sum(
                    1
                    for vec, expected in zip(vectors, baseline)
                    if oracle_classify(graph, pol, vec).verdict is not expected
                )
            line += f", {mismatches} polarization mismatches"
            total_disagreements += mismatches

        line += f"  ({time.perf_counter() - start:.2f}s)"
        print(line)

    print(f"total disagreements: {total_disagreements}")
    return 0 if total_disagreements == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
