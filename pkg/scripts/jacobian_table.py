#!/usr/bin/env python3
"""Print the moduli curve classification for a list of fiber types.

For each fiber the table shows the kind of the moduli curve (smooth
elliptic, nodal rational or cuspidal rational), the one-parameter group
forming its stable locus, and the number of extra strictly semistable
points.  Alongside it runs the combinatorial cross-checks on reducible
fibers: the stable stratum of the bound-1 multidegree box and the number
of boundary points of a component identified by the point family.
"""

from __future__ import annotations

import argparse
import json

from fiberjac.fibers import SmoothPoint, build_fiber, parse_fiber_label
from fiberjac.jacobian import abel_jacobi_family, jacobian_type
from fiberjac.stability import enumerate_stratification

DEFAULT_FIBERS = ["smooth", "I1", "I2", "I3", "I4", "I5", "I6", "II", "III", "IV"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("fibers", nargs="*", default=DEFAULT_FIBERS,
                        help="fiber labels (default: smooth, I1..I6, II, III, IV)")
    parser.add_argument("--format", choices=("table", "json"), default="table")
    args = parser.parse_args()

    rows = []
    for label in args.fibers:
        kodaira = parse_fiber_label(label)
        cls = jacobian_type(kodaira)
        row = {
            "fiber": kodaira.label,
            "kind": cls.kind.value,
            "stable_locus": cls.stable_locus.value,
            "extra_points": cls.extra_points,
        }
        if kodaira.is_reducible:
            graph = build_fiber(kodaira)
            report = enumerate_stratification(graph, 1)
            family = abel_jacobi_family(graph, SmoothPoint(0, 0))
            row["stable_vectors_bound1"] = len(report.vectors["Stable"])
            row["identified_boundary_points"] = family.identified_point_count
            row["moduli_singularity"] = family.moduli_singularity
        rows.append(row)

    if args.format == "json":
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'fiber':<7} {'moduli curve':<18} {'stable locus':<14} extra  cross-check")
    for row in rows:
        cross = ""
        if "moduli_singularity" in row:
            cross = (f"stable stratum size {row['stable_vectors_bound1']}, "
                     f"{row['identified_boundary_points']} boundary point(s) -> "
                     f"{row['moduli_singularity']}")
        print(f"{row['fiber']:<7} {row['kind']:<18} {row['stable_locus']:<14} "
              f"{row['extra_points']:<6} {cross}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
