#!/usr/bin/env python3
"""Annotate the ten-primitive suite and report per-object label statistics.

The aggregate positive:negative ratio is a soft sanity signal; values far
from roughly 1:2 suggest mis-sized grippers or parameters.

Usage:
    python scripts/label_ratio_report.py [--views 24] [--voxel 0.015]
"""

import argparse
import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from graspbench import AnnotationParams, GripperModel, annotate_object, label_stats
from graspbench.primitives import primitive_catalog


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--views", type=int, default=24)
    parser.add_argument("--angles", type=int, default=4)
    parser.add_argument("--voxel", type=float, default=0.015)
    parser.add_argument("--density", type=float, default=4.0e5)
    args = parser.parse_args()

    model = GripperModel()
    params = AnnotationParams(
        voxel=args.voxel,
        views=args.views,
        angles=tuple(i * math.pi / args.angles for i in range(args.angles)),
        depths=(0.01, 0.02),
        cloud_density=args.density,
    )
    totals = {"positive": 0, "negative": 0, "collision": 0, "empty": 0}
    print(f"{'object':>6} {'points':>7} {'pos':>8} {'neg':>8} {'coll':>8} {'empty':>8} {'ratio':>7}")
    start = time.time()
    for oid, mesh in primitive_catalog().items():
        labels = annotate_object(mesh, model, params, object_id=oid)
        stats = label_stats(labels)
        for key in totals:
            totals[key] += stats[key]
        ratio = stats["ratio"]
        print(
            f"{oid:>6} {labels.n_points:>7} {stats['positive']:>8} {stats['negative']:>8} "
            f"{stats['collision']:>8} {stats['empty']:>8} "
            f"{'inf' if math.isinf(ratio) else f'{ratio:.3f}':>7}"
        )
    overall = (
        math.inf if totals["negative"] == 0 else totals["positive"] / totals["negative"]
    )
    print(f"\noverall positive:negative ratio = {overall:.3f} ({time.time() - start:.1f}s)")
    print("soft sanity band: [0.2, 1.5]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
