#!/usr/bin/env python3
"""End-to-end demo: build a primitive catalog, annotate it, synthesize a
clustered scene, project the labels and self-evaluate through the CLI.

Usage:
    python scripts/demo_pipeline.py [--workdir out/demo] [--seed 11]

Everything is written under the work directory so the intermediate files can
be inspected (meshes, label files, scene JSON, prediction files, report).
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from graspbench.cli import cli_main
from graspbench.codecs import load_predictions, save_manifest, save_mesh, save_predictions
from graspbench.primitives import box_mesh, cylinder_mesh, icosphere_mesh


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="out/demo")
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    root = Path(args.workdir)
    root.mkdir(parents=True, exist_ok=True)
    catalog = {
        1: box_mesh(0.04, 0.03, 0.05),
        2: icosphere_mesh(0.02, 3),
        3: cylinder_mesh(0.015, 0.06),
        4: box_mesh(0.035, 0.035, 0.035),
        5: icosphere_mesh(0.028, 3),
    }
    lite = [
        "--voxel", "0.015", "--views", "48", "--angles", "6",
        "--depths", "0.01,0.02", "--density", "600000", "--seed", "0",
    ]

    start = time.time()
    objects = {}
    for oid, mesh in catalog.items():
        mesh_file = root / f"obj{oid}.obj"
        save_mesh(mesh, mesh_file)
        label_file = root / f"obj{oid}.labels"
        rc = cli_main(
            ["annotate-object", "--mesh", str(mesh_file), "--out", str(label_file),
             "--object-id", str(oid), *lite]
        )
        if rc:
            return rc
        objects[str(oid)] = {"mesh": mesh_file.name, "labels": label_file.name}
    save_manifest(
        {"catalog_root": ".", "objects": objects, "scenes": {}},
        root / "manifest.json",
    )

    steps = [
        ["synth-scene", "--manifest", str(root / "manifest.json"),
         "--objects", "1,2,3,4,5", "--seed", str(args.seed),
         "--out", str(root / "scene.json"), "--density", "600000",
         "--cloud-seed", "0", "--clearance", "0.05"],
        ["annotate-scene", "--scene", str(root / "scene.json"),
         "--manifest", str(root / "manifest.json"),
         "--out", str(root / "scene_grasps.json"), "--min-score", "0.95"],
        ["nms", "--pred", str(root / "scene_grasps.json"),
         "--scene", str(root / "scene.json"), "--out", str(root / "kept.json")],
    ]
    for step in steps:
        rc = cli_main(step)
        if rc:
            return rc

    top50 = load_predictions(root / "kept.json")[:50]
    save_predictions(top50, root / "top50.json")
    rc = cli_main(
        ["evaluate", "--scene", str(root / "scene.json"),
         "--pred", str(root / "top50.json"),
         "--out", str(root / "report.json"), "--summary"]
    )
    print(f"done in {time.time() - start:.1f}s, artifacts in {root}/")
    return rc


if __name__ == "__main__":
    sys.exit(main())
