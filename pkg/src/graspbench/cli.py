"""Multi-command CLI binding the annotation and evaluation pipelines.

Exit codes: 0 success, 1 usage error, 2 data error. All randomness sits
behind explicit --seed / --cloud-seed flags.
"""

from __future__ import annotations

import argparse
import difflib
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import codecs
from .annotation import (
    AnnotationParams,
    annotate_object,
    label_stats,
)
from .codecs import DataError
from .evaluation import NmsParams, evaluate_scene, pose_nms
from .forceclosure import FrictionGrid
from .gripper import GripperModel
from .scene import SceneGraspSet, project_grasps, scene_collision_filter, synthesize_scene

PROFILE_ENV = "GRASPBENCH_PROFILE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def _known_options(self):
        options = {opt for act in self._actions for opt in act.option_strings}
        for act in self._actions:
            if isinstance(act, argparse._SubParsersAction):
                for sub in act.choices.values():
                    options.update(
                        opt for a in sub._actions for opt in a.option_strings
                    )
        return sorted(options)

    def error(self, message):
        if "unrecognized arguments" in message:
            bad = message.split(":", 1)[-1].strip().split()
            options = self._known_options()
            hints = []
            for flag in bad:
                close = difflib.get_close_matches(flag, options, n=1)
                if close:
                    hints.append(f"did you mean {close[0]!r}?")
            if hints:
                message = f"{message} ({' '.join(hints)})"
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _parse_angle(text: str) -> float:
    text = text.strip().lower()
    if text.endswith("deg"):
        return math.radians(float(text[:-3]))
    if text.endswith("rad"):
        return float(text[:-3])
    return float(text)


def _parse_mu_grid(text: str) -> FrictionGrid:
    try:
        start, step, stop = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(
            f"--mu-grid expects start:step:stop, got {text!r}"
        ) from None
    values = []
    mu = start
    while mu <= stop + 1e-9:
        values.append(round(mu, 10))
        mu += step
    try:
        return FrictionGrid(tuple(values))
    except ValueError as exc:
        raise UsageError(f"invalid --mu-grid: {exc}") from None


def _parse_nms(text: str) -> NmsParams:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"--nms expects 'dist,angle,K', got {text!r}")
    try:
        return NmsParams(
            th_translation=float(parts[0]),
            th_rotation=_parse_angle(parts[1]),
            top_k=int(parts[2]),
        )
    except ValueError as exc:
        raise UsageError(f"invalid --nms: {exc}") from None


def _load_profile(path_arg) -> GripperModel:
    path = path_arg or os.environ.get(PROFILE_ENV)
    if path is None:
        return GripperModel()
    return codecs.load_gripper(path)


def _annotation_params(args) -> AnnotationParams:
    angles = tuple(i * math.pi / args.angles for i in range(args.angles))
    depths = tuple(float(d) for d in args.depths.split(","))
    return AnnotationParams(
        voxel=args.voxel,
        views=args.views,
        angles=angles,
        depths=depths,
        friction=_parse_mu_grid(args.mu_grid),
        cloud_density=args.density,
        cloud_seed=args.seed,
    )


def _add_annotation_flags(parser) -> None:
    parser.add_argument("--voxel", type=float, default=0.005, help="grasp-point voxel size, meters")
    parser.add_argument("--views", type=int, default=300, help="view directions per grasp point")
    parser.add_argument("--angles", type=int, default=12, help="in-plane angles, uniform in [0, pi)")
    parser.add_argument("--depths", default="0.01,0.02,0.03,0.04", help="comma-separated depths, meters")
    parser.add_argument("--mu-grid", default="0.1:0.1:1.0", help="friction sweep start:step:stop")
    parser.add_argument("--density", type=float, default=1.0e6, help="surface cloud density, points/m^2")
    parser.add_argument("--seed", type=int, default=0, help="surface sampling seed")


def _cmd_annotate_object(args) -> int:
    mesh = codecs.load_mesh(args.mesh)
    model = _load_profile(args.gripper)
    params = _annotation_params(args)
    labels = annotate_object(
        mesh, model, params, object_id=args.object_id, threads=args.threads
    )
    codecs.save_labels(labels, args.out, fmt=args.format)
    stats = label_stats(labels)
    print(
        f"annotated object {args.object_id}: {labels.n_points} grasp points, "
        f"{stats['positive']} positive / {stats['negative']} negative / "
        f"{stats['collision']} collision / {stats['empty']} empty"
    )
    return 0


def _cmd_annotate_scene(args) -> int:
    scene = codecs.load_scene(args.scene)
    manifest = codecs.load_manifest(args.manifest)
    model = _load_profile(args.gripper)
    grasps = []
    for inst in scene.instances:
        labels = codecs.load_labels(manifest.labels_path(inst.object_id))
        if labels.gripper_hash and labels.gripper_hash != model.profile_hash():
            warnings.warn(
                f"object {inst.object_id}: labels were generated with a "
                f"different gripper profile ({labels.gripper_hash} != "
                f"{model.profile_hash()})",
                stacklevel=1,
            )
        grasps.extend(project_grasps(inst.pose, labels, min_score=args.min_score))
    grasp_set = SceneGraspSet(grasps)
    if not args.skip_collision_filter:
        grasp_set = scene_collision_filter(grasp_set, scene, model)
    codecs.save_predictions(grasp_set.grasps, args.out)
    print(f"projected {len(grasps)} grasps, kept {len(grasp_set)} after filtering")
    return 0


def _cmd_synth_scene(args) -> int:
    manifest = codecs.load_manifest(args.manifest)
    ids = [int(x) for x in args.objects.split(",")]
    catalog = {oid: codecs.load_mesh(manifest.mesh_path(oid)) for oid in ids}
    scene = synthesize_scene(
        ids,
        args.seed,
        catalog,
        cloud_density=args.density,
        cloud_seed=args.cloud_seed,
        min_clearance=args.clearance,
        split_tag=args.split,
        n_cameras=args.cameras,
    )
    codecs.save_scene(scene, args.out, cloud_filename=args.cloud_out)
    print(f"synthesized scene with {len(scene.instances)} objects -> {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    scene = codecs.load_scene(args.scene)
    if len(scene.scene_cloud) and scene.scene_cloud.normals is None:
        raise DataError(
            f"{args.scene}: scene cloud lacks normals; evaluation needs the "
            "7-column cloud format"
        )
    preds = codecs.load_predictions(args.pred)
    model = _load_profile(args.gripper)
    params = _parse_nms(args.nms)
    report = evaluate_scene(preds, scene, model, params)
    if args.out:
        codecs.save_report(report, args.out)
    if args.summary or not args.out:
        print("mu      AP_mu")
        for mu, ap in zip(report.mu_values, report.ap_per_mu):
            print(f"{mu:.1f}    {ap:.6f}")
        print(f"AP      {report.ap:.6f}")
    return 0


def _cmd_nms(args) -> int:
    scene = codecs.load_scene(args.scene)
    preds = codecs.load_predictions(args.pred)
    model = _load_profile(args.gripper)
    kept = pose_nms(preds, scene, _parse_nms(args.nms), model)
    codecs.save_predictions(kept, args.out)
    print(f"kept {len(kept)} of {len(preds)} grasps")
    return 0


def _cmd_stats(args) -> int:
    labels = codecs.load_labels(args.labels)
    stats = label_stats(labels)
    if math.isinf(stats["ratio"]):
        stats["ratio"] = "inf"
    print(json.dumps(stats, indent=2, sort_keys=True))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="graspbench", description=__doc__)
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads for parallelizable stages (0 = auto)",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser(
        "annotate-object", parents=[], help="densely label one object mesh"
    )
    p.add_argument("--mesh", required=True, help="OBJ/PLY mesh path")
    p.add_argument("--out", required=True, help="output label file")
    p.add_argument("--format", choices=("binary", "json"), default="binary")
    p.add_argument("--object-id", type=int, default=0)
    p.add_argument("--gripper", help="gripper profile JSON (or $GRASPBENCH_PROFILE)")
    _add_annotation_flags(p)
    p.set_defaults(func=_cmd_annotate_object)

    p = sub.add_parser(
        "annotate-scene",
        help="project object labels into a scene and filter collisions",
    )
    p.add_argument("--scene", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gripper")
    p.add_argument("--min-score", type=float, default=0.1)
    p.add_argument("--skip-collision-filter", action="store_true")
    p.set_defaults(func=_cmd_annotate_scene)

    p = sub.add_parser("synth-scene", help="synthesize a clustered table scene")
    p.add_argument("--manifest", required=True)
    p.add_argument("--objects", required=True, help="comma-separated object ids")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cloud-out", help="fused cloud filename (default <scene>_cloud.txt)")
    p.add_argument("--split", default="train", choices=("train", "seen", "similar", "novel"))
    p.add_argument("--cameras", type=int, default=8)
    p.add_argument("--density", type=float, default=1.0e6)
    p.add_argument("--cloud-seed", type=int, default=0)
    p.add_argument("--clearance", type=float, default=0.003)
    p.set_defaults(func=_cmd_synth_scene)

    p = sub.add_parser("evaluate", help="score a prediction file against a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--pred", required=True, help="predictions (JSON or CSV)")
    p.add_argument("--nms", default="0.01,5deg,10", help="dist,angle,K")
    p.add_argument("--gripper")
    p.add_argument("--out", help="report JSON path")
    p.add_argument("--summary", action="store_true", help="print the AP table")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("nms", help="run pose-NMS on a prediction file")
    p.add_argument("--pred", required=True)
    p.add_argument("--scene", required=True)
    p.add_argument("--nms", default="0.01,5deg,10")
    p.add_argument("--gripper")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_nms)

    p = sub.add_parser("stats", help="print label statistics")
    p.add_argument("--labels", required=True)
    p.set_defaults(func=_cmd_stats)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"graspbench: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"graspbench: data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"graspbench: data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
