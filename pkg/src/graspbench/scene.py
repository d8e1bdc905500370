"""Clustered-scene assembly, label projection and scene-level filtering.

The world frame is the table frame with z up; the table surface is the
analytic half-space z < 0 (never sampled points). Object poses map object
frames to world, camera poses map camera frames to world.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .annotation import DEFAULT_CLOUD_DENSITY, GraspLabelSet, LabelFlag
from .geometry import (
    PointCloud,
    RigidTransform,
    TriangleMesh,
    rotation_about_axis,
    sample_mesh_surface,
    view_to_rotation,
)
from .gripper import GraspPose, GripperModel, gripper_bodies, gripper_collision

TABLE_ID = 0
SPLIT_TAGS = ("train", "seen", "similar", "novel")
# Slack below z = 0 before a gripper body counts as entering the table.
TABLE_EPS = 1e-9


class SceneTooCrowded(RuntimeError):
    """Raised when rejection sampling cannot place all requested objects."""


@dataclass(frozen=True)
class ObjectInstance:
    object_id: int
    pose: RigidTransform


@dataclass
class Scene:
    """Object instances, camera trajectory and the fused labeled cloud."""

    instances: tuple
    camera_poses: tuple = ()
    scene_cloud: PointCloud = field(default_factory=lambda: PointCloud(np.zeros((0, 3))))
    split_tag: str = "train"

    def __post_init__(self):
        self.instances = tuple(self.instances)
        self.camera_poses = tuple(self.camera_poses)
        if self.split_tag not in SPLIT_TAGS:
            raise ValueError(f"split_tag must be one of {SPLIT_TAGS}")
        ids = [inst.object_id for inst in self.instances]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate object ids in scene")
        if len(self.scene_cloud):
            if self.scene_cloud.object_ids is None:
                raise ValueError("scene cloud must carry per-point object ids")
            known = set(ids) | {TABLE_ID}
            if not set(np.unique(self.scene_cloud.object_ids)) <= known:
                raise ValueError("scene cloud references unknown object ids")

    def instance(self, object_id: int) -> ObjectInstance:
        for inst in self.instances:
            if inst.object_id == object_id:
                return inst
        raise KeyError(f"no instance with object id {object_id}")

    def object_points(self, object_id: int) -> PointCloud:
        mask = self.scene_cloud.object_ids == object_id
        return self.scene_cloud.select(np.nonzero(mask)[0])


@dataclass
class SceneGraspSet:
    """World-frame grasps with their source object ids."""

    grasps: list

    def __len__(self) -> int:
        return len(self.grasps)


def propagate_pose(
    cam_i: RigidTransform, cam_0: RigidTransform, p0: RigidTransform
) -> RigidTransform:
    """Object pose in frame i given its pose in frame 0: cam_i^-1 cam_0 p0."""
    return cam_i.invert().compose(cam_0.compose(p0))


def project_grasps(
    p_world: RigidTransform, labels: GraspLabelSet, min_score: float = 0.0
) -> list:
    """Map positive-flagged grasps with score >= min_score into the world.

    Scores and widths are unchanged; confidence is set to the score so that
    ground-truth grasps can be ranked directly when used as predictions.
    """
    scores = labels.scores()
    sel = (labels.flags == LabelFlag.POSITIVE) & (scores >= min_score)
    idx = np.nonzero(sel)
    if idx[0].size == 0:
        return []
    views = labels.view_directions()
    rot_cache: dict = {}
    out = []
    for i, vi, ai, di in zip(*idx):
        key = (int(vi), int(ai))
        rot = rot_cache.get(key)
        if rot is None:
            rot = view_to_rotation(views[vi], labels.angles[ai])
            rot_cache[key] = rot
        point = labels.grasp_points[i].astype(np.float64)
        depth = labels.depths[di]
        center = point + depth * rot[:, 0]
        score = float(scores[i, vi, ai, di])
        out.append(
            GraspPose(
                rotation=p_world.rotation @ rot,
                center=p_world.apply(center),
                width=float(labels.widths[i, vi, ai, di]),
                depth=depth,
                score=score,
                confidence=score,
                object_id=labels.object_id,
            )
        )
    return out


def table_collision(grasp: GraspPose, model: GripperModel) -> bool:
    """True iff any gripper body dips below the table plane z = 0."""
    for body in gripper_bodies(grasp, model):
        if float(body.corners()[:, 2].min()) < -TABLE_EPS:
            return True
    return False


def _collision_radius(model: GripperModel, grasp: GraspPose) -> float:
    spans = []
    for body in gripper_bodies(grasp, model):
        center_dist = float(np.linalg.norm(body.pose.translation - grasp.center))
        spans.append(center_dist + float(np.linalg.norm(body.half_extents)))
    return max(spans) + 1e-6


def scene_collision_filter(
    grasp_set: SceneGraspSet, scene: Scene, model: GripperModel
) -> SceneGraspSet:
    """Drop grasps whose bodies hit other objects' points or the table."""
    cloud = scene.scene_cloud
    tree = cKDTree(cloud.points) if len(cloud) else None
    kept = []
    for grasp in grasp_set.grasps:
        if table_collision(grasp, model):
            continue
        if tree is not None:
            ball = tree.query_ball_point(grasp.center, _collision_radius(model, grasp))
            if ball:
                idx = np.asarray(ball, dtype=np.int64)
                idx = idx[cloud.object_ids[idx] != grasp.object_id]
                if idx.size and gripper_collision(grasp, model, cloud.select(idx)):
                    continue
        kept.append(grasp)
    return SceneGraspSet(kept)


def synthesize_scene(
    object_ids: Sequence[int],
    rng_seed: int,
    catalog: Mapping[int, TriangleMesh],
    *,
    cloud_density: float = DEFAULT_CLOUD_DENSITY,
    cloud_seed: int = 0,
    table_size: float = 0.5,
    min_clearance: float = 0.003,
    split_tag: str = "train",
    n_cameras: int = 8,
    max_attempts: int = 1000,
) -> Scene:
    """Drop-to-table placement of catalog objects with rejection sampling.

    Each object rests at its z-minimum with a random yaw and a random (x, y)
    inside the table region; placements keep surface clouds at least
    `min_clearance` apart. Deterministic for a fixed seed.
    """
    ids = list(object_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("object ids must be unique within a scene")
    for oid in ids:
        if oid not in catalog:
            raise KeyError(f"object id {oid} missing from catalog")
    rng = np.random.default_rng(rng_seed)
    half_region = table_size / 2.0
    placed: list[tuple[int, RigidTransform, PointCloud]] = []
    trees: list[cKDTree] = []
    for oid in ids:
        mesh = catalog[oid]
        base_cloud = sample_mesh_surface(mesh, cloud_density, cloud_seed)
        radius_xy = float(np.linalg.norm(mesh.vertices[:, :2], axis=1).max())
        z_min = float(mesh.vertices[:, 2].min())
        slack = half_region - radius_xy
        if slack <= 0:
            raise ValueError(f"object {oid} is too large for the table region")
        pose = None
        for _ in range(max_attempts):
            yaw = rng.uniform(0.0, 2.0 * math.pi)
            xy = rng.uniform(-slack, slack, size=2)
            candidate = RigidTransform(
                rotation_about_axis([0.0, 0.0, 1.0], yaw),
                np.array([xy[0], xy[1], -z_min]),
            )
            pts = candidate.apply(base_cloud.points)
            ok = True
            for tr in trees:
                d, _ = tr.query(pts, k=1)
                if float(np.min(d)) < min_clearance:
                    ok = False
                    break
            if ok:
                pose = candidate
                break
        if pose is None:
            raise SceneTooCrowded(
                f"scene too crowded: could not place object {oid} "
                f"after {max_attempts} attempts"
            )
        world_cloud = base_cloud.transformed(pose)
        placed.append((oid, pose, world_cloud))
        trees.append(cKDTree(world_cloud.points))

    points = np.concatenate([c.points for _, _, c in placed])
    normals = np.concatenate([c.normals for _, _, c in placed])
    ids_col = np.concatenate(
        [np.full(len(c), oid, dtype=np.int64) for oid, _, c in placed]
    )
    return Scene(
        instances=tuple(ObjectInstance(oid, pose) for oid, pose, _ in placed),
        camera_poses=camera_trajectory(n_cameras) if n_cameras > 0 else (),
        scene_cloud=PointCloud(points, normals=normals, object_ids=ids_col),
        split_tag=split_tag,
    )


def camera_trajectory(
    n: int, radius: float = 0.6, target=(0.0, 0.0, 0.0)
) -> tuple:
    """Distinct camera poses on a quarter sphere, each looking at `target`.

    Positions span 90 degrees of azimuth and the full upper elevation range;
    the camera +z axis points at the target and the up reference is world +z.
    """
    if n < 1:
        raise ValueError("camera count must be >= 1")
    tgt = np.asarray(target, dtype=np.float64)
    poses = []
    for i in range(n):
        elevation = (i + 0.5) / n * (math.pi / 2.0)
        azimuth = ((i * 0.6180339887498949) % 1.0) * (math.pi / 2.0)
        pos = tgt + radius * np.array(
            [
                math.cos(elevation) * math.cos(azimuth),
                math.cos(elevation) * math.sin(azimuth),
                math.sin(elevation),
            ]
        )
        forward = tgt - pos
        forward /= np.linalg.norm(forward)
        up = np.array([0.0, 0.0, 1.0])
        if abs(float(forward @ up)) > 0.999:
            up = np.array([1.0, 0.0, 0.0])
        x_axis = np.cross(up, forward)
        x_axis /= np.linalg.norm(x_axis)
        y_axis = np.cross(forward, x_axis)
        rot = np.column_stack((x_axis, y_axis, forward))
        poses.append(RigidTransform(rot, pos))
    return tuple(poses)
