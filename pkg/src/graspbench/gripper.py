"""Parametric two-finger parallel-jaw gripper model and containment tests.

Body layout in the gripper frame (x approach, y closing, z height), with the
grasp center at the origin and d = grasp depth, L = finger length:

  closing region   x in [d - L, d],  |y| <= width/2,            |z| <= height/2
  finger boxes     x in [d - L, d],  width/2 <= |y| <= width/2 + thickness
  back plate       x in [d - L - base_depth, d - L], |y| <= width/2 + thickness

All boxes are closed; containment uses a small outward slack (BOUNDARY_EPS)
so exact-boundary points classify identically after a rigid re-expression.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .geometry import (
    BOUNDARY_EPS,
    PointCloud,
    RigidTransform,
    _as_array,
    check_rotation,
)


@dataclass(frozen=True)
class GripperModel:
    """Parallel-jaw gripper dimensions, all in meters."""

    max_width: float = 0.10
    finger_length: float = 0.04
    finger_height: float = 0.02
    finger_thickness: float = 0.01
    base_depth: float = 0.02
    width_clearance: float = 0.01

    def __post_init__(self):
        for name in (
            "max_width",
            "finger_length",
            "finger_height",
            "finger_thickness",
            "base_depth",
            "width_clearance",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_width <= 2.0 * self.finger_thickness:
            raise ValueError("max_width must exceed twice the finger thickness")

    def to_dict(self) -> dict:
        return {
            "max_width": self.max_width,
            "finger_length": self.finger_length,
            "finger_height": self.finger_height,
            "finger_thickness": self.finger_thickness,
            "base_depth": self.base_depth,
            "width_clearance": self.width_clearance,
        }

    @staticmethod
    def from_dict(data: dict) -> "GripperModel":
        return GripperModel(**{k: float(v) for k, v in data.items()})

    def profile_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha1(payload.encode()).hexdigest()[:12]


@dataclass
class GraspPose:
    """6-DoF parallel-jaw grasp.

    `score` is the analytic quality (0 means negative or unscored) and
    `confidence` is predictor-assigned, used for ranking in evaluation.
    """

    rotation: np.ndarray
    center: np.ndarray
    width: float = 0.0
    depth: float = 0.0
    score: float = 0.0
    confidence: float = 0.0
    object_id: Optional[int] = None

    def __post_init__(self):
        self.rotation = check_rotation(self.rotation)
        self.center = _as_array(self.center, (3,), "center")
        self.width = float(self.width)
        self.depth = float(self.depth)
        self.score = float(self.score)
        self.confidence = float(self.confidence)
        if self.confidence < 0:
            raise ValueError("confidence must be >= 0")

    @property
    def approach_axis(self) -> np.ndarray:
        return self.rotation[:, 0]

    @property
    def closing_axis(self) -> np.ndarray:
        return self.rotation[:, 1]

    @property
    def height_axis(self) -> np.ndarray:
        return self.rotation[:, 2]

    def transformed(self, t: RigidTransform) -> "GraspPose":
        return replace(
            self, rotation=t.rotation @ self.rotation, center=t.apply(self.center)
        )


@dataclass(frozen=True)
class OrientedBox:
    """Closed box described by a pose (box frame to world) and half extents."""

    pose: RigidTransform
    half_extents: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        he = _as_array(self.half_extents, (3,), "half_extents")
        if np.any(he <= 0):
            raise ValueError("half extents must be positive")
        object.__setattr__(self, "half_extents", he)

    def local_coords(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return (pts - self.pose.translation) @ self.pose.rotation

    def contains(self, points, eps: float = BOUNDARY_EPS) -> np.ndarray:
        local = self.local_coords(points)
        return np.all(np.abs(local) <= self.half_extents + eps, axis=1)

    def corners(self) -> np.ndarray:
        signs = np.array(
            [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
            dtype=np.float64,
        )
        return self.pose.apply(signs * self.half_extents)


def closing_region(grasp: GraspPose, model: GripperModel) -> OrientedBox:
    """Box between the fingers, fingertips at `grasp.depth` along approach."""
    offset = grasp.depth - model.finger_length / 2.0
    pose = RigidTransform(
        grasp.rotation, grasp.center + offset * grasp.rotation[:, 0]
    )
    half = np.array(
        [model.finger_length / 2.0, grasp.width / 2.0, model.finger_height / 2.0]
    )
    return OrientedBox(pose, half)


def gripper_bodies(
    grasp: GraspPose, model: GripperModel
) -> tuple[OrientedBox, OrientedBox, OrientedBox]:
    """Solid bodies of the gripper: two fingers and the back plate."""
    x_axis = grasp.rotation[:, 0]
    y_axis = grasp.rotation[:, 1]
    region_offset = grasp.depth - model.finger_length / 2.0
    finger_half = np.array(
        [
            model.finger_length / 2.0,
            model.finger_thickness / 2.0,
            model.finger_height / 2.0,
        ]
    )
    finger_y = grasp.width / 2.0 + model.finger_thickness / 2.0
    fingers = tuple(
        OrientedBox(
            RigidTransform(
                grasp.rotation,
                grasp.center + region_offset * x_axis + side * finger_y * y_axis,
            ),
            finger_half,
        )
        for side in (-1.0, 1.0)
    )
    plate_offset = grasp.depth - model.finger_length - model.base_depth / 2.0
    plate = OrientedBox(
        RigidTransform(grasp.rotation, grasp.center + plate_offset * x_axis),
        np.array(
            [
                model.base_depth / 2.0,
                grasp.width / 2.0 + model.finger_thickness,
                model.finger_height / 2.0,
            ]
        ),
    )
    return fingers[0], fingers[1], plate


def points_in_box(cloud: PointCloud, box: OrientedBox) -> np.ndarray:
    """Indices of cloud points inside the closed box (boundary inclusive)."""
    if len(cloud) == 0:
        return np.array([], dtype=np.int64)
    return np.nonzero(box.contains(cloud.points))[0]


def gripper_collision(
    grasp: GraspPose, model: GripperModel, cloud: PointCloud
) -> bool:
    """True iff any cloud point lies inside a finger or the back plate.

    Points strictly inside the closing region never count as collision: the
    solid bodies are disjoint from the region's open interior by construction.
    """
    if len(cloud) == 0:
        return False
    for body in gripper_bodies(grasp, model):
        if bool(body.contains(cloud.points).any()):
            return True
    return False


def determine_width(
    grasp: GraspPose, model: GripperModel, obj: PointCloud
) -> Optional[float]:
    """Width closing on the object, or None when the grasp is empty/invalid.

    Opens the region to max width, measures the extreme |y| of the captured
    points and adds the clearance, capping at max width. Returns None when no
    point falls in the opened region or the fingers at the resulting width
    would collide with the object.
    """
    opened = replace(grasp, width=model.max_width)
    region = closing_region(opened, model)
    idx = points_in_box(obj, region)
    if idx.size == 0:
        return None
    local_y = region.local_coords(obj.points[idx])[:, 1]
    width = min(
        2.0 * float(np.max(np.abs(local_y))) + model.width_clearance,
        model.max_width,
    )
    if gripper_collision(replace(grasp, width=width), model, obj):
        return None
    return width
