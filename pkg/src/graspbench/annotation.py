"""Dense per-object grasp label generation.

Grasp points are voxel-uniform surface samples; each point spawns a grid of
candidates over V view directions, A in-plane angles and D depths. Every
candidate gets a width (or is flagged empty), a collision check against the
object's own surface cloud, and a friction-sweep quality score.

Candidate convention: a candidate at grasp point p with depth d is centered
at p + d * approach_axis, so its closing region spans [2d - L, 2d] along the
approach axis measured from p (L = finger length).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .forceclosure import (
    ANGLE_EPS,
    DEGENERATE_EPS,
    EXTREME_BAND,
    FrictionGrid,
    pick_extreme,
)
from .geometry import (
    BOUNDARY_EPS,
    PointCloud,
    TriangleMesh,
    sample_mesh_surface,
    sample_sphere_directions,
    view_to_rotation,
    voxel_downsample,
)
from .gripper import GraspPose, GripperModel

DEFAULT_ANGLES = tuple(i * math.pi / 12.0 for i in range(12))
DEFAULT_DEPTHS = (0.01, 0.02, 0.03, 0.04)
DEFAULT_CLOUD_DENSITY = 1.0e6  # points per square meter (100 per cm^2)


class LabelFlag(IntEnum):
    NEGATIVE = 0
    POSITIVE = 1
    COLLISION = 2
    EMPTY = 3


@dataclass(frozen=True)
class AnnotationParams:
    """Grid and sampling parameters for dense object annotation."""

    voxel: float = 0.005
    views: int = 300
    angles: tuple = DEFAULT_ANGLES
    depths: tuple = DEFAULT_DEPTHS
    friction: FrictionGrid = field(default_factory=FrictionGrid)
    cloud_density: float = DEFAULT_CLOUD_DENSITY
    cloud_seed: int = 0

    def __post_init__(self):
        if self.voxel <= 0:
            raise ValueError("voxel size must be positive")
        if self.views < 1:
            raise ValueError("view count must be >= 1")
        angles = tuple(float(a) for a in self.angles)
        if not angles or any(a < 0.0 or a >= math.pi for a in angles):
            raise ValueError("in-plane angles must be non-empty and in [0, pi)")
        depths = tuple(float(d) for d in self.depths)
        if not depths or any(d <= 0.0 for d in depths):
            raise ValueError("depths must be non-empty and positive")
        if self.cloud_density <= 0:
            raise ValueError("cloud density must be positive")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "depths", depths)


@dataclass
class GraspLabelSet:
    """Dense label tensors over grasp points x views x angles x depths.

    Scores are stored as 1-based indices into the friction grid (0 = no
    score) so that s = 1.1 - mu reproduces exactly; widths are float32 and
    grasp points are float32, matching the packed on-disk layout bit for bit.
    """

    object_id: int
    grasp_points: np.ndarray  # (N, 3) float32
    grasp_normals: np.ndarray  # (N, 3) float32
    views: int
    angles: tuple
    depths: tuple
    mu_values: tuple
    score_index: np.ndarray  # (N, V, A, D) uint8
    widths: np.ndarray  # (N, V, A, D) float32
    flags: np.ndarray  # (N, V, A, D) uint8
    gripper_hash: str = ""

    def __post_init__(self):
        self.grasp_points = np.asarray(self.grasp_points, dtype=np.float32)
        self.grasp_normals = np.asarray(self.grasp_normals, dtype=np.float32)
        self.score_index = np.asarray(self.score_index, dtype=np.uint8)
        self.widths = np.asarray(self.widths, dtype=np.float32)
        self.flags = np.asarray(self.flags, dtype=np.uint8)
        shape = self.shape
        for name in ("score_index", "widths", "flags"):
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
        if self.grasp_normals.shape != self.grasp_points.shape:
            raise ValueError("grasp normals must match grasp points in shape")
        positive = self.flags == LabelFlag.POSITIVE
        if not np.array_equal(self.score_index > 0, positive):
            raise ValueError("score index and positive flags are inconsistent")

    @property
    def n_points(self) -> int:
        return len(self.grasp_points)

    @property
    def shape(self) -> tuple:
        return (
            self.n_points,
            self.views,
            len(self.angles),
            len(self.depths),
        )

    def scores(self) -> np.ndarray:
        """Float64 score tensor; 0 where negative/collision/empty."""
        lut = np.zeros(len(self.mu_values) + 1)
        for i, mu in enumerate(self.mu_values):
            lut[i + 1] = 1.1 - mu
        return lut[self.score_index]

    def view_directions(self) -> np.ndarray:
        return sample_sphere_directions(self.views)

    def grasp_pose(self, i: int, vi: int, ai: int, di: int) -> GraspPose:
        """Reconstruct the object-frame grasp pose of one cell."""
        rot = view_to_rotation(self.view_directions()[vi], self.angles[ai])
        point = self.grasp_points[i].astype(np.float64)
        depth = self.depths[di]
        score = self.scores()[i, vi, ai, di]
        return GraspPose(
            rotation=rot,
            center=point + depth * rot[:, 0],
            width=float(self.widths[i, vi, ai, di]),
            depth=depth,
            score=float(score),
            confidence=float(score),
            object_id=self.object_id,
        )


def sample_grasp_points(
    mesh: TriangleMesh,
    voxel: float,
    density: float = DEFAULT_CLOUD_DENSITY,
    seed: int = 0,
) -> PointCloud:
    """Voxel-uniform grasp points on the mesh surface, with face normals."""
    dense = sample_mesh_surface(mesh, density, seed)
    return voxel_downsample(dense, voxel)


def generate_candidates(
    point,
    normal,
    params: AnnotationParams,
    model: GripperModel,
) -> list[GraspPose]:
    """All V * |A| * |D| candidates at one grasp point, view-major order.

    The surface normal is accepted alongside the point for API symmetry with
    the sampled grasp points; candidate construction itself enumerates the
    full view sphere. Widths are left unset (0).
    """
    del normal
    p = np.asarray(point, dtype=np.float64)
    out = []
    for view in sample_sphere_directions(params.views):
        for angle in params.angles:
            rot = view_to_rotation(view, angle)
            approach = rot[:, 0]
            for depth in params.depths:
                out.append(
                    GraspPose(rotation=rot, center=p + depth * approach, depth=depth)
                )
    return out


def _body_reach(model: GripperModel, depths) -> float:
    # Largest |coordinate| any gripper body reaches from the grasp point.
    dmax = max(depths)
    dmin = min(depths)
    x_extent = max(2.0 * dmax, model.finger_length + model.base_depth - 2.0 * dmin)
    y_extent = model.max_width / 2.0 + model.finger_thickness
    z_extent = model.finger_height / 2.0
    return math.sqrt(x_extent**2 + y_extent**2 + z_extent**2) + 1e-6


def _annotate_point(
    pi: int,
    point: np.ndarray,
    cloud_pts: np.ndarray,
    cloud_normals: np.ndarray,
    tree: cKDTree,
    rotations: list,
    params: AnnotationParams,
    model: GripperModel,
    reach: float,
    atan_mu: np.ndarray,
    score_index: np.ndarray,
    widths: np.ndarray,
    flags: np.ndarray,
) -> None:
    ball = tree.query_ball_point(point, reach)
    ball.sort()  # ascending original order keeps extreme tie-breaks stable
    sub = cloud_pts[ball]
    sub_n = cloud_normals[ball]
    n_angles = len(params.angles)
    cos_a = np.cos(params.angles)
    sin_a = np.sin(params.angles)
    half_h = model.finger_height / 2.0
    half_maxw = model.max_width / 2.0
    thick = model.finger_thickness
    L = model.finger_length
    base = model.base_depth
    for vi, rot0 in enumerate(rotations):
        local = (sub - point) @ rot0
        x = local[:, 0]
        ya = cos_a[:, None] * local[None, :, 1] + sin_a[:, None] * local[None, :, 2]
        za = -sin_a[:, None] * local[None, :, 1] + cos_a[:, None] * local[None, :, 2]
        for di, d in enumerate(params.depths):
            lo, hi = 2.0 * d - L, 2.0 * d
            slab = np.nonzero((x >= lo - BOUNDARY_EPS) & (x <= hi + BOUNDARY_EPS))[0]
            if slab.size == 0:
                continue  # every angle stays EMPTY
            ys = ya[:, slab]
            zs = za[:, slab]
            abs_y = np.abs(ys)
            in_z = np.abs(zs) <= half_h + BOUNDARY_EPS
            region_max = in_z & (abs_y <= half_maxw + BOUNDARY_EPS)
            any_region = region_max.any(axis=1)
            if not any_region.any():
                continue
            masked_y = np.where(region_max, abs_y, -np.inf)
            y_max = masked_y.max(axis=1)
            width_req = 2.0 * y_max + model.width_clearance
            width_val = np.minimum(width_req, model.max_width)
            half_w = width_val[:, None] / 2.0
            finger_hit = (
                in_z
                & (abs_y >= half_w - BOUNDARY_EPS)
                & (abs_y <= half_w + thick + BOUNDARY_EPS)
            ).any(axis=1)
            plate = np.nonzero(
                (x >= lo - base - BOUNDARY_EPS) & (x <= lo + BOUNDARY_EPS)
            )[0]
            if plate.size:
                plate_hit = (
                    (np.abs(za[:, plate]) <= half_h + BOUNDARY_EPS)
                    & (np.abs(ya[:, plate]) <= half_w + thick + BOUNDARY_EPS)
                ).any(axis=1)
            else:
                plate_hit = np.zeros(n_angles, dtype=bool)
            collided = finger_hit | plate_hit
            for ai in range(n_angles):
                if not any_region[ai]:
                    continue
                widths[pi, vi, ai, di] = width_val[ai]
                if collided[ai]:
                    flags[pi, vi, ai, di] = LabelFlag.COLLISION
                    continue
                in_region = region_max[ai] & (
                    abs_y[ai] <= width_val[ai] / 2.0 + BOUNDARY_EPS
                )
                ridx = slab[in_region]
                flags[pi, vi, ai, di] = LabelFlag.NEGATIVE
                if ridx.size < 2:
                    continue
                y_sel = ys[ai][in_region]
                dx = x[ridx] - (lo + hi) / 2.0
                dz = zs[ai][in_region]
                axis_dist2 = dx * dx + dz * dz
                lo_i = ridx[pick_extreme(y_sel <= y_sel.min() + EXTREME_BAND, axis_dist2)]
                hi_i = ridx[pick_extreme(y_sel >= y_sel.max() - EXTREME_BAND, axis_dist2)]
                if lo_i == hi_i:
                    continue
                p1 = sub[lo_i]
                p2 = sub[hi_i]
                diff = p2 - p1
                dist = math.sqrt(float(diff @ diff))
                if dist < DEGENERATE_EPS:
                    continue
                u = diff / dist
                c1 = math.acos(min(1.0, max(-1.0, float(u @ -sub_n[lo_i]))))
                c2 = math.acos(min(1.0, max(-1.0, float(-u @ -sub_n[hi_i]))))
                worst = max(c1, c2)
                passing = np.nonzero(worst <= atan_mu + ANGLE_EPS)[0]
                if passing.size:
                    score_index[pi, vi, ai, di] = passing[0] + 1
                    flags[pi, vi, ai, di] = LabelFlag.POSITIVE


def annotate_object(
    mesh: TriangleMesh,
    model: GripperModel,
    params: AnnotationParams = AnnotationParams(),
    *,
    object_id: int = 0,
    threads: int = 1,
) -> GraspLabelSet:
    """Label the full candidate grid of one object mesh.

    Deterministic for identical inputs. `threads` > 1 (or 0 for auto)
    parallelizes over grasp points; results are identical regardless.
    """
    for d in params.depths:
        if d > model.finger_length:
            raise ValueError("depths must not exceed the finger length")
    dense = sample_mesh_surface(mesh, params.cloud_density, params.cloud_seed)
    grasp_pts = voxel_downsample(dense, params.voxel)
    # Quantize grasp points once so in-memory, on-disk and reconstructed
    # candidate geometry all share the exact same coordinates.
    pts32 = grasp_pts.points.astype(np.float32)
    nrm32 = grasp_pts.normals.astype(np.float32)
    n = len(pts32)
    shape = (n, params.views, len(params.angles), len(params.depths))
    score_index = np.zeros(shape, dtype=np.uint8)
    widths = np.zeros(shape, dtype=np.float32)
    flags = np.full(shape, LabelFlag.EMPTY, dtype=np.uint8)

    views = sample_sphere_directions(params.views)
    rotations = [view_to_rotation(v, 0.0) for v in views]
    tree = cKDTree(dense.points)
    reach = _body_reach(model, params.depths)
    atan_mu = np.arctan(np.asarray(params.friction.mu_values))

    def work(pi: int) -> None:
        _annotate_point(
            pi,
            pts32[pi].astype(np.float64),
            dense.points,
            dense.normals,
            tree,
            rotations,
            params,
            model,
            reach,
            atan_mu,
            score_index,
            widths,
            flags,
        )

    if threads == 1 or n <= 1:
        for pi in range(n):
            work(pi)
    else:
        workers = threads if threads > 0 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(n)))

    return GraspLabelSet(
        object_id=object_id,
        grasp_points=pts32,
        grasp_normals=nrm32,
        views=params.views,
        angles=params.angles,
        depths=params.depths,
        mu_values=params.friction.mu_values,
        score_index=score_index,
        widths=widths,
        flags=flags,
        gripper_hash=model.profile_hash(),
    )


def label_stats(labels: GraspLabelSet) -> dict:
    """Counts per flag plus the positive:negative ratio (inf if no negatives)."""
    flat = labels.flags.reshape(-1)
    counts = {
        "positive": int(np.count_nonzero(flat == LabelFlag.POSITIVE)),
        "negative": int(np.count_nonzero(flat == LabelFlag.NEGATIVE)),
        "collision": int(np.count_nonzero(flat == LabelFlag.COLLISION)),
        "empty": int(np.count_nonzero(flat == LabelFlag.EMPTY)),
    }
    if counts["negative"] == 0:
        ratio = math.inf
    else:
        ratio = counts["positive"] / counts["negative"]
    counts["ratio"] = ratio
    return counts
