"""Rigid-body transforms, rotation metrics and point-cloud primitives.

Conventions shared by the whole package: lengths are meters, angles are
radians, rotation matrices are 3x3 row-major with columns giving the frame
axes. The gripper frame is +x = approach axis, +y = closing axis,
+z = finger-height axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

# Orthonormality tolerance for rotation matrices.
ORTHO_TOL = 1e-6
# Boundary slack used by containment tests so that exact-boundary points stay
# on the same side under the ~1e-16 coordinate noise of a rigid re-expression.
BOUNDARY_EPS = 1e-9

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def _as_array(value, shape, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    return arr


def check_rotation(rotation, tol: float = ORTHO_TOL) -> np.ndarray:
    """Validate and return a proper 3x3 rotation matrix.

    Raises ValueError when the matrix is not orthonormal within `tol` or its
    determinant is not +1 within `tol`.
    """
    r = _as_array(rotation, (3, 3), "rotation")
    if not np.allclose(r.T @ r, np.eye(3), atol=tol, rtol=0.0):
        raise ValueError("rotation matrix is not orthonormal")
    if abs(float(np.linalg.det(r)) - 1.0) > tol:
        raise ValueError("rotation matrix determinant is not +1")
    return r


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rotation matrix for a right-handed rotation of `angle` about `axis`."""
    a = _as_array(axis, (3,), "axis")
    n = float(np.linalg.norm(a))
    if n == 0.0:
        raise ValueError("rotation axis must be non-zero")
    x, y, z = a / n
    c, s = math.cos(angle), math.sin(angle)
    cc = 1.0 - c
    return np.array(
        [
            [c + x * x * cc, x * y * cc - z * s, x * z * cc + y * s],
            [y * x * cc + z * s, c + y * y * cc, y * z * cc - x * s],
            [z * x * cc - y * s, z * y * cc + x * s, c + z * z * cc],
        ]
    )


@dataclass(frozen=True)
class RigidTransform:
    """SO(3) rotation plus translation mapping child-frame points to parent."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", check_rotation(self.rotation))
        object.__setattr__(
            self, "translation", _as_array(self.translation, (3,), "translation")
        )

    @staticmethod
    def identity() -> "RigidTransform":
        return RigidTransform(np.eye(3), np.zeros(3))

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """Transform applying `other` first, then `self`."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def invert(self) -> "RigidTransform":
        rt = self.rotation.T
        return RigidTransform(rt, -(rt @ self.translation))

    def apply(self, points) -> np.ndarray:
        """Apply to a single point (3,) or a batch (N, 3)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            return self.rotation @ pts + self.translation
        return pts @ self.rotation.T + self.translation

    def apply_vector(self, vectors) -> np.ndarray:
        """Rotate direction vectors without translating."""
        v = np.asarray(vectors, dtype=np.float64)
        if v.ndim == 1:
            return self.rotation @ v
        return v @ self.rotation.T

    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m


def compose(a: RigidTransform, b: RigidTransform) -> RigidTransform:
    return a.compose(b)


def invert(t: RigidTransform) -> RigidTransform:
    return t.invert()


def rotation_distance(r1, r2) -> float:
    """Geodesic angle between two rotations, in [0, pi].

    The arccos argument is clamped to [-1, 1] to absorb floating-point drift
    in the trace.
    """
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    c = (float(np.trace(r1 @ r2.T)) - 1.0) / 2.0
    return math.acos(min(1.0, max(-1.0, c)))


def translation_distance(t1, t2) -> float:
    """Euclidean distance between two translations."""
    a = np.asarray(t1, dtype=np.float64)
    b = np.asarray(t2, dtype=np.float64)
    return float(np.linalg.norm(a - b))


@dataclass
class PointCloud:
    """Points with optional unit normals and per-point object ids."""

    points: np.ndarray
    normals: Optional[np.ndarray] = None
    object_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"points must be (N, 3), got {pts.shape}")
        self.points = pts
        if self.normals is not None:
            nrm = np.asarray(self.normals, dtype=np.float64)
            if nrm.shape != pts.shape:
                raise ValueError("normals must match points in shape")
            if len(pts) and not np.allclose(
                np.linalg.norm(nrm, axis=1), 1.0, atol=ORTHO_TOL, rtol=0.0
            ):
                raise ValueError("normals must have unit norm")
            self.normals = nrm
        if self.object_ids is not None:
            ids = np.asarray(self.object_ids, dtype=np.int64)
            if ids.shape != (len(pts),):
                raise ValueError("object_ids must be one id per point")
            self.object_ids = ids

    def __len__(self) -> int:
        return len(self.points)

    def select(self, indices) -> "PointCloud":
        idx = np.asarray(indices)
        return PointCloud(
            self.points[idx],
            None if self.normals is None else self.normals[idx],
            None if self.object_ids is None else self.object_ids[idx],
        )

    def transformed(self, t: RigidTransform) -> "PointCloud":
        return PointCloud(
            t.apply(self.points),
            None if self.normals is None else t.apply_vector(self.normals),
            self.object_ids,
        )


@dataclass
class TriangleMesh:
    """Triangle mesh with derived face normals and areas.

    Zero-area triangles are rejected at construction; loaders drop them (with
    a warning) before building the mesh.
    """

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=np.float64)
        tris = np.asarray(self.triangles, dtype=np.int64)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError(f"vertices must be (V, 3), got {verts.shape}")
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValueError(f"triangles must be (F, 3), got {tris.shape}")
        if len(tris) and (tris.min() < 0 or tris.max() >= len(verts)):
            raise ValueError("triangle indices out of range")
        self.vertices = verts
        self.triangles = tris
        if len(tris) and np.any(self._raw_areas() <= 1e-14):
            raise ValueError("mesh contains degenerate (zero-area) triangles")

    def _raw_areas(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)

    @property
    def face_areas(self) -> np.ndarray:
        return self._raw_areas()

    @property
    def face_normals(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        n = np.cross(b - a, c - a)
        return n / np.linalg.norm(n, axis=1, keepdims=True)

    def transformed(self, t: RigidTransform) -> "TriangleMesh":
        return TriangleMesh(t.apply(self.vertices), self.triangles.copy())

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def voxel_downsample(cloud: PointCloud, voxel: float) -> PointCloud:
    """Keep at most one point per occupied voxel.

    The representative of a voxel is the input point nearest to the centroid
    of the voxel's points (ties broken by lowest input index), so outputs are
    always genuine input points. The voxel grid is anchored at the world
    origin, which makes the operation idempotent.
    """
    if voxel <= 0:
        raise ValueError("voxel size must be positive")
    n = len(cloud)
    if n == 0:
        return cloud.select(np.array([], dtype=np.int64))
    keys = np.floor(cloud.points / voxel).astype(np.int64)
    _, group, counts = np.unique(
        keys, axis=0, return_inverse=True, return_counts=True
    )
    group = group.reshape(-1)
    sums = np.zeros((counts.size, 3))
    np.add.at(sums, group, cloud.points)
    centroids = sums / counts[:, None]
    dist2 = np.einsum("ij,ij->i", cloud.points - centroids[group], cloud.points - centroids[group])
    # Lowest (dist2, index) per group picks the nearest-to-centroid point with
    # a deterministic index tie-break.
    order = np.lexsort((np.arange(n), dist2, group))
    first_of_group = np.ones(n, dtype=bool)
    first_of_group[1:] = group[order][1:] != group[order][:-1]
    selected = np.sort(order[first_of_group])
    return cloud.select(selected)


def sample_sphere_directions(v: int) -> np.ndarray:
    """Deterministic near-uniform unit directions on the full sphere.

    Uses a golden-angle (Fibonacci) lattice; v=1 returns +z by convention and
    v=2 the optimal antipodal pair.
    """
    if v < 1:
        raise ValueError("direction count must be >= 1")
    if v == 1:
        return np.array([[0.0, 0.0, 1.0]])
    if v == 2:
        return np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    i = np.arange(v, dtype=np.float64)
    z = 1.0 - 2.0 * (i + 0.5) / v
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * _GOLDEN_ANGLE
    return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))


def view_to_rotation(view, in_plane_angle: float) -> np.ndarray:
    """Gripper rotation for a view direction and an in-plane angle.

    The approach axis (column 0) is -view: the gripper moves along the view
    direction toward the object. The in-plane angle spins the closing and
    height axes about the approach axis.
    """
    vw = _as_array(view, (3,), "view")
    n = float(np.linalg.norm(vw))
    if abs(n - 1.0) > ORTHO_TOL:
        raise ValueError("view must be a unit vector")
    x = -vw / n
    ref = np.array([0.0, 0.0, 1.0]) if abs(x[2]) <= 0.999 else np.array([1.0, 0.0, 0.0])
    y0 = np.cross(ref, x)
    y0 /= np.linalg.norm(y0)
    z0 = np.cross(x, y0)
    ca, sa = math.cos(in_plane_angle), math.sin(in_plane_angle)
    y = ca * y0 + sa * z0
    z = np.cross(x, y)
    return np.column_stack((x, y, z))


def estimate_normals(cloud: PointCloud, k: int) -> PointCloud:
    """Estimate unit normals from k-nearest-neighbor covariance.

    Each normal is the least-variance eigenvector of its neighborhood,
    oriented away from the cloud centroid.
    """
    if k < 3:
        raise ValueError("neighbor count must be >= 3")
    if len(cloud) < k:
        raise ValueError("insufficient points for normal estimation")
    pts = cloud.points
    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=k)
    neigh = pts[idx]
    centered = neigh - neigh.mean(axis=1, keepdims=True)
    cov = np.einsum("nki,nkj->nij", centered, centered)
    _, vecs = np.linalg.eigh(cov)
    normals = vecs[:, :, 0]
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    outward = pts - pts.mean(axis=0)
    flip = np.einsum("ij,ij->i", normals, outward) < 0.0
    normals[flip] *= -1.0
    return replace(cloud, normals=normals)


def sample_mesh_surface(
    mesh: TriangleMesh, density: float, seed: int = 0
) -> PointCloud:
    """Area-weighted random surface sampling with face normals.

    `density` is points per square meter; the draw is deterministic for a
    fixed seed.
    """
    if density <= 0:
        raise ValueError("density must be positive")
    if len(mesh.triangles) == 0:
        raise ValueError("mesh has no triangles")
    areas = mesh.face_areas
    total = float(areas.sum())
    count = max(1, int(round(total * density)))
    rng = np.random.default_rng(seed)
    per_face = rng.multinomial(count, areas / total)
    face_idx = np.repeat(np.arange(len(areas)), per_face)
    u = rng.random(count)
    w = rng.random(count)
    su = np.sqrt(u)
    a = mesh.vertices[mesh.triangles[face_idx, 0]]
    b = mesh.vertices[mesh.triangles[face_idx, 1]]
    c = mesh.vertices[mesh.triangles[face_idx, 2]]
    pts = (
        (1.0 - su)[:, None] * a
        + (su * (1.0 - w))[:, None] * b
        + (su * w)[:, None] * c
    )
    normals = mesh.face_normals[face_idx]
    return PointCloud(pts, normals=normals)
