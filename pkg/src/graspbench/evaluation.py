"""Online grasp evaluation: association, pose-NMS, Precision@k and AP.

Predictions are classified on the fly against the scene geometry, so the
evaluation never assumes how a detector represented its grasps. A grasp is a
true positive at friction mu when it is associated to an object, its gripper
bodies are collision-free in the scene, and the grasp is antipodal at mu
against the associated object's points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .forceclosure import (
    ANGLE_EPS,
    Contact,
    FrictionGrid,
    contact_cone_angles,
    extract_contacts,
)
from .geometry import rotation_distance, translation_distance
from .gripper import (
    GraspPose,
    GripperModel,
    closing_region,
    gripper_collision,
    points_in_box,
)
from .scene import Scene, TABLE_ID, table_collision

EVAL_MU = (0.1, 0.2, 0.3, 0.4, 0.5)
K_MAX = 50


@dataclass(frozen=True)
class NmsParams:
    """Pose-NMS thresholds: translation, rotation and per-object cap."""

    th_translation: float = 0.01
    th_rotation: float = math.radians(5.0)
    top_k: int = 10

    def __post_init__(self):
        if self.th_translation <= 0 or self.th_rotation <= 0 or self.top_k <= 0:
            raise ValueError("NMS parameters must be positive")


@dataclass
class EvalReport:
    """Per-friction precision curves, AP values and per-grasp audit records."""

    mu_values: tuple
    precision_at_k: np.ndarray  # (len(mu_values), K_MAX)
    ap_per_mu: tuple
    ap: float
    audit: tuple = ()

    def __post_init__(self):
        self.precision_at_k = np.asarray(self.precision_at_k, dtype=np.float64)
        self.mu_values = tuple(float(m) for m in self.mu_values)
        self.ap_per_mu = tuple(float(a) for a in self.ap_per_mu)
        expected = (len(self.mu_values), K_MAX)
        if self.precision_at_k.shape != expected:
            raise ValueError(f"precision_at_k must have shape {expected}")

    def to_dict(self) -> dict:
        return {
            "mu_values": list(self.mu_values),
            "precision_at_k": self.precision_at_k.tolist(),
            "ap_per_mu": list(self.ap_per_mu),
            "ap": self.ap,
            "audit": [dict(rec) for rec in self.audit],
        }

    @staticmethod
    def from_dict(data: dict) -> "EvalReport":
        return EvalReport(
            mu_values=tuple(data["mu_values"]),
            precision_at_k=np.asarray(data["precision_at_k"]),
            ap_per_mu=tuple(data["ap_per_mu"]),
            ap=float(data["ap"]),
            audit=tuple(data.get("audit", ())),
        )


def associate(
    grasp: GraspPose, scene: Scene, model: GripperModel
) -> Optional[int]:
    """Object id owning the plurality of points in the closing region.

    Table points are excluded; ties go to the object whose in-region centroid
    is nearest the region center, then to the smaller id. None when the
    region is empty or holds only table points.
    """
    cloud = scene.scene_cloud
    if len(cloud) == 0:
        return None
    region = closing_region(grasp, model)
    idx = points_in_box(cloud, region)
    if idx.size == 0:
        return None
    ids = cloud.object_ids[idx]
    keep = ids != TABLE_ID
    if not keep.any():
        return None
    idx = idx[keep]
    ids = ids[keep]
    uniq, counts = np.unique(ids, return_counts=True)
    center = region.pose.translation
    best = None
    for oid, cnt in zip(uniq, counts):
        centroid = cloud.points[idx[ids == oid]].mean(axis=0)
        dist = float(np.linalg.norm(centroid - center))
        key = (-int(cnt), dist, int(oid))
        if best is None or key < best[0]:
            best = (key, int(oid))
    return best[1]


def _scene_cone_angle(
    grasp: GraspPose, scene: Scene, model: GripperModel
) -> tuple[Optional[int], bool, Optional[float]]:
    """(associated id, collision, worst cone angle) for one prediction."""
    oid = associate(grasp, scene, model)
    if oid is None:
        return None, False, None
    collided = table_collision(grasp, model) or gripper_collision(
        grasp, model, scene.scene_cloud
    )
    if collided:
        return oid, True, None
    pair = extract_contacts(grasp, scene.object_points(oid), model)
    if pair is None:
        return oid, False, None
    a1, a2 = contact_cone_angles(*pair)
    return oid, False, max(a1, a2)


def classify_grasp(
    grasp: GraspPose, scene: Scene, model: GripperModel, mu: float
) -> bool:
    """True-positive verdict for one grasp at friction `mu`."""
    if mu <= 0:
        raise ValueError("friction coefficient must be positive")
    oid, collided, worst = _scene_cone_angle(grasp, scene, model)
    if oid is None or collided or worst is None:
        return False
    return worst <= math.atan(mu) + ANGLE_EPS


def pose_nms(
    preds: Sequence[GraspPose],
    scene: Scene,
    params: NmsParams,
    model: GripperModel,
) -> list:
    """Greedy duplicate suppression plus a per-object confidence cap.

    Scanning in descending confidence (stable on ties), a grasp is suppressed
    iff an already-kept grasp is closer than both thresholds (strictly).
    Survivors are then capped to the top K per associated object;
    unassociated survivors bypass the cap.
    """
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].confidence, i))
    cell = params.th_translation
    grid: dict = {}
    kept: list[GraspPose] = []

    def neighbor_keys(key):
        kx, ky, kz = key
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    yield (kx + dx, ky + dy, kz + dz)

    for i in order:
        g = preds[i]
        key = tuple(int(math.floor(c / cell)) for c in g.center)
        suppressed = False
        for nk in neighbor_keys(key):
            for kept_g in grid.get(nk, ()):
                if (
                    translation_distance(g.center, kept_g.center)
                    < params.th_translation
                    and rotation_distance(g.rotation, kept_g.rotation)
                    < params.th_rotation
                ):
                    suppressed = True
                    break
            if suppressed:
                break
        if not suppressed:
            kept.append(g)
            grid.setdefault(key, []).append(g)

    per_object: dict = {}
    final = []
    for g in kept:
        oid = associate(g, scene, model)
        if oid is None:
            final.append(g)
            continue
        taken = per_object.get(oid, 0)
        if taken < params.top_k:
            per_object[oid] = taken + 1
            final.append(g)
    return final


def precision_at_k(verdicts: Sequence[bool], k: int) -> float:
    """Fraction of true verdicts among the top k; missing ranks count false."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for v in verdicts[: min(k, len(verdicts))] if v)
    return hits / k


def precision_curve(verdicts: Sequence[bool], k_max: int = K_MAX) -> list:
    return [precision_at_k(verdicts, k) for k in range(1, k_max + 1)]


def report_from_verdicts(
    verdict_rows: Sequence[Sequence[bool]],
    mu_values: Sequence[float] = EVAL_MU,
    audit: Sequence[dict] = (),
) -> EvalReport:
    """Build a report from per-friction verdict rows (one row per mu)."""
    rows = [list(r) for r in verdict_rows]
    if len(rows) != len(mu_values):
        raise ValueError("one verdict row per friction value required")
    curves = [precision_curve(row) for row in rows]
    ap_per_mu = tuple(sum(curve) / K_MAX for curve in curves)
    ap = sum(ap_per_mu) / len(ap_per_mu)
    return EvalReport(
        mu_values=tuple(mu_values),
        precision_at_k=np.asarray(curves),
        ap_per_mu=ap_per_mu,
        ap=ap,
        audit=tuple(audit),
    )


def evaluate_scene(
    preds: Sequence[GraspPose],
    scene: Scene,
    model: GripperModel,
    params: NmsParams = NmsParams(),
    audit_grid: FrictionGrid = FrictionGrid(),
) -> EvalReport:
    """Full evaluation pipeline: NMS, ranking, classification, AP.

    The report always covers k = 1..50 at mu = 0.1..0.5; an empty (or fully
    suppressed) prediction list yields zero precision everywhere.
    """
    kept = pose_nms(preds, scene, params, model)
    verdict_rows = [[] for _ in EVAL_MU]
    audit = []
    for g in kept:
        oid, collided, worst = _scene_cone_angle(g, scene, model)
        mu_star = None
        if oid is not None and not collided and worst is not None:
            for mu in audit_grid.mu_values:
                if worst <= math.atan(mu) + ANGLE_EPS:
                    mu_star = mu
                    break
        per_mu = {}
        for row, mu in zip(verdict_rows, EVAL_MU):
            ok = (
                oid is not None
                and not collided
                and worst is not None
                and worst <= math.atan(mu) + ANGLE_EPS
            )
            row.append(ok)
            per_mu[f"{mu:.1f}"] = bool(ok)
        audit.append(
            {
                "object_id": oid,
                "collision": bool(collided),
                "mu_star": mu_star,
                "confidence": g.confidence,
                "verdicts": per_mu,
            }
        )
    return report_from_verdicts(verdict_rows, EVAL_MU, audit)


@dataclass(frozen=True)
class RectGrasp:
    """In-plane rectangle grasp: center, orientation and extents."""

    center: np.ndarray
    angle: float
    width: float
    height: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64).reshape(2)
        object.__setattr__(self, "center", c)
        if self.width <= 0 or self.height <= 0:
            raise ValueError("rectangle extents must be positive")

    def corners(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        ax = np.array([c, s])
        ay = np.array([-s, c])
        hw, hh = self.width / 2.0, self.height / 2.0
        return np.array(
            [
                self.center + hw * ax + hh * ay,
                self.center - hw * ax + hh * ay,
                self.center - hw * ax - hh * ay,
                self.center + hw * ax - hh * ay,
            ]
        )


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _clip_polygon(poly: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Clip a convex polygon by the half-plane left of the edge a->b."""
    edge = b - a
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp = _cross2(edge, p - a)
        sq = _cross2(edge, q - a)
        if sp >= 0:
            out.append(p)
        if (sp > 0 > sq) or (sp < 0 < sq):
            t = sp / (sp - sq)
            out.append(p + t * (q - p))
    return np.asarray(out) if out else np.zeros((0, 2))


def _polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def rect_iou(r1: RectGrasp, r2: RectGrasp) -> float:
    """Exact intersection-over-union of two rotated rectangles."""
    poly = r1.corners()
    clipper = r2.corners()
    for i in range(4):
        poly = _clip_polygon(poly, clipper[i], clipper[(i + 1) % 4])
        if len(poly) == 0:
            return 0.0
    inter = _polygon_area(poly)
    union = r1.width * r1.height + r2.width * r2.height - inter
    return inter / union if union > 0 else 0.0


def rectangle_metric(
    pred: RectGrasp,
    gts: Sequence[RectGrasp],
    angle_tol: float = math.radians(30.0),
    iou_threshold: float = 0.25,
) -> bool:
    """Legacy rectangle hit test: angle error < 30 deg and IOU > 0.25."""
    for gt in gts:
        da = abs(pred.angle - gt.angle) % math.pi
        da = min(da, math.pi - da)
        if da < angle_tol and rect_iou(pred, gt) > iou_threshold:
            return True
    return False
