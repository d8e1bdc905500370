"""Analytic grasp quality: antipodal force-closure test and friction sweep.

A two-contact grasp is antipodal at friction mu when the line between the
contacts lies inside both friction cones (half-angle atan(mu)). Sweeping mu
upward over a grid until the test passes yields the quality score
s = 1.1 - mu*, so lower-friction (more robust) grasps score higher.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import PointCloud, _as_array
from .gripper import GraspPose, GripperModel, closing_region, points_in_box

# Cone-boundary slack: an angle exactly at atan(mu) counts as inside, and
# float noise from re-expressing the same geometry cannot flip the verdict.
ANGLE_EPS = 1e-9
# Below this separation a contact pair is degenerate.
DEGENERATE_EPS = 1e-6
# Band for extreme-point selection. Ties within the band (flat faces give
# whole planes of equally extreme points) are resolved to the point nearest
# the closing axis, then to the lowest point index; both keys are stable
# under rigid transforms of the same cloud.
EXTREME_BAND = 1e-9

DEFAULT_MU = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class Contact:
    """Surface contact: position and outward unit normal."""

    point: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _as_array(self.point, (3,), "point"))
        n = _as_array(self.normal, (3,), "normal")
        if abs(float(np.linalg.norm(n)) - 1.0) > 1e-6:
            raise ValueError("contact normal must have unit norm")
        object.__setattr__(self, "normal", n)


@dataclass(frozen=True)
class FrictionGrid:
    """Ordered friction coefficients swept from low to high."""

    mu_values: tuple = DEFAULT_MU

    def __post_init__(self):
        mus = tuple(float(m) for m in self.mu_values)
        if not mus:
            raise ValueError("friction grid must be non-empty")
        if any(m <= 0.0 or m > 1.0 + 1e-12 for m in mus):
            raise ValueError("friction coefficients must lie in (0, 1]")
        if any(b <= a for a, b in zip(mus, mus[1:])):
            raise ValueError("friction grid must be strictly increasing")
        object.__setattr__(self, "mu_values", mus)

    @property
    def step(self) -> float:
        if len(self.mu_values) < 2:
            return 0.0
        return self.mu_values[1] - self.mu_values[0]

    def __len__(self) -> int:
        return len(self.mu_values)


def default_friction_grid() -> FrictionGrid:
    return FrictionGrid()


def _angle_between(u, v) -> float:
    c = float(np.dot(u, v))
    return math.acos(min(1.0, max(-1.0, c)))


def pick_extreme(band_mask: np.ndarray, axis_dist2: np.ndarray) -> int:
    """Position of the band member nearest the closing axis (first on ties)."""
    candidates = np.nonzero(band_mask)[0]
    return int(candidates[np.argmin(axis_dist2[candidates])])


def extract_contacts(
    grasp: GraspPose, obj: PointCloud, model: GripperModel
) -> Optional[tuple[Contact, Contact]]:
    """Extreme points along -y and +y of the gripper frame inside the region.

    Returns None when fewer than two points fall in the closing region or the
    extremes coincide. The object cloud must carry normals.
    """
    if obj.normals is None:
        raise ValueError("object cloud must carry normals for contact extraction")
    region = closing_region(grasp, model)
    idx = points_in_box(obj, region)
    if idx.size < 2:
        return None
    local = region.local_coords(obj.points[idx])
    ys = local[:, 1]
    axis_dist2 = local[:, 0] ** 2 + local[:, 2] ** 2
    lo = idx[pick_extreme(ys <= ys.min() + EXTREME_BAND, axis_dist2)]
    hi = idx[pick_extreme(ys >= ys.max() - EXTREME_BAND, axis_dist2)]
    if lo == hi:
        return None
    p1, p2 = obj.points[lo], obj.points[hi]
    if float(np.linalg.norm(p2 - p1)) < DEGENERATE_EPS:
        return None
    return (
        Contact(p1, obj.normals[lo]),
        Contact(p2, obj.normals[hi]),
    )


def contact_cone_angles(c1: Contact, c2: Contact) -> tuple[float, float]:
    """Angles of the contact line against both inward contact normals."""
    d = c2.point - c1.point
    dist = float(np.linalg.norm(d))
    if dist < DEGENERATE_EPS:
        raise ValueError("degenerate contact pair")
    u = d / dist
    return _angle_between(u, -c1.normal), _angle_between(-u, -c2.normal)


def antipodal_check(c1: Contact, c2: Contact, closing_axis, mu: float) -> bool:
    """True iff the contact line lies inside both friction cones at `mu`.

    The cone test depends only on the contact line and normals; the closing
    axis is accepted for callers that carry it but does not enter the test.
    The boundary angle atan(mu) counts as inside.
    """
    if mu <= 0:
        raise ValueError("friction coefficient must be positive")
    a1, a2 = contact_cone_angles(c1, c2)
    cone = math.atan(mu) + ANGLE_EPS
    return a1 <= cone and a2 <= cone


def sweep_mu_index(
    grasp: GraspPose,
    obj: PointCloud,
    model: GripperModel,
    grid: FrictionGrid = FrictionGrid(),
) -> int:
    """1-based index of the smallest grid mu at which the grasp is antipodal.

    Returns 0 when contacts are missing, degenerate, or no grid value passes.
    """
    pair = extract_contacts(grasp, obj, model)
    if pair is None:
        return 0
    a1, a2 = contact_cone_angles(*pair)
    worst = max(a1, a2)
    for i, mu in enumerate(grid.mu_values):
        if worst <= math.atan(mu) + ANGLE_EPS:
            return i + 1
    return 0


def friction_sweep_score(
    grasp: GraspPose,
    obj: PointCloud,
    model: GripperModel,
    grid: FrictionGrid = FrictionGrid(),
) -> float:
    """Quality score s = 1.1 - mu*; 0 when the grasp is never antipodal."""
    idx = sweep_mu_index(grasp, obj, model, grid)
    if idx == 0:
        return 0.0
    return 1.1 - grid.mu_values[idx - 1]
