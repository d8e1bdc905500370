import math

import numpy as np
import pytest

from graspbench import RigidTransform


def quaternion_rotation(q):
    q = np.asarray(q, dtype=np.float64)
    q = q / np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_rotation(rng):
    return quaternion_rotation(rng.normal(size=4))


def random_transform(rng, span=0.5):
    return RigidTransform(random_rotation(rng), rng.uniform(-span, span, 3))


def rot_z(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_x(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def small_rotation_angle(r1, r2=None):
    """Rotation angle between nearly equal rotations, stable near zero.

    arccos of the trace loses ~8 digits at the identity; the asin of the skew
    part is exact to first order there.
    """
    r = np.asarray(r1) if r2 is None else np.asarray(r1) @ np.asarray(r2).T
    vec = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    return math.asin(min(1.0, float(np.linalg.norm(vec))))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
