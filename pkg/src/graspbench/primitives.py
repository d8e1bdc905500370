"""Primitive mesh generators for synthetic scenes and self-checks."""

from __future__ import annotations

import math

import numpy as np

from .geometry import TriangleMesh


def box_mesh(sx: float, sy: float, sz: float, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Axis-aligned box with outward-facing triangles."""
    c = np.asarray(center, dtype=np.float64)
    hx, hy, hz = sx / 2.0, sy / 2.0, sz / 2.0
    verts = np.array(
        [
            [-hx, -hy, -hz],
            [hx, -hy, -hz],
            [hx, hy, -hz],
            [-hx, hy, -hz],
            [-hx, -hy, hz],
            [hx, -hy, hz],
            [hx, hy, hz],
            [-hx, hy, hz],
        ]
    ) + c
    faces = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom (-z)
            [4, 5, 6], [4, 6, 7],  # top (+z)
            [0, 1, 5], [0, 5, 4],  # -y
            [2, 3, 7], [2, 7, 6],  # +y
            [1, 2, 6], [1, 6, 5],  # +x
            [3, 0, 4], [3, 4, 7],  # -x
        ]
    )
    return TriangleMesh(verts, faces)


def icosphere_mesh(
    radius: float, subdivisions: int = 3, center=(0.0, 0.0, 0.0)
) -> TriangleMesh:
    """Unit icosahedron subdivided and projected onto a sphere."""
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.asarray(v, dtype=np.float64) for v in verts]
    verts = [v / np.linalg.norm(v) for v in verts]

    for _ in range(subdivisions):
        cache: dict = {}
        new_faces = []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces

    pts = np.asarray(verts) * radius + np.asarray(center, dtype=np.float64)
    return TriangleMesh(pts, np.asarray(faces, dtype=np.int64))


def cylinder_mesh(
    radius: float, height: float, segments: int = 32, center=(0.0, 0.0, 0.0)
) -> TriangleMesh:
    """Capped cylinder with its axis along z."""
    if segments < 3:
        raise ValueError("cylinder needs at least 3 segments")
    c = np.asarray(center, dtype=np.float64)
    hz = height / 2.0
    angles = 2.0 * math.pi * np.arange(segments) / segments
    ring = np.column_stack((radius * np.cos(angles), radius * np.sin(angles)))
    bottom = np.column_stack((ring, np.full(segments, -hz)))
    top = np.column_stack((ring, np.full(segments, hz)))
    verts = np.vstack([bottom, top, [[0.0, 0.0, -hz]], [[0.0, 0.0, hz]]]) + c
    b0, t0 = 0, segments
    cb, ct = 2 * segments, 2 * segments + 1
    faces = []
    for i in range(segments):
        j = (i + 1) % segments
        faces += [
            [b0 + i, b0 + j, t0 + j],
            [b0 + i, t0 + j, t0 + i],
            [cb, b0 + j, b0 + i],
            [ct, t0 + i, t0 + j],
        ]
    return TriangleMesh(verts, np.asarray(faces, dtype=np.int64))


def wedge_mesh(
    width: float, depth: float, height: float, center=(0.0, 0.0, 0.0)
) -> TriangleMesh:
    """Triangular prism: a box whose top edge is pinched to a ridge."""
    c = np.asarray(center, dtype=np.float64)
    hx, hy, hz = depth / 2.0, width / 2.0, height / 2.0
    verts = np.array(
        [
            [-hx, -hy, -hz],
            [hx, -hy, -hz],
            [hx, hy, -hz],
            [-hx, hy, -hz],
            [-hx, 0.0, hz],
            [hx, 0.0, hz],
        ]
    ) + c
    faces = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom
            [0, 1, 5], [0, 5, 4],  # -y slope
            [2, 3, 4], [2, 4, 5],  # +y slope
            [1, 2, 5],             # +x triangle
            [3, 0, 4],             # -x triangle
        ]
    )
    return TriangleMesh(verts, faces)


def tetrahedron_mesh(size: float, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    c = np.asarray(center, dtype=np.float64)
    s = size / 2.0
    verts = np.array(
        [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]], dtype=np.float64
    ) + c
    faces = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    return TriangleMesh(verts, faces)


def primitive_catalog(scale: float = 1.0) -> dict:
    """Ten assorted desk-scale primitives keyed by object id (1-based)."""
    s = scale
    return {
        1: box_mesh(0.040 * s, 0.030 * s, 0.050 * s),
        2: box_mesh(0.060 * s, 0.020 * s, 0.030 * s),
        3: box_mesh(0.035 * s, 0.035 * s, 0.035 * s),
        4: icosphere_mesh(0.020 * s, 3),
        5: icosphere_mesh(0.028 * s, 3),
        6: cylinder_mesh(0.015 * s, 0.060 * s),
        7: cylinder_mesh(0.022 * s, 0.035 * s),
        8: wedge_mesh(0.040 * s, 0.050 * s, 0.030 * s),
        9: wedge_mesh(0.030 * s, 0.030 * s, 0.040 * s),
        10: tetrahedron_mesh(0.045 * s),
    }
