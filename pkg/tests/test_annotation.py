import math
from dataclasses import replace

import numpy as np
import pytest

from graspbench import (
    AnnotationParams,
    FrictionGrid,
    GraspPose,
    GripperModel,
    LabelFlag,
    PointCloud,
    TriangleMesh,
    annotate_object,
    friction_sweep_score,
    generate_candidates,
    gripper_collision,
    label_stats,
    points_in_box,
    sample_grasp_points,
    closing_region,
)
from graspbench.annotation import GraspLabelSet
from graspbench.forceclosure import Contact, antipodal_check
from graspbench.geometry import sample_mesh_surface, voxel_downsample
from graspbench.gripper import determine_width
from graspbench.primitives import box_mesh, icosphere_mesh

MODEL = GripperModel()

LITE = AnnotationParams(
    voxel=0.02,
    views=12,
    angles=(0.0, math.pi / 2.0),
    depths=(0.01, 0.02),
    cloud_density=3.0e5,
)


def grid_cube_cloud(side=0.1, n=15):
    """Deterministic symmetric surface grid of a cube with face normals."""
    h = side / 2.0
    lin = np.linspace(-h, h, n)
    pts, normals = [], []
    for u in lin:
        for v in lin:
            for axis, sign in ((0, -1), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1)):
                p = [u, v]
                p.insert(axis, sign * h)
                nrm = [0.0, 0.0]
                nrm.insert(axis, float(sign))
                pts.append(p)
                normals.append(nrm)
    pts = np.asarray(pts)
    normals = np.asarray(normals)
    pts, keep = np.unique(pts, axis=0, return_index=True)
    return PointCloud(pts, normals=normals[keep])


class TestSampleGraspPoints:
    def test_single_triangle_coarse_voxel(self):
        mesh = TriangleMesh(
            np.array([[0.0, 0.0, 0.0], [0.01, 0.0, 0.0], [0.0, 0.01, 0.0]]),
            np.array([[0, 1, 2]]),
        )
        cloud = sample_grasp_points(mesh, voxel=1.0, density=1e6, seed=0)
        assert len(cloud) == 1
        np.testing.assert_allclose(np.abs(cloud.normals[0]), [0.0, 0.0, 1.0])

    def test_cube_voxel_occupancy_oracle(self):
        mesh = box_mesh(0.1, 0.1, 0.1)
        voxel = 0.05
        cloud = sample_grasp_points(mesh, voxel=voxel, density=2.0e5, seed=3)
        dense = sample_mesh_surface(mesh, 2.0e5, seed=3)
        buckets = {tuple(k) for k in np.floor(dense.points / voxel).astype(int)}
        assert len(cloud) == len(buckets)
        assert 24 <= len(cloud) <= 96

    def test_idempotent_count(self):
        mesh = box_mesh(0.06, 0.05, 0.04)
        cloud = sample_grasp_points(mesh, voxel=0.02, density=3.0e5, seed=0)
        again = voxel_downsample(cloud, 0.02)
        assert len(again) == len(cloud)


class TestGenerateCandidates:
    def test_single_candidate(self):
        params = replace(LITE, views=1, angles=(0.0,), depths=(0.01,))
        out = generate_candidates([0.0, 0.0, 0.0], [0.0, 0.0, 1.0], params, MODEL)
        assert len(out) == 1

    def test_grid_size(self):
        params = replace(LITE, views=30, angles=tuple(np.linspace(0, 3, 12)), depths=(0.01, 0.02, 0.03, 0.04))
        out = generate_candidates([0.0, 0.0, 0.0], [0.0, 0.0, 1.0], params, MODEL)
        assert len(out) == 30 * 12 * 4

    def test_center_offsets_match_depths(self):
        p = np.array([0.01, -0.02, 0.03])
        out = generate_candidates(p, [0.0, 0.0, 1.0], LITE, MODEL)
        for g in out:
            offset = float(np.linalg.norm(g.center - p))
            assert any(abs(offset - d) < 1e-12 for d in LITE.depths)
            np.testing.assert_allclose(g.center, p + g.depth * g.rotation[:, 0], atol=1e-15)

    def test_ordering_view_major(self):
        params = replace(LITE, views=4, angles=(0.0, 1.0), depths=(0.01, 0.02))
        out = generate_candidates([0.0, 0.0, 0.0], None, params, MODEL)
        depths = [g.depth for g in out]
        assert depths == [0.01, 0.02] * 8  # depth fastest, then angle, then view


class TestAnnotateObject:
    def test_completeness_and_shapes(self):
        labels = annotate_object(box_mesh(0.04, 0.03, 0.05), MODEL, LITE, object_id=7)
        n, v, a, d = labels.shape
        assert (v, a, d) == (LITE.views, len(LITE.angles), len(LITE.depths))
        assert labels.flags.size == n * v * a * d
        assert set(np.unique(labels.flags)) <= {0, 1, 2, 3}
        assert labels.object_id == 7
        assert labels.gripper_hash == MODEL.profile_hash()

    def test_determinism_bit_identical(self):
        mesh = box_mesh(0.04, 0.03, 0.05)
        a = annotate_object(mesh, MODEL, LITE)
        b = annotate_object(mesh, MODEL, LITE)
        np.testing.assert_array_equal(a.score_index, b.score_index)
        np.testing.assert_array_equal(a.widths, b.widths)
        np.testing.assert_array_equal(a.flags, b.flags)
        np.testing.assert_array_equal(a.grasp_points, b.grasp_points)

    def test_score_flag_consistency(self):
        labels = annotate_object(box_mesh(0.04, 0.03, 0.05), MODEL, LITE)
        scores = labels.scores()
        assert np.array_equal(scores > 0, labels.flags == LabelFlag.POSITIVE)
        pos_widths = labels.widths[labels.flags == LabelFlag.POSITIVE]
        assert np.all(pos_widths <= MODEL.max_width + 1e-6)
        assert np.all(pos_widths > 0)

    def test_positives_never_collide_posthoc(self):
        mesh = box_mesh(0.04, 0.03, 0.05)
        labels = annotate_object(mesh, MODEL, LITE)
        dense = sample_mesh_surface(mesh, LITE.cloud_density, LITE.cloud_seed)
        cells = np.argwhere(labels.flags == LabelFlag.POSITIVE)
        rng = np.random.default_rng(0)
        for i, vi, ai, di in cells[rng.permutation(len(cells))[:80]]:
            g = labels.grasp_pose(i, vi, ai, di)
            assert not gripper_collision(g, MODEL, dense)

    def test_cells_match_reference_operations(self):
        mesh = box_mesh(0.04, 0.03, 0.05)
        labels = annotate_object(mesh, MODEL, LITE)
        dense = sample_mesh_surface(mesh, LITE.cloud_density, LITE.cloud_seed)
        rng = np.random.default_rng(1)
        n, v, a, d = labels.shape
        scores = labels.scores()
        checked = 0
        for _ in range(160):
            i, vi, ai, di = (int(rng.integers(k)) for k in (n, v, a, d))
            g = labels.grasp_pose(i, vi, ai, di)
            flag = labels.flags[i, vi, ai, di]
            opened = replace(g, width=MODEL.max_width)
            in_region = points_in_box(dense, closing_region(opened, MODEL))
            if flag == LabelFlag.EMPTY:
                assert in_region.size == 0
                continue
            assert in_region.size > 0
            if flag == LabelFlag.COLLISION:
                assert gripper_collision(g, MODEL, dense)
                continue
            assert not gripper_collision(g, MODEL, dense)
            s = friction_sweep_score(g, dense, MODEL, LITE.friction)
            assert s == scores[i, vi, ai, di]
            checked += 1
        assert checked > 10

    def test_oversize_sphere_is_ungraspable(self):
        mesh = icosphere_mesh(0.06, 2)  # 12 cm diameter vs 10 cm opening
        params = AnnotationParams(
            voxel=0.04, views=6, angles=(0.0,), depths=(0.02, 0.04),
            cloud_density=1.0e5,
        )
        labels = annotate_object(mesh, MODEL, params)
        flags = set(np.unique(labels.flags))
        assert LabelFlag.POSITIVE not in flags
        assert LabelFlag.NEGATIVE not in flags

    def test_depth_exceeding_finger_length_rejected(self):
        params = replace(LITE, depths=(0.05,))
        with pytest.raises(ValueError, match="finger length"):
            annotate_object(box_mesh(0.03, 0.03, 0.03), MODEL, params)


class TestCubeFacePairs:
    # large gripper so a 10 cm cube fits between the fingers
    BIG = GripperModel(
        max_width=0.16,
        finger_length=0.12,
        finger_height=0.02,
        finger_thickness=0.01,
        base_depth=0.02,
        width_clearance=0.01,
    )

    def test_square_face_grasp_scores_one(self):
        cloud = grid_cube_cloud(0.1, n=15)
        g = GraspPose(
            rotation=np.eye(3), center=np.zeros(3), depth=self.BIG.finger_length / 2.0
        )
        w = determine_width(g, self.BIG, cloud)
        assert w == pytest.approx(0.11, abs=1e-9)
        s = friction_sweep_score(replace(g, width=w), cloud, self.BIG, FrictionGrid())
        assert s == 1.1 - 0.1

    def test_face_diagonal_boundary_scores_tenth(self):
        # constructed edge contacts: the contact line runs at exactly 45
        # degrees to both face normals, the inclusive tan(45) = 1.0 boundary
        c1 = Contact([-0.05, -0.05, 0.0], [-1.0, 0.0, 0.0])
        c2 = Contact([0.05, 0.05, 0.0], [0.0, 1.0, 0.0])
        grid = FrictionGrid()
        verdicts = [antipodal_check(c1, c2, [0, 1, 0], mu) for mu in grid.mu_values]
        assert verdicts == [False] * 9 + [True]
        # s = 1.1 - 1.0 = 0.1 on the grid
        assert 1.1 - grid.mu_values[9] == pytest.approx(0.1)


class TestLabelStats:
    def test_all_positive_ratio_inf(self):
        shape = (1, 1, 1, 2)
        labels = GraspLabelSet(
            object_id=0,
            grasp_points=np.zeros((1, 3), dtype=np.float32),
            grasp_normals=np.tile([0, 0, 1], (1, 1)).astype(np.float32),
            views=1,
            angles=(0.0,),
            depths=(0.01, 0.02),
            mu_values=(0.1,),
            score_index=np.ones(shape, dtype=np.uint8),
            widths=np.full(shape, 0.05, dtype=np.float32),
            flags=np.full(shape, LabelFlag.POSITIVE, dtype=np.uint8),
        )
        assert math.isinf(label_stats(labels)["ratio"])

    def test_constructed_ratio(self):
        shape = (1, 1, 1, 30)
        flags = np.zeros(shape, dtype=np.uint8)
        flags[..., :10] = LabelFlag.POSITIVE
        score = np.zeros(shape, dtype=np.uint8)
        score[..., :10] = 1
        labels = GraspLabelSet(
            object_id=0,
            grasp_points=np.zeros((1, 3), dtype=np.float32),
            grasp_normals=np.tile([0, 0, 1], (1, 1)).astype(np.float32),
            views=1,
            angles=(0.0,),
            depths=tuple(0.001 * (i + 1) for i in range(30)),
            mu_values=(0.1,),
            score_index=score,
            widths=np.full(shape, 0.05, dtype=np.float32),
            flags=flags,
        )
        stats = label_stats(labels)
        assert stats["positive"] == 10 and stats["negative"] == 20
        assert stats["ratio"] == pytest.approx(0.5)

    def test_inconsistent_tensors_rejected(self):
        shape = (1, 1, 1, 1)
        with pytest.raises(ValueError, match="inconsistent"):
            GraspLabelSet(
                object_id=0,
                grasp_points=np.zeros((1, 3), dtype=np.float32),
                grasp_normals=np.tile([0, 0, 1], (1, 1)).astype(np.float32),
                views=1,
                angles=(0.0,),
                depths=(0.01,),
                mu_values=(0.1,),
                score_index=np.ones(shape, dtype=np.uint8),
                widths=np.zeros(shape, dtype=np.float32),
                flags=np.zeros(shape, dtype=np.uint8),  # positive bit missing
            )
