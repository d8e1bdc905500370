import math
from dataclasses import replace

import numpy as np
import pytest

from graspbench import (
    AnnotationParams,
    GraspPose,
    GripperModel,
    PointCloud,
    RigidTransform,
    Scene,
    SceneGraspSet,
    annotate_object,
    camera_trajectory,
    friction_sweep_score,
    project_grasps,
    propagate_pose,
    scene_collision_filter,
    synthesize_scene,
)
from graspbench.annotation import LabelFlag
from graspbench.codecs import save_scene
from graspbench.geometry import sample_mesh_surface
from graspbench.primitives import box_mesh, icosphere_mesh
from graspbench.scene import ObjectInstance, SceneTooCrowded, table_collision

from conftest import random_transform, small_rotation_angle

MODEL = GripperModel()


class TestPropagatePose:
    def test_same_camera_is_identity_map(self, rng):
        cam = random_transform(rng)
        p0 = random_transform(rng)
        out = propagate_pose(cam, cam, p0)
        np.testing.assert_allclose(out.matrix(), p0.matrix(), atol=1e-12)

    def test_translation_algebra(self):
        cam_i = RigidTransform(np.eye(3), [1.0, 0.0, 0.0])
        out = propagate_pose(cam_i, RigidTransform.identity(), RigidTransform.identity())
        np.testing.assert_allclose(out.rotation, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(out.translation, [-1.0, 0.0, 0.0], atol=1e-15)

    def test_round_trip_recovers_pose(self, rng):
        for _ in range(100):
            cam_0, cam_i, p0 = (random_transform(rng) for _ in range(3))
            p_i = propagate_pose(cam_i, cam_0, p0)
            back = propagate_pose(cam_0, cam_i, p_i)
            assert small_rotation_angle(back.rotation, p0.rotation) < 1e-9
            assert np.linalg.norm(back.translation - p0.translation) < 1e-9

    def test_world_pose_frame_independent(self, rng):
        # cam_i * P_i == cam_0 * P_0
        for _ in range(100):
            cam_0, cam_i, p0 = (random_transform(rng) for _ in range(3))
            p_i = propagate_pose(cam_i, cam_0, p0)
            w_i = cam_i.compose(p_i)
            w_0 = cam_0.compose(p0)
            assert small_rotation_angle(w_i.rotation, w_0.rotation) < 1e-9
            assert np.linalg.norm(w_i.translation - w_0.translation) < 1e-9


@pytest.fixture(scope="module")
def box_labels():
    params = AnnotationParams(
        voxel=0.02, views=12, angles=(0.0, math.pi / 2), depths=(0.01, 0.02),
        cloud_density=3.0e5,
    )
    mesh = box_mesh(0.04, 0.03, 0.05)
    return mesh, params, annotate_object(mesh, MODEL, params, object_id=4)


class TestProjectGrasps:
    def test_identity_projection_matches_cells(self, box_labels):
        _, _, labels = box_labels
        grasps = project_grasps(RigidTransform.identity(), labels, min_score=0.0)
        assert len(grasps) == int((labels.flags == LabelFlag.POSITIVE).sum())
        cells = np.argwhere(labels.flags == LabelFlag.POSITIVE)
        g0 = labels.grasp_pose(*cells[0])
        np.testing.assert_allclose(grasps[0].rotation, g0.rotation, atol=1e-15)
        np.testing.assert_allclose(grasps[0].center, g0.center, atol=1e-15)
        assert grasps[0].score == g0.score
        assert grasps[0].object_id == labels.object_id

    def test_pure_translation_shifts_centers(self, box_labels):
        _, _, labels = box_labels
        t = RigidTransform(np.eye(3), [0.1, -0.2, 0.3])
        base = project_grasps(RigidTransform.identity(), labels, min_score=0.5)
        moved = project_grasps(t, labels, min_score=0.5)
        for a, b in zip(base, moved):
            np.testing.assert_allclose(b.center, a.center + t.translation, atol=1e-12)
            np.testing.assert_array_equal(b.rotation, a.rotation)

    def test_min_score_filters(self, box_labels):
        _, _, labels = box_labels
        scores = labels.scores()
        expected = int(((labels.flags == LabelFlag.POSITIVE) & (scores >= 0.8)).sum())
        assert len(project_grasps(RigidTransform.identity(), labels, 0.8)) == expected

    def test_rescore_reproduces_stored_scores(self, box_labels, rng):
        mesh, params, labels = box_labels
        dense = sample_mesh_surface(mesh, params.cloud_density, params.cloud_seed)
        for _ in range(3):
            t = random_transform(rng)
            cloud_t = dense.transformed(t)
            for g in project_grasps(t, labels, min_score=0.6):
                assert friction_sweep_score(g, cloud_t, MODEL, params.friction) == g.score


def single_object_scene():
    mesh = box_mesh(0.04, 0.03, 0.05)
    cloud = sample_mesh_surface(mesh, 2.0e5, seed=0)
    pose = RigidTransform(np.eye(3), [0.0, 0.0, 0.025])
    world = cloud.transformed(pose)
    return Scene(
        instances=(ObjectInstance(1, pose),),
        scene_cloud=PointCloud(
            world.points, normals=world.normals,
            object_ids=np.full(len(world), 1, dtype=np.int64),
        ),
    )


class TestSceneCollisionFilter:
    def test_grasp_clear_of_scene_kept(self):
        scene = single_object_scene()
        g = GraspPose(
            rotation=np.eye(3), center=[0.0, 0.0, 0.2], width=0.04, depth=0.02,
            object_id=1,
        )
        out = scene_collision_filter(SceneGraspSet([g]), scene, MODEL)
        assert len(out) == 1

    def test_other_object_point_in_finger_removed(self):
        scene = single_object_scene()
        g = GraspPose(
            rotation=np.eye(3), center=[0.0, 0.0, 0.2], width=0.04, depth=0.02,
            object_id=1,
        )
        from graspbench.gripper import gripper_bodies

        finger_pt = gripper_bodies(g, MODEL)[0].pose.translation
        cloud = scene.scene_cloud
        pts = np.vstack([cloud.points, finger_pt])
        normals = np.vstack([cloud.normals, [0.0, 0.0, 1.0]])
        ids = np.append(cloud.object_ids, 2)
        crowded = Scene(
            instances=scene.instances + (ObjectInstance(2, RigidTransform.identity()),),
            scene_cloud=PointCloud(pts, normals=normals, object_ids=ids),
        )
        out = scene_collision_filter(SceneGraspSet([g]), crowded, MODEL)
        assert len(out) == 0

    def test_own_object_points_ignored(self):
        # fingers deliberately intersecting the grasp's own object do not
        # trigger removal here (the object-frame stages already handled it)
        scene = single_object_scene()
        g = GraspPose(
            rotation=np.eye(3), center=[0.0, 0.0, 0.025], width=0.01, depth=0.02,
            object_id=1,
        )
        out = scene_collision_filter(SceneGraspSet([g]), scene, MODEL)
        assert len(out) == 1

    def test_below_table_removed(self):
        scene = single_object_scene()
        # top-down grasp whose fingers reach below z = 0
        rot = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, -1.0], [-1.0, 0.0, 0.0]])
        g = GraspPose(rotation=rot, center=[0.0, 0.0, 0.03], width=0.04, depth=0.04, object_id=1)
        assert table_collision(g, MODEL)
        out = scene_collision_filter(SceneGraspSet([g]), scene, MODEL)
        assert len(out) == 0

    def test_idempotent(self, rng):
        scene = single_object_scene()
        grasps = []
        for _ in range(60):
            t = random_transform(rng, span=0.15)
            grasps.append(
                GraspPose(
                    rotation=t.rotation,
                    center=t.translation + [0.0, 0.0, 0.15],
                    width=0.04, depth=0.02, object_id=1,
                )
            )
        once = scene_collision_filter(SceneGraspSet(grasps), scene, MODEL)
        twice = scene_collision_filter(once, scene, MODEL)
        assert [id(g) for g in twice.grasps] == [id(g) for g in once.grasps]


CATALOG = {
    1: box_mesh(0.04, 0.03, 0.05),
    2: icosphere_mesh(0.02, 2),
    3: box_mesh(0.03, 0.03, 0.03),
}


class TestSynthesizeScene:
    def test_single_object_rests_on_table(self):
        scene = synthesize_scene([1], 5, CATALOG, cloud_density=1e5)
        inst = scene.instances[0]
        # yaw-only rotation: z column stays (0, 0, 1)
        np.testing.assert_allclose(inst.pose.rotation[:, 2], [0, 0, 1], atol=1e-12)
        assert float(scene.scene_cloud.points[:, 2].min()) >= -1e-9
        lowest = inst.pose.apply(CATALOG[1].vertices)[:, 2].min()
        assert lowest == pytest.approx(0.0, abs=1e-12)

    def test_deterministic_byte_identical(self, tmp_path):
        a = synthesize_scene([1, 2, 3], 9, CATALOG, cloud_density=1e5)
        b = synthesize_scene([1, 2, 3], 9, CATALOG, cloud_density=1e5)
        save_scene(a, tmp_path / "a.json", cloud_filename="a_cloud.txt")
        save_scene(b, tmp_path / "b.json", cloud_filename="a_cloud.txt")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_min_pairwise_clearance(self):
        scene = synthesize_scene([1, 2, 3], 12, CATALOG, cloud_density=1e5, min_clearance=0.003)
        clouds = [scene.object_points(i).points for i in (1, 2, 3)]
        for i in range(3):
            for j in range(i + 1, 3):
                diffs = clouds[i][:, None, :] - clouds[j][None, :, :]
                dmin = float(np.sqrt((diffs**2).sum(-1)).min())
                assert dmin >= 0.003

    def test_crowded_scene_raises(self):
        with pytest.raises(SceneTooCrowded, match="crowded"):
            synthesize_scene(
                [1, 2, 3], 1, CATALOG, cloud_density=1e5,
                table_size=0.14, min_clearance=0.08, max_attempts=25,
            )

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            synthesize_scene([1, 1], 0, CATALOG)

    def test_unknown_id_rejected(self):
        with pytest.raises(KeyError):
            synthesize_scene([99], 0, CATALOG)


class TestCameraTrajectory:
    def test_single_pose_looks_at_origin(self):
        (pose,) = camera_trajectory(1)
        look = pose.rotation[:, 2]
        expected = -pose.translation / np.linalg.norm(pose.translation)
        np.testing.assert_allclose(look, expected, atol=1e-9)

    def test_256_distinct_upper_quarter(self):
        poses = camera_trajectory(256)
        assert len(poses) == 256
        positions = np.array([p.translation for p in poses])
        assert len(np.unique(positions.round(12), axis=0)) == 256
        assert np.all(positions[:, 2] >= 0.0)
        azimuth = np.arctan2(positions[:, 1], positions[:, 0])
        assert np.all((azimuth >= -1e-9) & (azimuth <= math.pi / 2 + 1e-9))
        radii = np.linalg.norm(positions, axis=1)
        np.testing.assert_allclose(radii, 0.6, atol=1e-12)

    def test_look_at_axis_exact(self):
        for pose in camera_trajectory(17, radius=0.8, target=(0.05, -0.02, 0.0)):
            look = pose.rotation[:, 2]
            to_target = np.asarray([0.05, -0.02, 0.0]) - pose.translation
            to_target /= np.linalg.norm(to_target)
            assert np.linalg.norm(look - to_target) < 1e-9

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            camera_trajectory(0)


class TestSceneValidation:
    def test_bad_split_tag(self):
        with pytest.raises(ValueError, match="split_tag"):
            Scene(instances=(), split_tag="validation")

    def test_unknown_cloud_ids(self):
        with pytest.raises(ValueError, match="unknown"):
            Scene(
                instances=(ObjectInstance(1, RigidTransform.identity()),),
                scene_cloud=PointCloud(
                    np.zeros((1, 3)), object_ids=np.array([2])
                ),
            )
