"""Dense analytic grasp annotation and online grasp evaluation."""

from .annotation import (
    AnnotationParams,
    GraspLabelSet,
    LabelFlag,
    annotate_object,
    generate_candidates,
    label_stats,
    sample_grasp_points,
)
from .evaluation import (
    EvalReport,
    NmsParams,
    RectGrasp,
    associate,
    classify_grasp,
    evaluate_scene,
    pose_nms,
    precision_at_k,
    rect_iou,
    rectangle_metric,
)
from .forceclosure import (
    Contact,
    FrictionGrid,
    antipodal_check,
    extract_contacts,
    friction_sweep_score,
)
from .geometry import (
    PointCloud,
    RigidTransform,
    TriangleMesh,
    compose,
    estimate_normals,
    invert,
    rotation_distance,
    sample_mesh_surface,
    sample_sphere_directions,
    translation_distance,
    view_to_rotation,
    voxel_downsample,
)
from .gripper import (
    GraspPose,
    GripperModel,
    OrientedBox,
    closing_region,
    determine_width,
    gripper_collision,
    points_in_box,
)
from .scene import (
    ObjectInstance,
    Scene,
    SceneGraspSet,
    camera_trajectory,
    project_grasps,
    propagate_pose,
    scene_collision_filter,
    synthesize_scene,
)

__version__ = "0.1.0"
