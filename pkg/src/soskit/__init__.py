"""soskit: extract sparse orientation-symbol scripts from skeletal motion and
edit motions by gradient-based optimization until they satisfy a script."""

from .bvh import parse_bvh
from .features import OrientationFeatures, ReferenceFrames, extract_orientation_features, prpp, reference_frames
from .optimize import (
    OptimizationProblem,
    OptimizationResult,
    l2_rot6d,
    optimize,
    sos_accuracy,
    sos_loss,
)
from .periodic import PeriodicParams, fit_periodic, reconstruct_periodic
from .quantize import TemplateSet, build_templates, soft_quantize, symbol_id, symbol_name
from .saliency import SegmentTree, build_segment_tree, diff_features, saliency_all_parts, saliency_track, ward_merge_cost
from .skeleton import (
    Joint,
    JointTrajectories,
    Motion,
    MotionError,
    Skeleton,
    forward_kinematics,
    parse_motion_json,
    serialize_motion_json,
    to_rot6d,
)
from .sos import SOSEntry, SOSScript, parse_sos_json, serialize_sos_json, sms_mask, sms_mask_percentile, synthesize_sos
from .staff_svg import render_staff_svg

__version__ = "0.1.0"
