"""Synthetic skeletons and motions for demos, tests and benchmarks."""

import numpy as np

from .rotations import quat_from_axis_angle, quat_multiply, rotvec_to_quat
from .skeleton import Joint, Motion, Skeleton

_X = np.array([1.0, 0.0, 0.0])
_Z = np.array([0.0, 0.0, 1.0])


def simple_humanoid() -> Skeleton:
    """11-joint humanoid in T-pose, facing +y, arms along +/-x."""
    joints = (
        Joint("pelvis", None, (0.0, 0.0, 0.0)),
        Joint("spine", 0, (0.0, 0.0, 0.25)),
        Joint("head", 1, (0.0, 0.0, 0.40)),
        Joint("l_shoulder", 1, (-0.20, 0.0, 0.25)),
        Joint("l_wrist", 3, (-0.45, 0.0, 0.0)),
        Joint("r_shoulder", 1, (0.20, 0.0, 0.25)),
        Joint("r_wrist", 5, (0.45, 0.0, 0.0)),
        Joint("l_hip", 0, (-0.10, 0.0, 0.0)),
        Joint("l_ankle", 7, (0.0, 0.0, -0.80)),
        Joint("r_hip", 0, (0.10, 0.0, 0.0)),
        Joint("r_ankle", 9, (0.0, 0.0, -0.80)),
    )
    roles = {
        "pelvis": 0,
        "head": 2,
        "left_shoulder": 3,
        "left_wrist": 4,
        "right_shoulder": 5,
        "right_wrist": 6,
        "left_hip": 7,
        "left_ankle": 8,
        "right_hip": 9,
        "right_ankle": 10,
    }
    return Skeleton(joints=joints, roles=roles)


def _identity_quats(T, J):
    q = np.zeros((T, J, 4))
    q[..., 0] = 1.0
    return q


def static_pose_motion(T: int = 40, fps: float = 20.0) -> Motion:
    skel = simple_humanoid()
    return Motion(skeleton=skel, fps=fps, root_t=np.zeros((T, 3)), quats=_identity_quats(T, skel.num_joints))


def spin_motion(T: int = 60, fps: float = 20.0, turns: float = 1.0) -> Motion:
    """Character spinning uniformly about the world up axis."""
    skel = simple_humanoid()
    quats = _identity_quats(T, skel.num_joints)
    yaw = 2.0 * np.pi * turns * np.arange(T) / T
    quats[:, 0] = quat_from_axis_angle(np.tile(_Z, (T, 1)), yaw)
    return Motion(skeleton=skel, fps=fps, root_t=np.zeros((T, 3)), quats=quats)


def arm_swing_motion(T: int = 25, fps: float = 20.0, peak_frame: int = 18) -> Motion:
    """Left arm swings from hanging down to forward-up, peaking at peak_frame.

    Only the left shoulder animates; every other joint stays fixed, so all
    saliency concentrates on the LA column.
    """
    skel = simple_humanoid()
    quats = _identity_quats(T, skel.num_joints)
    j = skel.joint_index("l_shoulder")
    # arm segment points along -x in T-pose; rotate about +y (forward axis)
    # by -90 deg to hang down, and swing about +x up to the forward-top cone
    down = quat_from_axis_angle(np.array([0.0, 1.0, 0.0]), -np.pi / 2)
    t = np.arange(T)
    swing = np.where(
        t <= peak_frame,
        t / peak_frame,
        (T - 1 - t) / (T - 1 - peak_frame),
    )
    # at the peak the hanging arm is pitched forward-up so the wrist-shoulder
    # direction lands in the Forward-Top template cell
    angle = swing * np.deg2rad(160.0)
    pitch = quat_from_axis_angle(np.tile(_X, (T, 1)), angle)
    quats[:, j] = quat_multiply(pitch, np.tile(down, (T, 1)))
    return Motion(skeleton=skel, fps=fps, root_t=np.zeros((T, 3)), quats=quats)


def wavy_motion(T: int = 48, fps: float = 20.0, seed: int = 0) -> Motion:
    """Smooth band-limited motion exercising every limb; seeded."""
    rng = np.random.default_rng(seed)
    skel = simple_humanoid()
    J = skel.num_joints
    t = np.arange(T)
    rv = np.zeros((T, J, 3))
    for j in range(1, J):
        for axis in range(3):
            amp = rng.uniform(0.2, 0.7)
            freq = rng.uniform(0.5, 2.0) * 2.0 * np.pi / T
            phase = rng.uniform(0, 2 * np.pi)
            rv[:, j, axis] = amp * np.sin(freq * t + phase)
    yaw = rng.uniform(0.2, 0.6) * np.sin(2.0 * np.pi * t / T + rng.uniform(0, 2 * np.pi))
    quats = rotvec_to_quat(rv)
    quats[:, 0] = quat_from_axis_angle(np.tile(_Z, (T, 1)), yaw)
    root_t = np.zeros((T, 3))
    root_t[:, 1] = 0.01 * t
    return Motion(skeleton=skel, fps=fps, root_t=root_t, quats=quats)


def perturb_motion(motion: Motion, sigma: float, seed: int) -> Motion:
    """Add Gaussian noise (radians) to every joint's rotation vector."""
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, size=(motion.num_frames, motion.skeleton.num_joints, 3))
    quats = quat_multiply(motion.quats, rotvec_to_quat(noise))
    return Motion(skeleton=motion.skeleton, fps=motion.fps, root_t=motion.root_t.copy(), quats=quats)
