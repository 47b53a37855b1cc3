"""Egocentric reference frames and per-part orientation features.

Each frame gets an orthonormal [right, forward, up] basis built from the hip
and shoulder lines; limb features are end-minus-anchor joint displacements
expressed in that basis, and the root feature is the horizontal facing
direction.
"""

from dataclasses import dataclass

import numpy as np

from .parts import LIMB_PAIRS, PARTS
from .skeleton import JointTrajectories, Motion, MotionError, Skeleton, forward_kinematics

_EPS = 1e-6
_WORLD_UP = np.array([0.0, 0.0, 1.0])
_FALLBACK_FORWARD = np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class ReferenceFrames:
    """Per-frame egocentric basis; ``r[t]`` rows are [right, forward, up]."""

    r: np.ndarray  # (T, 3, 3)


@dataclass(frozen=True)
class OrientationFeatures:
    """Per-frame direction vectors o, shape (T, 6, 3), part order PARTS.

    ``valid`` flags rows whose raw norm cleared the degeneracy threshold;
    ``unit`` carries normalized directions with hold-last substitution for
    degenerate rows, which is what quantization and clustering consume.
    """

    o: np.ndarray  # (T, 6, 3)
    unit: np.ndarray  # (T, 6, 3)
    valid: np.ndarray  # (T, 6) bool


def reference_frames(traj: JointTrajectories, skel: Skeleton) -> ReferenceFrames:
    skel.require_roles()
    pos = traj.positions
    lh, rh = skel.roles["left_hip"], skel.roles["right_hip"]
    ls, rs = skel.roles["left_shoulder"], skel.roles["right_shoulder"]
    across = (pos[:, rh] - pos[:, lh]) + (pos[:, rs] - pos[:, ls])
    across[:, 2] = 0.0  # horizontal projection
    T = pos.shape[0]
    r = np.empty((T, 3, 3))
    prev = None
    for t in range(T):
        n = np.linalg.norm(across[t])
        if n < _EPS:
            if prev is None:
                raise MotionError("degenerate reference frame at frame 0 (hips and shoulders coincident)")
            r[t] = prev
            continue
        a = across[t] / n
        fwd = np.cross(_WORLD_UP, a)
        fwd /= np.linalg.norm(fwd)
        right = np.cross(fwd, _WORLD_UP)
        r[t] = np.stack([right, fwd, _WORLD_UP])
        prev = r[t]
    return ReferenceFrames(r=r)


def prpp(traj: JointTrajectories, frames: ReferenceFrames, end: int, anchor: int) -> np.ndarray:
    """Egocentric end-minus-anchor displacement, components along [right, forward, up]."""
    delta = traj.positions[:, end] - traj.positions[:, anchor]
    return np.einsum("tij,tj->ti", frames.r, delta)


def _held_unit(vecs: np.ndarray, fallback: np.ndarray):
    """Normalize rows, replacing degenerate rows with the last valid direction."""
    norms = np.linalg.norm(vecs, axis=-1)
    valid = norms >= _EPS
    unit = np.empty_like(vecs)
    last = fallback
    for t in range(vecs.shape[0]):
        if valid[t]:
            last = vecs[t] / norms[t]
        unit[t] = last
    return unit, valid


def extract_orientation_features(motion: Motion) -> OrientationFeatures:
    motion.skeleton.require_roles()
    traj = forward_kinematics(motion, zero_root_translation=True)
    frames = reference_frames(traj, motion.skeleton)
    T = motion.num_frames
    o = np.zeros((T, len(PARTS), 3))
    unit = np.zeros_like(o)
    valid = np.zeros((T, len(PARTS)), dtype=bool)

    horiz = frames.r[:, 1].copy()
    horiz[:, 2] = 0.0
    rt_unit, rt_valid = _held_unit(horiz, _FALLBACK_FORWARD)
    o[:, 0] = rt_unit  # RT is already the normalized facing direction
    unit[:, 0] = rt_unit
    valid[:, 0] = rt_valid

    for p, part in enumerate(PARTS[1:], start=1):
        end_role, anchor_role = LIMB_PAIRS[part]
        vec = prpp(traj, frames, motion.skeleton.roles[end_role], motion.skeleton.roles[anchor_role])
        o[:, p] = vec
        unit[:, p], valid[:, p] = _held_unit(vec, _FALLBACK_FORWARD)

    return OrientationFeatures(o=o, unit=unit, valid=valid)
