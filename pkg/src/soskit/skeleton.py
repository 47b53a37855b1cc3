"""Motion data model: skeleton, per-frame poses, forward kinematics, JSON io."""

import json
from dataclasses import dataclass, field

import numpy as np

from .parts import ROLES
from .rotations import matrix_to_rot6d, quat_to_matrix


class MotionError(Exception):
    """Invalid motion data or schema violation."""


class BVHParseError(MotionError):
    """Malformed BVH input; message carries the offending line number."""


@dataclass(frozen=True)
class Joint:
    name: str
    parent: int | None
    offset: np.ndarray  # (3,) meters, in the parent's local frame

    def __post_init__(self):
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=np.float64).reshape(3))


@dataclass(frozen=True)
class Skeleton:
    """Joint hierarchy in topological order plus the body-part role map.

    ``roles`` maps role names (see :data:`soskit.parts.ROLES`) to joint
    indices. It may be empty for skeletons that are only used for playback;
    feature extraction requires the full set.
    """

    joints: tuple[Joint, ...]
    roles: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        if not self.joints:
            raise MotionError("skeleton has no joints")
        roots = [i for i, j in enumerate(self.joints) if j.parent is None]
        if roots != [0]:
            raise MotionError(f"expected exactly one root joint at index 0, got roots {roots}")
        for i, j in enumerate(self.joints[1:], start=1):
            if not (0 <= j.parent < i):
                raise MotionError(f"joint {i} ({j.name!r}) has parent {j.parent}, not topologically ordered")
        if self.roles:
            missing = [r for r in ROLES if r not in self.roles]
            if missing:
                raise MotionError(f"role map incomplete, missing {missing}")
            idx = [self.roles[r] for r in ROLES]
            if len(set(idx)) != len(idx):
                raise MotionError("role map assigns the same joint to multiple roles")
            for r, i in self.roles.items():
                if not (0 <= i < len(self.joints)):
                    raise MotionError(f"role {r!r} points to missing joint index {i}")

    @property
    def num_joints(self):
        return len(self.joints)

    def parents(self):
        return np.array([-1] + [j.parent for j in self.joints[1:]], dtype=np.int64)

    def offsets(self):
        return np.stack([j.offset for j in self.joints])

    def joint_index(self, name):
        for i, j in enumerate(self.joints):
            if j.name == name:
                return i
        raise MotionError(f"no joint named {name!r}")

    def require_roles(self):
        if not self.roles:
            raise MotionError("skeleton has no body-part role map; feature extraction needs all ten roles")


@dataclass(frozen=True)
class Motion:
    """Skeleton plus per-frame root translation and joint rotations.

    ``quats`` has shape (T, J, 4) in (w, x, y, z) order, unit norm.
    """

    skeleton: Skeleton
    fps: float
    root_t: np.ndarray  # (T, 3)
    quats: np.ndarray  # (T, J, 4)

    def __post_init__(self):
        object.__setattr__(self, "root_t", np.asarray(self.root_t, dtype=np.float64))
        object.__setattr__(self, "quats", np.asarray(self.quats, dtype=np.float64))
        if self.fps <= 0:
            raise MotionError(f"fps must be positive, got {self.fps}")
        T = self.root_t.shape[0]
        if T < 2:
            raise MotionError(f"motion must have at least 2 frames, got {T}")
        if self.root_t.shape != (T, 3):
            raise MotionError(f"root translation shape {self.root_t.shape} != ({T}, 3)")
        J = self.skeleton.num_joints
        if self.quats.shape != (T, J, 4):
            raise MotionError(f"rotation shape {self.quats.shape} != ({T}, {J}, 4)")
        norms = np.linalg.norm(self.quats, axis=-1)
        worst = float(np.abs(norms - 1.0).max())
        if worst > 1e-6:
            raise MotionError(f"joint rotations must be unit quaternions (max norm error {worst:.3g})")
        if not (np.isfinite(self.root_t).all() and np.isfinite(self.quats).all()):
            raise MotionError("motion contains non-finite values")

    @property
    def num_frames(self):
        return self.root_t.shape[0]


@dataclass(frozen=True)
class JointTrajectories:
    """World joint positions, (T, J, 3); ``local`` marks zeroed root translation."""

    positions: np.ndarray
    local: bool

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=np.float64))
        if not np.isfinite(self.positions).all():
            raise MotionError("joint trajectories contain non-finite values")


def forward_kinematics(motion: Motion, zero_root_translation: bool = False) -> JointTrajectories:
    """World joint positions per frame.

    With ``zero_root_translation`` the root translation is treated as zero on
    every frame while the root rotation is kept.
    """
    skel = motion.skeleton
    parents = skel.parents()
    offsets = skel.offsets()
    T, J = motion.num_frames, skel.num_joints

    mats = quat_to_matrix(motion.quats)  # (T, J, 3, 3)
    world_r = np.empty_like(mats)
    pos = np.empty((T, J, 3))
    world_r[:, 0] = mats[:, 0]
    pos[:, 0] = 0.0 if zero_root_translation else motion.root_t
    for j in range(1, J):
        p = parents[j]
        pos[:, j] = pos[:, p] + np.einsum("tij,j->ti", world_r[:, p], offsets[j])
        world_r[:, j] = world_r[:, p] @ mats[:, j]
    return JointTrajectories(positions=pos, local=zero_root_translation)


def to_rot6d(motion: Motion) -> np.ndarray:
    """Per-joint 6D rotation representation, shape (T, J, 6)."""
    return matrix_to_rot6d(quat_to_matrix(motion.quats))


# ---------------------------------------------------------------------------
# Native JSON format


def serialize_motion_json(motion: Motion, indent=None) -> str:
    joints = [
        {"name": j.name, "parent": j.parent, "offset": [float(v) for v in j.offset]}
        for j in motion.skeleton.joints
    ]
    roles = {r: motion.skeleton.joints[i].name for r, i in motion.skeleton.roles.items()}
    frames = [
        {
            "root_t": [float(v) for v in motion.root_t[t]],
            "rot": [[float(v) for v in q] for q in motion.quats[t]],
        }
        for t in range(motion.num_frames)
    ]
    doc = {"fps": motion.fps, "skeleton": {"joints": joints, "roles": roles}, "frames": frames}
    return json.dumps(doc, indent=indent, sort_keys=True, separators=(",", ":") if indent is None else None)


def motion_from_dict(doc) -> Motion:
    if not isinstance(doc, dict):
        raise MotionError("motion document must be a JSON object")
    for key in ("fps", "skeleton", "frames"):
        if key not in doc:
            raise MotionError(f"motion document missing {key!r}")
    skel_doc = doc["skeleton"]
    if "joints" not in skel_doc:
        raise MotionError("skeleton missing 'joints'")
    try:
        joints = tuple(Joint(j["name"], j["parent"], j["offset"]) for j in skel_doc["joints"])
    except (KeyError, TypeError) as e:
        raise MotionError(f"malformed joint entry: {e}") from e
    name_to_idx = {j.name: i for i, j in enumerate(joints)}
    roles = {}
    for role, jname in skel_doc.get("roles", {}).items():
        if jname not in name_to_idx:
            raise MotionError(f"role {role!r} names unknown joint {jname!r}")
        roles[role] = name_to_idx[jname]
    skel = Skeleton(joints=joints, roles=roles)
    frames = doc["frames"]
    if not isinstance(frames, list) or len(frames) < 2:
        raise MotionError("motion needs a list of at least 2 frames")
    try:
        root_t = np.array([f["root_t"] for f in frames], dtype=np.float64)
        quats = np.array([f["rot"] for f in frames], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise MotionError(f"malformed frame entry: {e}") from e
    return Motion(skeleton=skel, fps=float(doc["fps"]), root_t=root_t, quats=quats)


def parse_motion_json(text: str) -> Motion:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MotionError(f"invalid JSON: {e}") from e
    return motion_from_dict(doc)


def motions_equal(a: Motion, b: Motion, tol=1e-9) -> bool:
    if a.skeleton.num_joints != b.skeleton.num_joints or a.skeleton.roles != b.skeleton.roles:
        return False
    for ja, jb in zip(a.skeleton.joints, b.skeleton.joints):
        if ja.name != jb.name or ja.parent != jb.parent or not np.allclose(ja.offset, jb.offset, atol=tol):
            return False
    return (
        abs(a.fps - b.fps) <= tol * max(1.0, abs(a.fps))
        and np.allclose(a.root_t, b.root_t, atol=tol)
        and np.allclose(a.quats, b.quats, atol=tol)
    )
