"""BVH ingestion.

BVH files are typically y-up; coordinates are remapped on ingestion to the
package convention (x = right, y = forward, z = up) via a configurable signed
axis permutation. ``axis_map="x,-z,y"`` (the default) reads as
``ours = (bvh_x, -bvh_z, bvh_y)``.
"""

import re

import numpy as np

from .rotations import matrix_to_quat, quat_from_euler, quat_to_matrix
from .skeleton import BVHParseError, Joint, Motion, Skeleton

_AXIS_VECS = {"x": [1.0, 0, 0], "y": [0, 1.0, 0], "z": [0, 0, 1.0]}

# Candidate substrings for role inference, tried in order against
# lowercased joint names with separators stripped.
_ROLE_PATTERNS = {
    "pelvis": ["pelvis", "hips", "hip", "root"],
    "head": ["head"],
    "left_shoulder": ["leftshoulder", "leftarm", "lshoulder", "larm", "leftupperarm"],
    "right_shoulder": ["rightshoulder", "rightarm", "rshoulder", "rarm", "rightupperarm"],
    "left_wrist": ["leftwrist", "lefthand", "lwrist", "lhand"],
    "right_wrist": ["rightwrist", "righthand", "rwrist", "rhand"],
    "left_hip": ["leftupleg", "leftthigh", "lefthip", "lupleg", "lhip"],
    "right_hip": ["rightupleg", "rightthigh", "righthip", "rupleg", "rhip"],
    "left_ankle": ["leftfoot", "leftankle", "lfoot", "lankle"],
    "right_ankle": ["rightfoot", "rightankle", "rfoot", "rankle"],
}


def axis_map_matrix(axis_map: str) -> np.ndarray:
    rows = []
    for tok in axis_map.split(","):
        tok = tok.strip().lower()
        sign = -1.0 if tok.startswith("-") else 1.0
        ax = tok.lstrip("+-")
        if ax not in _AXIS_VECS:
            raise ValueError(f"bad axis map component {tok!r}")
        rows.append(sign * np.array(_AXIS_VECS[ax]))
    m = np.stack(rows)
    if m.shape != (3, 3) or abs(abs(np.linalg.det(m)) - 1.0) > 1e-12:
        raise ValueError(f"axis map {axis_map!r} is not a signed permutation")
    return m


def infer_roles(joint_names) -> dict[str, int]:
    """Best-effort role map from common BVH joint names; may be incomplete."""
    cleaned = [re.sub(r"[\s_:.-]", "", n.lower()) for n in joint_names]
    roles = {}
    used = set()
    for role, patterns in _ROLE_PATTERNS.items():
        for pat in patterns:
            hits = [i for i, n in enumerate(cleaned) if pat in n and i not in used]
            if hits:
                roles[role] = hits[0]
                used.add(hits[0])
                break
    return roles


class _Reader:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self):
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line, self.pos
        return None, self.pos

    def fail(self, msg, lineno=None):
        raise BVHParseError(f"line {lineno if lineno is not None else self.pos}: {msg}")


def parse_bvh(text: str, scale: float = 1.0, roles=None, axis_map: str = "x,-z,y") -> Motion:
    """Parse BVH text into a Motion.

    scale: meters per file unit. roles: optional {role: joint name} map;
    when omitted, roles are inferred from joint names where possible and the
    map is left empty if inference is incomplete.
    """
    P = axis_map_matrix(axis_map)
    r = _Reader(text)
    line, ln = r.next()
    if line != "HIERARCHY":
        r.fail(f"expected HIERARCHY, got {line!r}", ln)

    names, parents, offsets, channels = [], [], [], []
    stack = []  # joint indices of open blocks; -1 marks an End Site block

    line, ln = r.next()
    while line is not None and line != "MOTION":
        toks = line.split()
        kw = toks[0]
        if kw in ("ROOT", "JOINT"):
            if len(toks) < 2:
                r.fail("joint declaration without a name", ln)
            parent = stack[-1] if stack else None
            if kw == "ROOT" and parent is not None:
                r.fail("ROOT inside another joint", ln)
            names.append(" ".join(toks[1:]))
            parents.append(parent)
            offsets.append(None)
            channels.append([])
            brace, bln = r.next()
            if brace != "{":
                r.fail("expected '{' after joint declaration", bln)
            stack.append(len(names) - 1)
        elif kw == "End":
            brace, bln = r.next()
            if brace != "{":
                r.fail("expected '{' after End Site", bln)
            stack.append(-1)
        elif kw == "OFFSET":
            if len(toks) != 4:
                r.fail("OFFSET needs 3 values", ln)
            if stack and stack[-1] >= 0:
                try:
                    offsets[stack[-1]] = np.array([float(v) for v in toks[1:]])
                except ValueError:
                    r.fail("non-numeric OFFSET", ln)
        elif kw == "CHANNELS":
            if not stack or stack[-1] < 0:
                r.fail("CHANNELS outside a joint", ln)
            try:
                n = int(toks[1])
            except (IndexError, ValueError):
                r.fail("CHANNELS needs a count", ln)
            chs = toks[2:]
            if len(chs) != n:
                r.fail(f"CHANNELS declares {n} but lists {len(chs)}", ln)
            for c in chs:
                if c not in ("Xposition", "Yposition", "Zposition", "Xrotation", "Yrotation", "Zrotation"):
                    r.fail(f"unknown channel {c!r}", ln)
            channels[stack[-1]] = chs
        elif kw == "}":
            if not stack:
                r.fail("unmatched '}'", ln)
            stack.pop()
        else:
            r.fail(f"unexpected token {kw!r}", ln)
        line, ln = r.next()

    if line != "MOTION":
        r.fail("missing MOTION section", ln)
    if stack:
        r.fail("unclosed joint block", ln)
    if not names:
        r.fail("no joints declared", ln)
    for i, off in enumerate(offsets):
        if off is None:
            r.fail(f"joint {names[i]!r} has no OFFSET", ln)

    line, ln = r.next()
    m = re.fullmatch(r"Frames:\s*(\d+)", line or "")
    if not m:
        r.fail(f"expected 'Frames: N', got {line!r}", ln)
    num_frames = int(m.group(1))
    line, ln = r.next()
    m = re.fullmatch(r"Frame Time:\s*([0-9.eE+-]+)", line or "")
    if not m:
        r.fail(f"expected 'Frame Time: t', got {line!r}", ln)
    frame_time = float(m.group(1))
    if frame_time <= 0:
        r.fail(f"non-positive frame time {frame_time}", ln)

    total_ch = sum(len(c) for c in channels)
    rows = []
    line, ln = r.next()
    while line is not None:
        try:
            vals = [float(v) for v in line.split()]
        except ValueError:
            r.fail("non-numeric motion data", ln)
        if len(vals) != total_ch:
            r.fail(f"frame has {len(vals)} values, expected {total_ch}", ln)
        rows.append(vals)
        line, ln = r.next()
    if len(rows) != num_frames:
        r.fail(f"MOTION declares {num_frames} frames but {len(rows)} data rows found", ln)
    data = np.array(rows, dtype=np.float64)

    J = len(names)
    T = num_frames
    root_t = np.zeros((T, 3))
    quats = np.zeros((T, J, 4))
    quats[..., 0] = 1.0
    col = 0
    for j in range(J):
        rot_order = ""
        rot_cols = []
        for c in channels[j]:
            if c.endswith("position"):
                if j != 0:
                    col += 1
                    continue
                root_t[:, "XYZ".index(c[0])] = data[:, col]
                col += 1
            else:
                rot_order += c[0].lower()
                rot_cols.append(col)
                col += 1
        if rot_order:
            quats[:, j] = quat_from_euler(rot_order, data[:, rot_cols])

    # remap into the package coordinate convention
    skel_offsets = [P @ (off * scale) for off in offsets]
    root_t = root_t * scale @ P.T
    mats = quat_to_matrix(quats)
    mats = np.einsum("ij,tajk,lk->tail", P, mats, P)
    quats = matrix_to_quat(mats)

    joints = tuple(Joint(n, p, o) for n, p, o in zip(names, parents, skel_offsets))
    if roles is not None:
        name_to_idx = {j.name: i for i, j in enumerate(joints)}
        try:
            role_map = {role: name_to_idx[jn] for role, jn in roles.items()}
        except KeyError as e:
            raise BVHParseError(f"role map names unknown joint {e.args[0]!r}") from e
    else:
        role_map = infer_roles(names)
        if any(role not in role_map for role in _ROLE_PATTERNS):
            role_map = {}
    skel = Skeleton(joints=joints, roles=role_map)
    return Motion(skeleton=skel, fps=1.0 / frame_time, root_t=root_t, quats=quats)
