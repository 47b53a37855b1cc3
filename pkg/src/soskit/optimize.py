"""Gradient-based motion editing against a target SOS script, plus metrics.

The masked quantization loss is differentiated with torch (float64 autograd
through forward kinematics, the egocentric projection and the softmax
quantizer); correctness is pinned by finite-difference tests rather than by
the autograd engine itself. Two parameter spaces are supported: per-frame
root yaw + exponential-map joint rotations ("direct"), and the sinusoidal
channel bank from :mod:`soskit.periodic` ("periodic").
"""

from dataclasses import dataclass, field

import numpy as np
import torch

from .features import extract_orientation_features
from .parts import LIMB_PAIRS, PART_INDEX, PARTS
from .periodic import PeriodicParams, fit_periodic, time_grid
from .quantize import TEMPLATES, soft_quantize
from .rotations import matrix_to_quat, matrix_to_rot6d, quat_to_matrix, quat_to_rotvec
from .skeleton import Motion, MotionError, to_rot6d
from .sos import SOSScript

_DT = torch.float64


class OptimizeError(Exception):
    pass


# ---------------------------------------------------------------------------
# Metrics


def sos_accuracy(motion: Motion, script: SOSScript) -> float:
    """Fraction of script entries matched by the motion's hard symbols."""
    if script.num_frames != motion.num_frames:
        raise MotionError(
            f"script covers {script.num_frames} frames but motion has {motion.num_frames}"
        )
    if not script.entries:
        return 1.0
    hard = soft_quantize(extract_orientation_features(motion), beta=np.inf).hard_ids
    hits = sum(1 for e in script.entries if hard[e.frame, PART_INDEX[e.part]] == e.symbol_id)
    return hits / len(script.entries)


def l2_rot6d(motion: Motion, reference: Motion) -> float:
    """Mean per-joint L2 distance between 6D rotation representations."""
    if motion.quats.shape != reference.quats.shape:
        raise MotionError("motions differ in frame or joint count")
    diff = to_rot6d(motion) - to_rot6d(reference)
    return float(np.linalg.norm(diff, axis=-1).mean())


# ---------------------------------------------------------------------------
# Direct parameter encoding: per-frame [root yaw, rotvec_0, ..., rotvec_{J-1}]


def encode_direct(motion: Motion) -> np.ndarray:
    """Motion -> (T, 1 + 3J) parameter signal with yaw channel zeroed."""
    T, J = motion.num_frames, motion.skeleton.num_joints
    rv = quat_to_rotvec(motion.quats).reshape(T, 3 * J)
    return np.concatenate([np.zeros((T, 1)), rv], axis=1)


def _expmap(rv):
    """Rotation vectors (..., 3) -> rotation matrices (..., 3, 3), torch."""
    theta2 = (rv * rv).sum(-1)
    theta = torch.sqrt(theta2 + 1e-30)
    k = rv / theta[..., None]
    K = torch.zeros(rv.shape[:-1] + (3, 3), dtype=_DT)
    K[..., 0, 1], K[..., 0, 2] = -k[..., 2], k[..., 1]
    K[..., 1, 0], K[..., 1, 2] = k[..., 2], -k[..., 0]
    K[..., 2, 0], K[..., 2, 1] = -k[..., 1], k[..., 0]
    s = torch.sin(theta)[..., None, None]
    c = (1.0 - torch.cos(theta))[..., None, None]
    eye = torch.eye(3, dtype=_DT).expand_as(K)
    return eye + s * K + c * (K @ K)


def _yaw_matrix(yaw):
    c, s = torch.cos(yaw), torch.sin(yaw)
    zero = torch.zeros_like(yaw)
    one = torch.ones_like(yaw)
    return torch.stack(
        [
            torch.stack([c, -s, zero], -1),
            torch.stack([s, c, zero], -1),
            torch.stack([zero, zero, one], -1),
        ],
        -2,
    )


def _decode_rotations(signal, J):
    """(T, 1+3J) torch signal -> per-joint local rotation matrices (T, J, 3, 3)."""
    T = signal.shape[0]
    yaw = signal[:, 0]
    rv = signal[:, 1:].reshape(T, J, 3)
    mats = _expmap(rv)
    root = _yaw_matrix(yaw) @ mats[:, 0]
    return torch.cat([root[:, None], mats[:, 1:]], dim=1)


def _fk_positions(local_r, parents, offsets):
    T, J = local_r.shape[:2]
    world = [local_r[:, 0]]
    pos = [torch.zeros(T, 3, dtype=_DT)]
    for j in range(1, J):
        p = parents[j]
        pos.append(pos[p] + (world[p] @ offsets[j]))
        world.append(world[p] @ local_r[:, j])
    return torch.stack(pos, dim=1)


def _entry_directions(pos, skel, entry_parts):
    """Egocentric unit directions for the needed parts, dict part -> (T, 3)."""
    roles = skel.roles
    lh, rh = pos[:, roles["left_hip"]], pos[:, roles["right_hip"]]
    ls, rs = pos[:, roles["left_shoulder"]], pos[:, roles["right_shoulder"]]
    across = (rh - lh) + (rs - ls)
    across = torch.stack([across[:, 0], across[:, 1], torch.zeros_like(across[:, 0])], -1)
    a = across / torch.linalg.norm(across, dim=-1, keepdim=True).clamp_min(1e-9)
    up = torch.tensor([0.0, 0.0, 1.0], dtype=_DT).expand_as(a)
    fwd = torch.cross(up, a, dim=-1)
    fwd = fwd / torch.linalg.norm(fwd, dim=-1, keepdim=True).clamp_min(1e-9)
    right = torch.cross(fwd, up, dim=-1)
    frame = torch.stack([right, fwd, up], dim=1)  # (T, 3, 3) rows

    dirs = {}
    for part in entry_parts:
        if part == "RT":
            dirs[part] = fwd
        else:
            e_role, a_role = LIMB_PAIRS[part]
            delta = pos[:, roles[e_role]] - pos[:, roles[a_role]]
            ego = torch.einsum("tij,tj->ti", frame, delta)
            dirs[part] = ego / torch.linalg.norm(ego, dim=-1, keepdim=True).clamp_min(1e-9)
    return dirs


def _script_targets(script: SOSScript):
    by_part = {}
    for e in script.entries:
        by_part.setdefault(e.part, []).append(e)
    targets = []
    for part, entries in by_part.items():
        u = torch.tensor(TEMPLATES.for_part(part), dtype=_DT)
        frames = torch.tensor([e.frame for e in entries])
        tvecs = torch.stack([u[e.symbol_id] for e in entries])
        targets.append((part, frames, u, tvecs))
    return targets


def _masked_quant_loss(signal, skel, targets, beta):
    parents = skel.parents()
    offsets = torch.tensor(skel.offsets(), dtype=_DT)
    local_r = _decode_rotations(signal, skel.num_joints)
    pos = _fk_positions(local_r, parents, offsets)
    dirs = _entry_directions(pos, skel, [t[0] for t in targets])
    sq = signal.new_zeros(())
    for part, frames, u, tvecs in targets:
        d = dirs[part][frames]
        w = torch.softmax(beta * (d @ u.T), dim=-1)
        q = w @ u
        sq = sq + ((q - tvecs) ** 2).sum()
    return torch.sqrt(sq + 1e-18)


def _regularizers(signal, lambda_smooth):
    if lambda_smooth == 0 or signal.shape[0] < 3:
        return signal.new_zeros(())
    acc = signal[2:] - 2 * signal[1:-1] + signal[:-2]
    return lambda_smooth * (acc**2).sum()


def _direct_loss(theta_flat, shape, skel, targets, beta, lambda_smooth, lambda_init, theta0_flat):
    signal = theta_flat.reshape(shape)
    loss = _masked_quant_loss(signal, skel, targets, beta) if targets else theta_flat.new_zeros(())
    loss = loss + _regularizers(signal, lambda_smooth)
    if lambda_init:
        loss = loss + lambda_init * ((theta_flat - theta0_flat) ** 2).sum()
    return loss


def _periodic_signal(theta_flat, P, H, T):
    n = P * H
    freq = theta_flat[:n].reshape(P, H)
    amp = theta_flat[n : 2 * n].reshape(P, H)
    shift = theta_flat[2 * n : 3 * n].reshape(P, H)
    offset = theta_flat[3 * n :]
    N = torch.tensor(time_grid(T), dtype=_DT)
    phases = freq[None] * (N[:, None, None] - shift[None])
    return (amp[None] * torch.sin(phases)).sum(-1) + offset[None]


def _periodic_loss(theta_flat, P, H, T, skel, targets, beta, lambda_smooth, lambda_init, theta0_flat):
    signal = _periodic_signal(theta_flat, P, H, T)
    loss = _masked_quant_loss(signal, skel, targets, beta) if targets else theta_flat.new_zeros(())
    loss = loss + _regularizers(signal, lambda_smooth)
    if lambda_init:
        loss = loss + lambda_init * ((theta_flat - theta0_flat) ** 2).sum()
    return loss


def periodic_flat(params: PeriodicParams) -> np.ndarray:
    return np.concatenate(
        [params.freq.ravel(), params.amp.ravel(), params.shift.ravel(), params.offset.ravel()]
    )


def periodic_from_flat(theta: np.ndarray, P: int, H: int, T: int) -> PeriodicParams:
    n = P * H
    return PeriodicParams(
        freq=np.abs(theta[:n]).reshape(P, H),
        amp=np.where(theta[:n] < 0, -1.0, 1.0).reshape(P, H) * theta[n : 2 * n].reshape(P, H),
        shift=theta[2 * n : 3 * n].reshape(P, H),
        offset=theta[3 * n :].copy(),
        num_frames=T,
    )


def sos_loss(
    theta: np.ndarray,
    motion: Motion,
    script: SOSScript,
    beta: float = 10.0,
    mode: str = "direct",
    harmonics: int = 1,
    lambda_smooth: float = 0.0,
    lambda_init: float = 0.0,
    theta0: np.ndarray | None = None,
):
    """Masked quantization loss and its gradient at parameter vector theta.

    For mode "direct", theta is the flattened (T, 1+3J) signal from
    :func:`encode_direct`; for "periodic" it is :func:`periodic_flat` of a
    PeriodicParams over the same channels.
    """
    skel = motion.skeleton
    T, J = motion.num_frames, skel.num_joints
    targets = _script_targets(script)
    t = torch.tensor(np.asarray(theta, dtype=np.float64), requires_grad=True)
    t0 = torch.tensor(
        np.asarray(theta0, dtype=np.float64) if theta0 is not None else np.zeros_like(theta)
    )
    if mode == "direct":
        loss = _direct_loss(t, (T, 1 + 3 * J), skel, targets, beta, lambda_smooth, lambda_init, t0)
    elif mode == "periodic":
        loss = _periodic_loss(t, 1 + 3 * J, harmonics, T, skel, targets, beta, lambda_smooth, lambda_init, t0)
    else:
        raise OptimizeError(f"unknown mode {mode!r}")
    if loss.requires_grad:  # constant loss (empty script, zero weights) has no graph
        (grad,) = torch.autograd.grad(loss, t)
    else:
        grad = torch.zeros_like(t)
    return float(loss.detach()), grad.numpy()


# ---------------------------------------------------------------------------
# Iterative optimization


@dataclass(frozen=True)
class OptimizationProblem:
    motion: Motion
    script: SOSScript
    mode: str = "direct"
    step_weight: float = 1.0
    lambda_smooth: float = 1e-2
    lambda_init: float = 1e-3
    beta: float = 10.0
    max_iters: int = 100
    tolerance: float = 1e-8
    harmonics: int = 4
    line_search: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("direct", "periodic"):
            raise OptimizeError(f"mode must be 'direct' or 'periodic', got {self.mode!r}")
        if self.max_iters < 0:
            raise OptimizeError("max_iters must be >= 0")
        if min(self.step_weight, self.lambda_smooth, self.lambda_init) < 0:
            raise OptimizeError("weights must be non-negative")
        if self.script.num_frames != self.motion.num_frames:
            raise MotionError(
                f"script covers {self.script.num_frames} frames but motion has {self.motion.num_frames}"
            )


@dataclass(frozen=True)
class OptimizationResult:
    motion: Motion
    loss_trace: list[float]
    sos_acc: float
    l2_rot6d: float
    converged: bool
    iterations: int
    metrics: dict = field(default_factory=dict)


def decode_direct(signal: np.ndarray, motion: Motion) -> Motion:
    """(T, 1+3J) parameter signal -> Motion reusing the source root translation."""
    skel = motion.skeleton
    with torch.no_grad():
        local_r = _decode_rotations(torch.tensor(signal, dtype=_DT), skel.num_joints)
    quats = matrix_to_quat(local_r.numpy())
    return Motion(skeleton=skel, fps=motion.fps, root_t=motion.root_t.copy(), quats=quats)


def optimize(problem: OptimizationProblem) -> OptimizationResult:
    motion, script = problem.motion, problem.script
    skel = motion.skeleton
    skel.require_roles()
    T, J = motion.num_frames, skel.num_joints
    P = 1 + 3 * J
    targets = _script_targets(script)

    direct0 = encode_direct(motion)
    if problem.mode == "direct":
        theta = torch.tensor(direct0.ravel().copy())
        theta0 = theta.clone()

        def loss_fn(t):
            return _direct_loss(
                t, (T, P), skel, targets, problem.beta, problem.lambda_smooth, problem.lambda_init, theta0
            )

    else:
        pp = fit_periodic(direct0, harmonics=problem.harmonics)
        theta = torch.tensor(periodic_flat(pp))
        theta0 = theta.clone()
        H = problem.harmonics

        def loss_fn(t):
            return _periodic_loss(
                t, P, H, T, skel, targets, problem.beta, problem.lambda_smooth, problem.lambda_init, theta0
            )

    def eval_loss_grad(t):
        tt = t.detach().requires_grad_(True)
        loss = loss_fn(tt)
        if not torch.isfinite(loss):
            raise OptimizeError(f"non-finite loss at iteration {len(trace)}")
        if loss.requires_grad:
            (g,) = torch.autograd.grad(loss, tt)
        else:
            g = torch.zeros_like(tt)
        return float(loss.detach()), g

    trace = []
    loss, grad = eval_loss_grad(theta)
    trace.append(loss)
    converged = False
    iterations = 0
    eta = 1.0
    for it in range(problem.max_iters):
        step = problem.step_weight * grad
        if problem.line_search:
            gg = float((grad * step).sum())
            accepted = False
            trial_eta = eta * 2.0
            for _ in range(60):
                cand = theta - trial_eta * step
                cl = float(loss_fn(cand).detach())
                if np.isfinite(cl) and cl <= loss - 1e-4 * trial_eta * gg:
                    accepted = True
                    break
                trial_eta *= 0.5
            if not accepted:
                converged = True  # no admissible descent step left
                break
            eta = trial_eta
            theta = cand
            new_loss, grad = eval_loss_grad(theta)
        else:
            theta = theta - step
            new_loss, grad = eval_loss_grad(theta)
        trace.append(new_loss)
        iterations = it + 1
        if abs(loss - new_loss) < problem.tolerance:
            converged = True
            loss = new_loss
            break
        loss = new_loss

    if iterations == 0:
        out = motion  # exact identity, not a log/exp round trip
    elif problem.mode == "direct":
        out = decode_direct(theta.detach().numpy().reshape(T, P), motion)
    else:
        with torch.no_grad():
            out = decode_direct(_periodic_signal(theta, P, problem.harmonics, T).numpy(), motion)
    acc = sos_accuracy(out, script)
    return OptimizationResult(
        motion=out,
        loss_trace=trace,
        sos_acc=acc,
        l2_rot6d=l2_rot6d(out, motion),
        converged=converged,
        iterations=iterations,
        metrics={"final_loss": trace[-1]},
    )
