import numpy as np
import pytest

from soskit.optimize import (
    OptimizationProblem,
    OptimizeError,
    decode_direct,
    encode_direct,
    l2_rot6d,
    optimize,
    periodic_flat,
    sos_accuracy,
    sos_loss,
)
from soskit.periodic import fit_periodic
from soskit.quantize import symbol_id
from soskit.rotations import quat_from_axis_angle, quat_to_matrix
from soskit.skeleton import Joint, Motion, MotionError, Skeleton, motions_equal
from soskit.sos import SOSEntry, SOSScript
from soskit.synth import perturb_motion, wavy_motion
from soskit.pipeline import extract_sos


def empty_script(motion):
    return SOSScript(fps=motion.fps, num_frames=motion.num_frames, entries=())


def test_sos_accuracy_round_trip(wavy):
    script, *_ = extract_sos(wavy, theta=0.5)
    assert len(script.entries) > 0
    assert sos_accuracy(wavy, script) == 1.0


def test_sos_accuracy_empty_script(wavy):
    assert sos_accuracy(wavy, empty_script(wavy)) == 1.0


def test_sos_accuracy_all_wrong(wavy):
    script, *_ = extract_sos(wavy, theta=0.5)
    wrong = tuple(
        SOSEntry(e.frame, e.part, (e.symbol_id + 1) % (8 if e.part == "RT" else 26))
        for e in script.entries
    )
    bad = SOSScript(fps=wavy.fps, num_frames=wavy.num_frames, entries=wrong)
    assert sos_accuracy(wavy, bad) == 0.0


def test_sos_accuracy_frame_mismatch(wavy):
    short = SOSScript(fps=wavy.fps, num_frames=wavy.num_frames - 1, entries=())
    with pytest.raises(MotionError, match="frames but"):
        sos_accuracy(wavy, short)


def one_joint_motion(quat_rows):
    skel = Skeleton(joints=(Joint("root", None, (0, 0, 0)),))
    q = np.asarray(quat_rows, dtype=float)[:, None, :]
    return Motion(skeleton=skel, fps=30.0, root_t=np.zeros((len(quat_rows), 3)), quats=q)


def test_l2_rot6d_identical_is_zero(wavy):
    assert l2_rot6d(wavy, wavy) == 0.0


def test_l2_rot6d_yaw90_single_joint():
    ident = [1.0, 0.0, 0.0, 0.0]
    yaw90 = quat_from_axis_angle(np.array([0.0, 0.0, 1.0]), np.pi / 2)
    a = one_joint_motion([ident, ident])
    b = one_joint_motion([yaw90, ident])
    # (1,0,0,0,1,0) vs (0,1,0,-1,0,0): distance 2 on one of two frames
    assert l2_rot6d(a, b) == pytest.approx(1.0)
    c = one_joint_motion([yaw90, yaw90])
    assert l2_rot6d(a, c) == pytest.approx(2.0)


def test_l2_rot6d_shape_mismatch(wavy, tpose):
    with pytest.raises(MotionError, match="differ"):
        l2_rot6d(wavy, tpose)


def test_encode_decode_direct_round_trip(wavy):
    back = decode_direct(encode_direct(wavy), wavy)
    assert np.allclose(quat_to_matrix(back.quats), quat_to_matrix(wavy.quats), atol=1e-9)
    assert np.array_equal(back.root_t, wavy.root_t)


def test_loss_empty_script_zero(wavy):
    theta = encode_direct(wavy).ravel()
    loss, grad = sos_loss(theta, wavy, empty_script(wavy))
    assert loss == 0.0
    assert np.allclose(grad, 0.0)


def test_loss_satisfied_entry_near_zero(arm_swing):
    script, *_ = extract_sos(arm_swing, theta=0.9)
    theta = encode_direct(arm_swing).ravel()
    loss, _ = sos_loss(theta, arm_swing, script, beta=200.0)
    assert loss < 5e-2  # soft quantization leaves a small residual even on-target


def _random_script(motion, rng, n=4):
    parts = ["LA", "RA", "RT", "SP"]
    entries = []
    for part in parts[:n]:
        f = int(rng.integers(1, motion.num_frames))
        sid = int(rng.integers(0, 8 if part == "RT" else 26))
        entries.append(SOSEntry(f, part, sid))
    return SOSScript(fps=motion.fps, num_frames=motion.num_frames, entries=tuple(entries))


def _fd_check(theta, loss_args, n_comp, rng, rtol=1e-4):
    _, grad = sos_loss(theta, **loss_args)
    h = 1e-5
    idx = rng.choice(theta.size, size=min(n_comp, theta.size), replace=False)
    for k in idx:
        tp, tm = theta.copy(), theta.copy()
        tp[k] += h
        tm[k] -= h
        fd = (sos_loss(tp, **loss_args)[0] - sos_loss(tm, **loss_args)[0]) / (2 * h)
        if max(abs(fd), abs(grad[k])) < 1e-8:
            continue
        assert abs(grad[k] - fd) / max(abs(fd), 1e-8) < rtol, f"component {k}"


def test_gradient_direct_matches_fd():
    rng = np.random.default_rng(11)
    motion = wavy_motion(T=8, seed=4)
    script = _random_script(motion, rng)
    theta = encode_direct(motion).ravel() + 0.01 * rng.normal(size=encode_direct(motion).size)
    args = dict(motion=motion, script=script, beta=10.0, mode="direct", lambda_smooth=1e-2, lambda_init=1e-3, theta0=np.zeros_like(theta))
    _fd_check(theta, args, n_comp=20, rng=rng)


def test_gradient_periodic_matches_fd():
    rng = np.random.default_rng(12)
    motion = wavy_motion(T=10, seed=5)
    script = _random_script(motion, rng)
    pp = fit_periodic(encode_direct(motion), harmonics=2)
    theta = periodic_flat(pp) + 0.01 * rng.normal(size=periodic_flat(pp).size)
    args = dict(motion=motion, script=script, beta=10.0, mode="periodic", harmonics=2, lambda_smooth=1e-2, lambda_init=1e-3, theta0=np.zeros_like(theta))
    _fd_check(theta, args, n_comp=20, rng=rng, rtol=2e-4)


def test_unknown_mode_rejected(wavy):
    with pytest.raises(OptimizeError, match="mode"):
        sos_loss(np.zeros(4), wavy, empty_script(wavy), mode="magic")
    with pytest.raises(OptimizeError, match="mode"):
        OptimizationProblem(motion=wavy, script=empty_script(wavy), mode="magic")


def test_problem_validation(wavy):
    with pytest.raises(MotionError, match="frames but"):
        OptimizationProblem(motion=wavy, script=SOSScript(fps=20, num_frames=3, entries=()))
    with pytest.raises(OptimizeError, match=">= 0"):
        OptimizationProblem(motion=wavy, script=empty_script(wavy), max_iters=-1)
    with pytest.raises(OptimizeError, match="non-negative"):
        OptimizationProblem(motion=wavy, script=empty_script(wavy), lambda_smooth=-1.0)


def test_zero_iters_identity(wavy):
    script, *_ = extract_sos(wavy, theta=0.7)
    res = optimize(OptimizationProblem(motion=wavy, script=script, max_iters=0))
    assert motions_equal(res.motion, wavy)
    assert res.iterations == 0
    assert res.l2_rot6d == 0.0
    assert res.sos_acc == sos_accuracy(wavy, script)


def test_line_search_trace_non_increasing():
    clean = wavy_motion(T=24, seed=9)
    script, *_ = extract_sos(clean, theta=0.9)
    noisy = perturb_motion(clean, sigma=0.2, seed=1)
    res = optimize(OptimizationProblem(motion=noisy, script=script, max_iters=20))
    assert all(b <= a + 1e-12 for a, b in zip(res.loss_trace, res.loss_trace[1:]))


def test_deterministic_trace():
    clean = wavy_motion(T=24, seed=10)
    script, *_ = extract_sos(clean, theta=0.9)
    noisy = perturb_motion(clean, sigma=0.2, seed=2)
    problem = OptimizationProblem(motion=noisy, script=script, max_iters=15)
    r1, r2 = optimize(problem), optimize(problem)
    assert r1.loss_trace == r2.loss_trace
    assert np.array_equal(r1.motion.quats, r2.motion.quats)


def test_perturbation_recovery_direct():
    clean = wavy_motion(T=24, seed=20)
    script, *_ = extract_sos(clean, theta=0.9)
    noisy = perturb_motion(clean, sigma=0.2, seed=3)
    res = optimize(OptimizationProblem(motion=noisy, script=script, max_iters=100))
    assert res.sos_acc >= 0.95
    assert l2_rot6d(res.motion, clean) < l2_rot6d(noisy, clean)


def test_perturbation_recovery_periodic_smooth():
    clean = wavy_motion(T=24, seed=21)
    script, *_ = extract_sos(clean, theta=0.9)
    noisy = perturb_motion(clean, sigma=0.2, seed=4)
    res = optimize(OptimizationProblem(motion=noisy, script=script, mode="periodic", max_iters=100))
    assert res.sos_acc >= 0.95
    # band-limited parameterization: no single-frame spikes
    def max_acc(m):
        rv = encode_direct(m)
        return np.abs(rv[2:] - 2 * rv[1:-1] + rv[:-2]).max()

    assert max_acc(res.motion) <= 3.0 * max(max_acc(noisy), 1e-6)
