import numpy as np
import pytest

from soskit.synth import arm_swing_motion, simple_humanoid, spin_motion, static_pose_motion, wavy_motion


@pytest.fixture
def humanoid():
    return simple_humanoid()


@pytest.fixture
def tpose():
    return static_pose_motion(T=20)


@pytest.fixture
def arm_swing():
    return arm_swing_motion()


@pytest.fixture
def spin():
    return spin_motion(T=60)


@pytest.fixture
def wavy():
    return wavy_motion(T=48, seed=3)


def ward_oracle(X):
    """Exhaustive contiguous Ward reference: recomputes every candidate cost
    from raw points at every step. Independent of the production kernels."""
    X = np.asarray(X, dtype=np.float64)
    T = X.shape[0]
    segments = [[i] for i in range(T)]  # lists of frame indices
    node_ids = list(range(T))
    merges = []
    next_id = T
    while len(segments) > 1:
        best = None
        for i in range(len(segments) - 1):
            pts_a = X[segments[i]]
            pts_b = X[segments[i + 1]]
            na, nb = len(pts_a), len(pts_b)
            mu = pts_a.mean(axis=0) - pts_b.mean(axis=0)
            d = np.sqrt(2.0 * na * nb / (na + nb) * float(mu @ mu))
            if best is None or d < best[0]:
                best = (d, i)
        d, i = best
        merges.append((node_ids[i], node_ids[i + 1], d, segments[i + 1][0]))
        segments[i] = segments[i] + segments.pop(i + 1)
        node_ids[i] = next_id
        node_ids.pop(i + 1)
        next_id += 1
    return merges
