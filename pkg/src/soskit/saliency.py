"""Temporal saliency from contiguity-constrained Ward clustering.

Per body part, the clustering input is the central finite difference of the
normalized template dot products; each dendrogram node donates its merge
distance as the saliency of the first frame of its right (later) child.

Backend: the merge loop runs through a numba-compiled kernel by default;
set SOSKIT_DISABLE_NUMBA=1 (or pass backend="numpy") for the pure-numpy
fallback. Both produce identical trees.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from .features import OrientationFeatures
from .parts import PARTS
from .quantize import TEMPLATES, TemplateSet
from . import _cluster_numpy

try:
    from . import _cluster_numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _cluster_numba = None
    _HAVE_NUMBA = False


def _backend(name=None):
    if name is None:
        name = "numpy" if os.environ.get("SOSKIT_DISABLE_NUMBA") == "1" or not _HAVE_NUMBA else "numba"
    if name == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _cluster_numba.cluster_contiguous_ward
    if name == "numpy":
        return _cluster_numpy.cluster_contiguous_ward
    raise ValueError(f"unknown clustering backend {name!r}")


@dataclass(frozen=True)
class DiffFeatures:
    """Clustering input per part: (T, C) finite differences of template dots."""

    per_part: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class SegmentTree:
    """Dendrogram over frames; merge step k creates internal node T + k.

    left/right hold child node ids, dist the merge distance, boundary the
    first frame of the right (temporally later) child segment.
    """

    num_frames: int
    left: np.ndarray
    right: np.ndarray
    dist: np.ndarray
    boundary: np.ndarray


@dataclass(frozen=True)
class SaliencyTrack:
    s: np.ndarray  # (T,) non-negative; s[0] == 0


def central_diff(rows: np.ndarray) -> np.ndarray:
    """Central differences with one-sided endpoint rules."""
    if rows.shape[0] < 2:
        raise ValueError("need at least 2 frames")
    out = np.empty_like(rows)
    out[1:-1] = (rows[2:] - rows[:-2]) / 2.0
    out[0] = rows[1] - rows[0]
    out[-1] = rows[-1] - rows[-2]
    return out


def diff_features(o: OrientationFeatures, templates: TemplateSet = TEMPLATES) -> DiffFeatures:
    per_part = []
    for p, part in enumerate(PARTS):
        ohat = o.unit[:, p] @ templates.for_part(part).T
        per_part.append(central_diff(ohat))
    return DiffFeatures(per_part=tuple(per_part))


def ward_merge_cost(n_a: int, mu_a: np.ndarray, n_b: int, mu_b: np.ndarray) -> float:
    """Merge distance sqrt(2 * delta) with delta the Ward variance increase."""
    d = np.asarray(mu_a, dtype=np.float64) - np.asarray(mu_b, dtype=np.float64)
    delta = n_a * n_b / (n_a + n_b) * float(d @ d)
    return float(np.sqrt(2.0 * delta))


def build_segment_tree(feat: np.ndarray, backend=None) -> SegmentTree:
    """Agglomerate frames of one part's (T, C) feature matrix."""
    feat = np.asarray(feat, dtype=np.float64)
    if feat.ndim == 1:
        feat = feat[:, None]
    T = feat.shape[0]
    if T < 2:
        raise ValueError("need at least 2 frames to build a segment tree")
    left, right, dist, boundary = _backend(backend)(feat)
    return SegmentTree(num_frames=T, left=left, right=right, dist=dist, boundary=boundary)


def saliency_track(tree: SegmentTree) -> SaliencyTrack:
    s = np.zeros(tree.num_frames)
    s[tree.boundary] = tree.dist
    return SaliencyTrack(s=s)


def saliency_all_parts(o: OrientationFeatures, templates: TemplateSet = TEMPLATES, backend=None):
    """Per-part saliency tracks plus the global maximum across parts."""
    feats = diff_features(o, templates)
    tracks = tuple(saliency_track(build_segment_tree(f, backend=backend)) for f in feats.per_part)
    global_max = max(float(t.s.max()) for t in tracks)
    return tracks, global_max


def tree_to_json(tree: SegmentTree) -> str:
    nodes = [
        {
            "id": int(tree.num_frames + k),
            "children": [int(tree.left[k]), int(tree.right[k])],
            "distance": float(tree.dist[k]),
            "boundary_frame": int(tree.boundary[k]),
        }
        for k in range(tree.num_frames - 1)
    ]
    return json.dumps({"num_frames": tree.num_frames, "nodes": nodes}, sort_keys=True, separators=(",", ":"))
