"""End-to-end extraction helpers shared by the CLI and the HTTP service.

Keeping one code path here is what makes CLI and service outputs
byte-identical for identical inputs.
"""

import os

import numpy as np

from .bvh import parse_bvh
from .features import extract_orientation_features
from .parts import PARTS
from .quantize import soft_quantize
from .saliency import saliency_all_parts
from .skeleton import Motion, parse_motion_json
from .sos import SMSMask, SOSScript, sms_mask, sms_mask_percentile, synthesize_sos


def load_motion_file(path: str, scale: float = 1.0, axis_map: str = "x,-z,y", roles=None) -> Motion:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.lower().endswith(".bvh"):
        return parse_bvh(text, scale=scale, roles=roles, axis_map=axis_map)
    return parse_motion_json(text)


def extract_sos(
    motion: Motion,
    theta: float | None = None,
    percentiles=None,
    parts=None,
    include_first_frame: bool = False,
    text: str | None = None,
):
    """Full extraction pipeline.

    Returns (script, tracks, global_max, dense_hard_ids). Exactly one of
    theta/percentiles selects the masking rule; theta defaults to 0.9.
    """
    o = extract_orientation_features(motion)
    tracks, global_max = saliency_all_parts(o)
    if percentiles is not None:
        mask = sms_mask_percentile(tracks, percentiles)
    else:
        mask = sms_mask(tracks, global_max, 0.9 if theta is None else theta)
    if parts:
        keep = set(parts)
        mask = SMSMask(kept={p: (f if p in keep else frozenset()) for p, f in mask.kept.items()}, params=mask.params)
    script = synthesize_sos(o, mask, fps=motion.fps, text=text, include_first_frame=include_first_frame)
    dense = soft_quantize(o, beta=np.inf).hard_ids
    return script, tracks, global_max, dense


def saliency_payload(tracks, global_max: float) -> dict:
    return {
        "parts": {part: [float(v) for v in track.s] for part, track in zip(PARTS, tracks)},
        "global_max": float(global_max),
    }


def resolve_data_path(data_dir: str | None, path: str) -> str:
    """Allow-list file references to the configured data directory."""
    if data_dir is None:
        raise PermissionError("server has no data directory configured; pass motions inline")
    root = os.path.realpath(data_dir)
    full = os.path.realpath(os.path.join(root, path))
    if not (full == root or full.startswith(root + os.sep)):
        raise PermissionError(f"path {path!r} escapes the data directory")
    return full
