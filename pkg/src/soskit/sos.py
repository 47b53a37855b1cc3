"""SOS script data model, saliency-based masking, and JSON serialization."""

import json
from dataclasses import dataclass, field

import numpy as np

from .features import OrientationFeatures
from .parts import PART_INDEX, PARTS
from .quantize import TEMPLATES, soft_quantize, symbol_id, symbol_name


class SOSError(Exception):
    pass


@dataclass(frozen=True, order=True)
class SOSEntry:
    frame: int
    part: str
    symbol_id: int


@dataclass(frozen=True)
class SOSScript:
    """Sparse (part, frame, symbol) annotations over a T-frame staff."""

    fps: float
    num_frames: int
    entries: tuple[SOSEntry, ...]
    text: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        if self.num_frames < 1:
            raise SOSError(f"num_frames must be positive, got {self.num_frames}")
        seen = set()
        for e in self.entries:
            if e.part not in PART_INDEX:
                raise SOSError(f"unknown part {e.part!r}; valid parts: {', '.join(PARTS)}")
            if not (0 <= e.frame < self.num_frames):
                raise SOSError(f"entry frame {e.frame} outside [0, {self.num_frames})")
            n = len(TEMPLATES.for_part(e.part))
            if not (0 <= e.symbol_id < n):
                raise SOSError(f"symbol id {e.symbol_id} invalid for part {e.part}")
            key = (e.part, e.frame)
            if key in seen:
                raise SOSError(f"duplicate entry at part {e.part}, frame {e.frame}")
            seen.add(key)

    def density(self) -> float:
        return len(self.entries) / (self.num_frames * len(PARTS))


@dataclass(frozen=True)
class SMSMask:
    """Kept (part -> frame set) after saliency thresholding."""

    kept: dict[str, frozenset[int]]
    params: dict = field(default_factory=dict)

    def cells(self):
        for part, frames in self.kept.items():
            for f in sorted(frames):
                yield part, f


def sms_mask(tracks, global_max: float, theta: float) -> SMSMask:
    """Keep (part, frame) cells with saliency >= theta * global_max (and > 0)."""
    if not (0.0 <= theta <= 1.0):
        raise SOSError(f"threshold must be in [0, 1], got {theta}")
    kept = {}
    cut = theta * global_max
    for part, track in zip(PARTS, tracks):
        s = track.s
        kept[part] = frozenset(np.flatnonzero((s >= cut) & (s > 0)).tolist()) if global_max > 0 else frozenset()
    return SMSMask(kept=kept, params={"theta": theta, "global_max": global_max})


def sms_mask_percentile(tracks, percentiles) -> SMSMask:
    """Per-part quantile thresholds over that part's positive saliency values.

    percentiles: mapping part -> m in [0, 1] or a single float for all parts.
    """
    if np.isscalar(percentiles):
        percentiles = {part: float(percentiles) for part in PARTS}
    kept = {}
    for part, track in zip(PARTS, tracks):
        m = float(percentiles[part])
        if not (0.0 <= m <= 1.0):
            raise SOSError(f"percentile for {part} must be in [0, 1], got {m}")
        pos = track.s[track.s > 0]
        if pos.size == 0:
            kept[part] = frozenset()
            continue
        cut = float(np.quantile(pos, m))
        kept[part] = frozenset(np.flatnonzero(track.s >= cut).tolist())
    return SMSMask(kept=kept, params={"percentiles": {p: float(percentiles[p]) for p in PARTS}})


def synthesize_sos(
    o: OrientationFeatures,
    mask: SMSMask,
    fps: float,
    text: str | None = None,
    include_first_frame: bool = False,
) -> SOSScript:
    """Place the hard-quantized symbol at every kept (part, frame) cell."""
    hard = soft_quantize(o, beta=np.inf).hard_ids
    entries = []
    for part, f in mask.cells():
        entries.append(SOSEntry(frame=f, part=part, symbol_id=int(hard[f, PART_INDEX[part]])))
    if include_first_frame:
        for part in PARTS:
            if 0 not in mask.kept.get(part, ()):
                entries.append(SOSEntry(frame=0, part=part, symbol_id=int(hard[0, PART_INDEX[part]])))
    return SOSScript(fps=fps, num_frames=o.o.shape[0], entries=tuple(entries), text=text)


def sample_percentile_masks(tracks, n: int, seed: int):
    """Deterministic augmentation sampler: n independent per-part U(0,1) draws."""
    rng = np.random.default_rng(seed)
    masks = []
    for _ in range(n):
        percentiles = {part: float(rng.uniform()) for part in PARTS}
        masks.append(sms_mask_percentile(tracks, percentiles))
    return masks


# ---------------------------------------------------------------------------
# JSON round trip


def serialize_sos_json(script: SOSScript, indent=None) -> str:
    doc = {
        "fps": script.fps,
        "num_frames": script.num_frames,
        "entries": [
            {"part": e.part, "frame": e.frame, "symbol": symbol_name(e.symbol_id, e.part)}
            for e in script.entries
        ],
    }
    if script.text is not None:
        doc["text"] = script.text
    return json.dumps(doc, indent=indent, sort_keys=True, separators=(",", ":") if indent is None else None)


def sos_from_dict(doc) -> SOSScript:
    if not isinstance(doc, dict):
        raise SOSError("SOS document must be a JSON object")
    for key in ("fps", "num_frames", "entries"):
        if key not in doc:
            raise SOSError(f"SOS document missing {key!r}")
    entries = []
    for i, e in enumerate(doc["entries"]):
        try:
            part, frame, symbol = e["part"], e["frame"], e["symbol"]
        except (KeyError, TypeError) as exc:
            raise SOSError(f"entry {i} malformed: {exc}") from exc
        if part not in PART_INDEX:
            raise SOSError(f"entry {i}: unknown part {part!r}; valid parts: {', '.join(PARTS)}")
        entries.append(SOSEntry(frame=int(frame), part=part, symbol_id=symbol_id(symbol, part)))
    return SOSScript(
        fps=float(doc["fps"]),
        num_frames=int(doc["num_frames"]),
        entries=tuple(entries),
        text=doc.get("text"),
    )


def parse_sos_json(text: str) -> SOSScript:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SOSError(f"invalid JSON: {e}") from e
    return sos_from_dict(doc)
