"""Direction templates and differentiable softmax quantization.

26 unit direction templates for limbs (8 compass directions at three height
levels plus straight up/down), 8 horizontal templates for the root facing.
"""

import json
from dataclasses import dataclass

import numpy as np

from .features import OrientationFeatures
from .parts import PARTS

DIRECTIONS = ("Forward", "ForwardRight", "Right", "BackRight", "Back", "BackLeft", "Left", "ForwardLeft")
LEVELS = ("Low", "Middle", "Top")
PLACE_LOW_ID = 24
PLACE_HIGH_ID = 25

# Diagonal split between the vertical and horizontal components of Top/Low
# templates: unit horizontal scaled by 1/sqrt(10), vertical 3/sqrt(10).
_VERT = 3.0 / np.sqrt(10.0)
_HORIZ = 1.0 / np.sqrt(10.0)


class QuantizeError(Exception):
    pass


@dataclass(frozen=True)
class TemplateSet:
    u: np.ndarray  # (26, 3) limb templates, row index == symbol id
    u_root: np.ndarray  # (8, 3) root templates, row index == symbol id
    names: tuple[str, ...]
    root_names: tuple[str, ...]

    def for_part(self, part: str) -> np.ndarray:
        return self.u_root if part == "RT" else self.u

    def names_for_part(self, part: str):
        return self.root_names if part == "RT" else self.names


def _horizontal_directions() -> np.ndarray:
    d = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [0.0, 1.0, 0.0],  # Forward
            [d, d, 0.0],  # ForwardRight
            [1.0, 0.0, 0.0],  # Right
            [d, -d, 0.0],  # BackRight
            [0.0, -1.0, 0.0],  # Back
            [-d, -d, 0.0],  # BackLeft
            [-1.0, 0.0, 0.0],  # Left
            [-d, d, 0.0],  # ForwardLeft
        ]
    )


def build_templates() -> TemplateSet:
    h = _horizontal_directions()
    u = np.zeros((26, 3))
    names = [""] * 26
    for d, dname in enumerate(DIRECTIONS):
        u[0 * 8 + d] = [h[d, 0] * _HORIZ, h[d, 1] * _HORIZ, -_VERT]
        u[1 * 8 + d] = h[d]
        u[2 * 8 + d] = [h[d, 0] * _HORIZ, h[d, 1] * _HORIZ, _VERT]
        names[0 * 8 + d] = f"{dname}-Low"
        names[1 * 8 + d] = f"{dname}-Middle"
        names[2 * 8 + d] = f"{dname}-Top"
    u[PLACE_LOW_ID] = [0.0, 0.0, -1.0]
    u[PLACE_HIGH_ID] = [0.0, 0.0, 1.0]
    names[PLACE_LOW_ID] = "Place-Low"
    names[PLACE_HIGH_ID] = "Place-High"
    return TemplateSet(u=u, u_root=h.copy(), names=tuple(names), root_names=DIRECTIONS)


TEMPLATES = build_templates()


def symbol_name(symbol_id: int, part: str) -> str:
    names = TEMPLATES.names_for_part(part)
    if not (0 <= symbol_id < len(names)):
        raise QuantizeError(f"symbol id {symbol_id} out of range for part {part}")
    return names[symbol_id]


def symbol_id(name: str, part: str) -> int:
    names = TEMPLATES.names_for_part(part)
    try:
        return names.index(name)
    except ValueError:
        raise QuantizeError(f"unknown symbol {name!r} for part {part}; valid: {', '.join(names)}") from None


@dataclass(frozen=True)
class QuantizedFeatures:
    q: np.ndarray  # (T, 6, 3) soft template mixtures
    hard_ids: np.ndarray  # (T, 6) int
    beta: float


def soft_quantize_dirs(dirs: np.ndarray, templates: np.ndarray, beta: float):
    """Soft-quantize unit directions (..., 3) against template rows (K, 3).

    Returns (q, hard_ids); q is the softmax-weighted template mixture and
    hard_ids the argmax symbol. beta = inf snaps q to the argmax template.
    """
    logits = dirs @ templates.T
    hard = np.argmax(logits, axis=-1)
    if np.isinf(beta):
        return templates[hard], hard
    z = beta * logits
    z = z - z.max(axis=-1, keepdims=True)
    w = np.exp(z)
    w /= w.sum(axis=-1, keepdims=True)
    return w @ templates, hard


def soft_quantize(o: OrientationFeatures, beta: float = 10.0, templates: TemplateSet = TEMPLATES) -> QuantizedFeatures:
    if beta <= 0:
        raise QuantizeError(f"beta must be positive, got {beta}")
    T = o.unit.shape[0]
    q = np.empty((T, len(PARTS), 3))
    hard = np.empty((T, len(PARTS)), dtype=np.int64)
    for p, part in enumerate(PARTS):
        q[:, p], hard[:, p] = soft_quantize_dirs(o.unit[:, p], templates.for_part(part), beta)
    return QuantizedFeatures(q=q, hard_ids=hard, beta=beta)


def soft_quantize_jacobian(o_vec: np.ndarray, templates: np.ndarray, beta: float) -> np.ndarray:
    """d q / d o for a single raw (unnormalized) input vector, shape (3, 3)."""
    o_vec = np.asarray(o_vec, dtype=np.float64)
    n = np.linalg.norm(o_vec)
    ohat = o_vec / n
    z = beta * (templates @ ohat)
    z = z - z.max()
    s = np.exp(z)
    s /= s.sum()
    # dq/dohat = U^T (diag(s) - s s^T) U * beta, then chain through o/||o||
    ds = (np.diag(s) - np.outer(s, s)) @ templates * beta
    j_norm = (np.eye(3) - np.outer(ohat, ohat)) / n
    return templates.T @ ds @ j_norm


def symbol_table() -> dict:
    """Canonical symbol id table shared with serializers and the UI."""
    return {
        "parts": list(PARTS),
        "limb": [
            {"id": i, "name": TEMPLATES.names[i], "vector": [float(v) for v in TEMPLATES.u[i]]}
            for i in range(26)
        ],
        "root": [
            {"id": i, "name": TEMPLATES.root_names[i], "vector": [float(v) for v in TEMPLATES.u_root[i]]}
            for i in range(8)
        ],
    }


def symbol_table_json() -> str:
    return json.dumps(symbol_table(), sort_keys=True, separators=(",", ":"))
