"""Band-limited sinusoidal parameterization of per-frame channels.

Each channel is modeled as a sum of H sinusoids a*sin(f*(N - s)) + b with N
the frame time relative to the sequence center. Fitting seeds amplitude,
frequency and phase from the discrete Fourier spectrum, then polishes each
channel with nonlinear least squares so off-grid frequencies are recovered.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares


@dataclass(frozen=True)
class PeriodicParams:
    """Per-channel sinusoid bank: arrays shaped (P, H) plus offset (P,)."""

    freq: np.ndarray  # rad/frame, >= 0
    amp: np.ndarray
    shift: np.ndarray  # phase shift in frames
    offset: np.ndarray
    num_frames: int

    def __post_init__(self):
        for name in ("freq", "amp", "shift", "offset"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if self.freq.shape != self.amp.shape or self.freq.shape != self.shift.shape:
            raise ValueError("freq/amp/shift shapes differ")
        if (self.freq < 0).any():
            raise ValueError("frequencies must be non-negative")

    @property
    def num_channels(self):
        return self.freq.shape[0]

    @property
    def harmonics(self):
        return self.freq.shape[1]


def time_grid(T: int) -> np.ndarray:
    """Frame times relative to the sequence center."""
    return np.arange(T, dtype=np.float64) - (T - 1) / 2.0


def reconstruct_periodic(params: PeriodicParams, T: int | None = None) -> np.ndarray:
    T = params.num_frames if T is None else T
    N = time_grid(T)
    phases = params.freq[None, :, :] * (N[:, None, None] - params.shift[None, :, :])
    return (params.amp[None, :, :] * np.sin(phases)).sum(axis=2) + params.offset[None, :]


def _channel_recon(theta, N, H):
    b = theta[0]
    out = np.full(N.shape, b)
    for h in range(H):
        a, f, s = theta[1 + 3 * h : 4 + 3 * h]
        out = out + a * np.sin(f * (N - s))
    return out


def fit_periodic(signal: np.ndarray, harmonics: int = 1, refine: bool = True) -> PeriodicParams:
    """Fit every channel of a (T, P) signal with ``harmonics`` sinusoids."""
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim == 1:
        signal = signal[:, None]
    T, P = signal.shape
    if T < 4:
        raise ValueError("need at least 4 frames to fit")
    H = harmonics
    N = time_grid(T)
    tc = (T - 1) / 2.0

    freq = np.zeros((P, H))
    amp = np.zeros((P, H))
    shift = np.zeros((P, H))
    offset = signal.mean(axis=0)

    spec = np.fft.rfft(signal - offset, axis=0)
    mags = np.abs(spec)
    for c in range(P):
        order = np.argsort(mags[1:, c])[::-1] + 1  # skip DC
        for h, k in enumerate(order[:H]):
            if mags[k, c] < 1e-12:
                continue
            w = 2.0 * np.pi * k / T
            a = (1.0 if 2 * k == T else 2.0) * mags[k, c] / T
            phi = np.angle(spec[k, c])
            # a*cos(w*t + phi) == a*sin(w*(t - tc - s)) with s below
            s = (-phi - np.pi / 2.0) / w - tc
            period = 2.0 * np.pi / w
            s = s % period
            freq[c, h], amp[c, h], shift[c, h] = w, a, s

        if not refine:
            continue
        theta0 = np.empty(1 + 3 * H)
        theta0[0] = offset[c]
        for h in range(H):
            theta0[1 + 3 * h : 4 + 3 * h] = (amp[c, h], freq[c, h], shift[c, h])
        resid0 = _channel_recon(theta0, N, H) - signal[:, c]
        if np.sqrt(np.mean(resid0**2)) < 1e-10:
            continue
        res = least_squares(
            lambda th: _channel_recon(th, N, H) - signal[:, c],
            theta0,
            method="lm" if T > theta0.size else "trf",
            max_nfev=400,
        )
        theta = res.x
        offset[c] = theta[0]
        for h in range(H):
            a, f, s = theta[1 + 3 * h : 4 + 3 * h]
            if f < 0:  # sin is odd: fold negative frequencies into the amplitude
                f, a = -f, -a
            freq[c, h], amp[c, h], shift[c, h] = f, a, s

    return PeriodicParams(freq=freq, amp=amp, shift=shift, offset=offset, num_frames=T)
