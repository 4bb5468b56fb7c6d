"""Conventional single-stream SIMO M-QAM / M-PSK links with ML detection."""

from __future__ import annotations

import numpy as np

from .channel import complex_gaussian, draw_channel, noise_variance
from .codebook import Constellation
from .modem import bits_to_int, int_to_bits

__all__ = ["baseline_modulate", "baseline_detect", "baseline_link"]

# candidate-distance matrices are (chunk, M); keep them around 32 MB
_DETECT_CELLS = 1 << 21


def baseline_modulate(bits, constellation: Constellation) -> np.ndarray:
    """Map ``(..., log2 M)`` bit groups to constellation points."""
    bits = np.asarray(bits)
    k = constellation.bits_per_symbol
    if bits.ndim == 0 or bits.shape[-1] != k:
        raise ValueError(f"expected groups of {k} bits, got shape {bits.shape}")
    return constellation.points[bits_to_int(bits)]


def baseline_detect(y: np.ndarray, h: np.ndarray, constellation: Constellation) -> np.ndarray:
    """ML labels for observations ``y = h x + w`` of shape ``(..., n_r)``.

    Maximal-ratio combining followed by a minimum-distance decision, which is
    the exact ML rule for a single stream.
    """
    y = np.asarray(y)
    h = np.asarray(h)
    gain = np.sum(np.abs(h) ** 2, axis=-1)
    z = np.sum(np.conj(h) * y, axis=-1) / np.where(gain > 0, gain, 1.0)
    flat = z.reshape(-1)
    pts = constellation.points
    out = np.empty(flat.shape, dtype=np.int64)
    step = max(1, _DETECT_CELLS // pts.size)
    for start in range(0, flat.size, step):
        seg = flat[start:start + step]
        out[start:start + step] = np.argmin(np.abs(seg[:, None] - pts[None, :]) ** 2, axis=1)
    return out.reshape(z.shape)


def baseline_link(bits, constellation: Constellation, n_r: int, snr_db: float,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Send bit groups ``(..., log2 M)`` one symbol each over fresh Rayleigh gains."""
    x = baseline_modulate(bits, constellation)
    n0 = noise_variance(snr_db)
    if rng is None:
        if n0 > 0:
            raise ValueError("an rng is required when noise is enabled")
        h = np.ones(x.shape + (n_r,), dtype=complex)
    else:
        h = draw_channel(n_r, rng, size=x.shape if x.shape else None)
    y = h * x[..., None]
    if n0 > 0:
        y = y + complex_gaussian(rng, y.shape, n0)
    labels = baseline_detect(y, h, constellation)
    return int_to_bits(labels, constellation.bits_per_symbol)
