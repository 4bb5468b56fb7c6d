from __future__ import annotations

import numpy as np


def mse(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak SNR in dB for 8-bit images; ``inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return float("inf")
    return 10.0 * np.log10(255.0 ** 2 / err)
