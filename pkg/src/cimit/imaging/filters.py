"""Enhancement filters for received 8-bit grayscale images.

Every windowed filter replicates the border pixels.  All filters return a
``uint8`` image of the input's shape.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import uniform_filter

__all__ = [
    "median_filter",
    "majority_filter",
    "erode",
    "dilate",
    "opening",
    "closing",
    "morph_filter",
    "wiener_local",
    "haar2",
    "ihaar2",
    "estimate_noise_sigma",
    "wavelet_denoise",
    "nlm_denoise",
    "enhance_pipeline",
]

SQUARE_3X3 = np.ones((3, 3), dtype=bool)


def _to_uint8(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(x), 0, 255).astype(np.uint8)


def _windows(img: np.ndarray, radius: int) -> np.ndarray:
    """``(H, W, (2r+1)**2)`` neighborhoods; the centre sits at index ``K // 2``."""
    if radius < 1:
        raise ValueError(f"window radius must be >= 1, got {radius}")
    size = 2 * radius + 1
    padded = np.pad(np.asarray(img), radius, mode="edge")
    win = sliding_window_view(padded, (size, size))
    return win.reshape(*win.shape[:2], size * size)


def median_filter(img: np.ndarray, radius: int = 1) -> np.ndarray:
    return _to_uint8(np.median(_windows(img, radius), axis=-1))


def majority_filter(img: np.ndarray, radius: int = 1) -> np.ndarray:
    """Most frequent value in each neighborhood; ties keep the centre pixel."""
    img = np.asarray(img, dtype=np.uint8)
    out = img.copy()
    k = (2 * radius + 1) ** 2
    # count matrices are (rows, W, K, K); process a few rows at a time
    step = max(1, (1 << 22) // max(1, img.shape[1] * k * k))
    win_all = _windows(img, radius)
    for r0 in range(0, img.shape[0], step):
        win = win_all[r0:r0 + step]
        counts = np.sum(win[..., :, None] == win[..., None, :], axis=-1)
        best = counts.max(axis=-1)
        n_modes = np.sum(counts == best[..., None], axis=-1) // best
        mode = np.take_along_axis(win, np.argmax(counts, axis=-1)[..., None], axis=-1)[..., 0]
        block = out[r0:r0 + step]
        unique = n_modes == 1
        block[unique] = mode[unique]
    return out


def _offsets(footprint: np.ndarray) -> tuple[np.ndarray, int, int]:
    fp = np.asarray(footprint, dtype=bool)
    if fp.ndim != 2 or fp.shape[0] % 2 == 0 or fp.shape[1] % 2 == 0:
        raise ValueError(f"structuring element must be 2-D with odd sides, got {fp.shape}")
    if not fp.any():
        raise ValueError("structuring element is empty")
    ry, rx = fp.shape[0] // 2, fp.shape[1] // 2
    return np.argwhere(fp) - (ry, rx), ry, rx


def _rank_extreme(img: np.ndarray, footprint, reflect: bool, reduce) -> np.ndarray:
    img = np.asarray(img, dtype=np.uint8)
    offs, ry, rx = _offsets(footprint)
    if reflect:
        offs = -offs
    ry, rx = max(ry, 1), max(rx, 1)
    padded = np.pad(img, ((ry, ry), (rx, rx)), mode="edge")
    h, w = img.shape
    out = None
    for dy, dx in offs:
        shifted = padded[ry + dy:ry + dy + h, rx + dx:rx + dx + w]
        out = shifted.copy() if out is None else reduce(out, shifted)
    return out


def erode(img: np.ndarray, footprint=SQUARE_3X3) -> np.ndarray:
    """Flat grayscale erosion: minimum of ``img(x + b)`` over the element."""
    return _rank_extreme(img, footprint, False, np.minimum)


def dilate(img: np.ndarray, footprint=SQUARE_3X3) -> np.ndarray:
    """Flat grayscale dilation: maximum of ``img(x - b)`` over the element."""
    return _rank_extreme(img, footprint, True, np.maximum)


def opening(img: np.ndarray, footprint=SQUARE_3X3) -> np.ndarray:
    return dilate(erode(img, footprint), footprint)


def closing(img: np.ndarray, footprint=SQUARE_3X3) -> np.ndarray:
    return erode(dilate(img, footprint), footprint)


def morph_filter(img: np.ndarray, footprint=SQUARE_3X3) -> np.ndarray:
    """Opening to remove bright specks, then closing to fill dark ones."""
    return closing(opening(img, footprint), footprint)


def wiener_local(img: np.ndarray, window: int = 3, noise: float | None = None,
                 eps: float = 1e-12) -> np.ndarray:
    """Locally adaptive Wiener (Lee) filter.

    ``out = mu + max(var - noise, 0) / max(var, eps) * (img - mu)`` with local
    mean and variance over a ``window x window`` box.  ``noise`` defaults to
    the image-wide mean of the local variances.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    x = np.asarray(img, dtype=np.float64)
    mu = uniform_filter(x, window, mode="nearest")
    var = np.maximum(uniform_filter(x * x, window, mode="nearest") - mu * mu, 0.0)
    if noise is None:
        noise = float(var.mean())
    gain = np.maximum(var - noise, 0.0) / np.maximum(var, eps)
    return _to_uint8(mu + gain * (x - mu))


def haar2(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One level of the orthonormal 2-D Haar transform of an even-sized array.

    Returns ``(LL, LH, HL, HH)``.
    """
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    return ((a + b + c + d) / 2, (a - b + c - d) / 2,
            (a + b - c - d) / 2, (a - b - c + d) / 2)


def ihaar2(ll, lh, hl, hh) -> np.ndarray:
    out = np.empty((2 * ll.shape[0], 2 * ll.shape[1]))
    out[0::2, 0::2] = (ll + lh + hl + hh) / 2
    out[0::2, 1::2] = (ll - lh + hl - hh) / 2
    out[1::2, 0::2] = (ll + lh - hl - hh) / 2
    out[1::2, 1::2] = (ll - lh - hl + hh) / 2
    return out


def _pad_even(x: np.ndarray) -> np.ndarray:
    return np.pad(x, ((0, x.shape[0] % 2), (0, x.shape[1] % 2)), mode="edge")


def estimate_noise_sigma(img: np.ndarray) -> float:
    """Robust noise std from the finest diagonal Haar subband (MAD / 0.6745)."""
    x = _pad_even(np.asarray(img, dtype=np.float64))
    hh = haar2(x)[3]
    return float(np.median(np.abs(hh)) / 0.6745)


def _soft(x: np.ndarray, t: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def wavelet_denoise(img: np.ndarray, threshold: float | None = None) -> np.ndarray:
    """Single-level Haar soft-threshold denoising.

    The default threshold is ``sigma * sqrt(2 ln n)`` with ``sigma`` from
    :func:`estimate_noise_sigma` and ``n`` the pixel count.
    """
    img = np.asarray(img)
    x = _pad_even(img.astype(np.float64))
    ll, lh, hl, hh = haar2(x)
    if threshold is None:
        sigma = float(np.median(np.abs(hh)) / 0.6745)
        threshold = sigma * np.sqrt(2 * np.log(x.size))
    rec = ihaar2(ll, _soft(lh, threshold), _soft(hl, threshold), _soft(hh, threshold))
    return _to_uint8(rec[:img.shape[0], :img.shape[1]])


def nlm_denoise(img: np.ndarray, patch_radius: int = 1, search_radius: int = 5,
                h: float = 10.0, sigma: float | None = None) -> np.ndarray:
    """Non-local means over a square search window with flat square patches.

    Candidate weight is ``exp(-max(d2 - 2 sigma^2, 0) / h^2)`` where ``d2``
    is the mean squared difference between the two patches.  ``sigma``
    defaults to :func:`estimate_noise_sigma`.
    """
    if h <= 0:
        raise ValueError(f"filter strength h must be positive, got {h}")
    if patch_radius < 0 or search_radius < 0:
        raise ValueError("radii must be non-negative")
    x = np.asarray(img, dtype=np.float64)
    if sigma is None:
        sigma = estimate_noise_sigma(x)
    rows, cols = x.shape
    s = search_radius
    padded = np.pad(x, s, mode="edge")
    patch = 2 * patch_radius + 1
    num = np.zeros_like(x)
    den = np.zeros_like(x)
    for dy in range(-s, s + 1):
        for dx in range(-s, s + 1):
            cand = padded[s + dy:s + dy + rows, s + dx:s + dx + cols]
            d2 = uniform_filter((x - cand) ** 2, patch, mode="nearest")
            w = np.exp(-np.maximum(d2 - 2 * sigma ** 2, 0.0) / h ** 2)
            num += w * cand
            den += w
    return _to_uint8(num / den)


def enhance_pipeline(img: np.ndarray) -> np.ndarray:
    """Median, then majority, then closing, all with 3x3 neighborhoods."""
    return closing(majority_filter(median_filter(img, 1), 1))
