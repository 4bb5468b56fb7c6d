"""SIMO flat Rayleigh fading with additive white Gaussian noise at chip rate.

The in-phase and quadrature spreading branches are observed as two separate
``n_r x L`` complex matrices,

    R_I = x_re * h z_re^T + W_I,     R_Q = x_im * h z_im^T + W_Q,

both through the same fading vector ``h``.  Every entry of ``W_I`` and
``W_Q`` is circularly-symmetric complex Gaussian with variance
``N0 = Es / 10**(snr_db/10)`` and ``Es = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ReceivedBlock",
    "draw_channel",
    "apply_channel",
    "noise_variance",
    "complex_gaussian",
]


@dataclass(frozen=True)
class ReceivedBlock:
    """Per-branch received chip matrices, each of shape ``(..., n_r, L)``."""

    r_i: np.ndarray
    r_q: np.ndarray

    @property
    def samples(self) -> np.ndarray:
        """Combined observation ``R_I + j R_Q``; equals ``h s^T`` when noiseless."""
        return self.r_i + 1j * self.r_q

    @property
    def n_r(self) -> int:
        return self.r_i.shape[-2]

    @property
    def chip_len(self) -> int:
        return self.r_i.shape[-1]


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """i.i.d. CN(0, variance) samples."""
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_channel(n_r: int, rng: np.random.Generator, size: int | tuple | None = None) -> np.ndarray:
    """Rayleigh gains, CN(0, 1) per receive antenna.

    Returns shape ``(n_r,)``, or ``(*size, n_r)`` for a batch of independent
    realizations.
    """
    if n_r < 1:
        raise ValueError(f"need at least one receive antenna, got n_r={n_r}")
    shape = (n_r,) if size is None else (*np.atleast_1d(size), n_r)
    return complex_gaussian(rng, shape)


def noise_variance(snr_db: float) -> float:
    """Complex noise variance N0 for unit symbol energy; 0 when ``snr_db`` is +inf."""
    if np.isposinf(snr_db):
        return 0.0
    if not np.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite or +inf, got {snr_db}")
    return 10.0 ** (-snr_db / 10.0)


def apply_channel(block: np.ndarray, h: np.ndarray, snr_db: float,
                  rng: np.random.Generator | None = None) -> ReceivedBlock:
    """Pass transmit chips ``(..., L)`` through gains ``(..., n_r)``.

    ``snr_db=float('inf')`` disables noise, in which case ``rng`` may be None.
    """
    block = np.asarray(block)
    h = np.asarray(h)
    if h.shape[:-1] != block.shape[:-1]:
        raise ValueError(f"batch shapes differ: block {block.shape}, h {h.shape}")
    hh = h[..., :, None]
    r_i = hh * block.real[..., None, :]
    r_q = hh * block.imag[..., None, :]
    n0 = noise_variance(snr_db)
    if n0 > 0:
        if rng is None:
            raise ValueError("an rng is required when noise is enabled")
        r_i = r_i + complex_gaussian(rng, r_i.shape, n0)
        r_q = r_q + complex_gaussian(rng, r_q.shape, n0)
    return ReceivedBlock(r_i=r_i, r_q=r_q)
