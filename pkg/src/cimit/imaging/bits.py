"""Pixel <-> bitstream conversion (8 bits per pixel, MSB first, row-major)."""

from __future__ import annotations

import numpy as np


def pixels_to_bits(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.uint8)
    return np.unpackbits(img.ravel())


def bits_to_pixels(bits, width: int, height: int) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size != 8 * width * height:
        raise ValueError(f"{bits.size} bits cannot fill a {width}x{height} image")
    return np.packbits(bits).reshape(height, width)


def pad_bits(bits, eta: int) -> tuple[np.ndarray, int]:
    """Zero-pad to a multiple of ``eta``; returns the padded bits and pad length."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    pad = -bits.size % eta
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    return bits, pad


def unpad_bits(bits, pad: int) -> np.ndarray:
    bits = np.asarray(bits).ravel()
    return bits[:bits.size - pad] if pad else bits
