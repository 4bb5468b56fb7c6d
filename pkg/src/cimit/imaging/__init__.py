"""Grayscale image I/O, pixel/bit conversion, quality metrics and enhancement filters.

Images are ``(height, width)`` ``uint8`` numpy arrays.
"""

from .bits import bits_to_pixels, pad_bits, pixels_to_bits, unpad_bits
from .filters import (
    closing,
    dilate,
    enhance_pipeline,
    erode,
    estimate_noise_sigma,
    majority_filter,
    median_filter,
    morph_filter,
    nlm_denoise,
    opening,
    wavelet_denoise,
    wiener_local,
)
from .pgm import PgmFormatError, load_pgm, read_pgm, save_pgm, write_pgm
from .quality import mse, psnr

__all__ = [
    "PgmFormatError",
    "read_pgm",
    "write_pgm",
    "load_pgm",
    "save_pgm",
    "pixels_to_bits",
    "bits_to_pixels",
    "pad_bits",
    "unpad_bits",
    "mse",
    "psnr",
    "median_filter",
    "majority_filter",
    "erode",
    "dilate",
    "opening",
    "closing",
    "morph_filter",
    "wiener_local",
    "wavelet_denoise",
    "nlm_denoise",
    "estimate_noise_sigma",
    "enhance_pipeline",
]
