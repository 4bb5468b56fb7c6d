"""Walsh-Hadamard spreading codes and Gray-labeled constellations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpreadingCodebook",
    "Constellation",
    "hadamard",
    "build_codebook",
    "build_constellation",
    "gray",
    "is_power_of_two",
]


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def gray(n):
    """Binary-reflected Gray code of ``n`` (works on ints and integer arrays)."""
    return n ^ (n >> 1)


def hadamard(order: int) -> np.ndarray:
    """Sylvester-Hadamard matrix of the given order, entries +1/-1.

    >>> hadamard(2)
    array([[ 1,  1],
           [ 1, -1]])
    """
    if not is_power_of_two(order):
        raise ValueError(f"Hadamard order must be a power of two, got {order!r}")
    H = np.ones((1, 1), dtype=np.int64)
    while H.shape[0] < order:
        H = np.block([[H, H], [H, -H]])
    return H


@dataclass(frozen=True)
class SpreadingCodebook:
    """The ``2**n_w`` unit-norm spreading codes, one per row of ``codes``."""

    n_w: int
    chip_len: int
    codes: np.ndarray

    @property
    def n_codes(self) -> int:
        return self.codes.shape[0]


def build_codebook(n_w: int, chip_len: int) -> SpreadingCodebook:
    """First ``2**n_w`` Hadamard rows of order ``chip_len``, scaled to unit norm."""
    if n_w < 0:
        raise ValueError(f"n_w must be non-negative, got {n_w}")
    if not is_power_of_two(chip_len):
        raise ValueError(f"chip length must be a power of two, got {chip_len}")
    n_codes = 1 << n_w
    if n_codes > chip_len:
        raise ValueError(f"2**n_w = {n_codes} codes do not fit in {chip_len} chips")
    codes = hadamard(chip_len)[:n_codes] / np.sqrt(chip_len)
    codes.setflags(write=False)
    return SpreadingCodebook(n_w=n_w, chip_len=chip_len, codes=codes)


@dataclass(frozen=True)
class Constellation:
    """Unit average energy point set; ``points[label]`` is the point for that bit label.

    Labels are integers whose ``bits_per_symbol``-bit binary expansion (MSB
    first) is the bit pattern carried by the point.
    """

    kind: str
    points: np.ndarray

    @property
    def order(self) -> int:
        return self.points.shape[0]

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


def _qam_points(order: int) -> np.ndarray:
    k = order.bit_length() - 1
    k_i = (k + 1) // 2
    k_q = k - k_i
    m_i, m_q = 1 << k_i, 1 << k_q
    labels = np.arange(order)
    # label = I bits (high half) followed by Q bits; each half Gray-codes its axis position
    pos_i = _gray_inverse(labels >> k_q, k_i)
    pos_q = _gray_inverse(labels & (m_q - 1), k_q)
    pts = (2 * pos_i - m_i + 1) + 1j * (2 * pos_q - m_q + 1)
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def _psk_points(order: int) -> np.ndarray:
    pts = np.empty(order, dtype=complex)
    pos = np.arange(order)
    pts[gray(pos)] = np.exp(2j * np.pi * pos / order)
    # cos/sin residue at multiples of pi/2 would leak energy into the other branch
    pts.real[np.abs(pts.real) < 1e-15] = 0.0
    pts.imag[np.abs(pts.imag) < 1e-15] = 0.0
    return pts


def _gray_inverse(g: np.ndarray, nbits: int) -> np.ndarray:
    b = g.copy()
    shift = 1
    while shift < max(nbits, 1):
        b ^= b >> shift
        shift <<= 1
    return b


def build_constellation(order: int, kind: str = "QAM") -> Constellation:
    """Gray-labeled M-QAM (square or rectangular grid) or M-PSK constellation."""
    kind = kind.upper()
    if not is_power_of_two(order) or order < 2:
        raise ValueError(f"constellation order must be a power of two >= 2, got {order}")
    if kind == "QAM":
        points = _qam_points(order)
    elif kind == "PSK":
        points = _psk_points(order)
    else:
        raise ValueError(f"unknown constellation kind {kind!r}")
    points.setflags(write=False)
    return Constellation(kind=kind, points=points)
