"""CIM transmitter: bit splitting and spreading.

A group of ``eta = 2*n_w + log2(M)`` bits is laid out as::

    [ symbol label (log2 M) | real-code index (n_w) | imag-code index (n_w) ]

with every field in MSB-first natural binary.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .codebook import Constellation, SpreadingCodebook, is_power_of_two

__all__ = [
    "CimSymbol",
    "spectral_efficiency",
    "bits_to_int",
    "int_to_bits",
    "split_bits",
    "spread",
]


class CimSymbol(NamedTuple):
    """Constellation label plus the two active code indices.

    Fields may be plain ints or equally-shaped integer arrays (a batch).
    """

    sym_idx: int | np.ndarray
    c_re: int | np.ndarray
    c_im: int | np.ndarray


def spectral_efficiency(n_w: int, order: int) -> int:
    """Bits carried per CIM symbol: two code indices plus one constellation point."""
    if n_w < 0 or not is_power_of_two(order):
        raise ValueError(f"invalid CIM parameters n_w={n_w}, M={order}")
    return 2 * n_w + order.bit_length() - 1


def bits_to_int(bits: np.ndarray) -> np.ndarray:
    """MSB-first integer value of the last axis of a 0/1 array."""
    bits = np.asarray(bits, dtype=np.int64)
    k = bits.shape[-1]
    if k == 0:
        return np.zeros(bits.shape[:-1], dtype=np.int64)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def int_to_bits(values, nbits: int) -> np.ndarray:
    """Inverse of :func:`bits_to_int`; appends an axis of length ``nbits``."""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def split_bits(bits, n_w: int, order: int) -> CimSymbol:
    """Split eta-bit groups into a :class:`CimSymbol`.

    ``bits`` has shape ``(..., eta)``; a 1-D group yields scalar fields.
    """
    bits = np.asarray(bits)
    eta = spectral_efficiency(n_w, order)
    if bits.ndim == 0 or bits.shape[-1] != eta:
        raise ValueError(f"expected groups of {eta} bits, got shape {bits.shape}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    n_m = eta - 2 * n_w
    sym = bits_to_int(bits[..., :n_m])
    c_re = bits_to_int(bits[..., n_m:n_m + n_w])
    c_im = bits_to_int(bits[..., n_m + n_w:])
    if bits.ndim == 1:
        return CimSymbol(int(sym), int(c_re), int(c_im))
    return CimSymbol(sym, c_re, c_im)


def spread(sym: CimSymbol, codebook: SpreadingCodebook,
           constellation: Constellation) -> np.ndarray:
    """Chip-rate baseband block ``x_re * z[c_re] + 1j * x_im * z[c_im]``.

    Returns shape ``(..., L)`` matching the batch shape of ``sym``.
    """
    sym_idx, c_re, c_im = (np.asarray(v) for v in sym)
    if np.any((sym_idx < 0) | (sym_idx >= constellation.order)):
        raise ValueError("constellation index out of range")
    for c in (c_re, c_im):
        if np.any((c < 0) | (c >= codebook.n_codes)):
            raise ValueError("spreading code index out of range")
    x = constellation.points[sym_idx]
    z = codebook.codes
    return x.real[..., None] * z[c_re] + 1j * x.imag[..., None] * z[c_im]
