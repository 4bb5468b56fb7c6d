"""Bit error rate and the closed-form efficiency measures."""

from __future__ import annotations

import numpy as np

from .codebook import is_power_of_two

__all__ = ["ber", "throughput", "energy_saving", "comparator_efficiency"]


def ber(tx_bits, rx_bits) -> float:
    tx = np.asarray(tx_bits).ravel()
    rx = np.asarray(rx_bits).ravel()
    if tx.size == 0 or tx.size != rx.size:
        raise ValueError(f"bit streams must be non-empty and equal length ({tx.size} vs {rx.size})")
    return float(np.count_nonzero(tx != rx)) / tx.size


def throughput(aber: float, eta: float, t_s: float = 1.0) -> float:
    """Correctly delivered bits per second: ``(1 - aber) * eta / t_s``."""
    if t_s <= 0:
        raise ValueError(f"symbol duration must be positive, got {t_s}")
    if not 0.0 <= aber <= 1.0:
        raise ValueError(f"aber must lie in [0, 1], got {aber}")
    return (1.0 - aber) * eta / t_s


def energy_saving(n_c: float, eta: float) -> float:
    """Percentage of per-bit energy saved against a scheme carrying ``n_c`` bits/symbol."""
    if not 0 < n_c <= eta:
        raise ValueError(f"need 0 < n_c <= eta, got n_c={n_c}, eta={eta}")
    return (1.0 - n_c / eta) * 100.0


def comparator_efficiency(scheme: str, order: int, n_t: int = 1) -> int:
    """Bits per symbol of a benchmark scheme.

    QAM and PSK carry ``log2 M``; spatial modulation adds ``log2 N_T``
    antenna-index bits.
    """
    scheme = scheme.upper()
    if not is_power_of_two(order):
        raise ValueError(f"order must be a power of two, got {order}")
    bits = order.bit_length() - 1
    if scheme in ("QAM", "PSK", "QPSK"):
        return bits
    if scheme == "SM":
        if not is_power_of_two(n_t):
            raise ValueError(f"N_T must be a power of two, got {n_t}")
        return bits + n_t.bit_length() - 1
    raise ValueError(f"unknown comparator scheme {scheme!r}")
