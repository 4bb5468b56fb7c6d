"""Two-stage CIM detection: correlate, pick code indices, then ML symbol search.

All functions accept an arbitrary leading batch shape; ties resolve to the
smallest index because ``np.argmax``/``np.argmin`` return the first extremum.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .channel import ReceivedBlock
from .codebook import Constellation, SpreadingCodebook
from .modem import CimSymbol, int_to_bits, spectral_efficiency, spread

__all__ = [
    "CorrelatorBank",
    "despread",
    "detect_indices",
    "detect_symbol",
    "detect",
    "demap",
    "receive",
    "joint_ml_oracle",
    "ORACLE_MAX_HYPOTHESES",
]

ORACLE_MAX_HYPOTHESES = 1 << 20


class CorrelatorBank(NamedTuple):
    """Correlator outputs, each of shape ``(..., n_r, n_codes)``."""

    i_branch: np.ndarray
    q_branch: np.ndarray


def despread(y: ReceivedBlock, codebook: SpreadingCodebook) -> CorrelatorBank:
    if y.chip_len != codebook.chip_len:
        raise ValueError(
            f"received block has {y.chip_len} chips, codebook expects {codebook.chip_len}")
    zt = codebook.codes.T
    return CorrelatorBank(y.r_i @ zt, y.r_q @ zt)


def detect_indices(bank: CorrelatorBank) -> tuple:
    """Code indices maximizing the per-branch correlator energy across antennas."""
    e_i = np.sum(np.abs(bank.i_branch) ** 2, axis=-2)
    e_q = np.sum(np.abs(bank.q_branch) ** 2, axis=-2)
    return np.argmax(e_i, axis=-1), np.argmax(e_q, axis=-1)


def _select(branch: np.ndarray, idx) -> np.ndarray:
    idx = np.asarray(idx)
    return np.take_along_axis(branch, idx[..., None, None], axis=-1)[..., 0]


def detect_symbol(r_i: np.ndarray, r_q: np.ndarray, h: np.ndarray,
                  constellation: Constellation) -> np.ndarray:
    """ML constellation label from the two selected correlator columns.

    Minimizes ``||(r_i + j r_q) - x h||^2`` over the constellation, using the
    expansion ``|x|^2 ||h||^2 - 2 Re(conj(x) h^H r)`` (the ``||r||^2`` term
    is common to every candidate).
    """
    r = np.asarray(r_i) + 1j * np.asarray(r_q)
    h = np.asarray(h)
    corr = np.sum(np.conj(h) * r, axis=-1)
    gain = np.sum(np.abs(h) ** 2, axis=-1)
    x = constellation.points
    metric = gain[..., None] * np.abs(x) ** 2 - 2 * np.real(np.conj(x) * corr[..., None])
    return np.argmin(metric, axis=-1)


def detect(y: ReceivedBlock, h: np.ndarray, codebook: SpreadingCodebook,
           constellation: Constellation) -> CimSymbol:
    bank = despread(y, codebook)
    c_re, c_im = detect_indices(bank)
    sym = detect_symbol(_select(bank.i_branch, c_re), _select(bank.q_branch, c_im),
                        h, constellation)
    if np.ndim(sym) == 0:
        return CimSymbol(int(sym), int(c_re), int(c_im))
    return CimSymbol(sym, c_re, c_im)


def demap(sym: CimSymbol, n_w: int, order: int) -> np.ndarray:
    """Bit groups ``(..., eta)`` for detected symbols; inverse of ``split_bits``."""
    n_m = spectral_efficiency(n_w, order) - 2 * n_w
    return np.concatenate(
        [int_to_bits(sym.sym_idx, n_m), int_to_bits(sym.c_re, n_w), int_to_bits(sym.c_im, n_w)],
        axis=-1,
    )


def receive(y: ReceivedBlock, h: np.ndarray, codebook: SpreadingCodebook,
            constellation: Constellation) -> np.ndarray:
    sym = detect(y, h, codebook, constellation)
    return demap(sym, codebook.n_w, constellation.order)


def joint_ml_oracle(y: ReceivedBlock, h: np.ndarray, codebook: SpreadingCodebook,
                    constellation: Constellation) -> CimSymbol:
    """Exhaustive joint search over every (c_re, c_im, symbol) hypothesis.

    Scores ``||R_I - x_re h z_re^T||^2 + ||R_Q - x_im h z_im^T||^2`` for a
    single received block; the lexicographically smallest
    ``(c_re, c_im, sym_idx)`` wins ties.
    """
    n_codes, order = codebook.n_codes, constellation.order
    n_hyp = n_codes * n_codes * order
    if n_hyp > ORACLE_MAX_HYPOTHESES:
        raise ValueError(f"{n_hyp} hypotheses exceed the oracle limit of {ORACLE_MAX_HYPOTHESES}")
    if y.r_i.ndim != 2:
        raise ValueError("the oracle takes one received block at a time")

    best, best_metric = 0, np.inf
    chunk = 4096
    for start in range(0, n_hyp, chunk):
        hyp = np.arange(start, min(start + chunk, n_hyp))
        cand = CimSymbol(hyp % order, hyp // (order * n_codes), (hyp // order) % n_codes)
        s = spread(cand, codebook, constellation)
        hs = h[None, :, None]
        metric = (np.sum(np.abs(y.r_i - hs * s.real[:, None, :]) ** 2, axis=(1, 2))
                  + np.sum(np.abs(y.r_q - hs * s.imag[:, None, :]) ** 2, axis=(1, 2)))
        k = int(np.argmin(metric))
        if metric[k] < best_metric:
            best, best_metric = int(hyp[k]), metric[k]
    return CimSymbol(best % order, best // (order * n_codes), (best // order) % n_codes)
