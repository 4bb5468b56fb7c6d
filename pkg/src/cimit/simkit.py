"""Monte Carlo BER sweeps and image transmission experiments.

Each SNR point is simulated as a sequence of trials (fixed-size symbol
batches).  Trial ``t`` of point ``i`` draws from a generator seeded with
``SeedSequence([master_seed, i, t])``, and trials are reduced strictly in
order, so the result does not depend on how many workers ran them.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .baselines import baseline_link
from .channel import apply_channel, draw_channel
from .codebook import build_codebook, build_constellation, is_power_of_two
from .imaging import bits_to_pixels, pad_bits, pixels_to_bits, psnr, unpad_bits
from .metrics import ber as bit_error_rate
from .metrics import throughput
from .modem import spectral_efficiency, split_bits, spread
from .receiver import receive

__all__ = [
    "SCHEMES",
    "LinkConfig",
    "SweepConfig",
    "SweepPoint",
    "SweepResult",
    "ImageLinkResult",
    "transmit_bits",
    "trial_rng",
    "run_ber_sweep",
    "run_image_link",
    "CSV_HEADER",
]

SCHEMES = ("CIM", "QAM", "PSK")
CSV_HEADER = ("snr_db", "bits", "errors", "ber", "throughput")


@dataclass(frozen=True)
class LinkConfig:
    scheme: str
    order: int
    n_r: int = 1
    n_w: int = 0
    chip_len: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", self.scheme.upper())
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not is_power_of_two(self.order) or self.order < 2:
            raise ValueError(f"order must be a power of two >= 2, got {self.order}")
        if self.n_r < 1:
            raise ValueError(f"n_r must be >= 1, got {self.n_r}")
        if self.scheme == "CIM":
            if self.chip_len is None:
                raise ValueError("CIM needs a chip length")
            if not is_power_of_two(self.chip_len) or (1 << self.n_w) > self.chip_len:
                raise ValueError(
                    f"need a power-of-two chip length >= 2**n_w, got L={self.chip_len}, n_w={self.n_w}")
            if self.order == 2 and self.n_w > 0:
                # a real constellation leaves the quadrature branch empty
                raise ValueError("CIM with code index bits needs M >= 4")

    @property
    def eta(self) -> int:
        if self.scheme == "CIM":
            return spectral_efficiency(self.n_w, self.order)
        return self.order.bit_length() - 1

    def describe(self) -> str:
        if self.scheme == "CIM":
            return f"CIM M={self.order} n_w={self.n_w} L={self.chip_len} n_r={self.n_r}"
        return f"{self.order}-{self.scheme} n_r={self.n_r}"


def transmit_bits(link: LinkConfig, bits: np.ndarray, snr_db: float,
                  rng: np.random.Generator | None) -> np.ndarray:
    """Send ``(n_sym, eta)`` bit groups, one symbol and fading draw per group."""
    if link.scheme == "CIM":
        codebook = build_codebook(link.n_w, link.chip_len)
        const = build_constellation(link.order, "QAM")
        tx = spread(split_bits(bits, link.n_w, link.order), codebook, const)
        if rng is None:
            h = np.ones((bits.shape[0], link.n_r), dtype=complex)
        else:
            h = draw_channel(link.n_r, rng, size=bits.shape[0])
        y = apply_channel(tx, h, snr_db, rng)
        return receive(y, h, codebook, const)
    const = build_constellation(link.order, link.scheme)
    return baseline_link(bits, const, link.n_r, snr_db, rng)


@dataclass(frozen=True)
class SweepConfig:
    scheme: str
    order: int
    n_r: int = 1
    n_w: int = 0
    chip_len: int | None = None
    snr_points: Sequence[float] = (0.0,)
    min_bit_errors: int = 100
    max_bits: int = 10 ** 7
    master_seed: int = 0
    batch_symbols: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "snr_points", tuple(float(s) for s in self.snr_points))
        self.link  # validates the link parameters
        if not self.snr_points:
            raise ValueError("no SNR points given")
        if self.min_bit_errors < 1 or self.max_bits < 1 or self.batch_symbols < 1:
            raise ValueError("stop rule and batch size must be positive")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @property
    def link(self) -> LinkConfig:
        return LinkConfig(self.scheme, self.order, self.n_r, self.n_w, self.chip_len)


@dataclass(frozen=True)
class SweepPoint:
    snr_db: float
    bits: int
    errors: int
    ber: float
    throughput: float
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple

    @property
    def ber(self) -> np.ndarray:
        return np.array([p.ber for p in self.points])

    def to_csv(self, comment: str | None = None) -> str:
        buf = io.StringIO()
        if comment:
            buf.write(f"# {comment}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in self.points:
            writer.writerow([repr(p.snr_db), p.bits, p.errors, repr(p.ber), repr(p.throughput)])
        return buf.getvalue()


def trial_rng(master_seed: int, point: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, point, trial]))


def _run_trial(args) -> tuple[int, int]:
    link, snr_db, seed, point, trial, n_sym = args
    rng = trial_rng(seed, point, trial)
    bits = rng.integers(0, 2, size=(n_sym, link.eta), dtype=np.uint8)
    rx = transmit_bits(link, bits, snr_db, rng)
    return bits.size, int(np.count_nonzero(rx != bits))


def _sweep_point(cfg: SweepConfig, index: int, pool=None, workers: int = 1) -> SweepPoint:
    link = cfg.link
    snr = cfg.snr_points[index]
    total_sym = math.ceil(cfg.max_bits / link.eta)
    n_trials = math.ceil(total_sym / cfg.batch_symbols)

    def job(t):
        n_sym = min(cfg.batch_symbols, total_sym - t * cfg.batch_symbols)
        return (link, snr, cfg.master_seed, index, t, n_sym)

    start = time.perf_counter()
    bits = errors = 0
    t = 0
    round_size = 1 if pool is None else 2 * workers
    while t < n_trials:
        jobs = [job(k) for k in range(t, min(t + round_size, n_trials))]
        outcomes = map(_run_trial, jobs) if pool is None else pool.map(_run_trial, jobs)
        for nb, ne in outcomes:
            bits += nb
            errors += ne
            t += 1
            if errors >= cfg.min_bit_errors:
                break
        if errors >= cfg.min_bit_errors:
            break
    rate = errors / bits
    return SweepPoint(snr, bits, errors, rate, throughput(rate, link.eta, 1.0),
                      time.perf_counter() - start)


def run_ber_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Simulate every SNR point until ``min_bit_errors`` errors or ``max_bits`` bits."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1:
        points = tuple(_sweep_point(config, i) for i in range(len(config.snr_points)))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = tuple(_sweep_point(config, i, pool, workers)
                           for i in range(len(config.snr_points)))
    return SweepResult(config, points)


@dataclass(frozen=True)
class ImageLinkResult:
    received: np.ndarray
    ber: float
    psnr: float


def run_image_link(image: np.ndarray, link: LinkConfig, snr_db: float, seed: int = 0,
                   batch_symbols: int = 4096) -> ImageLinkResult:
    """Transmit an 8-bit image over the link and rebuild it from the detected bits."""
    image = np.asarray(image, dtype=np.uint8)
    tx_bits = pixels_to_bits(image)
    padded, pad = pad_bits(tx_bits, link.eta)
    groups = padded.reshape(-1, link.eta)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    rx = np.concatenate([
        transmit_bits(link, groups[k:k + batch_symbols], snr_db, rng)
        for k in range(0, groups.shape[0], batch_symbols)
    ])
    rx_bits = unpad_bits(rx.ravel(), pad)
    height, width = image.shape
    received = bits_to_pixels(rx_bits, width, height)
    return ImageLinkResult(received, bit_error_rate(tx_bits, rx_bits), psnr(image, received))
