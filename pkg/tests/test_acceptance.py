"""Exit criteria for the simulator, one test per criterion.

Each test records a PASS/FAIL line shown in the terminal summary.
"""

import itertools
import math

import numpy as np
import pytest

from cimit.channel import ReceivedBlock, apply_channel, draw_channel
from cimit.codebook import build_codebook, build_constellation
from cimit.imaging import (
    majority_filter,
    median_filter,
    morph_filter,
    mse,
    nlm_denoise,
    psnr,
    wavelet_denoise,
    wiener_local,
)
from cimit.metrics import comparator_efficiency, energy_saving
from cimit.modem import CimSymbol, spectral_efficiency, split_bits, spread
from cimit.receiver import demap, detect, joint_ml_oracle, receive
from cimit.simkit import LinkConfig, SweepConfig, run_ber_sweep, run_image_link

from .conftest import ACCEPTANCE_LINES, binary_test_image, checkerboard, salt_and_pepper

BER_FACTOR = 3.0
MIN_ERRORS = 500
MAX_BITS = 2_000_000


def record(number: int, title: str, failures: list[str], detail: str = "") -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    for f in failures:
        line += f"\n         - {f}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def _sweep(scheme, order, n_r, snr_points, n_w=0, chip_len=None, seed=2024):
    cfg = SweepConfig(scheme, order, n_r, n_w, chip_len, snr_points=snr_points,
                      min_bit_errors=MIN_ERRORS, max_bits=MAX_BITS, master_seed=seed)
    return run_ber_sweep(cfg, workers=1).points


def _within(measured: float, reported: float, factor: float = BER_FACTOR) -> bool:
    return reported / factor <= measured <= reported * factor


def _check_budget(points, failures, label):
    for p in points:
        if p.errors < 100 and p.bits < 1_000_000:
            failures.append(f"{label} @ {p.snr_db} dB: only {p.bits} bits / {p.errors} errors")


def test_criterion_1_closed_form():
    failures = []
    for (m, n_w), eta in {(4, 3): 8, (8, 4): 11, (32, 5): 15}.items():
        got = spectral_efficiency(n_w, m)
        if got != eta:
            failures.append(f"eta(M={m}, N_W={n_w}) = {got}, expected {eta}")
    panels = {(4, 2, 2): (50, 67, 67), (16, 8, 8): (65, 80, 80)}
    for (m, n_w, n_t), want in panels.items():
        eta = spectral_efficiency(n_w, m)
        got = tuple(round(energy_saving(comparator_efficiency(s, m, n_t), eta))
                    for s in ("SM", "QAM", "QPSK"))
        if got != want:
            failures.append(f"energy saving (M={m}, N_W={n_w}, N_T={n_t}) = {got}, expected {want}")
    record(1, "spectral efficiency and energy saving closed forms", failures)


def test_criterion_2_snr_sweep_ber():
    snrs = [10.0, 15.0, 20.0]
    cim = _sweep("CIM", 4, 4, snrs, n_w=3, chip_len=32)
    qam = _sweep("QAM", 256, 4, snrs)
    psk = _sweep("PSK", 256, 4, snrs)
    reported = {
        "CIM": (2.1e-2, 6.7e-4, None),
        "QAM": (1.2e-1, 5.7e-2, 1.3e-2),
        "PSK": (2.4e-1, 1.9e-1, 1.3e-1),
    }
    failures = []
    for name, pts in (("CIM", cim), ("QAM", qam), ("PSK", psk)):
        _check_budget(pts, failures, name)
        for p, want in zip(pts, reported[name]):
            if want is None:
                # reported as zero: must sit below the measurable floor
                if p.ber >= 1e-3:
                    failures.append(f"{name} @ {p.snr_db} dB: {p.ber:.2e}, reported 0")
            elif not _within(p.ber, want):
                failures.append(f"{name} @ {p.snr_db} dB: {p.ber:.2e} vs {want:.1e}")
    for c, q, k in zip(cim, qam, psk):
        if not c.ber < q.ber < k.ber:
            failures.append(f"ordering at {c.snr_db} dB: {c.ber:.2e}, {q.ber:.2e}, {k.ber:.2e}")
    detail = "; ".join(f"{n}=" + "/".join(f"{p.ber:.2e}" for p in pts)
                       for n, pts in (("CIM", cim), ("QAM", qam), ("PSK", psk)))
    record(2, "eta=8, n_r=4 SNR sweep BER within x/3 and CIM < QAM < PSK", failures, detail)


def test_criterion_3_antenna_sweep_ber():
    antennas = (1, 5, 10)
    reported = {
        "CIM": (1.3e-1, 6.3e-3, 4.0e-4),
        "QAM": (1.6e-1, 3.5e-2, 8.8e-3),
        "PSK": (2.6e-1, 1.6e-1, 1.3e-1),
    }
    measured = {name: [] for name in reported}
    failures = []
    for n_r in antennas:
        for name, pts in (("CIM", _sweep("CIM", 16, n_r, [16.0], n_w=2, chip_len=64)),
                          ("QAM", _sweep("QAM", 256, n_r, [16.0])),
                          ("PSK", _sweep("PSK", 256, n_r, [16.0]))):
            _check_budget(pts, failures, f"{name} n_r={n_r}")
            measured[name].append(pts[0].ber)
    for name, bers in measured.items():
        for n_r, got, want in zip(antennas, bers, reported[name]):
            if not _within(got, want):
                failures.append(f"{name} n_r={n_r}: {got:.2e} vs {want:.1e}")
        if not all(a > b for a, b in zip(bers, bers[1:])):
            failures.append(f"{name} not improving with n_r: {bers}")
    for k, n_r in enumerate(antennas):
        if not measured["CIM"][k] < measured["QAM"][k] < measured["PSK"][k]:
            failures.append(f"ordering at n_r={n_r}")
    detail = "; ".join(f"{n}=" + "/".join(f"{b:.2e}" for b in v) for n, v in measured.items())
    record(3, "eta=8, 16 dB antenna sweep BER within x/3, ordering, monotone in n_r", failures, detail)


def test_criterion_4_properties():
    failures = []
    rng = np.random.default_rng(4)

    for chip_len in [2 ** k for k in range(9)]:
        for n_w in range(chip_len.bit_length()):
            Z = build_codebook(n_w, chip_len).codes
            err = np.max(np.abs(Z @ Z.T - np.eye(Z.shape[0])))
            if err >= 1e-12:
                failures.append(f"codebook (N_W={n_w}, L={chip_len}) off by {err:.1e}")

    checked = 0
    for n_w in range(0, 6):
        for order in (4, 16, 64, 256, 1024):
            eta = spectral_efficiency(n_w, order)
            if eta > 12:
                continue
            groups = np.array(list(itertools.product((0, 1), repeat=eta)), dtype=np.uint8)
            if not np.array_equal(demap(split_bits(groups, n_w, order), n_w, order), groups):
                failures.append(f"demap(split) identity fails for N_W={n_w}, M={order}")
            cb = build_codebook(n_w, max(1 << n_w, 4))
            const = build_constellation(order, "QAM")
            h = draw_channel(3, rng, size=len(groups))
            y = apply_channel(spread(split_bits(groups, n_w, order), cb, const), h, float("inf"))
            if not np.array_equal(receive(y, h, cb, const), groups):
                failures.append(f"noiseless end-to-end fails for N_W={n_w}, M={order}")
            checked += 1

    cb = build_codebook(2, 16)
    const = build_constellation(4, "QAM")
    n = 10_000
    sym = CimSymbol(rng.integers(4, size=n), rng.integers(4, size=n), rng.integers(4, size=n))
    h = draw_channel(2, rng, size=n)
    y = apply_channel(spread(sym, cb, const), h, 5.0, rng)
    two = detect(y, h, cb, const)
    ml = [joint_ml_oracle(ReceivedBlock(y.r_i[t], y.r_q[t]), h[t], cb, const) for t in range(n)]
    ml = CimSymbol(*(np.array(v) for v in zip(*ml)))

    def wrong(s):
        return (s.sym_idx != sym.sym_idx) | (s.c_re != sym.c_re) | (s.c_im != sym.c_im)

    e_two, e_ml = wrong(two), wrong(ml)
    only_ml, only_two = int(np.sum(e_ml & ~e_two)), int(np.sum(e_two & ~e_ml))
    if only_ml - only_two > 1.645 * math.sqrt(max(only_ml + only_two, 1)):
        failures.append(f"two-stage beats oracle: {e_two.mean():.4f} vs {e_ml.mean():.4f}")

    cfg = SweepConfig("CIM", 16, 2, 2, 16, snr_points=[3.0, 9.0], min_bit_errors=2000,
                      max_bits=200_000, master_seed=99, batch_symbols=500)
    if run_ber_sweep(cfg, workers=1).points != run_ber_sweep(cfg, workers=4).points:
        failures.append("sweep differs between 1 and 4 workers")

    detail = (f"{checked} exhaustive configs; symbol error two-stage {e_two.mean():.4f} "
              f">= oracle {e_ml.mean():.4f}")
    record(4, "property suite", failures, detail)


SIX_FILTERS = {
    "median": median_filter,
    "majority": majority_filter,
    "morph": morph_filter,
    "wiener": wiener_local,
    "wavelet": wavelet_denoise,
    "nlm": nlm_denoise,
}


def test_criterion_5_filters():
    failures = []
    rng = np.random.default_rng(5)
    for value in (0, 100, 255):
        img = np.full((32, 40), value, np.uint8)
        for name, f in SIX_FILTERS.items():
            if not np.array_equal(f(img), img):
                failures.append(f"{name} moves constant image {value}")

    from cimit.imaging import dilate, erode, opening
    probe = rng.integers(0, 256, (40, 40)).astype(np.uint8)
    if not np.array_equal(opening(opening(probe)), opening(probe)):
        failures.append("opening is not idempotent")
    if not np.array_equal(dilate(255 - probe), 255 - erode(probe)):
        failures.append("erosion/dilation duality fails")

    pattern = checkerboard(64, 16)
    noisy = salt_and_pepper(pattern, 0.05, rng)
    rates = {}
    for name in ("median", "majority"):
        rates[name] = float(np.mean(SIX_FILTERS[name](noisy) != pattern))
        if rates[name] >= 0.01:
            failures.append(f"{name} leaves pixel error rate {rates[name]:.4f}")

    clean = np.full((64, 64), 128, np.uint8)
    gauss = np.clip(np.rint(128 + 20 * rng.standard_normal(clean.shape)), 0, 255).astype(np.uint8)
    base = mse(gauss, clean)
    reductions = {}
    for name in ("wiener", "wavelet", "nlm"):
        reductions[name] = 1 - mse(SIX_FILTERS[name](gauss), clean) / base
        if reductions[name] < 0.30:
            failures.append(f"{name} reduces MSE by only {reductions[name]:.1%}")

    detail = ", ".join(f"{k} err {v:.4f}" for k, v in rates.items()) + ", " + \
        ", ".join(f"{k} -{v:.0%} MSE" for k, v in reductions.items())
    record(5, "filter suite", failures, detail)


def test_criterion_6_image_link():
    img = binary_test_image(128)
    res = run_image_link(img, LinkConfig("CIM", 4, 2, 3, 16), 20.0, seed=10)
    failures = []
    gains = {}
    for name in ("median", "majority", "morph", "wiener", "nlm"):
        gains[name] = psnr(img, SIX_FILTERS[name](res.received)) - res.psnr
        if not gains[name] > 0:
            failures.append(f"{name} does not raise PSNR ({gains[name]:+.2f} dB)")
    detail = f"BER {res.ber:.2e}, noisy PSNR {res.psnr:.2f} dB; " + \
        ", ".join(f"{k} {v:+.2f} dB" for k, v in gains.items())
    record(6, "enhancement filters improve the received image", failures, detail)
