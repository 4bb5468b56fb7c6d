"""Code index modulation (CIM) image-transmission link simulator."""

from .baselines import baseline_detect, baseline_link, baseline_modulate
from .channel import ReceivedBlock, apply_channel, draw_channel, noise_variance
from .codebook import (
    Constellation,
    SpreadingCodebook,
    build_codebook,
    build_constellation,
    hadamard,
)
from .metrics import ber, comparator_efficiency, energy_saving, throughput
from .modem import CimSymbol, spectral_efficiency, split_bits, spread
from .receiver import (
    CorrelatorBank,
    demap,
    despread,
    detect,
    detect_indices,
    detect_symbol,
    joint_ml_oracle,
    receive,
)
from .simkit import (
    LinkConfig,
    SweepConfig,
    SweepResult,
    run_ber_sweep,
    run_image_link,
)

__version__ = "0.1.0"
