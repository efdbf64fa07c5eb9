"""Seeded simulator for joint receiver training and RIS phase optimization.

The heavy lifting happens in the compiled extension; this package simply
re-exports its surface. Determinism contract: every routine that consumes
randomness takes either an explicit ``RngStream`` or a ``(seed, stream_id)``
pair, and equal inputs give bit-equal outputs.
"""

from ._risbo import (
    AcquisitionSearch,
    BitErrorCount,
    Channel,
    Config,
    ConfigError,
    Constellation,
    DetectionErrors,
    DetectionResult,
    ExhaustionError,
    FitFailureError,
    GpDataset,
    GpModel,
    InvalidStateError,
    NoiseModel,
    PhaseConfig,
    PosteriorPrediction,
    RealSystem,
    Receiver,
    RngStream,
    StreamId,
    SymbolBlock,
    TrainConfig,
    __version__,
    constellation,
    count_bit_errors,
    detect,
    draw_channel,
    effective_matrix,
    evaluate_errors,
    evaluate_map_ber,
    expected_improvement,
    experiment_bo_vs_random,
    experiment_fixed_vs_optimized,
    fit_gp,
    map_oracle_detect_block,
    propose_next,
    quantize_phases,
    random_symbols,
    run_joint,
    run_random_baseline,
    se_kernel,
    snr_sweep,
    to_real_system,
    train_receiver,
    transmit,
)

__all__ = [
    "AcquisitionSearch",
    "BitErrorCount",
    "Channel",
    "Config",
    "ConfigError",
    "Constellation",
    "DetectionErrors",
    "DetectionResult",
    "ExhaustionError",
    "FitFailureError",
    "GpDataset",
    "GpModel",
    "InvalidStateError",
    "NoiseModel",
    "PhaseConfig",
    "PosteriorPrediction",
    "RealSystem",
    "Receiver",
    "RngStream",
    "StreamId",
    "SymbolBlock",
    "TrainConfig",
    "__version__",
    "constellation",
    "count_bit_errors",
    "detect",
    "draw_channel",
    "effective_matrix",
    "evaluate_errors",
    "evaluate_map_ber",
    "expected_improvement",
    "experiment_bo_vs_random",
    "experiment_fixed_vs_optimized",
    "fit_gp",
    "map_oracle_detect_block",
    "propose_next",
    "quantize_phases",
    "random_symbols",
    "run_joint",
    "run_random_baseline",
    "se_kernel",
    "snr_sweep",
    "to_real_system",
    "train_receiver",
    "transmit",
]
