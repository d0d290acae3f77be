"""Hybrid-beamforming spatial-modulation link simulation."""

from ._hbfsm import (
    __version__,
    beamsteering_codebook,
    chordal_distance_sq,
    constellation,
    estimate_beta,
    generate_channel,
    run_ber,
    run_quantization,
    run_rate,
    select_beamformer,
    sm_map,
    steering_vector,
)

__all__ = [
    "__version__",
    "beamsteering_codebook",
    "chordal_distance_sq",
    "constellation",
    "estimate_beta",
    "generate_channel",
    "run_ber",
    "run_quantization",
    "run_rate",
    "select_beamformer",
    "sm_map",
    "steering_vector",
]
