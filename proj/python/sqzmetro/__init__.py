"""Distributed phase estimation with a single squeezed vacuum probe."""

from ._core import (
    Error,
    SqueezeParameter,
    __version__,
    certified_cutoff,
    embed_weights_unitary,
    estimate_phase,
    expectation_O_exact,
    expectation_O_gaussian,
    haar_random_unitary,
    mach_zehnder_unitary,
    mz_factorization_residual,
    phase_moments,
    photon_moments,
    reck_decompose,
    recompose,
    sensitivity_heisenberg,
    simulate_shots,
    sweep_scaling,
)

__all__ = [
    "Error",
    "SqueezeParameter",
    "__version__",
    "certified_cutoff",
    "embed_weights_unitary",
    "estimate_phase",
    "expectation_O_exact",
    "expectation_O_gaussian",
    "haar_random_unitary",
    "mach_zehnder_unitary",
    "mz_factorization_residual",
    "phase_moments",
    "photon_moments",
    "reck_decompose",
    "recompose",
    "sensitivity_heisenberg",
    "simulate_shots",
    "sweep_scaling",
]
