"""Discrete-time Hawkes process with a log-Gaussian Cox background.

Simulation, blocked MALA inference with O(N) analytic gradients, and
residual / attribution diagnostics.
"""
from ._accel import backend
from .diagnostics import FitSummary, ResidualReport, interevent_hist, residuals, summarize
from .mala import ChainSamples, McmcConfig, init_state, mala_block_step, run_chain
from .model import (
    CountSeries,
    IntensityDecomposition,
    ModelParams,
    hawkes_fraction,
    intensity,
    intensity_param_grads,
    to_continuous,
)
from .posterior import PriorSpec, State, grad_params, grad_x, log_post
from .simulate import SimConfig, SimOutput, simulate, simulate_counts, simulate_latent

__all__ = [
    "ChainSamples", "CountSeries", "FitSummary", "IntensityDecomposition", "McmcConfig",
    "ModelParams", "PriorSpec", "ResidualReport", "SimConfig", "SimOutput", "State",
    "backend", "grad_params", "grad_x", "hawkes_fraction", "init_state", "intensity",
    "intensity_param_grads", "interevent_hist", "log_post", "mala_block_step", "residuals",
    "run_chain", "simulate", "simulate_counts", "simulate_latent", "summarize", "to_continuous",
]
__version__ = "0.1.0"
