"""Threshold-based sampling: integrate-and-fire and send-on-delta encoders,
Alexiewicz-norm analysis, reconstruction and sparse-regularization sweeps."""
from .signal import (EncoderConfig, EventTimePolicy, HybridSignal, Integral, PiecewiseLinear, Reset,
                     SpikeTrain, StepFunction, accumulate, alexiewicz_distance,
                     alexiewicz_norm_signal, alexiewicz_norm_spikes, l1_norm, quantize_trunc,
                     sup_distance, tv_norm)
from .encoders import if_encode, membrane_trace, sod_encode, sod_of_integral
from .reconstruct import (if_mod_reconstruct, if_sub_reconstruct, sod_pwl_reconstruct,
                          sod_step_reconstruct)
from .analysis import (check_quantization_bound, check_quasi_isometry, find_fixed_point,
                       if_regularization_sweep, regularization_sweep, sparsity_oracle,
                       threshold_sweep)

__version__ = "0.1.0"
