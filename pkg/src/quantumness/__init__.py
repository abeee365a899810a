"""Anticommutator quantumness witness toolkit."""
__version__ = "0.1.0"

from .circuit import hadamard_test, moments, shift_trace, spectrum_from_powers, witness_power_traces
from .criticality import critical_p, extrapolate_n_required, fit_inverse_poly, sweep
from .kernels import BACKEND
from .states import DensityMatrix, mixed_family, pure_state, purity, von_neumann_entropy, purification_budget
from .witness import (
    Family,
    Pairing,
    anticommutator_witness,
    assess,
    build_witness,
    correlated_witness,
    correlating_unitaries,
    tensor_power_witness,
)

__all__ = [
    "BACKEND", "DensityMatrix", "Family", "Pairing", "anticommutator_witness", "assess",
    "build_witness", "correlated_witness", "correlating_unitaries", "critical_p",
    "extrapolate_n_required", "fit_inverse_poly", "hadamard_test", "mixed_family", "moments",
    "pure_state", "purification_budget", "purity", "shift_trace", "spectrum_from_powers", "sweep",
    "tensor_power_witness", "von_neumann_entropy", "witness_power_traces",
]
