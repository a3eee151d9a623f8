"""Constant-excitation stabilizer codes built from extended Hamming codes.

Construction, exhaustive verification, dense state-vector simulation, syndrome
lookup decoding under depolarizing plus collective-Z noise, and Monte Carlo
sweeps.  ``BACKEND`` names the shot kernel in use ("cython" or "python").
"""

from cehamming.codes import (
    CodeConstructionError,
    StabilizerCode,
    build_ce_code,
    canonical_code_8_1_3,
    derive_logical_operators,
    extended_hamming_checks,
    read_code_file,
    write_code_file,
)
from cehamming.experiment import (
    SweepConfig,
    code_rate,
    comparison_ratio,
    exhaustive_low_weight_analysis,
    monte_carlo_sweep,
    pseudo_threshold,
    threshold_bound,
)
from cehamming.kernels import BACKEND
from cehamming.noise import NoiseConfig, Ordering, build_lookup, pauli_syndrome, run_shot
from cehamming.pauli import PauliOperator, commutes, format_pauli, in_group, multiply, parse_pauli
from cehamming.statevec import encode_8_1_3, logical_state
from cehamming.verify import compute_distance, verify_code, verify_constant_excitation

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CodeConstructionError",
    "NoiseConfig",
    "Ordering",
    "PauliOperator",
    "StabilizerCode",
    "SweepConfig",
    "build_ce_code",
    "build_lookup",
    "canonical_code_8_1_3",
    "code_rate",
    "commutes",
    "comparison_ratio",
    "compute_distance",
    "derive_logical_operators",
    "encode_8_1_3",
    "exhaustive_low_weight_analysis",
    "extended_hamming_checks",
    "format_pauli",
    "in_group",
    "logical_state",
    "monte_carlo_sweep",
    "multiply",
    "parse_pauli",
    "pauli_syndrome",
    "pseudo_threshold",
    "read_code_file",
    "run_shot",
    "threshold_bound",
    "verify_code",
    "verify_constant_excitation",
    "write_code_file",
]
