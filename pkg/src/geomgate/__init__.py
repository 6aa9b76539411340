"""Noncyclic geometric, cyclic geometric and dynamical gate simulation."""

from .gates import (BoundaryValues, ZxzAngles, controlled_pair, dg_primitive, dg_sequence,
                    extract_zxz, ideal_two_qubit_target, ngqc_gate, nngqc_gate,
                    phase_insensitive_distance, zxz_gate)
from .pulses import (NngqcFamily, PulseSchedule, PulseSegment, family_boundaries,
                     solve_control_fields, synth_dg, synth_ngqc, synth_nngqc)
from .dynamics import (CoherentError, Dissipators, PiecewiseHamiltonian, propagate_lindblad,
                       propagate_unitary, schedule_to_hamiltonian)
from .metrics import avg_gate_fidelity, state_fidelity, theta_avg_gate_fidelity

__version__ = "0.1.0"

__all__ = [
    "BoundaryValues", "ZxzAngles", "controlled_pair", "dg_primitive", "dg_sequence",
    "extract_zxz", "ideal_two_qubit_target", "ngqc_gate", "nngqc_gate",
    "phase_insensitive_distance", "zxz_gate", "NngqcFamily", "PulseSchedule", "PulseSegment",
    "family_boundaries", "solve_control_fields", "synth_dg", "synth_ngqc", "synth_nngqc",
    "CoherentError", "Dissipators", "PiecewiseHamiltonian", "propagate_lindblad",
    "propagate_unitary", "schedule_to_hamiltonian", "avg_gate_fidelity", "state_fidelity",
    "theta_avg_gate_fidelity",
]
