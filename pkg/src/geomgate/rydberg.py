"""Three-step two-atom gate with detuned, interaction-shifted Raman coupling.

Basis order of the 9-level space is (00, 01, 0R, 10, 11, 1R, R0, R1, RR),
i.e. ``kron(control, target)`` with single-atom levels (0, 1, R).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import (Dissipators, PiecewiseHamiltonian, lindblad_superoperator,
                       apply_superoperator, propagate_unitary)
from .gates import phase_insensitive_distance
from .pulses import NngqcFamily, synth_nngqc
from .quantum import adjoint, check_density, tensor

LEVELS = 3
G0, G1, RYD = 0, 1, 2
COMPUTATIONAL = (0, 1, 3, 4)
BASIS_LABELS = ("00", "01", "0R", "10", "11", "1R", "R0", "R1", "RR")


class EffectiveModelWarning(UserWarning):
    """Omega/Delta too large for second-order elimination."""


class ProtocolFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RydbergParams:
    """Drive and interaction strengths, all in rad/s.

    ``c6`` (rad/s * um^6) and ``r`` (um) are optional provenance for ``v``.
    """

    omega1: float
    omega_t: float
    delta: float
    v: float
    c6: float | None = None
    r: float | None = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be > 0")
        if self.v < 0:
            raise ValueError("v must be >= 0")
        if self.omega1 < 0 or self.omega_t < 0:
            raise ValueError("Rabi frequencies must be >= 0")
        if (self.c6 is None) != (self.r is None):
            raise ValueError("give both c6 and r or neither")
        if self.c6 is not None and abs(self.c6 / self.r ** 6 - self.v) > 1e-9 * abs(self.v):
            raise ValueError("v does not equal c6 / r^6")

    @classmethod
    def reference(cls, omega0: float = 2 * np.pi * 10e6, ratio: float = 17.0) -> "RydbergParams":
        return cls(omega1=omega0, omega_t=omega0, delta=ratio * omega0, v=ratio * omega0)

    @classmethod
    def from_c6(cls, omega1: float, omega_t: float, delta: float, c6: float, r: float):
        return cls(omega1, omega_t, delta, c6 / r ** 6, c6, r)


def _single(op_c=None, op_t=None) -> np.ndarray:
    eye = np.eye(LEVELS)
    return tensor(eye if op_c is None else op_c, eye if op_t is None else op_t)


def _transition(lower: int, upper: int) -> np.ndarray:
    op = np.zeros((LEVELS, LEVELS), complex)
    op[lower, upper] = 1.0
    return op


def step1_hamiltonian(p: RydbergParams, phi1: float = 0.0) -> np.ndarray:
    """Control-atom resonant ``|1> <-> |R>`` drive."""
    hc = 0.5 * p.omega1 * np.exp(1j * phi1) * _transition(G1, RYD)
    hc = hc + adjoint(hc)
    return _single(op_c=hc)


def step2_hamiltonian(p: RydbergParams, phi_s: float, phi_p: float,
                      omega_s: float | None = None, omega_p: float | None = None) -> np.ndarray:
    """Detuned two-tone target drive plus the ``|RR>`` interaction shift."""
    omega_s = p.omega_t if omega_s is None else omega_s
    omega_p = p.omega_t if omega_p is None else omega_p
    coupling = 0.5 * (omega_s * np.exp(1j * phi_s) * _transition(G0, RYD)
                      + omega_p * np.exp(1j * phi_p) * _transition(G1, RYD))
    ht = coupling + adjoint(coupling)
    ht[RYD, RYD] = p.delta
    h = _single(op_t=ht)
    rr = LEVELS * RYD + RYD
    h[rr, rr] += p.v
    return h


def effective_rabi(p: RydbergParams, omega_s: float | None = None,
                   omega_p: float | None = None) -> tuple[float, float]:
    """Second-order Raman Rabi magnitudes with the control in ``|0>`` and in ``|R>``."""
    omega_s = p.omega_t if omega_s is None else omega_s
    omega_p = p.omega_t if omega_p is None else omega_p
    if abs(omega_s - omega_p) > 1e-12 * max(omega_s, omega_p, 1.0):
        raise ValueError("effective model needs |Omega_S| = |Omega_P|")
    prod = omega_s * omega_p
    return prod / (2 * p.delta), prod / (2 * (p.delta + p.v))


def effective_hamiltonian(p: RydbergParams, phi_s: float, phi_p: float,
                          control_excited: bool = False, stark: bool = True) -> np.ndarray:
    """Second-order target-qubit Hamiltonian on ``{|0>, |1>}``.

    ``-|w><w| / D`` with ``w = (Omega_S e^{i phi_S}, Omega_P e^{i phi_P}) / 2``
    and ``D = Delta`` (or ``Delta + V`` with the control in ``|R>``).
    Without ``stark`` only the off-diagonal coupling is kept.
    """
    w = 0.5 * p.omega_t * np.array([np.exp(1j * phi_s), np.exp(1j * phi_p)])
    h = -np.outer(w, w.conj()) / (p.delta + (p.v if control_excited else 0.0))
    if not stark:
        h = h - np.diag(np.diag(h))
    return h


@dataclass(frozen=True)
class Step2Pulse:
    """Constant-amplitude target drive: rows of ``(duration, phi_S, phi_P)``."""

    segments: tuple[tuple[float, float, float], ...]

    @property
    def duration(self) -> float:
        return float(sum(s[0] for s in self.segments))


def step2_family(p: RydbergParams, area: float, chi0: float, phi0: float, phi1: float) -> NngqcFamily:
    """Step-function family on the effective Rabi scale of the control-|0> block."""
    omega_eff = effective_rabi(p)[0]
    return NngqcFamily(omega_eff, chi0, phi0, phi1, area / omega_eff)


def reference_step2_family(p: RydbergParams) -> NngqcFamily:
    """Family giving the target two-qubit gate: area 3 pi, chi0 = pi, phi0 = 0, phi1 = pi/2."""
    return step2_family(p, 3 * np.pi, np.pi, 0.0, np.pi / 2)


def synth_step2_pulse(p: RydbergParams, f: NngqcFamily) -> Step2Pulse:
    """Map an effective-scale family onto the two target tones.

    ``phi_S`` is held at 0 and ``phi_P = phi_eff + pi``; the pi accounts for
    the negative sign of the second-order coupling.
    """
    omega_eff = effective_rabi(p)[0]
    if abs(f.omega0 - omega_eff) > 1e-9 * omega_eff:
        raise ValueError(f"family omega0={f.omega0} is not the effective Rabi {omega_eff}")
    if p.omega_t / p.delta > 0.2:
        warnings.warn(f"Omega/Delta = {p.omega_t / p.delta:.3g} > 0.2: effective model unreliable",
                      EffectiveModelWarning, stacklevel=2)
    if f.tau == 0:
        return Step2Pulse(())
    sched = synth_nngqc(f)
    return Step2Pulse(tuple((s.duration, 0.0, s.phase + np.pi) for s in sched.segments))


def step2_block_propagators(p: RydbergParams, step2: Step2Pulse) -> tuple[np.ndarray, np.ndarray]:
    """Step-(ii) propagators on ``{00, 01}``: full 9-level block and effective model."""
    full = propagate_unitary(PiecewiseHamiltonian(
        tuple((d, step2_hamiltonian(p, ps, pp)) for d, ps, pp in step2.segments), LEVELS * LEVELS))
    eff = propagate_unitary(PiecewiseHamiltonian(
        tuple((d, effective_hamiltonian(p, ps, pp)) for d, ps, pp in step2.segments), 2))
    return full[:2, :2], eff


def effective_model_deviation(p: RydbergParams, step2: Step2Pulse) -> float:
    """Phase-insensitive distance between the two propagators of :func:`step2_block_propagators`."""
    full, eff = step2_block_propagators(p, step2)
    return phase_insensitive_distance(full, eff)


def protocol_hamiltonian(p: RydbergParams, step2: Step2Pulse) -> PiecewiseHamiltonian:
    t1 = np.pi / p.omega1 if p.omega1 > 0 else 0.0
    segs = [(t1, step1_hamiltonian(p, 0.0))]
    segs += [(d, step2_hamiltonian(p, ps, pp)) for d, ps, pp in step2.segments]
    segs.append((t1, step1_hamiltonian(p, np.pi)))
    return PiecewiseHamiltonian(tuple(segs), LEVELS * LEVELS)


@dataclass(frozen=True)
class ProtocolResult:
    gate: np.ndarray        # projected 4x4 block
    full: np.ndarray        # 9x9 propagator
    leakage: float


def run_protocol(p: RydbergParams, step2: Step2Pulse, max_leakage: float = 0.05) -> ProtocolResult:
    """Full 9-level propagation of steps (i)-(iii), projected to the qubit space."""
    full = propagate_unitary(protocol_hamiltonian(p, step2))
    idx = np.array(COMPUTATIONAL)
    gate = full[np.ix_(idx, idx)]
    kept = np.sum(np.abs(gate) ** 2, axis=0)
    leakage = float(1.0 - kept.min())
    if leakage > max_leakage:
        raise ProtocolFailure(f"leakage {leakage:.3g} exceeds {max_leakage}")
    return ProtocolResult(gate, full, leakage)


def embed_state(psi4) -> np.ndarray:
    """Lift a computational two-qubit vector into the 9-level space."""
    out = np.zeros(LEVELS * LEVELS, complex)
    out[list(COMPUTATIONAL)] = np.asarray(psi4, complex)
    return out


def embed_density(rho4) -> np.ndarray:
    out = np.zeros((LEVELS * LEVELS,) * 2, complex)
    idx = np.array(COMPUTATIONAL)
    out[np.ix_(idx, idx)] = rho4
    return out


def project_density(rho9) -> np.ndarray:
    idx = np.array(COMPUTATIONAL)
    return np.asarray(rho9)[np.ix_(idx, idx)]


def rydberg_dissipators(gamma1: float, gamma2: float, dephasing: str = "sigma_z") -> Dissipators:
    """Decay ``|R> -> |1>`` and ``(1, R)`` dephasing on both atoms."""
    return Dissipators(gamma1, gamma2, targets=((G1, RYD),), subsystem_dims=(LEVELS, LEVELS),
                       dephasing=dephasing)


def protocol_superoperator(p: RydbergParams, step2: Step2Pulse, d: Dissipators | None) -> np.ndarray:
    return lindblad_superoperator(protocol_hamiltonian(p, step2), d)


def protocol_with_decoherence(p: RydbergParams, step2: Step2Pulse, d: Dissipators | None,
                              rho0) -> np.ndarray:
    """Final 9-level density matrix projected onto the computational block.

    ``rho0`` may be 4x4 (embedded first) or 9x9. The result is not
    renormalized, so its trace is the population left in the qubit space.
    """
    rho0 = np.asarray(rho0, complex)
    if rho0.shape == (4, 4):
        check_density(rho0)
        rho0 = embed_density(rho0)
    check_density(rho0)
    sup = protocol_superoperator(p, step2, d)
    rho = apply_superoperator(sup, rho0)
    return project_density((rho + adjoint(rho)) / 2)


REFERENCE_INITIAL_STATE = np.array([0.5, 0.5, np.sqrt(2) / 2, 0.0], complex)
