"""Time-ordered closed- and open-system propagation.

Constant segments use exact exponentials (``eigh`` for Hamiltonians,
``scipy.linalg.expm`` for Liouvillians). Time-dependent segments use a
fourth-order Magnus step with step doubling until two successive
refinements agree to ``tol``.

Density matrices are vectorized row-major, so ``vec(A rho B) = (A kron B^T) vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.linalg import expm

from .pulses import PulseSchedule
from .quantum import SX, SY, SZ, adjoint, check_density, hermiticity_defect

Generator = Union[np.ndarray, Callable[[float], np.ndarray]]

UNITARY_TOL = 1e-10
LINDBLAD_TOL = 1e-8
MAX_DOUBLINGS = 14


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PiecewiseHamiltonian:
    """Ordered ``(duration, generator)`` pairs.

    A generator is either a constant Hermitian matrix or a callable of the
    time measured from the start of its segment.
    """

    segments: tuple[tuple[float, Generator], ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        for k, (dur, gen) in enumerate(self.segments):
            if dur < 0:
                raise ValueError(f"segment {k}: negative duration")
            probe = gen if not callable(gen) else gen(0.0)
            probe = np.asarray(probe)
            if probe.shape != (self.dim, self.dim):
                raise ValueError(f"segment {k}: generator shape {probe.shape} != dim {self.dim}")
            if hermiticity_defect(probe) > 1e-12 * max(1.0, np.abs(probe).max()):
                raise ValueError(f"segment {k}: generator is not Hermitian")

    @property
    def duration(self) -> float:
        return float(sum(d for d, _ in self.segments))

    def then(self, other: "PiecewiseHamiltonian") -> "PiecewiseHamiltonian":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return PiecewiseHamiltonian(self.segments + other.segments, self.dim)


@dataclass(frozen=True)
class CoherentError:
    """Rabi-amplitude fraction ``zeta`` and static detuning ``delta * omega_ref * sigma_z``."""

    zeta: float = 0.0
    delta: float = 0.0
    omega_ref: float = 0.0


def drive_hamiltonian(rabi: float, phase: float, err: CoherentError | None = None) -> np.ndarray:
    err = err or CoherentError()
    h = (1 + err.zeta) * rabi / 2 * (np.cos(phase) * SX + np.sin(phase) * SY)
    return h + err.delta * err.omega_ref * SZ


def schedule_to_hamiltonian(s: PulseSchedule, err: CoherentError | None = None) -> PiecewiseHamiltonian:
    segs = tuple((g.duration, drive_hamiltonian(g.rabi, g.phase, err)) for g in s.segments)
    return PiecewiseHamiltonian(segs, 2)


# -- dissipators ----------------------------------------------------------

@dataclass(frozen=True)
class Dissipators:
    """Amplitude damping and pure dephasing on chosen level pairs.

    Parameters
    ----------
    gamma1, gamma2 : float
        Decay and dephasing rates in 1/s.
    targets : tuple of (lower, upper)
        Level pairs inside one subsystem.
    subsystem_dims : tuple of int, optional
        When given, the targets are applied to every subsystem of a tensor
        product space with these dimensions.
    dephasing : {"sigma_z", "projector"}
        ``sigma_z`` uses ``sqrt(gamma2/2)(|u><u| - |l><l|)`` (coherence decays
        as ``exp(-gamma2 t)``); ``projector`` uses ``sqrt(gamma2)|u><u|``
        (coherence decays as ``exp(-gamma2 t / 2)``).
    """

    gamma1: float = 0.0
    gamma2: float = 0.0
    targets: tuple[tuple[int, int], ...] = ((0, 1),)
    subsystem_dims: tuple[int, ...] | None = None
    dephasing: str = "sigma_z"

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("rates must be >= 0")
        if self.dephasing not in ("sigma_z", "projector"):
            raise ValueError(f"unknown dephasing convention {self.dephasing!r}")
        object.__setattr__(self, "targets", tuple(tuple(t) for t in self.targets))

    def operators(self, dim: int) -> list[np.ndarray]:
        dims = self.subsystem_dims or (dim,)
        if int(np.prod(dims)) != dim:
            raise ValueError(f"subsystem dims {dims} do not match dim {dim}")
        out = []
        for k, d in enumerate(dims):
            for lower, upper in self.targets:
                if not (0 <= lower < d and 0 <= upper < d and lower != upper):
                    raise ValueError(f"invalid target pair {(lower, upper)} for dimension {d}")
                local = []
                if self.gamma1 > 0:
                    op = np.zeros((d, d), complex)
                    op[lower, upper] = np.sqrt(self.gamma1)
                    local.append(op)
                if self.gamma2 > 0:
                    op = np.zeros((d, d), complex)
                    if self.dephasing == "sigma_z":
                        op[upper, upper] = np.sqrt(self.gamma2 / 2)
                        op[lower, lower] = -np.sqrt(self.gamma2 / 2)
                    else:
                        op[upper, upper] = np.sqrt(self.gamma2)
                    local.append(op)
                for op in local:
                    full = np.eye(1, dtype=complex)
                    for j, dj in enumerate(dims):
                        full = np.kron(full, op if j == k else np.eye(dj))
                    out.append(full)
        return out


def liouvillian(h: np.ndarray, jumps: Sequence[np.ndarray] = ()) -> np.ndarray:
    """Row-major superoperator of ``-i[H, .] + sum_k D[L_k]``."""
    n = h.shape[0]
    eye = np.eye(n)
    sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op in jumps:
        ld = adjoint(op) @ op
        sup += np.kron(op, op.conj()) - 0.5 * np.kron(ld, eye) - 0.5 * np.kron(eye, ld.T)
    return sup


# -- propagation ------------------------------------------------------------

def _expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ adjoint(v)


def _magnus4(gen: Callable[[float], np.ndarray], duration: float, steps: int) -> np.ndarray:
    """Fourth-order Magnus propagator of ``x' = gen(t) x``."""
    h = duration / steps
    c1, c2 = 0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6
    out = None
    for k in range(steps):
        t0 = k * h
        a1, a2 = gen(t0 + c1 * h), gen(t0 + c2 * h)
        omega = 0.5 * h * (a1 + a2) + (np.sqrt(3) / 12) * h * h * (a2 @ a1 - a1 @ a2)
        step = expm(omega)
        out = step if out is None else step @ out
    return out


def _refine(gen: Callable[[float], np.ndarray], duration: float, tol: float) -> np.ndarray:
    steps = 8
    prev = _magnus4(gen, duration, steps)
    for _ in range(MAX_DOUBLINGS):
        steps *= 2
        cur = _magnus4(gen, duration, steps)
        if np.max(np.abs(cur - prev)) < tol:
            return cur
        prev = cur
    raise ConvergenceError(f"no convergence to tol={tol} after {steps} Magnus steps")


def segment_propagator(duration: float, gen: Generator, tol: float = UNITARY_TOL) -> np.ndarray:
    if not callable(gen):
        return _expm_hermitian(np.asarray(gen, complex), duration)
    return _refine(lambda t: -1j * np.asarray(gen(t), complex), duration, tol)


def propagate_unitary(h: PiecewiseHamiltonian, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.eye(h.dim, dtype=complex)
    for dur, gen in h.segments:
        if dur > 0:
            u = segment_propagator(dur, gen, tol) @ u
    return u


def segment_superoperator(duration: float, gen: Generator, jumps: Sequence[np.ndarray],
                          tol: float = LINDBLAD_TOL) -> np.ndarray:
    if not callable(gen):
        return expm(liouvillian(np.asarray(gen, complex), jumps) * duration)
    jumps = list(jumps)
    return _refine(lambda t: liouvillian(np.asarray(gen(t), complex), jumps), duration, tol)


def lindblad_superoperator(h: PiecewiseHamiltonian, d: Dissipators | None = None,
                           tol: float = LINDBLAD_TOL) -> np.ndarray:
    """Propagator of ``vec(rho)`` over the whole piecewise Hamiltonian."""
    jumps = d.operators(h.dim) if d is not None else []
    n = h.dim * h.dim
    sup = np.eye(n, dtype=complex)
    for dur, gen in h.segments:
        if dur > 0:
            sup = segment_superoperator(dur, gen, jumps, tol) @ sup
    return sup


def apply_superoperator(sup: np.ndarray, rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0]
    return (sup @ np.asarray(rho, complex).reshape(-1)).reshape(n, n)


def propagate_lindblad(h: PiecewiseHamiltonian, d: Dissipators | None, rho0: np.ndarray,
                       tol: float = LINDBLAD_TOL) -> np.ndarray:
    rho0 = np.asarray(rho0, complex)
    if rho0.shape != (h.dim, h.dim):
        raise ValueError(f"rho0 shape {rho0.shape} does not match dim {h.dim}")
    check_density(rho0)
    rho = apply_superoperator(lindblad_superoperator(h, d, tol), rho0)
    return (rho + adjoint(rho)) / 2


def superoperator_series(h: PiecewiseHamiltonian, d: Dissipators | None,
                         samples_per_segment: int = 50) -> tuple[np.ndarray, list[np.ndarray]]:
    """Cumulative superoperators on a uniform sub-grid of every constant segment.

    Returns ``(times, sups)``; the first entry is ``(0, identity)``.
    """
    jumps = d.operators(h.dim) if d is not None else []
    sup = np.eye(h.dim * h.dim, dtype=complex)
    times, sups, t = [0.0], [sup], 0.0
    for dur, gen in h.segments:
        if dur <= 0:
            continue
        if callable(gen):
            raise TypeError("superoperator_series needs constant segments")
        step = expm(liouvillian(np.asarray(gen, complex), jumps) * (dur / samples_per_segment))
        for k in range(1, samples_per_segment + 1):
            sup = step @ sup
            times.append(t + dur * k / samples_per_segment)
            sups.append(sup)
        t += dur
    return np.array(times), sups


def lindblad_series(h: PiecewiseHamiltonian, d: Dissipators | None, rho0: np.ndarray,
                    samples_per_segment: int = 50) -> tuple[np.ndarray, list[np.ndarray]]:
    """Density matrices on the grid of :func:`superoperator_series`."""
    rho0 = np.asarray(rho0, complex)
    check_density(rho0)
    times, sups = superoperator_series(h, d, samples_per_segment)
    states = []
    for sup in sups:
        rho = apply_superoperator(sup, rho0)
        states.append((rho + adjoint(rho)) / 2)
    return times, states
