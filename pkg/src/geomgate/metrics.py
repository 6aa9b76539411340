"""Fidelity measures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quantum import PAULIS, adjoint, projector, tensor

THETA_SAMPLES = 1001
Channel = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FidelityReport:
    value: float
    kind: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("state", "theta_avg_gate", "avg_gate"):
            raise ValueError(f"unknown fidelity kind {self.kind!r}")
        if not (0.0 - 1e-9 <= self.value <= 1.0 + 1e-9):
            raise ValueError(f"fidelity {self.value} outside [0, 1]")


def state_fidelity(ideal, actual) -> float:
    """``<psi|rho|psi>`` for a pure target ``psi``."""
    psi = np.asarray(ideal, complex)
    rho = np.asarray(actual, complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    if rho.shape != (psi.size, psi.size):
        raise ValueError("dimension mismatch between ideal state and density matrix")
    val = np.vdot(psi, rho @ psi)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity has imaginary part {val.imag:.3g}")
    return float(val.real)


def theta_states(samples: int = THETA_SAMPLES) -> np.ndarray:
    """Real superpositions ``cos(T)|0> + sin(T)|1>``, ``T`` on ``linspace(0, 2 pi, samples)``."""
    th = np.linspace(0.0, 2 * np.pi, samples)
    return np.stack([np.cos(th), np.sin(th)], axis=1).astype(complex)


def theta_avg_gate_fidelity(ideal, channel: Channel, exact: bool = False) -> float:
    """Mean of ``<psi_I|E(|psi><psi|)|psi_I>`` over the Theta great circle.

    The channel is linear, so by default it is evaluated on ``|0>``, ``|1>``
    and ``|+>`` only and the 1001 outputs are assembled from those.
    ``exact=True`` feeds every sampled state through the channel instead.
    """
    u = np.asarray(ideal, complex)
    psis = theta_states()
    targets = psis @ u.T
    if exact:
        vals = [state_fidelity(t, channel(projector(s))) for s, t in zip(psis, targets)]
        return float(np.mean(vals))
    e0 = channel(np.diag([1.0, 0.0]).astype(complex))
    e1 = channel(np.diag([0.0, 1.0]).astype(complex))
    ep = channel(0.5 * np.ones((2, 2), complex))
    coh = 2 * ep - e0 - e1           # image of |0><1| + |1><0|
    c, s = psis[:, 0].real, psis[:, 1].real
    outs = (c * c)[:, None, None] * e0 + (s * s)[:, None, None] * e1 + (c * s)[:, None, None] * coh
    vals = np.einsum("ni,nij,nj->n", targets.conj(), outs, targets)
    return float(np.mean(vals.real))


def unitary_channel(u) -> Channel:
    u = np.asarray(u, complex)
    return lambda rho: u @ rho @ adjoint(u)


def pauli_basis(nqubits: int) -> list[np.ndarray]:
    return [tensor(*ops) for ops in itertools.product(PAULIS, repeat=nqubits)]


def avg_gate_fidelity(ideal, actual) -> float:
    """Average gate fidelity of ``actual`` against the unitary ``ideal``.

    ``actual`` is either a matrix ``M`` (a possibly leaky projected
    propagator) or a linear channel callable. For matrices this is
    ``(|Tr(U^dag M)|^2 + Tr(M^dag M)) / (d (d + 1))``. Channels go through
    Pauli-basis process reconstruction,
    ``(sum_k Tr[(U P_k U^dag)^dag E(P_k)] + d Tr E(I)) / (d^2 (d + 1))``.
    Both reduce to the usual formulas when nothing leaks.
    """
    u = np.asarray(ideal, complex)
    d = u.shape[0]
    if d not in (2, 4):
        raise ValueError("avg_gate_fidelity supports d in {2, 4}")
    if not callable(actual):
        m = np.asarray(actual, complex)
        num = abs(np.trace(adjoint(u) @ m)) ** 2 + np.trace(adjoint(m) @ m).real
        return float(num / (d * (d + 1)))
    total = 0.0
    for p in pauli_basis(int(np.log2(d))):
        total += np.trace(adjoint(u @ p @ adjoint(u)) @ actual(p)).real
    total += d * np.trace(actual(np.eye(d, dtype=complex))).real
    return float(total / (d * d * (d + 1)))


def depolarize(channel: Channel, p: float, d: int) -> Channel:
    """``(1 - p) E(rho) + p Tr(rho) I/d``."""
    return lambda rho: (1 - p) * channel(rho) + p * np.trace(rho) * np.eye(d) / d
