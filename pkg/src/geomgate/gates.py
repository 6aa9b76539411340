"""Closed-form single- and two-qubit gates.

Rotation convention throughout: ``R_n(a) = exp(-i a n.sigma / 2)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .quantum import HADAMARD, I2, SX, SY, SZ, adjoint


class DegenerateDecompositionWarning(UserWarning):
    """Z-X-Z angles are only jointly defined (theta at 0 or pi)."""


class OrthogonalUnitariesWarning(UserWarning):
    """``Tr(v^dag u) = 0`` so no optimal global phase exists."""


@dataclass(frozen=True)
class BoundaryValues:
    """Path data fixing a noncyclic geometric gate.

    Angles are stored as given (not wrapped): ``chi_minus`` is a pulse
    area and may exceed 2*pi.
    """

    gamma: float
    chi_plus: float
    chi_minus: float
    eta_plus: float
    eta_minus: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.gamma, self.chi_plus, self.chi_minus,
                                   self.eta_plus, self.eta_minus])):
            raise ValueError("boundary values must be finite")


@dataclass(frozen=True)
class ZxzAngles:
    """Angles of ``U(theta, alpha, beta) = Z_beta X_theta Z_alpha``."""

    theta: float
    alpha: float
    beta: float


def rotation(axis, angle: float) -> np.ndarray:
    """``exp(-i angle n.sigma/2)`` for a unit 3-vector ``axis``."""
    nx, ny, nz = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    ns = nx * SX + ny * SY + nz * SZ
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * ns


def rx(angle: float) -> np.ndarray:
    return rotation((1, 0, 0), angle)


def rz(angle: float) -> np.ndarray:
    return rotation((0, 0, 1), angle)


def _helpers(b: BoundaryValues):
    # X_{a,b}, Y_{a,b}, Z_{a,b} evaluated at the argument pairs used by the gate
    g2 = 2 * b.gamma
    x = np.cos(g2 / 2) * np.cos(b.chi_minus / 2)       # X_{2g, chi-}
    y = np.sin(g2 / 2) * np.cos(b.chi_plus / 2)        # Y_{2g, chi+}
    z = np.sin(g2 / 2) * np.sin(b.chi_plus / 2)        # Z_{2g, chi+}
    yy = np.sin(b.chi_minus / 2) * np.cos(g2 / 2)      # Y_{chi-, 2g}
    return x, y, z, yy


def nngqc_gate(b: BoundaryValues) -> np.ndarray:
    """Evolution operator of a noncyclic geometric path in the {|0>, |1>} basis."""
    x, y, z, yy = _helpers(b)
    em = np.exp(-0.5j * b.eta_minus)
    ep = np.exp(-0.5j * b.eta_plus)
    return np.array([
        [em * (x + 1j * y), ep * (1j * z - yy)],
        [np.conj(ep) * (1j * z + yy), np.conj(em) * (x - 1j * y)],
    ])


def extract_zxz(b: BoundaryValues, tol: float = 1e-12) -> ZxzAngles:
    """Read off ``(theta, alpha, beta)`` with ``nngqc_gate(b) ~ zxz_gate(...)``.

    At ``theta = 0`` the pair collapses to ``alpha + beta`` and at
    ``theta = pi`` to ``alpha - beta``; both are folded into ``alpha`` with
    ``beta = 0`` and a :class:`DegenerateDecompositionWarning` is issued.
    """
    x, y, z, yy = _helpers(b)
    cos_half = np.hypot(x, y)
    sin_half = np.hypot(z, yy)
    theta = 2 * np.arctan2(sin_half, cos_half)
    a1 = np.arctan2(y, x)
    a2 = np.arctan2(z, yy)
    alpha = -a1 - a2 + (b.eta_minus - b.eta_plus - np.pi) / 2
    beta = -a1 + a2 + (b.eta_minus + b.eta_plus + np.pi) / 2
    if sin_half < tol:
        warnings.warn("theta = 0: alpha and beta merged into alpha",
                      DegenerateDecompositionWarning, stacklevel=2)
        # only -2 a1 + eta- matters here
        return ZxzAngles(0.0, _wrap(-2 * a1 + b.eta_minus), 0.0)
    if cos_half < tol:
        warnings.warn("theta = pi: alpha and beta merged into alpha",
                      DegenerateDecompositionWarning, stacklevel=2)
        return ZxzAngles(float(np.pi), _wrap(alpha - beta), 0.0)
    return ZxzAngles(float(theta), _wrap(alpha), _wrap(beta))


def _wrap(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = float(np.pi - np.mod(np.pi - a, 2 * np.pi))
    return 0.0 if w == 0 else w


def zxz_gate(angles: ZxzAngles) -> np.ndarray:
    return rz(angles.beta) @ rx(angles.theta) @ rz(angles.alpha)


def ngqc_gate(gamma: float, mu: float, eta0: float) -> np.ndarray:
    """Cyclic geometric gate ``exp(i gamma n.sigma)``."""
    n = (np.sin(mu) * np.cos(eta0), np.sin(mu) * np.sin(eta0), np.cos(mu))
    return rotation(n, -2 * gamma)


def dg_primitive(pulse_area: float, phi: float) -> np.ndarray:
    """Resonant square pulse of the given area and drive phase."""
    c, s = np.cos(pulse_area / 2), np.sin(pulse_area / 2)
    return np.array([[c, -1j * np.exp(-1j * phi) * s],
                     [-1j * np.exp(1j * phi) * s, c]])


def _z_primitives(angle: float, tol: float) -> list[tuple[float, float]]:
    # (pi, a) then (pi, b) gives -R_z(2(b - a))
    if abs(_wrap(angle)) < tol:
        return []
    return [(np.pi, -angle / 4), (np.pi, angle / 4)]


def dg_sequence(angles: ZxzAngles, tol: float = 1e-12) -> list[tuple[float, float]]:
    """Time-ordered ``(pulse_area, phi)`` primitives realizing ``Z_beta X_theta Z_alpha``.

    Each Z rotation costs two pi pulses; rotations that are trivial (mod
    2*pi) are dropped.
    """
    seq = _z_primitives(angles.alpha, tol)
    if abs(angles.theta) > tol:
        seq.append((float(angles.theta), 0.0))
    seq += _z_primitives(angles.beta, tol)
    return seq


def controlled_pair(u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    """Block-diagonal ``|0><0| (x) u0 + |1><1| (x) u1``."""
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = u0
    out[2:, 2:] = u1
    return out


def ideal_two_qubit_target() -> np.ndarray:
    """Target two-qubit entangling gate (basis 00, 01, 10, 11)."""
    upper = np.array([[0, 1j], [-1j, 0]])
    return controlled_pair(upper, np.exp(0.25j * np.pi) * HADAMARD)


def phase_insensitive_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max-norm of ``u - c v`` with ``c`` the trace-optimal global phase."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    t = np.trace(adjoint(v) @ u)
    if abs(t) < 1e-14:
        warnings.warn("Tr(v^dag u) = 0; distance evaluated without phase alignment",
                      OrthogonalUnitariesWarning, stacklevel=2)
        c = 1.0
    else:
        c = t / abs(t)
    return float(np.max(np.abs(u - c * v)))


U1 = ZxzAngles(np.pi / 2, -np.pi / 2, 0.0)
U2 = ZxzAngles(np.pi / 2, np.pi / 2, np.pi / 2)
U1_BOUNDARIES = BoundaryValues(np.pi / 4, 0.0, np.pi, -np.pi / 2, np.pi / 2)
U2_BOUNDARIES = BoundaryValues(np.pi / 4, -1.5 * np.pi, np.pi / 2, -np.pi / 2, np.pi / 2)
