"""Connection, dynamical matrix and phase diagnostics of auxiliary-state paths.

The auxiliary basis is

    |phi1> = (cos(chi/2) e^{-i eta/2},  sin(chi/2) e^{i eta/2})
    |phi2> = (sin(chi/2) e^{-i eta/2}, -cos(chi/2) e^{i eta/2})

so ``(chi, eta)`` are the Bloch angles of ``|phi1>``. Negative ``chi`` is
allowed and simply mirrors the point through the pole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import BoundaryValues
from .pulses import NngqcFamily, PulseSchedule
from .quantum import SX, SY


@dataclass(frozen=True)
class Trajectory:
    """Sampled auxiliary-state path.

    ``grid`` is non-decreasing. Inside a smooth piece it is strictly
    increasing; a repeated instant marks an instantaneous ``eta`` jump,
    with the pre-jump sample first.
    """

    grid: np.ndarray
    chi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        for name in ("grid", "chi", "eta"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), float))
        if not (self.grid.shape == self.chi.shape == self.eta.shape) or self.grid.ndim != 1:
            raise ValueError("grid, chi and eta must be 1-D arrays of equal length")
        if self.grid.size < 2:
            raise ValueError("trajectory needs at least two samples")
        if not np.all(np.isfinite(self.grid)) or not np.all(np.isfinite(self.chi)) \
                or not np.all(np.isfinite(self.eta)):
            raise ValueError("trajectory values must be finite")
        dt = np.diff(self.grid)
        if np.any(dt < 0):
            raise ValueError("grid must be non-decreasing")
        if np.any((dt[:-1] == 0) & (dt[1:] == 0)):
            raise ValueError("at most two samples may share an instant")

    @property
    def duration(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    def pieces(self) -> list[slice]:
        """Slices of the smooth pieces between jumps."""
        cuts = np.flatnonzero(np.diff(self.grid) == 0) + 1
        bounds = [0, *cuts.tolist(), self.grid.size]
        return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]

    def jumps(self) -> list[int]:
        """Index ``k`` of every post-jump sample (``k - 1`` is pre-jump)."""
        return (np.flatnonzero(np.diff(self.grid) == 0) + 1).tolist()

    def bloch(self) -> np.ndarray:
        return np.stack([np.sin(self.chi) * np.cos(self.eta),
                         np.sin(self.chi) * np.sin(self.eta),
                         np.cos(self.chi)], axis=1)


@dataclass(frozen=True)
class Controls:
    """Drive samples aligned with a trajectory grid."""

    omega: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", np.asarray(self.omega, float))
        object.__setattr__(self, "phi", np.asarray(self.phi, float))


def aux_states(chi: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(chi / 2), np.sin(chi / 2)
    em, ep = np.exp(-0.5j * eta), np.exp(0.5j * eta)
    return np.array([c * em, s * ep]), np.array([s * em, -c * ep])


def _rates(tr: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    chi_dot = np.zeros_like(tr.chi)
    eta_dot = np.zeros_like(tr.eta)
    for sl in tr.pieces():
        t = tr.grid[sl]
        if t.size < 2:
            continue
        order = 2 if t.size >= 3 else 1
        chi_dot[sl] = np.gradient(tr.chi[sl], t, edge_order=order)
        eta_dot[sl] = np.gradient(tr.eta[sl], t, edge_order=order)
    return chi_dot, eta_dot


def _connection_all(tr: Trajectory) -> np.ndarray:
    cd, ed = _rates(tr)
    a = np.empty((tr.grid.size, 2, 2), complex)
    a[:, 0, 0] = 0.5 * ed * np.cos(tr.chi)
    a[:, 1, 1] = -a[:, 0, 0]
    a[:, 1, 0] = -0.5j * cd + 0.5 * ed * np.sin(tr.chi)
    a[:, 0, 1] = np.conj(a[:, 1, 0])
    return a


def _dynamical_all(tr: Trajectory, controls: Controls) -> np.ndarray:
    n = tr.grid.size
    if controls.omega.shape != (n,) or controls.phi.shape != (n,):
        raise ValueError("controls must be sampled on the trajectory grid")
    k = np.empty((n, 2, 2), complex)
    for i in range(n):
        h = 0.5 * controls.omega[i] * (np.cos(controls.phi[i]) * SX + np.sin(controls.phi[i]) * SY)
        p1, p2 = aux_states(tr.chi[i], tr.eta[i])
        basis = np.stack([p1, p2], axis=1)
        k[i] = -basis.conj().T @ h @ basis
    return k


def _check_interior(tr: Trajectory, t_index: int) -> None:
    if not 0 < t_index < tr.grid.size - 1:
        raise IndexError(f"t_index {t_index} is not an interior sample")


def connection_matrix(tr: Trajectory, t_index: int) -> np.ndarray:
    """``A_lm = i <phi_l| d/dt |phi_m>`` at an interior sample."""
    _check_interior(tr, t_index)
    return _connection_all(tr)[t_index]


def dynamical_matrix(tr: Trajectory, controls: Controls, t_index: int) -> np.ndarray:
    """``K_lm = -<phi_l| H |phi_m>`` at an interior sample."""
    _check_interior(tr, t_index)
    return _dynamical_all(tr, controls)[t_index]


def _jump_mass(tr: Trajectory, k: int) -> np.ndarray:
    """Integrated connection across the jump into sample ``k``."""
    d_eta = tr.eta[k] - tr.eta[k - 1]
    chi = 0.5 * (tr.chi[k] + tr.chi[k - 1])
    c, s = np.cos(chi), np.sin(chi)
    return 0.5 * d_eta * np.array([[c, s], [s, -c]], complex)


def _integrate(tr: Trajectory, values: np.ndarray) -> np.ndarray:
    total = np.zeros(values.shape[1:], complex)
    for sl in tr.pieces():
        t = tr.grid[sl]
        if t.size >= 2:
            total += np.trapezoid(values[sl], t, axis=0)
    return total


def integrated_connection(tr: Trajectory) -> np.ndarray:
    total = _integrate(tr, _connection_all(tr))
    for k in tr.jumps():
        total += _jump_mass(tr, k)
    return total


def integrated_dynamical(tr: Trajectory, controls: Controls) -> np.ndarray:
    return _integrate(tr, _dynamical_all(tr, controls))


def geometric_phase(tr: Trajectory) -> float:
    """``int (etadot/2) cos(chi) dt`` plus ``(d_eta/2) cos(chi)`` per jump."""
    return float(integrated_connection(tr)[0, 0].real)


def dynamical_phase(tr: Trajectory, controls: Controls) -> float:
    return float(integrated_dynamical(tr, controls)[0, 0].real)


def unconventional_ratio(tr: Trajectory, controls: Controls, tol: float = 1e-8) -> float:
    """``int A_21 dt / int K_21 dt``; ``-1`` for parallel-transport-like evolution."""
    num = integrated_connection(tr)[1, 0]
    den = integrated_dynamical(tr, controls)[1, 0]
    if abs(den) < 1e-12:
        raise ZeroDivisionError("integrated off-diagonal K vanishes")
    ratio = num / den
    if abs(ratio.imag) > tol:
        raise ValueError(f"ratio has imaginary part {ratio.imag:.3g}")
    return float(ratio.real)


def non_abelian_witness(tr: Trajectory) -> float:
    """Largest max-norm commutator among connection generators.

    Generators are ``A(t_i) T`` for every sample (``T`` the duration) and
    the integrated point mass of every ``eta`` jump, so smooth rates and
    jumps are compared on the same dimensionless footing.
    """
    a = _connection_all(tr) * tr.duration
    gens = [a[i] for i in range(a.shape[0])]
    gens += [_jump_mass(tr, k) for k in tr.jumps()]
    g = np.array(gens)
    # [g_i, g_j] for all pairs at once
    comm = np.einsum("iab,jbc->ijac", g, g) - np.einsum("jab,ibc->ijac", g, g)
    return float(np.max(np.abs(comm)))


def _signed_triangle(a, b, c) -> float:
    num = np.dot(a, np.cross(b, c))
    den = 1 + np.dot(a, b) + np.dot(b, c) + np.dot(c, a)
    return 2 * np.arctan2(num, den)


def enclosed_solid_angle(tr: Trajectory) -> float:
    """Solid angle of the path closed by the geodesic from its end to its start.

    Oriented so that the noncyclic geometric phase equals half of it.
    """
    pts = tr.bloch()
    keep = np.ones(len(pts), bool)
    keep[1:] = np.linalg.norm(np.diff(pts, axis=0), axis=1) > 1e-15
    pts = pts[keep]
    if len(pts) < 3:
        return 0.0
    ref = pts[0]
    total = sum(_signed_triangle(ref, pts[i], pts[i + 1]) for i in range(1, len(pts) - 1))
    return -float(total)


def noncyclic_phase(b: BoundaryValues, tr: Trajectory) -> float:
    """Gauge-invariant form of ``b.gamma``: ``gamma + arg<phi1(0)|phi1(T)>``."""
    p0, _ = aux_states(tr.chi[0], tr.eta[0])
    p1, _ = aux_states(tr.chi[-1], tr.eta[-1])
    overlap = np.vdot(p0, p1)
    if abs(overlap) < 1e-12:
        raise ValueError("path endpoints are orthogonal; the geodesic closure is undefined")
    return float(b.gamma + np.angle(overlap))


def solid_angle_check(b: BoundaryValues, tr: Trajectory) -> float:
    """``|gamma - Omega/2|`` (mod 2 pi) with ``gamma`` the gauge-invariant phase."""
    omega = enclosed_solid_angle(tr)
    if abs(omega) < 1e-14 and abs(tr.bloch()[0] - tr.bloch()[-1]).max() < 1e-14 \
            and np.ptp(tr.bloch(), axis=0).max() < 1e-14:
        return 0.0
    diff = noncyclic_phase(b, tr) - omega / 2
    return float(abs(np.pi - np.mod(np.pi - diff, 2 * np.pi)))


# -- trajectories of the synthesized pulses --------------------------------

def family_trajectory(f: NngqcFamily, samples: int = 201) -> tuple[Trajectory, Controls]:
    """Exact path and drive of a step-function family."""
    t_jump = f.jump_time
    pieces = []
    if t_jump > 0:
        pieces.append((0.0, t_jump, f.phi0))
    if f.tau - t_jump > 0:
        pieces.append((t_jump, f.tau, f.phi0 + f.phi1))
    grid, eta = [], []
    for a, b, e in pieces:
        n = max(3, int(round(samples * (b - a) / f.tau)))
        t = np.linspace(a, b, n)
        grid.append(t)
        eta.append(np.full(n, e))
    grid = np.concatenate(grid)
    eta = np.concatenate(eta)
    chi = f.omega0 * grid - f.chi0
    phi = eta + np.pi / 2
    return Trajectory(grid, chi, eta), Controls(np.full(grid.size, f.omega0), phi)


def schedule_trajectory(s: PulseSchedule, chi0: float, eta0: float,
                        samples_per_segment: int = 201) -> tuple[Trajectory, Controls]:
    """Bloch angles of ``|phi1>`` carried by the exact dynamics of ``s``.

    Drive-phase jumps between segments repeat the boundary instant. The
    azimuth is unwrapped; paths through a pole are not supported here.
    """
    n0 = np.array([np.sin(chi0) * np.cos(eta0), np.sin(chi0) * np.sin(eta0), np.cos(chi0)])
    grid, pts, om, ph = [], [], [], []
    t0, n = 0.0, n0
    for seg in s.segments:
        axis = np.array([np.cos(seg.phase), np.sin(seg.phase), 0.0])
        for tau in np.linspace(0, seg.duration, samples_per_segment):
            a = seg.rabi * tau
            # Rodrigues rotation about the drive axis
            v = n * np.cos(a) + np.cross(axis, n) * np.sin(a) + axis * np.dot(axis, n) * (1 - np.cos(a))
            grid.append(t0 + tau)
            pts.append(v)
            om.append(seg.rabi)
            ph.append(seg.phase)
        n = pts[-1]
        t0 += seg.duration
    pts = np.array(pts)
    chi = np.arccos(np.clip(pts[:, 2], -1, 1))
    eta = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
    eta += eta0 - eta[0]
    return Trajectory(np.array(grid), chi, eta), Controls(np.array(om), np.array(ph))
