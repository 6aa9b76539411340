"""Pulse schedules for geometric and dynamical single-qubit gates."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gates import BoundaryValues, ZxzAngles, dg_sequence


@dataclass(frozen=True)
class PulseSegment:
    """Constant drive: ``duration`` (s), ``rabi`` (rad/s, >= 0), ``phase`` (rad)."""

    duration: float
    rabi: float
    phase: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"segment duration must be > 0, got {self.duration}")
        if not (np.isfinite(self.rabi) and self.rabi >= 0):
            raise ValueError(f"segment rabi must be finite and >= 0, got {self.rabi}")
        if not np.isfinite(self.phase):
            raise ValueError("segment phase must be finite")

    @property
    def area(self) -> float:
        return self.duration * self.rabi


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple[PulseSegment, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def duration(self) -> float:
        return float(sum(s.duration for s in self.segments))

    @property
    def area(self) -> float:
        return float(sum(s.area for s in self.segments))

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class NngqcFamily:
    """Step-function family ``chi = omega0 t - chi0``, ``eta = phi0 + phi1 eps(t - chi0/omega0)``."""

    omega0: float
    chi0: float
    phi0: float
    phi1: float
    tau: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError("omega0 must be > 0")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        area = self.omega0 * self.tau
        if not (-1e-12 <= self.chi0 <= area * (1 + 1e-12) + 1e-12):
            raise ValueError(f"chi0={self.chi0} outside [0, omega0*tau={area}]")

    @property
    def jump_time(self) -> float:
        return self.chi0 / self.omega0


def family_boundaries(f: NngqcFamily) -> BoundaryValues:
    area = f.omega0 * f.tau
    return BoundaryValues(
        gamma=f.phi1 / 2,
        chi_plus=area - 2 * f.chi0,
        chi_minus=area,
        eta_plus=f.phi1 + 2 * f.phi0,
        eta_minus=f.phi1,
    )


def synth_nngqc(f: NngqcFamily, label: str = "nngqc") -> PulseSchedule:
    """Two constant-amplitude segments with ``phi - eta = pi/2``; zero-length pieces are dropped."""
    t_jump = f.jump_time
    segs = []
    if t_jump > 0:
        segs.append(PulseSegment(t_jump, f.omega0, f.phi0 + np.pi / 2))
    if f.tau - t_jump > 1e-15 * max(f.tau, 1.0):
        segs.append(PulseSegment(f.tau - t_jump, f.omega0, f.phi0 + f.phi1 + np.pi / 2))
    return PulseSchedule(tuple(segs), label)


class ControlSingularity(ValueError):
    """No finite control field realizes the requested trajectory."""


def _derivative(fn, grid, h):
    return (np.asarray(fn(grid + h), float) - np.asarray(fn(grid - h), float)) / (2 * h)


def solve_control_fields(chi, eta, grid, chi_dot=None, eta_dot=None,
                         step: float | None = None):
    """Drive ``(Omega(t), phi(t))`` steering the auxiliary state along ``(chi, eta)``.

    Parameters
    ----------
    chi, eta : callable
        Polar and azimuthal Bloch angles as vectorized functions of time.
    grid : array_like
        Strictly increasing sample times.
    chi_dot, eta_dot : callable, optional
        Analytic derivatives. Central differences with step ``step`` are
        used when omitted.

    Returns
    -------
    omega, phi : ndarray
        Non-negative Rabi frequency and drive phase on ``grid``.

    Notes
    -----
    Solves ``chidot = Omega sin(phi - eta)`` and
    ``etadot tan(chi) = -Omega cos(phi - eta)``. A latitude motion
    (``chidot = 0``) therefore needs ``Omega = |etadot tan chi|`` with the
    drive axis in the state's meridian plane.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a strictly increasing 1-D array")
    if step is None:
        step = 1e-6 * (grid[-1] - grid[0])
    c = np.asarray(chi(grid), float)
    e = np.asarray(eta(grid), float)
    cd = np.asarray(chi_dot(grid), float) if chi_dot else _derivative(chi, grid, step)
    ed = np.asarray(eta_dot(grid), float) if eta_dot else _derivative(eta, grid, step)
    cd = np.broadcast_to(cd, grid.shape)
    ed = np.broadcast_to(ed, grid.shape)

    cos_c, sin_c = np.cos(c), np.sin(c)
    scale = np.maximum(np.abs(cd), np.abs(ed)) + 1e-300
    moving_eta = np.abs(ed) > 1e-12 * scale
    bad = moving_eta & (np.abs(cos_c) < 1e-9)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ControlSingularity(f"tan(chi) diverges at t={grid[i]!r} while eta moves")

    sgn = np.where(cos_c < 0, -1.0, 1.0)
    # (sin x, cos x) is parallel to (chidot |cos chi|, -etadot sin chi sgn(cos chi))
    num = cd * np.abs(cos_c)
    den = np.where(moving_eta, -ed * sin_c * sgn, 0.0)
    x = np.arctan2(num, den)
    still = (np.abs(num) == 0) & (den == 0)
    x = np.where(still, np.pi / 2, x)
    tan_c = np.where(moving_eta, np.tan(c), 0.0)
    omega = np.hypot(cd, ed * tan_c)
    omega = np.where(still, 0.0, omega)
    return omega, e + x


def synth_ngqc(gamma: float, mu: float, eta0: float, omega0: float,
               label: str = "ngqc") -> PulseSchedule:
    """Orange-slice cyclic pulse for ``exp(i gamma n.sigma)``, total area ``2 pi``.

    The cyclic state at polar angle ``mu`` is carried down its meridian to
    the antipode, back up a meridian rotated by ``-gamma`` and along the
    first meridian to its start. Every leg keeps ``phi - eta = pi/2`` so
    the dynamical phase vanishes.
    """
    if not omega0 > 0:
        raise ValueError("omega0 must be > 0")
    mu = float(np.mod(mu, 2 * np.pi))
    if mu > np.pi:
        # same axis reached through the opposite azimuth
        mu, eta0 = 2 * np.pi - mu, eta0 + np.pi
    legs = [
        (np.pi - mu, eta0 + np.pi / 2),
        (np.pi, eta0 - gamma + np.pi / 2),
        (mu, eta0 + np.pi / 2),
    ]
    segs = [PulseSegment(a / omega0, omega0, ph) for a, ph in legs if a > 1e-15]
    return PulseSchedule(tuple(segs), label)


def synth_dg(angles: ZxzAngles, omega0: float, label: str = "dg") -> PulseSchedule:
    if not omega0 > 0:
        raise ValueError("omega0 must be > 0")
    segs = [PulseSegment(a / omega0, omega0, ph) for a, ph in dg_sequence(angles)]
    return PulseSchedule(tuple(segs), label)


# -- plain-text schedule table ------------------------------------------------

def format_schedule(s: PulseSchedule) -> str:
    lines = [f"# label: {s.label}", "# duration_s,rabi_rad_per_s,phase_rad"]
    lines += [f"{g.duration:.17g},{g.rabi:.17g},{g.phase:.17g}" for g in s.segments]
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> PulseSchedule:
    label = ""
    segs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("label:"):
                label = line[1:].strip()[len("label:"):].strip()
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 comma-separated fields, got {len(parts)}")
        try:
            segs.append(PulseSegment(*(float(p) for p in parts)))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return PulseSchedule(tuple(segs), label)


def write_schedule(s: PulseSchedule, path) -> None:
    Path(path).write_text(format_schedule(s))


def read_schedule(path) -> PulseSchedule:
    return parse_schedule(Path(path).read_text())
