"""Reproduction harness: named experiments, parameter sweeps and CSV output."""

from __future__ import annotations

import csv
import io
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import (CoherentError, Dissipators, apply_superoperator, lindblad_superoperator,
                       propagate_unitary, schedule_to_hamiltonian, superoperator_series)
from .gates import U1, U2, extract_zxz, ideal_two_qubit_target, zxz_gate
from .metrics import avg_gate_fidelity, state_fidelity, theta_avg_gate_fidelity, unitary_channel
from .pulses import (NngqcFamily, PulseSchedule, family_boundaries, synth_dg, synth_ngqc,
                     synth_nngqc)
from .quantum import adjoint, projector
from . import rydberg as ry

SCHEMES = ("nngqc", "ngqc", "dg", "rydberg")
METRICS = ("state_fidelity", "theta_avg_gate_fidelity", "avg_gate_fidelity")
AXES = ("zeta", "delta", "gamma1", "gamma2")

REFERENCE_OMEGA0 = 2 * np.pi * 6.25e3
REFERENCE_GAMMA1 = 2 * REFERENCE_OMEGA0 * 1e-4
REFERENCE_GAMMA2 = 2 * REFERENCE_OMEGA0 * 1e-3
RYDBERG_OMEGA0 = 2 * np.pi * 10e6


# -- gate registry ------------------------------------------------------------

IDEAL_ANGLES = {"U1": U1, "U2": U2}

# (gamma, mu, eta0) of exp(i gamma n.sigma) equal to each target up to phase
NGQC_PARAMS = {
    "U1": (2 * np.pi / 3, float(np.arccos(-1 / np.sqrt(3))), np.pi / 4),
    "U2": (np.pi / 2, np.pi / 4, 0.0),
}


def ideal_gate(gate: str) -> np.ndarray:
    try:
        return zxz_gate(IDEAL_ANGLES[gate])
    except KeyError:
        raise ValueError(f"unknown gate {gate!r}; choose from {sorted(IDEAL_ANGLES)}") from None


def u1_family(omega0: float) -> NngqcFamily:
    return NngqcFamily(omega0, np.pi / 2, -np.pi / 2, np.pi / 2, np.pi / omega0)


def u2_family(omega0: float) -> NngqcFamily:
    """Minimum-area family for the Hadamard-type gate U(pi/2, pi/2, pi/2)."""
    area, chi0, phi1 = 4 * np.pi / 3, 2 * np.pi / 3, float(np.arccos(1 / 3))
    probe = NngqcFamily(omega0, chi0, 0.0, phi1, area / omega0)
    # alpha shifts by -phi0 while theta, beta + alpha stay put
    phi0 = extract_zxz(family_boundaries(probe)).alpha - U2.alpha
    return NngqcFamily(omega0, chi0, phi0, phi1, area / omega0)


NNGQC_FAMILIES = {"U1": u1_family, "U2": u2_family}


def single_qubit_schedule(scheme: str, gate: str, omega0: float) -> PulseSchedule:
    label = f"{scheme} {gate}"
    if gate not in IDEAL_ANGLES:
        raise ValueError(f"unknown gate {gate!r}")
    if scheme == "nngqc":
        return synth_nngqc(NNGQC_FAMILIES[gate](omega0), label)
    if scheme == "ngqc":
        return synth_ngqc(*NGQC_PARAMS[gate], omega0, label)
    if scheme == "dg":
        return synth_dg(IDEAL_ANGLES[gate], omega0, label)
    raise ValueError(f"unknown single-qubit scheme {scheme!r}")


def duration_table(omega0: float = REFERENCE_OMEGA0) -> dict[str, float]:
    """U1 gate durations in units of ``tau = pi / omega0``."""
    tau = np.pi / omega0
    return {s: single_qubit_schedule(s, "U1", omega0).duration / tau for s in ("nngqc", "ngqc", "dg")}


# -- sweeps ---------------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.name not in AXES:
            raise ValueError(f"unknown axis {self.name!r}; choose from {AXES}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not self.lo < self.hi:
            raise ValueError("axis needs min < max")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Two-axis grid over coherent errors and/or relaxation rates.

    ``fixed`` holds the remaining parameters: ``omega0`` (rad/s),
    ``dephasing``, any non-swept axis value, and for the ``rydberg``
    scheme the :class:`RydbergParams` ratios and step-2 family.
    """

    scheme: str
    gate: str
    axis1: Axis
    axis2: Axis
    metric: str = "theta_avg_gate_fidelity"
    fixed: dict = field(default_factory=dict)
    experiment: str = "sweep"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.axis1.name == self.axis2.name:
            raise ValueError("the two axes must differ")
        if self.scheme == "rydberg":
            if self.metric == "theta_avg_gate_fidelity":
                raise ValueError("theta-averaged fidelity is single-qubit only")
            if {self.axis1.name, self.axis2.name} & {"zeta", "delta"}:
                raise ValueError("rydberg sweeps take rate axes only")
        elif self.gate not in IDEAL_ANGLES:
            raise ValueError(f"unknown gate {self.gate!r}")

    @property
    def filename(self) -> str:
        return f"{self.experiment}__{self.scheme}__{self.gate}.csv"


@dataclass
class SweepResult:
    spec: SweepSpec
    values: np.ndarray
    flags: np.ndarray
    wall_time: float

    def to_csv(self) -> str:
        return sweep_csv(self)


def _point_params(spec: SweepSpec, v1: float, v2: float) -> dict:
    params = dict(spec.fixed)
    params[spec.axis1.name] = float(v1)
    params[spec.axis2.name] = float(v2)
    return params


def single_qubit_point(scheme: str, gate: str, metric: str, params: dict) -> float:
    omega0 = params.get("omega0", REFERENCE_OMEGA0)
    sched = single_qubit_schedule(scheme, gate, omega0)
    err = CoherentError(params.get("zeta", 0.0), params.get("delta", 0.0), omega0)
    h = schedule_to_hamiltonian(sched, err)
    g1, g2 = params.get("gamma1", 0.0), params.get("gamma2", 0.0)
    u = ideal_gate(gate)
    if g1 == 0 and g2 == 0:
        m = propagate_unitary(h)
        if metric == "avg_gate_fidelity":
            return avg_gate_fidelity(u, m)
        channel = unitary_channel(m)
    else:
        d = Dissipators(g1, g2, dephasing=params.get("dephasing", "sigma_z"))
        sup = lindblad_superoperator(h, d)
        channel = lambda rho: apply_superoperator(sup, rho)  # noqa: E731
    if metric == "theta_avg_gate_fidelity":
        return theta_avg_gate_fidelity(u, channel)
    if metric == "state_fidelity":
        psi0 = np.array([1, 0], complex)
        return state_fidelity(u @ psi0, channel(projector(psi0)))
    return avg_gate_fidelity(u, channel)


def rydberg_params_from(params: dict) -> ry.RydbergParams:
    omega0 = params.get("omega0", RYDBERG_OMEGA0)
    omega1 = params.get("omega1", omega0)
    delta = params.get("delta_over_omega", 17.0) * omega0
    if "c6" in params:
        return ry.RydbergParams.from_c6(omega1, omega0, delta, params["c6"], params["r"])
    return ry.RydbergParams(omega1, omega0, delta, params.get("v_over_omega", 17.0) * omega0)


def rydberg_step2(p: ry.RydbergParams, params: dict) -> ry.Step2Pulse:
    fam = ry.step2_family(p, params.get("step2_area_over_pi", 3.0) * np.pi,
                          params.get("step2_chi0_over_pi", 1.0) * np.pi,
                          params.get("step2_phi0_over_pi", 0.0) * np.pi,
                          params.get("step2_phi1_over_pi", 0.5) * np.pi)
    return ry.synth_step2_pulse(p, fam)


def rydberg_point(metric: str, params: dict) -> float:
    p = rydberg_params_from(params)
    step2 = rydberg_step2(p, params)
    target = ideal_two_qubit_target()
    g1, g2 = params.get("gamma1", 0.0), params.get("gamma2", 0.0)
    d = ry.rydberg_dissipators(g1, g2, params.get("dephasing", "sigma_z")) if (g1 or g2) else None
    sup = ry.protocol_superoperator(p, step2, d)

    def channel(rho4):
        return ry.project_density(apply_superoperator(sup, ry.embed_density(rho4)))

    if metric == "state_fidelity":
        psi = ry.REFERENCE_INITIAL_STATE
        return state_fidelity(target @ psi, channel(projector(psi)))
    return avg_gate_fidelity(target, channel)


def evaluate_point(spec: SweepSpec, v1: float, v2: float) -> float:
    params = _point_params(spec, v1, v2)
    if spec.scheme == "rydberg":
        return rydberg_point(spec.metric, params)
    return single_qubit_point(spec.scheme, spec.gate, spec.metric, params)


def _safe_point(args) -> tuple[float, int]:
    spec, v1, v2 = args
    try:
        val = evaluate_point(spec, v1, v2)
    except Exception:  # a failed cell is flagged, never fatal
        return -1.0, 1
    if not np.isfinite(val) or not (-1e-9 <= val <= 1 + 1e-9):
        return -1.0, 1
    return float(val), 0


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate ``spec.metric`` on the row-major ``axis1 x axis2`` grid.

    Failing points become flagged cells with value -1.
    """
    t0 = time.perf_counter()
    tasks = [(spec, a, b) for a in spec.axis1.values() for b in spec.axis2.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_safe_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        out = [_safe_point(t) for t in tasks]
    shape = (spec.axis1.count, spec.axis2.count)
    values = np.array([v for v, _ in out]).reshape(shape)
    flags = np.array([f for _, f in out], dtype=int).reshape(shape)
    return SweepResult(spec, values, flags, time.perf_counter() - t0)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def sweep_csv(result: SweepResult) -> str:
    spec = result.spec
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([spec.axis1.name, spec.axis2.name, spec.metric, "flag"])
    for i, a in enumerate(spec.axis1.values()):
        for j, b in enumerate(spec.axis2.values()):
            w.writerow([_fmt(a), _fmt(b), _fmt(result.values[i, j]), int(result.flags[i, j])])
    return buf.getvalue()


# -- bundles ------------------------------------------------------------------

@dataclass
class Bundle:
    """Named outputs of an experiment: scalars, CSV tables and raw arrays."""

    name: str
    scalars: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)      # filename -> CSV text
    arrays: dict = field(default_factory=dict)
    flagged: int = 0


def _series_csv(header: list[str], columns: list[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([_fmt(float(x)) for x in row])
    return buf.getvalue()


@dataclass(frozen=True)
class SingleQubitSettings:
    omega0: float = REFERENCE_OMEGA0
    gamma1: float = REFERENCE_GAMMA1
    gamma2: float = REFERENCE_GAMMA2
    dephasing: str = "sigma_z"


def gate_run(scheme: str, gate: str, s: SingleQubitSettings, samples_per_segment: int = 40):
    """Open-system run of one gate from ``|0>``: time series and final figures."""
    sched = single_qubit_schedule(scheme, gate, s.omega0)
    h = schedule_to_hamiltonian(sched)
    d = Dissipators(s.gamma1, s.gamma2, dephasing=s.dephasing)
    times, sups = superoperator_series(h, d, samples_per_segment)
    u = ideal_gate(gate)
    psi0 = np.array([1, 0], complex)
    rho0 = projector(psi0)
    target = u @ psi0
    pops, fids, gate_fids = [], [], []
    for sup in sups:
        rho = apply_superoperator(sup, rho0)
        pops.append(np.real(np.diag(rho)))
        fids.append(state_fidelity(target, (rho + adjoint(rho)) / 2))
        gate_fids.append(theta_avg_gate_fidelity(u, lambda r, S=sup: apply_superoperator(S, r)))
    pops = np.array(pops)
    return {
        "t": times, "pop_0": pops[:, 0], "pop_1": pops[:, 1],
        "fidelity": np.array(fids), "gate_fidelity": np.array(gate_fids),
        "state_fidelity": fids[-1], "gate_error": 1 - gate_fids[-1],
    }


def figure2_experiment(s: SingleQubitSettings = SingleQubitSettings()) -> Bundle:
    b = Bundle("figure2")
    for scheme in ("nngqc", "ngqc"):
        r = gate_run(scheme, "U1", s)
        b.tables[f"figure2__{scheme}__U1.csv"] = _series_csv(
            ["t_s", "pop_0", "pop_1", "fidelity"], [r["t"], r["pop_0"], r["pop_1"], r["fidelity"]])
        b.scalars[f"{scheme}_state_fidelity"] = r["state_fidelity"]
        b.scalars[f"{scheme}_theta_gate_error"] = r["gate_error"]
        b.arrays[f"{scheme}_gate_fidelity_vs_t"] = np.stack([r["t"], r["gate_fidelity"]], axis=1)
    return b


def error_sweep_spec(scheme: str, gate: str = "U1", count: int = 21, span: float = 0.1,
                     omega0: float = REFERENCE_OMEGA0, experiment: str = "figure3",
                     metric: str = "theta_avg_gate_fidelity") -> SweepSpec:
    return SweepSpec(scheme, gate, Axis("zeta", -span, span, count), Axis("delta", -span, span, count),
                     metric, {"omega0": omega0}, experiment)


def rate_sweep_spec(scheme: str, gate: str = "U1", count: int = 11, s: SingleQubitSettings = SingleQubitSettings(),
                    experiment: str = "figure3_rates",
                    metric: str = "theta_avg_gate_fidelity") -> SweepSpec:
    top = 5 * 2 * s.omega0 * 1e-3
    return SweepSpec(scheme, gate, Axis("gamma1", 0.0, top, count), Axis("gamma2", 0.0, top, count),
                     metric, {"omega0": s.omega0, "dephasing": s.dephasing}, experiment)


def _add_sweep(b: Bundle, res: SweepResult) -> None:
    b.tables[res.spec.filename] = sweep_csv(res)
    b.arrays[res.spec.filename] = res.values
    b.flagged += int(res.flags.sum())


def figure3_experiment(s: SingleQubitSettings = SingleQubitSettings(), jobs: int = 1,
                       error_count: int = 21, rate_count: int = 11) -> Bundle:
    """Coherent-error and relaxation-rate maps for NNGQC and NGQC U1."""
    b = Bundle("figure3")
    for scheme in ("nngqc", "ngqc"):
        _add_sweep(b, run_sweep(error_sweep_spec(scheme, count=error_count, omega0=s.omega0), jobs))
        _add_sweep(b, run_sweep(rate_sweep_spec(scheme, count=rate_count, s=s), jobs))
    nn = b.arrays["figure3__nngqc__U1.csv"]
    ng = b.arrays["figure3__ngqc__U1.csv"]
    b.scalars["nngqc_ge_ngqc_fraction"] = float(np.mean(nn >= ng))
    b.scalars["nngqc_ge_ngqc_corners"] = int(sum(nn[i, j] >= ng[i, j] for i in (0, -1) for j in (0, -1)))
    return b


def figure6_experiment(s: SingleQubitSettings = SingleQubitSettings(), jobs: int = 1,
                       count: int = 21) -> Bundle:
    """Coherent-error maps of NNGQC against the dynamical gate."""
    b = Bundle("figure6")
    for scheme in ("nngqc", "dg"):
        _add_sweep(b, run_sweep(error_sweep_spec(scheme, count=count, omega0=s.omega0,
                                                 experiment="figure6"), jobs))
    nn = b.arrays["figure6__nngqc__U1.csv"]
    dg = b.arrays["figure6__dg__U1.csv"]
    b.scalars["nngqc_ge_dg_corners"] = int(sum(nn[i, j] >= dg[i, j] for i in (0, -1) for j in (0, -1)))
    return b


def reference_rydberg_fixed(ratio: float = 17.0, dephasing: str = "sigma_z") -> dict:
    return {"omega0": RYDBERG_OMEGA0, "omega1": RYDBERG_OMEGA0, "delta_over_omega": ratio,
            "v_over_omega": ratio, "step2_area_over_pi": 3.0, "step2_chi0_over_pi": 1.0,
            "step2_phi0_over_pi": 0.0, "step2_phi1_over_pi": 0.5, "dephasing": dephasing}


def figure5_experiment(fixed: dict | None = None, jobs: int = 1, count: int = 11,
                       rate_max: float | None = None, samples_per_segment: int = 40) -> Bundle:
    """Two-qubit protocol: population series, final fidelity and rate map."""
    fixed = dict(fixed or reference_rydberg_fixed())
    p = rydberg_params_from(fixed)
    step2 = rydberg_step2(p, fixed)
    target = ideal_two_qubit_target()
    psi = ry.REFERENCE_INITIAL_STATE
    ideal9 = ry.embed_state(target @ psi)
    rho0 = ry.embed_density(projector(psi))
    times, sups = superoperator_series(ry.protocol_hamiltonian(p, step2), None, samples_per_segment)
    pops, fids = [], []
    for sup in sups:
        rho = apply_superoperator(sup, rho0)
        pop = np.real(np.diag(rho))
        pops.append([pop[0], pop[1], pop[3], pop[4], pop.sum() - pop[[0, 1, 3, 4]].sum()])
        fids.append(state_fidelity(ideal9, (rho + adjoint(rho)) / 2))
    pops = np.array(pops)
    b = Bundle("figure5")
    b.tables["figure5__rydberg__two_qubit.csv"] = _series_csv(
        ["t_s", "pop_00", "pop_01", "pop_10", "pop_11", "pop_rydberg", "fidelity"],
        [times, *pops.T, np.array(fids)])
    res = ry.run_protocol(p, step2)
    b.scalars["state_fidelity"] = fids[-1]
    b.scalars["leakage"] = res.leakage
    b.scalars["avg_gate_infidelity"] = 1 - avg_gate_fidelity(target, res.gate)
    top = rate_max if rate_max is not None else 1e-4 * p.omega_t
    spec = SweepSpec("rydberg", "two_qubit", Axis("gamma1", 0.0, top, count),
                     Axis("gamma2", 0.0, top, count), "state_fidelity", fixed, "figure5_rates")
    sweep = run_sweep(spec, jobs)
    _add_sweep(b, sweep)
    b.arrays["infidelity"] = 1 - sweep.values
    return b


def durations_experiment(omega0: float = REFERENCE_OMEGA0) -> Bundle:
    b = Bundle("durations")
    table = duration_table(omega0)
    b.scalars.update({f"{k}_duration_over_tau": v for k, v in table.items()})
    b.tables["durations__all__U1.csv"] = "scheme,duration_s,duration_over_tau\n" + "".join(
        f"{k},{_fmt(v * np.pi / omega0)},{_fmt(v)}\n" for k, v in table.items())
    return b


# -- output -------------------------------------------------------------------

def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bundle(b: Bundle, outdir) -> list[Path]:
    paths = []
    for name, text in b.tables.items():
        path = Path(outdir) / name
        atomic_write(path, text)
        paths.append(path)
    return paths
