"""Run configuration files.

Grammar (INI style, parsed with :mod:`configparser`)::

    # comment
    [run]
    experiment = figure2        ; figure2 figure3 figure5 figure6 durations sweep
    out = results
    jobs = 4

    [single_qubit]
    omega0 = 6.25 khz           ; frequencies: number + hz/khz/mhz/ghz, 2*pi applied internally
    gamma1_over_omega = 2e-4    ; or gamma1 = <rate in 1/s>
    gamma2_over_omega = 2e-3
    dephasing = sigma_z         ; or projector

    [rydberg]
    omega1 = 10 mhz
    omega_t = 10 mhz
    delta_over_omega = 17
    v_over_omega = 17           ; or r_um + c6_ghz_um6
    step2_area_over_pi = 3
    step2_chi0_over_pi = 1
    step2_phi0_over_pi = 0
    step2_phi1_over_pi = 0.5
    gamma_max = 6283.2          ; top of the two-qubit rate axes, 1/s

    [sweep]
    scheme = nngqc
    gate = U1
    axis1 = zeta -0.1 0.1 21
    axis2 = delta -0.1 0.1 21
    metric = theta_avg_gate_fidelity

    [grid]
    error_count = 21
    rate_count = 11

    [tolerance]
    verify = 1e-8

Every problem found is collected and reported together in a
:class:`ConfigError`.
"""

from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field

import numpy as np

from .experiments import (AXES, METRICS, REFERENCE_OMEGA0, SCHEMES, Axis, SingleQubitSettings,
                          SweepSpec, reference_rydberg_fixed)

EXPERIMENTS = ("figure2", "figure3", "figure5", "figure6", "durations", "sweep")
FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}

SCHEMA = {
    "run": {"experiment", "out", "jobs"},
    "single_qubit": {"omega0", "gamma1", "gamma2", "gamma1_over_omega", "gamma2_over_omega",
                     "dephasing"},
    "rydberg": {"omega1", "omega_t", "delta_over_omega", "v_over_omega", "r_um", "c6_ghz_um6",
                "step2_area_over_pi", "step2_chi0_over_pi", "step2_phi0_over_pi",
                "step2_phi1_over_pi", "gamma_max", "dephasing"},
    "sweep": {"scheme", "gate", "axis1", "axis2", "metric"},
    "grid": {"error_count", "rate_count"},
    "tolerance": {"verify"},
}
FREQ_KEYS = {"omega0", "omega1", "omega_t"}
ALIASES = {"omega0_hz": "omega0", "omega1_hz": "omega1", "omega_t_hz": "omega_t"}
REQUIRED = (("run", "experiment"), ("run", "out"))

REFERENCE_CONFIG = """\
[run]
experiment = figure2
out = results
jobs = 1

[single_qubit]
omega0 = 6.25 khz
gamma1_over_omega = 2e-4
gamma2_over_omega = 2e-3
dephasing = sigma_z

[rydberg]
omega1 = 10 mhz
omega_t = 10 mhz
delta_over_omega = 17
v_over_omega = 17
step2_area_over_pi = 3
step2_chi0_over_pi = 1
step2_phi0_over_pi = 0
step2_phi1_over_pi = 0.5

[grid]
error_count = 21
rate_count = 11
"""


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid configuration:\n  " + "\n  ".join(problems))


@dataclass
class RunConfig:
    experiment: str
    out: str
    jobs: int = 1
    single: SingleQubitSettings = field(default_factory=SingleQubitSettings)
    rydberg: dict = field(default_factory=reference_rydberg_fixed)
    rydberg_gamma_max: float | None = None
    sweep: SweepSpec | None = None
    error_count: int = 21
    rate_count: int = 11
    verify_tol: float = 1e-8
    source: str = "<string>"

    def resolved_text(self) -> str:
        """Canonical config text; parsing it reproduces this object."""
        r = self.rydberg
        s = self.single
        lines = [
            "[run]", f"experiment = {self.experiment}", f"out = {self.out}", f"jobs = {self.jobs}", "",
            "[single_qubit]", f"omega0 = {s.omega0 / (2 * np.pi):.17g} hz",
            f"gamma1 = {s.gamma1:.17g}", f"gamma2 = {s.gamma2:.17g}", f"dephasing = {s.dephasing}", "",
            "[rydberg]", f"omega1 = {r['omega1'] / (2 * np.pi):.17g} hz",
            f"omega_t = {r['omega0'] / (2 * np.pi):.17g} hz",
            f"delta_over_omega = {r['delta_over_omega']:.17g}",
        ]
        if "c6" in r:
            lines += [f"r_um = {r['r']:.17g}", f"c6_ghz_um6 = {r['c6'] / (2 * np.pi * 1e9):.17g}"]
        else:
            lines.append(f"v_over_omega = {r['v_over_omega']:.17g}")
        for k in ("step2_area_over_pi", "step2_chi0_over_pi", "step2_phi0_over_pi", "step2_phi1_over_pi"):
            lines.append(f"{k} = {r[k]:.17g}")
        if self.rydberg_gamma_max is not None:
            lines.append(f"gamma_max = {self.rydberg_gamma_max:.17g}")
        lines.append(f"dephasing = {r['dephasing']}")
        if self.sweep is not None:
            sw = self.sweep
            lines += ["", "[sweep]", f"scheme = {sw.scheme}", f"gate = {sw.gate}", f"metric = {sw.metric}"]
            for k, ax in (("axis1", sw.axis1), ("axis2", sw.axis2)):
                lines.append(f"{k} = {ax.name} {ax.lo:.17g} {ax.hi:.17g} {ax.count}")
        lines += ["", "[grid]", f"error_count = {self.error_count}", f"rate_count = {self.rate_count}",
                  "", "[tolerance]", f"verify = {self.verify_tol:.17g}", ""]
        return "\n".join(lines)


def _line_numbers(text: str) -> dict[tuple[str, str], int]:
    where, section = {}, None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            where.setdefault((section, ""), n)
        elif section and "=" in line and not line.startswith(("#", ";")):
            where.setdefault((section, line.split("=", 1)[0].strip().lower()), n)
    return where


def parse_frequency(raw: str) -> float:
    """``'6.25 khz'`` -> angular frequency in rad/s. A bare number is Hz."""
    m = re.fullmatch(r"\s*([-+0-9.eE]+)\s*([a-zA-Z]*)\s*", raw)
    if not m:
        raise ValueError(f"cannot parse frequency {raw!r}")
    unit = m.group(2).lower() or "hz"
    if unit not in FREQ_UNITS:
        raise ValueError(f"unknown frequency unit {m.group(2)!r} (use hz, khz, mhz, ghz)")
    value = float(m.group(1)) * FREQ_UNITS[unit]
    if not value > 0:
        raise ValueError("frequency must be > 0")
    return 2 * np.pi * value


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    lines = _line_numbers(text)
    problems: list[str] = []

    def loc(section: str, key: str = "") -> str:
        n = lines.get((section, key))
        return f"{source}:{n}" if n else source

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError([f"{source}: {exc}"]) from None

    values: dict[tuple[str, str], str] = {}
    for section in parser.sections():
        sec = section.lower()
        if sec not in SCHEMA:
            problems.append(f"{loc(sec)}: unknown section [{section}]")
            continue
        for key, raw in parser.items(section):
            canon = ALIASES.get(key, key)
            if canon not in SCHEMA[sec]:
                problems.append(f"{loc(sec, key)}: unknown key '{key}' in [{sec}]")
                continue
            if key in ALIASES and re.search(r"[a-zA-Z]\s*$", raw):
                problems.append(f"{loc(sec, key)}: '{key}' takes a bare number in Hz")
                continue
            values[(sec, canon)] = raw

    for sec, key in REQUIRED:
        if (sec, key) not in values:
            problems.append(f"{source}: missing required key '{key}' in [{sec}]")

    def get(sec, key, conv, default=None):
        if (sec, key) not in values:
            return default
        raw = values[(sec, key)]
        try:
            return conv(raw)
        except ValueError as exc:
            problems.append(f"{loc(sec, key)}: {key}: {exc}")
            return default

    def number(raw: str) -> float:
        try:
            val = float(raw)
        except ValueError:
            if re.search(r"\d\s*[a-zA-Z]+\s*$", raw):
                raise ValueError(f"unit suffix not allowed here ({raw.strip()!r})") from None
            raise
        if not np.isfinite(val):
            raise ValueError("value must be finite")
        return val

    def nonneg(raw: str) -> float:
        val = number(raw)
        if val < 0:
            raise ValueError("value must be >= 0")
        return val

    def positive_int(raw: str) -> int:
        val = int(raw)
        if val < 1:
            raise ValueError("value must be >= 1")
        return val

    def choice(options):
        def conv(raw: str) -> str:
            raw = raw.strip()
            if raw not in options:
                raise ValueError(f"{raw!r} is not one of {', '.join(options)}")
            return raw
        return conv

    experiment = get("run", "experiment", choice(EXPERIMENTS))
    out = get("run", "out", str.strip)
    jobs = get("run", "jobs", positive_int, os.cpu_count() or 1)

    omega0 = get("single_qubit", "omega0", parse_frequency, REFERENCE_OMEGA0)
    for name in ("gamma1", "gamma2"):
        if ("single_qubit", name) in values and ("single_qubit", f"{name}_over_omega") in values:
            problems.append(f"{loc('single_qubit', name)}: give {name} or {name}_over_omega, not both")
    default = SingleQubitSettings()
    g1 = get("single_qubit", "gamma1", nonneg)
    g2 = get("single_qubit", "gamma2", nonneg)
    g1r = get("single_qubit", "gamma1_over_omega", nonneg)
    g2r = get("single_qubit", "gamma2_over_omega", nonneg)
    gamma1 = g1 if g1 is not None else (g1r * omega0 if g1r is not None else default.gamma1)
    gamma2 = g2 if g2 is not None else (g2r * omega0 if g2r is not None else default.gamma2)
    dephasing = get("single_qubit", "dephasing", choice(("sigma_z", "projector")), "sigma_z")
    single = SingleQubitSettings(omega0, gamma1, gamma2, dephasing)

    ryd = reference_rydberg_fixed()
    ryd["omega1"] = get("rydberg", "omega1", parse_frequency, ryd["omega1"])
    ryd["omega0"] = get("rydberg", "omega_t", parse_frequency, ryd["omega0"])
    ryd["delta_over_omega"] = get("rydberg", "delta_over_omega", number, ryd["delta_over_omega"])
    if ryd["delta_over_omega"] <= 0:
        problems.append(f"{loc('rydberg', 'delta_over_omega')}: delta_over_omega must be > 0")
    has_v = ("rydberg", "v_over_omega") in values
    has_r = ("rydberg", "r_um") in values
    has_c6 = ("rydberg", "c6_ghz_um6") in values
    if has_v and (has_r or has_c6):
        problems.append(f"{loc('rydberg', 'v_over_omega')}: give v_over_omega or r_um + c6_ghz_um6, not both")
    elif has_r != has_c6:
        problems.append(f"{loc('rydberg')}: r_um and c6_ghz_um6 must be given together")
    elif has_r:
        r_um = get("rydberg", "r_um", number)
        c6 = get("rydberg", "c6_ghz_um6", number)
        if r_um is not None and c6 is not None:
            if r_um <= 0 or c6 <= 0:
                problems.append(f"{loc('rydberg', 'r_um')}: r_um and c6_ghz_um6 must be > 0")
            else:
                ryd.pop("v_over_omega")
                ryd["c6"] = 2 * np.pi * c6 * 1e9
                ryd["r"] = r_um
    ryd["v_over_omega"] = get("rydberg", "v_over_omega", nonneg, ryd.get("v_over_omega"))
    if ryd["v_over_omega"] is None:
        ryd.pop("v_over_omega")
    for k in ("step2_area_over_pi", "step2_chi0_over_pi", "step2_phi0_over_pi", "step2_phi1_over_pi"):
        ryd[k] = get("rydberg", k, number, ryd[k])
    ryd["dephasing"] = get("rydberg", "dephasing", choice(("sigma_z", "projector")), "sigma_z")
    gamma_max = get("rydberg", "gamma_max", nonneg)

    sweep = None
    if experiment == "sweep" or any(s == "sweep" for s, _ in values):
        sweep = _parse_sweep(values, get, choice, loc, problems, single, ryd)

    error_count = get("grid", "error_count", positive_int, 21)
    rate_count = get("grid", "rate_count", positive_int, 11)
    for name, count in (("error_count", error_count), ("rate_count", rate_count)):
        if count < 2:
            problems.append(f"{loc('grid', name)}: {name} must be >= 2")
    verify_tol = get("tolerance", "verify", nonneg, 1e-8)

    if problems:
        raise ConfigError(problems)
    return RunConfig(experiment, out, jobs, single, ryd, gamma_max, sweep, error_count,
                     rate_count, verify_tol, source)


def _parse_sweep(values, get, choice, loc, problems, single, ryd) -> SweepSpec | None:
    for key in ("scheme", "gate", "axis1", "axis2"):
        if ("sweep", key) not in values:
            problems.append(f"{loc('sweep')}: missing required key '{key}' in [sweep]")

    def axis(raw: str) -> Axis:
        parts = raw.split()
        if len(parts) != 4:
            raise ValueError("expected 'name min max count'")
        name = parts[0]
        if name not in AXES:
            raise ValueError(f"unknown axis {name!r}; choose from {', '.join(AXES)}")
        return Axis(name, float(parts[1]), float(parts[2]), int(parts[3]))

    scheme = get("sweep", "scheme", choice(SCHEMES))
    gate = get("sweep", "gate", str.strip)
    a1 = get("sweep", "axis1", axis)
    a2 = get("sweep", "axis2", axis)
    metric = get("sweep", "metric", choice(METRICS), "theta_avg_gate_fidelity")
    if None in (scheme, gate, a1, a2):
        return None
    if scheme == "rydberg":
        fixed = dict(ryd)
    else:
        fixed = {"omega0": single.omega0, "dephasing": single.dephasing}
    try:
        return SweepSpec(scheme, gate, a1, a2, metric, fixed)
    except ValueError as exc:
        problems.append(f"{loc('sweep')}: {exc}")
        return None
