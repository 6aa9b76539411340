"""``geomgate`` command-line entry point.

Subcommands: ``run``, ``sweep``, ``synth``, ``verify``. Exit status is 0
on success, 2 when a sweep produced flagged cells and 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import experiments as ex
from .config import EXPERIMENTS, REFERENCE_CONFIG, ConfigError, RunConfig, parse_config, parse_frequency
from .dynamics import propagate_unitary, schedule_to_hamiltonian
from .gates import phase_insensitive_distance
from .pulses import format_schedule, read_schedule

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config(REFERENCE_CONFIG, "<built-in reference config>")
    text = Path(path).read_text()
    return parse_config(text, str(path))


def _bundle_for(cfg: RunConfig) -> ex.Bundle:
    name = cfg.experiment
    if name == "figure2":
        return ex.figure2_experiment(cfg.single)
    if name == "figure3":
        return ex.figure3_experiment(cfg.single, cfg.jobs, cfg.error_count, cfg.rate_count)
    if name == "figure6":
        return ex.figure6_experiment(cfg.single, cfg.jobs, cfg.error_count)
    if name == "figure5":
        return ex.figure5_experiment(cfg.rydberg, cfg.jobs, cfg.rate_count, cfg.rydberg_gamma_max)
    if name == "durations":
        return ex.durations_experiment(cfg.single.omega0)
    if name == "sweep":
        res = ex.run_sweep(cfg.sweep, cfg.jobs)
        b = ex.Bundle("sweep")
        ex._add_sweep(b, res)
        b.scalars["min_metric"] = float(np.min(np.where(res.flags, np.inf, res.values)))
        b.scalars["wall_time_s"] = res.wall_time
        return b
    raise ConfigError([f"unknown experiment {name!r}"])


def dispatch(cfg: RunConfig) -> int:
    """Run the configured experiment and write its CSVs plus ``resolved.cfg``."""
    bundle = _bundle_for(cfg)
    out = Path(cfg.out)
    paths = ex.write_bundle(bundle, out)
    ex.atomic_write(out / "resolved.cfg", cfg.resolved_text())
    for p in paths:
        print(f"wrote {p}")
    for key, val in bundle.scalars.items():
        print(f"{bundle.name}.{key} = {val:.10g}")
    if bundle.flagged:
        print(f"{bundle.flagged} flagged cell(s)", file=sys.stderr)
        return EXIT_FLAGGED
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    cfg = replace(cfg, experiment=args.experiment)
    if args.experiment == "sweep" and cfg.sweep is None:
        raise ConfigError([f"{cfg.source}: experiment 'sweep' needs a [sweep] section"])
    return dispatch(_overrides(cfg, args))


def _overrides(cfg: RunConfig, args) -> RunConfig:
    if args.out is not None:
        cfg = replace(cfg, out=args.out)
    if args.jobs is not None:
        cfg = replace(cfg, jobs=args.jobs)
    return cfg


def _default_axis(name: str, count: int | None, single: ex.SingleQubitSettings) -> ex.Axis:
    if name in ("zeta", "delta"):
        return ex.Axis(name, -0.1, 0.1, count or 21)
    return ex.Axis(name, 0.0, 5 * 2 * single.omega0 * 1e-3, count or 11)


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    names = [a.strip() for a in args.axes.split(",")]
    if len(names) != 2:
        raise ConfigError(["--axes takes exactly two comma-separated names"])
    a1, a2 = (_default_axis(n, args.count, cfg.single) for n in names)
    if args.scheme == "rydberg":
        fixed = dict(cfg.rydberg)
        top = cfg.rydberg_gamma_max or 1e-4 * fixed["omega0"]
        a1, a2 = (ex.Axis(a.name, 0.0, top, a.count) if a.name.startswith("gamma") else a for a in (a1, a2))
    else:
        fixed = {"omega0": cfg.single.omega0, "dephasing": cfg.single.dephasing}
    spec = ex.SweepSpec(args.scheme, args.gate, a1, a2, args.metric, fixed)
    cfg = replace(cfg, experiment="sweep", sweep=spec)
    return dispatch(_overrides(cfg, args))


def _cmd_synth(args) -> int:
    omega0 = parse_frequency(args.omega0)
    sched = ex.single_qubit_schedule(args.scheme, args.gate, omega0)
    text = format_schedule(sched)
    if args.emit:
        ex.atomic_write(Path(args.emit), text)
        print(f"wrote {args.emit} ({len(sched)} segments, {sched.duration:.6g} s)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    sched = read_schedule(args.schedule)
    tol = args.tol if args.tol is not None else load_config(args.config).verify_tol
    dist = phase_insensitive_distance(propagate_unitary(schedule_to_hamiltonian(sched)),
                                      ex.ideal_gate(args.gate))
    ok = dist <= tol
    print(f"distance = {dist:.3e} (tol {tol:.1e}): {'ok' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_ERROR


class _Parser(argparse.ArgumentParser):
    # usage errors share exit status 1 with every other failure; 2 means flagged cells
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geomgate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", help="config file (default: built-in reference parameters)")
        if out:
            p.add_argument("--out", help="output directory (overrides [run] out)")
            p.add_argument("--jobs", type=int, help="worker processes (default: logical cores)")

    p = sub.add_parser("run", help="run a named experiment")
    p.add_argument("experiment", choices=EXPERIMENTS)
    common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="two-axis parameter sweep")
    p.add_argument("--scheme", required=True, choices=ex.SCHEMES)
    p.add_argument("--gate", required=True)
    p.add_argument("--axes", default="zeta,delta", help="two of: " + ", ".join(ex.AXES))
    p.add_argument("--metric", default="theta_avg_gate_fidelity", choices=ex.METRICS)
    p.add_argument("--count", type=int, help="points per axis")
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="write a pulse schedule")
    p.add_argument("--scheme", required=True, choices=("nngqc", "ngqc", "dg"))
    p.add_argument("--gate", required=True)
    p.add_argument("--omega0", required=True, help="Rabi frequency, e.g. 6.25khz")
    p.add_argument("--emit", help="output file (default: stdout)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("verify", help="check a schedule file against a named gate")
    p.add_argument("schedule")
    p.add_argument("--gate", required=True)
    p.add_argument("--tol", type=float)
    common(p, out=False)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
