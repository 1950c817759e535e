"""Command-line front end: run checks, tabulate kernels, dump solutions.

Subcommands
-----------
verify    run every named identity check, write a JSON report, exit 0/1
kernel    tabulate one kernel over a time/position grid as CSV
fock-vev  compare time-ordered vacuum expectations against the Feynman
          kernel over seeded point pairs, written as JSON records
dirac     dump the rest-frame and plane-wave spinor solutions as JSON
absorber  emit the per-mode energy spectrum of seeded (or file-loaded)
          currents as CSV plus a JSON summary

Exit codes: 0 on success, 1 when an identity check fails its tolerance,
2 on invalid input (the message names the offending field).

All file outputs format floats with ``repr`` and sort JSON keys, so
repeated runs with the same configuration are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import absorber, dirac, fock
from .lattice import LatticeSpec, ValidationError, build_lattice
from .propagators import (
    KernelKind,
    QuadratureError,
    eval_kernel,
    kernel_values,
    make_point,
    separation,
)
from .suite import DEFAULT_TOLERANCES, all_passed, run_all_checks

__all__ = ["RunConfig", "main", "report_schema_version"]

_SCHEMA_VERSION = "1"


def report_schema_version() -> str:
    """Version tag stamped into every JSON report this tool writes."""
    return _SCHEMA_VERSION


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters shared by every subcommand."""

    n_space: int = 64
    box_length: float = 10.0
    mass: float = 1.0
    dt: float = 0.1
    n_time: int = 64
    seed: int = 42
    out_dir: Path = Path(".")
    tolerances: tuple[tuple[str, float], ...] = ()

    def lattice_spec(self) -> LatticeSpec:
        return LatticeSpec(
            n_space=self.n_space,
            box_length=self.box_length,
            mass=self.mass,
            dt=self.dt,
            n_time=self.n_time,
        )

    def tolerance_map(self) -> dict[str, float]:
        return dict(self.tolerances)

    def to_record(self) -> dict:
        return {
            "n_space": self.n_space,
            "box_length": self.box_length,
            "mass": self.mass,
            "dt": self.dt,
            "n_time": self.n_time,
            "seed": self.seed,
            "tolerances": self.tolerance_map(),
        }


_CONFIG_CASTS = {
    "n_space": int,
    "box_length": float,
    "mass": float,
    "dt": float,
    "n_time": int,
    "seed": int,
    "out": str,
}


def load_config_file(path: str | Path) -> dict:
    """Parse a plain ``key=value`` file ('#' comments, blank lines allowed)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"config: cannot read {path}: {exc}") from exc
    values: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key:
            raise ValidationError(
                f"config line {lineno}: expected key=value, got {raw_line.strip()!r}"
            )
        if key not in _CONFIG_CASTS:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_CASTS[key](raw)
        except ValueError as exc:
            raise ValidationError(
                f"config line {lineno}: invalid value for {key!r}: {raw!r}"
            ) from exc
    return values


def parse_tolerance_overrides(entries: list[str] | None) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for entry in entries or []:
        name, sep, raw = entry.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ValidationError(
                f"tolerance: expected CHECK=VALUE, got {entry!r}"
            )
        try:
            value = float(raw)
        except ValueError as exc:
            raise ValidationError(
                f"tolerance: invalid value for {name!r}: {raw.strip()!r}"
            ) from exc
        overrides[name] = value
    unknown = set(overrides) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ValidationError(
            f"tolerance: unknown check name(s): {', '.join(sorted(unknown))}"
        )
    return overrides


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge CLI flags over config-file values over defaults."""
    from_file = load_config_file(args.config) if args.config else {}

    def pick(flag_value, key: str, default):
        if flag_value is not None:
            return flag_value
        if key in from_file:
            return from_file[key]
        return default

    overrides = parse_tolerance_overrides(args.tolerance)
    return RunConfig(
        n_space=pick(args.n_space, "n_space", 64),
        box_length=pick(args.box_length, "box_length", 10.0),
        mass=pick(args.mass, "mass", 1.0),
        dt=pick(args.dt, "dt", 0.1),
        n_time=pick(args.n_time, "n_time", 64),
        seed=pick(args.seed, "seed", 42),
        out_dir=Path(pick(args.out, "out", ".")),
        tolerances=tuple(sorted(overrides.items())),
    )


def _parse_linspace(text: str, field_name: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(
            f"{field_name}: expected START:STOP:COUNT, got {text!r}"
        )
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(
            f"{field_name}: expected START:STOP:COUNT, got {text!r}"
        ) from exc
    if count < 1:
        raise ValidationError(f"{field_name}: count must be >= 1, got {count}")
    return np.linspace(start, stop, count)


def _axis_values(
    scalar: float | None, ranged: str | None, field_name: str
) -> np.ndarray:
    if scalar is not None and ranged is not None:
        raise ValidationError(
            f"{field_name}: give either a single value or a range, not both"
        )
    if scalar is not None:
        return np.array([scalar])
    if ranged is not None:
        return _parse_linspace(ranged, field_name)
    raise ValidationError(f"{field_name}: a value or range is required")


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _complex_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def _ensure_out_dir(config: RunConfig) -> Path:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    return config.out_dir


# --- subcommand handlers ----------------------------------------------------

def cmd_verify(config: RunConfig, args: argparse.Namespace) -> int:
    results = run_all_checks(
        config.lattice_spec(), seed=config.seed, tolerances=config.tolerance_map()
    )
    for result in results:
        verdict = "PASS" if result.passed else "FAIL"
        print(
            f"{verdict} {result.name} "
            f"max_residual={result.max_residual:.6e} "
            f"tolerance={result.tolerance:.6e}"
        )
    out_dir = _ensure_out_dir(config)
    report = {
        "schema_version": report_schema_version(),
        "config": config.to_record(),
        "checks": [result.to_record() for result in results],
    }
    report_path = out_dir / "verify_report.json"
    _write_json(report_path, report)
    print(f"report written to {report_path}")
    return 0 if all_passed(results) else 1


def cmd_kernel(config: RunConfig, args: argparse.Namespace) -> int:
    kind = KernelKind(args.kind)
    ts = _axis_values(args.t, args.t_range, "t")
    xs = _axis_values(args.x, args.x_range, "x")
    lattice = build_lattice(config.lattice_spec())
    out_dir = _ensure_out_dir(config)
    path = out_dir / f"kernel_{kind.value}.csv"
    rows = 0
    with open(path, "w", newline="") as fh:
        fh.write("kind,t,x,re,im\n")
        for t in ts:
            for x in xs:
                value = complex(
                    kernel_values(
                        lattice.momenta,
                        lattice.frequencies,
                        lattice.spec.box_length,
                        kind,
                        float(t),
                        float(x),
                        step_at_zero=args.step_at_zero,
                    )
                )
                fh.write(
                    f"{kind.value},{float(t)!r},{float(x)!r},"
                    f"{value.real!r},{value.imag!r}\n"
                )
                rows += 1
    print(f"wrote {rows} rows to {path}")
    return 0


def cmd_fock_vev(config: RunConfig, args: argparse.Namespace) -> int:
    lattice = build_lattice(config.lattice_spec())
    mode_spec = fock.mode_spec_from_lattice(lattice, max_occupation=1)
    rng = np.random.default_rng(config.seed)
    L = config.box_length
    records = []
    worst = 0.0
    truncations = 0
    for idx in range(args.n_pairs):
        t1, t2 = rng.uniform(-2.0, 2.0, size=2)
        while abs(t1 - t2) < 1e-3:
            t2 = float(rng.uniform(-2.0, 2.0))
        if (t1 > t2) != (idx % 2 == 0):
            t1, t2 = t2, t1
        x1, x2 = rng.uniform(0.0, L, size=2)
        p_x = make_point(float(t1), float(x1), L)
        p_y = make_point(float(t2), float(x2), L)
        vev, events = fock.time_ordered_vev_detail(mode_spec, p_x, p_y)
        kernel = eval_kernel(lattice, KernelKind.FEYNMAN, separation(p_x, p_y, L))
        diff = abs(vev - kernel)
        worst = max(worst, diff)
        truncations += events
        records.append(
            {
                "x": [p_x.t, p_x.x],
                "y": [p_y.t, p_y.x],
                "vev": _complex_pair(vev),
                "i_feynman": _complex_pair(kernel),
                "abs_diff": float(diff),
            }
        )
    out_dir = _ensure_out_dir(config)
    path = out_dir / "fock_vev.json"
    _write_json(path, records)
    print(
        f"{args.n_pairs} pairs, max |vev - kernel| = {worst:.6e}, "
        f"truncation events = {truncations}"
    )
    print(f"records written to {path}")
    return 0 if worst <= args.abs_tol and truncations == 0 else 1


def _spinor_record(solution: dirac.DiracSpinorSolution) -> dict:
    current = dirac.probability_current(solution)
    return {
        "index": solution.index,
        "p": [float(p) for p in solution.momentum],
        "m": float(solution.mass),
        "E": float(solution.energy),
        "spinor": [_complex_pair(c) for c in solution.spinor],
        "current": [float(j) for j in current],
        "residual": float(dirac.dirac_residual(solution)),
    }


def cmd_dirac(config: RunConfig, args: argparse.Namespace) -> int:
    parts = [piece.strip() for piece in args.p.split(",")]
    if len(parts) != 3:
        raise ValidationError(
            f"p: expected three comma-separated components, got {args.p!r}"
        )
    try:
        momentum = [float(piece) for piece in parts]
    except ValueError as exc:
        raise ValidationError(f"p: invalid component in {args.p!r}") from exc

    solutions = list(dirac.rest_frame_solutions(config.mass))
    if any(momentum):
        for sign in (1, -1):
            for spin in (1, 2):
                solutions.append(
                    dirac.plane_wave_solution(momentum, config.mass, sign, spin)
                )
    records = [_spinor_record(sol) for sol in solutions]
    for record in records:
        print(
            f"index={record['index']} E={record['E']!r} "
            f"j0={record['current'][0]!r} j1={record['current'][1]!r} "
            f"residual={record['residual']:.3e}"
        )
    out_dir = _ensure_out_dir(config)
    path = out_dir / "dirac_solutions.json"
    _write_json(path, records)
    print(f"solutions written to {path}")
    return 0


def cmd_absorber(config: RunConfig, args: argparse.Namespace) -> int:
    lattice = build_lattice(config.lattice_spec())
    if args.current is not None:
        currents = [
            absorber.current_from_csv(
                args.current, config.n_time, config.n_space
            )
        ]
    else:
        rng = np.random.default_rng(config.seed)
        currents = [
            absorber.random_current(lattice, rng) for _ in range(args.n_currents)
        ]
    if args.project:
        currents = [absorber.project_light_tight(c, lattice) for c in currents]

    free_residual = absorber.free_field_identity(currents, lattice)
    parseval = absorber.spectrum_consistency_residual(currents, lattice)
    spectrum = absorber.emitted_spectrum(currents, lattice)
    light_tight = spectrum.total <= args.abs_tol

    out_dir = _ensure_out_dir(config)
    spectrum_path = out_dir / "spectrum.csv"
    spectrum.to_csv(spectrum_path)
    summary = {
        "total": spectrum.total,
        "n_modes": int(spectrum.energies.size),
        "light_tight": light_tight,
        "tolerance": float(args.abs_tol),
    }
    summary_path = out_dir / "absorber_summary.json"
    _write_json(summary_path, summary)

    print(f"free-field conversion residual = {free_residual:.6e}")
    print(f"mode-sum consistency residual = {parseval:.6e}")
    print(f"total emitted energy = {spectrum.total!r}")
    print(f"light-tight: {light_tight} (tolerance {args.abs_tol!r})")
    print(f"spectrum written to {spectrum_path}")
    print(f"summary written to {summary_path}")
    identity_tol = 1e-10
    return 0 if free_residual <= identity_tol and parseval <= identity_tol else 1


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-space", type=int, default=None,
                        help="spatial points per period (even, default 64)")
    common.add_argument("--box-length", type=float, default=None,
                        help="spatial period L (default 10.0)")
    common.add_argument("--mass", type=float, default=None,
                        help="field mass m > 0 (default 1.0)")
    common.add_argument("--dt", type=float, default=None,
                        help="time step (default 0.1)")
    common.add_argument("--n-time", type=int, default=None,
                        help="number of time samples (default 64)")
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed for all sampling (default 42)")
    common.add_argument("--tolerance", action="append", metavar="CHECK=VALUE",
                        default=None,
                        help="override one check tolerance (repeatable)")
    common.add_argument("--out", type=str, default=None,
                        help="output directory (default current directory)")
    common.add_argument("--config", type=str, default=None,
                        help="key=value file supplying defaults for the above")

    parser = argparse.ArgumentParser(
        prog="boxqft",
        description="Discrete mode-sum kernels, truncated Fock checks, "
                    "spinor solutions, and current-current interaction sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common],
                   help="run every named identity check and write a report")

    kernel = sub.add_parser("kernel", parents=[common],
                            help="tabulate one kernel over a (t, x) grid")
    kernel.add_argument("--kind", required=True,
                        choices=[k.value for k in KernelKind])
    kernel.add_argument("--t", type=float, default=None, help="single time")
    kernel.add_argument("--t-range", type=str, default=None,
                        metavar="START:STOP:COUNT")
    kernel.add_argument("--x", type=float, default=None, help="single position")
    kernel.add_argument("--x-range", type=str, default=None,
                        metavar="START:STOP:COUNT")
    kernel.add_argument("--step-at-zero", action="store_true",
                        help="use the continuous t=0 extension for kernels "
                             "with a step factor instead of rejecting t=0")

    vev = sub.add_parser("fock-vev", parents=[common],
                         help="time-ordered vacuum expectations vs the "
                              "Feynman kernel")
    vev.add_argument("--n-pairs", type=int, default=20,
                     help="number of seeded point pairs (default 20)")
    vev.add_argument("--abs-tol", type=float, default=1e-10,
                     help="pass threshold on |vev - kernel| (default 1e-10)")

    dirac_cmd = sub.add_parser("dirac", parents=[common],
                               help="dump rest-frame and plane-wave spinor "
                                    "solutions")
    dirac_cmd.add_argument("--p", type=str, default="0.5,0,0",
                           metavar="PX,PY,PZ",
                           help="spatial momentum (default 0.5,0,0; "
                                "0,0,0 dumps the rest frame only)")

    absorber_cmd = sub.add_parser("absorber", parents=[common],
                                  help="emission spectrum and interaction "
                                       "identities for sampled currents")
    absorber_cmd.add_argument("--n-currents", type=int, default=3,
                              help="number of seeded random currents "
                                   "(default 3)")
    absorber_cmd.add_argument("--current", type=str, default=None,
                              metavar="CSV",
                              help="load one current from CSV "
                                   "(t_index,x_index,value) instead")
    absorber_cmd.add_argument("--project", action="store_true",
                              help="remove the on-shell content of each "
                                   "current before computing the spectrum")
    absorber_cmd.add_argument("--abs-tol", type=float, default=1e-10,
                              help="light-tight verdict threshold on the "
                                   "total emission (default 1e-10)")
    return parser


_HANDLERS = {
    "verify": cmd_verify,
    "kernel": cmd_kernel,
    "fock-vev": cmd_fock_vev,
    "dirac": cmd_dirac,
    "absorber": cmd_absorber,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_run_config(args)
        return _HANDLERS[args.command](config, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, dirac.DegenerateSolutionError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
