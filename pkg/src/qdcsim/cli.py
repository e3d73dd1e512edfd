"""Command-line front end: ``qdcsim {trace,sweep,verify,build}``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys
from importlib import metadata

import numpy as np

from .devices import SCENARIO_NAMES, build_hamiltonian, load_config, switching_sweep
from .evolution import QuantumState, diagonalize, trace
from .lattice import SiteLabel
from .spin import SpinKet, SpinModelConfig
from .verify import run_all

DETERMINISM_NOTE = "no randomness: identical manifest gives byte-identical output"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def fmt(x: float) -> str:
    """12 significant digits; ``-0`` and tiny negatives from rounding print as 0."""
    s = f"{x:.12g}"
    return "0" if s.startswith("-") and float(s) == 0 else s


def column_names(config) -> list[str]:
    if isinstance(config, SpinModelConfig):
        return [ket.name for ket in config.basis()]
    return [label.name(config.n_rows) for label in config.basis()]


def initial_label(config):
    if isinstance(config, SpinModelConfig):
        return SpinKet(-config.j_v.two_j, -config.j_h.two_j)
    return SiteLabel(1, 1)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_manifest(path, command: str, config: dict, outputs: dict) -> None:
    manifest = {
        "command": command,
        "config": config,
        "determinism": DETERMINISM_NOTE,
        "outputs": outputs,
        "version": _version(),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_trace_csv(fh, config, t_max: float, steps: int) -> None:
    p = diagonalize(build_hamiltonian(config))
    psi0 = QuantumState.localized(p.basis, initial_label(config))
    tr = trace(p, psi0, t_max, steps)
    buf = io.StringIO()
    buf.write(",".join(["t", *column_names(config)]) + "\n")
    for t, row in zip(tr.times, tr.probabilities):
        buf.write(",".join([fmt(t), *(fmt(x) for x in row)]) + "\n")
    fh.write(buf.getvalue())


def parse_control_range(text: str) -> list[float]:
    """``START:STOP:COUNT`` (inclusive linspace) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"control range {text!r} is not START:STOP:COUNT")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("control range needs at least one point")
        return [float(x) for x in np.linspace(start, stop, count)]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("control range is empty")
    return values


def cmd_trace(args) -> int:
    config = load_config(args.config)
    with _output(args.out) as fh:
        write_trace_csv(fh, config, args.tmax, args.steps)
    if args.manifest:
        _write_manifest(args.manifest, "trace", config.to_dict(),
                        {"csv": args.out or "-", "tmax": args.tmax, "steps": args.steps})
    return 0


def cmd_sweep(args) -> int:
    controls = parse_control_range(args.control_range)
    rows = switching_sweep(args.family, args.n, controls, omega=args.omega, m=args.m)
    with _output(args.out) as fh:
        lines = ["control,f_source,f_drain"]
        lines += [f"{fmt(r.control)},{fmt(r.f_source)},{fmt(r.f_drain)}" for r in rows]
        fh.write("\n".join(lines) + "\n")
    if args.manifest:
        _write_manifest(args.manifest, "sweep",
                        {"family": args.family, "n": args.n, "m": args.m, "omega": args.omega,
                         "controls": controls},
                        {"csv": args.out or "-"})
    return 0


def cmd_verify(args) -> int:
    checks = run_all(args.scenario)
    if args.json:
        json.dump({"passed": all(c.passed for c in checks),
                   "checks": [c.to_dict() for c in checks]}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for c in checks:
            print(c.line())
        failed = sum(not c.passed for c in checks)
        print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if all(c.passed for c in checks) else 1


def cmd_build(args) -> int:
    config = load_config(args.config)
    h = build_hamiltonian(config)
    names = column_names(config)
    with _output(args.out) as fh:
        fh.write(",".join(["label", *names]) + "\n")
        for name, row in zip(names, h.matrix):
            fh.write(",".join([name, *(repr(float(x)) for x in row)]) + "\n")
    if args.manifest:
        _write_manifest(args.manifest, "build", config.to_dict(), {"csv": args.out or "-"})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdcsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="occupation probabilities vs time as CSV")
    p.add_argument("--config", required=True, help="device JSON config")
    p.add_argument("--tmax", type=float, default=math.pi / 2, help="final time in units of 1/omega")
    p.add_argument("--steps", type=int, default=200, help="number of time samples incl. endpoints")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--manifest", help="write a JSON run manifest here")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("sweep", help="switching characteristic at tau as CSV")
    p.add_argument("--family", choices=("grid", "coupler"), required=True)
    p.add_argument("--n", type=int, required=True, help="sites per channel")
    p.add_argument("--m", type=int, default=2, help="grid rows (grid family only)")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--control-range", default="0:1:11",
                   help="START:STOP:COUNT or comma list; K/omega (grid) or kappa/g (coupler)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--manifest", help="write a JSON run manifest here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the routing scenarios and invariant checks")
    p.add_argument("--scenario", choices=SCENARIO_NAMES, help="run a single scenario")
    p.add_argument("--json", action="store_true", help="machine-readable summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", help="dump the Hamiltonian matrix as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_build)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"qdcsim: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qdcsim: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
