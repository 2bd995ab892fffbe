"""
Command-line frontend.

    python main.py point --theta 0.5pi --phi 0.5pi --j -2 --delta 0
    python main.py fig fig4c -o fig4c.csv
    python main.py sweep --config sweep.json -o out.csv
    python main.py solve --config system.json --delta 0.5
    python main.py verify -n 10000 --seed 42
    python main.py serve

Exit codes: 0 ok, 1 invariant failure, 2 usage/validation, 3 I/O.
"""

import argparse
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, fields
from typing import Optional

from config.settings import Config
from waveguide.closed_form import amplitudes_full, collective_params
from waveguide.conditions import classify_condition
from waveguide.errors import ScatteringError
from waveguide.model import TwoAtomParams
from waveguide.presets import PRESETS, figure_preset
from waveguide.solver import Direction, ScatteringProblem, solve, solve_two_atom
from waveguide.storage import Storage
from waveguide.sweep import format_summary, run_sweep, summarize

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

ANGLE_PATTERN = re.compile(r'^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\*?pi(?:/(\d+\.?\d*))?$')
POINT_FIELDS = ("theta", "phi", "gamma", "j", "kappa", "delta")


def parse_angle(text: str) -> float:
    """Radians, or a multiple of π: 'pi', '0.5pi', '3pi/2', '-pi/2'."""
    cleaned = text.replace(" ", "").lower()
    match = ANGLE_PATTERN.match(cleaned)
    if match:
        sign, coefficient, divisor = match.groups()
        value = float(coefficient) if coefficient else 1.0
        if divisor:
            value /= float(divisor)
        return (-value if sign == "-" else value) * math.pi
    try:
        return float(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle '{text}'")


@dataclass
class CliConfig:
    """Resolved parameters of a `point` invocation."""
    params: TwoAtomParams
    engine: str = "closed_form"
    carrier: float = Config.ORACLE_CARRIER
    pole_guard: float = Config.POLE_GUARD
    as_json: bool = False


def resolve_point_config(args, storage: Storage) -> CliConfig:
    inline = {name: getattr(args, name) for name in POINT_FIELDS if getattr(args, name) is not None}
    if args.config and inline:
        raise ScatteringError("use either inline flags or --config, not both")

    if args.config:
        data = storage.load_json(args.config)
        values = {"detuning" if k == "delta" else k: v for k, v in data.items()}
    else:
        if "theta" not in inline or "phi" not in inline:
            raise ScatteringError("--theta and --phi are required without --config")
        values = {
            "theta": inline["theta"],
            "phi": inline["phi"],
            "gamma": inline.get("gamma", Config.GAMMA),
            "j": inline.get("j", 0.0),
            "kappa": inline.get("kappa", 0.0),
            "detuning": inline.get("delta", 0.0),
        }
    known = {f.name for f in fields(TwoAtomParams)}
    unknown = set(values) - known
    if unknown:
        raise ScatteringError(f"unknown parameters: {', '.join(sorted(unknown))}")

    return CliConfig(
        params=TwoAtomParams(**values),
        engine=args.engine,
        carrier=args.carrier,
        pole_guard=args.pole_guard,
        as_json=args.json,
    )


def point_report(cli: CliConfig) -> dict:
    p = cli.params
    if cli.engine == "real_space":
        amplitudes = solve_two_atom(p, carrier=cli.carrier)
    else:
        amplitudes = amplitudes_full(p, pole_guard=cli.pole_guard)
    conditions = classify_condition(p)
    return {
        "params": vars(p).copy(),
        "engine": cli.engine,
        "amplitudes": amplitudes.to_dict(),
        "probabilities": amplitudes.probabilities().to_dict(),
        "collective": collective_params(p).to_dict(),
        "conditions": {**conditions.to_dict(), "reason": conditions.describe()},
    }


def format_point(report: dict) -> str:
    lines = [f"engine: {report['engine']}"]
    lines.append("params: " + ", ".join(f"{k}={v:.6g}" for k, v in report["params"].items()))
    lines.append("amplitudes:")
    for name, (re_part, im_part) in report["amplitudes"].items():
        lines.append(f"  {name:<5} = {re_part:+.12f} {im_part:+.12f}i")
    lines.append("probabilities: " + ", ".join(f"{k}={v:.12g}" for k, v in report["probabilities"].items()))
    collective = report["collective"]
    lines.append(
        f"collective: λ+={complex(*collective['lambda_plus']):.6g} λ-={complex(*collective['lambda_minus']):.6g} "
        f"Γ1±=({collective['gamma1_plus']:.6g}, {collective['gamma1_minus']:.6g}) "
        f"Γ2±=({collective['gamma2_plus']:.6g}, {collective['gamma2_minus']:.6g}) "
        f"J_Σ={collective['j_sigma']:.6g}"
    )
    flags = [k for k, v in report["conditions"].items() if v is True]
    lines.append(f"conditions: {', '.join(flags) if flags else 'none'}")
    lines.append(f"  {report['conditions']['reason']}")
    return "\n".join(lines)


def cmd_point(args, storage: Storage) -> int:
    report = point_report(resolve_point_config(args, storage))
    print(json.dumps(report, indent=2) if args.json else format_point(report))
    return EXIT_OK


def cmd_fig(args, storage: Storage) -> int:
    spec = figure_preset(args.name, points=args.points)
    frame = run_sweep(spec)
    path = storage.save_sweep(frame, args.output or f"{args.name}.csv")
    print(f"{args.name}: {path} {format_summary(summarize(frame))}")
    return EXIT_OK


def cmd_sweep(args, storage: Storage) -> int:
    spec = storage.load_sweep(args.config)
    frame = run_sweep(spec)
    path = storage.save_sweep(frame, args.output or f"{spec.name}.csv")
    print(f"{spec.name}: {path} {format_summary(summarize(frame))}")
    return EXIT_OK


def cmd_solve(args, storage: Storage) -> int:
    system = storage.load_system(args.config)
    problem = ScatteringProblem(
        system,
        photon_energy=args.delta,
        input_waveguide=args.input_waveguide,
        input_direction=Direction.LEFTWARD if args.leftward else Direction.RIGHTWARD,
    )
    record = solve(problem).to_dict()
    if args.output:
        storage.save_json(record, args.output)
    print(json.dumps(record, indent=2))
    return EXIT_OK


def cmd_verify(args, storage: Storage) -> int:
    from verify import format_report, run_verification

    if args.samples < 1:
        raise ScatteringError("sample count must be at least 1")
    results = run_verification(args.samples, args.seed)
    print(format_report(results))
    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_serve(args, storage: Storage) -> int:
    import uvicorn
    from api.server import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Single-photon scattering for giant atoms on coupled waveguides')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    point = sub.add_parser('point', help='Evaluate one parameter point')
    point.add_argument('--theta', type=parse_angle, help='θ = kx₁ (radians or multiple of pi)')
    point.add_argument('--phi', type=parse_angle, help='φ = kx₂ (radians or multiple of pi)')
    point.add_argument('--gamma', type=float, help='γ = V²/v_g')
    point.add_argument('--j', type=float, help='Direct coupling J')
    point.add_argument('--kappa', type=float, help='Non-waveguide dissipation κ')
    point.add_argument('--delta', type=float, help='Detuning Δ = E − ω')
    point.add_argument('--config', help='JSON file with theta, phi, gamma, j, kappa, detuning')
    point.add_argument('--engine', choices=['closed_form', 'real_space'], default='closed_form')
    point.add_argument('--carrier', type=float, default=Config.ORACLE_CARRIER, help='Carrier for real_space')
    point.add_argument('--pole-guard', type=float, default=Config.POLE_GUARD)
    point.add_argument('--json', action='store_true', help='Machine-readable output')
    point.set_defaults(handler=cmd_point)

    fig = sub.add_parser('fig', help='Regenerate a figure dataset as CSV')
    fig.add_argument('name', help=f"One of: {', '.join(PRESETS)}")
    fig.add_argument('-o', '--output', help='CSV path')
    fig.add_argument('--points', type=int, default=Config.GRID_POINTS, help='Points per axis')
    fig.set_defaults(handler=cmd_fig)

    sweep = sub.add_parser('sweep', help='Run a sweep described in a JSON file')
    sweep.add_argument('--config', required=True)
    sweep.add_argument('-o', '--output', help='CSV path')
    sweep.set_defaults(handler=cmd_sweep)

    solve_parser = sub.add_parser('solve', help='Solve a SystemSpec JSON at one photon energy')
    solve_parser.add_argument('--config', required=True)
    solve_parser.add_argument('--delta', type=float, default=0.0, help='Photon energy (system units)')
    solve_parser.add_argument('--input-waveguide', type=int, default=0)
    solve_parser.add_argument('--leftward', action='store_true', help='Photon enters from +∞')
    solve_parser.add_argument('-o', '--output', help='JSON path')
    solve_parser.set_defaults(handler=cmd_solve)

    verify = sub.add_parser('verify', help='Audit invariants on random samples')
    verify.add_argument('-n', '--samples', type=int, default=10000)
    verify.add_argument('--seed', type=int, default=42)
    verify.set_defaults(handler=cmd_verify)

    serve = sub.add_parser('serve', help='Start the HTTP API')
    serve.add_argument('--host', default=Config.API_HOST)
    serve.add_argument('--port', type=int, default=Config.API_PORT)
    serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK

    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=logging.DEBUG if args.verbose else Config.LOG_LEVEL,
    )
    storage = Storage()

    try:
        return args.handler(args, storage)
    except ScatteringError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError, KeyError) as e:
        # configs con campos mal formados
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
