"""Batch experiment runner.

Reads a strict JSON config, builds a gallery system, runs one certification,
solver, or trace experiment, and writes ``trace.csv`` plus ``summary.json``
into the output directory. Same config and seed give byte-identical outputs,
except for the timestamp kept in the summary's separate metadata field.

Exit codes: 0 success (including expected non-convergence), 2 validation
error, 3 map error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import gallery, orbit
from .spaces import Exponent, as_exponent
from .system import LinearPhi, MapError, Phi, TabulatedPhi, validate_phi, verify_contraction, verify_cyclicity

RUNS = ("certify", "banach", "periodic", "proximity", "trace")
CONFIG_KEYS = {"system", "p", "phi", "run", "iterations", "tolerance", "seed", "output_dir"}
REQUIRED_KEYS = CONFIG_KEYS - {"output_dir"}


class ConfigError(ValueError):
    """The experiment config fails validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    system_id: str
    parameters: dict
    p: Exponent
    phi: Phi
    run: str
    iterations: int
    tolerance: float
    seed: int
    output_dir: str | None = None


def _parse_phi(data: object) -> Phi:
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("phi must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "linear":
            extra = set(data) - {"kind", "alpha"}
            if extra:
                raise ConfigError(f"unknown phi keys: {sorted(extra)}")
            return LinearPhi(float(data["alpha"]))
        if kind == "tabulated":
            extra = set(data) - {"kind", "knots"}
            if extra:
                raise ConfigError(f"unknown phi keys: {sorted(extra)}")
            return TabulatedPhi(tuple((float(t), float(v)) for t, v in data["knots"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid phi: {exc}") from exc
    raise ConfigError(f"unknown phi kind {kind!r}")


def parse_config(data: object) -> ExperimentConfig:
    """Validate a config dict strictly: unknown keys are errors."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = REQUIRED_KEYS - set(data)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")

    system = data["system"]
    if not isinstance(system, dict) or set(system) - {"id", "parameters"} or "id" not in system:
        raise ConfigError("system must be an object with 'id' and optional 'parameters'")
    parameters = system.get("parameters", {})
    if not isinstance(parameters, dict):
        raise ConfigError("system.parameters must be an object")

    if data["run"] not in RUNS:
        raise ConfigError(f"run must be one of {RUNS}")
    try:
        p = as_exponent(data["p"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid p: {exc}") from exc

    iterations = data["iterations"]
    if not isinstance(iterations, int) or iterations < 1:
        raise ConfigError("iterations must be a positive integer")
    tolerance = data["tolerance"]
    if not isinstance(tolerance, (int, float)) or not tolerance > 0:
        raise ConfigError("tolerance must be a positive number")
    seed = data["seed"]
    if not isinstance(seed, int):
        raise ConfigError("seed is mandatory and must be an integer")

    output_dir = data.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ConfigError("output_dir must be a string path")

    return ExperimentConfig(
        system_id=system["id"],
        parameters=parameters,
        p=p,
        phi=_parse_phi(data["phi"]),
        run=data["run"],
        iterations=iterations,
        tolerance=float(tolerance),
        seed=seed,
        output_dir=output_dir,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


def _write_trace_csv(path: Path, trace: orbit.OrbitTrace, p: Exponent) -> None:
    """One row per block n; floats use shortest round-trip formatting."""
    m = trace.m
    chain = orbit.chain_trace(trace, p)
    edges = [orbit.edge_trace(trace, i) for i in range(1, m + 1)]
    drifts = [orbit.block_drift_trace(trace, i) for i in range(1, m + 1)]
    rows = min(
        (len(chain) - 1) // m + 1,
        *(len(e) for e in edges),
        *(len(d) for d in drifts),
    )
    header = (
        ["n", "chain_dp"]
        + [f"edge_{i}" for i in range(1, m + 1)]
        + [f"block_drift_{i}" for i in range(1, m + 1)]
    )
    lines = [",".join(header)]
    for n in range(rows):
        cells = [str(n), repr(chain[m * n])]
        cells += [repr(edges[i][n]) for i in range(m)]
        cells += [repr(drifts[i][n]) for i in range(m)]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _point_list(point) -> list[float] | None:
    return None if point is None else list(point)


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None) -> dict:
    """Run one experiment; returns the summary dict after writing the files."""
    destination = out_dir or config.output_dir
    if destination is None:
        raise ConfigError("no output directory: set output_dir or pass --out")
    gs = gallery.build(config.system_id, config.parameters)
    system = gs.system
    m = system.m
    p = config.p

    n_orbit = max(3 * m, min(config.iterations, 10_000))
    trace = orbit.picard_orbit(system, gs.default_start, n_orbit)

    result: dict = {
        "point": None,
        "residual": None,
        "proximity_residual": None,
        "converged": None,
        "iterations": None,
        "chain": None,
        "edge_residuals": None,
        "warnings": [],
        "note": None,
    }
    certificate = None

    if config.run == "banach":
        solved = orbit.banach_solve(
            system,
            gs.default_start,
            tol=config.tolerance,
            max_iter=config.iterations,
            p=p,
            contraction_alpha=gs.step_factor,
        )
        result.update(
            point=_point_list(solved.point),
            residual=solved.residual,
            converged=solved.converged,
            iterations=solved.iterations,
            warnings=list(solved.warnings),
        )
    elif config.run == "periodic":
        solved = orbit.periodic_point_solve(
            system, gs.default_start, tol=config.tolerance, max_iter=config.iterations, p=p
        )
        result.update(
            point=_point_list(solved.point),
            residual=solved.residual,
            proximity_residual=solved.proximity_residual,
            converged=solved.converged,
            iterations=solved.iterations,
            warnings=list(solved.warnings),
        )
    elif config.run == "proximity":
        extracted = orbit.proximity_chain_extract(
            system, gs.default_start, tol=config.tolerance, max_iter=config.iterations, p=p
        )
        result.update(
            chain=[list(pt) for pt in extracted.chain],
            proximity_residual=extracted.total_residual,
            edge_residuals=list(extracted.edge_residuals),
            converged=extracted.converged,
            iterations=extracted.iterations,
            note=extracted.note,
        )
        if not gs.attainable and not extracted.converged:
            result["note"] = (extracted.note or "") + "; set chain distance is not attained"
    elif config.run == "certify":
        cyclicity = verify_cyclicity(system, samples_per_region=200, seed=config.seed)
        dp_sets = system.set_chain_distance(p)
        grid = [0.0, 0.25, 0.5, 1.0, dp_sets + 1.0, dp_sets + 2.0]
        phi_report = validate_phi(config.phi, sorted(set(grid)))
        cert = verify_contraction(
            system, config.phi, p, tuple_samples=config.iterations, seed=config.seed
        )
        certificate = {
            "passed": cert.ok,
            "min_margin": cert.min_margin,
            "witness_x": [list(pt) for pt in cert.witness_xs],
            "witness_y": [list(pt) for pt in cert.witness_ys],
            "evaluated": cert.evaluated,
            "exhaustive": cert.exhaustive,
            "artifact_skips": cert.artifact_skips,
            "cyclicity_ok": cyclicity.ok,
            "phi_ok": phi_report.ok,
        }
        result["converged"] = cert.ok

    summary = {
        "system": {"id": gs.spec.id, "parameters": gs.spec.parameter_dict()},
        "run": config.run,
        "p": "inf" if p.is_inf else p.value,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "iterations_requested": config.iterations,
        "d_p_sets": system.set_chain_distance(p),
        "result": result,
        "certificate": certificate,
        "metadata": {"timestamp": datetime.now(timezone.utc).isoformat()},
    }

    out_path = Path(destination)
    out_path.mkdir(parents=True, exist_ok=True)
    _write_trace_csv(out_path / "trace.csv", trace, p)
    with open(out_path / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    run_experiment(config, out_dir=args.out)
    return 0


def _cmd_gallery_list(args: argparse.Namespace) -> int:
    entries = gallery.list_gallery()
    if args.json:
        print(json.dumps(entries, indent=2))
        return 0
    for entry in entries:
        print(f"{entry['id']}: {entry['description']}")
        for param in entry["parameters"]:
            print(f"    {param['name']} in {param['domain']} (default {param['default']})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxcycle",
        description="run cyclic-contraction experiments on gallery systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run one experiment from a JSON config")
    run_parser.add_argument("--config", required=True, help="path to the config JSON")
    run_parser.add_argument("--out", default=None, help="output directory (overrides config)")
    run_parser.set_defaults(handler=_cmd_run)

    gallery_parser = sub.add_parser("gallery", help="gallery inspection")
    gallery_sub = gallery_parser.add_subparsers(dest="gallery_command", required=True)
    list_parser = gallery_sub.add_parser("list", help="list gallery systems")
    list_parser.add_argument("--json", action="store_true", help="emit a JSON array")
    list_parser.set_defaults(handler=_cmd_gallery_list)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MapError as exc:
        print(f"map error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
