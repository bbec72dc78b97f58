"""
Limit shape command line.

    python app.py solve      --config run.yaml --out out/
    python app.py surface    --config run.yaml --grid 50
    python app.py arctic     --config run.yaml --arc-samples 100
    python app.py fourvertex --config hexagon.yaml

A run configuration is a YAML (or JSON) mapping with `model`, either a
`preset` from config/regions.yaml or explicit `sides`, the model parameters
and optional `grid`, `arc_samples`, `init` and `out`.
"""
import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml

from limitshape import __version__
from limitshape.envelope import sample_arctic, sample_surface
from limitshape.errors import ConfigError, ConvergenceError, InfeasibleRegionError, LimitShapeError
from limitshape.fourvertex import Hexagon, fourvertex_arctic
from limitshape.logger import get_logger, set_verbosity
from limitshape.models import ModelKind
from limitshape.presets import build_region, get_preset, region_from_sides
from limitshape.regions import PolygonRegion
from limitshape.solver import SolvedShape, octagon_feasibility, solve_parameters

from views import (
    arctic_frame,
    describe,
    fourvertex_frame,
    read_solve_json,
    render_arctic_svg,
    render_fourvertex_svg,
    solved_shape_record,
    surface_frame,
    tangency_frame,
    write_csv,
    write_json,
)

logger = get_logger()

PARAM_KEYS = ("size", "r", "m", "m1", "m2", "a", "b", "c", "tau")
DEFAULT_PRESET = {
    ModelKind.DOMINO.value: "aztec",
    ModelKind.FORTRESS.value: "fortress",
    ModelKind.FIVE_VERTEX.value: "fv_hexagon",
    ModelKind.LOZENGE.value: "lozenge_hexagon",
}


@dataclass
class RunConfig:
    """One command line run: region, model parameters, sampling sizes and output directory."""

    model: str = ModelKind.DOMINO.value
    preset: Optional[str] = None
    sides: Optional[List[List[float]]] = None
    params: Dict[str, float] = field(default_factory=dict)
    grid: int = 50
    arc_samples: int = 100
    workers: int = 1
    init: Optional[str] = None
    out: str = "out"

    @classmethod
    def from_mapping(cls, data: Dict[str, Any]) -> "RunConfig":
        unknown = set(data) - set(PARAM_KEYS) - {"model", "preset", "sides", "grid", "arc_samples", "workers", "init", "out"}
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")
        preset = data.get("preset")
        params: Dict[str, float] = {}
        model = data.get("model")
        if preset is None and data.get("sides") is None:
            preset = DEFAULT_PRESET.get(model or ModelKind.DOMINO.value)
        if preset is not None:
            entry = get_preset(preset)
            if model is not None and model != entry["model"]:
                raise ConfigError(f"Preset '{preset}' is a {entry['model']} region, not {model}")
            model = entry["model"]
            params.update(entry.get("defaults") or {})
        for key in PARAM_KEYS:
            if data.get(key) is not None:
                params[key] = data[key]
        try:
            return cls(
                model=model or ModelKind.DOMINO.value,
                preset=preset,
                sides=data.get("sides"),
                params={k: float(v) for k, v in params.items()},
                grid=int(data.get("grid", 50)),
                arc_samples=int(data.get("arc_samples", 100)),
                workers=int(data.get("workers", 1)),
                init=data.get("init"),
                out=str(data.get("out", "out")),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid configuration value: {e}") from e

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        if path is None:
            return cls.from_mapping({})
        if not os.path.exists(path):
            raise ConfigError(f"Configuration file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration {path} must be a mapping")
        return cls.from_mapping(data)

    @property
    def builder(self) -> Optional[str]:
        return get_preset(self.preset)["builder"] if self.preset else None

    def validate(self) -> "RunConfig":
        """Check parameter domains; an infeasible octagon raises InfeasibleRegionError."""
        try:
            ModelKind(self.model)
        except ValueError as e:
            raise ConfigError(f"Unknown model '{self.model}'") from e
        p = self.params
        if "tau" in p and p["tau"] != 1:
            raise ConfigError(f"Only tau = 1 is supported, got {p['tau']}")
        if "r" in p and not p["r"] > 1:
            raise ConfigError(f"Five-vertex weight r must exceed 1, got {p['r']}")
        if self.grid < 1 or self.arc_samples < 2 or self.workers < 1:
            raise ConfigError("grid and workers must be positive and arc_samples at least 2")
        builder = self.builder
        if builder == "fv_hexagon" and not p.get("m", 0) > 0:
            raise ConfigError(f"Hexagon parameter m must be positive, got {p.get('m')}")
        if builder == "lozenge_hexagon" and not min(p.get(k, 0) for k in "abc") > 0:
            raise ConfigError(f"Hexagon sides must be positive, got {[p.get(k) for k in 'abc']}")
        if builder == "octagon":
            octagon_feasibility(p["m1"], p["m2"])
        if self.sides is not None and self.model in (ModelKind.FORTRESS.value, ModelKind.LOZENGE.value):
            raise ConfigError(f"Explicit sides are not supported for the {self.model} model")
        return self

    def region(self):
        """PolygonRegion, Hexagon (lozenge) or None (fortress)."""
        if self.sides is not None:
            return region_from_sides(self.model, self.sides, self.params.get("r"))
        return build_region(self.builder, self.params)

    def header(self) -> Dict[str, str]:
        label = self.preset or "sides"
        return {"model": self.model, "parameters": f"{label}: {describe(self.params)}", "version": __version__}


def _solve(config: RunConfig) -> SolvedShape:
    region = config.region()
    if not isinstance(region, PolygonRegion):
        raise ConfigError(f"The {config.model} model has no parameter problem to solve")
    init = read_solve_json(config.init) if config.init else None
    return solve_parameters(region, init=init)


def cmd_solve(config: RunConfig) -> str:
    shape = _solve(config)
    record = solved_shape_record(shape)
    record["preset"] = config.preset
    return write_json(record, os.path.join(config.out, "solve.json"))


def cmd_surface(config: RunConfig) -> str:
    if config.model == ModelKind.FORTRESS.value:
        sample = sample_surface("fortress", config.grid, workers=config.workers)
    else:
        sample = sample_surface(_solve(config), config.grid, workers=config.workers)
    header = dict(config.header(), grid=f"{sample.grid['kind']} {config.grid}x{config.grid}")
    return write_csv(surface_frame(sample), os.path.join(config.out, "surface.csv"), header)


def cmd_fourvertex(config: RunConfig) -> List[str]:
    hexagon = config.region()
    if not isinstance(hexagon, Hexagon):
        raise ConfigError("fourvertex needs a lozenge hexagon (a, b, c)")
    arcs = fourvertex_arctic(hexagon, config.arc_samples)
    return [
        write_csv(fourvertex_frame(arcs), os.path.join(config.out, "fourvertex.csv"), config.header()),
        render_fourvertex_svg(os.path.join(config.out, "fourvertex.svg"), arcs, hexagon.vertices),
    ]


def cmd_arctic(config: RunConfig) -> List[str]:
    if config.model == ModelKind.LOZENGE.value:
        return cmd_fourvertex(config)
    if config.model == ModelKind.FORTRESS.value:
        raise ConfigError("Arctic curves of the fortress are not sampled; use the surface command")
    shape = _solve(config)
    curve = sample_arctic(shape, config.arc_samples)
    title = f"{config.model} {config.preset or 'region'}"
    return [
        write_csv(arctic_frame(curve), os.path.join(config.out, "arctic.csv"), config.header()),
        write_csv(tangency_frame(curve.tangency), os.path.join(config.out, "tangency.csv"), config.header()),
        render_arctic_svg(os.path.join(config.out, "arctic.svg"), curve, shape.region.corners, title),
    ]


COMMANDS = {
    "solve": cmd_solve,
    "surface": cmd_surface,
    "arctic": cmd_arctic,
    "fourvertex": cmd_fourvertex,
}


def _diagnostic(command: str, exc: LimitShapeError) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "status": "error",
        "command": command,
        "error": type(exc).__name__,
        "message": str(exc),
        "version": __version__,
    }
    if isinstance(exc, InfeasibleRegionError):
        record["violation"] = exc.violation
    if isinstance(exc, ConvergenceError):
        record["iterations"] = exc.iterations
        record["residual_norm"] = exc.residual_norm
    return record


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="limitshape", description="Limit shapes and arctic curves of lattice models")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="YAML or JSON run configuration")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--grid", type=int, help="surface grid resolution N (N x N samples)")
    parser.add_argument("--arc-samples", type=int, help="samples per arctic arc")
    parser.add_argument("--workers", type=int, help="threads for surface sampling")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver iterations")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_verbosity(logging.DEBUG)
    config = None
    try:
        config = RunConfig.load(args.config)
        if args.out is not None:
            config.out = args.out
        if args.grid is not None:
            config.grid = args.grid
        if args.arc_samples is not None:
            config.arc_samples = args.arc_samples
        if args.workers is not None:
            config.workers = args.workers
        config.validate()
        logger.info(f"Running {args.command} for {config.model} ({config.preset or 'explicit sides'})")
        COMMANDS[args.command](config)
    except LimitShapeError as exc:
        logger.error(f"{args.command} failed: {type(exc).__name__}: {exc}")
        if args.command == "solve":
            out = config.out if config is not None else (args.out or "out")
            write_json(_diagnostic(args.command, exc), os.path.join(out, "solve.json"))
        return 2 if isinstance(exc, InfeasibleRegionError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
