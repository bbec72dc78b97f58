"""
Tabular artifacts: solve results as JSON, surface and arctic samples as CSV.

CSV files start with '#' comment lines carrying the model, the parameters and
the package version, then an RFC 4180 table with 17 significant digits.
"""
import json
import math
import os
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from limitshape import __version__
from limitshape.envelope import ArcticCurve, SurfaceSample
from limitshape.fourvertex import FourVertexArc
from limitshape.logger import get_logger
from limitshape.solver import SolvedShape

logger = get_logger()

FLOAT_FORMAT = "%.17g"


def _number(x: float):
    """JSON has no infinity; infinite anchors are written as the string "inf"."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def solved_shape_record(shape: SolvedShape) -> Dict[str, Any]:
    region = shape.region
    return {
        "version": __version__,
        "model": shape.model.kind.value,
        "family": region.family,
        "parameters": {k: float(v) for k, v in region.params.items()},
        "sides": [[s.type_label, float(s.length)] for s in region.sides],
        "anchors": [_number(a) for a in shape.anchors],
        "B": shape.rmap.B,
        "degree": shape.rmap.degree,
        "zeros": [_number(a) for a in shape.rmap.zeros],
        "poles": [_number(a) for a in shape.rmap.poles],
        "residual_norm": shape.residual_norm,
        "iterations": shape.iterations,
        "critical_points": [[u.real, u.imag] for u in shape.critical_points],
        "critical_residuals": shape.critical_residuals(),
    }


def write_json(record: Mapping[str, Any], path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(record, f, sort_keys=True, indent=2)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def read_solve_json(path: str) -> Tuple[List[float], float]:
    """(anchors, B) from a solve artifact, for use as a solver initial guess."""
    with open(path, "r", encoding="utf-8") as f:
        record = json.load(f)
    return [float(a) for a in record["anchors"]], float(record["B"])


def write_csv(frame: pd.DataFrame, path: str, header: Mapping[str, Any]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for key in sorted(header):
            f.write(f"# {key}: {header[key]}\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def surface_frame(sample: SurfaceSample) -> pd.DataFrame:
    return sample.frame


def arctic_frame(curve: ArcticCurve) -> pd.DataFrame:
    return curve.to_frame()


def fourvertex_frame(arcs: Sequence[FourVertexArc]) -> pd.DataFrame:
    rows = []
    for k, arc in enumerate(arcs, start=1):
        for (lx, ly, _), (x, y, h) in zip(arc.lozenge, arc.points):
            rows.append((k, arc.facet.index, lx, ly, x, y, h))
    return pd.DataFrame(rows, columns=["arc", "facet", "lozenge_x", "lozenge_y", "x", "y", "h"])


def describe(params: Mapping[str, Any]) -> str:
    """Stable one-line rendering of run parameters for CSV headers."""
    return ", ".join(f"{k}={params[k]!r}" for k in sorted(params))


def tangency_frame(points: Sequence[Sequence[float]]) -> pd.DataFrame:
    data = np.asarray(points, dtype=float).reshape(-1, 3)
    return pd.DataFrame({"anchor": np.arange(1, len(data) + 1), "x": data[:, 0], "y": data[:, 1], "h": data[:, 2]})
