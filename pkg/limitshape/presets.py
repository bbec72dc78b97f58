"""
Named region presets from config/regions.yaml and region construction from run parameters.
"""
import os
from typing import Any, Dict, List, Mapping, Optional

import yaml

from .errors import ConfigError
from .fourvertex import Hexagon
from .logger import get_logger
from .models import model_spec
from .regions import PolygonRegion, aztec_region, fv_hexagon_region, octagon_region

logger = get_logger()

CONFIG_PATH = 'config/regions.yaml'
_PACKAGE_CONFIG = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), CONFIG_PATH)


def load_presets(path: Optional[str] = None) -> List[Dict[str, Any]]:
    """Load preset entries, looking next to the working directory, its parent, then the package."""
    candidates = [path] if path else [CONFIG_PATH, os.path.join('..', CONFIG_PATH), _PACKAGE_CONFIG]
    for candidate in candidates:
        if candidate and os.path.exists(candidate):
            with open(candidate, 'r') as f:
                data = yaml.safe_load(f) or {}
            return data.get('presets', [])
    logger.warning(f"No preset file found among {candidates}")
    return []


def get_preset(name: str, path: Optional[str] = None) -> Dict[str, Any]:
    for preset in load_presets(path):
        if preset.get('id') == name:
            return preset
    raise ConfigError(f"Unknown preset '{name}'")


def build_region(builder: str, params: Mapping[str, Any]):
    """
    Region for a preset builder: a PolygonRegion, a Hexagon for the lozenge
    hexagon, or None for the fortress (which lives on the annulus).
    """
    try:
        if builder == 'aztec':
            return aztec_region(float(params.get('size', 1.0)))
        if builder == 'octagon':
            return octagon_region(float(params['m1']), float(params['m2']))
        if builder == 'fv_hexagon':
            return fv_hexagon_region(float(params['m']), params.get('r'))
        if builder == 'lozenge_hexagon':
            return Hexagon(float(params['a']), float(params['b']), float(params['c']))
        if builder == 'fortress':
            return None
    except KeyError as e:
        raise ConfigError(f"Preset '{builder}' needs parameter {e}") from e
    raise ConfigError(f"Unknown region builder '{builder}'")


def region_from_sides(model: str, sides, r: Optional[float] = None) -> PolygonRegion:
    """Region from explicit [type, length] pairs."""
    try:
        typed = [(int(label), float(length)) for label, length in sides]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Sides must be [type, length] pairs: {e}") from e
    return PolygonRegion.from_typed_sides(model_spec(model, r), typed)
