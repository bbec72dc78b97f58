import os
import sys

# Allow running from the scripts directory
base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, base_dir)

from app import RunConfig, cmd_arctic, cmd_solve, cmd_surface  # noqa: E402
from limitshape.errors import LimitShapeError  # noqa: E402
from limitshape.presets import load_presets  # noqa: E402

# Which commands make sense for each preset
PLAN = {
    'aztec': [cmd_solve, cmd_surface, cmd_arctic],
    'octagon': [cmd_solve, cmd_surface, cmd_arctic],
    'fv_hexagon': [cmd_solve, cmd_surface, cmd_arctic],
    'fortress': [cmd_surface],
    'lozenge_hexagon': [cmd_arctic],
}


def main():
    out_root = os.path.join(base_dir, 'out', 'examples')
    failures = 0
    for preset in load_presets():
        preset_id = preset['id']
        config = RunConfig.from_mapping({'preset': preset_id, 'grid': 40, 'out': os.path.join(out_root, preset_id)})
        for command in PLAN.get(preset_id, []):
            try:
                command(config.validate())
            except LimitShapeError as e:
                failures += 1
                print(f"{preset_id}: {command.__name__} failed: {e}")
        print(f"Rendered {preset_id} into {config.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
