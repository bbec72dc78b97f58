"""
Views package for the limit shape command line.

This package turns solved shapes and sampled surfaces into artifacts:
JSON and CSV tables, and SVG figures of arctic curves.
"""

from .tables import (
    arctic_frame,
    describe,
    fourvertex_frame,
    read_solve_json,
    solved_shape_record,
    surface_frame,
    tangency_frame,
    write_csv,
    write_json,
)
from .arctic_plot import render_arctic_svg, render_fourvertex_svg

__all__ = [
    "arctic_frame",
    "describe",
    "fourvertex_frame",
    "read_solve_json",
    "solved_shape_record",
    "surface_frame",
    "tangency_frame",
    "write_csv",
    "write_json",
    "render_arctic_svg",
    "render_fourvertex_svg",
]
