"""
SVG figures of regions and arctic curves.

Figures are drawn with the Agg backend and a fixed SVG hash salt and no
date metadata, so identical inputs give identical files.
"""
import os
from typing import Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from limitshape import __version__  # noqa: E402
from limitshape.envelope import ArcticCurve  # noqa: E402
from limitshape.fourvertex import FourVertexArc  # noqa: E402
from limitshape.logger import get_logger  # noqa: E402

logger = get_logger()

plt.rcParams["svg.hashsalt"] = "limitshape"
FACET_COLORS = plt.get_cmap("tab10").colors


def _save(fig, path: str, title: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.suptitle(f"{title}  (limitshape {__version__})", fontsize=9)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Wrote {path}")
    return path


def _polygon(ax, corners: Sequence[Tuple[float, float]]):
    pts = np.asarray([(float(x), float(y)) for x, y in corners]).reshape(-1, 2)
    if len(pts) and not np.allclose(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[:1]])
    if len(pts):
        ax.plot(pts[:, 0], pts[:, 1], color="black", linewidth=1.0)


def render_arctic_svg(
    path: str,
    curve: ArcticCurve,
    corners: Sequence[Tuple[float, float]],
    title: str = "Arctic curve",
) -> str:
    """Region outline, one colour per facet arc, tangency points as markers."""
    fig, ax = plt.subplots(figsize=(5, 5))
    _polygon(ax, corners)
    for arc in curve.arcs:
        if len(arc.points):
            color = FACET_COLORS[(arc.facet.index - 1) % len(FACET_COLORS)]
            ax.plot(arc.points[:, 0], arc.points[:, 1], color=color, linewidth=1.5, label=f"F{arc.facet.index}")
    touch = np.asarray(curve.tangency, dtype=float).reshape(-1, 3)
    ax.plot(touch[:, 0], touch[:, 1], "o", color="crimson", markersize=4)
    ax.set_aspect("equal")
    ax.legend(fontsize=6, loc="upper right")
    return _save(fig, path, title)


def render_fourvertex_svg(
    path: str,
    arcs: Sequence[FourVertexArc],
    corners: Optional[Sequence[Tuple[float, float]]] = None,
    title: str = "Four-vertex arctic curve",
) -> str:
    """Lozenge ellipse (dashed) next to the six sheared four-vertex arcs."""
    fig, ax = plt.subplots(figsize=(5, 5))
    if corners is not None:
        _polygon(ax, corners)
    for k, arc in enumerate(arcs):
        color = FACET_COLORS[k % len(FACET_COLORS)]
        ax.plot(arc.lozenge[:, 0], arc.lozenge[:, 1], color=color, linewidth=0.8, linestyle="--")
        ax.plot(arc.points[:, 0], arc.points[:, 1], color=color, linewidth=1.5, label=f"F{arc.facet.index}")
    ax.set_aspect("equal")
    ax.legend(fontsize=6, loc="upper right")
    return _save(fig, path, title)
