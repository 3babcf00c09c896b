"""Render layouts as static SVG scatter plots."""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

import matplotlib
import numpy as np
from matplotlib.colors import to_hex

from src.models.data_models import Layout
from src.storage.atomic import atomic_write_text
from src.utils import config as cfg
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

DEFAULT_POINT_COLOR = "#1f77b4"
GRADIENT_STOPS = 11


def _num(value: float) -> str:
    """Fixed formatting for every coordinate written, so output bytes are reproducible."""
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def categorical_palette(n_classes: int) -> List[str]:
    name = cfg.CATEGORICAL_COLORMAP if n_classes <= 10 else cfg.CATEGORICAL_COLORMAP_LARGE
    cmap = matplotlib.colormaps[name]
    return [to_hex(cmap(i % cmap.N)) for i in range(n_classes)]


def finite_range(scores: np.ndarray) -> Tuple[float, float]:
    finite = scores[np.isfinite(scores)]
    if not finite.size:
        return 0.0, 0.0
    return float(finite.min()), float(finite.max())


def sequential_colors(scores: np.ndarray) -> List[str]:
    cmap = matplotlib.colormaps[cfg.SEQUENTIAL_COLORMAP]
    lo, hi = finite_range(scores)
    unit = (scores - lo) / (hi - lo) if hi > lo else np.full(len(scores), 0.5)
    unit[np.isposinf(scores)] = 1.0
    return [to_hex(cmap(float(u))) for u in unit]


class SvgRenderer:
    """Builds an SVG document line by line.

    The plot area is a nested <svg> whose viewBox is the layout's bounding box
    plus a 5% margin; y is negated so larger y is drawn higher. The legend sits in
    a fixed-width column to the right.
    """

    def __init__(self, width: int = cfg.SVG_WIDTH, height: int = cfg.SVG_HEIGHT,
                 legend_width: int = cfg.SVG_LEGEND_WIDTH):
        self.width = width
        self.height = height
        self.legend_width = legend_width

    def render(
        self,
        layout: Layout,
        labels: Optional[Sequence[int]] = None,
        scores: Optional[Sequence[float]] = None,
        title: Optional[str] = None,
        score_name: str = "score",
    ) -> str:
        if labels is not None and scores is not None:
            raise ConfigError("Color by labels or by scores, not both")
        n = layout.n_points
        if layout.dim == 3:
            logger.info("Rendering the x/y projection of a 3D layout")
        xy = np.column_stack([layout.coords[:, 0], -layout.coords[:, 1]])

        legend: List[str] = []
        if labels is not None:
            labels = np.asarray(labels)
            if len(labels) != n:
                raise DataError(f"Got {len(labels)} labels for {n} points")
            classes = np.unique(labels)
            palette = categorical_palette(len(classes))
            colors = [palette[i] for i in np.searchsorted(classes, labels)]
            legend = self._label_legend(classes, palette)
        elif scores is not None:
            scores = np.asarray(scores, dtype=np.float64)
            if len(scores) != n:
                raise DataError(f"Got {len(scores)} scores for {n} points")
            if np.isnan(scores).any() or np.isneginf(scores).any():
                raise DataError("Scores must be finite; only +inf is allowed and is drawn at the top of the scale")
            colors = sequential_colors(scores)
            legend = self._score_legend(*finite_range(scores), score_name)
        else:
            colors = [DEFAULT_POINT_COLOR] * n

        (min_x, min_y), (span_x, span_y) = self._bounds(xy)
        radius = cfg.SVG_POINT_RADIUS_FRACTION * max(span_x, span_y)

        total_width = self.width + self.legend_width
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_width}" '
            f'height="{self.height}" viewBox="0 0 {total_width} {self.height}">',
            f'  <rect x="0" y="0" width="{total_width}" height="{self.height}" fill="#ffffff"/>',
        ]
        if title:
            lines.append(f'  <title>{escape(title)}</title>')
        lines.append(
            f'  <svg x="0" y="0" width="{self.width}" height="{self.height}" '
            f'viewBox="{_num(min_x)} {_num(min_y)} {_num(span_x)} {_num(span_y)}" '
            f'preserveAspectRatio="xMidYMid meet">'
        )
        lines.append('    <g stroke="none" fill-opacity="0.85">')
        for (x, y), color in zip(xy.tolist(), colors):
            lines.append(f'      <circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(radius)}" fill="{color}"/>')
        lines.append("    </g>")
        lines.append("  </svg>")
        lines.extend(legend)
        lines.append("</svg>")

        logger.debug("Rendered %d points (%d legend lines)", n, len(legend))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _bounds(xy: np.ndarray) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        lo = xy.min(axis=0)
        span = xy.max(axis=0) - lo
        span = np.where(span > 0.0, span, 1.0)
        margin = cfg.SVG_MARGIN_FRACTION * span
        lo = lo - margin
        span = span + 2.0 * margin
        return (float(lo[0]), float(lo[1])), (float(span[0]), float(span[1]))

    def _label_legend(self, classes: np.ndarray, palette: List[str]) -> List[str]:
        x = self.width + 16
        lines = ['  <g font-family="sans-serif" font-size="12">']
        for row, (cls, color) in enumerate(zip(classes.tolist(), palette)):
            y = 20 + 18 * row
            lines.append(f'    <rect x="{x}" y="{y}" width="12" height="12" fill="{color}"/>')
            lines.append(f'    <text x="{x + 18}" y="{y + 10}">{escape(str(cls))}</text>')
        lines.append("  </g>")
        return lines

    def _score_legend(self, lo: float, hi: float, name: str) -> List[str]:
        x = self.width + 16
        cmap = matplotlib.colormaps[cfg.SEQUENTIAL_COLORMAP]
        lines = [
            "  <defs>",
            '    <linearGradient id="score-gradient" x1="0" y1="1" x2="0" y2="0">',
        ]
        for s in range(GRADIENT_STOPS):
            t = s / (GRADIENT_STOPS - 1)
            lines.append(f'      <stop offset="{_num(t)}" stop-color="{to_hex(cmap(t))}"/>')
        lines += [
            "    </linearGradient>",
            "  </defs>",
            '  <g font-family="sans-serif" font-size="12">',
            f'    <text x="{x}" y="16">{escape(name)}</text>',
            f'    <rect x="{x}" y="24" width="16" height="160" fill="url(#score-gradient)"/>',
            f'    <text x="{x + 22}" y="34">{_num(hi)}</text>',
            f'    <text x="{x + 22}" y="184">{_num(lo)}</text>',
            "  </g>",
        ]
        return lines


def render_svg(
    layout: Layout,
    out_path: Union[str, Path],
    labels: Optional[Sequence[int]] = None,
    scores: Optional[Sequence[float]] = None,
    title: Optional[str] = None,
    score_name: str = "score",
) -> Path:
    """Write the scatter plot of `layout` to `out_path`."""
    svg = SvgRenderer().render(layout, labels=labels, scores=scores, title=title, score_name=score_name)
    out = atomic_write_text(out_path, svg)
    logger.info("Wrote SVG %s (%d points)", out, layout.n_points)
    return out
