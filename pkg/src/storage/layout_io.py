"""Layout coordinates as CSV with x,y(,z) columns."""

import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from src.models.data_models import Layout
from src.storage.atomic import atomic_write_text
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


def format_layout(layout: Layout) -> str:
    lines = [",".join(AXES[: layout.dim])]
    for row in layout.coords.tolist():
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def write_layout(layout: Layout, path: Union[str, Path]) -> Path:
    out = atomic_write_text(path, format_layout(layout))
    logger.info("Wrote layout %s: %d points in %dD", out, layout.n_points, layout.dim)
    return out


def read_layout(path: Union[str, Path], dim: Optional[int] = None) -> Layout:
    """Read a layout CSV; `dim` (2 or 3), when given, must match the file's columns."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"Layout file not found: {path}")
    try:
        # round_trip keeps the written decimals bit-exact
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise DataError(f"{path}: unreadable layout ({e})") from e

    columns = tuple(str(c).strip() for c in frame.columns)
    if columns not in (AXES[:2], AXES[:3]):
        raise DataError(f"{path}: layout columns must be x,y or x,y,z, got {','.join(columns)}")
    if dim is not None and len(columns) != dim:
        raise DataError(f"{path}: layout has {len(columns)} dimensions, expected {dim}")
    try:
        coords = frame.to_numpy(dtype=float)
    except ValueError as e:
        raise DataError(f"{path}: non-numeric coordinate ({e})") from e
    return Layout(coords=coords)
