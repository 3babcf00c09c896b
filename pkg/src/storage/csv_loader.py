"""CSV ingestion into a DataMatrix."""

import csv
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from src.models.data_models import DataMatrix
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

LabelColumn = Optional[Union[int, str]]


def _resolve_label_column(frame: pd.DataFrame, label_column: LabelColumn, has_header: bool) -> Optional[int]:
    """Position of the label column, by header name or by (possibly negative) index."""
    if label_column is None:
        return None
    n_cols = frame.shape[1]
    if has_header and isinstance(label_column, str) and label_column in frame.columns:
        return list(frame.columns).index(label_column)
    try:
        index = int(label_column)
    except ValueError:
        raise DataError(f"Label column '{label_column}' not found in header {list(frame.columns)}") from None
    if not (-n_cols <= index < n_cols):
        raise DataError(f"Label column index {index} out of range for {n_cols} columns")
    return index % n_cols


def _check_field_counts(path: Path) -> None:
    """Every non-blank line must have as many fields as the first one."""
    with path.open(newline="") as handle:
        reader = csv.reader(handle, skipinitialspace=True)
        expected = None
        for fields in reader:
            if not fields:
                continue
            if expected is None:
                expected = len(fields)
            elif len(fields) != expected:
                raise DataError(f"{path}: ragged row at line {reader.line_num}: "
                                f"{len(fields)} fields, expected {expected}")


def _parse_labels(raw: pd.Series, path: Path, first_data_line: int) -> np.ndarray:
    empty = np.flatnonzero((raw == "").to_numpy())
    if empty.size:
        raise DataError(f"{path}: empty label at line {int(empty[0]) + first_data_line}")
    numeric = pd.to_numeric(raw, errors="coerce")
    if not numeric.isna().any() and np.all(numeric == np.round(numeric)):
        return numeric.to_numpy().astype(np.int64)
    # non-integer labels become codes in sorted label order
    codes, uniques = pd.factorize(raw, sort=True)
    logger.info("Encoded %d distinct text labels as integers 0..%d", len(uniques), len(uniques) - 1)
    return codes.astype(np.int64)


def load_csv(
    path: Union[str, Path],
    has_header: bool = True,
    label_column: LabelColumn = None,
) -> DataMatrix:
    """Read a comma-separated numeric table; the optional label column is split off.

    Diagnostics name the 1-based file line and the column of the first bad cell.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Input file not found: {path}")

    _check_field_counts(path)
    first_data_line = 2 if has_header else 1
    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty") from None
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: ragged rows ({e})") from e

    if frame.empty:
        raise DataError(f"{path}: no data rows")
    if not has_header:
        frame.columns = [str(c) for c in frame.columns]

    label_pos = _resolve_label_column(frame, label_column, has_header)
    labels = None
    if label_pos is not None:
        labels = _parse_labels(frame.iloc[:, label_pos].str.strip(), path, first_data_line)
        frame = frame.drop(columns=frame.columns[label_pos])
    if frame.shape[1] == 0:
        raise DataError(f"{path}: no feature columns left after removing the label column")

    body = frame.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    bad = body.isna().to_numpy() | ~np.isfinite(body.to_numpy(dtype=np.float64))
    if bad.any():
        row, col = (int(v) for v in np.argwhere(bad)[0])
        raise DataError(f"{path}: non-numeric value {frame.iat[row, col]!r} at line {row + first_data_line}, "
                        f"column '{frame.columns[col]}'")

    feature_names = [str(c) for c in frame.columns] if has_header else None
    data = DataMatrix(values=body.to_numpy(dtype=np.float64), labels=labels, feature_names=feature_names)
    logger.info("Loaded %s: %d items x %d features%s", path, data.rows, data.cols,
                f", {len(np.unique(labels))} labels" if labels is not None else "")
    return data
