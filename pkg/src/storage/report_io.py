"""Run reports as JSON with top-level keys config, metrics, per_node, timings_ms."""

import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.models.report_models import RunReport
from src.storage.atomic import atomic_write_text
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def write_report(report: RunReport, path: Union[str, Path]) -> Path:
    text = json.dumps(report.model_dump(mode="json"), indent=2) + "\n"
    out = atomic_write_text(path, text)
    logger.info("Wrote report %s (%d metrics, %d per-node vectors)", out, len(report.metrics), len(report.per_node))
    return out


def read_report(path: Union[str, Path]) -> RunReport:
    path = Path(path)
    if not path.exists():
        raise DataError(f"Report file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return RunReport.model_validate(data)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON ({e})") from e
    except ValidationError as e:
        raise DataError(f"{path}: invalid report:\n{e}") from e
