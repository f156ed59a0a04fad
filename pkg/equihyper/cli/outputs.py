import csv
import json
import logging
import numpy as np

from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

from equihyper.utils import ValidationError

logger = logging.getLogger(__name__)


def ensure_parent(path: Union[str, Path]) -> Path:
    """Create the parent directory of `path`, reporting failures as validation errors."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise ValidationError(f"Cannot create directory `{path.parent}`: {error}") from error
    return path


def write_csv(path: Union[str, Path], columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> Path:
    """Write rows as CSV with a header; floats use their shortest round-trip repr."""
    path = ensure_parent(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(columns), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({key: row[key] for key in columns})
    except OSError as error:
        raise ValidationError(f"Cannot write `{path}`: {error}") from error
    logger.info("Wrote %s", path)
    return path


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = ensure_parent(path)
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as error:
        raise ValidationError(f"Cannot write `{path}`: {error}") from error
    logger.info("Wrote %s", path)
    return path


def write_matrix(path: Union[str, Path], matrix: np.ndarray) -> Path:
    """Header-free CSV with 17 significant digits."""
    path = ensure_parent(path)
    try:
        np.savetxt(path, matrix, fmt="%.17g", delimiter=",")
    except OSError as error:
        raise ValidationError(f"Cannot write `{path}`: {error}") from error
    logger.info("Wrote %s", path)
    return path
