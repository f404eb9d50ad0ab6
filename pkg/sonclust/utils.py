import hashlib
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel
from tqdm import tqdm

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def check_file_path(file_path, make_dirs=True):
    """Gets the absolute file path.

    Args:
        file_path (str or os.PathLike): The path to the file.
        make_dirs (bool, optional): Whether to create the parent directory if it does not exist. Defaults to True.

    Raises:
        TypeError: If the input path is not a string or path-like.

    Returns:
        str: The absolute path to the file.
    """
    if not isinstance(file_path, (str, os.PathLike)):
        raise TypeError("The provided file path must be a string or path-like.")
    file_path = os.path.abspath(os.path.expanduser(os.fspath(file_path)))
    file_dir = os.path.dirname(file_path)
    if make_dirs and not os.path.exists(file_dir):
        os.makedirs(file_dir)
    return file_path


def write_table(df: pd.DataFrame, file_name) -> str:
    """Write a CSV table with a header row and 17-significant-digit floats."""
    file_name = check_file_path(file_name)
    df.to_csv(file_name, index=False, float_format=FLOAT_FORMAT)
    return file_name


def write_json(data: dict, file_name) -> str:
    """Write a JSON report; floats keep their shortest round-trip representation."""
    file_name = check_file_path(file_name)
    with open(file_name, "w") as f:
        json.dump(data, f, indent=2, default=_json_default)
        f.write("\n")
    return file_name


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def config_hash(config: BaseModel) -> str:
    """SHA-256 of the canonical JSON dump of a config model."""
    canon = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    '''
    Least-squares slope of log(y) against log(x), over points with x, y > 0.

    Returns:
        float: The slope, or nan with fewer than two usable points.
    '''
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    if np.count_nonzero(keep) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    return float(slope)


def fit_envelope_constant(errors: Sequence[float], shapes: Sequence[float]) -> float:
    """Smallest C with errors <= C * shapes pointwise."""
    errors, shapes = np.asarray(errors, dtype=float), np.asarray(shapes, dtype=float)
    if errors.size == 0 or np.any(shapes <= 0):
        raise ValueError("envelope shapes must be positive and nonempty")
    return float(np.max(errors / shapes))


def run_cells(fn: Callable, cells: Iterable, threads: int = 1, disableProgressBar: bool = False) -> list:
    '''
    Evaluate `fn` on every cell, in a thread pool when threads > 1.

    Results come back in cell order whatever the schedule.
    '''
    cells = list(cells)
    if threads <= 1:
        return [fn(c) for c in tqdm(cells, desc="Processing...", ncols=75, disable=disableProgressBar)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(tqdm(ex.map(fn, cells), total=len(cells), desc="Processing...", ncols=75,
                         disable=disableProgressBar))
