"""
Domain types, exact objective evaluation and closed-form bounds for localized
sum-of-norms clustering.
"""

import json
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)


class SonClustError(Exception):
    """Base class for errors raised by sonclust."""


class ShapeMismatchError(SonClustError, ValueError):
    """Cloud, graph and representatives disagree on N or d."""


class MalformedInputError(SonClustError, ValueError):
    """A data file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverError(SonClustError, RuntimeError):
    """The iterative solver broke down (CG failure or non-finite iterate)."""


class BoundViolation(SonClustError):
    """A measured quantity exceeded the bound it was checked against."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PointCloud:
    '''
    The dataset x_1, ..., x_N in R^d. Row n of `points` is x_n.
    '''

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ShapeMismatchError(f"points must be an (N, d) array with N, d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def mean(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def to_csv(self, file_name: str) -> None:
        """Write one point per row, d columns, no header."""
        pd.DataFrame(self.points).to_csv(file_name, header=False, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, file_name: str, drop_last: bool = False) -> "PointCloud":
        '''
        Read a headerless CSV with one point per row.

        Args:
            file_name (str): Path to the CSV file.
            drop_last (bool): Drop the last column (the label column of a labeled cloud).

        Returns:
            PointCloud: The parsed cloud.
        '''
        return cls(read_numeric_csv(file_name, drop_last=drop_last)[0])

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "points": self.points.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PointCloud":
        try:
            data = json.loads(text)
            dim, points = int(data["dim"]), data["points"]
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedInputError(f"invalid point cloud JSON: {e}")
        pts = np.array(points, dtype=float).reshape(len(points), -1)
        if pts.shape[1] != dim:
            raise ShapeMismatchError(f"declared dim {dim} but points have {pts.shape[1]} coordinates")
        return cls(pts)


def _to_float(cell) -> float:
    try:
        return float(cell)
    except (TypeError, ValueError):
        return math.nan


def read_numeric_csv(file_name: str, drop_last: bool = False) -> tuple[np.ndarray, Optional[np.ndarray]]:
    '''
    Parse a headerless numeric CSV, reporting the first bad line.

    Args:
        file_name (str): Path to the CSV file.
        drop_last (bool): Split off the last column and return it separately.

    Returns:
        tuple: (coordinates, last column or None)
    '''
    try:
        raw = pd.read_csv(file_name, header=None, dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise MalformedInputError("file is empty", line=1)
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise MalformedInputError(str(e), line=int(match.group(1)) if match else None)
    values = raw.apply(lambda col: col.map(_to_float))
    bad = values.isna().any(axis=1) | ~np.isfinite(values.to_numpy(dtype=float)).all(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise MalformedInputError(f"non-numeric or non-finite value {raw.iloc[row].tolist()}", line=row + 1)
    arr = values.to_numpy(dtype=float)
    if drop_last:
        if arr.shape[1] < 2:
            raise MalformedInputError("labeled cloud needs at least one coordinate and a label column", line=1)
        return arr[:, :-1], arr[:, -1]
    return arr, None


class WeightMode(str, Enum):
    exponential = "exponential"
    uniform = "uniform"


class ProblemParams(BaseModel):
    '''
    Parameters of the clustering functional.

    Args:
        lam (float): Fusion strength lambda (>= 0). Also accepted as `lambda`.
        gamma (float): Localization gamma (> 0).
        omega (float, optional): Truncation radius; None means untruncated.
        weight_mode (WeightMode): exponential gamma^(d+1) e^(-gamma r), or uniform gamma^(d+1).
    '''

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(ge=0.0, alias="lambda")
    gamma: float = Field(gt=0.0)
    omega: Optional[float] = Field(default=None, gt=0.0)
    weight_mode: WeightMode = WeightMode.exponential


@dataclass(frozen=True)
class WeightGraph:
    '''
    Sparse symmetric weight graph stored as unordered edges (m, n) with m < n,
    sorted by (m, n).
    '''

    m: np.ndarray
    n: np.ndarray
    dist: np.ndarray
    weight: np.ndarray
    n_points: int
    dim: int
    omega: Optional[float] = None

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.int64)
        n = np.asarray(self.n, dtype=np.int64)
        if not (m.shape == n.shape == np.shape(self.dist) == np.shape(self.weight)):
            raise ShapeMismatchError("edge arrays must have equal length")
        if m.size and (np.any(m >= n) or m.min() < 0 or n.max() >= self.n_points):
            raise ValueError("edges must satisfy 0 <= m < n < N")
        m.setflags(write=False)
        n.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dist", _frozen(self.dist))
        object.__setattr__(self, "weight", _frozen(self.weight))

    @property
    def n_edges(self) -> int:
        return int(self.m.size)

    def to_df(self) -> pd.DataFrame:
        return pd.DataFrame({"m": self.m, "n": self.n, "dist": self.dist, "weight": self.weight})

    def to_csv(self, file_name: str) -> None:
        """Export rows (m, n, dist, weight) sorted by (m, n)."""
        self.to_df().to_csv(file_name, index=False, float_format="%.17g")


@dataclass(frozen=True)
class Representatives:
    """The map n -> y_n; row n of `values` is the representative of x_n."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if not np.all(np.isfinite(vals)):
            raise ValueError("representatives must be finite")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def to_csv(self, file_name: str) -> None:
        pd.DataFrame(self.values).to_csv(file_name, header=False, index=False, float_format="%.17g")


class SolveReport(BaseModel):
    objective: float = Field(ge=0.0)
    iterations: int = Field(ge=0)
    primal_residual: float = Field(ge=0.0)
    dual_residual: float = Field(ge=0.0)
    distance_certificate: Optional[float] = Field(default=None, ge=0.0)
    dual_bound: Optional[float] = None
    converged: bool = True


def check_shapes(cloud: PointCloud, graph: Optional[WeightGraph] = None, y=None) -> np.ndarray:
    """Validate that cloud, graph and y agree on N and d; returns y as an array."""
    if graph is not None and (graph.n_points != cloud.n or graph.dim != cloud.dim):
        raise ShapeMismatchError(
            f"graph built for N={graph.n_points}, d={graph.dim} but cloud has N={cloud.n}, d={cloud.dim}")
    if y is None:
        return None
    arr = y.values if isinstance(y, Representatives) else np.asarray(y, dtype=float)
    if arr.ndim == 1 and cloud.dim == 1:
        arr = arr.reshape(-1, 1)
    if arr.shape != cloud.points.shape:
        raise ShapeMismatchError(f"representatives have shape {arr.shape}, cloud has {cloud.points.shape}")
    return arr


def objective_value(cloud: PointCloud, params: ProblemParams, graph: WeightGraph, y) -> float:
    '''
    Evaluate (1/N) sum |y_n - x_n|^2 + (2 lambda / N^2) sum_edges w |y_m - y_n|.

    The factor 2 accounts for both orderings (m, n) and (n, m) of each stored edge;
    diagonal terms vanish.

    Args:
        cloud (PointCloud): The data.
        params (ProblemParams): Problem parameters (only lambda is read).
        graph (WeightGraph): Weight graph built from `cloud`.
        y (Representatives or array): Candidate representatives, shape (N, d).

    Returns:
        float: The objective value.
    '''
    arr = check_shapes(cloud, graph, y)
    n = cloud.n
    fidelity = float(np.sum((arr - cloud.points) ** 2)) / n
    if graph.n_edges == 0 or params.lam == 0.0:
        return fidelity
    jumps = np.linalg.norm(arr[graph.m] - arr[graph.n], axis=1)
    fusion = 2.0 * params.lam / n ** 2 * float(np.dot(graph.weight, jumps))
    return fidelity + fusion


def variance_upper_bound(cloud: PointCloud) -> float:
    """(1/N) sum |x_n - mean|^2, the objective of the constant candidate, an upper bound on inf J."""
    return float(np.sum((cloud.points - cloud.mean()) ** 2)) / cloud.n


def d_prime(d: int) -> float:
    """inf for d = 1, 4/3 for d = 2, d for d >= 3."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d == 1:
        return math.inf
    if d == 2:
        return 4.0 / 3.0
    return float(d)


def inv_d_prime(d: int) -> float:
    """1/d', with 1/inf taken as 0."""
    dp = d_prime(d)
    return 0.0 if math.isinf(dp) else 1.0 / dp


def rate_bound(N: int, d: int, gamma: float, lam: float, C: float) -> float:
    '''
    Error envelope C (gamma N^(-1/(d v 2)) (log N)^(1/d') + (1 + lambda) gamma^(-1/3)).

    Args:
        N (int): Number of points, >= 2.
        d (int): Dimension.
        gamma (float): Localization, >= 1.
        lam (float): Fusion strength, >= 0.
        C (float): Envelope constant, > 0.

    Returns:
        float: The envelope value.
    '''
    if N < 2:
        raise ValueError(f"rate_bound needs N >= 2 so that log N > 0, got {N}")
    if gamma < 1.0 or lam < 0.0 or C <= 0.0:
        raise ValueError(f"rate_bound needs gamma >= 1, lambda >= 0, C > 0; got {gamma}, {lam}, {C}")
    sampling = gamma * N ** (-1.0 / max(d, 2)) * math.log(N) ** inv_d_prime(d)
    localization = (1.0 + lam) * gamma ** (-1.0 / 3.0)
    return C * (sampling + localization)


def gamma_schedule(N: int, d: int, c0: float = 1.0) -> float:
    """max(1, c0 N^(3/(4d))); the clamp keeps gamma >= 1."""
    if N < 1 or d < 1 or c0 <= 0:
        raise ValueError(f"gamma_schedule needs N >= 1, d >= 1, c0 > 0; got {N}, {d}, {c0}")
    return max(1.0, c0 * N ** (3.0 / (4.0 * d)))


def stability_bound(M: float, gamma: float, W: float) -> float:
    """Bound on |inf J_tilde - inf J| when the measures are W apart in W-infinity."""
    growth = math.expm1(2.0 * gamma * W)
    return 3.0 * M * (growth + 1.0) * W + growth * M ** 2


def stability_q(t: float) -> float:
    """Q(t) = 12 e^(2t) t + 4 (e^(2t) - 1)."""
    return 12.0 * math.exp(2.0 * t) * t + 4.0 * math.expm1(2.0 * t)


def transport_solution_bound(M: float, gamma: float, W: float) -> float:
    '''
    Mean-square bound between the minimizer on mu and the minimizer of the perturbed
    measure transported back along the coupling. For gamma >= 1 it is at most
    (M + 1)^2 Q(gamma W).
    '''
    growth = math.expm1(2.0 * gamma * W)
    return 12.0 * M * (growth + 1.0) * W + 4.0 * growth * M ** 2
