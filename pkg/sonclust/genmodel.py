"""
Seeded generators for the stochastic ball model, controlled perturbations, and the
bottleneck (W-infinity) distance between equal-size empirical measures.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator
from scipy import sparse
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.spatial.distance import cdist

from .clusters import NONE_LABEL
from .core import PointCloud, ShapeMismatchError, read_numeric_csv

logger = logging.getLogger(__name__)

MAX_BOTTLENECK_POINTS = 2000


def derive_seed(seed: int, task_index: int) -> int:
    """Seed for sub-task `task_index`: SHA-256 of 'seed:task_index', first 8 bytes, 63 bits."""
    digest = hashlib.sha256(f"{seed}:{task_index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)


class BallComponent(BaseModel):
    center: List[float]
    radius: float = Field(gt=0.0)
    mass: float = Field(gt=0.0)


class BallModel(BaseModel):
    '''
    Mixture of uniform distributions on pairwise disjoint closed balls.

    Args:
        dim (int): Ambient dimension d.
        components (list[BallComponent]): Centers, radii and masses (summing to 1).
    '''

    dim: int = Field(ge=1)
    components: List[BallComponent] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_geometry(self):
        for i, comp in enumerate(self.components):
            if len(comp.center) != self.dim:
                raise ValueError(f"component {i} center has {len(comp.center)} coordinates, expected {self.dim}")
        total = sum(c.mass for c in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"component masses sum to {total!r}, not 1")
        for i, a in enumerate(self.components):
            for j in range(i + 1, len(self.components)):
                b = self.components[j]
                gap = float(np.linalg.norm(np.subtract(a.center, b.center)))
                if not gap > a.radius + b.radius:
                    raise ValueError(f"closed balls {i} and {j} intersect")
        return self

    @property
    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.components], dtype=float)

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.components], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.array([c.mass for c in self.components], dtype=float)

    def centroids(self) -> np.ndarray:
        """mu-centroid of each component; for a uniform ball this is its center."""
        return self.centers

    @classmethod
    def single_ball(cls, dim: int = 2, radius: float = 1.0) -> "BallModel":
        return cls(dim=dim, components=[BallComponent(center=[0.0] * dim, radius=radius, mass=1.0)])

    @classmethod
    def two_balls(cls, gap: float, dim: int = 2, radius: float = 1.0) -> "BallModel":
        '''
        Two equal balls of mass 1/2 on the first axis whose surfaces are `gap` apart.
        '''
        half = radius + gap / 2.0
        left = [-half] + [0.0] * (dim - 1)
        right = [half] + [0.0] * (dim - 1)
        return cls(dim=dim, components=[BallComponent(center=left, radius=radius, mass=0.5),
                                        BallComponent(center=right, radius=radius, mass=0.5)])

    @classmethod
    def from_file(cls, file_name: str) -> "BallModel":
        with open(file_name) as f:
            return cls.model_validate_json(f.read())


@dataclass(frozen=True)
class LabeledCloud:
    '''
    A sampled cloud with the component index of each point (-1 on a boundary).
    '''

    cloud: PointCloud
    labels: np.ndarray
    model: BallModel

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.size != self.cloud.n:
            raise ShapeMismatchError(f"{labels.size} labels for {self.cloud.n} points")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    def to_df(self) -> pd.DataFrame:
        df = pd.DataFrame(self.cloud.points, columns=[f"x{i}" for i in range(self.cloud.dim)])
        df["label"] = self.labels
        return df

    def to_csv(self, file_name: str) -> None:
        """d coordinate columns and a label column, no header."""
        self.to_df().to_csv(file_name, header=False, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, file_name: str, model: BallModel) -> "LabeledCloud":
        coords, labels = read_numeric_csv(file_name, drop_last=True)
        return cls(PointCloud(coords), labels.astype(np.int64), model)


def _uniform_in_balls(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Uniform draws in the unit ball: normalized Gaussian direction, radius V^(1/d)."""
    dirs = rng.standard_normal((n, d))
    norms = np.linalg.norm(dirs, axis=1)
    zero = norms == 0.0
    dirs[zero] = np.eye(d)[0]
    norms[zero] = 1.0
    radii = rng.random(n) ** (1.0 / d)
    return dirs / norms[:, None] * radii[:, None]


def sample(model: BallModel, N: int, seed: int) -> LabeledCloud:
    '''
    Draw N i.i.d. points: a component by mass, then uniformly in that ball.

    Args:
        model (BallModel): The ball model.
        N (int): Number of points.
        seed (int): Seed for numpy's default generator.

    Returns:
        LabeledCloud: The sample with the component of each point; points whose
        computed position falls on or outside their ball's sphere get label -1.
    '''
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    rng = np.random.default_rng(seed)
    comps = rng.choice(len(model.components), size=N, p=model.masses)
    offsets = _uniform_in_balls(rng, N, model.dim)
    radii = model.radii[comps]
    points = model.centers[comps] + offsets * radii[:, None]
    inside = np.linalg.norm(points - model.centers[comps], axis=1) < radii
    labels = np.where(inside, comps, NONE_LABEL)
    return LabeledCloud(PointCloud(points), labels, model)


def perturb(cloud: PointCloud, delta: float, seed: int) -> PointCloud:
    '''
    Move every point by an independent uniform vector in the closed delta-ball, so
    that W-infinity(before, after) <= delta through the identity coupling.
    delta = 0 returns the cloud unchanged.
    '''
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if delta == 0:
        return cloud
    rng = np.random.default_rng(seed)
    moved = cloud.points + delta * _uniform_in_balls(rng, cloud.n, cloud.dim)
    return PointCloud(moved)


def _has_perfect_matching(dist: np.ndarray, threshold: float) -> bool:
    graph = sparse.csr_matrix((dist <= threshold).astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck_winf(a: PointCloud, b: PointCloud) -> float:
    '''
    W-infinity distance between two equal-size uniform empirical measures: the
    smallest t such that a perfect matching uses only pairs at distance <= t.

    Binary search over the sorted distinct pairwise distances with a Hopcroft-Karp
    feasibility check at each step.

    Args:
        a (PointCloud): First cloud.
        b (PointCloud): Second cloud, same N and d.

    Returns:
        float: The bottleneck value (one of the pairwise distances).
    '''
    if a.n != b.n or a.dim != b.dim:
        raise ShapeMismatchError(f"clouds differ in size: ({a.n}, {a.dim}) vs ({b.n}, {b.dim})")
    if a.n > MAX_BOTTLENECK_POINTS:
        raise ValueError(f"bottleneck_winf supports N <= {MAX_BOTTLENECK_POINTS}, got {a.n}")
    dist = cdist(a.points, b.points)
    values = np.unique(dist)
    # every row and column needs at least its nearest partner
    floor = max(dist.min(axis=1).max(), dist.min(axis=0).max())
    lo = int(np.searchsorted(values, floor))
    hi = values.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(dist, values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])
