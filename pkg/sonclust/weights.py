"""
Truncated exponential weight graphs built on a uniform grid index, plus the
truncation formulas.
"""

import itertools
import logging
import math
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.spatial.distance import cdist

from .core import PointCloud, ProblemParams, WeightGraph, WeightMode

logger = logging.getLogger(__name__)

EXACT_DIAMETER_LIMIT = 10_000


class TruncationMode(str, Enum):
    none = "none"
    paper_cutoff = "paper_cutoff"
    explicit = "explicit"


class TruncationPolicy(BaseModel):
    '''
    How the weight graph is truncated.

    Args:
        mode (TruncationMode): 'none' keeps all pairs, 'paper_cutoff' uses
            (d + 4/3) log(gamma) / gamma, 'explicit' uses `omega`.
        omega (float, optional): Radius for the explicit mode.
    '''

    model_config = ConfigDict(frozen=True)

    mode: TruncationMode = TruncationMode.none
    omega: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _explicit_needs_radius(self):
        if self.mode == TruncationMode.explicit and self.omega is None:
            raise ValueError("explicit truncation requires omega")
        return self

    @classmethod
    def from_params(cls, params: ProblemParams) -> "TruncationPolicy":
        if params.omega is None:
            return cls()
        return cls(mode=TruncationMode.explicit, omega=params.omega)

    def radius(self, gamma: float, d: int) -> Optional[float]:
        """The truncation radius for this policy, or None when untruncated."""
        if self.mode == TruncationMode.none:
            return None
        if self.mode == TruncationMode.paper_cutoff:
            return truncation_radius(gamma, d)
        return self.omega


def truncation_radius(gamma: float, d: int) -> float:
    '''
    Cutoff radius (d + 4/3) gamma^-1 log(gamma).

    Args:
        gamma (float): Localization, must exceed 1.
        d (int): Dimension.

    Returns:
        float: The cutoff radius.
    '''
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if gamma <= 1.0:
        raise ValueError(f"the cutoff (d + 4/3) log(gamma)/gamma is not positive for gamma={gamma}; "
                         "use truncation mode 'none' or 'explicit'")
    return (d + 4.0 / 3.0) * math.log(gamma) / gamma


def truncation_error_bound(M: float, lam: float, gamma: float, d: int, omega: float) -> float:
    """2 M lambda gamma^(d+1) e^(-gamma omega): mean-square gap between truncated and full minimizers."""
    if M < 0 or lam < 0 or gamma <= 0 or omega <= 0:
        raise ValueError(f"need M >= 0, lambda >= 0, gamma > 0, omega > 0; got {M}, {lam}, {gamma}, {omega}")
    return 2.0 * M * lam * gamma ** (d + 1) * math.exp(-gamma * omega)


class DiameterEstimate(NamedTuple):
    value: float
    exact: bool


def diameter_estimate(cloud: PointCloud, exact_limit: int = EXACT_DIAMETER_LIMIT,
                      chunk: int = 1024) -> DiameterEstimate:
    '''
    Largest pairwise distance of the cloud.

    Exact (chunked all-pairs) up to `exact_limit` points; above that, the bounding-box
    bound sqrt(d) * (max coordinate range), flagged with exact=False.
    '''
    pts = cloud.points
    if cloud.n == 1:
        return DiameterEstimate(0.0, True)
    if cloud.n > exact_limit:
        span = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
        return DiameterEstimate(math.sqrt(cloud.dim) * span, False)
    best = 0.0
    for start in range(0, cloud.n, chunk):
        block = cdist(pts[start:start + chunk], pts[start:])
        best = max(best, float(block.max()))
    return DiameterEstimate(best, True)


def diameter(cloud: PointCloud) -> float:
    """M = diam supp mu; an upper bound (logged) for very large clouds."""
    est = diameter_estimate(cloud)
    if not est.exact:
        logger.warning("diameter of %d points is a bounding-box upper bound", cloud.n)
    return est.value


def pair_distances(points: np.ndarray, m: np.ndarray, n: np.ndarray) -> np.ndarray:
    """|x_m - x_n| for index arrays with m < n. Every construction path goes through here."""
    return np.sqrt(np.sum((points[m] - points[n]) ** 2, axis=1))


def edge_weights(dist: np.ndarray, gamma: float, d: int, mode: WeightMode) -> np.ndarray:
    """gamma^(d+1) e^(-gamma r), or gamma^(d+1) in uniform mode. Underflow gives 0.0."""
    scale = gamma ** (d + 1)
    if mode == WeightMode.uniform:
        return np.full(dist.shape, scale)
    return scale * np.exp(-gamma * dist)


def _all_pairs(points: np.ndarray, omega: Optional[float]):
    m, n = np.triu_indices(points.shape[0], k=1)
    dist = pair_distances(points, m, n)
    if omega is not None:
        keep = dist <= omega
        m, n, dist = m[keep], n[keep], dist[keep]
    return m, n, dist


def _grid_pairs(points: np.ndarray, omega: float):
    d = points.shape[1]
    # widened so a pair at distance exactly omega never lands two cells apart
    cell = omega * (1.0 + 1e-12)
    coords = np.floor(points / cell).astype(np.int64)
    keys, inverse = np.unique(coords, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    order = np.argsort(inverse, kind="stable")
    starts = np.concatenate([[0], np.cumsum(np.bincount(inverse, minlength=len(keys)))])
    lookup = {tuple(k): i for i, k in enumerate(keys.tolist())}
    offsets = list(itertools.product((-1, 0, 1), repeat=d))

    ms, ns, ds = [], [], []
    for c, key in enumerate(keys.tolist()):
        members = order[starts[c]:starts[c + 1]]
        neighbours = []
        for off in offsets:
            j = lookup.get(tuple(k + o for k, o in zip(key, off)))
            if j is not None:
                neighbours.append(order[starts[j]:starts[j + 1]])
        cand = np.concatenate(neighbours)
        mm, nn = np.meshgrid(members, cand, indexing="ij")
        mm, nn = mm.ravel(), nn.ravel()
        upper = mm < nn
        mm, nn = mm[upper], nn[upper]
        dist = pair_distances(points, mm, nn)
        keep = dist <= omega
        ms.append(mm[keep])
        ns.append(nn[keep])
        ds.append(dist[keep])
    if not ms:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    return np.concatenate(ms), np.concatenate(ns), np.concatenate(ds)


def build_weights(cloud: PointCloud, params: ProblemParams, policy: Optional[TruncationPolicy] = None,
                  use_grid: bool = True) -> WeightGraph:
    '''
    Build the exact weight graph of the cloud.

    With a truncation radius omega the edge set is exactly {(m, n): |x_m - x_n| <= omega},
    found through a uniform grid with cell size omega. Without truncation every pair is
    an edge (all-pairs construction, O(N^2) memory).

    Args:
        cloud (PointCloud): The data.
        params (ProblemParams): gamma and weight mode; params.omega is used when no policy is given.
        policy (TruncationPolicy, optional): Truncation policy.
        use_grid (bool): Use the grid index when truncating. Defaults to True; False
            forces the all-pairs construction (same result).

    Returns:
        WeightGraph: Edges sorted by (m, n).
    '''
    points = cloud.points
    if not np.all(np.isfinite(points)):
        raise ValueError("cannot build weights for non-finite coordinates")
    if policy is None:
        policy = TruncationPolicy.from_params(params)
    omega = policy.radius(params.gamma, cloud.dim)
    if params.omega is not None and policy.mode != TruncationMode.none and omega != params.omega:
        raise ValueError(f"params.omega={params.omega} disagrees with policy radius {omega}")
    if omega is None and params.omega is not None:
        omega = params.omega

    # the 3^d stencil stops paying off once it outgrows the cloud
    if omega is not None and use_grid and 3 ** cloud.dim <= max(cloud.n, 27):
        m, n, dist = _grid_pairs(points, omega)
    else:
        m, n, dist = _all_pairs(points, omega)

    order = np.lexsort((n, m))
    m, n, dist = m[order], n[order], dist[order]
    weight = edge_weights(dist, params.gamma, cloud.dim, params.weight_mode)
    logger.debug("weight graph: N=%d, omega=%s, %d edges", cloud.n, omega, m.size)
    return WeightGraph(m=m, n=n, dist=dist, weight=weight, n_points=cloud.n, dim=cloud.dim, omega=omega)
