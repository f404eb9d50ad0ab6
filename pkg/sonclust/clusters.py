"""
Cluster extraction from representatives, centroids, recovery scores and the
limiting-functional quantities.
"""

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.spatial.distance import cdist
from scipy.special import gamma as gamma_fn

from .core import PointCloud, Representatives, ShapeMismatchError
from .weights import diameter

if TYPE_CHECKING:
    from .genmodel import BallModel

logger = logging.getLogger(__name__)

NONE_LABEL = -1


class UnionFind:
    """Quick-find over 0..n-1: every element stores its root directly."""

    def __init__(self, size: int):
        self.roots = np.arange(size)

    @property
    def num_components(self) -> int:
        return int(np.unique(self.roots).size)

    def union_many(self, members: np.ndarray) -> None:
        """Merge the sets of all `members` into the one with the smallest root."""
        found = np.unique(self.roots[members])
        if found.size > 1:
            self.roots[np.isin(self.roots, found)] = found[0]


@dataclass(frozen=True)
class ClusterAssignment:
    '''
    Cluster labels 0..K-1, numbered in order of each cluster's smallest member index.
    '''

    labels: np.ndarray
    K: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.size and (labels.min() < 0 or labels.max() >= self.K or np.unique(labels).size != self.K):
            raise ValueError("labels must cover exactly 0..K-1")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "ClusterAssignment":
        """Relabel arbitrary integer labels into canonical order."""
        mapping = {}
        canon = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            canon[i] = mapping.setdefault(int(lab), len(mapping))
        return cls(canon, len(mapping))

    def to_csv(self, file_name: str) -> None:
        pd.DataFrame({"index": np.arange(self.labels.size), "label": self.labels}).to_csv(file_name, index=False)


def default_tau(cloud: PointCloud) -> float:
    """1e-6 times the diameter of the cloud."""
    return 1e-6 * diameter(cloud)


def extract_clusters(y, tau: float, chunk: int = 1024) -> ClusterAssignment:
    '''
    Connected components of the graph joining n and m whenever |y_n - y_m| <= tau.

    Args:
        y (Representatives or array): Representatives, shape (N, d).
        tau (float): Fusion threshold, >= 0.
        chunk (int): Row block size for the pairwise distance sweep.

    Returns:
        ClusterAssignment: Canonically numbered clusters.
    '''
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    vals = y.values if isinstance(y, Representatives) else np.asarray(y, dtype=float)
    if vals.ndim == 1:
        vals = vals.reshape(-1, 1)
    n = vals.shape[0]
    uf = UnionFind(n)
    for start in range(0, n, chunk):
        block = cdist(vals[start:start + chunk], vals[start:]) <= tau
        for row in range(block.shape[0]):
            uf.union_many(start + np.flatnonzero(block[row]))
    return ClusterAssignment.from_labels(uf.roots)


def mu_centroid(cloud: PointCloud, indices) -> np.ndarray:
    """Mean of the selected points."""
    idx = np.asarray(list(indices), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("the centroid of an empty set is undefined")
    return cloud.points[idx].mean(axis=0)


def centroid_mse(cloud: PointCloud, y, true_labels, true_centroids) -> float:
    '''
    (1/N) sum over labeled points of |y_n - a(U_l(n))|^2. Points labeled NONE_LABEL (-1)
    are skipped but still count in N.

    Args:
        cloud (PointCloud): The data (fixes N).
        y (Representatives or array): Representatives.
        true_labels (sequence of int): Component of each point, or -1.
        true_centroids (sequence of vectors): Centroid of each component.

    Returns:
        float: The centroid mean-square error.
    '''
    vals = y.values if isinstance(y, Representatives) else np.asarray(y, dtype=float).reshape(cloud.n, -1)
    labels = np.asarray(true_labels, dtype=np.int64)
    cents = np.asarray(true_centroids, dtype=float).reshape(len(true_centroids), -1)
    if labels.size != cloud.n or vals.shape != cloud.points.shape:
        raise ShapeMismatchError("labels and representatives must match the cloud")
    if np.any(labels < NONE_LABEL) or np.any(labels >= len(cents)):
        raise ValueError(f"labels must lie in -1..{len(cents) - 1}")
    keep = labels != NONE_LABEL
    return float(np.sum((vals[keep] - cents[labels[keep]]) ** 2)) / cloud.n


def rand_index(a: ClusterAssignment, b: ClusterAssignment) -> float:
    """Fraction of point pairs on which the two clusterings agree."""
    la, lb = np.asarray(a.labels), np.asarray(b.labels)
    if la.size != lb.size:
        raise ShapeMismatchError(f"assignments have {la.size} and {lb.size} points")
    n = la.size
    total = n * (n - 1) // 2
    if total == 0:
        return 1.0
    pairs = lambda c: int(np.sum(c * (c - 1) // 2))  # noqa: E731
    _, joint = np.unique(np.stack([la, lb]), axis=1, return_counts=True)
    same_both = pairs(joint)
    same_a = pairs(np.bincount(la))
    same_b = pairs(np.bincount(lb))
    agree = total - same_a - same_b + 2 * same_both
    return agree / total


def limit_constant_c(d: int) -> float:
    '''
    c = integral over R^d of e^(-|y|) |y . e_1| dy, computed as Gamma(d + 1) s_d with
    s_d = integral over the unit sphere of |omega_1|.

    Args:
        d (int): Dimension, 1..10.

    Returns:
        float: The constant c.
    '''
    if not 1 <= d <= 10:
        raise ValueError(f"limit_constant_c supports 1 <= d <= 10, got {d}")
    if d == 1:
        sphere = 2.0
    else:
        # |S^(d-2)| times the polar integral of |cos t| sin^(d-2) t over [0, pi]
        ring = 2.0 * math.pi ** ((d - 1) / 2.0) / gamma_fn((d - 1) / 2.0)
        half, _ = quad(lambda t: math.cos(t) * math.sin(t) ** (d - 2), 0.0, math.pi / 2.0,
                       epsabs=0.0, epsrel=1e-13, limit=200)
        sphere = ring * 2.0 * half
    return float(gamma_fn(d + 1)) * sphere


def j_infinity_piecewise_constant(model: "BallModel", lam: float, u_values) -> float:
    '''
    Limiting functional at a candidate constant on each ball: the gradient term
    vanishes, leaving sum_l m_l (|u_l - center_l|^2 + r_l^2 d / (d + 2)).

    Args:
        model (BallModel): The ball model.
        lam (float): Fusion strength (does not enter for these candidates).
        u_values (sequence of vectors): One value per component.

    Returns:
        float: The functional value.
    '''
    u = np.asarray(u_values, dtype=float).reshape(len(u_values), -1)
    if u.shape[0] != len(model.components):
        raise ShapeMismatchError(f"{u.shape[0]} values for {len(model.components)} components")
    d = model.dim
    total = 0.0
    for comp, value in zip(model.components, u):
        bias = float(np.sum((value - np.asarray(comp.center)) ** 2))
        total += comp.mass * (bias + comp.radius ** 2 * d / (d + 2.0))
    return total
