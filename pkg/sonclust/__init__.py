"""Top-level package for sonclust."""

__author__ = """Xiaohao Yang"""
__email__ = "xiaohaoy111@gmail.com"
__version__ = "0.1.0"

from .ClusterDataSet import ClusterDataSet
from .format_creation import create_format
from .core import PointCloud, ProblemParams, WeightGraph, Representatives, SolveReport, objective_value
from .weights import TruncationPolicy, build_weights
from .solver import SolverOptions, solve
from .clusters import ClusterAssignment, extract_clusters, rand_index, centroid_mse
from .genmodel import BallModel, sample, perturb, bottleneck_winf
