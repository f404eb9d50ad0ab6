import logging
import os
from typing import Optional

import numpy as np
import pandas as pd

from .clusters import ClusterAssignment, centroid_mse, default_tau, extract_clusters, rand_index
from .core import PointCloud, ProblemParams, SolveReport, WeightGraph, WeightMode, read_numeric_csv
from .genmodel import BallModel, LabeledCloud, sample
from .solver import SolverOptions, solve
from .utils import check_file_path, write_json
from .weights import TruncationMode, TruncationPolicy, build_weights

logger = logging.getLogger(__name__)


class ClusterDataSet:
    '''
    Dataset class for localized sum-of-norms clustering.
    '''

    def __init__(self, cloud: PointCloud | np.ndarray | str = None, labels=None,
                 model: BallModel | str = None, labeled: bool = False):
        '''
        Add data and, optionally, the ground truth it was drawn from.

        Args:
            cloud (PointCloud, array or str): The points, or the path to a CSV/JSON file.
            labels (array, optional): True component of each point (-1 for none).
            model (BallModel or str): The generating ball model, or the path to its JSON file.
            labeled (bool): The CSV file carries a trailing label column.
        '''

        self.model = self.__checkModelInputType(model) if model is not None else None
        self.cloud, file_labels = (self.__checkCloudInputType(cloud, labeled) if cloud is not None
                                   else (None, None))
        if labels is None:
            labels = file_labels
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)

        self.params, self.graph = None, None
        self.y, self.report, self.assignment = None, None, None

    def __checkCloudInputType(self, input, labeled: bool) -> tuple[PointCloud, Optional[np.ndarray]]:
        match input:
            case PointCloud():
                return input, None
            case LabeledCloud():
                return input.cloud, input.labels
            case str() if input.lower().endswith(".json"):
                with open(input) as f:
                    return PointCloud.from_json(f.read()), None
            case str():
                if labeled:
                    coords, labels = read_numeric_csv(input, drop_last=True)
                    return PointCloud(coords), labels.astype(np.int64)
                return PointCloud.from_csv(input), None
            case np.ndarray() | list():
                return PointCloud(np.asarray(input, dtype=float)), None
            case _:
                raise TypeError("Wrong type for cloud input!")

    def __checkModelInputType(self, input) -> BallModel:
        match input:
            case BallModel():
                return input
            case str():
                return BallModel.from_file(input)
            case _:
                raise TypeError("Wrong type for model input!")

    def sample(self, N: int, seed: int, model: BallModel = None) -> str:
        '''
        Draw a labeled sample from the ball model.

        Args:
            N (int): Number of points.
            seed (int): Random seed.
            model (BallModel, optional): Replaces the stored model.

        Returns:
            str: A short description of the sample.
        '''
        if model is not None:
            self.model = model
        if self.model is None:
            raise ValueError("Please provide a ball model before sampling")
        lc = sample(self.model, N, seed)
        self.cloud, self.labels = lc.cloud, np.array(lc.labels)
        self.params, self.graph, self.y, self.report, self.assignment = None, None, None, None, None
        return f"{N} points sampled from {len(self.model.components)} components."

    def solve(self, lam: float, gamma: float, policy: TruncationPolicy = None,
              weight_mode: WeightMode | str = WeightMode.exponential,
              opts: SolverOptions = None) -> SolveReport:
        '''
        Build the weight graph and minimize the clustering functional.

        Args:
            lam (float): Fusion strength lambda.
            gamma (float): Localization gamma.
            policy (TruncationPolicy, optional): Truncation; defaults to untruncated.
            weight_mode (WeightMode or str): 'exponential' or 'uniform'.
            opts (SolverOptions, optional): ADMM settings.

        Returns:
            SolveReport: Objective, residuals, iterations and distance certificate.
        '''
        if self.cloud is None:
            raise ValueError("Please load or sample a cloud before solving")
        policy = policy or TruncationPolicy()
        if policy.mode == TruncationMode.paper_cutoff and gamma <= 1.0:
            logger.warning("gamma=%s <= 1 has no cutoff radius; solving untruncated", gamma)
            policy = TruncationPolicy()
        self.params = ProblemParams(lam=lam, gamma=gamma, weight_mode=weight_mode)
        self.graph: WeightGraph = build_weights(self.cloud, self.params, policy)
        self.y, self.report = solve(self.cloud, self.params, self.graph, opts)
        self.assignment = None
        return self.report

    def extractClusters(self, tau: float = None) -> ClusterAssignment:
        '''
        Group points whose representatives are within tau of each other.

        Args:
            tau (float, optional): Fusion threshold. Defaults to 1e-6 times the diameter.

        Returns:
            ClusterAssignment: The clusters.
        '''
        if self.y is None:
            raise ValueError("This method can only be called after running the 'self.solve()' method")
        if tau is None:
            tau = default_tau(self.cloud)
        self.assignment = extract_clusters(self.y, tau)
        return self.assignment

    def recoveryReport(self, tau: float = None) -> dict:
        '''
        Score the extracted clusters against the true labels.

        Returns:
            dict: {K, rand_index, centroid_mse}; the scores are None without ground truth.
        '''
        if self.assignment is None or tau is not None:
            self.extractClusters(tau)
        out = {"K": self.assignment.K, "rand_index": None, "centroid_mse": None}
        if self.labels is not None:
            # boundary points (label -1) belong to no component and are not scored
            keep = np.asarray(self.labels) >= 0
            out["rand_index"] = rand_index(ClusterAssignment.from_labels(self.assignment.labels[keep]),
                                           ClusterAssignment.from_labels(np.asarray(self.labels)[keep]))
            if self.model is not None:
                out["centroid_mse"] = centroid_mse(self.cloud, self.y, self.labels, self.model.centroids())
        return out

    def to_df(self) -> pd.DataFrame:
        """Coordinates, representatives, cluster labels and true labels, one row per point."""
        if self.cloud is None:
            raise ValueError("No data loaded")
        d = self.cloud.dim
        df = pd.DataFrame(self.cloud.points, columns=[f"x{i}" for i in range(d)])
        if self.y is not None:
            for i in range(d):
                df[f"y{i}"] = self.y.values[:, i]
        if self.assignment is not None:
            df["cluster"] = self.assignment.labels
        if self.labels is not None:
            df["label"] = self.labels
        return df

    def export(self, out_dir: str, prefix: str = "") -> dict:
        '''
        Write representatives CSV, SolveReport JSON, ClusterAssignment CSV and, with
        ground truth, a recovery JSON.

        Args:
            out_dir (str): Output directory.
            prefix (str): File name prefix.

        Returns:
            dict: Paths of the written files.
        '''
        if self.y is None:
            raise ValueError("This method can only be called after running the 'self.solve()' method")
        if self.assignment is None:
            self.extractClusters()
        paths = {
            "representatives": check_file_path(os.path.join(out_dir, f"{prefix}representatives.csv")),
            "report": os.path.join(out_dir, f"{prefix}report.json"),
            "clusters": check_file_path(os.path.join(out_dir, f"{prefix}clusters.csv")),
        }
        self.y.to_csv(paths["representatives"])
        write_json({
            "objective": self.report.objective,
            "iterations": self.report.iterations,
            "primal_residual": self.report.primal_residual,
            "dual_residual": self.report.dual_residual,
            "certificate": self.report.distance_certificate,
            "dual_bound": self.report.dual_bound,
            "converged": self.report.converged,
            "params": self.params.model_dump(mode="json", by_alias=True),
        }, paths["report"])
        self.assignment.to_csv(paths["clusters"])
        if self.labels is not None:
            paths["recovery"] = write_json(self.recoveryReport(), os.path.join(out_dir, f"{prefix}recovery.json"))
        return paths
