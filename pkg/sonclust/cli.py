"""
Experiment harness: generation, solving, parameter sweeps and bound checks.

Every command is deterministic given its config and seeds, writes a CSV table with a
header row plus a JSON report carrying the config hash and the seed list, and sorts
its rows by parameters so the files do not depend on the thread schedule.
Exit codes: 0 success, 2 bound violation, 1 usage or IO error.
"""

import argparse
import logging
import os
import sys
from enum import Enum
from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .ClusterDataSet import ClusterDataSet
from .core import (BoundViolation, PointCloud, ProblemParams, SonClustError, WeightMode, gamma_schedule,
                   rate_bound, stability_bound, transport_solution_bound)
from .format_creation import create_format
from .genmodel import BallModel, LabeledCloud, derive_seed, perturb, sample
from .solver import SolverOptions
from .utils import (check_file_path, config_hash, fit_envelope_constant, fit_loglog_slope, run_cells,
                    write_json, write_table)
from .weights import TruncationMode, TruncationPolicy, diameter, truncation_error_bound, truncation_radius

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_BOUND = 0, 1, 2


class GammaKind(str, Enum):
    explicit = "explicit"
    schedule = "schedule"


class GammaRule(BaseModel):
    '''
    How gamma is chosen: an explicit grid, or the schedule max(1, c0 N^(3/(4d))).
    '''

    kind: GammaKind = GammaKind.schedule
    values: List[float] = []
    c0: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == GammaKind.explicit and not self.values:
            raise ValueError("an explicit gamma rule needs at least one value")
        if any(g <= 0 for g in self.values):
            raise ValueError("gamma values must be positive")
        return self

    def gamma_for(self, N: int, d: int) -> float:
        if self.kind == GammaKind.schedule:
            return gamma_schedule(N, d, self.c0)
        return self.values[0]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model: Optional[BallModel] = None
    model_file: Optional[str] = None
    n_list: List[int] = Field(default=[500], min_length=1)
    lambda_list: List[float] = Field(default=[1.0], min_length=1)
    gamma: GammaRule = GammaRule()
    truncation: TruncationPolicy = TruncationPolicy(mode=TruncationMode.paper_cutoff)
    seeds: List[int] = Field(default=[0], min_length=1)
    solver: SolverOptions = SolverOptions()
    omega_list: List[float] = [0.3, 0.6]
    delta_list: List[float] = [0.0, 1e-3, 1e-2]
    gap_list: List[float] = [0.1, 0.5, 2.0]
    tau_rel: float = Field(default=1e-6, gt=0.0)
    out: str = "results"
    threads: int = Field(default=1, ge=1)
    progress: bool = True

    @field_validator("n_list")
    @classmethod
    def _positive_n(cls, v):
        if any(n < 1 for n in v):
            raise ValueError("every N must be >= 1")
        return v

    @field_validator("lambda_list")
    @classmethod
    def _nonnegative_lambda(cls, v):
        if any(lam < 0 for lam in v):
            raise ValueError("lambda values must be >= 0")
        return v

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, v):
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        return v

    @field_validator("omega_list", "gap_list")
    @classmethod
    def _positive(cls, v):
        if any(x <= 0 for x in v):
            raise ValueError("values must be positive")
        return v

    @field_validator("delta_list")
    @classmethod
    def _nonnegative(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("values must be >= 0")
        return v

    def ball_model(self) -> BallModel:
        if self.model is not None:
            return self.model
        if self.model_file is not None:
            return BallModel.from_file(self.model_file)
        raise ValueError("the config names no ball model (set 'model' or 'model_file')")

    def path(self, name: str) -> str:
        return os.path.join(self.out, name)


SweepGammaTable = create_format({
    "gamma": (float, ...),
    "centroid_mse": (float, ...),
    "objective": (float, ...),
    "certificate": (Optional[float], None),
}, "SweepGammaRow")

SweepNCellTable = create_format({
    "N": (int, ...),
    "seed": (int, ...),
    "gamma": (float, ...),
    "centroid_mse": (float, ...),
    "certificate": (Optional[float], None),
}, "SweepNCellRow")

SweepNTable = create_format({
    "N": (int, ...),
    "gamma": (float, ...),
    "mean_centroid_mse": (float, ...),
    "rate_bound": (float, ...),
}, "SweepNRow")

TruncationTable = create_format({
    "omega": (float, ...),
    "paper_cutoff": (bool, ...),
    "edges": (int, ...),
    "gap": (float, ...),
    "bound": (float, ...),
    "slack": (float, ...),
    "ok": (bool, ...),
}, "TruncationRow")

StabilityTable = create_format({
    "seed": (int, ...),
    "delta": (float, ...),
    "W": (float, ...),
    "lhs": (float, ...),
    "rhs": (float, ...),
    "slack": (float, ...),
    "rep_gap": (float, ...),
    "rep_bound": (float, ...),
    "ok": (bool, ...),
}, "StabilityRow")

CompareTable = create_format({
    "gap": (float, ...),
    "seed": (int, ...),
    "mode": (str, ...),
    "K": (int, ...),
    "rand_index": (float, ...),
    "centroid_mse": (float, ...),
}, "CompareRow")

FusionTable = create_format({
    "lambda": (float, ...),
    "K": (int, ...),
    "rand_index": (float, ...),
    "centroid_mse": (float, ...),
    "objective": (float, ...),
}, "FusionRow")


def _report(config: ExperimentConfig, command: str, **extra) -> dict:
    return {"command": command, "config_hash": config_hash(config), "seeds": list(config.seeds), **extra}


def _solved(lc: LabeledCloud, lam: float, gamma: float, policy: TruncationPolicy, config: ExperimentConfig,
            weight_mode: WeightMode = WeightMode.exponential) -> tuple[ClusterDataSet, dict]:
    ds = ClusterDataSet(cloud=lc.cloud, labels=lc.labels, model=lc.model)
    ds.solve(lam, gamma, policy, weight_mode, config.solver)
    rec = ds.recoveryReport(tau=config.tau_rel * diameter(lc.cloud))
    return ds, rec


def _finish(config: ExperimentConfig, name: str, table: pd.DataFrame, report: dict) -> pd.DataFrame:
    write_table(table, config.path(f"{name}.csv"))
    write_json(report, config.path(f"{name}.json"))
    return table


def cmd_generate(config: ExperimentConfig) -> list[str]:
    '''
    Write one labeled cloud CSV per (N, seed), plus the model JSON.

    Returns:
        list[str]: Paths of the cloud files.
    '''
    model = config.ball_model()
    write_json(model.model_dump(mode="json"), config.path("model.json"))
    paths = []
    for N in config.n_list:
        for seed in config.seeds:
            path = check_file_path(config.path(f"cloud_N{N}_seed{seed}.csv"))
            sample(model, N, seed).to_csv(path)
            paths.append(path)
    write_json(_report(config, "generate", n_list=list(config.n_list), files=[os.path.basename(p) for p in paths]),
               config.path("generate.json"))
    logger.info("generated %d clouds in %s", len(paths), config.out)
    return paths


def cmd_solve(cloud_file: str, params: ProblemParams, policy: TruncationPolicy = None,
              opts: SolverOptions = None, out: str = "results", labeled: bool = False,
              model: BallModel | str = None, tau: float = None, prefix: str = "") -> dict:
    '''
    Solve one cloud file and write representatives, report and clusters.

    Args:
        cloud_file (str): Point cloud CSV (or JSON).
        params (ProblemParams): lambda, gamma, omega and weight mode.
        policy (TruncationPolicy, optional): Overrides params.omega.
        opts (SolverOptions, optional): ADMM settings.
        out (str): Output directory.
        labeled (bool): The CSV carries a trailing label column.
        model (BallModel or str, optional): Ground-truth model for the recovery report.
        tau (float, optional): Cluster fusion threshold.
        prefix (str): File name prefix.

    Returns:
        dict: Paths of the written files.
    '''
    ds = ClusterDataSet(cloud=cloud_file, model=model, labeled=labeled)
    ds.solve(params.lam, params.gamma, policy or TruncationPolicy.from_params(params), params.weight_mode, opts)
    ds.extractClusters(tau)
    return ds.export(out, prefix)


def cmd_sweep_gamma(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Centroid error against gamma on one seeded sample; reports the log-log slope.
    '''
    if config.gamma.kind != GammaKind.explicit:
        raise ValueError("sweep-gamma needs an explicit gamma grid")
    model = config.ball_model()
    N, seed, lam = config.n_list[0], config.seeds[0], config.lambda_list[0]
    lc = sample(model, N, seed)

    def cell(gamma):
        ds, rec = _solved(lc, lam, gamma, config.truncation, config)
        return {"gamma": gamma, "centroid_mse": rec["centroid_mse"], "objective": ds.report.objective,
                "certificate": ds.report.distance_certificate}

    gammas = sorted(set(config.gamma.values))
    rows = run_cells(cell, gammas, config.threads, not config.progress)
    table = SweepGammaTable(rows=rows).to_df()
    slope = fit_loglog_slope(table["gamma"], table["centroid_mse"])
    logger.info("sweep-gamma: fitted slope %.4f", slope)
    return _finish(config, "sweep_gamma", table, _report(config, "sweep-gamma", N=N, lam=lam, slope=slope))


def cmd_sweep_n(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Mean centroid error against N under the gamma rule, with the fitted envelope
    C (gamma N^(-1/(d v 2)) (log N)^(1/d') + (1 + lambda) gamma^(-1/3)).
    '''
    model = config.ball_model()
    d, lam = model.dim, config.lambda_list[0]
    cells = [(N, seed) for N in sorted(set(config.n_list)) for seed in config.seeds]

    def cell(args):
        N, seed = args
        gamma = config.gamma.gamma_for(N, d)
        ds, rec = _solved(sample(model, N, seed), lam, gamma, config.truncation, config)
        return {"N": N, "seed": seed, "gamma": gamma, "centroid_mse": rec["centroid_mse"],
                "certificate": ds.report.distance_certificate}

    cell_table = SweepNCellTable(rows=run_cells(cell, cells, config.threads, not config.progress)).to_df()
    write_table(cell_table, config.path("sweep_n_cells.csv"))
    grouped = cell_table.groupby("N", sort=True).agg(gamma=("gamma", "first"),
                                                    mean_centroid_mse=("centroid_mse", "mean"))
    shapes = [rate_bound(int(N), d, g, lam, 1.0) for N, g in zip(grouped.index, grouped["gamma"])]
    C = fit_envelope_constant(grouped["mean_centroid_mse"], shapes)
    rows = [{"N": int(N), "gamma": float(g), "mean_centroid_mse": float(e), "rate_bound": C * s}
            for (N, g, e), s in zip(grouped[["gamma", "mean_centroid_mse"]].itertuples(), shapes)]
    table = SweepNTable(rows=rows).to_df()
    slope = fit_loglog_slope(table["N"], table["mean_centroid_mse"])
    return _finish(config, "sweep_n", table, _report(config, "sweep-n", lam=lam, C=C, slope=slope))


def truncation_row(lc: LabeledCloud, full: ClusterDataSet, lam: float, gamma: float, omega: float, M: float,
                   config: ExperimentConfig, cutoff: Optional[float] = None) -> dict:
    '''
    Solve at truncation radius omega and compare with the untruncated solve `full`.

    Returns:
        dict: A truncation-check row; `ok` when the gap is within bound plus certificate slack.
    '''
    ds, _ = _solved(lc, lam, gamma, TruncationPolicy(mode=TruncationMode.explicit, omega=omega), config)
    gap = float(np.sum((ds.y.values - full.y.values) ** 2)) / lc.cloud.n
    bound = truncation_error_bound(M, lam, gamma, lc.cloud.dim, omega)
    slack = 2.0 * (full.report.distance_certificate + ds.report.distance_certificate)
    return {"omega": omega, "paper_cutoff": omega == cutoff, "edges": ds.graph.n_edges, "gap": gap,
            "bound": bound, "slack": slack, "ok": gap <= bound + slack}


def stability_row(lc: LabeledCloud, base: ClusterDataSet, moved: PointCloud, delta: float, lam: float,
                  gamma: float, config: ExperimentConfig, seed: int = 0) -> dict:
    '''
    Solve on the moved cloud (untruncated) and compare objectives and representatives
    with the untruncated solve `base` on the original cloud.
    '''
    other, _ = _solved(LabeledCloud(moved, lc.labels, lc.model), lam, gamma, TruncationPolicy(), config)
    W = float(np.max(np.linalg.norm(moved.points - lc.cloud.points, axis=1)))
    M = diameter(PointCloud(np.vstack([lc.cloud.points, moved.points])))
    lhs = abs(other.report.objective - base.report.objective)
    slack = 2.0 * (base.report.distance_certificate + other.report.distance_certificate)
    rep_gap = float(np.sum((other.y.values - base.y.values) ** 2)) / lc.cloud.n
    rhs = stability_bound(M, gamma, delta)
    rep_bound = transport_solution_bound(M, gamma, delta)
    return {"seed": seed, "delta": delta, "W": W, "lhs": lhs, "rhs": rhs, "slack": slack,
            "rep_gap": rep_gap, "rep_bound": rep_bound,
            "ok": lhs <= rhs + slack and rep_gap <= rep_bound + slack}


def cmd_truncation_check(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Solve truncated and untruncated problems and check the mean-square gap against
    2 M lambda gamma^(d+1) e^(-gamma omega), plus twice the summed certificates.
    Raises BoundViolation (after writing the table) if any row fails.
    '''
    model = config.ball_model()
    d, N, seed, lam = model.dim, config.n_list[0], config.seeds[0], config.lambda_list[0]
    lc = sample(model, N, seed)
    gamma = config.gamma.gamma_for(N, d)
    M = diameter(lc.cloud)
    full, _ = _solved(lc, lam, gamma, TruncationPolicy(), config)
    cutoff = truncation_radius(gamma, d) if gamma > 1.0 else None
    omegas = sorted(set(config.omega_list) | ({cutoff} if cutoff is not None else set()))

    def cell(omega):
        return truncation_row(lc, full, lam, gamma, omega, M, config, cutoff=cutoff)

    table = TruncationTable(rows=run_cells(cell, omegas, config.threads, not config.progress)).to_df()
    _finish(config, "truncation_check", table,
            _report(config, "truncation-check", N=N, lam=lam, gamma=gamma, M=M, all_ok=bool(table["ok"].all())))
    if not table["ok"].all():
        raise BoundViolation(f"truncation bound violated at omega={table.loc[~table['ok'], 'omega'].tolist()}")
    return table


def cmd_stability(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Perturb each seeded sample by at most delta and check
    |J_opt(perturbed) - J_opt| <= 3 M e^(2 gamma delta) delta + (e^(2 gamma delta) - 1) M^2
    and the transported-representatives bound, each with certificate slack.
    Graphs are untruncated. Raises BoundViolation (after writing the table) on failure.
    '''
    model = config.ball_model()
    d, N, lam = model.dim, config.n_list[0], config.lambda_list[0]
    gamma = config.gamma.gamma_for(N, d)
    if any(gamma * delta > 1.0 for delta in config.delta_list):
        raise ValueError(f"stability needs gamma * delta <= 1 (gamma={gamma})")
    untruncated = TruncationPolicy()

    def cell(seed):
        lc = sample(model, N, seed)
        base, _ = _solved(lc, lam, gamma, untruncated, config)
        rows = []
        for idx, delta in enumerate(config.delta_list):
            moved = perturb(lc.cloud, delta, derive_seed(seed, idx))
            rows.append(stability_row(lc, base, moved, delta, lam, gamma, config, seed=seed))
        return rows

    rows = [r for rs in run_cells(cell, config.seeds, config.threads, not config.progress) for r in rs]
    rows.sort(key=lambda r: (r["delta"], r["seed"]))
    table = StabilityTable(rows=rows).to_df()
    _finish(config, "stability", table,
            _report(config, "stability", N=N, lam=lam, gamma=gamma, all_ok=bool(table["ok"].all())))
    if not table["ok"].all():
        raise BoundViolation("stability bound violated")
    return table


def cmd_compare_unweighted(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Two-ball recovery with exponential against uniform weights at matched
    lambda gamma^(d+1), over the gap grid. Reports the largest gap at which the
    exponential weights recover every seed while the uniform weights do not.
    '''
    d = config.model.dim if config.model is not None else 2
    N, lam = config.n_list[0], config.lambda_list[0]
    gamma = config.gamma.gamma_for(N, d)
    cells = [(gap, seed, mode) for gap in sorted(set(config.gap_list)) for seed in config.seeds
             for mode in (WeightMode.exponential, WeightMode.uniform)]

    def cell(args):
        gap, seed, mode = args
        lc = sample(BallModel.two_balls(gap, dim=d), N, seed)
        policy = config.truncation if mode == WeightMode.exponential else TruncationPolicy()
        _, rec = _solved(lc, lam, gamma, policy, config, weight_mode=mode)
        return {"gap": gap, "seed": seed, "mode": mode.value, "K": rec["K"], "rand_index": rec["rand_index"],
                "centroid_mse": rec["centroid_mse"]}

    table = CompareTable(rows=run_cells(cell, cells, config.threads, not config.progress)).to_df()
    summary = []
    threshold = None
    for gap, group in table.groupby("gap", sort=True):
        exp_ok = bool((group.loc[group["mode"] == "exponential", "rand_index"] == 1.0).all())
        uni_ok = bool((group.loc[group["mode"] == "uniform", "rand_index"] == 1.0).all())
        summary.append({"gap": float(gap), "exponential_recovers": exp_ok, "uniform_recovers": uni_ok})
        if exp_ok and not uni_ok:
            threshold = float(gap)
    return _finish(config, "compare_unweighted", table,
                   _report(config, "compare-unweighted", N=N, lam=lam, gamma=gamma,
                           effective_fusion=lam * gamma ** (d + 1), threshold_gap=threshold, per_gap=summary))


def cmd_fusion_threshold(config: ExperimentConfig) -> pd.DataFrame:
    '''
    Smallest lambda on the grid at which every true component fuses into one cluster
    and the clusters match the truth (rand index 1).
    '''
    model = config.ball_model()
    N, seed = config.n_list[0], config.seeds[0]
    gamma = config.gamma.gamma_for(N, model.dim)
    lc = sample(model, N, seed)

    def cell(lam):
        ds, rec = _solved(lc, lam, gamma, config.truncation, config)
        return {"lambda": lam, "K": rec["K"], "rand_index": rec["rand_index"],
                "centroid_mse": rec["centroid_mse"], "objective": ds.report.objective}

    lambdas = sorted(set(config.lambda_list))
    table = FusionTable(rows=run_cells(cell, lambdas, config.threads, not config.progress)).to_df()
    hits = table[(table["rand_index"] == 1.0) & (table["K"] == len(model.components))]
    threshold = float(hits["lambda"].iloc[0]) if len(hits) else None
    logger.info("fusion threshold: %s", threshold)
    return _finish(config, "fusion_threshold", table,
                   _report(config, "fusion-threshold", N=N, gamma=gamma, threshold=threshold))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sonclust", description="Localized sum-of-norms clustering experiments")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="experiment config JSON")
    common.add_argument("--seed", type=int, action="append", help="seed (repeatable); overrides config seeds")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int)
    common.add_argument("--no-progress", action="store_true")
    common.add_argument("--n", type=int, action="append", dest="n_list")
    common.add_argument("--lambda", type=float, action="append", dest="lambda_list")
    common.add_argument("--gamma", type=float, action="append", dest="gamma_values",
                        help="explicit gamma (repeatable)")
    common.add_argument("--c0", type=float, help="use the schedule max(1, c0 N^(3/(4d)))")
    common.add_argument("--omega", type=float, action="append", dest="omega_list")
    common.add_argument("--delta", type=float, action="append", dest="delta_list")
    common.add_argument("--gap", type=float, action="append", dest="gap_list")
    common.add_argument("--truncation", choices=[m.value for m in TruncationMode])

    for name in ("generate", "sweep-gamma", "sweep-n", "truncation-check", "stability",
                 "compare-unweighted", "fusion-threshold"):
        sub.add_parser(name, parents=[common])

    solve_p = sub.add_parser("solve")
    solve_p.add_argument("cloud", help="point cloud CSV or JSON")
    solve_p.add_argument("--lambda", type=float, required=True, dest="lam")
    solve_p.add_argument("--gamma", type=float, required=True)
    solve_p.add_argument("--omega", type=float)
    solve_p.add_argument("--cutoff", action="store_true", help="truncate at (d + 4/3) log(gamma) / gamma")
    solve_p.add_argument("--weight-mode", choices=[m.value for m in WeightMode], default="exponential")
    solve_p.add_argument("--labeled", action="store_true", help="the CSV has a trailing label column")
    solve_p.add_argument("--model", help="ball model JSON for the recovery report")
    solve_p.add_argument("--tau", type=float)
    solve_p.add_argument("--rho", type=float, default=1.0)
    solve_p.add_argument("--max-iters", type=int, default=20000)
    solve_p.add_argument("--eps", type=float, default=1e-8)
    solve_p.add_argument("--out", default="results")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    '''
    Read the config file (if any) and apply command-line overrides.
    '''
    if args.config:
        with open(args.config) as f:
            base = ExperimentConfig.model_validate_json(f.read())
    else:
        base = ExperimentConfig()
    merged = base.model_dump()
    for key in ("n_list", "lambda_list", "omega_list", "delta_list", "gap_list", "out", "threads"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if args.seed:
        merged["seeds"] = args.seed
    if args.no_progress:
        merged["progress"] = False
    if args.gamma_values:
        merged["gamma"] = {"kind": GammaKind.explicit, "values": args.gamma_values, "c0": merged["gamma"]["c0"]}
    elif args.c0 is not None:
        merged["gamma"] = {"kind": GammaKind.schedule, "values": [], "c0": args.c0}
    if args.truncation is not None:
        merged["truncation"] = {"mode": args.truncation, "omega": merged["truncation"]["omega"]}
    return ExperimentConfig.model_validate(merged)


COMMANDS = {
    "generate": cmd_generate,
    "sweep-gamma": cmd_sweep_gamma,
    "sweep-n": cmd_sweep_n,
    "truncation-check": cmd_truncation_check,
    "stability": cmd_stability,
    "compare-unweighted": cmd_compare_unweighted,
    "fusion-threshold": cmd_fusion_threshold,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    try:
        if args.command == "solve":
            policy = None
            if args.cutoff:
                policy = TruncationPolicy(mode=TruncationMode.paper_cutoff)
            params = ProblemParams(lam=args.lam, gamma=args.gamma, omega=args.omega, weight_mode=args.weight_mode)
            opts = SolverOptions(rho=args.rho, max_iters=args.max_iters, eps_primal=args.eps, eps_dual=args.eps)
            paths = cmd_solve(args.cloud, params, policy, opts, out=args.out, labeled=args.labeled,
                              model=args.model, tau=args.tau)
            for path in paths.values():
                print(path)
        else:
            result = COMMANDS[args.command](load_config(args))
            if isinstance(result, pd.DataFrame):
                print(result.to_string(index=False))
    except BoundViolation as e:
        print(f"bound violation: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (SonClustError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
