"""
ADMM minimization of the discrete sum-of-norms functional over a weight graph.

The iteration runs on F = (N/2) J, which has the same minimizer as J:

    F(y) = 1/2 sum_n |y_n - x_n|^2 + sum_e kappa_e |z_e|,   z_e = y_m - y_n,

with kappa_e = lambda w_e / N. The applied penalty is rho / max(1, mean degree), so
that rho = 1 is a sensible default on graphs of any density.
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy import sparse
from scipy.sparse.linalg import cg

from .core import (PointCloud, ProblemParams, Representatives, SolveReport, SolverError,
                   WeightGraph, check_shapes, objective_value)

logger = logging.getLogger(__name__)


class SolverOptions(BaseModel):
    '''
    ADMM settings.

    Args:
        rho (float): Dimensionless augmented-Lagrangian penalty. Defaults to 1.0.
        max_iters (int): Iteration cap. Defaults to 20000.
        eps_primal (float): Primal residual tolerance. Defaults to 1e-8.
        eps_dual (float): Dual residual tolerance. Defaults to 1e-8.
        certificate_reference (float, optional): A lower proxy for inf J. When absent the
            certificate is taken against the dual lower bound.
        cg_tol (float): Relative tolerance of the conjugate-gradient y-update.
        cg_maxiter (int, optional): CG iteration cap; defaults to 10 N.
        log_every (int): Log residuals every this many iterations.
    '''

    rho: float = Field(default=1.0, gt=0.0)
    max_iters: int = Field(default=20000, ge=1)
    eps_primal: float = Field(default=1e-8, gt=0.0)
    eps_dual: float = Field(default=1e-8, gt=0.0)
    certificate_reference: Optional[float] = None
    cg_tol: float = Field(default=1e-10, gt=0.0)
    cg_maxiter: Optional[int] = Field(default=None, ge=1)
    log_every: int = Field(default=500, ge=1)


def incidence_matrix(graph: WeightGraph) -> sparse.csr_matrix:
    """Signed incidence operator L with (L y)_e = y_m - y_n."""
    e = graph.n_edges
    rows = np.concatenate([np.arange(e), np.arange(e)])
    cols = np.concatenate([graph.m, graph.n])
    vals = np.concatenate([np.ones(e), -np.ones(e)])
    return sparse.csr_matrix((vals, (rows, cols)), shape=(e, graph.n_points))


def group_soft_threshold(v: np.ndarray, thresh: np.ndarray) -> np.ndarray:
    '''
    Row-wise prox of thresh_e |.|: max(0, 1 - thresh_e / |v_e|) v_e.

    Rows with |v_e| <= thresh_e, the kink included, shrink to exactly zero.
    '''
    norms = np.linalg.norm(v, axis=1)
    scale = np.zeros_like(norms)
    active = norms > thresh
    scale[active] = 1.0 - thresh[active] / norms[active]
    return v * scale[:, None]


def dual_lower_bound(cloud: PointCloud, L: sparse.csr_matrix, nu: np.ndarray, kappa: np.ndarray) -> float:
    '''
    Lagrange dual value at multipliers nu, projected onto {|nu_e| <= kappa_e}.

    For the scaled problem the dual is <nu, L x> - 1/2 |L^T nu|^2; the returned value is
    rescaled by 2/N so it is a certified lower bound on inf J.
    '''
    norms = np.linalg.norm(nu, axis=1)
    over = norms > kappa
    nu = nu.copy()
    nu[over] *= (kappa[over] / norms[over])[:, None]
    lx = L @ cloud.points
    ltnu = L.T @ nu
    value = float(np.sum(nu * lx)) - 0.5 * float(np.sum(ltnu ** 2))
    return 2.0 * value / cloud.n


def distance_certificate(J_y: float, J_ref: float) -> float:
    """2 max(0, J(y) - J_ref): bounds (1/N) sum |y_n - y*_n|^2 whenever J_ref <= inf J."""
    return 2.0 * max(0.0, J_y - J_ref)


def _certify(J: float, dual_bound: Optional[float], opts: SolverOptions) -> Optional[float]:
    ref = opts.certificate_reference if opts.certificate_reference is not None else dual_bound
    if ref is None:
        return None
    if J < ref - 1e-9 * (1.0 + abs(ref)):
        logger.warning("objective %.17g is below the certificate reference %.17g", J, ref)
    return distance_certificate(J, ref)


def _cg_solve(A, b, x0, M, tol, maxiter):
    out = np.empty_like(b)
    for j in range(b.shape[1]):
        if not np.any(b[:, j]):
            out[:, j] = 0.0
            continue
        sol, info = cg(A, b[:, j], x0=x0[:, j], rtol=tol, atol=0.0, maxiter=maxiter, M=M)
        if info != 0:
            res = float(np.linalg.norm(A @ sol - b[:, j]) / np.linalg.norm(b[:, j]))
            raise SolverError(f"conjugate gradient did not converge (info={info}, relative residual {res:.3e})")
        out[:, j] = sol
    return out


def solve(cloud: PointCloud, params: ProblemParams, graph: WeightGraph,
          opts: Optional[SolverOptions] = None) -> tuple[Representatives, SolveReport]:
    '''
    Minimize the clustering functional by ADMM.

    Initialization is fixed (y = x, z = L x, dual = 0), so the run is deterministic.
    lambda = 0 and edgeless graphs return y = x without iterating.

    Args:
        cloud (PointCloud): The data.
        params (ProblemParams): Problem parameters; the weights are read from `graph`.
        graph (WeightGraph): Weight graph built from `cloud` and `params`.
        opts (SolverOptions, optional): ADMM settings.

    Returns:
        tuple: (Representatives, SolveReport)
    '''
    opts = opts or SolverOptions()
    check_shapes(cloud, graph)
    x = np.array(cloud.points)
    n, d = x.shape

    if params.lam == 0.0 or graph.n_edges == 0:
        J = objective_value(cloud, params, graph, x)
        report = SolveReport(objective=J, iterations=0, primal_residual=0.0, dual_residual=0.0,
                             dual_bound=J, distance_certificate=_certify(J, J, opts))
        return Representatives(x), report

    e = graph.n_edges
    L = incidence_matrix(graph)
    kappa = params.lam * graph.weight / n
    rho = opts.rho / max(1.0, 2.0 * e / n)
    A = (sparse.identity(n, format="csr") + rho * (L.T @ L)).tocsr()
    M = sparse.diags(1.0 / A.diagonal())
    cg_maxiter = opts.cg_maxiter or 10 * n
    thresh = kappa / rho

    y = x.copy()
    z = L @ x
    u = np.zeros_like(z)
    r_norm = s_norm = np.inf
    converged = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        y = _cg_solve(A, x + rho * (L.T @ (z - u)), y, M, opts.cg_tol, cg_maxiter)
        ly = L @ y
        z_old = z
        z = group_soft_threshold(ly + u, thresh)
        u = u + ly - z

        r_norm = float(np.linalg.norm(ly - z)) / np.sqrt(e * d)
        s_norm = rho * float(np.linalg.norm(L.T @ (z - z_old))) / np.sqrt(n * d)
        if not (np.isfinite(r_norm) and np.isfinite(s_norm)):
            raise SolverError(f"non-finite residual at iteration {it}")
        if it % opts.log_every == 0:
            logger.debug("%6d | primal %.3e  dual %.3e", it, r_norm, s_norm)
        if r_norm <= opts.eps_primal and s_norm <= opts.eps_dual:
            converged = True
            break

    if not converged:
        logger.warning("ADMM stopped at max_iters=%d (primal %.3e, dual %.3e)", opts.max_iters, r_norm, s_norm)
    if not np.all(np.isfinite(y)):
        raise SolverError("non-finite representatives")

    J = objective_value(cloud, params, graph, y)
    lower = dual_lower_bound(cloud, L, rho * u, kappa)
    report = SolveReport(objective=J, iterations=it, primal_residual=r_norm, dual_residual=s_norm,
                         dual_bound=lower, distance_certificate=_certify(J, lower, opts),
                         converged=converged)
    logger.info("solve: N=%d, E=%d, %d iterations, J=%.12g, certificate=%.3e",
                n, e, it, J, report.distance_certificate)
    return Representatives(y), report


def convexity_gap(cloud: PointCloud, params: ProblemParams, graph: WeightGraph, y, v) -> float:
    '''
    1/2 [J(y + v) + J(y - v)] - J(y) - (1/N) sum |v_n|^2, nonnegative up to rounding
    by uniform convexity of J.
    '''
    y = check_shapes(cloud, graph, y)
    v = check_shapes(cloud, graph, v)
    J = lambda arr: objective_value(cloud, params, graph, arr)  # noqa: E731
    return 0.5 * (J(y + v) + J(y - v)) - J(y) - float(np.sum(v ** 2)) / cloud.n
