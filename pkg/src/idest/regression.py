"""Weighted polynomial least squares with intercept.

The production path standardizes the abscissae and solves the weighted
design by orthogonal factorization; Vandermonde columns built from nearby
distance values are badly conditioned otherwise.  A direct normal-equation
solver is included purely as a brute-force cross-check for tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient

_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class WlsProblem:
    """min over (intercept, eta) of sum_i w_i (y_i - intercept - P(x_i))^2.

    ``P`` is a polynomial of the given degree with zero constant term and
    coefficient vector eta.  Degree 0 is permitted and reduces the problem
    to a weighted mean of the responses (used by reduction tests); the
    estimator configuration itself requires degree >= 1.
    """

    xs: np.ndarray
    ys: np.ndarray
    weights: np.ndarray
    degree: int

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64).reshape(-1)
        ys = np.asarray(self.ys, dtype=np.float64).reshape(-1)
        ws = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if not (xs.size == ys.size == ws.size):
            raise ValueError("xs, ys and weights must have equal lengths")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if xs.size < self.degree + 2:
            raise ValueError(
                f"need at least degree + 2 = {self.degree + 2} rows, got {xs.size}"
            )
        if not np.isfinite(xs).all() or not np.isfinite(ys).all():
            raise ValueError("xs and ys must be finite")
        if not np.isfinite(ws).all() or np.any(ws <= 0):
            raise ValueError("weights must be finite and strictly positive")
        for name, arr in (("xs", xs), ("ys", ys), ("weights", ws)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class WlsSolution:
    """Fitted intercept (value of the polynomial at x = 0), coefficients
    eta (length = degree), the weighted residual sum at the solution, and a
    condition estimate of the scaled design matrix."""

    intercept: float
    eta: np.ndarray
    residual_sum: float
    condition_estimate: float

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=np.float64).reshape(-1)
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)


def _standardized_design(xs: np.ndarray, degree: int):
    """Center-and-scale xs, return (design, center, scale).

    The affine reparameterization changes nothing mathematically but keeps
    the factorization well conditioned; coefficients are mapped back to the
    original coordinates afterwards.
    """
    if degree == 0:
        return np.ones((xs.size, 1)), 0.0, 1.0
    center = float(xs.mean())
    scale = float(xs.std())
    if scale == 0.0:
        raise RankDeficient("xs are all identical; polynomial fit is rank deficient")
    z = (xs - center) / scale
    return np.vander(z, degree + 1, increasing=True), center, scale


def _map_back(coef_std: np.ndarray, center: float, scale: float, degree: int):
    """Coefficients of sum_d c_d ((x - center)/scale)^d expressed in plain x."""
    if degree == 0:
        return np.asarray(coef_std, dtype=np.float64)
    p = np.polynomial.Polynomial(coef_std)
    composed = p(np.polynomial.Polynomial([-center / scale, 1.0 / scale]))
    coef = np.zeros(degree + 1)
    coef[: composed.coef.size] = composed.coef
    return coef


def solve_wls(problem: WlsProblem) -> WlsSolution:
    """Solve the weighted polynomial fit by orthogonal factorization.

    Returns the intercept evaluated at x = 0 in the original coordinates.
    Raises RankDeficient when the scaled design has numerical rank below
    degree + 1 (singular values under 1e-10 times the largest).
    """
    xs, ys, ws, degree = problem.xs, problem.ys, problem.weights, problem.degree
    design, center, scale = _standardized_design(xs, degree)
    sqw = np.sqrt(ws)
    aw = design * sqw[:, None]
    bw = ys * sqw
    coef_std, _, rank, sv = np.linalg.lstsq(aw, bw, rcond=_RANK_RTOL)
    if rank < degree + 1:
        raise RankDeficient(
            f"design matrix rank {rank} < {degree + 1} (singular values {sv})"
        )
    coef = _map_back(coef_std, center, scale, degree)
    fitted = design @ coef_std
    residual_sum = float(max(np.sum(ws * (ys - fitted) ** 2), 0.0))
    condition = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    return WlsSolution(
        intercept=float(coef[0]),
        eta=coef[1:],
        residual_sum=residual_sum,
        condition_estimate=condition,
    )


def solve_wls_normal_equations(problem: WlsProblem) -> WlsSolution:
    """Reference solver via the weighted normal equations on the raw design.

    Test oracle only: numerically inferior to solve_wls but independent of
    it.  Solves (V' W V) c = V' W y directly.
    """
    xs, ys, ws, degree = problem.xs, problem.ys, problem.weights, problem.degree
    design = np.vander(xs, degree + 1, increasing=True)
    gram = design.T @ (design * ws[:, None])
    rhs = design.T @ (ws * ys)
    try:
        coef = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise RankDeficient(str(exc)) from exc
    fitted = design @ coef
    residual_sum = float(max(np.sum(ws * (ys - fitted) ** 2), 0.0))
    condition = float(np.linalg.cond(gram))
    return WlsSolution(
        intercept=float(coef[0]),
        eta=coef[1:],
        residual_sum=residual_sum,
        condition_estimate=condition,
    )
