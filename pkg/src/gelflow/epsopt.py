"""Deterministic ε-constraint validation of trained surrogates.

Minimizes the GP mean of the negated product flow subject to a bound on
the radius-deviation GP mean, over the design box with an optional lower
temperature ceiling. Globality comes from an exhaustive dense-grid
evaluation of both GP means; a multistart local refinement sharpens the
grid optimum, and the solve certifies itself against the grid within a
discrete Lipschitz slack.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import InvalidInputError
from .gp import GPModel, predict_batch
from .process import Bounds, DEFAULT_BOUNDS, DesignPoint

_TEMP_DIM = 3


@dataclass(frozen=True)
class EpsProblem:
    """One ε-constrained single-objective instance over a fitted model pair."""

    models: tuple[GPModel, GPModel]  # (product-flow GP, radius GP)
    epsilon: float  # nm^2 ceiling on the radius-deviation mean
    temp_upper: float = 80.0
    start: DesignPoint | None = None
    bounds: Bounds = DEFAULT_BOUNDS

    def __post_init__(self):
        if not (isinstance(self.models[0], GPModel) and isinstance(self.models[1], GPModel)):
            raise InvalidInputError("both surrogates must be fitted GP models")
        if self.epsilon <= 0:
            raise InvalidInputError("epsilon must be positive")
        t_lo, t_hi = self.bounds.lower[_TEMP_DIM], self.bounds.upper[_TEMP_DIM]
        if not t_lo < self.temp_upper <= t_hi:
            raise InvalidInputError(
                f"temp_upper must lie in ({t_lo}, {t_hi}], got {self.temp_upper}"
            )


@dataclass(frozen=True)
class EpsConfig:
    n_starts: int = 64
    grid_resolution: int = 33
    seed: int = 0
    coarse_steps: int = 40
    penalty_weights: tuple[float, ...] = (1e2, 1e3, 1e4)
    polish_count: int = 8
    feasibility_tol: float = 1e-9


@dataclass(frozen=True)
class EpsResult:
    feasible: bool
    x: DesignPoint | None
    objective: float | None  # GP mean of -F_product at x
    constraint: float | None  # radius-deviation GP mean at x
    certified: bool
    cert_slack: float
    grid_objective: float | None
    epsilon: float
    temp_upper: float


@dataclass(frozen=True)
class GridEvaluation:
    """Both GP means tabulated on the full tensor grid over the design box."""

    axes: tuple[np.ndarray, ...]
    points: np.ndarray  # (resolution^4, 4)
    objective: np.ndarray  # flow-GP mean, flattened
    constraint: np.ndarray  # radius-GP mean, flattened
    resolution: int


def evaluate_grid(
    models: tuple[GPModel, GPModel], bounds: Bounds, resolution: int
) -> GridEvaluation:
    """Tabulate both GP means on a resolution^4 tensor grid."""
    if resolution < 2:
        raise InvalidInputError("grid resolution must be >= 2")
    lo, hi = bounds.lower_array, bounds.upper_array
    axes = tuple(np.linspace(lo[k], hi[k], resolution) for k in range(4))
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    n = points.shape[0]
    obj = np.empty(n)
    con = np.empty(n)
    step = 200_000
    for s in range(0, n, step):
        chunk = points[s : s + step]
        obj[s : s + step] = predict_batch(models[0], chunk, check_bounds=False)[0]
        con[s : s + step] = predict_batch(models[1], chunk, check_bounds=False)[0]
    return GridEvaluation(axes=axes, points=points, objective=obj, constraint=con, resolution=resolution)


def _temp_mask_count(grid: GridEvaluation, temp_upper: float) -> int:
    return int(np.sum(grid.axes[_TEMP_DIM] <= temp_upper + 1e-12))


def _grid_slack(grid: GridEvaluation, temp_upper: float) -> float:
    """Half the summed per-axis maximum adjacent change of the objective.

    A discrete Lipschitz bound on how much the true grid-cell optimum can
    undercut the tabulated values.
    """
    res = grid.resolution
    n_t = _temp_mask_count(grid, temp_upper)
    F = grid.objective.reshape(res, res, res, res)[:, :, :, :n_t]
    slack = 0.0
    for ax in range(4):
        if F.shape[ax] > 1:
            slack += float(np.abs(np.diff(F, axis=ax)).max())
    return 0.5 * slack


@dataclass(frozen=True)
class GridOracleResult:
    feasible: bool
    x: DesignPoint | None
    objective: float | None
    constraint: float | None
    n_points: int  # grid points actually inside the temperature ceiling


def grid_oracle(
    p: EpsProblem, resolution: int, grid: GridEvaluation | None = None
) -> GridOracleResult:
    """Best feasible point of the dense tensor grid (temp axis truncated)."""
    if grid is None or grid.resolution != resolution:
        grid = evaluate_grid(p.models, p.bounds, resolution)
    in_temp = grid.points[:, _TEMP_DIM] <= p.temp_upper + 1e-12
    n_points = int(np.sum(in_temp))
    feas = in_temp & (grid.constraint <= p.epsilon)
    if not np.any(feas):
        return GridOracleResult(False, None, None, None, n_points)
    idx = np.flatnonzero(feas)
    best = idx[np.argmin(grid.objective[idx])]
    return GridOracleResult(
        True,
        DesignPoint.from_array(grid.points[best]),
        float(grid.objective[best]),
        float(grid.constraint[best]),
        n_points,
    )


def _mean_fn(model: GPModel):
    def f(X: np.ndarray) -> np.ndarray:
        return predict_batch(model, np.atleast_2d(X), check_bounds=False)[0]

    return f


def _batched_penalty_descent(f, g, X0, lo, hi, epsilon, weights, steps):
    """Projected finite-difference gradient descent on all starts at once."""
    X = np.clip(np.array(X0, dtype=float), lo, hi)
    span = hi - lo
    h = 1e-5 * span
    for w in weights:
        lr = 0.05
        for _ in range(steps):
            grad = np.zeros_like(X)
            base = f(X) + w * np.maximum(g(X) - epsilon, 0.0) ** 2
            for k in range(X.shape[1]):
                Xp = X.copy()
                Xp[:, k] = np.clip(X[:, k] + h[k], lo[k], hi[k])
                Xm = X.copy()
                Xm[:, k] = np.clip(X[:, k] - h[k], lo[k], hi[k])
                fp = f(Xp) + w * np.maximum(g(Xp) - epsilon, 0.0) ** 2
                fm = f(Xm) + w * np.maximum(g(Xm) - epsilon, 0.0) ** 2
                grad[:, k] = (fp - fm) / (Xp[:, k] - Xm[:, k])
            norm = np.linalg.norm(grad / span, axis=1, keepdims=True)
            norm[norm == 0] = 1.0
            X_new = np.clip(X - lr * span * grad / (norm * span), lo, hi)
            worse = (f(X_new) + w * np.maximum(g(X_new) - epsilon, 0.0) ** 2) > base
            X_new[worse] = X[worse]
            X = X_new
            lr *= 0.93
    return X


def _restore_feasibility(g, x, lo, hi, epsilon, tol, max_steps=25):
    """Newton-like steps along the constraint gradient back into g <= eps."""
    x = x.copy()
    span = hi - lo
    for _ in range(max_steps):
        gv = float(g(x[None, :])[0])
        if gv <= epsilon + tol:
            return x, True
        grad = np.zeros(4)
        for k in range(4):
            h = 1e-5 * span[k]
            xp = x.copy()
            xp[k] = min(x[k] + h, hi[k])
            xm = x.copy()
            xm[k] = max(x[k] - h, lo[k])
            grad[k] = (float(g(xp[None, :])[0]) - float(g(xm[None, :])[0])) / (xp[k] - xm[k])
        n2 = float(grad @ grad)
        if n2 <= 1e-16:
            return x, False
        x = np.clip(x - (gv - epsilon) / n2 * grad, lo, hi)
    return x, float(g(x[None, :])[0]) <= epsilon + tol


def solve_eps(
    p: EpsProblem,
    config: EpsConfig = EpsConfig(),
    grid: GridEvaluation | None = None,
    extra_starts: list[np.ndarray] | None = None,
) -> EpsResult:
    """Solve one ε-constrained instance with grid certification.

    Multistart local search over scrambled low-discrepancy starts (plus
    the problem's start point), penalty-method refinement, feasibility
    restoration along the constraint gradient, and a final check that the
    dense grid holds no feasible point better than the result by more
    than the grid's Lipschitz slack.
    """
    if grid is None or grid.resolution != config.grid_resolution:
        grid = evaluate_grid(p.models, p.bounds, config.grid_resolution)
    lo = p.bounds.lower_array
    hi = p.bounds.upper_array.copy()
    hi[_TEMP_DIM] = p.temp_upper

    f = _mean_fn(p.models[0])
    g = _mean_fn(p.models[1])
    tol = config.feasibility_tol

    oracle = grid_oracle(p, config.grid_resolution, grid=grid)
    slack = _grid_slack(grid, p.temp_upper)

    sobol = qmc.Sobol(d=4, scramble=True, seed=config.seed)
    starts = [lo + sobol.random(config.n_starts) * (hi - lo)]
    if p.start is not None:
        starts.append(np.clip(p.start.as_array(), lo, hi)[None, :])
    if oracle.feasible:
        starts.append(oracle.x.as_array()[None, :])
    for xs in extra_starts or []:
        starts.append(np.clip(np.asarray(xs, dtype=float), lo, hi)[None, :])
    X0 = np.vstack(starts)

    candidates = [x for x in X0]
    coarse = _batched_penalty_descent(
        f, g, X0, lo, hi, p.epsilon, config.penalty_weights, config.coarse_steps
    )
    candidates.extend(x for x in coarse)

    # polish the most promising coarse points with a quasi-Newton pass
    pen = f(coarse) + 1e6 * np.maximum(g(coarse) - p.epsilon, 0.0) ** 2
    order = np.argsort(pen, kind="stable")[: config.polish_count]
    for i in order:
        x = coarse[i]
        for w in (1e4, 1e6):
            res = minimize(
                lambda z: float(f(z[None, :])[0])
                + w * max(float(g(z[None, :])[0]) - p.epsilon, 0.0) ** 2,
                x,
                method="L-BFGS-B",
                bounds=list(zip(lo, hi)),
                options={"maxiter": 60},
            )
            x = res.x
        candidates.append(x)

    feasible_cands: list[tuple[float, np.ndarray]] = []
    for x in candidates:
        gv = float(g(x[None, :])[0])
        if gv > p.epsilon + tol:
            x, ok = _restore_feasibility(g, x, lo, hi, p.epsilon, tol)
            if not ok:
                continue
        feasible_cands.append((float(f(x[None, :])[0]), x))

    if not feasible_cands and not oracle.feasible:
        return EpsResult(
            feasible=False,
            x=None,
            objective=None,
            constraint=None,
            certified=True,
            cert_slack=slack,
            grid_objective=None,
            epsilon=p.epsilon,
            temp_upper=p.temp_upper,
        )

    best_f, best_x = min(feasible_cands, key=lambda t: t[0])
    certified = True
    if oracle.feasible and oracle.objective < best_f - slack:
        certified = False
    return EpsResult(
        feasible=True,
        x=DesignPoint.from_array(best_x),
        objective=best_f,
        constraint=float(g(best_x[None, :])[0]),
        certified=certified,
        cert_slack=slack,
        grid_objective=oracle.objective,
        epsilon=p.epsilon,
        temp_upper=p.temp_upper,
    )


#: Sweep defaults mirroring the published validation study.
DEFAULT_EPSILONS = tuple(float(e) for e in range(2, 26))
DEFAULT_TEMP_UPPERS = (61.0, 62.0, 70.0, 80.0)


def sweep(
    models: tuple[GPModel, GPModel],
    epsilons=DEFAULT_EPSILONS,
    temp_uppers=DEFAULT_TEMP_UPPERS,
    config: EpsConfig = EpsConfig(),
    bounds: Bounds = DEFAULT_BOUNDS,
    start: DesignPoint | None = None,
) -> list[EpsResult]:
    """One solve per (ε, temperature ceiling), ordered by ε.

    Solutions are chained as warm starts along both sweep axes, which
    also makes the reported optima exactly monotone: relaxing ε or the
    temperature ceiling can only improve the objective.
    """
    grid = evaluate_grid(models, bounds, config.grid_resolution)
    eps_sorted = sorted(float(e) for e in epsilons)
    tub_sorted = sorted(float(t) for t in temp_uppers)
    results: dict[tuple[float, float], EpsResult] = {}
    for tub in tub_sorted:
        prev_x = None
        for eps in eps_sorted:
            extra = []
            if prev_x is not None:
                extra.append(prev_x)
            below = results.get((eps, max((t for t in tub_sorted if t < tub), default=-1.0)))
            if below is not None and below.feasible:
                extra.append(below.x.as_array())
            problem = EpsProblem(
                models=models, epsilon=eps, temp_upper=tub, start=start, bounds=bounds
            )
            res = solve_eps(problem, config, grid=grid, extra_starts=extra)
            results[(eps, tub)] = res
            if res.feasible:
                prev_x = res.x.as_array()
    ordered = sorted(results.values(), key=lambda r: (r.epsilon, r.temp_upper))
    return ordered


def export_sweep(results: list[EpsResult], path: str | Path) -> None:
    """Write feasible sweep rows in the published validation-table dialect."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["f_i", "f_m", "temp", "c_ctab", "eps", "objective"])
        for r in results:
            if not r.feasible:
                continue
            writer.writerow(
                [r.x.f_i, r.x.f_m, r.x.temp, r.x.c_ctab, r.epsilon, r.objective]
            )
