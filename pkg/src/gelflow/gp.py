"""Gaussian-process regression with Matérn kernels and spectral function draws.

Inputs are normalized to the unit box via the design bounds and outputs
standardized to zero mean / unit variance before any linear algebra; all
hyperparameters live in those normalized units. Posterior function draws
use random cosine features whose frequencies follow the Matérn spectral
density, so a draw is an ordinary deterministic function that a genetic
algorithm can evaluate millions of times.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import config as _numba_config
from numba import njit, prange
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from .errors import (
    ExtrapolationWarning,
    InsufficientDataError,
    InvalidInputError,
    NumericalFailureError,
)
from .process import Bounds

# the installed TBB is too old for numba's probe; pin the portable layer
_numba_config.THREADING_LAYER = "workqueue"

#: Standardized-units jitter: observation noise is never taken below this.
NOISE_FLOOR = 1e-6

_SUPPORTED_NU = (0.5, 1.5, 2.5)


@dataclass(frozen=True)
class KernelParams:
    """Matérn kernel hyperparameters in normalized input / output units."""

    lengthscales: tuple[float, ...]
    signal_var: float
    noise_var: float
    nu: float = 0.5

    def __post_init__(self):
        if any(l <= 0 for l in self.lengthscales):
            raise InvalidInputError("lengthscales must be positive")
        if self.signal_var <= 0:
            raise InvalidInputError("signal_var must be positive")
        if self.noise_var < NOISE_FLOOR:
            raise InvalidInputError(f"noise_var must be >= noise floor {NOISE_FLOOR}")
        if self.nu not in _SUPPORTED_NU:
            raise InvalidInputError(f"nu must be one of {_SUPPORTED_NU}")


@dataclass(frozen=True)
class Scaling:
    """Input-box and output-moment scaling frozen into a fitted model."""

    x_lower: tuple[float, ...]
    x_upper: tuple[float, ...]
    y_mean: float
    y_std: float

    def normalize_x(self, X: np.ndarray) -> np.ndarray:
        lo = np.asarray(self.x_lower)
        hi = np.asarray(self.x_upper)
        return (np.asarray(X, dtype=float) - lo) / (hi - lo)

    @classmethod
    def identity(cls, d: int) -> "Scaling":
        return cls(x_lower=(0.0,) * d, x_upper=(1.0,) * d, y_mean=0.0, y_std=1.0)


@dataclass(frozen=True)
class FitConfig:
    """Multistart marginal-likelihood search settings."""

    restarts: int = 10
    seed: int = 0
    nu: float = 0.5
    lengthscale_bounds: tuple[float, float] = (1e-2, 1e2)
    signal_var_bounds: tuple[float, float] = (1e-2, 1e2)
    noise_var_bounds: tuple[float, float] = (NOISE_FLOOR, 1.0)
    maxiter: int = 200


@dataclass(frozen=True)
class GPModel:
    """Fitted surrogate; immutable, safe to share across threads."""

    params: KernelParams
    x_train: np.ndarray  # (n, d) normalized
    y_train: np.ndarray  # (n,) standardized
    chol: np.ndarray  # lower triangular factor of K + noise_var * I
    alpha: np.ndarray  # (K + noise_var * I)^-1 y
    scaling: Scaling

    @property
    def n_train(self) -> int:
        return self.x_train.shape[0]

    @property
    def dim(self) -> int:
        return self.x_train.shape[1]


@dataclass(frozen=True)
class SampledFunction:
    """One deterministic draw from the approximate GP posterior."""

    frequencies: np.ndarray  # (m, d)
    phases: np.ndarray  # (m,)
    weights: np.ndarray  # (m,)
    feature_scale: float  # sqrt(2 * signal_var / m)
    scaling: Scaling


def _scaled_sqdists(A: np.ndarray, B: np.ndarray, lengthscales) -> np.ndarray:
    ell = np.asarray(lengthscales, dtype=float)
    As = np.asarray(A, dtype=float) / ell
    Bs = np.asarray(B, dtype=float) / ell
    sq = (
        np.sum(As**2, axis=1)[:, None]
        + np.sum(Bs**2, axis=1)[None, :]
        - 2.0 * As @ Bs.T
    )
    return np.maximum(sq, 0.0)


def _matern_of_r(r: np.ndarray, signal_var: float, nu: float) -> np.ndarray:
    if nu == 0.5:
        return signal_var * np.exp(-r)
    if nu == 1.5:
        s = math.sqrt(3.0) * r
        return signal_var * (1.0 + s) * np.exp(-s)
    s = math.sqrt(5.0) * r
    return signal_var * (1.0 + s + s**2 / 3.0) * np.exp(-s)


def kernel_matrix(A: np.ndarray, B: np.ndarray, p: KernelParams) -> np.ndarray:
    """Matérn covariance between two point sets in normalized units."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    if A.shape[1] != len(p.lengthscales) or B.shape[1] != len(p.lengthscales):
        raise InvalidInputError(
            f"points of dimension {A.shape[1]}/{B.shape[1]} do not match "
            f"{len(p.lengthscales)} lengthscales"
        )
    r = np.sqrt(_scaled_sqdists(A, B, p.lengthscales))
    return _matern_of_r(r, p.signal_var, p.nu)


def kernel(a, b, p: KernelParams) -> float:
    """Covariance between two points."""
    return float(kernel_matrix(np.atleast_2d(a), np.atleast_2d(b), p)[0, 0])


def _factor(p: KernelParams, X: np.ndarray, y: np.ndarray):
    K = kernel_matrix(X, X, p)
    Ky = K + p.noise_var * np.eye(X.shape[0])
    try:
        L = cholesky(Ky, lower=True)
    except np.linalg.LinAlgError as err:
        raise NumericalFailureError(
            "covariance factorization failed after noise floor",
            diagnostics={
                "n": X.shape[0],
                "noise_var": p.noise_var,
                "min_eig_estimate": float(np.linalg.eigvalsh(Ky).min()),
            },
        ) from err
    alpha = cho_solve((L, True), y)
    return K, L, alpha


def log_marginal_likelihood(p: KernelParams, X: np.ndarray, y: np.ndarray) -> float:
    """Log marginal likelihood of standardized data under the kernel.

    Equals -1/2 y^T alpha - sum(log diag(chol)) - n/2 log(2 pi).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    _, L, alpha = _factor(p, X, y)
    n = y.shape[0]
    return float(-0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * n * math.log(2 * math.pi))


def log_marginal_likelihood_grad(
    p: KernelParams, X: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray]:
    """Value and gradient w.r.t. [log ell_1..d, log signal_var, log noise_var]."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n, d = X.shape
    K, L, alpha = _factor(p, X, y)
    lml = float(-0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * n * math.log(2 * math.pi))

    Kinv = cho_solve((L, True), np.eye(n))
    W = np.outer(alpha, alpha) - Kinv

    r = np.sqrt(_scaled_sqdists(X, X, p.lengthscales))
    # g(r) = -(1/r) dk/dr, the shared radial factor of lengthscale gradients
    if p.nu == 0.5:
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(r > 0, p.signal_var * np.exp(-r) / np.where(r > 0, r, 1.0), 0.0)
    elif p.nu == 1.5:
        g = 3.0 * p.signal_var * np.exp(-math.sqrt(3.0) * r)
    else:
        g = (
            (5.0 / 3.0)
            * p.signal_var
            * (1.0 + math.sqrt(5.0) * r)
            * np.exp(-math.sqrt(5.0) * r)
        )

    grad = np.empty(d + 2)
    ell = np.asarray(p.lengthscales)
    for k in range(d):
        u2 = ((X[:, k, None] - X[None, :, k]) / ell[k]) ** 2
        grad[k] = 0.5 * np.sum(W * (g * u2))
    grad[d] = 0.5 * np.sum(W * K)  # d K / d log signal_var = K
    grad[d + 1] = 0.5 * p.noise_var * np.trace(W)
    return lml, grad


def build_model(
    p: KernelParams,
    X: np.ndarray,
    y: np.ndarray,
    scaling: Scaling | None = None,
) -> GPModel:
    """Assemble a model from explicit hyperparameters.

    ``X`` and ``y`` are taken as already normalized/standardized when no
    scaling is given (identity scaling is recorded).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if scaling is None:
        scaling = Scaling.identity(X.shape[1])
    _, L, alpha = _factor(p, X, y)
    return GPModel(params=p, x_train=X, y_train=y, chol=L, alpha=alpha, scaling=scaling)


def fit(X: np.ndarray, y: np.ndarray, bounds: Bounds | tuple, config: FitConfig = FitConfig()) -> GPModel:
    """Fit hyperparameters by multistart maximization of the marginal likelihood.

    ``bounds`` gives the raw-input box used for normalization, either a
    :class:`~gelflow.process.Bounds` or a (lower, upper) array pair.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n, d = X.shape
    if n < 2:
        raise InsufficientDataError(f"need at least 2 observations to fit, got {n}")
    if y.shape[0] != n:
        raise InvalidInputError("X and y lengths differ")

    if isinstance(bounds, Bounds):
        lo, hi = bounds.lower_array, bounds.upper_array
    else:
        lo, hi = (np.asarray(b, dtype=float) for b in bounds)
    if np.any(X < lo - 1e-9) or np.any(X > hi + 1e-9):
        raise InvalidInputError("training inputs outside the normalization bounds")

    y_mean = float(np.mean(y))
    y_std = float(np.std(y))
    if y_std < 1e-12:
        y_std = 1.0
    scaling = Scaling(tuple(lo), tuple(hi), y_mean, y_std)
    Xn = scaling.normalize_x(X)
    ys = (y - y_mean) / y_std

    log_lb = np.log(
        [config.lengthscale_bounds[0]] * d
        + [config.signal_var_bounds[0], config.noise_var_bounds[0]]
    )
    log_ub = np.log(
        [config.lengthscale_bounds[1]] * d
        + [config.signal_var_bounds[1], config.noise_var_bounds[1]]
    )

    def unpack(theta) -> KernelParams:
        v = np.exp(theta)
        return KernelParams(
            lengthscales=tuple(v[:d]),
            signal_var=float(v[d]),
            noise_var=max(float(v[d + 1]), NOISE_FLOOR),
            nu=config.nu,
        )

    def neg_lml(theta):
        try:
            val, grad = log_marginal_likelihood_grad(unpack(theta), Xn, ys)
        except NumericalFailureError:
            return 1e10, np.zeros_like(theta)
        return -val, -grad

    rng = np.random.default_rng(config.seed)
    starts = [np.log(np.concatenate([np.full(d, 0.5), [1.0, 1e-2]]))]
    for _ in range(max(config.restarts - 1, 0)):
        starts.append(rng.uniform(log_lb, log_ub))

    best = None
    failures = []
    for theta0 in starts:
        try:
            res = minimize(
                neg_lml,
                theta0,
                jac=True,
                method="L-BFGS-B",
                bounds=list(zip(log_lb, log_ub)),
                options={"maxiter": config.maxiter},
            )
        except NumericalFailureError as err:
            failures.append(err.diagnostics)
            continue
        if res.fun < 1e9 and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise NumericalFailureError(
            "all hyperparameter restarts failed", diagnostics={"failures": failures}
        )
    return build_model(unpack(best.x), Xn, ys, scaling=scaling)


def predict_batch(model: GPModel, X: np.ndarray, check_bounds: bool = True):
    """Posterior mean and variance at raw-unit query points. Vectorized."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Xn = model.scaling.normalize_x(X)
    if check_bounds and (np.any(Xn < -1e-9) or np.any(Xn > 1 + 1e-9)):
        warnings.warn(
            "query outside the training bounds; extrapolating",
            ExtrapolationWarning,
            stacklevel=2,
        )
    ks = kernel_matrix(Xn, model.x_train, model.params)
    mean_s = ks @ model.alpha
    v = solve_triangular(model.chol, ks.T, lower=True)
    var_s = np.maximum(model.params.signal_var - np.sum(v**2, axis=0), 0.0)
    mean = mean_s * model.scaling.y_std + model.scaling.y_mean
    var = var_s * model.scaling.y_std**2
    return mean, var


def predict(model: GPModel, x) -> tuple[float, float]:
    """Posterior mean and variance at one raw-unit point."""
    mean, var = predict_batch(model, np.atleast_2d(x))
    return float(mean[0]), float(var[0])


def spectral_sample(model: GPModel, m: int, seed: int) -> SampledFunction:
    """Draw one posterior function as m random cosine features.

    Frequencies follow the Matérn spectral density (multivariate Student-t
    with 2 nu degrees of freedom, scaled by the inverse lengthscales),
    phases are uniform on [0, 2 pi), and feature weights come from the
    Bayesian linear-model posterior over the cosine basis. The draw order
    from the seeded generator is fixed, so equal seeds give identical
    functions.
    """
    if m < 1:
        raise InvalidInputError(f"feature count must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    p = model.params
    d = model.dim
    ell = np.asarray(p.lengthscales)

    z = rng.standard_normal((m, d))
    df = 2.0 * p.nu
    u = rng.chisquare(df, size=(m, 1))
    W = (z / ell) / np.sqrt(u / df)
    b = rng.uniform(0.0, 2.0 * math.pi, size=m)
    scale = math.sqrt(2.0 * p.signal_var / m)

    Phi = scale * np.cos(model.x_train @ W.T + b)
    n = model.n_train
    y = model.y_train
    if m <= n:
        A = Phi.T @ Phi + p.noise_var * np.eye(m)
        La = cholesky(A, lower=True)
        mean_w = cho_solve((La, True), Phi.T @ y)
        z2 = rng.standard_normal(m)
        weights = mean_w + math.sqrt(p.noise_var) * solve_triangular(La.T, z2, lower=False)
    else:
        # dual (n x n) form of the same posterior, exact for any m > n
        theta0 = rng.standard_normal(m)
        eps = math.sqrt(p.noise_var) * rng.standard_normal(n)
        B = Phi @ Phi.T + p.noise_var * np.eye(n)
        Lb = cholesky(B, lower=True)
        resid = y - Phi @ theta0 - eps
        weights = theta0 + Phi.T @ cho_solve((Lb, True), resid)

    return SampledFunction(
        frequencies=W,
        phases=b,
        weights=weights,
        feature_scale=scale,
        scaling=model.scaling,
    )


_INV_2PI = 0.15915494309189535
# Chebyshev-interpolated polynomial for cos(2 pi sqrt(s)) on s in [0, 0.25]
# (max abs error ~2e-15); lets the feature sum vectorize without libm calls.
_COS_POLY = (
    1.00000000e00,
    -1.97392088e01,
    6.49393940e01,
    -8.54568172e01,
    6.02446413e01,
    -2.64262562e01,
    7.90353128e00,
    -1.71436159e00,
    2.81893730e-01,
    -3.60977866e-02,
    3.34028764e-03,
)


@njit(cache=True, parallel=True, fastmath=True)
def _cos_features_dot(X, Wt, b, wts):
    """sum_j wts[j] * cos(W[j] . x_i + b[j]) for every row of X.

    The genetic algorithm evaluates this for millions of points per run,
    so the (n, m) feature matrix is never materialized and the cosine is
    a range-reduced polynomial the compiler can vectorize.
    """
    n, d = X.shape
    m = b.shape[0]
    out = np.empty(n)
    c0, c1, c2, c3, c4, c5, c6, c7, c8, c9, c10 = _COS_POLY
    for i in prange(n):
        acc = 0.0
        for j in range(m):
            t = b[j]
            for k in range(d):
                t += Wt[k, j] * X[i, k]
            u = t * _INV_2PI
            u = u - np.rint(u)
            s = u * u
            cosv = c0 + s * (
                c1
                + s
                * (
                    c2
                    + s
                    * (
                        c3
                        + s
                        * (c4 + s * (c5 + s * (c6 + s * (c7 + s * (c8 + s * (c9 + s * c10))))))
                    )
                )
            )
            acc += wts[j] * cosv
        out[i] = acc
    return out


def evaluate_sample_batch(f: SampledFunction, X: np.ndarray) -> np.ndarray:
    """Evaluate a posterior draw at raw-unit points. Vectorized.

    Agrees with the direct cosine-feature formula to ~1e-6 relative (the
    draw itself approximates the posterior only to O(1/sqrt(m))).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Xn = np.ascontiguousarray(f.scaling.normalize_x(X))
    Wt = np.ascontiguousarray(f.frequencies.T)
    vals = f.feature_scale * _cos_features_dot(Xn, Wt, f.phases, f.weights)
    return vals * f.scaling.y_std + f.scaling.y_mean


def evaluate_sample(f: SampledFunction, x) -> float:
    return float(evaluate_sample_batch(f, np.atleast_2d(x))[0])


def save_model(model: GPModel, path: str | Path) -> None:
    """Serialize a fitted model to a self-describing JSON document."""
    doc = {
        "format": "gelflow-gp",
        "version": 1,
        "params": {
            "lengthscales": list(model.params.lengthscales),
            "signal_var": model.params.signal_var,
            "noise_var": model.params.noise_var,
            "nu": model.params.nu,
        },
        "scaling": {
            "x_lower": list(model.scaling.x_lower),
            "x_upper": list(model.scaling.x_upper),
            "y_mean": model.scaling.y_mean,
            "y_std": model.scaling.y_std,
        },
        "x_train": model.x_train.tolist(),
        "y_train": model.y_train.tolist(),
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8")


def load_model(path: str | Path) -> GPModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != "gelflow-gp" or doc.get("version") != 1:
        raise InvalidInputError(f"not a recognized model file: {path}")
    p = KernelParams(
        lengthscales=tuple(doc["params"]["lengthscales"]),
        signal_var=doc["params"]["signal_var"],
        noise_var=doc["params"]["noise_var"],
        nu=doc["params"]["nu"],
    )
    scaling = Scaling(
        x_lower=tuple(doc["scaling"]["x_lower"]),
        x_upper=tuple(doc["scaling"]["x_upper"]),
        y_mean=doc["scaling"]["y_mean"],
        y_std=doc["scaling"]["y_std"],
    )
    return build_model(p, np.array(doc["x_train"]), np.array(doc["y_train"]), scaling=scaling)
