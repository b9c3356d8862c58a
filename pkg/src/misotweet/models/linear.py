"""L2-regularized logistic regression trained with a deterministic L-BFGS.

Objective (labels mapped to t in {-1,+1}, bias unregularized):

    f(w, b) = 0.5 ||w||^2 + C * sum_i log(1 + exp(-t_i (w . x_i + b)))

Optimization starts from zero, uses the two-loop L-BFGS recursion with Armijo
backtracking, and stops when the gradient 2-norm drops below the tolerance.
There is no randomness anywhere, so training is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ConfigError, DataError, LayoutMismatchError
from ..features import FeatureVector, stack_features


@dataclass(frozen=True)
class LRConfig:
    C: float = 1.0
    max_iterations: int = 500
    tolerance: float = 1e-6
    fit_intercept: bool = True

    def __post_init__(self):
        if self.C <= 0:
            raise ConfigError(f"C must be positive, got {self.C}")
        if self.tolerance <= 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    fingerprint: str
    config: LRConfig
    # objective value per accepted iterate; not serialized
    objective_history: list[float] = field(default_factory=list, repr=False, compare=False)


def _as_matrix(X) -> tuple[np.ndarray, str]:
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise DataError(f"expected a 2-D design matrix, got shape {X.shape}")
        return np.asarray(X, dtype=np.float64), ""
    return stack_features(list(X))


def _validate_binary(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] != y.shape[0]:
        raise DataError(f"{X.shape[0]} samples but {y.shape[0]} labels")
    if X.shape[0] < 2:
        raise DataError("need at least 2 training samples")
    if not np.isfinite(X).all():
        raise DataError("non-finite feature values in training data")
    classes = np.unique(y)
    if not np.isin(classes, (0, 1)).all():
        raise DataError(f"labels must be 0/1, got {classes.tolist()}")
    if classes.size < 2:
        raise DataError("training data contains a single class")


def logreg_objective_grad(
    theta: np.ndarray, X: np.ndarray, t: np.ndarray, C: float, fit_intercept: bool
) -> tuple[float, np.ndarray]:
    """Value and gradient of the objective at theta = [w, b]."""
    if fit_intercept:
        w, b = theta[:-1], theta[-1]
    else:
        w, b = theta, 0.0
    z = X @ w + b
    u = -t * z
    # log(1 + e^u), stable on both tails
    losses = np.logaddexp(0.0, u)
    f = 0.5 * float(w @ w) + C * float(losses.sum())
    s = _sigmoid(u)  # = 1 - sigmoid(t*z)
    dz = C * (-t * s)
    gw = w + X.T @ dz
    if fit_intercept:
        return f, np.concatenate([gw, [dz.sum()]])
    return f, gw


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _lbfgs_direction(grad, s_list, y_list, rho_list) -> np.ndarray:
    q = grad.copy()
    alphas = []
    for s, yv, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * yv
    if y_list:
        gamma = (s_list[-1] @ y_list[-1]) / (y_list[-1] @ y_list[-1])
        q *= gamma
    for (s, yv, rho), a in zip(zip(s_list, y_list, rho_list), reversed(alphas)):
        beta = rho * (yv @ q)
        q += (a - beta) * s
    return -q


def train_logreg(
    X: Sequence[FeatureVector] | np.ndarray,
    y: Sequence[int] | np.ndarray,
    cfg: LRConfig | None = None,
) -> LinearModel:
    """Fit the model; deterministic for fixed inputs (zero initialization)."""
    cfg = cfg or LRConfig()
    mat, fingerprint = _as_matrix(X)
    labels = np.asarray(y, dtype=np.float64)
    _validate_binary(mat, labels)
    t = 2.0 * labels - 1.0

    n_params = mat.shape[1] + (1 if cfg.fit_intercept else 0)
    theta = np.zeros(n_params, dtype=np.float64)
    f, g = logreg_objective_grad(theta, mat, t, cfg.C, cfg.fit_intercept)
    history = [f]
    s_list: list[np.ndarray] = []
    y_list: list[np.ndarray] = []
    rho_list: list[float] = []

    for _ in range(cfg.max_iterations):
        if np.linalg.norm(g) < cfg.tolerance:
            break
        d = _lbfgs_direction(g, s_list, y_list, rho_list)
        gTd = float(g @ d)
        if gTd >= 0.0:  # not a descent direction; fall back to steepest descent
            d = -g
            gTd = -float(g @ g)
        step = 1.0
        for _ in range(60):
            theta_new = theta + step * d
            f_new, g_new = logreg_objective_grad(theta_new, mat, t, cfg.C, cfg.fit_intercept)
            if f_new <= f + 1e-4 * step * gTd:
                break
            step *= 0.5
        else:
            break  # no acceptable step; gradient is numerically flat
        s = theta_new - theta
        yv = g_new - g
        sy = float(s @ yv)
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(yv)):
            s_list.append(s)
            y_list.append(yv)
            rho_list.append(1.0 / sy)
            if len(s_list) > 10:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)
        theta, f, g = theta_new, f_new, g_new
        history.append(f)

    if cfg.fit_intercept:
        weights, bias = theta[:-1], float(theta[-1])
    else:
        weights, bias = theta, 0.0
    return LinearModel(
        weights=weights,
        bias=bias,
        fingerprint=fingerprint,
        config=cfg,
        objective_history=history,
    )


def _check_compat(model_fp: str, model_dim: int, x) -> np.ndarray:
    if isinstance(x, FeatureVector):
        if model_fp and x.fingerprint != model_fp:
            raise LayoutMismatchError(
                f"feature layout {x.fingerprint[:12]}... does not match the "
                f"model's {model_fp[:12]}..."
            )
        dense = x.to_dense()
    else:
        dense = np.asarray(x, dtype=np.float64)
    if dense.shape[-1] != model_dim:
        raise LayoutMismatchError(
            f"feature length {dense.shape[-1]} does not match model dimension {model_dim}"
        )
    return dense


def predict_logreg(model: LinearModel, x: FeatureVector | np.ndarray) -> float:
    """Probability of the positive class, sigma(w . x + b)."""
    dense = _check_compat(model.fingerprint, model.weights.shape[0], x)
    z = float(dense @ model.weights) + model.bias
    return float(_sigmoid(np.array([z]))[0])


def predict_logreg_batch(
    model: LinearModel, X: Sequence[FeatureVector] | np.ndarray
) -> np.ndarray:
    dim = model.weights.shape[0]
    if isinstance(X, np.ndarray):
        mat = np.asarray(X, dtype=np.float64)
        if mat.shape[-1] != dim:
            raise LayoutMismatchError(
                f"feature length {mat.shape[-1]} does not match model dimension {dim}"
            )
    else:
        mat = np.stack([_check_compat(model.fingerprint, dim, v) for v in X])
    return _sigmoid(mat @ model.weights + model.bias)
