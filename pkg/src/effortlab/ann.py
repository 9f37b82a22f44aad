"""One-hidden-layer perceptron trained by conjugate gradient.

The network maps standardized design columns to ln(effort): a logistic
hidden layer followed by a linear output. Training minimizes half the
sum of squared errors with Polak-Ribiere conjugate gradient, an Armijo
backtracking line search, and early stopping on a seeded holdout split.
Everything is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import ProjectRecord
from .errors import DomainError, InsufficientDataError
from .regression import ModelFrame, feature_row

STOP_MAX_ITERATIONS = "max_iterations"
STOP_GRADIENT_BELOW_MIN = "gradient_below_min"
STOP_IMPROVEMENT_BELOW_DELTA = "improvement_below_delta"
STOP_HOLDOUT_WORSENING = "holdout_worsening"

HOLDOUT_PATIENCE = 50

_ARMIJO_C = 1e-4
_MIN_STEP = 1e-20


@dataclass(frozen=True, slots=True)
class AnnConfig:
    """Training knobs. hidden_nodes=None means one node per input."""

    hidden_nodes: int | None = None
    max_iterations: int = 10000
    convergence_tolerance: float = 1e-5
    min_improvement_delta: float = 1e-6
    min_gradient: float = 1e-6
    holdout_fraction: float = 0.20
    seed: int = 0


@dataclass(frozen=True, eq=False)
class AnnModel:
    weights: np.ndarray
    hidden_nodes: int
    feature_columns: tuple[str, ...]
    input_mean: np.ndarray
    input_sd: np.ndarray
    config: AnnConfig


@dataclass(frozen=True, eq=False)
class TrainingTrace:
    iterations: int
    stop_reason: str
    train_sse: tuple[float, ...]
    holdout_sse: tuple[float, ...]
    best_holdout_sse: float
    best_iteration: int


def parameter_count(n_inputs: int, hidden_nodes: int) -> int:
    return hidden_nodes * n_inputs + 2 * hidden_nodes + 1


def init_network(n_inputs: int, hidden_nodes: int, seed: int) -> np.ndarray:
    """Flat weight vector drawn uniformly from [-0.5, 0.5].

    Layout: hidden weights (row-major, one row per hidden node), hidden
    biases, output weights, output bias.
    """
    if n_inputs < 1 or hidden_nodes < 1:
        raise DomainError("need at least one input and one hidden node")
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.5, 0.5, parameter_count(n_inputs, hidden_nodes))


def _unpack(params: np.ndarray, n_inputs: int, hidden_nodes: int):
    h, d = hidden_nodes, n_inputs
    w_hidden = params[:h * d].reshape(h, d)
    b_hidden = params[h * d:h * d + h]
    w_out = params[h * d + h:h * d + 2 * h]
    b_out = params[-1]
    return w_hidden, b_hidden, w_out, b_out


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(params: np.ndarray, inputs: np.ndarray,
            hidden_nodes: int) -> np.ndarray:
    """Network outputs (ln-effort scale) for standardized inputs."""
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    w_hidden, b_hidden, w_out, b_out = _unpack(params, X.shape[1],
                                               hidden_nodes)
    activations = _sigmoid(X @ w_hidden.T + b_hidden)
    return activations @ w_out + b_out


def gradient(params: np.ndarray, inputs: np.ndarray, targets: np.ndarray,
             hidden_nodes: int) -> np.ndarray:
    """Gradient of half the sum of squared errors, by backpropagation."""
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    y = np.asarray(targets, dtype=float)
    w_hidden, b_hidden, w_out, _ = _unpack(params, X.shape[1], hidden_nodes)
    activations = _sigmoid(X @ w_hidden.T + b_hidden)
    out = activations @ w_out + params[-1]

    delta_out = out - y
    g_w_out = activations.T @ delta_out
    g_b_out = delta_out.sum()
    delta_hidden = np.outer(delta_out, w_out) * activations * (1 - activations)
    g_w_hidden = delta_hidden.T @ X
    g_b_hidden = delta_hidden.sum(axis=0)
    return np.concatenate([
        g_w_hidden.ravel(), g_b_hidden, g_w_out, [g_b_out],
    ])


def _half_sse(params: np.ndarray, X: np.ndarray, y: np.ndarray,
              hidden_nodes: int) -> float:
    resid = forward(params, X, hidden_nodes) - y
    return 0.5 * float(resid @ resid)


def _sse(params: np.ndarray, X: np.ndarray, y: np.ndarray,
         hidden_nodes: int) -> float:
    return 2.0 * _half_sse(params, X, y, hidden_nodes)


def _standardize(matrix: np.ndarray):
    mean = matrix.mean(axis=0)
    sd = matrix.std(axis=0)
    sd = np.where(sd == 0.0, 1.0, sd)
    return mean, sd


def train(frame: ModelFrame,
          config: AnnConfig = AnnConfig()) -> tuple[AnnModel, TrainingTrace]:
    """Train on a frame's non-intercept columns against ln(effort).

    The holdout rows are a seeded random fifth of the data (by default);
    input standardization uses training rows only. Returns the weights
    with the best holdout error seen, not the last iterate.
    """
    if config.max_iterations < 0:
        raise DomainError("max_iterations must be >= 0")
    if not 0.0 < config.holdout_fraction < 0.5:
        raise DomainError("holdout_fraction must be in (0, 0.5)")
    feature_columns = frame.predictor_columns()
    if not feature_columns:
        raise DomainError("frame has no predictor columns")
    keep = [frame.columns.index(c) for c in feature_columns]
    X_all = frame.matrix[:, keep]
    y_all = frame.response
    n = len(y_all)
    if n < 10:
        raise InsufficientDataError(f"need at least 10 records, got {n}")

    rng = np.random.default_rng(config.seed)
    k = max(1, round(config.holdout_fraction * n))
    order = rng.permutation(n)
    holdout_idx = np.sort(order[:k])
    train_idx = np.sort(order[k:])

    mean, sd = _standardize(X_all[train_idx])
    Z = (X_all - mean) / sd
    Z_train, y_train = Z[train_idx], y_all[train_idx]
    Z_hold, y_hold = Z[holdout_idx], y_all[holdout_idx]

    d = len(feature_columns)
    h = config.hidden_nodes if config.hidden_nodes is not None else d
    if h < 1:
        raise DomainError("hidden_nodes must be >= 1")
    w = init_network(d, h, config.seed)
    n_params = len(w)

    loss = _half_sse(w, Z_train, y_train, h)
    train_hist = [2.0 * loss]
    hold_hist = [_sse(w, Z_hold, y_hold, h)]
    best_sse = hold_hist[0]
    best_w = w.copy()
    best_iter = 0
    patience = 0
    stop = STOP_MAX_ITERATIONS

    g = gradient(w, Z_train, y_train, h)
    direction = -g
    iterations = 0
    for it in range(1, config.max_iterations + 1):
        if float(np.linalg.norm(g)) < config.min_gradient:
            stop = STOP_GRADIENT_BELOW_MIN
            break

        slope = float(g @ direction)
        if slope >= 0.0:
            direction = -g
            slope = float(g @ direction)

        step = 1.0
        new_loss = _half_sse(w + step * direction, Z_train, y_train, h)
        while new_loss > loss + _ARMIJO_C * step * slope:
            step *= 0.5
            if step < _MIN_STEP:
                break
            new_loss = _half_sse(w + step * direction, Z_train, y_train, h)
        if step < _MIN_STEP:
            stop = STOP_IMPROVEMENT_BELOW_DELTA
            break

        w = w + step * direction
        g_new = gradient(w, Z_train, y_train, h)
        if it % n_params == 0:
            beta = 0.0
        else:
            beta = max(0.0, float(g_new @ (g_new - g)) / float(g @ g))
        direction = -g_new + beta * direction
        g = g_new
        iterations = it

        improvement = loss - new_loss
        relative = improvement / max(loss, _MIN_STEP)
        loss = new_loss
        train_hist.append(2.0 * loss)
        hold_sse = _sse(w, Z_hold, y_hold, h)
        hold_hist.append(hold_sse)

        if hold_sse < best_sse:
            best_sse = hold_sse
            best_w = w.copy()
            best_iter = it
            patience = 0
        else:
            patience += 1
            if patience >= HOLDOUT_PATIENCE:
                stop = STOP_HOLDOUT_WORSENING
                break

        if (improvement < config.min_improvement_delta
                or relative < config.convergence_tolerance):
            stop = STOP_IMPROVEMENT_BELOW_DELTA
            break

    model = AnnModel(
        weights=best_w,
        hidden_nodes=h,
        feature_columns=feature_columns,
        input_mean=mean,
        input_sd=sd,
        config=config,
    )
    trace = TrainingTrace(
        iterations=iterations,
        stop_reason=stop,
        train_sse=tuple(train_hist),
        holdout_sse=tuple(hold_hist),
        best_holdout_sse=best_sse,
        best_iteration=best_iter,
    )
    return model, trace


def predict_frame(model: AnnModel, frame: ModelFrame) -> np.ndarray:
    """Raw effort predictions for every row of a frame."""
    keep = [frame.columns.index(c) for c in model.feature_columns]
    Z = (frame.matrix[:, keep] - model.input_mean) / model.input_sd
    return np.exp(forward(model.weights, Z, model.hidden_nodes))


def predict_effort_ann(model: AnnModel, record: ProjectRecord) -> float:
    """Raw effort prediction for a single record."""
    row = feature_row(model.feature_columns, record)
    z = (row - model.input_mean) / model.input_sd
    return float(np.exp(forward(model.weights, z, model.hidden_nodes))[0])
