"""Multilayer perceptron with hand-written backpropagation and grey-informed loss.

The composite objective is

    L = mean((y - f)**2) + xi * mean(|f - g|)

where ``f`` are network outputs, ``y`` the observed targets and ``g`` the
values a pre-fitted grey model assigns to the same time indices. The squared
grey term (``grey_term_form="mse"``) is available as an option.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core_ops import SizeError, as_series


class ShapeError(ValueError):
    """Array shapes do not match the network or each other."""


class DivergenceError(ArithmeticError):
    """Loss or parameters became non-finite during training."""


class RangeError(IndexError):
    """Requested time index is not covered by the grey model."""


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class WindowDataset:
    """One-step-ahead supervised pairs from a sliding window.

    ``target_index`` holds the 1-based time index of each target.
    """

    inputs: np.ndarray
    targets: np.ndarray
    target_index: np.ndarray

    def __len__(self):
        return self.targets.size

    @property
    def window(self):
        return self.inputs.shape[1]


def build_windows(s, T):
    """Pairs ``([x(i), ..., x(i+T-1)], x(i+T))`` for i = 1..n-T."""
    if int(T) != T or T < 1:
        raise ValueError(f"window size must be a positive integer, got {T!r}")
    T = int(T)
    x = as_series(s)
    if x.size <= T:
        raise SizeError(f"need more than {T} values to build windows, got {x.size}")
    m = x.size - T
    idx = np.arange(m)[:, None] + np.arange(T)[None, :]
    return WindowDataset(
        inputs=x[idx],
        targets=x[T:].copy(),
        target_index=np.arange(T + 1, x.size + 1),
    )


@dataclass(frozen=True)
class MinMaxScaler:
    lo: float
    hi: float

    @classmethod
    def from_values(cls, values):
        v = np.asarray(values, dtype=np.float64)
        return cls(float(v.min()), float(v.max()))

    @property
    def span(self):
        span = self.hi - self.lo
        return span if span > 0.0 else 1.0

    def normalize(self, x):
        return (np.asarray(x, dtype=np.float64) - self.lo) / self.span

    def denormalize(self, x):
        return np.asarray(x, dtype=np.float64) * self.span + self.lo


IDENTITY_SCALER = MinMaxScaler(0.0, 1.0)


# ---------------------------------------------------------------------------
# network


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


# (activation, derivative expressed through pre-activation z and output a)
ACTIVATIONS = {
    "tanh": (np.tanh, lambda z, a: 1.0 - a * a),
    "relu": (lambda z: np.maximum(z, 0.0), lambda z, a: (z > 0.0).astype(np.float64)),
    "sigmoid": (_sigmoid, lambda z, a: a * (1.0 - a)),
}


@dataclass
class MLPState:
    """Weights, biases and metadata of a feed-forward network.

    ``weights[l]`` has shape ``(layer_sizes[l+1], layer_sizes[l])``. Hidden
    layers use ``activation``; the single output unit is linear.
    """

    layer_sizes: tuple
    weights: list
    biases: list
    activation: str = "tanh"
    seed: int = 0
    scaler: MinMaxScaler = IDENTITY_SCALER
    loss_trace: list = field(default_factory=list)

    def __post_init__(self):
        self.layer_sizes = tuple(int(n) for n in self.layer_sizes)
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.layer_sizes[-1] != 1:
            raise ShapeError("output layer must have exactly one unit")
        if len(self.weights) != len(self.layer_sizes) - 1 or len(self.biases) != len(self.weights):
            raise ShapeError("number of weight/bias arrays does not match layer_sizes")
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            shape = (self.layer_sizes[l + 1], self.layer_sizes[l])
            if np.shape(W) != shape or np.shape(b) != (shape[0],):
                raise ShapeError(f"layer {l}: expected W{shape}, b({shape[0]},)")
        self.weights = [np.array(W, dtype=np.float64) for W in self.weights]
        self.biases = [np.array(b, dtype=np.float64) for b in self.biases]

    @property
    def window(self):
        return self.layer_sizes[0]

    def parameters(self):
        """Flat copy of all parameters, layer by layer (W then b)."""
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(W.ravel())
            parts.append(b)
        return np.concatenate(parts)

    def with_parameters(self, flat):
        """New state with parameters taken from a flat vector."""
        flat = np.asarray(flat, dtype=np.float64)
        weights, biases, pos = [], [], 0
        for W, b in zip(self.weights, self.biases):
            weights.append(flat[pos:pos + W.size].reshape(W.shape))
            pos += W.size
            biases.append(flat[pos:pos + b.size].copy())
            pos += b.size
        return MLPState(self.layer_sizes, weights, biases, self.activation, self.seed, self.scaler)

    def copy(self):
        return MLPState(
            self.layer_sizes,
            [W.copy() for W in self.weights],
            [b.copy() for b in self.biases],
            self.activation,
            self.seed,
            self.scaler,
            list(self.loss_trace),
        )


def init_mlp(layer_sizes, activation="tanh", seed=0):
    """Glorot-uniform weights and zero biases from a seeded generator."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MLPState(tuple(layer_sizes), weights, biases, activation, seed)


def _forward_pass(mlp, X):
    act, _ = ACTIVATIONS[mlp.activation]
    outs = [X]
    pre = []
    last = len(mlp.weights) - 1
    for l, (W, b) in enumerate(zip(mlp.weights, mlp.biases)):
        z = outs[-1] @ W.T + b
        pre.append(z)
        outs.append(z if l == last else act(z))
    return pre, outs


def predict_batch(mlp, X):
    """Network outputs for a batch of windows, shape ``(m,)``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != mlp.window:
        raise ShapeError(f"expected windows of length {mlp.window}, got shape {X.shape}")
    return _forward_pass(mlp, X)[1][-1][:, 0]


def forward(mlp, window):
    """Scalar network output for one window (no scaling applied)."""
    w = np.asarray(window, dtype=np.float64)
    if w.shape != (mlp.window,):
        raise ShapeError(f"expected a window of length {mlp.window}, got shape {w.shape}")
    return float(predict_batch(mlp, w[None, :])[0])


# ---------------------------------------------------------------------------
# loss


@dataclass(frozen=True)
class GreyInformedLossConfig:
    xi: float = 0.1
    grey_term_form: str = "mae"
    grey_targets: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (0.0 <= self.xi <= 1.0):
            raise ValueError(f"xi must lie in [0, 1], got {self.xi!r}")
        if self.grey_term_form not in ("mae", "mse"):
            raise ValueError(f"grey_term_form must be 'mae' or 'mse', got {self.grey_term_form!r}")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    iterations: int = 2000
    normalization: str = "minmax"

    def __post_init__(self):
        if not self.learning_rate > 0.0:
            raise ValueError("learning_rate must be positive")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError("iterations must be a positive integer")
        if self.normalization not in ("minmax", "none"):
            raise ValueError(f"unknown normalization {self.normalization!r}")


def _grey_array(cfg, n):
    g = np.asarray(cfg.grey_targets, dtype=np.float64)
    if g.shape != (n,):
        raise ShapeError(f"grey_targets has shape {g.shape}, expected ({n},)")
    return g


def composite_loss(preds, targets, cfg=None):
    """Data MSE plus ``xi`` times the grey term; ``cfg=None`` gives plain MSE."""
    f = np.asarray(preds, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if f.ndim != 1 or f.shape != y.shape or f.size == 0:
        raise ShapeError(f"preds {f.shape} and targets {y.shape} must be equal non-empty vectors")
    loss = float(np.mean((y - f) ** 2))
    if cfg is None or cfg.grey_targets is None:
        return loss
    r = f - _grey_array(cfg, f.size)
    grey = np.mean(np.abs(r)) if cfg.grey_term_form == "mae" else np.mean(r * r)
    return loss + cfg.xi * float(grey)


def _output_grad(f, y, cfg):
    # dL/df for every sample
    n = f.size
    d = 2.0 * (f - y) / n
    if cfg is None or cfg.grey_targets is None:
        return d
    r = f - _grey_array(cfg, n)
    if cfg.grey_term_form == "mae":
        # np.sign(0) == 0, the chosen subgradient at the kink
        return d + cfg.xi * np.sign(r) / n
    return d + cfg.xi * 2.0 * r / n


@dataclass
class Gradient:
    weights: list
    biases: list

    def flat(self):
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(W.ravel())
            parts.append(b)
        return np.concatenate(parts)


def _backprop(mlp, X, y, cfg):
    pre, outs = _forward_pass(mlp, X)
    f = outs[-1][:, 0]
    _, dact = ACTIVATIONS[mlp.activation]
    delta = _output_grad(f, y, cfg)[:, None]
    gW = [None] * len(mlp.weights)
    gb = [None] * len(mlp.weights)
    for l in range(len(mlp.weights) - 1, -1, -1):
        gW[l] = delta.T @ outs[l]
        gb[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ mlp.weights[l]) * dact(pre[l - 1], outs[l])
    return f, Gradient(gW, gb)


def gradient(mlp, dataset, cfg=None):
    """Full-batch gradient of the composite loss with respect to all parameters.

    The dataset is used as given; scale it beforehand if the network expects
    normalized values. ``cfg=None`` drops the grey term entirely.
    """
    if len(dataset) == 0:
        raise SizeError("empty dataset")
    return _backprop(mlp, dataset.inputs, dataset.targets, cfg)[1]


# ---------------------------------------------------------------------------
# training


def train(
    dataset,
    loss_cfg=None,
    train_cfg=TrainConfig(),
    seed=0,
    hidden=(10,),
    activation="tanh",
    callback: Optional[Callable] = None,
):
    """Full-batch gradient descent on the composite loss.

    Inputs, targets and grey targets are min-max scaled with the range of the
    training values (unless ``normalization="none"``); the scaler is stored on
    the returned state. ``callback(iteration, state)`` is invoked after every
    update. The returned state carries the loss trace (one value per
    iteration, measured before the update).
    """
    if len(dataset) == 0:
        raise SizeError("empty dataset")
    if train_cfg.normalization == "minmax":
        scaler = MinMaxScaler.from_values(np.concatenate([dataset.inputs.ravel(), dataset.targets]))
    else:
        scaler = IDENTITY_SCALER
    X = scaler.normalize(dataset.inputs)
    y = scaler.normalize(dataset.targets)
    cfg = loss_cfg
    if cfg is not None and cfg.grey_targets is not None:
        g = scaler.normalize(_grey_array(cfg, y.size))
        cfg = GreyInformedLossConfig(cfg.xi, cfg.grey_term_form, g)

    mlp = init_mlp((dataset.window, *hidden, 1), activation, seed)
    mlp.scaler = scaler
    lr = train_cfg.learning_rate
    trace = []
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(1, int(train_cfg.iterations) + 1):
            f, grad = _backprop(mlp, X, y, cfg)
            loss = composite_loss(f, y, cfg)
            if not np.isfinite(loss):
                raise DivergenceError(f"loss became non-finite at iteration {it}")
            trace.append(loss)
            for l in range(len(mlp.weights)):
                mlp.weights[l] = mlp.weights[l] - lr * grad.weights[l]
                mlp.biases[l] = mlp.biases[l] - lr * grad.biases[l]
            if not all(np.all(np.isfinite(W)) and np.all(np.isfinite(b)) for W, b in zip(mlp.weights, mlp.biases)):
                raise DivergenceError(f"parameters became non-finite at iteration {it}")
            if callback is not None:
                callback(it, mlp)
    mlp.loss_trace = trace
    return mlp


def fitted_values(mlp, dataset):
    """In-sample one-step predictions on the original scale."""
    X = mlp.scaler.normalize(dataset.inputs)
    return mlp.scaler.denormalize(predict_batch(mlp, X))


def forecast(mlp, history, T, horizon):
    """Iterated one-step forecasts, feeding each prediction back into the window."""
    if int(horizon) != horizon or horizon < 1:
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    if T != mlp.window:
        raise ShapeError(f"window size {T} does not match the network input {mlp.window}")
    x = as_series(history, min_length=T)
    window = list(x[-T:])
    out = []
    for _ in range(int(horizon)):
        z = mlp.scaler.normalize(np.array(window))
        pred = float(mlp.scaler.denormalize(forward(mlp, z)))
        out.append(pred)
        window = window[1:] + [pred]
    return np.array(out)


def make_grey_targets(fit, indices):
    """Grey model values at the given 1-based time indices.

    Indices within the training range return the restored fit; indices beyond
    it return extrapolated forecasts.
    """
    k = np.asarray(indices)
    if k.size and (k.min() < 1 or np.any(k != np.round(k))):
        raise RangeError(f"indices must be integers >= 1, got min {k.min()!r}")
    k = k.astype(np.int64)
    out = np.empty(k.size)
    inside = k <= fit.n
    out[inside] = fit.restored_fit[k[inside] - 1]
    if np.any(~inside):
        out[~inside] = fit.restore(k[~inside].astype(np.float64))
    return out
