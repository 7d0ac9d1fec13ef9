"""Model runners shared by the command-line workflows.

Each runner fits one of the five models on a training prefix and exposes
in-sample fitted values, forecasts and the quantities written to disk.
"""

from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from . import grey, nn
from .core_ops import FractionalOrder
from .metrics import evaluate
from .pso import PSOConfig, select_order

MODELS = ("gm11", "tmfgm", "mlp", "ginn", "fginn")
GREY_MODELS = ("gm11", "tmfgm")
NEURAL_MODELS = ("mlp", "ginn", "fginn")
OMITTED_BASELINES = ("CFGM", "FGM", "FHGM", "DGM")


@dataclass
class RunConfig:
    """Experiment settings; the defaults reproduce the reference protocol."""

    model: str = "fginn"
    models: tuple = MODELS
    train_split: Optional[int] = None
    window: int = 2
    xi: float = 0.1
    grey_form: str = "mae"
    alpha: Union[float, str] = "pso"
    beta: Union[float, str] = "pso"
    lr: float = 0.001
    iters: int = 2000
    seed: int = 0
    hidden: tuple = (10,)
    activation: str = "tanh"
    pso_particles: int = 30
    pso_iters: int = 100
    horizon: int = 4

    def validate(self):
        for m in (self.model, *self.models):
            if m not in MODELS:
                raise ValueError(f"unknown model {m!r}; choose from {', '.join(MODELS)}")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")
        if self.grey_form not in ("mae", "mse"):
            raise ValueError("grey_form must be 'mae' or 'mse'")
        if (self.alpha == "pso") != (self.beta == "pso"):
            raise ValueError("alpha and beta must both be given or both be 'pso'")
        if not self.lr > 0:
            raise ValueError("lr must be positive")
        if self.iters < 1:
            raise ValueError("iters must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        return self

    def pso_config(self):
        return PSOConfig(swarm_size=self.pso_particles, iterations=self.pso_iters, seed=self.seed)

    def train_config(self):
        return nn.TrainConfig(learning_rate=self.lr, iterations=self.iters)

    def min_train(self, model):
        return grey.MIN_FIT_LENGTH if model in GREY_MODELS else self.window + 1

    def manifest(self):
        d = asdict(self)
        d["models"] = list(self.models)
        d["hidden"] = list(self.hidden)
        d["data_loss"] = "mse"
        return d


@dataclass
class FittedModel:
    name: str
    train: np.ndarray
    fitted_index: np.ndarray
    fitted: np.ndarray
    params: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    order: Optional[FractionalOrder] = None
    order_search: object = None
    grey_fit: object = None
    mlp: object = None
    window: int = 0

    def forecast(self, horizon):
        if self.mlp is not None:
            return nn.forecast(self.mlp, self.train, self.window, horizon)
        return grey.predict(self.grey_fit, horizon)


def resolve_order(train, cfg):
    """Explicit (alpha, beta) from the config, or a PSO search on ``train``."""
    if cfg.alpha == "pso":
        order, result = select_order(train, cfg.pso_config(), return_result=True)
        return order, result
    return FractionalOrder(float(cfg.alpha), float(cfg.beta)), None


def _grey_params(fit):
    rows = [("a", fit.params.a), ("b", fit.params.b)]
    if fit.order is not None:
        rows += [("alpha", fit.order.alpha), ("beta", fit.order.beta)]
    return rows


def _network_params(mlp):
    rows = []
    for l, (W, b) in enumerate(zip(mlp.weights, mlp.biases)):
        for (i, j), w in np.ndenumerate(W):
            rows.append((f"W{l}[{i},{j}]", float(w)))
        for i, v in enumerate(b):
            rows.append((f"b{l}[{i}]", float(v)))
    rows += [("scale_lo", mlp.scaler.lo), ("scale_hi", mlp.scaler.hi)]
    return rows


def fit_model(name, train, cfg):
    """Fit model ``name`` on the training values ``train``."""
    train = np.asarray(train, dtype=np.float64)
    if train.size < cfg.min_train(name):
        raise ValueError(f"{name} needs at least {cfg.min_train(name)} training points, got {train.size}")
    k_all = np.arange(1, train.size + 1)

    if name == "gm11":
        fit = grey.fit_gm11(train)
        return FittedModel(name, train, k_all, fit.restored_fit, _grey_params(fit), grey_fit=fit)
    if name == "tmfgm":
        order, search = resolve_order(train, cfg)
        fit = grey.fit_tmfgm(train, order)
        return FittedModel(name, train, k_all, fit.restored_fit, _grey_params(fit),
                           order=order, order_search=search, grey_fit=fit)

    ds = nn.build_windows(train, cfg.window)
    loss_cfg, grey_fit, order, search = None, None, None, None
    if name == "ginn":
        grey_fit = grey.fit_gm11(train)
    elif name == "fginn":
        order, search = resolve_order(train, cfg)
        grey_fit = grey.fit_tmfgm(train, order)
    if grey_fit is not None:
        g = nn.make_grey_targets(grey_fit, ds.target_index)
        loss_cfg = nn.GreyInformedLossConfig(cfg.xi, cfg.grey_form, g)
    mlp = nn.train(ds, loss_cfg, cfg.train_config(), seed=cfg.seed,
                   hidden=tuple(cfg.hidden), activation=cfg.activation)
    params = _network_params(mlp)
    if grey_fit is not None:
        params = [("xi", cfg.xi)] + [("grey_" + k, v) for k, v in _grey_params(grey_fit)] + params
    return FittedModel(name, train, ds.target_index, nn.fitted_values(mlp, ds), params,
                       trace=list(mlp.loss_trace), order=order, order_search=search,
                       grey_fit=grey_fit, mlp=mlp, window=cfg.window)


@dataclass
class Evaluation:
    model: FittedModel
    actual: np.ndarray
    predicted: np.ndarray
    report: object


def evaluate_model(name, values, cfg):
    """Fit on the first ``train_split`` points and forecast the rest."""
    values = np.asarray(values, dtype=np.float64)
    split = default_split(values.size, cfg)
    if split >= values.size:
        raise ValueError(f"train_split ({split}) must be smaller than the series length ({values.size})")
    fitted = fit_model(name, values[:split], cfg)
    actual = values[split:]
    predicted = fitted.forecast(actual.size)
    return Evaluation(fitted, actual, predicted, evaluate(actual, predicted))


def default_split(n, cfg):
    """Training length: the configured value or all but the last four points."""
    if cfg.train_split is not None:
        return int(cfg.train_split)
    return max(n - 4, 1)
