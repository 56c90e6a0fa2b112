"""Feed-forward scoring network with exact analytic gradients.

The network maps a feature row to a single real score through fully
connected layers with relu or tanh hidden activations and a linear output.
``backward`` returns the exact gradient of sum_i upstream_i * g(x_i) with
respect to every parameter, which is all a loss needs once it supplies
d(objective)/d(score) per row. ``grad_check`` verifies any objective's
analytic gradient against central finite differences.

Checkpoints are JSON ("mlp-checkpoint-v1"): layer dims, activation name,
and parameters as nested lists. Python's float repr is shortest-round-trip,
so a save/load cycle reproduces every parameter bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParameterError, ShapeError
from .numerics import Rng, as_matrix

ACTIVATIONS = ("relu", "tanh")
CHECKPOINT_FORMAT = "mlp-checkpoint-v1"


def _act(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _act_deriv(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return (z > 0.0).astype(np.float64)
    t = np.tanh(z)
    return 1.0 - t * t


@dataclass
class MLPModel:
    """Layer sizes plus weight matrices (out x in) and bias vectors."""

    layer_dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: str

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    def copy(self) -> "MLPModel":
        return MLPModel(
            layer_dims=list(self.layer_dims),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            activation=self.activation,
        )


@dataclass
class GradientBundle:
    """Gradients with the same shapes as the owning model's parameters."""

    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)

    def scaled(self, alpha: float) -> "GradientBundle":
        return GradientBundle(
            weights=[alpha * w for w in self.weights],
            biases=[alpha * b for b in self.biases],
        )


def zero_gradients(model: MLPModel) -> GradientBundle:
    return GradientBundle(
        weights=[np.zeros_like(w) for w in model.weights],
        biases=[np.zeros_like(b) for b in model.biases],
    )


def init(layer_dims, activation: str, rng: Rng) -> MLPModel:
    """Build a model with fan-in-scaled normal weights and zero biases.

    Hidden weights are N(0, 2/fan_in) for relu and N(0, 1/fan_in) for
    tanh, the standard variance-preserving choices for each nonlinearity.
    """
    dims = [int(d) for d in layer_dims]
    if len(dims) < 2:
        raise ParameterError("layer_dims needs at least input and output sizes")
    if any(d < 1 for d in dims):
        raise ParameterError(f"all layer sizes must be >= 1, got {dims}")
    if dims[-1] != 1:
        raise ParameterError(f"output layer must have size 1, got {dims[-1]}")
    if activation not in ACTIVATIONS:
        raise ParameterError(f"activation must be one of {ACTIVATIONS}")
    gain = 2.0 if activation == "relu" else 1.0
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        sd = float(np.sqrt(gain / fan_in))
        w = rng.normal(fan_out * fan_in, sd=sd).reshape(fan_out, fan_in)
        weights.append(w)
        biases.append(np.zeros(fan_out, dtype=np.float64))
    return MLPModel(layer_dims=dims, weights=weights, biases=biases, activation=activation)


def _forward_cached(model: MLPModel, x: np.ndarray):
    """Return (scores, pre-activations z per layer, activations a per layer)."""
    a = x
    zs, acts = [], [a]
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w.T + b
        zs.append(z)
        a = z if k == last else _act(z, model.activation)
        acts.append(a)
    return acts[-1][:, 0], zs, acts


def forward(model: MLPModel, x) -> np.ndarray:
    """Scores g(x), one float per row of ``x``."""
    x = as_matrix(x, cols=model.input_dim)
    scores, _, _ = _forward_cached(model, x)
    return scores


def backward(model: MLPModel, x, upstream) -> GradientBundle:
    """Exact gradient of sum_i upstream_i * g(x_i) over all parameters."""
    x = as_matrix(x, cols=model.input_dim)
    u = np.asarray(upstream, dtype=np.float64)
    if u.shape != (x.shape[0],):
        raise ShapeError(
            f"upstream must have one entry per row: expected {(x.shape[0],)}, "
            f"got {u.shape}"
        )
    _, zs, acts = _forward_cached(model, x)
    grads = zero_gradients(model)
    delta = u[:, None]
    for k in range(len(model.weights) - 1, -1, -1):
        grads.weights[k] = delta.T @ acts[k]
        grads.biases[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ model.weights[k]) * _act_deriv(zs[k - 1], model.activation)
    return grads


def grad_check(model: MLPModel, objective, h: float = 1e-5) -> float:
    """Largest relative disagreement between analytic and numeric gradients.

    ``objective(model)`` must return (value, GradientBundle). Every
    parameter is perturbed by +-h for a central difference of the value;
    the result is max over parameters of |analytic - numeric| divided by
    max(|analytic| + |numeric|, 1e-8).
    """
    if h <= 0:
        raise ParameterError(f"h must be > 0, got {h}")
    _, analytic = objective(model)
    worst = 0.0
    params = list(zip(model.weights, analytic.weights)) + list(
        zip(model.biases, analytic.biases)
    )
    for array, grad in params:
        flat = array.ravel()
        gflat = np.asarray(grad, dtype=np.float64).ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up, _ = objective(model)
            flat[i] = orig - h
            down, _ = objective(model)
            flat[i] = orig
            numeric = (up - down) / (2.0 * h)
            err = abs(gflat[i] - numeric) / max(abs(gflat[i]) + abs(numeric), 1e-8)
            worst = max(worst, err)
    return worst


def save_model(model: MLPModel, path) -> None:
    doc = {
        "format": CHECKPOINT_FORMAT,
        "layer_dims": model.layer_dims,
        "activation": model.activation,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path) -> MLPModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON: {exc}") from None
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise FormatError(
            f"{path}: expected format {CHECKPOINT_FORMAT!r}, got {doc.get('format')!r}"
        )
    dims = [int(d) for d in doc["layer_dims"]]
    if doc["activation"] not in ACTIVATIONS:
        raise FormatError(f"{path}: unknown activation {doc['activation']!r}")
    weights = [np.asarray(w, dtype=np.float64) for w in doc["weights"]]
    biases = [np.asarray(b, dtype=np.float64) for b in doc["biases"]]
    for k, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        if weights[k].shape != (fan_out, fan_in) or biases[k].shape != (fan_out,):
            raise FormatError(f"{path}: parameter shapes do not match layer_dims")
    return MLPModel(
        layer_dims=dims, weights=weights, biases=biases, activation=doc["activation"]
    )
