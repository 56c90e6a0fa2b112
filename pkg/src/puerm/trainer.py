"""Minibatched PU training with the non-negative truncation branch.

Each epoch shuffles the training rows and walks minibatches. For every
batch the three risk components are computed in the mode named by the
method (``*_ss`` pools labeled and unlabeled rows into the distribution
term, ``*_cc`` uses unlabeled rows only). The uPU methods always descend
the unbiased objective r_label + r_dist - r_corr with step eta. The nnPU
methods watch the signed part: while r_dist - r_corr > -beta they descend
the unbiased objective; once it falls to -beta or below they instead
descend the surrogate r_corr - r_dist with the discounted step gamma*eta,
which pushes the overfitted negative part back up. Defaults are beta=0
and gamma=1.

Per-epoch traces record the mean components, the mean objective (the
truncated value for nnPU methods), the fraction of batches that triggered
truncation, and test accuracy (a fraction in [0, 1]) when a held-out
labeled set is supplied.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset, PUDataset
from .errors import FormatError, ParameterError, TrainingError
from .model import MLPModel, backward, forward, zero_gradients
from .numerics import Rng
from .risk import MODE_CC, MODE_SS, get_loss, nnpu_risk, risk_components, upu_risk

METHODS = ("nnpu_ss", "nnpu_cc", "upu_ss", "upu_cc")
OPTIMIZERS = ("sgd", "adam-style")
TRACE_COLUMNS = (
    "epoch",
    "r_label",
    "r_dist",
    "r_corr",
    "objective",
    "truncation_fraction",
    "test_accuracy",
)


@dataclass
class TrainerConfig:
    """Hyperparameters for one training run."""

    method: str = "nnpu_ss"
    beta: float = 0.0
    gamma: float = 1.0
    eta: float = 0.1
    epochs: int = 50
    batch_size: int = 100
    optimizer: str = "sgd"
    seed: int = 0
    loss: str = "logistic"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.beta < 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ParameterError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.eta <= 0:
            raise ParameterError(f"eta must be > 0, got {self.eta}")
        if self.epochs < 0:
            raise ParameterError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ParameterError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.optimizer not in OPTIMIZERS:
            raise ParameterError(f"optimizer must be one of {OPTIMIZERS}")
        get_loss(self.loss)

    @property
    def mode(self) -> str:
        return MODE_SS if self.method.endswith("_ss") else MODE_CC

    @property
    def is_nnpu(self) -> bool:
        return self.method.startswith("nnpu")


@dataclass
class EpochTrace:
    epoch: int
    mean_r_label: float
    mean_r_dist: float
    mean_r_corr: float
    mean_objective: float
    truncation_fraction: float
    test_accuracy: float | None = None


class _Adam:
    """Adaptive-moment updates (non-default; the plain method is sgd)."""

    def __init__(self, model: MLPModel, b1=0.9, b2=0.999, eps=1e-8):
        self.b1, self.b2, self.eps = b1, b2, eps
        self.t = 0
        z = zero_gradients(model)
        self.mw = z.weights
        self.mb = z.biases
        z = zero_gradients(model)
        self.vw = z.weights
        self.vb = z.biases

    def step(self, model: MLPModel, grads, lr: float) -> None:
        self.t += 1
        c1 = 1.0 - self.b1**self.t
        c2 = 1.0 - self.b2**self.t
        for params, gs, ms, vs in (
            (model.weights, grads.weights, self.mw, self.vw),
            (model.biases, grads.biases, self.mb, self.vb),
        ):
            for p, g, m, v in zip(params, gs, ms, vs):
                m *= self.b1
                m += (1.0 - self.b1) * g
                v *= self.b2
                v += (1.0 - self.b2) * g * g
                p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def _sgd_step(model: MLPModel, grads, lr: float) -> None:
    for p, g in zip(model.weights, grads.weights):
        p -= lr * g
    for p, g in zip(model.biases, grads.biases):
        p -= lr * g


def _upstream(g, lab_mask, pi, mode, loss, surrogate: bool) -> np.ndarray:
    """d(objective)/d(score) per row for the chosen branch."""
    n_b = g.size
    n_l = int(np.sum(lab_mask))
    n_u = n_b - n_l
    dneg = loss.derivative(-g)  # l'(-g_i)
    u = np.zeros(n_b, dtype=np.float64)
    if mode == MODE_SS:
        u -= dneg / n_b  # d r_dist / d g_i over all rows
    elif n_u > 0:
        u[~lab_mask] -= dneg[~lab_mask] / n_u
    if n_l > 0:
        # d(-r_corr)/dg on labeled rows: +pi/n_l * l'(-g)
        u[lab_mask] += (pi / n_l) * dneg[lab_mask]
    if surrogate:
        # surrogate = r_corr - r_dist = -(r_dist - r_corr): flip, drop r_label
        return -u
    if n_l > 0:
        u[lab_mask] += (pi / n_l) * loss.derivative(g[lab_mask])
    return u


def batch_objective(x, s, pi: float, mode: str, loss, surrogate: bool):
    """Objective factory for one batch and one branch of the update rule.

    Returns a callable mapping a model to (value, GradientBundle) where
    value is the quantity the branch actually descends: the unbiased
    objective r_label + r_dist - r_corr when ``surrogate`` is False, the
    surrogate r_corr - r_dist when True. Used by finite-difference
    gradient verification and by the self-check command.
    """
    x = np.asarray(x, dtype=np.float64)
    lab_mask = np.asarray(s, dtype=np.int64) == 1

    def objective(model: MLPModel):
        g = forward(model, x)
        comp = risk_components(
            g[lab_mask], g[~lab_mask], pi, x.shape[0], mode, loss
        )
        value = (comp.r_corr - comp.r_dist) if surrogate else upu_risk(comp)
        grads = backward(model, x, _upstream(g, lab_mask, pi, mode, loss, surrogate))
        return value, grads

    return objective


def train(
    dataset: PUDataset,
    cfg: TrainerConfig,
    model: MLPModel,
    test: LabeledDataset | None = None,
) -> tuple[MLPModel, list[EpochTrace]]:
    """Run the minibatch loop; mutates ``model`` in place and returns it.

    Raises TrainingError naming the epoch and batch if the objective goes
    non-finite (divergence is reported, never clamped).
    """
    n = dataset.n
    if cfg.batch_size > n:
        raise ParameterError(
            f"batch_size {cfg.batch_size} exceeds dataset size {n}"
        )
    loss = get_loss(cfg.loss)
    mode = cfg.mode
    pi = dataset.pi
    rng = Rng(cfg.seed)
    opt = _Adam(model) if cfg.optimizer == "adam-style" else None
    traces: list[EpochTrace] = []
    n_batches = math.ceil(n / cfg.batch_size)

    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        sums = np.zeros(4)
        truncated_batches = 0
        for b in range(n_batches):
            idx = perm[b * cfg.batch_size : (b + 1) * cfg.batch_size]
            xb = dataset.x[idx]
            lab_mask = dataset.s[idx] == 1
            g = forward(model, xb)
            comp = risk_components(
                g[lab_mask], g[~lab_mask], pi, idx.size, mode, loss
            )
            nn_value, truncated = nnpu_risk(comp, cfg.beta)
            if cfg.is_nnpu:
                objective = nn_value
                surrogate = truncated
                step = cfg.gamma * cfg.eta if surrogate else cfg.eta
            else:
                objective = upu_risk(comp)
                surrogate = False
                step = cfg.eta
            if not np.isfinite(objective):
                raise TrainingError(
                    f"non-finite objective at epoch {epoch}, batch {b} "
                    f"(method {cfg.method}, eta {cfg.eta})"
                )
            truncated_batches += truncated
            sums += (comp.r_label, comp.r_dist, comp.r_corr, objective)
            grads = backward(
                model, xb, _upstream(g, lab_mask, pi, mode, loss, surrogate)
            )
            if opt is None:
                _sgd_step(model, grads, step)
            else:
                opt.step(model, grads, step)
        test_acc = None
        if test is not None:
            preds = classify_scores(forward(model, test.x))
            test_acc = float(np.mean(preds == test.y))
        means = sums / n_batches
        traces.append(
            EpochTrace(
                epoch=epoch,
                mean_r_label=float(means[0]),
                mean_r_dist=float(means[1]),
                mean_r_corr=float(means[2]),
                mean_objective=float(means[3]),
                truncation_fraction=truncated_batches / n_batches,
                test_accuracy=test_acc,
            )
        )
    return model, traces


def classify_scores(g_values) -> np.ndarray:
    """Hard labels from scores: +1 where g >= 0, else -1."""
    g = np.asarray(g_values, dtype=np.float64)
    if g.size and not np.all(np.isfinite(g)):
        raise ParameterError("scores must be finite")
    return np.where(g >= 0, 1, -1).astype(np.int64)


def save_trace(traces, path) -> None:
    """Persist per-epoch diagnostics as CSV (empty test accuracy allowed)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for t in traces:
            w.writerow(
                [
                    t.epoch,
                    repr(t.mean_r_label),
                    repr(t.mean_r_dist),
                    repr(t.mean_r_corr),
                    repr(t.mean_objective),
                    repr(t.truncation_fraction),
                    "" if t.test_accuracy is None else repr(t.test_accuracy),
                ]
            )


def load_trace(path) -> list[EpochTrace]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(TRACE_COLUMNS):
            raise FormatError(f"{path}: unexpected trace header {header}")
        out = []
        for r, row in enumerate(reader):
            if len(row) != len(TRACE_COLUMNS):
                raise FormatError(f"{path}: row {r}: expected {len(TRACE_COLUMNS)} cells")
            out.append(
                EpochTrace(
                    epoch=int(row[0]),
                    mean_r_label=float(row[1]),
                    mean_r_dist=float(row[2]),
                    mean_r_corr=float(row[3]),
                    mean_objective=float(row[4]),
                    truncation_fraction=float(row[5]),
                    test_accuracy=float(row[6]) if row[6] else None,
                )
            )
        return out
