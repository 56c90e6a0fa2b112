"""Margin losses and the positive-unlabeled risk estimators.

All estimators are built from three per-batch components. With a score
function g, a loss ``l`` on margins, class prior ``pi``, a labeled part L
and an unlabeled part U:

* ``r_label``  = pi * mean over L of l(g(x))
* ``r_corr``   = pi * mean over L of l(-g(x))
* ``r_dist``   = the general-distribution term. In case-control mode it is
  the mean of l(-g(x)) over U alone (U follows the full marginal). In
  single-sample mode L and U together form one draw from the marginal, so
  it is the pooled sum of l(-g(x)) over L and U divided by the total count.

The unbiased estimator is ``r_label + r_dist - r_corr`` and may go
negative on finite samples; the non-negative variant truncates
``r_dist - r_corr`` at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DataError, ParameterError, ShapeError

MODE_SS = "ss"
MODE_CC = "cc"
MODES = (MODE_SS, MODE_CC)


def _sigmoid(t):
    """Numerically stable 1 / (1 + e^-t) for scalars or arrays."""
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return float(out[0]) if scalar else out


def loss_logistic(margin):
    """Logistic loss log(1 + e^-margin), overflow-safe for any margin."""
    m = np.asarray(margin, dtype=np.float64)
    out = np.logaddexp(0.0, -m)
    return float(out) if out.ndim == 0 else out


def loss_logistic_derivative(margin):
    """d/dm log(1 + e^-m) = -1 / (1 + e^m)."""
    m = np.asarray(margin, dtype=np.float64)
    out = -_sigmoid(-m)
    return float(out) if np.ndim(out) == 0 else out


def loss_sigmoid(margin):
    """Sigmoid loss 1 / (1 + e^margin), bounded in (0, 1)."""
    return _sigmoid(-np.asarray(margin, dtype=np.float64))


def loss_sigmoid_derivative(margin):
    """d/dm of the sigmoid loss: -v (1 - v) with v the loss value."""
    v = _sigmoid(-np.asarray(margin, dtype=np.float64))
    return -v * (1.0 - v)


@dataclass(frozen=True)
class LossSpec:
    """A margin loss: its name, value function and exact derivative."""

    kind: str
    value: Callable
    derivative: Callable


LOGISTIC = LossSpec("logistic", loss_logistic, loss_logistic_derivative)
SIGMOID = LossSpec("sigmoid", loss_sigmoid, loss_sigmoid_derivative)
LOSSES = {"logistic": LOGISTIC, "sigmoid": SIGMOID}


def get_loss(kind: str) -> LossSpec:
    try:
        return LOSSES[kind]
    except KeyError:
        raise ParameterError(
            f"unknown loss {kind!r}; available: {sorted(LOSSES)}"
        ) from None


@dataclass
class RiskComponents:
    """Per-batch risk pieces; each is nonnegative by construction."""

    r_label: float
    r_dist: float
    r_corr: float
    n_labeled: int
    n_unlabeled: int


def _as_scores(values, name: str) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 1:
        raise ShapeError(f"{name} must be a 1-D sequence of scores, got ndim={a.ndim}")
    return a


def _check_pi(pi: float) -> float:
    if not 0.0 < pi < 1.0:
        raise ParameterError(f"pi must be in (0, 1), got {pi}")
    return float(pi)


def risk_components(
    g_labeled,
    g_unlabeled,
    pi: float,
    n_total_train: int | None,
    mode: str,
    loss: LossSpec = LOGISTIC,
) -> RiskComponents:
    """Compute (r_label, r_dist, r_corr) for one batch of scores.

    ``n_total_train`` is the denominator of the pooled single-sample
    r_dist term; pass the number of rows the scores were computed from
    (or None to use len(g_labeled) + len(g_unlabeled)). It is ignored in
    case-control mode. An empty labeled part yields r_label = r_corr = 0
    so a degenerate batch still contributes its distribution term.
    """
    pi = _check_pi(pi)
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    gl = _as_scores(g_labeled, "g_labeled")
    gu = _as_scores(g_unlabeled, "g_unlabeled")
    n_l, n_u = gl.size, gu.size
    if n_total_train is None:
        n_total_train = n_l + n_u
    if n_l > 0:
        r_label = pi * float(np.mean(loss.value(gl)))
        r_corr = pi * float(np.mean(loss.value(-gl)))
    else:
        r_label = 0.0
        r_corr = 0.0
    if mode == MODE_CC:
        r_dist = float(np.mean(loss.value(-gu))) if n_u > 0 else 0.0
    else:
        if n_total_train < 1:
            if n_l + n_u > 0:
                raise ParameterError(
                    f"n_total_train must be >= 1, got {n_total_train}"
                )
            r_dist = 0.0
        else:
            pooled = float(np.sum(loss.value(-gl))) + float(np.sum(loss.value(-gu)))
            r_dist = pooled / float(n_total_train)
    return RiskComponents(
        r_label=r_label, r_dist=r_dist, r_corr=r_corr, n_labeled=n_l, n_unlabeled=n_u
    )


def upu_risk(comp: RiskComponents) -> float:
    """Unbiased estimate r_label + r_dist - r_corr; may be negative."""
    return comp.r_label + (comp.r_dist - comp.r_corr)


def nnpu_risk(comp: RiskComponents, beta: float = 0.0) -> tuple[float, bool]:
    """Non-negative estimate and the truncation trigger.

    The value truncates the signed part at zero:
    r_label + max(r_dist - r_corr, 0). The boolean reports whether the
    signed part fell to -beta or below, which is the condition that flips
    training onto the surrogate branch; beta affects only the trigger,
    never the value.
    """
    if beta < 0:
        raise ParameterError(f"beta must be >= 0, got {beta}")
    negative_part = comp.r_dist - comp.r_corr
    value = comp.r_label + max(negative_part, 0.0)
    return value, negative_part <= -beta


def true_risk(g_values, y_true, loss: LossSpec = LOGISTIC) -> float:
    """Mean loss at the true-label margins: mean of l(y * g(x))."""
    g = _as_scores(g_values, "g_values")
    y = np.asarray(y_true, dtype=np.float64)
    if y.shape != g.shape:
        raise ShapeError(
            f"y_true length {y.shape} does not match scores {g.shape}"
        )
    if g.size == 0:
        raise DataError("true risk of an empty sample is undefined")
    return float(np.mean(loss.value(y * g)))


def risk_decomposition_cc(
    g_values, y_true, pi: float, loss: LossSpec = LOGISTIC
) -> float:
    """Risk written in prior-weighted case-control form.

    Evaluates pi * E_{y=1} l(g) + E l(-g) - pi * E_{y=1} l(-g) with
    empirical means; agrees with ``true_risk`` exactly when ``pi`` is the
    empirical positive fraction of ``y_true``.
    """
    pi = _check_pi(pi)
    g = _as_scores(g_values, "g_values")
    y = np.asarray(y_true, dtype=np.int64)
    if y.shape != g.shape:
        raise ShapeError("y_true length does not match scores")
    pos = y == 1
    if not np.any(pos):
        raise DataError("decomposition needs at least one positive row")
    gp = g[pos]
    return (
        pi * float(np.mean(loss.value(gp)))
        + float(np.mean(loss.value(-g)))
        - pi * float(np.mean(loss.value(-gp)))
    )


def risk_decomposition_ss(
    g_values, s, y_true, pi: float, loss: LossSpec = LOGISTIC
) -> float:
    """Risk written in single-sample form over one jointly drawn sample.

    Evaluates pi * E_{s=1} l(g) + P(s=-1) * E_{s=-1} l(-g)
    - P(y=1, s=-1) * E_{s=1} l(-g), with P(s=-1) taken empirically and
    the joint probability estimated by the plug-in pi - n_labeled / n.
    ``y_true`` is optional and used only to validate that labeled rows
    are genuinely positive.
    """
    pi = _check_pi(pi)
    g = _as_scores(g_values, "g_values")
    sv = np.asarray(s, dtype=np.int64)
    if sv.shape != g.shape:
        raise ShapeError("s length does not match scores")
    if y_true is not None:
        y = np.asarray(y_true, dtype=np.int64)
        if y.shape != g.shape:
            raise ShapeError("y_true length does not match scores")
        if np.any((sv == 1) & (y == -1)):
            raise DataError("a row with s=+1 must have y_true=+1")
    lab = sv == 1
    n = g.size
    n_l = int(np.sum(lab))
    if n_l == 0:
        raise DataError("single-sample decomposition needs labeled rows")
    p_unl = (n - n_l) / n
    joint = pi - n_l / n
    second = p_unl * float(np.mean(loss.value(-g[~lab]))) if n_l < n else 0.0
    return (
        pi * float(np.mean(loss.value(g[lab])))
        + second
        - joint * float(np.mean(loss.value(-g[lab])))
    )


def empirical_risk_ss_regrouped(
    g_labeled, g_unlabeled, pi: float, loss: LossSpec = LOGISTIC
) -> float:
    """Single-sample unbiased risk in its regrouped (plug-in) form.

    Computes (pi / n_l) * sum_L l(g) + (1 / n) * sum_U l(-g)
    - (pi - n_l / n) * (1 / n_l) * sum_L l(-g), where n = n_l + n_u. The
    labeled share of the pooled distribution term has been folded into the
    third coefficient, so the third term must be normalized per labeled
    row for the regrouping to stay exactly equal to the pooled form
    (``upu_risk`` of single-sample ``risk_components``). The two
    evaluations follow different groupings and serve as an arithmetic
    cross-check of each other.
    """
    pi = _check_pi(pi)
    gl = _as_scores(g_labeled, "g_labeled")
    gu = _as_scores(g_unlabeled, "g_unlabeled")
    n_l = gl.size
    if n_l == 0:
        raise DataError("regrouped form needs at least one labeled row")
    n = n_l + gu.size
    first = (pi / n_l) * float(np.sum(loss.value(gl)))
    middle = float(np.sum(loss.value(-gu))) / n if gu.size else 0.0
    third = (pi - n_l / n) * (1.0 / n_l) * float(np.sum(loss.value(-gl)))
    return first + middle - third


def cross_scenario_bias_gap(g_values, s, loss: LossSpec = LOGISTIC) -> float:
    """How far the sample is from making labeled and unlabeled rows
    interchangeable in the correction term.

    Returns mean_{s=1} l(-g) - mean_{s=-1} l(-g). Treating a single-sample
    dataset as case-control (or vice versa) is unbiased only when this gap
    is zero; its magnitude measures the bias a cross-scenario estimator
    incurs.
    """
    g = _as_scores(g_values, "g_values")
    sv = np.asarray(s, dtype=np.int64)
    if sv.shape != g.shape:
        raise ShapeError("s length does not match scores")
    lab = sv == 1
    if not np.any(lab) or np.all(lab):
        raise DataError("gap needs both labeled and unlabeled rows")
    neg_losses = loss.value(-g)
    return float(np.mean(neg_losses[lab])) - float(np.mean(neg_losses[~lab]))
