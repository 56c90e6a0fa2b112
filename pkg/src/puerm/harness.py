"""Experiment grid runner, results persistence, report tables, self-checks.

A grid is the cross product (dataset x scenario x method x c x seed). Each
cell derives its own 64-bit seed by hashing the cell coordinates, so the
cell's data, corruption, initialization and shuffling never depend on
which other cells exist. Results append to a CSV (first line is a format
tag) as soon as each cell finishes; re-running the same grid skips cells
already present, which makes interrupted runs resumable and full reruns
byte-identical.

Per-cell protocol: build the source data (synthetic draw or CSV), carve
out a held-out labeled test set, corrupt the training side under the
cell's scenario, train the cell's method, then score hard predictions on
the test set.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import risk
from .datasets import (
    LabeledDataset,
    SplitSpec,
    gaussian_mixture,
    load_csv,
    train_test_split,
)
from .errors import FormatError, ParameterError, PuermError
from .metrics import confusion, delta, scores
from .model import forward, grad_check, init
from .numerics import Rng
from .sampling import (
    CaseControlConfig,
    ScarConfig,
    case_control_sample,
    scar_label,
    unlabeled_positive_fraction_ss,
)
from .trainer import (
    METHODS,
    TrainerConfig,
    batch_objective,
    classify_scores,
    save_trace,
    train,
)

RESULTS_TAG = "# puerm-results-v1"
RESULTS_COLUMNS = (
    "dataset",
    "scenario",
    "method",
    "c",
    "seed",
    "accuracy",
    "precision",
    "recall",
    "f1",
    "trace_path",
)
GRID_SCENARIOS = ("ss", "cc")


@dataclass
class DatasetSource:
    """One dataset entry of a grid: synthetic generator or CSV file."""

    name: str
    kind: str = "synthetic"
    path: str | None = None
    pi: float | None = None
    mu_pos: float = 2.0
    mu_neg: float = -2.0
    sd: float = 1.0
    dim: int = 1

    def __post_init__(self):
        if self.kind not in ("synthetic", "csv"):
            raise ParameterError(f"dataset kind must be synthetic or csv, got {self.kind!r}")
        if self.kind == "csv" and not self.path:
            raise ParameterError(f"dataset {self.name!r}: csv kind needs a path")
        if self.kind == "synthetic" and self.pi is None:
            self.pi = 0.5


@dataclass
class GridSpec:
    """Full experiment description; mirrors the JSON config layout."""

    datasets: list[DatasetSource]
    scenarios: list[str] = field(default_factory=lambda: ["ss", "cc"])
    methods: list[str] = field(default_factory=lambda: ["nnpu_ss", "nnpu_cc"])
    c_values: list[float] = field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7, 0.9])
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    trainer: TrainerConfig = field(default_factory=TrainerConfig)
    n: int = 1000
    test_fraction: float = 0.2
    hidden_dims: list[int] = field(default_factory=lambda: [32, 32, 32, 32])
    activation: str = "relu"
    out: str = "results.csv"
    trace_dir: str | None = None

    def __post_init__(self):
        if not self.datasets:
            raise ParameterError("grid needs at least one dataset")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ParameterError(f"dataset names must be unique, got {names}")
        for sc in self.scenarios:
            if sc not in GRID_SCENARIOS:
                raise ParameterError(f"unknown scenario {sc!r}; use ss or cc")
        for m in self.methods:
            if m not in METHODS:
                raise ParameterError(f"unknown method {m!r}; use one of {METHODS}")
        for c in self.c_values:
            if not 0.0 < c <= 1.0:
                raise ParameterError(f"c values must lie in (0, 1], got {c}")
            if c == 1.0 and "cc" in self.scenarios:
                raise ParameterError(
                    "c=1 is not usable with the case-control scenario "
                    "(its unlabeled component would be empty)"
                )
        if self.n < 10:
            raise ParameterError(f"per-run budget n must be >= 10, got {self.n}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ParameterError("test_fraction must be in (0, 1)")


@dataclass
class ExperimentResult:
    dataset: str
    scenario: str
    method: str
    c: float
    seed: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    trace_path: str = ""

    def __post_init__(self):
        for name in ("accuracy", "precision", "recall", "f1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 100.0:
                raise ParameterError(f"{name} must be a percentage in [0, 100], got {v}")


def cell_seed(seed: int, dataset: str, scenario: str, method: str, c: float) -> int:
    """Stable 64-bit seed for one grid cell.

    Hashing the coordinates (with c in shortest round-trip decimal form)
    means adding datasets, methods or c values never changes the seeds of
    existing cells.
    """
    key = f"cell-v1|{seed}|{dataset}|{scenario}|{method}|{repr(float(c))}"
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _build_source_data(
    source: DatasetSource, spec: GridSpec, rng: Rng
) -> tuple[LabeledDataset, LabeledDataset]:
    """(training pool, held-out test set) for one cell."""
    if source.kind == "synthetic":
        pool_n = 2 * spec.n
        test_n = max(1, round(spec.n * spec.test_fraction / (1.0 - spec.test_fraction)))
        pool = gaussian_mixture(
            pool_n, source.pi, source.mu_pos, source.mu_neg, source.sd, source.dim, rng
        )
        test = gaussian_mixture(
            test_n, source.pi, source.mu_pos, source.mu_neg, source.sd, source.dim, rng
        )
        return pool, test
    data = load_csv(source.path)
    if source.pi is not None:
        data = LabeledDataset(x=data.x, y=data.y, pi=source.pi)
    split = SplitSpec(train_fraction=1.0 - spec.test_fraction)
    return train_test_split(data, split, rng)


def run_cell(
    source: DatasetSource, scenario: str, method: str, c: float, seed: int, spec: GridSpec
) -> ExperimentResult:
    """Execute one grid cell end to end and return its scores."""
    base = cell_seed(seed, source.name, scenario, method, c)
    root = Rng(base)
    pool, test = _build_source_data(source, spec, root.child(0))
    corrupt_rng = root.child(1)
    pi = pool.pi if pool.pi is not None else pool.empirical_prior()
    if scenario == "ss":
        budget = min(spec.n, pool.n)
        pu = scar_label(pool, ScarConfig(c=c, n=budget, seed=seed), corrupt_rng)
    else:
        cc_cfg = CaseControlConfig(c=c, pi=pi, n=spec.n, seed=seed)
        pu = case_control_sample(pool, cc_cfg, corrupt_rng)
    model = init([pool.dim] + list(spec.hidden_dims) + [1], spec.activation, root.child(2))
    cfg = replace(spec.trainer, method=method, seed=base)
    model, traces = train(pu, cfg, model, test)
    preds = classify_scores(forward(model, test.x))
    acc, prec, rec, f1 = scores(confusion(preds, test.y))
    trace_path = ""
    if spec.trace_dir:
        os.makedirs(spec.trace_dir, exist_ok=True)
        fname = f"{source.name}_{scenario}_{method}_c{repr(float(c))}_s{seed}.csv"
        trace_path = os.path.join(spec.trace_dir, fname)
        save_trace(traces, trace_path)
    return ExperimentResult(
        dataset=source.name,
        scenario=scenario,
        method=method,
        c=float(c),
        seed=int(seed),
        accuracy=acc,
        precision=prec,
        recall=rec,
        f1=f1,
        trace_path=trace_path,
    )


def _result_key(dataset: str, scenario: str, method: str, c: float, seed: int):
    return (dataset, scenario, method, repr(float(c)), str(int(seed)))


def _result_to_row(r: ExperimentResult) -> list[str]:
    return [
        r.dataset,
        r.scenario,
        r.method,
        repr(float(r.c)),
        str(int(r.seed)),
        repr(float(r.accuracy)),
        repr(float(r.precision)),
        repr(float(r.recall)),
        repr(float(r.f1)),
        r.trace_path,
    ]


def load_results(path) -> tuple[list[ExperimentResult], int]:
    """(parsed result rows, number of error-marker rows) from a results CSV."""
    results: list[ExperimentResult] = []
    n_errors = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != RESULTS_TAG:
            raise FormatError(f"{path}: missing results format tag {RESULTS_TAG!r}")
        header = fh.readline().rstrip("\n")
        if header != ",".join(RESULTS_COLUMNS):
            raise FormatError(f"{path}: unexpected results header")
        for row in csv.reader(fh):
            if not row:
                continue
            if len(row) != len(RESULTS_COLUMNS):
                raise FormatError(f"{path}: malformed results row {row}")
            if row[5] == "":
                n_errors += 1
                continue
            results.append(
                ExperimentResult(
                    dataset=row[0],
                    scenario=row[1],
                    method=row[2],
                    c=float(row[3]),
                    seed=int(row[4]),
                    accuracy=float(row[5]),
                    precision=float(row[6]),
                    recall=float(row[7]),
                    f1=float(row[8]),
                    trace_path=row[9],
                )
            )
    return results, n_errors


def _existing_keys(path) -> set:
    keys = set()
    if not os.path.exists(path):
        return keys
    results, _ = load_results(path)
    for r in results:
        keys.add(_result_key(r.dataset, r.scenario, r.method, r.c, r.seed))
    return keys


def run_grid(spec: GridSpec, log=None) -> list[ExperimentResult]:
    """Run every cell of the grid, appending to ``spec.out`` as cells finish.

    Cells whose key already appears in the results file are skipped, so a
    rerun after an interruption picks up where it stopped. A failing cell
    writes an error-marker row (empty metric fields, message in the
    trace_path column) and the run continues.
    """
    done = _existing_keys(spec.out)
    fresh = not os.path.exists(spec.out)
    results: list[ExperimentResult] = []
    with open(spec.out, "a", encoding="utf-8", newline="") as fh:
        if fresh:
            fh.write(RESULTS_TAG + "\n")
            fh.write(",".join(RESULTS_COLUMNS) + "\n")
            fh.flush()
        writer = csv.writer(fh, lineterminator="\n")
        for source in spec.datasets:
            for scenario in spec.scenarios:
                for method in spec.methods:
                    for c in spec.c_values:
                        if scenario == "cc" and c == 1.0:
                            continue
                        for seed in spec.seeds:
                            key = _result_key(source.name, scenario, method, c, seed)
                            if key in done:
                                continue
                            try:
                                result = run_cell(source, scenario, method, c, seed, spec)
                            except PuermError as exc:
                                writer.writerow(
                                    [
                                        source.name,
                                        scenario,
                                        method,
                                        repr(float(c)),
                                        str(int(seed)),
                                        "",
                                        "",
                                        "",
                                        "",
                                        f"error: {exc}",
                                    ]
                                )
                                fh.flush()
                                if log:
                                    print(
                                        f"cell {key} failed: {exc}", file=log, flush=True
                                    )
                                continue
                            results.append(result)
                            writer.writerow(_result_to_row(result))
                            fh.flush()
                            if log:
                                print(
                                    f"done {source.name}/{scenario}/{method}"
                                    f"/c={c}/seed={seed}: acc={result.accuracy:.2f}",
                                    file=log,
                                    flush=True,
                                )
    return results


def emit_report(results_path, metric: str = "f1", scenario: str = "ss") -> str:
    """Per-c blocks of method means over seeds, datasets as columns.

    Each block carries one row per method plus a difference row per
    estimator family present in both variants: the scenario-appropriate
    variant's mean minus the cross-applied one's. Missing cells print
    blank and emit a warning on stderr.
    """
    if metric not in ("accuracy", "precision", "recall", "f1"):
        raise ParameterError(f"unknown metric {metric!r}")
    if scenario not in GRID_SCENARIOS:
        raise ParameterError(f"unknown scenario {scenario!r}")
    results, n_errors = load_results(results_path)
    if n_errors:
        print(f"warning: {n_errors} error rows skipped", file=sys.stderr)
    rows = [r for r in results if r.scenario == scenario]
    out = io.StringIO()
    title = f"{metric} (percent), scenario {scenario}, mean over seeds"
    print(title, file=out)
    print("=" * len(title), file=out)
    if not rows:
        print("warning: no results for this scenario", file=sys.stderr)
        return out.getvalue()

    datasets = sorted({r.dataset for r in rows})
    methods = sorted({r.method for r in rows})
    c_values = sorted({r.c for r in rows})
    by_cell: dict[tuple, list[float]] = {}
    for r in rows:
        by_cell.setdefault((r.dataset, r.method, r.c), []).append(getattr(r, metric))

    def mean_of(dataset: str, method: str, c: float) -> float | None:
        values = by_cell.get((dataset, method, c))
        return None if not values else float(np.mean(values))

    label_width = max(
        [len("method")]
        + [len(m) for m in methods]
        + [len(f"delta_{fam}") for fam in ("nnpu", "upu")]
    )
    col_width = max([8] + [len(d) for d in datasets]) + 2
    for c in c_values:
        print(f"\nc = {repr(c)}", file=out)
        header = "method".ljust(label_width) + "".join(
            d.rjust(col_width) for d in datasets
        )
        print(header, file=out)
        table: dict[str, list[float | None]] = {}
        for m in methods:
            table[m] = [mean_of(d, m, c) for d in datasets]
        for family in ("nnpu", "upu"):
            correct = f"{family}_{scenario}"
            other = f"{family}_cc" if scenario == "ss" else f"{family}_ss"
            if correct in methods and other in methods:
                deltas = []
                for i in range(len(datasets)):
                    a, b = table[correct][i], table[other][i]
                    deltas.append(None if a is None or b is None else delta(a, b))
                table[f"delta_{family}"] = deltas
        for name, values in table.items():
            cells = []
            for d, v in zip(datasets, values):
                if v is None:
                    print(
                        f"warning: no results for {d}/{name}/c={repr(c)}",
                        file=sys.stderr,
                    )
                    cells.append("".rjust(col_width))
                else:
                    cells.append(f"{v:.2f}".rjust(col_width))
            print(name.ljust(label_width) + "".join(cells), file=out)
    return out.getvalue()


def default_grid_spec(out: str = "results.csv", trace_dir: str | None = None) -> GridSpec:
    """The built-in desk-scale grid: the two-Gaussian family, both
    scenarios, the truncation-based method pair, five c levels, ten seeds."""
    return GridSpec(
        datasets=[DatasetSource(name="gauss1d", kind="synthetic")],
        out=out,
        trace_dir=trace_dir,
    )


def parse_grid_config(doc: dict, base_dir: str = ".") -> GridSpec:
    """Build a GridSpec from a parsed JSON document.

    Relative CSV paths are resolved against ``base_dir`` (normally the
    config file's directory). Unknown keys are rejected so typos fail
    loudly.
    """
    known = {
        "datasets",
        "scenarios",
        "methods",
        "c_values",
        "seeds",
        "trainer",
        "n",
        "test_fraction",
        "hidden_dims",
        "activation",
        "out",
        "trace_dir",
    }
    unknown = set(doc) - known
    if unknown:
        raise FormatError(f"unknown grid config keys: {sorted(unknown)}")
    if "datasets" not in doc:
        raise FormatError("grid config needs a 'datasets' list")
    sources = []
    for entry in doc["datasets"]:
        entry = dict(entry)
        path = entry.get("path")
        if path and not os.path.isabs(path):
            entry["path"] = os.path.join(base_dir, path)
        try:
            sources.append(DatasetSource(**entry))
        except TypeError as exc:
            raise FormatError(f"bad dataset entry {entry}: {exc}") from None
    trainer_doc = doc.get("trainer", {})
    try:
        trainer = TrainerConfig(**trainer_doc)
    except TypeError as exc:
        raise FormatError(f"bad trainer config {trainer_doc}: {exc}") from None
    kwargs = {k: v for k, v in doc.items() if k not in ("datasets", "trainer")}
    return GridSpec(datasets=sources, trainer=trainer, **kwargs)


def load_grid_config(path) -> GridSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON: {exc}") from None
    return parse_grid_config(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def run_self_checks() -> list[tuple[str, bool, str]]:
    """Fast end-to-end oracle suite: (name, passed, detail) per check.

    Covers the estimator regrouping identity, the logistic margin
    identity, finite-difference gradient verification on both update
    branches, and the closed-form sampler proportions.
    """
    checks: list[tuple[str, bool, str]] = []
    rng = Rng(20240817)

    # Regrouped single-sample estimator equals the pooled form.
    worst = 0.0
    for i in range(100):
        r = rng.child(i)
        n_l = 1 + int(r.uniform(1)[0] * 63)
        n_u = int(r.uniform(1)[0] * 448)
        gl = r.normal(n_l, sd=3.0)
        gu = r.normal(n_u, sd=3.0)
        pi = 0.05 + 0.9 * r.uniform(1)[0]
        comp = risk.risk_components(gl, gu, pi, n_l + n_u, risk.MODE_SS)
        a = risk.upu_risk(comp)
        b = risk.empirical_risk_ss_regrouped(gl, gu, pi)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    checks.append(
        (
            "single-sample estimator regrouping identity",
            worst < 1e-12,
            f"max relative difference {worst:.3e} over 100 batches (tol 1e-12)",
        )
    )

    # Logistic margin identity l(s) - l(-s) = -s.
    margins = (rng.uniform(1000) - 0.5) * 100.0
    err = np.abs(
        risk.loss_logistic(margins) - risk.loss_logistic(-margins) + margins
    ).max()
    checks.append(
        (
            "logistic margin identity",
            err < 1e-10,
            f"max absolute error {err:.3e} over 1000 margins (tol 1e-10)",
        )
    )

    # Gradient checks, both branches, both activations.
    x = rng.normal(12, sd=1.5).reshape(6, 2)
    s = np.array([1, 1, -1, -1, -1, -1])
    for k, (activation, tol) in enumerate((("tanh", 1e-6), ("relu", 1e-4))):
        m = init([2, 8, 8, 1], activation, rng.child(1000 + k))
        if activation == "relu":
            for b in m.biases[:-1]:
                b += 0.05  # keep pre-activations away from the kink
        worst = 0.0
        for mode in (risk.MODE_SS, risk.MODE_CC):
            for surrogate in (False, True):
                obj = batch_objective(x, s, 0.5, mode, risk.LOGISTIC, surrogate)
                worst = max(worst, grad_check(m, obj, h=1e-5))
        checks.append(
            (
                f"gradient check ({activation})",
                worst < tol,
                f"max relative error {worst:.3e} (tol {tol:g})",
            )
        )

    # Sampler proportions against the closed forms.
    n = 200000
    pool = gaussian_mixture(2 * n, 0.5, rng=rng.child(2000))
    for j, c in enumerate((0.1, 0.5, 0.9)):
        pu = scar_label(pool, ScarConfig(c=c, n=n), rng.child(2100 + j))
        unl = pu.s == -1
        frac = float(np.mean(pu.y_true[unl] == 1))
        target = unlabeled_positive_fraction_ss(0.5, c)
        sigma = math.sqrt(target * (1.0 - target) / int(np.sum(unl)))
        ok = abs(frac - target) <= 3.0 * sigma
        checks.append(
            (
                f"single-sample unlabeled mix (c={c})",
                ok,
                f"fraction {frac:.5f} vs {target:.5f} (3 sigma = {3 * sigma:.5f})",
            )
        )
        cc = case_control_sample(
            pool, CaseControlConfig(c=c, pi=0.5, n=n), rng.child(2200 + j)
        )
        unl = cc.s == -1
        frac = float(np.mean(cc.y_true[unl] == 1))
        sigma = math.sqrt(0.25 / int(np.sum(unl)))
        ok = abs(frac - 0.5) <= 3.0 * sigma
        checks.append(
            (
                f"case-control unlabeled mix (c={c})",
                ok,
                f"fraction {frac:.5f} vs 0.5 (3 sigma = {3 * sigma:.5f})",
            )
        )
    return checks
