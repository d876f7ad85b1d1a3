"""Seeded benchmark runs: active classification and random-signal regression.

A run is described by a single JSON config with every field explicit, and
emits a flat table with one row per (criterion, model, budget, trial, metric)
cell. Equal configs produce byte-identical tables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .active import (
    Criterion,
    LabeledSet,
    accuracy,
    classify_bandlimited,
    classify_map,
    random_order,
    sigma_optimal_order,
    v_optimal_order,
)
from .exceptions import DisconnectedGraphError
from .graph import LaplacianKind, is_connected, knn_graph, laplacian
from .grf import GrfModel, covariance_from_spectrum, map_full_signal, sample_signal
from .sampling import SampleSet, bl_reconstruct, greedy_max_cutoff_order
from .spectral import eigendecompose

MODEL_NAMES = ("bl", "map")
CSV_HEADER = "criterion,model,budget,trial,metric,value"
SNR_ERROR_FLOOR = 1e-12
# Sub-stream tags so signal draws and random selections never share a stream.
_SIGNAL_STREAM = 1
_SELECT_STREAM = 2


@dataclass(frozen=True)
class SyntheticBlobs:
    """Gaussian blobs with axis-aligned class centers ``separation`` apart."""

    classes: int
    per_class: int
    dim: int
    separation: float
    seed: int

    def validate(self) -> None:
        if self.classes < 1:
            raise ValueError(f"classes must be >= 1, got {self.classes}")
        if self.per_class < 1:
            raise ValueError(f"per_class must be >= 1, got {self.per_class}")
        if self.dim < self.classes:
            raise ValueError(
                f"dim must be >= classes for axis-aligned centers, got "
                f"dim={self.dim} classes={self.classes}"
            )
        if self.separation < 0:
            raise ValueError(f"separation must be >= 0, got {self.separation}")


@dataclass(frozen=True)
class FileDataset:
    features: str
    labels: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: SyntheticBlobs | FileDataset
    knn: int
    sigma: float | str
    delta: float
    k_power: int
    criteria: tuple[str, ...]
    models: tuple[str, ...]
    budgets: tuple[int, ...]
    trials: int
    seed: int

    def validate(self) -> None:
        if isinstance(self.dataset, SyntheticBlobs):
            self.dataset.validate()
        if self.knn < 1:
            raise ValueError(f"knn must be >= 1, got {self.knn}")
        if self.sigma != "auto" and not float(self.sigma) > 0:
            raise ValueError(f"sigma must be positive or 'auto', got {self.sigma!r}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.k_power < 1:
            raise ValueError(f"k_power must be >= 1, got {self.k_power}")
        if not self.criteria:
            raise ValueError("criteria list is empty")
        for name in self.criteria:
            Criterion(kind=name, k=self.k_power)
        if not self.models:
            raise ValueError("models list is empty")
        for name in self.models:
            if name not in MODEL_NAMES:
                raise ValueError(f"unknown model {name!r}, expected one of {MODEL_NAMES}")
        if not self.budgets:
            raise ValueError("budget grid is empty")
        if any(b < 1 for b in self.budgets):
            raise ValueError(f"budgets must be >= 1, got {self.budgets}")
        if any(b2 <= b1 for b1, b2 in zip(self.budgets, self.budgets[1:])):
            raise ValueError(f"budgets must be strictly increasing, got {self.budgets}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        required = [
            "dataset", "knn", "sigma", "delta", "k_power",
            "criteria", "models", "budgets", "trials", "seed",
        ]
        missing = [key for key in required if key not in data]
        if missing:
            raise ValueError(f"config is missing required fields: {missing}")
        extra = [key for key in data if key not in required]
        if extra:
            raise ValueError(f"config has unknown fields: {extra}")
        ds = data["dataset"]
        if not isinstance(ds, dict) or "type" not in ds:
            raise ValueError("dataset must be an object with a 'type' field")
        if ds["type"] == "synthetic":
            dataset = SyntheticBlobs(
                classes=int(ds["classes"]),
                per_class=int(ds["per_class"]),
                dim=int(ds["dim"]),
                separation=float(ds["separation"]),
                seed=int(ds["seed"]),
            )
        elif ds["type"] == "files":
            dataset = FileDataset(
                features=str(ds["features"]),
                labels=None if ds.get("labels") is None else str(ds["labels"]),
            )
        else:
            raise ValueError(f"unknown dataset type {ds['type']!r}")
        cfg = cls(
            dataset=dataset,
            knn=int(data["knn"]),
            sigma=data["sigma"] if data["sigma"] == "auto" else float(data["sigma"]),
            delta=float(data["delta"]),
            k_power=int(data["k_power"]),
            criteria=tuple(str(c) for c in data["criteria"]),
            models=tuple(str(m) for m in data["models"]),
            budgets=tuple(int(b) for b in data["budgets"]),
            trials=int(data["trials"]),
            seed=int(data["seed"]),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True)
class ResultRow:
    criterion: str
    model: str
    budget: int
    trial: int
    metric: str
    value: float


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[ResultRow, ...]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(
            f"{r.criterion},{r.model},{r.budget},{r.trial},{r.metric},{r.value!r}"
            for r in self.rows
        )
        return "\n".join(lines) + "\n"

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(
                {
                    "criterion": r.criterion,
                    "model": r.model,
                    "budget": r.budget,
                    "trial": r.trial,
                    "metric": r.metric,
                    "value": r.value,
                }
            )
            for r in self.rows
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        lines = [line for line in text.splitlines() if line]
        if not lines or lines[0] != CSV_HEADER:
            raise ValueError(f"expected header {CSV_HEADER!r}")
        rows = []
        for line in lines[1:]:
            parts = line.split(",")
            if len(parts) != 6:
                raise ValueError(f"expected 6 fields, got {line!r}")
            rows.append(
                ResultRow(
                    criterion=parts[0],
                    model=parts[1],
                    budget=int(parts[2]),
                    trial=int(parts[3]),
                    metric=parts[4],
                    value=float(parts[5]),
                )
            )
        return cls(rows=tuple(rows))

    @classmethod
    def from_jsonl(cls, text: str) -> "ResultTable":
        rows = []
        for line in text.splitlines():
            if not line:
                continue
            data = json.loads(line)
            rows.append(
                ResultRow(
                    criterion=str(data["criterion"]),
                    model=str(data["model"]),
                    budget=int(data["budget"]),
                    trial=int(data["trial"]),
                    metric=str(data["metric"]),
                    value=float(data["value"]),
                )
            )
        return cls(rows=tuple(rows))

    def values(self, criterion=None, model=None, budget=None, metric=None) -> np.ndarray:
        """Row values matching all given filters, in table order."""
        out = [
            r.value
            for r in self.rows
            if (criterion is None or r.criterion == criterion)
            and (model is None or r.model == model)
            and (budget is None or r.budget == budget)
            and (metric is None or r.metric == metric)
        ]
        return np.asarray(out)


def make_blobs(classes: int, per_class: int, dim: int, separation: float, seed: int):
    """Gaussian blob features and labels; identical across runs for a seed."""
    spec = SyntheticBlobs(classes, per_class, dim, separation, seed)
    spec.validate()
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(classes), per_class)
    centers = np.zeros((classes, dim))
    centers[np.arange(classes), np.arange(classes)] = separation
    X = centers[labels] + rng.standard_normal((classes * per_class, dim))
    return X, labels


def load_dataset(dataset: SyntheticBlobs | FileDataset):
    """Features plus labels (labels are None for unlabeled file datasets)."""
    if isinstance(dataset, SyntheticBlobs):
        return make_blobs(
            dataset.classes, dataset.per_class, dataset.dim,
            dataset.separation, dataset.seed,
        )
    X = io.read_features(dataset.features)
    if dataset.labels is None:
        return X, None
    y = io.read_labels(dataset.labels)
    if len(y) != X.shape[0]:
        raise ValueError(
            f"label count {len(y)} does not match feature rows {X.shape[0]}"
        )
    return X, y


def _build_field(config: ExperimentConfig):
    X, y = load_dataset(config.dataset)
    g = knn_graph(X, config.knn, config.sigma)
    if not is_connected(g):
        raise DisconnectedGraphError(
            "K-NN graph is disconnected; increase the neighbor count"
        )
    L = laplacian(g, LaplacianKind.COMBINATORIAL)
    spectrum = eigendecompose(L)
    model = covariance_from_spectrum(spectrum, config.delta)
    return X, y, L, spectrum, model


def deterministic_orders(
    config: ExperimentConfig, L: np.ndarray, model: GrfModel
) -> dict[str, list[int]]:
    """Selection orders for the label-independent criteria, once per config.

    Budgets are served as prefixes of a single greedy order, which matches
    running the greedy algorithm separately per budget.
    """
    max_budget = max(config.budgets)
    orders: dict[str, list[int]] = {}
    for name in config.criteria:
        if name == "maxfreq":
            orders[name] = greedy_max_cutoff_order(L, max_budget, config.k_power)[0]
        elif name == "vopt":
            orders[name] = v_optimal_order(model, max_budget)
        elif name == "sigmaopt":
            orders[name] = sigma_optimal_order(model, max_budget)
    return orders


def _trial_order(config: ExperimentConfig, trial: int, n: int) -> np.ndarray:
    return random_order(n, [config.seed, trial, _SELECT_STREAM])


def run_classification(config: ExperimentConfig) -> ResultTable:
    """Active-classification benchmark: select, query labels, reconstruct.

    For every (criterion, model, budget, trial) cell, queries the true labels
    on the selected set, predicts the rest by one-vs-rest reconstruction, and
    records the accuracy over unlabeled nodes.
    """
    config.validate()
    X, y, L, spectrum, model = _build_field(config)
    if y is None:
        raise ValueError("classification benchmark requires labels")
    n = X.shape[0]
    if max(config.budgets) >= n:
        raise ValueError(
            f"budgets must stay below the node count {n}, got {max(config.budgets)}"
        )
    num_classes = int(y.max()) + 1
    orders = deterministic_orders(config, L, model)

    rows = []
    for crit_name in config.criteria:
        for model_name in config.models:
            for budget in config.budgets:
                for trial in range(config.trials):
                    if crit_name == "random":
                        chosen = _trial_order(config, trial, n)[:budget]
                    else:
                        chosen = orders[crit_name][:budget]
                    sset = SampleSet.from_indices(chosen, n)
                    labeled = LabeledSet(
                        nodes=sset,
                        labels=y[sset.members_array()],
                        num_classes=num_classes,
                    )
                    if model_name == "bl":
                        predicted = classify_bandlimited(spectrum, labeled)
                    else:
                        predicted = classify_map(model, labeled)
                    rows.append(
                        ResultRow(
                            criterion=crit_name,
                            model=model_name,
                            budget=budget,
                            trial=trial,
                            metric="accuracy",
                            value=accuracy(predicted, y, exclude=sset),
                        )
                    )
    return ResultTable(rows=tuple(rows))


def _snr_db(truth: np.ndarray, estimate: np.ndarray) -> float:
    err = float(np.linalg.norm(truth - estimate))
    if err <= SNR_ERROR_FLOOR:
        return math.inf
    return 10.0 * math.log10(float(np.linalg.norm(truth)) ** 2 / err**2)


def run_regression(config: ExperimentConfig) -> ResultTable:
    """Random-signal regression benchmark.

    Each trial draws one signal from the full-rank field and reconstructs it
    from every selected sample set; the recorded metric is the reconstruction
    SNR in dB over the unobserved nodes (``inf`` once the error norm falls
    below 1e-12).
    """
    config.validate()
    X, _, L, spectrum, model = _build_field(config)
    n = X.shape[0]
    if max(config.budgets) >= n:
        raise ValueError(
            f"budgets must stay below the node count {n}, got {max(config.budgets)}"
        )
    orders = deterministic_orders(config, L, model)
    signals = [
        sample_signal(model, [config.seed, trial, _SIGNAL_STREAM])
        for trial in range(config.trials)
    ]

    rows = []
    for crit_name in config.criteria:
        for model_name in config.models:
            for budget in config.budgets:
                for trial in range(config.trials):
                    if crit_name == "random":
                        chosen = _trial_order(config, trial, n)[:budget]
                    else:
                        chosen = orders[crit_name][:budget]
                    sset = SampleSet.from_indices(chosen, n)
                    f = signals[trial]
                    f_s = f[sset.members_array()]
                    comp = sset.complement()
                    if model_name == "bl":
                        estimate = bl_reconstruct(spectrum, sset, f_s, budget)[comp]
                    else:
                        estimate = map_full_signal(model, sset, f_s)[comp]
                    rows.append(
                        ResultRow(
                            criterion=crit_name,
                            model=model_name,
                            budget=budget,
                            trial=trial,
                            metric="snr",
                            value=_snr_db(f[comp], estimate),
                        )
                    )
    return ResultTable(rows=tuple(rows))


def emit(table: ResultTable, path, fmt: str = "csv") -> None:
    """Write a result table to ``path`` as CSV or JSON lines."""
    if fmt == "csv":
        text = table.to_csv()
    elif fmt == "jsonl":
        text = table.to_jsonl()
    else:
        raise ValueError(f"unknown format {fmt!r}, expected 'csv' or 'jsonl'")
    Path(path).write_text(text)


def load_table(path, fmt: str = "csv") -> ResultTable:
    text = Path(path).read_text()
    if fmt == "csv":
        return ResultTable.from_csv(text)
    if fmt == "jsonl":
        return ResultTable.from_jsonl(text)
    raise ValueError(f"unknown format {fmt!r}, expected 'csv' or 'jsonl'")
