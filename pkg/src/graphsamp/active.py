"""Label-query selection criteria and reconstruction-based classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grf import GrfModel, map_full_signal
from .sampling import SampleSet, bl_reconstruct
from .spectral import Spectrum

CRITERION_KINDS = ("maxfreq", "vopt", "sigmaopt", "random")
# Scores closer than this (relative window) are treated as an exact argmax
# tie and resolved to the lowest class id.
ARGMAX_TIE_TOL = 1e-9


@dataclass(frozen=True)
class Criterion:
    """A sampling-set selection criterion.

    ``maxfreq`` maximizes the cutoff-frequency estimate at power order ``k``;
    ``vopt`` minimizes the trace and ``sigmaopt`` the entry sum of the
    predictive covariance; ``random`` draws uniformly with the given seed.
    """

    kind: str
    k: int = 4
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in CRITERION_KINDS:
            raise ValueError(
                f"unknown criterion {self.kind!r}, expected one of {CRITERION_KINDS}"
            )
        if self.kind == "maxfreq" and int(self.k) < 1:
            raise ValueError(f"maxfreq power order must be >= 1, got {self.k}")


@dataclass(frozen=True)
class LabeledSet:
    """Queried nodes together with their class labels."""

    nodes: SampleSet
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.shape != (self.nodes.size,):
            raise ValueError(
                f"{labels.shape[0] if labels.ndim else 0} labels for "
                f"{self.nodes.size} queried nodes"
            )
        if self.num_classes < 1:
            raise ValueError(f"num_classes must be >= 1, got {self.num_classes}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise ValueError(
                f"labels must lie in [0, {self.num_classes}), got range "
                f"[{labels.min()}, {labels.max()}]"
            )
        object.__setattr__(self, "labels", labels)


def _greedy_schur_order(model: GrfModel, m: int, objective: str) -> list[int]:
    """Greedy conditioning order minimizing a predictive-covariance objective.

    Maintains the running conditional covariance over the complement and
    scores each candidate through the exact one-node Schur update, so every
    step minimizes the chosen objective of the full conditional covariance.
    """
    n = model.n
    m = int(m)
    if not 1 <= m < n:
        raise ValueError(f"budget must satisfy 1 <= m < {n}, got {m}")
    C = model.covariance.copy()
    ids = np.arange(n)
    order: list[int] = []
    for _ in range(m):
        d = np.diagonal(C).copy()
        if objective == "trace":
            col_sq = np.einsum("ij,ij->j", C, C)
            scores = (d.sum() - d) - (col_sq - d * d) / d
        elif objective == "sum":
            col_sum = C.sum(axis=0)
            scores = (C.sum() - 2.0 * col_sum + d) - (col_sum - d) ** 2 / d
        else:
            raise ValueError(f"unknown objective {objective!r}")
        pos = int(np.argmin(scores))
        order.append(int(ids[pos]))
        C = C - np.outer(C[:, pos], C[pos, :]) / C[pos, pos]
        C = np.delete(np.delete(C, pos, axis=0), pos, axis=1)
        ids = np.delete(ids, pos)
    return order


def v_optimal_order(model: GrfModel, m: int) -> list[int]:
    """Greedy order minimizing the trace of the predictive covariance."""
    return _greedy_schur_order(model, m, "trace")


def v_optimal_select(model: GrfModel, m: int) -> SampleSet:
    return SampleSet.from_indices(v_optimal_order(model, m), model.n)


def sigma_optimal_order(model: GrfModel, m: int) -> list[int]:
    """Greedy order minimizing the entry sum of the predictive covariance."""
    return _greedy_schur_order(model, m, "sum")


def sigma_optimal_select(model: GrfModel, m: int) -> SampleSet:
    return SampleSet.from_indices(sigma_optimal_order(model, m), model.n)


def random_order(n: int, seed) -> np.ndarray:
    """Random node order; sampling sets of any budget are its prefixes."""
    return np.random.default_rng(seed).permutation(int(n))


def random_select(n: int, m: int, seed) -> SampleSet:
    m = int(m)
    if not 1 <= m <= n:
        raise ValueError(f"budget must satisfy 1 <= m <= {n}, got {m}")
    return SampleSet.from_indices(random_order(n, seed)[:m], n)


def indicator_signals(labeled: LabeledSet) -> np.ndarray:
    """One-vs-rest 0/1 membership columns over the labeled nodes."""
    F = np.zeros((labeled.nodes.size, labeled.num_classes))
    F[np.arange(labeled.nodes.size), labeled.labels] = 1.0
    return F


def _argmax_lowest(scores: np.ndarray) -> np.ndarray:
    top = scores.max(axis=1, keepdims=True)
    window = ARGMAX_TIE_TOL * np.maximum(1.0, np.abs(top))
    return np.argmax(scores >= top - window, axis=1)


def classify_bandlimited(
    spectrum: Spectrum, labeled: LabeledSet, rank: int | None = None
) -> np.ndarray:
    """Predict a class per node by bandlimited one-vs-rest reconstruction.

    Each class membership indicator on the labeled nodes is reconstructed as
    a bandlimited signal and every node takes the class with the largest
    reconstructed score (near-ties resolve to the lowest class id). By
    default the rank equals the number of labeled nodes, making the fit an
    interpolation of the indicators.
    """
    if labeled.nodes.size == 0:
        raise ValueError("labeled set is empty")
    if rank is None:
        rank = labeled.nodes.size
    scores = bl_reconstruct(spectrum, labeled.nodes, indicator_signals(labeled), rank)
    return _argmax_lowest(scores)


def classify_map(model: GrfModel, labeled: LabeledSet) -> np.ndarray:
    """Predict a class per node by MAP one-vs-rest reconstruction."""
    if labeled.nodes.size == 0:
        raise ValueError("labeled set is empty")
    scores = map_full_signal(model, labeled.nodes, indicator_signals(labeled))
    return _argmax_lowest(scores)


def accuracy(predicted, truth, exclude: SampleSet | None = None) -> float:
    """Fraction of correct predictions over nodes outside ``exclude``."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError(
            f"prediction length {predicted.shape} does not match truth {truth.shape}"
        )
    mask = np.ones(len(truth), dtype=bool)
    if exclude is not None:
        mask[exclude.members_array()] = False
    if not mask.any():
        raise ValueError("no nodes outside the excluded set")
    return float(np.mean(predicted[mask] == truth[mask]))
