"""Gaussian random field on a graph: covariance, MAP inference, sampling.

The field has precision matrix ``L + delta*I``, so its covariance shares the
Laplacian eigenvectors with per-component variances ``1/(lambda_i + delta)``.
A rank-r truncation of that eigenexpansion gives the low-rank model whose MAP
estimate coincides with least-squares bandlimited reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .sampling import SampleSet
from .spectral import Spectrum, eigendecompose

PINV_RCOND = 1e-10


@dataclass(frozen=True)
class GrfModel:
    """Full-rank field: covariance is the inverse of (L + delta*I)."""

    delta: float
    covariance: np.ndarray
    spectrum: Spectrum

    @property
    def n(self) -> int:
        return self.covariance.shape[0]


@dataclass(frozen=True)
class LowRankGrf:
    """Rank-r field held in factored form, never as a dense inverse.

    ``dense()`` materializes basis @ diag(variances) @ basis.T on demand.
    """

    delta: float
    basis: np.ndarray
    variances: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def dense(self) -> np.ndarray:
        return (self.basis * self.variances) @ self.basis.T


GrfLike = Union[GrfModel, LowRankGrf]


@dataclass(frozen=True)
class Posterior:
    """Conditional mean and covariance of the field on unobserved nodes."""

    mean: np.ndarray
    covariance: np.ndarray


def covariance_from_spectrum(spectrum: Spectrum, delta: float) -> GrfModel:
    """Full covariance built from an existing Laplacian eigendecomposition."""
    delta = float(delta)
    if delta <= 0.0:
        raise ValueError(f"delta must be positive (precision is singular), got {delta}")
    variances = 1.0 / (spectrum.eigenvalues + delta)
    K = (spectrum.eigenvectors * variances) @ spectrum.eigenvectors.T
    K = (K + K.T) / 2.0
    K.setflags(write=False)
    return GrfModel(delta=delta, covariance=K, spectrum=spectrum)


def covariance(L, delta: float) -> GrfModel:
    """Covariance of the field with precision matrix L + delta*I."""
    return covariance_from_spectrum(eigendecompose(L), delta)


def low_rank_covariance(
    spectrum: Spectrum, delta: float, rank: int | None = None, omega: float | None = None
) -> LowRankGrf:
    """Rank-r truncation of the field covariance.

    The rank is given directly or derived from a frequency bound ``omega`` as
    the number of eigenvalues strictly below it.
    """
    delta = float(delta)
    if delta <= 0.0:
        raise ValueError(f"delta must be positive (precision is singular), got {delta}")
    if (rank is None) == (omega is None):
        raise ValueError("give exactly one of rank or omega")
    if rank is None:
        rank = int(np.count_nonzero(spectrum.eigenvalues < omega))
    rank = int(rank)
    if not 1 <= rank <= spectrum.size:
        raise ValueError(f"rank must satisfy 1 <= rank <= {spectrum.size}, got {rank}")
    basis = spectrum.eigenvectors[:, :rank].copy()
    variances = 1.0 / (spectrum.eigenvalues[:rank] + delta)
    basis.setflags(write=False)
    variances.setflags(write=False)
    return LowRankGrf(delta=delta, basis=basis, variances=variances)


def _cov_block(model: GrfLike, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    if isinstance(model, GrfModel):
        return model.covariance[np.ix_(rows, cols)]
    return (model.basis[rows] * model.variances) @ model.basis[cols].T


def _factor_rows(model: LowRankGrf, rows: np.ndarray) -> np.ndarray:
    """Rows of the covariance square root basis @ diag(sqrt(variances))."""
    return model.basis[rows] * np.sqrt(model.variances)


def _check_conditioning_args(model: GrfLike, sample_set: SampleSet, observed):
    if sample_set.size == 0:
        raise ValueError("sample set is empty, nothing to condition on")
    if sample_set.n != model.n:
        raise ValueError(
            f"sample set ambient size {sample_set.n} does not match model size {model.n}"
        )
    if observed is None:
        return None
    f_s = np.asarray(observed, dtype=float)
    if f_s.shape[0] != sample_set.size:
        raise ValueError(
            f"observed {f_s.shape[0]} samples for a set of size {sample_set.size}"
        )
    return f_s


def _posterior_mean(model: GrfLike, sample_set: SampleSet, observed, rows) -> np.ndarray:
    """K_{rows,S} (K_S)^+ observed, evaluated per model representation.

    The low-rank model conditions through its covariance factor, which is the
    pseudo-inverse of the same singular block but only ever inverts the
    structural rank once instead of squaring its conditioning.
    """
    f_s = _check_conditioning_args(model, sample_set, observed)
    members = sample_set.members_array()
    if rows.size == 0:
        return np.zeros((0,) + f_s.shape[1:])
    if isinstance(model, GrfModel):
        K_s = _cov_block(model, members, members)
        gain = np.linalg.pinv(K_s, rcond=PINV_RCOND, hermitian=True) @ f_s
        return _cov_block(model, rows, members) @ gain
    G_s = _factor_rows(model, members)
    gain = np.linalg.pinv(G_s, rcond=PINV_RCOND) @ f_s
    return _factor_rows(model, rows) @ gain


def map_estimate(model: GrfLike, sample_set: SampleSet, observed) -> np.ndarray:
    """Posterior mean of the field on the unobserved nodes.

    Singular observed blocks (always the case for a low-rank model with more
    samples than rank) are handled by a pseudo-inverse with relative cutoff
    1e-10; for the full-rank model this coincides with the plain inverse.
    """
    return _posterior_mean(model, sample_set, observed, sample_set.complement())


def map_full_signal(model: GrfLike, sample_set: SampleSet, observed) -> np.ndarray:
    """Posterior mean evaluated on every node.

    For the full-rank model the observed positions reproduce the observations
    exactly; for a low-rank model they receive the smoothed projection, which
    is what makes the estimate agree with bandlimited reconstruction.
    """
    return _posterior_mean(model, sample_set, observed, np.arange(model.n))


def predictive_covariance(model: GrfLike, sample_set: SampleSet) -> np.ndarray:
    """Conditional covariance on the complement: the Schur complement of K_S."""
    _check_conditioning_args(model, sample_set, None)
    if sample_set.is_full:
        raise ValueError("sample set covers every node, no predictive covariance")
    members = sample_set.members_array()
    comp = sample_set.complement()
    if isinstance(model, GrfModel):
        K_s = _cov_block(model, members, members)
        K_cs = _cov_block(model, comp, members)
        C = _cov_block(model, comp, comp) - K_cs @ (
            np.linalg.pinv(K_s, rcond=PINV_RCOND, hermitian=True) @ K_cs.T
        )
    else:
        # K_c|S = G_c (I - P) G_c^T with P the projector onto the observed
        # factor rows; exactly zero when the set determines the rank.
        G_s = _factor_rows(model, members)
        G_c = _factor_rows(model, comp)
        P = np.linalg.pinv(G_s, rcond=PINV_RCOND) @ G_s
        C = G_c @ (np.eye(model.rank) - P) @ G_c.T
    return (C + C.T) / 2.0


def condition(model: GrfLike, sample_set: SampleSet, observed) -> Posterior:
    """Posterior mean and covariance on the unobserved nodes."""
    return Posterior(
        mean=map_estimate(model, sample_set, observed),
        covariance=predictive_covariance(model, sample_set),
    )


def sample_signal(model: GrfLike, seed) -> np.ndarray:
    """Draw one signal from the field.

    ``seed`` may be an integer (or sequence of integers) or an existing
    ``numpy.random.Generator``; equal seeds give identical draws.
    """
    rng = np.random.default_rng(seed)
    if isinstance(model, GrfModel):
        basis = model.spectrum.eigenvectors
        variances = 1.0 / (model.spectrum.eigenvalues + model.delta)
    else:
        basis = model.basis
        variances = model.variances
    z = rng.standard_normal(basis.shape[1])
    return basis @ (np.sqrt(variances) * z)
