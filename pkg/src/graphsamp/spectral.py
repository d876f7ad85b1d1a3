"""Laplacian eigendecomposition, graph Fourier transform, bandlimited signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-10
EIGENVALUE_CLAMP_REL = 1e-10
DEFAULT_BANDWIDTH_TOL = 1e-9
# Absolute slack when counting eigenvalues at a frequency boundary, so a
# degenerate eigenspace straddling the boundary is never split.
BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a symmetric PSD matrix (ascending eigenvalues).

    ``eigenvectors[:, i]`` is the unit eigenvector paired with
    ``eigenvalues[i]``; the frequency interpretation is that signals aligned
    with low-index eigenvectors vary slowly over the graph.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class BandlimitedBasis:
    """Leading eigenvector columns spanning signals of bandwidth <= omega."""

    vectors: np.ndarray
    frequencies: np.ndarray

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]


def _canonical_signs(U: np.ndarray) -> np.ndarray:
    """Flip eigenvector signs so the largest-magnitude entry is positive.

    Ties within a relative window resolve to the lowest index, which keeps the
    convention reproducible across LAPACK builds.
    """
    V = U.copy()
    for col in range(V.shape[1]):
        mags = np.abs(V[:, col])
        top = mags.max()
        if top == 0.0:
            continue
        lead = int(np.flatnonzero(mags >= top * (1.0 - 1e-12))[0])
        if V[lead, col] < 0:
            V[:, col] = -V[:, col]
    return V


def eigendecompose(L) -> Spectrum:
    """Full eigendecomposition of a symmetric PSD matrix.

    Eigenvalues are ascending; values below ``1e-10 * lambda_max`` (including
    negative round-off) are clamped to exactly zero.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    if np.max(np.abs(L - L.T), initial=0.0) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    eigenvalues, U = np.linalg.eigh(L)
    clamp = EIGENVALUE_CLAMP_REL * max(float(eigenvalues[-1]), 0.0)
    eigenvalues = eigenvalues.copy()
    eigenvalues[eigenvalues < clamp] = 0.0
    U = _canonical_signs(U)
    eigenvalues.setflags(write=False)
    U.setflags(write=False)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=U)


def gft(spectrum: Spectrum, signal) -> np.ndarray:
    """Graph Fourier transform: project a signal onto the eigenvector basis."""
    f = np.asarray(signal, dtype=float)
    if f.shape[0] != spectrum.size:
        raise ValueError(
            f"signal length {f.shape[0]} does not match spectrum size {spectrum.size}"
        )
    return spectrum.eigenvectors.T @ f


def igft(spectrum: Spectrum, coeffs) -> np.ndarray:
    """Inverse graph Fourier transform."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape[0] != spectrum.size:
        raise ValueError(
            f"coefficient length {c.shape[0]} does not match spectrum size {spectrum.size}"
        )
    return spectrum.eigenvectors @ c


def bandwidth(spectrum: Spectrum, signal, tol: float = DEFAULT_BANDWIDTH_TOL) -> float:
    """Largest eigenvalue whose GFT coefficient exceeds ``tol * ||signal||``."""
    f = np.asarray(signal, dtype=float)
    norm = float(np.linalg.norm(f))
    if norm == 0.0:
        raise ValueError("bandwidth undefined for the zero signal")
    coeffs = gft(spectrum, f)
    significant = np.flatnonzero(np.abs(coeffs) > tol * norm)
    if significant.size == 0:
        raise ValueError("tolerance excludes every frequency component")
    return float(spectrum.eigenvalues[significant[-1]])


def pw_basis(spectrum: Spectrum, omega: float) -> BandlimitedBasis:
    """Basis of the Paley-Wiener space of signals with bandwidth <= omega."""
    r = int(np.count_nonzero(spectrum.eigenvalues <= omega + BOUNDARY_SLACK))
    if r == 0:
        raise ValueError(
            f"omega={omega} lies below the smallest eigenvalue "
            f"{spectrum.eigenvalues[0]}"
        )
    return BandlimitedBasis(
        vectors=spectrum.eigenvectors[:, :r],
        frequencies=spectrum.eigenvalues[:r],
    )


def synthesize(basis: BandlimitedBasis, coeffs) -> np.ndarray:
    """Combine basis columns with the given coefficients into a signal."""
    a = np.asarray(coeffs, dtype=float)
    if a.shape[0] != basis.rank:
        raise ValueError(
            f"expected {basis.rank} coefficients, got {a.shape[0]}"
        )
    return basis.vectors @ a
