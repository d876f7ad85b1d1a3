"""Cutoff frequencies, sampling-set selection, and bandlimited reconstruction."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DisconnectedGraphError, NotUniquenessSetError
from .spectral import Spectrum

RANK_DEFICIENCY_REL = 1e-10
DEFAULT_K = 4
# Above this order the matrix power is computed on L / ||L|| and the root
# rescaled back, limiting the magnitude spread of the powered entries.
RESCALE_POWER = 8


@dataclass(frozen=True)
class SampleSet:
    """An ordered subset of node indices together with its ambient size."""

    members: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ambient size must be >= 1, got {self.n}")
        prev = -1
        for m in self.members:
            if not isinstance(m, int):
                raise ValueError(f"member {m!r} is not an integer index")
            if not 0 <= m < self.n:
                raise ValueError(f"member {m} out of range [0, {self.n})")
            if m <= prev:
                raise ValueError("members must be strictly increasing")
            prev = m

    @classmethod
    def from_indices(cls, indices, n: int) -> "SampleSet":
        members = tuple(sorted(int(i) for i in indices))
        if len(set(members)) != len(members):
            raise ValueError(f"duplicate node indices in {indices!r}")
        return cls(members=members, n=int(n))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_full(self) -> bool:
        return self.size == self.n

    def members_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=int)

    def complement(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[list(self.members)] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True)
class CutoffEstimate:
    """Lower estimate of a sample set's cutoff frequency at power order k."""

    value: float
    k: int


def _as_square_symmetric(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    if np.max(np.abs(L - L.T), initial=0.0) > 1e-8 * max(np.abs(L).max(), 1.0):
        raise ValueError("matrix is not symmetric")
    return L


def _require_connected(L: np.ndarray) -> None:
    """BFS over the off-diagonal sparsity pattern of a Laplacian-like matrix."""
    n = L.shape[0]
    if n == 1:
        return
    pattern = np.abs(L) > 0.0
    np.fill_diagonal(pattern, False)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(pattern[u]):
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(int(v))
    if count != n:
        raise DisconnectedGraphError("graph is disconnected")


def _powered(L: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    """L**k by repeated dense multiplication, with rescaling for large k."""
    if k == 1:
        return L, 1.0
    if k >= RESCALE_POWER:
        scale = float(np.linalg.norm(L, 2))
        if scale == 0.0:
            return np.zeros_like(L), 1.0
        return np.linalg.matrix_power(L / scale, k), scale
    return np.linalg.matrix_power(L, k), 1.0


def _smallest_eigenvalue(M: np.ndarray) -> float:
    if M.shape[0] == 1:
        return float(M[0, 0])
    if M.shape[0] >= 64:
        return float(scipy.linalg.eigvalsh(M, subset_by_index=(0, 0))[0])
    return float(np.linalg.eigvalsh(M)[0])


def omega_estimate(L, sample_set: SampleSet, k: int = DEFAULT_K) -> CutoffEstimate:
    """Cutoff-frequency estimate of a sample set.

    Computes the k-th power of the Laplacian, restricts it to the complement
    of the sample set, and returns the smallest eigenvalue of that principal
    submatrix to the power 1/k. Sampling every node gives ``inf``.

    The estimate is a lower bound on the true cutoff frequency and tightens
    as k grows.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"power order k must be >= 1, got {k}")
    L = _as_square_symmetric(L)
    if sample_set.n != L.shape[0]:
        raise ValueError(
            f"sample set ambient size {sample_set.n} does not match matrix size {L.shape[0]}"
        )
    _require_connected(L)
    comp = sample_set.complement()
    if comp.size == 0:
        return CutoffEstimate(value=math.inf, k=k)
    B, scale = _powered(L, k)
    lam = max(_smallest_eigenvalue(B[np.ix_(comp, comp)]), 0.0)
    return CutoffEstimate(value=float(lam ** (1.0 / k) * scale), k=k)


def exact_cutoff(
    spectrum: Spectrum, sample_set: SampleSet, rel_tol: float = RANK_DEFICIENCY_REL
) -> float:
    """Brute-force cutoff frequency of a sample set.

    Scans r = 1..n and returns the first eigenvalue at which the sample rows
    of the leading r eigenvector columns lose full column rank; that is the
    smallest bandwidth attainable by a nonzero signal vanishing on the set.
    Only the full node set has no such signal, giving ``inf``.

    Intended as an oracle at small n; cost is one SVD per candidate rank.
    """
    if sample_set.n != spectrum.size:
        raise ValueError(
            f"sample set ambient size {sample_set.n} does not match spectrum size {spectrum.size}"
        )
    rows = sample_set.members_array()
    U = spectrum.eigenvectors
    for r in range(1, spectrum.size + 1):
        if rows.size < r:
            return float(spectrum.eigenvalues[r - 1])
        sv = np.linalg.svd(U[np.ix_(rows, np.arange(r))], compute_uv=False)
        if sv[0] == 0.0 or sv[-1] < rel_tol * sv[0]:
            return float(spectrum.eigenvalues[r - 1])
    return math.inf


def greedy_max_cutoff_order(L, m: int, k: int = DEFAULT_K) -> tuple[list[int], CutoffEstimate]:
    """Greedy node-addition order maximizing the cutoff estimate.

    Starting from the empty set, each step adds the node whose inclusion
    maximizes the cutoff estimate of the resulting set, breaking ties by
    lowest node index. Returns the addition order and the final estimate.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"power order k must be >= 1, got {k}")
    L = _as_square_symmetric(L)
    n = L.shape[0]
    m = int(m)
    if not 1 <= m <= n:
        raise ValueError(f"budget must satisfy 1 <= m <= {n}, got {m}")
    _require_connected(L)
    B, scale = _powered(L, k)

    unselected = np.arange(n)
    order: list[int] = []
    last_value = 0.0
    for _ in range(m):
        best_value = -math.inf
        best_pos = -1
        for pos in range(unselected.size):
            comp = np.delete(unselected, pos)
            if comp.size == 0:
                value = math.inf
            else:
                lam = max(_smallest_eigenvalue(B[np.ix_(comp, comp)]), 0.0)
                value = lam ** (1.0 / k) * scale
            if value > best_value:
                best_value = value
                best_pos = pos
        order.append(int(unselected[best_pos]))
        unselected = np.delete(unselected, best_pos)
        last_value = best_value
    return order, CutoffEstimate(value=float(last_value), k=k)


def greedy_select_max_cutoff(L, m: int, k: int = DEFAULT_K) -> tuple[SampleSet, CutoffEstimate]:
    """Greedy sampling set of size m maximizing the cutoff estimate."""
    order, estimate = greedy_max_cutoff_order(L, m, k)
    n = np.asarray(L).shape[0]
    return SampleSet.from_indices(order, n), estimate


def bl_reconstruct(spectrum: Spectrum, sample_set: SampleSet, observed, rank: int) -> np.ndarray:
    """Least-squares bandlimited reconstruction from samples on a subset.

    Fits coefficients over the leading ``rank`` eigenvectors to the observed
    samples and evaluates the fit on every node. Observed positions receive
    the smoothed fit, not the raw inputs. ``observed`` may be a matrix whose
    columns are independent signals.

    Raises
    ------
    NotUniquenessSetError
        If the sample rows of the leading eigenvectors are column-rank
        deficient (smallest singular value below 1e-10 times the largest),
        i.e. the set cannot determine signals of this bandwidth.
    """
    if sample_set.n != spectrum.size:
        raise ValueError(
            f"sample set ambient size {sample_set.n} does not match spectrum size {spectrum.size}"
        )
    rank = int(rank)
    if not 1 <= rank <= spectrum.size:
        raise ValueError(f"rank must satisfy 1 <= rank <= {spectrum.size}, got {rank}")
    f_s = np.asarray(observed, dtype=float)
    if f_s.shape[0] != sample_set.size:
        raise ValueError(
            f"observed {f_s.shape[0]} samples for a set of size {sample_set.size}"
        )
    if sample_set.size < rank:
        raise NotUniquenessSetError(
            f"not a uniqueness set for this bandwidth: {sample_set.size} samples, "
            f"{rank} coefficients"
        )
    A = spectrum.eigenvectors[np.ix_(sample_set.members_array(), np.arange(rank))]
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < RANK_DEFICIENCY_REL * sv[0]:
        raise NotUniquenessSetError("not a uniqueness set for this bandwidth")
    coeffs, *_ = np.linalg.lstsq(A, f_s, rcond=None)
    return spectrum.eigenvectors[:, :rank] @ coeffs
