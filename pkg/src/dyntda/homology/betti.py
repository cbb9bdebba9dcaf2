"""Exact Betti numbers over the reals.

Each ``beta_r`` is computed twice: from boundary ranks
(``|S_r| - rank d_r - rank d_{r+1}``) and as the kernel dimension of the
Laplacian. Ranks come from singular values with the usual
``max(shape) * eps * sigma_max`` cutoff; small complexes are additionally
checked with exact integer elimination.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from ..cliquecomplex import CliqueComplex
from ..errors import NumericalRankError, SimplexRangeError
from .chains import boundary_matrix, laplacian

EXACT_CHECK_LIMIT = 200


def _dense(M) -> np.ndarray:
    return M.toarray() if hasattr(M, "toarray") else np.asarray(M)


def numerical_rank(M) -> tuple[int, np.ndarray, float]:
    """Rank, singular values and the cutoff used."""
    A = _dense(M).astype(float)
    if min(A.shape) == 0:
        return 0, np.zeros(0), 0.0
    s = sla.svdvals(A, check_finite=False)
    tol = max(A.shape) * np.finfo(float).eps * (s[0] if len(s) else 0.0)
    return int(np.count_nonzero(s > tol)), s, tol


def rank_exact(M) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [[int(v) for v in row] for row in _dense(M)]
    if not A or not A[0]:
        return 0
    m, n = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(n):
        pivot = next((i for i in range(rank, m) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for i in range(rank + 1, m):
            a = A[i][col]
            row_i, row_r = A[i], A[rank]
            for j in range(col + 1, n):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def laplacian_kernel_dim(L) -> tuple[int, np.ndarray, float]:
    """Kernel dimension of a PSD matrix, its eigenvalues and the cutoff."""
    A = _dense(L).astype(float)
    n = A.shape[0]
    if n == 0:
        return 0, np.zeros(0), 0.0
    w = sla.eigvalsh(A, check_finite=False)
    tol = n * np.finfo(float).eps * max(abs(w[-1]), 1.0)
    return int(np.count_nonzero(w <= tol)), w, tol


def _borderline(values: np.ndarray, tol: float, k: int = 3) -> list[float]:
    if len(values) == 0:
        return []
    order = np.argsort(np.abs(np.log10(np.maximum(np.abs(values), 1e-300)) - np.log10(max(tol, 1e-300))))
    return [float(values[i]) for i in order[:k]]


@dataclass(frozen=True)
class BettiEntry:
    r: int
    betti: int
    s_r: int
    normalized: float
    estimate: float | None = None
    eps: float = 0.0
    eta: float = 0.0
    probes: int = 0

    def to_dict(self) -> dict:
        return {
            "r": self.r, "betti": self.betti, "s_r": self.s_r, "normalized": self.normalized,
            "estimate": self.estimate, "eps": self.eps, "eta": self.eta, "probes": self.probes,
        }


@dataclass(frozen=True)
class BettiReport:
    entries: tuple[BettiEntry, ...]
    ranks: tuple[int, ...] = ()  # rank d_0 .. rank d_{r_max+1}

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(e.betti for e in self.entries)

    @property
    def normalized(self) -> tuple[float, ...]:
        return tuple(e.normalized for e in self.entries)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(e.s_r for e in self.entries)

    def __getitem__(self, r: int) -> BettiEntry:
        return self.entries[r]

    def with_entry(self, entry: BettiEntry) -> "BettiReport":
        entries = list(self.entries)
        entries[entry.r] = entry
        return replace(self, entries=tuple(entries))

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]


def euler_characteristic(counts) -> int:
    return sum((-1) ** r * c for r, c in enumerate(counts))


def default_betti_range(K: CliqueComplex) -> int:
    """Largest r whose Betti number the enumerated levels determine."""
    return K.r_max if K.full else K.r_max - 1


def betti_exact(K: CliqueComplex, r_max: int | None = None, exact_check_limit: int = EXACT_CHECK_LIMIT) -> BettiReport:
    """``beta_0 .. beta_r_max`` by rank formula and by Laplacian kernel, cross-checked."""
    top = default_betti_range(K)
    r_max = top if r_max is None else r_max
    if r_max > top:
        raise SimplexRangeError(f"beta_{r_max} needs S_{r_max + 1}; complex enumerated to r_max={K.r_max}")
    if r_max < 0:
        raise SimplexRangeError("r_max must be >= 0")

    bounds = [boundary_matrix(K, r).matrix for r in range(r_max + 2)]
    ranks, svals = [], []
    for D in bounds:
        rk, s, tol = numerical_rank(D)
        ranks.append(rk)
        svals.append((s, tol))

    total = sum(len(K.level(r)) for r in range(r_max + 2))
    if total <= exact_check_limit:
        for r, D in enumerate(bounds):
            exact = rank_exact(D)
            if exact != ranks[r]:
                s, tol = svals[r]
                raise NumericalRankError(
                    f"rank d_{r}: SVD gives {ranks[r]}, exact elimination gives {exact}", _borderline(s, tol)
                )

    entries = []
    for r in range(r_max + 1):
        s_r = len(K.level(r))
        by_rank = s_r - ranks[r] - ranks[r + 1]
        by_kernel, w, tol = laplacian_kernel_dim(laplacian(K, r).matrix)
        if by_rank != by_kernel:
            raise NumericalRankError(
                f"beta_{r}: rank formula gives {by_rank}, Laplacian kernel gives {by_kernel}",
                _borderline(w, tol) + _borderline(*svals[r]) + _borderline(*svals[r + 1]),
            )
        entries.append(BettiEntry(r, by_rank, s_r, by_rank / s_r if s_r else 0.0))
    return BettiReport(tuple(entries), tuple(ranks))
