"""Boundary, Laplacian and Dirac operators of a clique complex.

Boundary matrices are kept as integer sparse matrices so that composition
checks are exact; float conversion happens only where spectra are needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from ..cliquecomplex import CliqueComplex
from ..errors import SimplexRangeError


@dataclass(frozen=True, eq=False)
class BoundaryOperator:
    """Signed incidence matrix of ``d_r``: rows ``S_{r-1}``, columns ``S_r``."""

    r: int
    matrix: sps.csc_matrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True, eq=False)
class Laplacian:
    r: int
    matrix: sps.csr_matrix

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """Block matrix over ``S_{r-1} + S_r + S_{r+1}``::

        [[0,      d_r,       0      ],
         [d_r^T,  0,         d_{r+1}],
         [0,      d_{r+1}^T, 0      ]]
    """

    r: int
    matrix: sps.csr_matrix
    sizes: tuple[int, int, int]

    def block_slices(self) -> tuple[slice, slice, slice]:
        a, b, c = self.sizes
        return slice(0, a), slice(a, a + b), slice(a + b, a + b + c)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _level(K: CliqueComplex, r: int):
    try:
        return K.level(r)
    except IndexError as exc:
        raise SimplexRangeError(str(exc)) from None


def boundary_matrix(K: CliqueComplex, r: int) -> BoundaryOperator:
    """``d_r [v_0..v_r] = sum_i (-1)^i [v_0..^v_i..v_r]`` as an integer matrix.

    ``r = 0`` and ``r`` past the top of a full complex give zero maps.
    """
    if r < 0:
        raise SimplexRangeError("boundary dimension must be >= 0")
    cols = _level(K, r)
    rows = _level(K, r - 1)
    if r == 0 or not cols:
        return BoundaryOperator(r, sps.csc_matrix((len(rows), len(cols)), dtype=np.int64))
    index = {s: k for k, s in enumerate(rows)}
    ncol = len(cols)
    row_ind = np.empty((ncol, r + 1), dtype=np.int64)
    for j, s in enumerate(cols):
        for i in range(r + 1):
            row_ind[j, i] = index[s[:i] + s[i + 1:]]
    signs = np.tile((-1) ** np.arange(r + 1), ncol).astype(np.int64)
    col_ind = np.repeat(np.arange(ncol), r + 1)
    D = sps.csc_matrix((signs, (row_ind.ravel(), col_ind)), shape=(len(rows), ncol))
    D.sort_indices()
    return BoundaryOperator(r, D)


def laplacian(K: CliqueComplex, r: int) -> Laplacian:
    """``L_r = d_{r+1} d_{r+1}^T + d_r^T d_r`` (float)."""
    down = boundary_matrix(K, r).matrix
    up = boundary_matrix(K, r + 1).matrix
    L = (up @ up.T + down.T @ down).astype(float).tocsr()
    return Laplacian(r, L)


def assemble_dirac(K: CliqueComplex, r: int) -> DiracOperator:
    lower = boundary_matrix(K, r).matrix
    upper = boundary_matrix(K, r + 1).matrix
    a, b, c = lower.shape[0], lower.shape[1], upper.shape[1]
    B = sps.bmat(
        [
            [sps.csr_matrix((a, a)), lower, sps.csr_matrix((a, c))],
            [lower.T, sps.csr_matrix((b, b)), upper],
            [sps.csr_matrix((c, a)), upper.T, sps.csr_matrix((c, c))],
        ],
        format="csr",
    ).astype(float)
    return DiracOperator(r, B, (a, b, c))
