"""Amplitude encoding and shot-noise overlap estimation.

States are unit vectors ``x / |x|``. Overlaps ``|<a, b>|`` are either computed
exactly or estimated from simulated ancilla measurements of a SWAP test
(``P(0) = (1 + |<a,b>|^2) / 2``) or a Hadamard test (``P(0) = (1 + Re<a,b>) / 2``
and the analogous imaginary-part circuit).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EncodingError
from .odesolve import Trajectory

MODES = ("exact", "swap_test", "hadamard_test")


@dataclass(frozen=True, eq=False)
class EncodedState:
    amplitudes: np.ndarray
    source_norm: float

    @property
    def dim(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Pairwise overlap magnitudes ``d_ij`` in [0, 1].

    ``norms`` holds the norms divided out by the encoding. ``inner`` holds
    signed real inner products of the unit states when the mode can provide
    them (exact and Hadamard test); it is what the euclidean threshold rule
    needs on top of the norms.
    """

    values: np.ndarray
    mode: str = "exact"
    shots: int = 0
    seed: int = 0
    norms: np.ndarray | None = None
    inner: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("overlap matrix must be square")
        if self.mode not in MODES:
            raise ValueError(f"unknown overlap mode {self.mode!r}")
        if not np.array_equal(v, v.T):
            raise ValueError("overlap matrix must be symmetric")
        if np.any(v < 0) or np.any(v > 1):
            raise ValueError("overlaps must lie in [0, 1]")
        object.__setattr__(self, "values", v)
        for name in ("norms", "inner"):
            arr = getattr(self, name)
            if arr is not None:
                object.__setattr__(self, name, np.asarray(arr, dtype=float))

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def permuted(self, perm) -> "OverlapMatrix":
        """Same data with vertices relabelled so new vertex ``k`` is old ``perm[k]``."""
        p = np.asarray(perm)
        ix = np.ix_(p, p)
        return OverlapMatrix(
            self.values[ix], self.mode, self.shots, self.seed,
            None if self.norms is None else self.norms[p],
            None if self.inner is None else self.inner[ix],
        )


def amplitude_encode(x, index: int | None = None) -> EncodedState:
    x = np.asarray(x)
    if x.ndim != 1 or x.size == 0:
        raise EncodingError("state must be a nonempty vector", index)
    norm = float(np.linalg.norm(x))
    if not np.isfinite(norm):
        raise EncodingError("state has non-finite entries", index)
    if norm == 0.0:
        raise EncodingError("zero vector has no amplitude encoding", index)
    return EncodedState(x / norm, norm)


def _check_dims(a: EncodedState, b: EncodedState):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"state dimensions differ: {a.dim} vs {b.dim}")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def exact_overlap(a: EncodedState, b: EncodedState) -> float:
    _check_dims(a, b)
    return min(1.0, float(abs(np.vdot(a.amplitudes, b.amplitudes))))


def _swap(overlap: float, shots: int, rng: np.random.Generator) -> float:
    p = min(1.0, (1.0 + overlap * overlap) / 2.0)
    p_hat = rng.binomial(shots, p) / shots
    return float(np.sqrt(max(0.0, 2.0 * p_hat - 1.0)))


def _hadamard(inner: complex, shots: int, rng: np.random.Generator) -> tuple[float, float]:
    n_re = (shots + 1) // 2
    n_im = shots - n_re
    p_re = float(np.clip((1.0 + inner.real) / 2.0, 0.0, 1.0))
    p_im = float(np.clip((1.0 + inner.imag) / 2.0, 0.0, 1.0))
    re = 2.0 * rng.binomial(n_re, p_re) / n_re - 1.0
    im = 2.0 * rng.binomial(n_im, p_im) / n_im - 1.0
    return min(1.0, float(np.hypot(re, im))), re


def swap_test_estimate(a: EncodedState, b: EncodedState, shots: int, seed=None) -> float:
    """``sqrt(max(0, 2 p_hat - 1))`` from ``shots`` simulated SWAP tests."""
    _check_dims(a, b)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return _swap(exact_overlap(a, b), shots, _rng(seed))


def hadamard_test_estimate(a: EncodedState, b: EncodedState, shots: int, seed=None) -> float:
    """Magnitude of the (Re, Im) estimate; shots are split between the two circuits."""
    _check_dims(a, b)
    if shots < 2:
        raise ValueError("the Hadamard test needs shots >= 2")
    return _hadamard(complex(np.vdot(a.amplitudes, b.amplitudes)), shots, _rng(seed))[0]


def pair_rng(seed: int, i: int, j: int) -> np.random.Generator:
    """Independent stream for the unordered pair (i, j)."""
    i, j = min(i, j), max(i, j)
    return np.random.default_rng(np.random.SeedSequence([seed, i, j]))


def pairwise_overlaps(traj, mode: str = "exact", shots: int = 0, seed: int = 0) -> OverlapMatrix:
    """All pairwise overlaps of the trajectory's encoded states.

    Noisy modes draw each pair from its own stream keyed by ``(seed, i, j)``,
    so the matrix does not depend on evaluation order.
    """
    if mode not in MODES:
        raise ValueError(f"unknown overlap mode {mode!r}")
    states = traj.states if isinstance(traj, Trajectory) else np.atleast_2d(np.asarray(traj))
    M = states.shape[0]
    if M < 2:
        raise ValueError("need at least two states")
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    enc = [amplitude_encode(x, index=k) for k, x in enumerate(states)]
    U = np.stack([e.amplitudes for e in enc])
    norms = np.array([e.source_norm for e in enc])
    G = U.conj() @ U.T
    if mode == "exact":
        values = np.minimum(1.0, np.abs(G))
        values = (values + values.T) / 2.0
        np.fill_diagonal(values, 1.0)
        inner = (G.real + G.real.T) / 2.0
        np.fill_diagonal(inner, 1.0)
        return OverlapMatrix(values, mode, 0, seed, norms, inner)

    if mode == "swap_test" and shots < 1:
        raise ValueError("swap_test needs shots >= 1")
    if mode == "hadamard_test" and shots < 2:
        raise ValueError("hadamard_test needs shots >= 2")
    values = np.eye(M)
    inner = np.eye(M) if mode == "hadamard_test" else None
    exact = np.minimum(1.0, np.abs(G))
    for i in range(M):
        for j in range(i + 1, M):
            rng = pair_rng(seed, i, j)
            if mode == "swap_test":
                values[i, j] = values[j, i] = _swap(exact[i, j], shots, rng)
            else:
                mag, re = _hadamard(complex(G[i, j]), shots, rng)
                values[i, j] = values[j, i] = mag
                inner[i, j] = inner[j, i] = re
    return OverlapMatrix(values, mode, shots, seed, norms, inner)
