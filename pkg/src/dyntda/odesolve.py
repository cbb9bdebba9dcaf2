"""Trajectory generation for polynomial and linear ODE systems.

Four schemes are provided:

* ``euler_integrate``: forward Euler on ``dx/dt = F(x, t)`` with polynomial ``F``.
* ``linear_exact_solve`` / ``linear_exact_integrate``: the closed-form solution of
  ``dx/dt = A x + b`` with truncated exponential series.
* ``assemble_fd_system`` + ``solve_fd_system``: the forward-difference recurrence
  for ``dx/dt = A(t) x + b(t)`` written as one block-bidiagonal linear system.
* ``chebyshev_spectral_solve``: Chebyshev collocation on Gauss-Lobatto nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla
from numpy.polynomial import chebyshev as C

from .errors import DivergedError, SolverError, SpectralFailureError, TruncationError

KINDS = ("polynomial", "linear_const", "linear_timevar")

SERIES_TOL = 1e-12
SERIES_K_MAX = 64
FD_RESIDUAL_TOL = 1e-10
COLLOCATION_RESIDUAL_TOL = 1e-10

MatrixLike = np.ndarray | Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class OdeSystem:
    """Right-hand side of ``dx/dt = F(x, t)``.

    Polynomial systems store, per component, a coefficient vector and an
    exponent table with one column per state variable plus a final column for
    ``t``. Linear systems store ``A`` and ``b`` either as arrays or as
    callables of ``t``.
    """

    kind: str
    dim: int
    coefficients: tuple[np.ndarray, ...] = ()
    exponents: tuple[np.ndarray, ...] = ()
    A: MatrixLike | None = None
    b: MatrixLike | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind == "polynomial":
            if len(self.coefficients) != self.dim or len(self.exponents) != self.dim:
                raise ValueError("need one monomial list per component")
            for e in self.exponents:
                if e.ndim != 2 or e.shape[1] != self.dim + 1:
                    raise ValueError(f"exponent tables must have {self.dim + 1} columns")
                if np.any(e < 0):
                    raise ValueError("monomial exponents must be nonnegative")

    @classmethod
    def polynomial(cls, terms: Sequence[Sequence[tuple[float, Sequence[int]]]], name: str = "") -> "OdeSystem":
        """Build from ``terms[i] = [(coef, (e_x1, ..., e_xN, e_t)), ...]``."""
        dim = len(terms)
        coefs, exps = [], []
        for comp in terms:
            c = np.array([float(coef) for coef, _ in comp], dtype=float)
            e = np.array([list(ex) for _, ex in comp], dtype=np.int64).reshape(len(comp), dim + 1)
            coefs.append(c)
            exps.append(e)
        return cls("polynomial", dim, tuple(coefs), tuple(exps), name=name)

    @classmethod
    def linear(cls, A: MatrixLike, b: MatrixLike | None = None, dim: int | None = None, name: str = "") -> "OdeSystem":
        """``dx/dt = A x + b``; callables make the system time-varying."""
        timevar = callable(A) or callable(b)
        if not callable(A):
            A = np.atleast_2d(np.asarray(A, dtype=float))
            dim = A.shape[0]
            if A.shape != (dim, dim):
                raise ValueError("A must be square")
            if not np.all(np.isfinite(A)):
                raise ValueError("A must be finite")
        elif dim is None:
            dim = np.atleast_2d(A(0.0)).shape[0]
        if b is None:
            b = np.zeros(dim)
        elif not callable(b):
            b = np.asarray(b, dtype=float).reshape(dim)
        return cls("linear_timevar" if timevar else "linear_const", dim, A=A, b=b, name=name)

    def A_at(self, t: float) -> np.ndarray:
        if self.kind == "polynomial":
            raise TypeError("polynomial systems have no A(t)")
        A = self.A(t) if callable(self.A) else self.A
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if not np.all(np.isfinite(A)):
            raise ValueError(f"A(t) has non-finite entries at t={t}")
        return A

    def b_at(self, t: float) -> np.ndarray:
        b = self.b(t) if callable(self.b) else self.b
        return np.asarray(b, dtype=float).reshape(self.dim)

    def rhs(self, x: np.ndarray, t: float) -> np.ndarray:
        if self.kind != "polynomial":
            return self.A_at(t) @ x + self.b_at(t)
        z = np.append(x, t)
        out = np.empty(self.dim)
        for i, (c, e) in enumerate(zip(self.coefficients, self.exponents)):
            out[i] = c @ np.prod(z ** e, axis=1) if len(c) else 0.0
        return out


@dataclass(frozen=True)
class TimeGrid:
    t_end: float
    n_steps: int

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def h(self) -> float:
        return self.t_end / self.n_steps

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.h


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    source: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.atleast_2d(np.asarray(self.states))
        if times.ndim != 1 or len(times) < 2:
            raise ValueError("a trajectory needs at least two samples")
        if states.shape[0] != len(times):
            raise ValueError("one state per time stamp required")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def subsample(self, m: int) -> "Trajectory":
        """Uniformly spaced subset of ``m`` samples, endpoints included."""
        if not 2 <= m <= len(self):
            raise ValueError(f"cannot take {m} samples from {len(self)}")
        idx = np.round(np.linspace(0, len(self) - 1, m)).astype(int)
        return Trajectory(self.times[idx], self.states[idx], self.source)


# -- forward Euler -----------------------------------------------------------

def euler_integrate(sys: OdeSystem, x0, grid: TimeGrid) -> Trajectory:
    """Forward Euler: ``x[j+1] = x[j] + h F(x[j], t_j)``.

    Intended for polynomial systems; linear systems are accepted as well.
    Raises DivergedError at the first non-finite state.
    """
    x = np.asarray(x0, dtype=float).reshape(sys.dim)
    if not np.all(np.isfinite(x)):
        raise DivergedError(0, "initial state is not finite")
    h = grid.h
    t = grid.nodes
    states = np.empty((grid.n_steps + 1, sys.dim))
    states[0] = x
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(grid.n_steps):
            x = x + h * sys.rhs(x, t[j])
            if not np.all(np.isfinite(x)):
                raise DivergedError(j + 1)
            states[j + 1] = x
    return Trajectory(t, states, "euler")


# -- truncated exponential series ---------------------------------------------

def truncated_exp(A, k: int):
    """``sum_{j=0}^k A^j / j!``; scalars in, scalar out."""
    if k < 0:
        raise ValueError("k must be >= 0")
    scalar = np.ndim(A) == 0
    A = np.atleast_2d(np.asarray(A, dtype=float))
    term = np.eye(A.shape[0])
    total = term.copy()
    for j in range(1, k + 1):
        term = term @ A / j
        total += term
    return float(total[0, 0]) if scalar else total


def truncated_phi1(A, k: int):
    """``sum_{j=1}^k A^(j-1) / j!``, the series for ``(exp(A) - I) A^-1``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    scalar = np.ndim(A) == 0
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    total = np.zeros((n, n))
    if k >= 1:
        term = np.eye(n)
        total += term
        for j in range(2, k + 1):
            term = term @ A / j
            total += term
    return float(total[0, 0]) if scalar else total


def series_order(norm: float, tol: float = SERIES_TOL, k_max: int = SERIES_K_MAX) -> int:
    """Smallest k with ``norm^(k+1) / (k+1)! < tol``."""
    bound = norm  # k = 0
    for k in range(k_max + 1):
        if bound < tol:
            return k
        bound = bound * norm / (k + 2)
    raise TruncationError(norm ** (k_max + 1) / math.factorial(k_max + 1), k_max)


def linear_exact_solve(A, b, x0, t: float, k: int | None = None, tol: float = SERIES_TOL) -> np.ndarray:
    """``x(t) = exp(At) x0 + t phi1(At) b`` for constant ``A``, ``b``.

    The phi1 form needs no inverse of ``A``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    x0 = np.asarray(x0, dtype=float).reshape(A.shape[0])
    b = np.zeros_like(x0) if b is None else np.asarray(b, dtype=float).reshape(A.shape[0])
    At = A * t
    if k is None:
        # the phi1 tail after k terms is |At|^k/(k+1)!, one order behind exp
        k = series_order(np.linalg.norm(At, 2), tol) + 1
    return truncated_exp(At, k) @ x0 + t * (truncated_phi1(At, k) @ b)


def linear_exact_integrate(sys: OdeSystem, x0, grid: TimeGrid, tol: float = SERIES_TOL) -> Trajectory:
    """Step the exact solution across a uniform grid with one propagator pair."""
    if sys.kind != "linear_const":
        raise TypeError("exact stepping needs a constant-coefficient linear system")
    A, b = sys.A_at(0.0), sys.b_at(0.0)
    Ah = A * grid.h
    k = series_order(np.linalg.norm(Ah, 2), tol) + 1
    E, P = truncated_exp(Ah, k), truncated_phi1(Ah, k)
    drift = grid.h * (P @ b)
    states = np.empty((grid.n_steps + 1, sys.dim))
    states[0] = np.asarray(x0, dtype=float).reshape(sys.dim)
    for j in range(grid.n_steps):
        states[j + 1] = E @ states[j] + drift
    return Trajectory(grid.nodes, states, "linear_exact")


# -- forward-difference linear system -------------------------------------------

@dataclass(frozen=True, eq=False)
class FdSystem:
    L: sps.csr_matrix
    rhs: np.ndarray
    times: np.ndarray
    dim: int


def assemble_fd_system(sys: OdeSystem, x0, grid: TimeGrid) -> FdSystem:
    """Stack ``x_{i+1} - (I + h A(t_i)) x_i = h b(t_i)`` under ``x_0 = x0``."""
    if sys.kind == "polynomial":
        raise TypeError("the difference system needs a linear ODE")
    n, h = sys.dim, grid.h
    t = grid.nodes
    size = (grid.n_steps + 1) * n
    rows, cols, vals = [np.arange(size)], [np.arange(size)], [np.ones(size)]
    rhs = np.empty(size)
    rhs[:n] = np.asarray(x0, dtype=float).reshape(n)
    ri, ci = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    for i in range(grid.n_steps):
        block = -(np.eye(n) + h * sys.A_at(t[i]))
        rows.append((i + 1) * n + ri.ravel())
        cols.append(i * n + ci.ravel())
        vals.append(block.ravel())
        rhs[(i + 1) * n:(i + 2) * n] = h * sys.b_at(t[i])
    L = sps.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    ).tocsr()
    L.eliminate_zeros()
    return FdSystem(L, rhs, t, n)


def _condest(L) -> float:
    try:
        lu = spla.splu(L.tocsc())
        inv = spla.LinearOperator(L.shape, matvec=lu.solve, rmatvec=lambda v: lu.solve(v, trans="T"))
        return float(spla.onenormest(L) * spla.onenormest(inv))
    except RuntimeError:
        return float("inf")


def solve_fd_system(fd: FdSystem) -> Trajectory:
    """Solve the stacked system and unstack it into a trajectory."""
    with np.errstate(all="ignore"):
        sol = spla.spsolve(fd.L.tocsc(), fd.rhs)
    residual = np.linalg.norm(fd.L @ sol - fd.rhs)
    scale = np.linalg.norm(fd.rhs)
    if not (np.all(np.isfinite(sol)) and residual <= FD_RESIDUAL_TOL * scale):
        raise SolverError(f"difference system residual {residual:.3e}", _condest(fd.L))
    return Trajectory(fd.times, sol.reshape(-1, fd.dim), "fd")


# -- Chebyshev collocation ------------------------------------------------------

def lobatto_nodes(n: int) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto points on [-1, 1], ascending."""
    return -np.cos(np.pi * np.arange(n) / (n - 1))


@dataclass(frozen=True, eq=False)
class ChebyshevSolution:
    coefficients: np.ndarray  # (n_nodes, N); row k multiplies T_k
    t_end: float
    nodes: np.ndarray
    trajectory: Trajectory
    residual: float = field(default=0.0)

    def __call__(self, t) -> np.ndarray:
        s = 2.0 * np.asarray(t, dtype=float) / self.t_end - 1.0
        return C.chebval(s, self.coefficients).T


def chebyshev_spectral_solve(sys: OdeSystem, x0, t_end: float, n_nodes: int, times=None) -> ChebyshevSolution:
    """Collocate ``x(t) = sum_k c_k T_k(2t/t_end - 1)`` on Lobatto nodes.

    The initial condition replaces the equation at ``t = 0``. States are
    reconstructed at ``times`` (default: the collocation nodes).
    """
    if sys.kind == "polynomial":
        raise TypeError("spectral collocation is implemented for linear ODEs")
    if n_nodes < 2:
        raise ValueError("need at least two collocation nodes")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    N = sys.dim
    s = lobatto_nodes(n_nodes)
    t_nodes = (s + 1.0) * t_end / 2.0
    t_nodes[0], t_nodes[-1] = 0.0, t_end
    V = C.chebvander(s, n_nodes - 1)
    dV = np.empty_like(V)
    for k in range(n_nodes):
        dV[:, k] = C.chebval(s, C.chebder(np.eye(n_nodes)[k]))
    dV *= 2.0 / t_end
    eye = np.eye(N)

    M = np.empty((n_nodes * N, n_nodes * N))
    rhs = np.empty(n_nodes * N)
    M[:N] = np.kron(V[0], eye)
    rhs[:N] = np.asarray(x0, dtype=float).reshape(N)
    for j in range(1, n_nodes):
        rows = slice(j * N, (j + 1) * N)
        M[rows] = np.kron(dV[j], eye) - np.kron(V[j], sys.A_at(t_nodes[j]))
        rhs[rows] = sys.b_at(t_nodes[j])
    try:
        c = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SpectralFailureError(f"singular collocation matrix: {exc}") from exc
    residual = float(np.linalg.norm(M @ c - rhs) / max(1.0, np.linalg.norm(rhs)))
    if not np.isfinite(residual) or residual > COLLOCATION_RESIDUAL_TOL:
        raise SpectralFailureError(f"collocation residual {residual:.3e} exceeds {COLLOCATION_RESIDUAL_TOL}")
    coefficients = c.reshape(n_nodes, N)

    sample = t_nodes if times is None else np.asarray(times, dtype=float)
    states = C.chebval(2.0 * sample / t_end - 1.0, coefficients).T
    return ChebyshevSolution(coefficients, t_end, t_nodes, Trajectory(sample, states, "chebyshev"), residual)
