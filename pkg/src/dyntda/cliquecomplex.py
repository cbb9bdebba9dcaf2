"""Threshold graphs over overlap matrices and their clique complexes."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import MetricError
from .quantumsim import OverlapMatrix

METRICS = ("paper_literal", "cosine_dissimilarity", "euclidean")
DEFAULT_R_MAX = 3


@dataclass(frozen=True)
class ThresholdRule:
    """Edge predicate.

    ``paper_literal`` connects ``i, j`` iff ``d_ij <= eps`` (the overlap itself),
    ``cosine_dissimilarity`` iff ``1 - d_ij <= eps`` and ``euclidean`` iff
    ``|x_i - x_j| <= eps`` using the norms removed by the encoding.
    """

    metric: str = "cosine_dissimilarity"
    eps: float = 0.0

    def __post_init__(self):
        if self.metric not in METRICS:
            raise MetricError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if not self.eps >= 0:
            raise MetricError("eps must be >= 0")

    @property
    def monotone(self) -> bool:
        return self.metric != "paper_literal"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = tuple(sorted({(min(i, j), max(i, j)) for i, j in self.edges}))
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not 0 <= i < j < self.n:
                raise ValueError(f"edge ({i}, {j}) out of range for {self.n} vertices")
        object.__setattr__(self, "edges", edges)

    def neighbors(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def pair_distances(D: OverlapMatrix, metric: str) -> np.ndarray:
    """Matrix of the quantity compared against eps under ``metric``."""
    if metric == "paper_literal":
        return D.values
    if metric == "cosine_dissimilarity":
        return 1.0 - D.values
    if metric == "euclidean":
        if D.norms is None or D.inner is None:
            raise MetricError("euclidean metric needs source norms and signed inner products")
        n = D.norms
        sq = n[:, None] ** 2 + n[None, :] ** 2 - 2.0 * np.outer(n, n) * D.inner
        return np.sqrt(np.maximum(sq, 0.0))
    raise MetricError(f"unknown metric {metric!r}")


def build_graph(D: OverlapMatrix, rule: ThresholdRule) -> Graph:
    dist = pair_distances(D, rule.metric)
    i, j = np.nonzero(np.triu(dist <= rule.eps, k=1))
    return Graph(D.size, tuple(zip(i.tolist(), j.tolist())))


def degeneracy_order(G: Graph) -> tuple[list[int], int]:
    """Repeatedly remove a minimum-degree vertex; return the removal order and degeneracy."""
    adj = G.neighbors()
    deg = [len(a) for a in adj]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * G.n
    order, degeneracy = [], 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        degeneracy = max(degeneracy, d)
        for u in adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order, degeneracy


@dataclass(frozen=True)
class GraphStats:
    degeneracy: int
    max_degree: int
    arboricity_bound: int


def graph_stats(G: Graph) -> GraphStats:
    """Degeneracy by peeling. Arboricity is only bounded (by the maximum degree)."""
    max_degree = max((len(a) for a in G.neighbors()), default=0)
    return GraphStats(degeneracy_order(G)[1], max_degree, max_degree)


@dataclass(frozen=True)
class CliqueComplex:
    """Simplex sets ``S_0 .. S_r_max`` of a clique complex.

    Simplices are strictly increasing vertex tuples, each level sorted
    lexicographically. ``full`` records that no clique larger than the
    enumerated dimension exists, i.e. ``S_{r_max+1}`` is empty.
    """

    n: int
    simplices: tuple[tuple[tuple[int, ...], ...], ...]
    full: bool = False

    @property
    def r_max(self) -> int:
        return len(self.simplices) - 1

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def dimension(self) -> int:
        return max((r for r, s in enumerate(self.simplices) if s), default=-1)

    def level(self, r: int) -> tuple[tuple[int, ...], ...]:
        """``S_r``; empty beyond the top when the complex is full."""
        if r < 0:
            return ()
        if r <= self.r_max:
            return self.simplices[r]
        if self.full:
            return ()
        raise IndexError(f"S_{r} was not enumerated (r_max={self.r_max})")

    def index(self, r: int) -> dict[tuple[int, ...], int]:
        return {s: k for k, s in enumerate(self.level(r))}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.level(1)] if self.r_max >= 1 else [],
            "simplices": {str(r): [list(s) for s in S] for r, S in enumerate(self.simplices)},
        }

    @classmethod
    def from_simplices(cls, n: int, maximal, r_max: int | None = None) -> "CliqueComplex":
        """Complex generated by ``maximal`` simplices; all faces are added."""
        from itertools import combinations

        levels: dict[int, set] = {}
        top = 0
        for s in maximal:
            s = tuple(sorted(s))
            top = max(top, len(s) - 1)
            for k in range(1, len(s) + 1):
                levels.setdefault(k - 1, set()).update(combinations(s, k))
        levels.setdefault(0, set()).update((v,) for v in range(n))
        r_max = top if r_max is None else r_max
        simplices = tuple(tuple(sorted(levels.get(r, ()))) for r in range(r_max + 1))
        return cls(n, simplices, full=r_max >= top)


def enumerate_cliques(G: Graph, r_max: int = DEFAULT_R_MAX) -> CliqueComplex:
    """All cliques with at most ``r_max + 1`` vertices.

    Vertices are processed in degeneracy order and each clique is grown only
    through neighbours later in that order, so every clique is produced once
    and candidate sets never exceed the degeneracy.
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    adj = G.neighbors()
    order, _ = degeneracy_order(G)
    pos = {v: k for k, v in enumerate(order)}
    later = [{u for u in adj[v] if pos[u] > pos[v]} for v in range(G.n)]
    levels: list[list[tuple[int, ...]]] = [[] for _ in range(r_max + 1)]
    larger = False

    def expand(clique: list[int], cand: set[int]):
        nonlocal larger
        levels[len(clique) - 1].append(tuple(sorted(clique)))
        if len(clique) == r_max + 1:
            larger = larger or bool(cand)
            return
        for u in sorted(cand, key=pos.__getitem__):
            clique.append(u)
            expand(clique, cand & later[u])
            clique.pop()

    for v in order:
        expand([v], later[v])
    return CliqueComplex(G.n, tuple(tuple(sorted(s)) for s in levels), full=not larger)
