"""Shared fixtures: small named complexes and seeded random graphs."""
from itertools import combinations

import numpy as np

from dyntda.cliquecomplex import Graph, enumerate_cliques
from dyntda.quantumsim import OverlapMatrix


def cycle(n):
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n):
    return Graph(n, tuple(combinations(range(n), 2)))


def octahedron():
    # K_{2,2,2}: its clique complex is the boundary of the octahedron, a 2-sphere
    return Graph(6, tuple((i, j) for i, j in combinations(range(6), 2) if j != i + 3))


def two_edges():
    return Graph(4, ((0, 1), (2, 3)))


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    return Graph(n, tuple(e for e in combinations(range(n), 2) if rng.random() < p))


def random_complexes(count=100, n_max=15, r_max=4):
    """``count`` clique complexes, edge probabilities cycling through 0.3, 0.5, 0.7."""
    rng = np.random.default_rng(20240611)
    out = []
    for k in range(count):
        n = int(rng.integers(3, n_max + 1))
        p = (0.3, 0.5, 0.7)[k % 3]
        out.append(enumerate_cliques(random_graph(n, p, int(rng.integers(2**32))), r_max))
    return out


# name -> (graph, known Betti numbers beta_0..beta_2)
NAMED = {
    "C4": (cycle(4), (1, 1, 0)),
    "C6": (cycle(6), (1, 1, 0)),
    "K4": (complete(4), (1, 0, 0)),
    "K5": (complete(5), (1, 0, 0)),
    "octahedron": (octahedron(), (1, 0, 1)),
    "two-edges": (two_edges(), (2, 0, 0)),
    "point": (Graph(1), (1, 0, 0)),
}


def named_complexes(r_max=3):
    return {name: enumerate_cliques(G, r_max) for name, (G, _) in NAMED.items()}


def corpus(r_max=3):
    """Named complexes plus 30 random ones, all fully enumerated."""
    out = list(named_complexes(r_max + 2).values())
    out += random_complexes(30, 10, r_max + 2)
    return [K for K in out if K.full]


def circle_points(m, phase=0.0):
    theta = phase + 2 * np.pi * np.arange(m) / m
    return np.column_stack([np.cos(theta), np.sin(theta)])


def overlap_from_values(values):
    return OverlapMatrix(np.asarray(values, dtype=float), "exact")
