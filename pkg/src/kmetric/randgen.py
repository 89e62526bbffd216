"""Seeded random instances for the verification suites.

Two space sources, both fully determined by a random.Random instance:
Erdos-Renyi graphs conditioned on connectivity (integer metrics), and
shortest-path closures of randomly weighted complete graphs (rational
metrics whose distances are dense enough for truncation to bite).
"""

from __future__ import annotations

import random
import warnings
from fractions import Fraction

from .graphs import Graph, build_graph, shortest_path_metric
from .spaces import FiniteMetricSpace, TwoPointSpaceWarning, build_space


def _connected(n: int, edges: list[tuple[int, int]]) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def random_connected_graph(n: int, rng: random.Random, edge_prob: float | None = None) -> Graph:
    """Erdos-Renyi G(n, p) resampled until connected."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    p = edge_prob
    attempts = 0
    while True:
        attempts += 1
        prob = p if p is not None else rng.uniform(0.25, 0.6)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < prob]
        if _connected(n, edges):
            break
        if attempts % 50 == 0 and p is None:
            prob = min(0.9, prob + 0.1)
    labels = [f"g{i}" for i in range(n)]
    return build_graph(labels, [(labels[u], labels[v]) for u, v in edges])


def random_bipartite_connected_graph(n: int, rng: random.Random) -> Graph:
    """Connected bipartite graph: random bipartition, edges only across."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    while True:
        left_size = rng.randint(1, n - 1)
        sides = [0] * left_size + [1] * (n - left_size)
        rng.shuffle(sides)
        prob = rng.uniform(0.4, 0.8)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if sides[u] != sides[v] and rng.random() < prob
        ]
        if _connected(n, edges):
            break
    labels = [f"g{i}" for i in range(n)]
    return build_graph(labels, [(labels[u], labels[v]) for u, v in edges])


def random_graph_metric(n: int, rng: random.Random) -> FiniteMetricSpace:
    return shortest_path_metric(random_connected_graph(n, rng))


def random_rational_metric(n: int, rng: random.Random, max_weight: int = 8) -> FiniteMetricSpace:
    """Shortest-path closure of a complete graph with random rational weights."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    d = [[Fraction(0)] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            w = Fraction(rng.randint(1, max_weight), rng.randint(1, 3))
            d[u][v] = d[v][u] = w
    for mid in range(n):
        for u in range(n):
            dum = d[u][mid]
            for v in range(n):
                detour = dum + d[mid][v]
                if detour < d[u][v]:
                    d[u][v] = detour
    labels = [f"x{i}" for i in range(n)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TwoPointSpaceWarning)
        return build_space(labels, d)


def random_space(n: int, rng: random.Random) -> FiniteMetricSpace:
    """Alternate between the two space sources."""
    if rng.random() < 0.5:
        return random_graph_metric(n, rng)
    return random_rational_metric(n, rng)
