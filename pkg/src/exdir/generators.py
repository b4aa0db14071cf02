"""Seed-deterministic test graph generators."""

from __future__ import annotations

import random

from .errors import InputError
from .graph import DiGraph


def bidirected_clique(n, seed=0):
    return DiGraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def directed_cycle(n, seed=0):
    return DiGraph(n, [(i, (i + 1) % n) for i in range(n)])


def dag_path(n, seed=0):
    return DiGraph(n, [(i, i + 1) for i in range(n - 1)])


def random_dregular(n, d, seed=0, bidirected=True):
    """Union of random derangements p, edge v -> p(v) for each.

    Directed: d derangements, so out- and in-degree are both d.
    Bidirected: d/2 derangements, each edge also added reversed, so every
    vertex has out- and in-degree d.  Parallel edges may occur.
    """
    if n < 2:
        raise InputError("random-dregular needs n >= 2")
    rng = random.Random(seed)
    k = d // 2 if bidirected else d
    if bidirected and d % 2:
        raise InputError("bidirected random-dregular needs an even d")
    edges = []
    for _ in range(k):
        p = list(range(n))
        while True:
            rng.shuffle(p)
            if all(p[v] != v for v in range(n)):
                break
        for v in range(n):
            edges.append((v, p[v]))
            if bidirected:
                edges.append((p[v], v))
    return DiGraph(n, edges)


def two_communities(n, d=4, cross=1, seed=0):
    """Two random bidirected d-regular halves of n // 2 vertices each plus
    `cross` random edges from the first half into the second."""
    half = n // 2
    if half < 3:
        raise InputError("two-communities needs n >= 6")
    rng = random.Random(seed)
    G = DiGraph(2 * half)
    for off, s in ((0, rng.randrange(1 << 30)), (half, rng.randrange(1 << 30))):
        H = random_dregular(half, d, s)
        for a, b in H.edge_list():
            G.add_edge(a + off, b + off)
    for _ in range(cross):
        G.add_edge(rng.randrange(half), half + rng.randrange(half))
    return G


def random_digraph(n, p, seed=0):
    rng = random.Random(seed)
    return DiGraph(n, [(i, j) for i in range(n) for j in range(n)
                       if i != j and rng.random() < p])


GENERATORS = {
    "bidirected-clique": bidirected_clique,
    "random-dregular": random_dregular,
    "two-communities": two_communities,
    "directed-cycle": directed_cycle,
    "dag-path": dag_path,
}
