"""Shared fixtures: the bundled four-node case and random-instance generators.

Random graphs use dyadic edge weights (multiples of 1/16 in [0.5, 2]) so
Laplacian row sums cancel exactly in floating point; that keeps the exactness
assertions honest instead of tolerance-washed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest

from netdiscern import NodeDynamics, assemble_transition, laplacian
from netdiscern.example import (
    example_dynamics,
    example_graph,
    example_modified_graph,
)
from netdiscern.graphs import Graph

DYADIC_WEIGHTS = np.arange(8, 33) / 16.0  # 0.5 .. 2.0, exactly representable


@dataclass(frozen=True)
class DemoCase:
    dyn: NodeDynamics
    graph: Graph
    graph_bar: Graph
    L: np.ndarray
    Lbar: np.ndarray
    phi: object
    phibar: object


@pytest.fixture(scope="session")
def demo() -> DemoCase:
    dyn = example_dynamics()
    g = example_graph()
    gbar = example_modified_graph()
    L = laplacian(g)
    Lbar = laplacian(gbar)
    return DemoCase(
        dyn=dyn,
        graph=g,
        graph_bar=gbar,
        L=L,
        Lbar=Lbar,
        phi=assemble_transition(dyn, L),
        phibar=assemble_transition(dyn, Lbar),
    )


def random_graph(rng: np.random.Generator, node_count: int, p: float = 0.5) -> Graph:
    edges = []
    for i in range(1, node_count + 1):
        for j in range(i + 1, node_count + 1):
            if rng.random() < p:
                edges.append((i, j, float(rng.choice(DYADIC_WEIGHTS))))
    if not edges:
        i, j = sorted(
            int(v) + 1
            for v in rng.choice(node_count, size=2, replace=False)
        )
        edges.append((i, j, float(rng.choice(DYADIC_WEIGHTS))))
    return Graph(node_count, tuple(edges))


def random_single_variation(rng: np.random.Generator, g: Graph) -> Graph:
    """Apply one random single-link change; the result always differs."""
    kinds = ["remove_edge", "reweight_edge", "disconnect_node"]
    if g.absent_pairs():
        kinds.append("add_edge")
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "remove_edge":
        i, j, _ = g.edges[int(rng.integers(len(g.edges)))]
        return g.with_edge_removed(i, j)
    if kind == "add_edge":
        pairs = g.absent_pairs()
        i, j = pairs[int(rng.integers(len(pairs)))]
        return g.with_edge_added(i, j, float(rng.choice(DYADIC_WEIGHTS)))
    if kind == "reweight_edge":
        i, j, w = g.edges[int(rng.integers(len(g.edges)))]
        other = DYADIC_WEIGHTS[DYADIC_WEIGHTS != w]
        return g.with_edge_reweighted(i, j, float(rng.choice(other)))
    touched = sorted({v for i, j, _ in g.edges for v in (i, j)})
    return g.with_node_disconnected(touched[int(rng.integers(len(touched)))])


def random_instance(rng: np.random.Generator):
    """One desk-scale test case: dynamics plus a Laplacian pair differing
    by a single link (N <= 5, n <= 4)."""
    N = int(rng.integers(2, 6))
    n = int(rng.integers(1, 5))
    g = random_graph(rng, N)
    gbar = random_single_variation(rng, g)
    A = rng.uniform(-1.0, 1.0, (n, n))
    B = rng.uniform(-0.6, 0.6, (n, n))
    return NodeDynamics(A, B), laplacian(g), laplacian(gbar)


def component_count(g: Graph) -> int:
    """Union-find count of connected components (independent of any
    spectral machinery)."""
    parent = list(range(g.node_count + 1))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j, _ in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    return len({find(i) for i in range(1, g.node_count + 1)})
