"""Shared graphs, independent oracles and the acceptance summary hook."""

from __future__ import annotations

import random
from itertools import combinations

import networkx as nx
import pytest

from graphfactors.graph import Multigraph

ACCEPTANCE_KEY = pytest.StashKey[dict]()


# -- named graphs ------------------------------------------------------------------


def path(n: int) -> Multigraph:
    return Multigraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Multigraph:
    return Multigraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Multigraph:
    return Multigraph.from_edges(n, list(combinations(range(n), 2)))


def star(leaves: int) -> Multigraph:
    return Multigraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Multigraph.from_edges(10, outer + inner + spokes)


def random_multigraph(rng: random.Random, n: int, m: int, loops: bool = True) -> Multigraph:
    """m random edge instances on n vertices; parallels arise naturally, loops optional."""
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v and not loops:
            continue
        edges.append((u, v))
    return Multigraph.from_edges(n, edges)


# -- oracles written without the package's machinery -----------------------------


def to_nx(g: Multigraph) -> nx.MultiGraph:
    out = nx.MultiGraph()
    out.add_nodes_from(range(g.n))
    for u, v, m in g.edges:
        for _ in range(m):
            out.add_edge(u, v)
    return out


def nx_matching_size(g: Multigraph) -> int:
    simple = nx.Graph()
    simple.add_nodes_from(range(g.n))
    simple.add_edges_from((u, v) for u, v, _ in g.edges if u != v)
    return len(nx.max_weight_matching(simple, maxcardinality=True))


def naive_odd_components(g: Multigraph, S) -> int:
    sub = to_nx(g)
    sub.remove_nodes_from(S)
    return sum(1 for c in nx.connected_components(sub) if len(c) % 2)


def naive_tutte(g: Multigraph, f) -> bool:
    for k in range(1, g.n + 1):
        for S in combinations(range(g.n), k):
            if naive_odd_components(g, S) > sum(f[v] for v in S):
                return False
    return True


def naive_factors(g: Multigraph, sets):
    """All edge-instance subsets with deg in sets[v], by plain itertools search."""
    inst = g.instances
    found = []
    for r in range(len(inst) + 1):
        for chosen in combinations(inst, r):
            deg = [0] * g.n
            for u, v, _ in chosen:
                deg[u] += 1
                deg[v] += 1
            if all(d in s for d, s in zip(deg, sets)):
                found.append(chosen)
    return found


def naive_has_factor(g: Multigraph, sets) -> bool:
    inst = g.instances
    for r in range(len(inst) + 1):
        for chosen in combinations(inst, r):
            deg = [0] * g.n
            for u, v, _ in chosen:
                deg[u] += 1
                deg[v] += 1
            if all(d in s for d, s in zip(deg, sets)):
                return True
    return False


# -- acceptance summary -----------------------------------------------------------


@pytest.fixture
def acceptance(request):
    """Record one acceptance line: ``acceptance(number, passed, detail)``."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number: int, passed: bool, detail: str) -> None:
        store[number] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        passed, detail = store[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
