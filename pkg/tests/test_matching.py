from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, cycle, naive_odd_components, nx_matching_size, path, petersen, random_multigraph, star
from graphfactors.errors import GuardError
from graphfactors.graph import Multigraph
from graphfactors.matching import brute_force_max_matching, has_perfect_matching, max_matching
from graphfactors.theorems import enumerate_connected_graphs


def assert_valid(g: Multigraph, m) -> None:
    used = [v for e in m.edges for v in e[:2]]
    assert len(used) == len(set(used))
    for e in m.edges:
        assert e[0] != e[1] and g.has_instance(e)


def has_augmenting_path(g: Multigraph, m) -> bool:
    """Depth-first search over simple alternating paths between exposed vertices."""
    adj = {v: set() for v in range(g.n)}
    for u, v, _ in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    mate = m.mate()
    exposed = [v for v in range(g.n) if v not in mate]

    def extend(v, visited, want_matched):
        for w in adj[v]:
            if w in visited:
                continue
            is_matched_edge = mate.get(v) == w
            if is_matched_edge != want_matched:
                continue
            if not want_matched and w not in mate:
                return True
            if extend(w, visited | {w}, not want_matched):
                return True
        return False

    return any(extend(s, {s}, False) for s in exposed)


# -- examples ---------------------------------------------------------------------


def test_k4_size_two():
    m = max_matching(complete(4))
    assert m.size == 2
    assert_valid(complete(4), m)


def test_p3_size_one():
    assert max_matching(path(3)).size == 1


def test_petersen_size_five():
    g = petersen()
    assert brute_force_max_matching(g).size == 5
    assert max_matching(g).size == 5
    assert has_perfect_matching(g) is not None


def test_perfect_k2():
    assert has_perfect_matching(complete(2)).edges == ((0, 1, 0),)


def test_perfect_star_absent():
    assert has_perfect_matching(star(3)) is None


def test_perfect_c6():
    m = has_perfect_matching(cycle(6))
    assert m.size == 3
    assert_valid(cycle(6), m)


def test_odd_order_has_no_perfect_matching():
    assert has_perfect_matching(complete(5)) is None


def test_brute_force_examples():
    assert brute_force_max_matching(complete(4)).size == 2
    assert brute_force_max_matching(complete(3)).size == 1
    assert brute_force_max_matching(Multigraph.from_edges(2, [(0, 1, 2)])).size == 1


def test_brute_force_guard():
    with pytest.raises(GuardError):
        brute_force_max_matching(complete(7))  # 21 edges


def test_loops_are_ignored():
    g = Multigraph.from_edges(3, [(0, 0, 3), (1, 2), (2, 2)])
    assert max_matching(g).edges == ((1, 2, 0),)


def test_parallel_edges_use_lowest_index():
    m = max_matching(Multigraph.from_edges(2, [(0, 1, 4)]))
    assert m.edges == ((0, 1, 0),)


def test_deterministic():
    g = petersen()
    assert max_matching(g) == max_matching(g)


def test_empty_graphs():
    assert max_matching(Multigraph(0)).size == 0
    assert has_perfect_matching(Multigraph(0)) is not None
    assert max_matching(Multigraph(4)).size == 0


# -- properties -------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.integers(0, 20), st.integers(0, 2**31))
def test_blossom_matches_brute_force(n, m, seed):
    g = random_multigraph(random.Random(seed), n, m)
    result = max_matching(g)
    assert_valid(g, result)
    assert result.size == brute_force_max_matching(g).size == nx_matching_size(g)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 14), st.integers(0, 2**31))
def test_no_augmenting_path(n, m, seed):
    g = random_multigraph(random.Random(seed), n, m)
    assert not has_augmenting_path(g, max_matching(g))


def test_augmenting_path_search_finds_one():
    from graphfactors.matching import Matching

    assert has_augmenting_path(path(4), Matching(((1, 2, 0),)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 20), st.integers(0, 2**31))
def test_relabel_invariance(n, m, seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, n, m)
    perm = list(range(n))
    rng.shuffle(perm)
    h = Multigraph.from_edges(n, [(perm[u], perm[v], k) for u, v, k in g.edges])
    assert max_matching(g).size == max_matching(h).size


def _tutte_perfect(g: Multigraph) -> bool:
    return all(
        naive_odd_components(g, S) <= len(S)
        for k in range(0, g.n + 1)
        for S in combinations(range(g.n), k)
    )


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tutte_consistency_exhaustive(n):
    for g in enumerate_connected_graphs(n):
        assert (has_perfect_matching(g) is not None) == _tutte_perfect(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 12), st.integers(0, 2**31))
def test_tutte_consistency_disconnected(n, m, seed):
    g = random_multigraph(random.Random(seed), n, m)
    assert (has_perfect_matching(g) is not None) == _tutte_perfect(g)
