"""Maximum and perfect matchings in general graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GuardError
from .graph import EdgeInstance, Multigraph

BRUTE_FORCE_MAX_EDGES = 20


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint edge instances ``(u, v, k)`` of a host graph."""

    edges: tuple[EdgeInstance, ...]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    def mate(self) -> dict[int, int]:
        out = {}
        for u, v, _ in self.edges:
            out[u] = v
            out[v] = u
        return out

    def to_json(self) -> list[list[int]]:
        return [list(e) for e in self.edges]


def _simple_csr(g: Multigraph) -> tuple[np.ndarray, np.ndarray]:
    # parallel copies collapse to one; loops can never be matched
    pairs = [(u, v) for u, v, _ in g.edges if u != v]
    ea = np.array([p[0] for p in pairs], dtype=np.int64)
    eb = np.array([p[1] for p in pairs], dtype=np.int64)
    return _kernels.csr_from_edges(g.n, ea, eb)


def _run(g: Multigraph, need_perfect: bool) -> tuple[np.ndarray, bool]:
    indptr, indices = _simple_csr(g)
    return _kernels.blossom_matching(g.n, indptr, indices, need_perfect)


def _from_mate(mate: np.ndarray) -> Matching:
    # the lowest multiplicity index stands in for the collapsed parallel class
    return Matching(tuple((u, int(mate[u]), 0) for u in range(mate.size) if mate[u] > u))


def max_matching(g: Multigraph) -> Matching:
    """Maximum-cardinality matching via Edmonds' blossom algorithm."""
    mate, _ = _run(g, need_perfect=False)
    return _from_mate(mate)


def has_perfect_matching(g: Multigraph) -> Matching | None:
    if g.n % 2:
        return None
    mate, ok = _run(g, need_perfect=True)
    if not ok:
        return None
    return _from_mate(mate)


def brute_force_max_matching(g: Multigraph) -> Matching:
    """Exhaustive search over edge instances; test oracle for small graphs."""
    inst = [e for e in g.instances if e[0] != e[1]]
    if g.total_multiplicity > BRUTE_FORCE_MAX_EDGES:
        raise GuardError(
            f"brute-force matching limited to {BRUTE_FORCE_MAX_EDGES} edges, "
            f"got {g.total_multiplicity}"
        )
    best: list[EdgeInstance] = []
    chosen: list[EdgeInstance] = []

    def search(i: int, used: int) -> None:
        nonlocal best
        if len(chosen) + (len(inst) - i) <= len(best):
            return
        if i == len(inst):
            best = list(chosen)
            return
        u, v, _ = inst[i]
        if not used >> u & 1 and not used >> v & 1:
            chosen.append(inst[i])
            search(i + 1, used | 1 << u | 1 << v)
            chosen.pop()
        search(i + 1, used)

    search(0, 0)
    return Matching(tuple(best))
