"""General graphs (multigraphs with loops) and their text formats."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    EdgeListError,
    Graph6Error,
    Graph6HeaderError,
    Graph6TrailingDataError,
    Graph6TruncatedError,
    InvalidVertexError,
)

# One edge instance: (u, v, k) with u <= v and k the multiplicity index.
EdgeInstance = tuple[int, int, int]

GRAPH6_MAX_N = 62


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices ``0..n-1``.

    ``edges`` holds ``(u, v, mult)`` triples with ``u <= v``, sorted and merged;
    a loop is ``(v, v, mult)``.  Construct with :meth:`from_edges` to get that
    normalisation from arbitrary pair/triple input.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        merged: dict[tuple[int, int], int] = {}
        for e in self.edges:
            if len(e) == 2:
                u, v, mult = e[0], e[1], 1
            else:
                u, v, mult = e
            for x in (u, v):
                if not 0 <= x < self.n:
                    raise InvalidVertexError(x, self.n)
            if mult < 1:
                raise ValueError(f"multiplicity {mult} < 1 on edge ({u}, {v})")
            key = (u, v) if u <= v else (v, u)
            merged[key] = merged.get(key, 0) + mult
        object.__setattr__(
            self, "edges", tuple((u, v, m) for (u, v), m in sorted(merged.items()))
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = ()) -> Multigraph:
        return cls(n, tuple(tuple(e) for e in edges))

    # -- derived quantities (cached; the graph never changes) -------------

    @cached_property
    def instances(self) -> tuple[EdgeInstance, ...]:
        """Edge instances in canonical ``(u, v, k)`` order."""
        return tuple((u, v, k) for u, v, m in self.edges for k in range(m))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v, m in self.edges:
            deg[u] += m
            deg[v] += m
        return tuple(deg)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.degrees[v]

    @property
    def total_multiplicity(self) -> int:
        return len(self.instances)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Neighbour bitmask per vertex; loops are left out."""
        adj = [0] * self.n
        for u, v, _ in self.edges:
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def instance_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        inst = self.instances
        eu = np.fromiter((e[0] for e in inst), dtype=np.int64, count=len(inst))
        ev = np.fromiter((e[1] for e in inst), dtype=np.int64, count=len(inst))
        return eu, ev

    @cached_property
    def is_simple(self) -> bool:
        return all(u != v and m == 1 for u, v, m in self.edges)

    @cached_property
    def is_connected(self) -> bool:
        return self.n <= 1 or len(components(self)) == 1

    @cached_property
    def _multiplicities(self) -> dict[tuple[int, int], int]:
        return {(u, v): m for u, v, m in self.edges}

    def multiplicity(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._multiplicities.get((u, v), 0)

    def has_instance(self, inst: Sequence[int]) -> bool:
        u, v, k = inst
        return 0 <= k < self.multiplicity(u, v)

    def pendant(self, x: int) -> tuple[Multigraph, int]:
        """Cached form of :func:`add_pendant`."""
        self._check_vertex(x)
        cache = self._pendant_cache
        if x not in cache:
            g = Multigraph(self.n + 1, self.edges + ((x, self.n, 1),))
            cache[x] = (g, self.n)
        return cache[x]

    @cached_property
    def _pendant_cache(self) -> dict[int, tuple[Multigraph, int]]:
        return {}

    @cached_property
    def derived(self) -> dict:
        """Scratch cache for quantities other modules compute from this graph."""
        return {}

    def without_vertex(self, x: int) -> Multigraph:
        """Delete ``x`` and its edges; ids above ``x`` shift down by one."""
        self._check_vertex(x)

        def relabel(w: int) -> int:
            return w - 1 if w > x else w

        kept = [(relabel(u), relabel(v), m) for u, v, m in self.edges if x not in (u, v)]
        return Multigraph(self.n - 1, tuple(kept))

    def edge_list_text(self) -> str:
        lines = [str(self.n)]
        lines += [f"{u} {v}" if m == 1 else f"{u} {v} {m}" for u, v, m in self.edges]
        return "\n".join(lines) + "\n"

    def _check_vertex(self, v) -> None:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise InvalidVertexError(v, self.n)


def check_vertex_set(g: Multigraph, vertices: Iterable[int]) -> tuple[int, ...]:
    """Canonical sorted, duplicate-free form of a vertex subset."""
    vs = tuple(sorted(set(vertices)))
    for v in vs:
        g._check_vertex(v)
    return vs


def vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def component_masks(adj: Sequence[int], remaining: int) -> list[int]:
    """Components of the subgraph induced on ``remaining`` as bitmasks,
    ordered by smallest member."""
    comps = []
    while remaining:
        comp = remaining & -remaining
        frontier = comp
        while frontier:
            reach = 0
            while frontier:
                low = frontier & -frontier
                reach |= adj[low.bit_length() - 1]
                frontier ^= low
            frontier = reach & remaining & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    return comps


def components(g: Multigraph) -> list[tuple[int, ...]]:
    """Connected components, each sorted, ordered by minimum vertex id."""
    full = (1 << g.n) - 1
    return [mask_members(c) for c in component_masks(g.adjacency_masks, full)]


def odd_components(g: Multigraph, S: Iterable[int] = ()) -> int:
    """Number of odd components of ``G - S``."""
    return len(odd_component_sets(g, S))


def odd_component_sets(g: Multigraph, S: Iterable[int] = ()) -> list[tuple[int, ...]]:
    removed = vertex_mask(check_vertex_set(g, S))
    remaining = ((1 << g.n) - 1) & ~removed
    return [
        mask_members(c)
        for c in component_masks(g.adjacency_masks, remaining)
        if c.bit_count() % 2 == 1
    ]


def add_pendant(g: Multigraph, x: int) -> tuple[Multigraph, int]:
    """``G^x``: a new vertex ``x' = n`` joined to ``x`` by one edge."""
    return g.pendant(x)


# -- graph6 -------------------------------------------------------------------


def _pair_bits(n: int):
    # upper triangle, column-major: (0,1), (0,2), (1,2), (0,3), ...
    for j in range(1, n):
        for i in range(j):
            yield i, j


def parse_graph6(text: str) -> Multigraph:
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    if not line:
        raise Graph6HeaderError("empty graph6 string")
    n = ord(line[0]) - 63
    if not 0 <= n <= GRAPH6_MAX_N:
        raise Graph6HeaderError(
            f"header byte {line[0]!r} does not encode a size in 0..{GRAPH6_MAX_N}"
        )
    nbits = n * (n - 1) // 2
    nbytes = -(-nbits // 6)
    body = line[1:]
    if len(body) < nbytes:
        raise Graph6TruncatedError(f"expected {nbytes} data bytes, got {len(body)}")
    if len(body) > nbytes:
        raise Graph6TrailingDataError(f"{len(body) - nbytes} bytes after the bit vector")
    bits = []
    for ch in body:
        val = ord(ch) - 63
        if not 0 <= val <= 63:
            raise Graph6Error(f"data byte {ch!r} outside the graph6 range")
        bits.extend((val >> (5 - b)) & 1 for b in range(6))
    edges = [(i, j) for (i, j), bit in zip(_pair_bits(n), bits) if bit]
    return Multigraph.from_edges(n, edges)


def to_graph6(g: Multigraph) -> str:
    if not g.is_simple:
        raise ValueError("graph6 encodes simple graphs only")
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 output supports n <= {GRAPH6_MAX_N}")
    present = {(u, v) for u, v, _ in g.edges}
    bits = [1 if p in present else 0 for p in _pair_bits(g.n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = 2 * val + b
        out.append(chr(63 + val))
    return "".join(out)


# -- edge list ------------------------------------------------------------------


def _int_token(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise EdgeListError(f"line {lineno}: non-integer token {tok!r}") from None


def parse_edge_list(text: str) -> Multigraph:
    """Parse ``n`` followed by lines ``u v`` or ``u v mult``; ``#`` starts a comment."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if n is None:
            if len(tokens) != 1:
                raise EdgeListError(f"line {lineno}: expected the vertex count alone")
            n = _int_token(tokens[0], lineno)
            if n < 0:
                raise EdgeListError(f"line {lineno}: negative vertex count")
            continue
        if len(tokens) not in (2, 3):
            raise EdgeListError(f"line {lineno}: expected 'u v' or 'u v mult'")
        u, v = _int_token(tokens[0], lineno), _int_token(tokens[1], lineno)
        mult = _int_token(tokens[2], lineno) if len(tokens) == 3 else 1
        for x in (u, v):
            if not 0 <= x < n:
                raise EdgeListError(f"line {lineno}: vertex {x} out of range 0..{n - 1}")
        if mult < 1:
            raise EdgeListError(f"line {lineno}: multiplicity {mult} < 1")
        edges.append((u, v, mult))
    if n is None:
        raise EdgeListError("missing vertex count")
    return Multigraph.from_edges(n, edges)


def emit_dot(g: Multigraph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(g.n)]
    for u, v, m in g.edges:
        lines += [f"  {u} -- {v};"] * m
    lines.append("}")
    return "\n".join(lines) + "\n"
