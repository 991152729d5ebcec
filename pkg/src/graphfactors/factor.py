"""H-factors: gadget reduction to perfect matching, plus-top branching, brute force."""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .degrees import DEFAULT_CAP, DegreeSet, Form, HAssignment, Infeasible, truncate
from .errors import (
    CapExceeded,
    ForeignEdgeError,
    GuardError,
    NotPerfectMatching,
    UnsupportedDegreeSet,
)
from .graph import EdgeInstance, Multigraph
from .matching import Matching, has_perfect_matching

BRUTE_FORCE_MAX_EDGES = 16


def branch_cap() -> int:
    return int(os.environ.get("GF_BRANCH_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class FactorCertificate:
    """A spanning subgraph given by its edge instances, with the degrees it induces."""

    edges: tuple[EdgeInstance, ...]
    degrees: tuple[int, ...]

    @classmethod
    def from_edges(cls, g: Multigraph, edges: Sequence[EdgeInstance]) -> FactorCertificate:
        return cls(tuple(sorted(tuple(e) for e in edges)), factor_degrees(g.n, edges))

    def to_json(self, h: HAssignment | None = None) -> dict:
        doc = {"edges": [list(e) for e in self.edges], "degrees": list(self.degrees)}
        if h is not None:
            doc["assignment"] = h.display()
        return doc


def factor_degrees(n: int, edges: Sequence[EdgeInstance]) -> tuple[int, ...]:
    deg = [0] * n
    for u, v, _ in edges:
        deg[u] += 1
        deg[v] += 1
    return tuple(deg)


def verify_factor(g: Multigraph, h: HAssignment, cert: FactorCertificate) -> bool:
    """True iff every recomputed degree lies in its set and the recorded degrees agree."""
    seen = set()
    for e in cert.edges:
        if not g.has_instance(e) or tuple(e) in seen:
            raise ForeignEdgeError(f"edge instance {tuple(e)} is not available in the graph")
        seen.add(tuple(e))
    deg = factor_degrees(g.n, cert.edges)
    if tuple(cert.degrees) != deg or len(h) != g.n:
        return False
    return all(d in s for d, s in zip(deg, h.sets))


# -- gadget -----------------------------------------------------------------------


@dataclass(frozen=True)
class GadgetGraph:
    """Auxiliary simple graph whose perfect matchings are the factors of G.

    ``slots[i]`` is the pair of slot nodes standing for edge instance ``i`` of
    the host graph; ``slot_nodes[v]`` and ``core_nodes[v]`` are the node sets
    A(v) and B(v), and ``core_pairs[v]`` the core-core edges inside B(v).
    """

    host: Multigraph
    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    slots: tuple[tuple[int, int], ...]
    slot_nodes: tuple[tuple[int, ...], ...]
    core_nodes: tuple[tuple[int, ...], ...]
    core_pairs: tuple[tuple[tuple[int, int], ...], ...]
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def as_graph(self) -> Multigraph:
        return Multigraph(self.num_nodes, self.edges)


def _interval_bounds(d: DegreeSet, v: int) -> tuple[int, int]:
    if d.form is not Form.PARITY_INTERVAL:
        raise UnsupportedDegreeSet(
            f"vertex {v}: gadget needs a parity interval, got {d.display()}"
        )
    return d.params


def build_gadget(g: Multigraph, h: HAssignment) -> GadgetGraph | Infeasible:
    t = truncate(h, g)
    if isinstance(t, Infeasible):
        return t
    bounds = [_interval_bounds(d, v) for v, d in enumerate(t.sets)]
    lo = np.array([b[0] for b in bounds], dtype=np.int64)
    hi = np.array([b[1] for b in bounds], dtype=np.int64)
    eu, ev = g.instance_arrays
    nn, ea, eb, slot_u, slot_v, slot_start, core_start = _kernels.gadget_arrays(
        g.n, eu, ev, lo, hi
    )
    deg = g.degrees
    return GadgetGraph(
        host=g,
        num_nodes=int(nn),
        edges=tuple(zip(ea.tolist(), eb.tolist())),
        slots=tuple(zip(slot_u.tolist(), slot_v.tolist())),
        slot_nodes=tuple(
            tuple(range(int(slot_start[v]), int(slot_start[v]) + deg[v])) for v in range(g.n)
        ),
        core_nodes=tuple(
            tuple(range(int(core_start[v]), int(core_start[v]) + deg[v] - int(lo[v])))
            for v in range(g.n)
        ),
        core_pairs=tuple(
            tuple(
                (int(core_start[v]) + 2 * j, int(core_start[v]) + 2 * j + 1)
                for j in range((int(hi[v]) - int(lo[v])) // 2)
            )
            for v in range(g.n)
        ),
        lo=tuple(lo.tolist()),
        hi=tuple(hi.tolist()),
    )


def decode_matching(gg: GadgetGraph, m: Matching) -> FactorCertificate:
    """Original edges whose two slot nodes are matched to each other."""
    mate = m.mate()
    if len(mate) != gg.num_nodes:
        raise NotPerfectMatching(f"matching covers {len(mate)} of {gg.num_nodes} gadget nodes")
    host = gg.host
    chosen = [e for e, (a, b) in zip(host.instances, gg.slots) if mate.get(a) == b]
    return FactorCertificate.from_edges(host, chosen)


# -- solver -----------------------------------------------------------------------


@dataclass(frozen=True)
class FactorResult:
    """Outcome of :func:`solve_h_factor`.

    ``reason`` is ``None`` on success, otherwise ``"infeasible-truncation"``
    (``vertex`` names where the set emptied) or ``"no-perfect-matching"``
    after all ``branches`` were tried.  ``branch`` is the winning branch index.
    """

    certificate: FactorCertificate | None
    reason: str | None = None
    vertex: int | None = None
    branches: int = 0
    branch: int | None = None


@lru_cache(maxsize=None)
def _plan(masks: tuple[int, ...]):
    """Split truncated sets into fixed intervals and plus-top branch points."""
    lo, hi, plus = [], [], []
    for v, mask in enumerate(masks):
        d = DegreeSet(mask)
        form = d.form
        if form is Form.PARITY_INTERVAL:
            a, b = d.params
        elif form is Form.PLUS_TOP:
            a, b, top = d.params
            plus.append((v, a, b, top))
        else:
            raise UnsupportedDegreeSet(
                f"vertex {v}: {d.display()} is neither a parity interval nor plus-top"
            )
        lo.append(a)
        hi.append(b)
    return tuple(lo), tuple(hi), tuple(plus)


def _solve_branch(g: Multigraph, lo: tuple[int, ...], hi: tuple[int, ...]):
    memo = g.derived.setdefault("branch", {})
    key = (lo, hi)
    if key in memo:
        return memo[key]
    eu, ev = g.instance_arrays
    found, chosen = _kernels.solve_parity(
        g.n, eu, ev, np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64)
    )
    cert = None
    if found:
        inst = g.instances
        cert = FactorCertificate.from_edges(g, [inst[i] for i in np.flatnonzero(chosen)])
    memo[key] = cert
    return cert


def solve_h_factor(g: Multigraph, h: HAssignment, cap: int | None = None) -> FactorResult:
    """Decide whether ``g`` has an ``h``-factor.

    Each set is first cut to ``0..deg(v)``.  Plus-top sets ``odd[a..b]+{b+1}``
    are split into the branches ``odd[a..b]`` and ``{b+1}``; branches run in
    binary-counter order (bit j belongs to the j-th plus-top vertex, 0 = odd
    part) and each one is a gadget perfect-matching question.  The first
    success wins.
    """
    if len(h) != g.n:
        raise ValueError(f"assignment has {len(h)} sets for {g.n} vertices")
    cap = branch_cap() if cap is None else cap
    masks = []
    for v, (d, deg) in enumerate(zip(h.sets, g.degrees)):
        mask = d.mask & ((2 << deg) - 1)
        if not mask:
            return FactorResult(None, "infeasible-truncation", v)
        masks.append(mask)
    key = tuple(masks)
    lo, hi, plus = _plan(key)
    n_branches = 1 << len(plus)
    if n_branches > cap:
        raise CapExceeded("plus-top branching", n_branches, cap)
    memo = g.derived.setdefault("factor", {})
    if key in memo:
        return memo[key]
    result = FactorResult(None, "no-perfect-matching", branches=n_branches)
    for b in range(n_branches):
        blo, bhi = list(lo), list(hi)
        for j, (v, _, _, top) in enumerate(plus):
            if b >> j & 1:
                blo[v] = bhi[v] = top
        cert = _solve_branch(g, tuple(blo), tuple(bhi))
        if cert is not None:
            result = FactorResult(cert, branches=b + 1, branch=b)
            break
    memo[key] = result
    return result


def find_h_factor(g: Multigraph, h: HAssignment, cap: int | None = None) -> FactorCertificate | None:
    return solve_h_factor(g, h, cap).certificate


# -- brute force ------------------------------------------------------------------


def _subset_table(g: Multigraph):
    table = g.derived.get("subsets")
    if table is None:
        m = g.total_multiplicity
        inc = np.zeros((m, g.n), dtype=np.int64)
        for i, (u, v, _) in enumerate(g.instances):
            inc[i, u] += 1
            inc[i, v] += 1
        subsets = np.arange(1 << m, dtype=np.int64)
        bits = (subsets[:, None] >> np.arange(m, dtype=np.int64)) & 1
        degs = bits @ inc
        table = np.unique(degs, axis=0, return_index=True)
        g.derived["subsets"] = table
    return table


def _brute_guard(g: Multigraph) -> None:
    if g.total_multiplicity > BRUTE_FORCE_MAX_EDGES:
        raise GuardError(
            f"brute-force factor search limited to {BRUTE_FORCE_MAX_EDGES} edges, "
            f"got {g.total_multiplicity}"
        )


def brute_force_exists(g: Multigraph, hs: Sequence[HAssignment]) -> np.ndarray:
    """Existence answers of :func:`brute_force_h_factor` for many assignments at once."""
    _brute_guard(g)
    if not hs:
        return np.zeros(0, dtype=bool)
    for h in hs:
        if len(h) != g.n:
            raise ValueError(f"assignment has {len(h)} sets for {g.n} vertices")
    rows, _ = _subset_table(g)
    # at most 16 edges, so truncated masks and shifts fit in int64
    limits = [(2 << deg) - 1 for deg in g.degrees]
    allowed = np.array(
        [[d.mask & lim for d, lim in zip(h.sets, limits)] for h in hs], dtype=np.int64
    ).reshape(len(hs), g.n)
    hit = ((allowed[:, None, :] >> rows[None, :, :]) & 1).all(axis=2)
    return hit.any(axis=1)


def brute_force_h_factor(g: Multigraph, h: HAssignment) -> FactorCertificate | None:
    """Scan every edge sub-multiset; return the first factor by subset bitmask.

    Bit ``i`` of the bitmask selects edge instance ``i`` in canonical order.
    Works for arbitrary (explicit) degree sets.
    """
    _brute_guard(g)
    if len(h) != g.n:
        raise ValueError(f"assignment has {len(h)} sets for {g.n} vertices")
    masks = [d.mask & ((2 << deg) - 1) for d, deg in zip(h.sets, g.degrees)]
    if not all(masks):
        return None
    rows, first = _subset_table(g)
    allowed = np.array(masks, dtype=np.int64)
    ok = ((allowed[None, :] >> rows) & 1).all(axis=1)
    if not ok.any():
        return None
    subset = int(first[ok].min())
    inst = g.instances
    return FactorCertificate.from_edges(
        g, [inst[i] for i in range(len(inst)) if subset >> i & 1]
    )
