"""The Tutte condition o(G - S) <= f(S) and the two proof-direction constructions."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .degrees import FSpec, HAssignment, check_family_member, family_index, family_member
from .errors import GuardError
from .graph import Multigraph, component_masks, mask_members, vertex_mask

TUTTE_MAX_N = 24
TABLE_MAX_N = 16


@dataclass(frozen=True)
class TutteViolation:
    S: tuple[int, ...]
    odd: int
    f_sum: int

    def to_json(self) -> dict:
        return {"S": list(self.S), "odd": self.odd, "fS": self.f_sum}


@dataclass(frozen=True)
class TutteVerdict:
    holds: bool
    violation: TutteViolation | None
    subsets_checked: int

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "violation": self.violation.to_json() if self.violation else None,
            "checked": self.subsets_checked,
        }


def canonical_subsets(n: int) -> Iterator[tuple[int, ...]]:
    """Nonempty subsets of ``0..n-1`` by size, then lexicographically."""
    for k in range(1, n + 1):
        yield from combinations(range(n), k)


@dataclass(frozen=True)
class SubsetTable:
    """Odd components of ``G - S`` for every nonempty S, in canonical order."""

    subsets: tuple[tuple[int, ...], ...]
    masks: tuple[int, ...]
    members: np.ndarray  # (number of subsets, n) 0/1 incidence
    odd: np.ndarray
    odd_components: tuple[tuple[int, ...], ...]  # bitmasks per subset
    comp_members: np.ndarray  # (total odd components, n) 0/1 incidence
    comp_subset: np.ndarray  # subset index owning each row of comp_members

    def f_sums(self, values) -> np.ndarray:
        return self.members @ np.asarray(values, dtype=np.int64)


def subset_table(g: Multigraph) -> SubsetTable:
    if g.n > TABLE_MAX_N:
        raise GuardError(f"subset table limited to n <= {TABLE_MAX_N}, got {g.n}")
    table = g.derived.get("tutte")
    if table is None:
        full = (1 << g.n) - 1
        adj = g.adjacency_masks
        subsets = tuple(canonical_subsets(g.n))
        masks = tuple(vertex_mask(S) for S in subsets)
        odd_comps = tuple(
            tuple(c for c in component_masks(adj, full & ~m) if c.bit_count() % 2)
            for m in masks
        )
        members = np.zeros((len(subsets), g.n), dtype=np.int64)
        for i, S in enumerate(subsets):
            members[i, list(S)] = 1
        odd = np.fromiter((len(c) for c in odd_comps), dtype=np.int64, count=len(subsets))
        flat = [(i, c) for i, comps in enumerate(odd_comps) for c in comps]
        comp_members = np.zeros((len(flat), g.n), dtype=np.int64)
        for r, (_, c) in enumerate(flat):
            comp_members[r, list(mask_members(c))] = 1
        comp_subset = np.array([i for i, _ in flat], dtype=np.int64)
        table = SubsetTable(subsets, masks, members, odd, odd_comps, comp_members, comp_subset)
        g.derived["tutte"] = table
    return table


def _records(g: Multigraph) -> Iterator[tuple[tuple[int, ...], int]]:
    full = (1 << g.n) - 1
    adj = g.adjacency_masks
    for S in canonical_subsets(g.n):
        rest = full & ~vertex_mask(S)
        yield S, sum(1 for c in component_masks(adj, rest) if c.bit_count() % 2)


def _guard(g: Multigraph, f: FSpec) -> None:
    if g.n > TUTTE_MAX_N:
        raise GuardError(f"exhaustive Tutte check limited to n <= {TUTTE_MAX_N}, got {g.n}")
    if len(f) != g.n:
        raise ValueError(f"f has {len(f)} values for {g.n} vertices")


def check_tutte(g: Multigraph, f: FSpec, *, use_table: bool | None = None) -> TutteVerdict:
    """Check ``o(G - S) <= f(S)`` over every nonempty S.

    The reported violation is the first in (size, lexicographic) order and
    ``subsets_checked`` counts subsets up to and including it.
    """
    _guard(g, f)
    if use_table is None:
        use_table = g.n <= TABLE_MAX_N
    if use_table:
        table = subset_table(g)
        fs = table.f_sums(f.values)
        bad = table.odd > fs
        if not bad.any():
            return TutteVerdict(True, None, len(table.subsets))
        i = int(np.argmax(bad))
        return TutteVerdict(
            False, TutteViolation(table.subsets[i], int(table.odd[i]), int(fs[i])), i + 1
        )
    checked = 0
    for S, odd in _records(g):
        checked += 1
        fs = f.subset_sum(S)
        if odd > fs:
            return TutteVerdict(False, TutteViolation(S, odd, fs), checked)
    return TutteVerdict(True, None, checked)


def worst_deficiency(
    g: Multigraph, f: FSpec, *, use_table: bool | None = None
) -> tuple[tuple[int, ...], int]:
    """Maximise ``o(G - S) - f(S)`` over nonempty S; ties go to the canonical first."""
    _guard(g, f)
    if g.n == 0:
        raise ValueError("the empty graph has no nonempty vertex set")
    if use_table is None:
        use_table = g.n <= TABLE_MAX_N
    if use_table:
        table = subset_table(g)
        gap = table.odd - table.f_sums(f.values)
        i = int(np.argmax(gap))
        return table.subsets[i], int(gap[i])
    best_S, best = None, None
    for S, odd in _records(g):
        gap = odd - f.subset_sum(S)
        if best is None or gap > best:
            best_S, best = S, gap
    return best_S, best


def sufficiency_h(f: FSpec, S: Iterable[int]) -> HAssignment:
    """``J_f`` on S and ``J_f^+`` off S."""
    S = set(S)
    if not S:
        raise ValueError("S must be nonempty")
    for v in S:
        if not 0 <= v < len(f):
            raise ValueError(f"vertex {v} out of range 0..{len(f) - 1}")
    return family_member(f, family_index(f, (v for v in range(len(f)) if v not in S)))


def necessity_fprime(f: FSpec, h: HAssignment) -> FSpec:
    """``f'(v) = max H(v)``: f(v) + 1 where an even f(v) took ``J_f^+``, f(v) otherwise."""
    check_family_member(f, h)
    return FSpec(tuple(d.max for d in h.sets))

