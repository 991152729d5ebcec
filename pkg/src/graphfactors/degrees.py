"""Degree sets, the weight function f, and the assignment families built from them."""

from __future__ import annotations

import enum
import os
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import CapExceeded, FSpecError, IsolatedBlueVertex, NotInFamily, ParseError
from .graph import Multigraph

DEFAULT_CAP = 1 << 20


def family_cap() -> int:
    return int(os.environ.get("GF_FAMILY_CAP", DEFAULT_CAP))


class Form(enum.Enum):
    PARITY_INTERVAL = "parity-interval"
    PLUS_TOP = "plus-top"
    EXPLICIT = "explicit"


class SetClass(enum.Enum):
    PARITY_INTERVAL = "ParityInterval"
    PLUS_TOP = "ParityIntervalPlusTop"
    SINGLETON = "Singleton"
    OTHER = "Other"


@lru_cache(maxsize=None)
def _analyze(mask: int) -> tuple[Form, tuple[int, ...]]:
    elems = tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
    lo, hi = elems[0], elems[-1]
    if elems == tuple(range(lo, hi + 1, 2)):
        return Form.PARITY_INTERVAL, (lo, hi)
    if lo % 2 == 1 and hi % 2 == 0 and len(elems) >= 2:
        if elems[:-1] == tuple(range(lo, hi, 2)):
            return Form.PLUS_TOP, (lo, hi - 1, hi)
    return Form.EXPLICIT, elems


@dataclass(frozen=True)
class DegreeSet:
    """A nonempty set of allowed degrees, stored as a bitmask (bit ``k`` = degree ``k``).

    The canonical form (:attr:`form`) is derived from the mask, so any two
    equal sets compare and hash equal however they were built.
    """

    mask: int

    def __post_init__(self):
        if self.mask <= 0:
            raise ValueError("degree sets must be nonempty")

    @classmethod
    def of(cls, elements: Iterable[int]) -> DegreeSet:
        mask = 0
        for d in elements:
            if d < 0:
                raise ValueError(f"negative degree {d}")
            mask |= 1 << d
        return cls(mask)

    @classmethod
    def parity_interval(cls, lo: int, hi: int) -> DegreeSet:
        if lo < 0 or hi < lo or (hi - lo) % 2:
            raise ValueError(f"bad parity interval [{lo}..{hi}]")
        return cls.of(range(lo, hi + 1, 2))

    @classmethod
    def plus_top(cls, lo: int, hi_odd: int) -> DegreeSet:
        if lo % 2 == 0 or hi_odd % 2 == 0 or hi_odd < lo:
            raise ValueError(f"bad plus-top set odd[{lo}..{hi_odd}]")
        return cls.of([*range(lo, hi_odd + 1, 2), hi_odd + 1])

    @classmethod
    def odd_upto(cls, t: int) -> DegreeSet:
        """All odd numbers in ``1..t``."""
        top = t if t % 2 else t - 1
        return cls.parity_interval(1, top)

    @property
    def form(self) -> Form:
        return _analyze(self.mask)[0]

    @property
    def params(self) -> tuple[int, ...]:
        """(lo, hi) for an interval, (lo, hi_odd, top) for plus-top, the elements otherwise."""
        return _analyze(self.mask)[1]

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)

    @property
    def min(self) -> int:
        return (self.mask & -self.mask).bit_length() - 1

    @property
    def max(self) -> int:
        return self.mask.bit_length() - 1

    def __contains__(self, d: int) -> bool:
        return d >= 0 and bool(self.mask >> d & 1)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __le__(self, other: DegreeSet) -> bool:
        return self.mask & ~other.mask == 0

    def restrict(self, bound: int) -> DegreeSet | None:
        """Intersection with ``0..bound``, or None when that is empty."""
        mask = self.mask & ((1 << (bound + 1)) - 1) if bound >= 0 else 0
        return DegreeSet(mask) if mask else None

    def display(self) -> str:
        if self.form is Form.PLUS_TOP:
            lo, hi_odd, top = self.params
            return f"odd[{lo}..{hi_odd}]+{{{top}}}"
        return "{" + ",".join(map(str, self.elements)) + "}"

    __str__ = display

    def __repr__(self) -> str:
        return f"DegreeSet({self.display()})"

    @classmethod
    def parse(cls, text: str) -> DegreeSet:
        s = text.strip()
        m = re.fullmatch(r"odd\[(\d+)\.\.(\d+)\]\+\{(\d+)\}", s)
        try:
            if m:
                lo, hi_odd, top = map(int, m.groups())
                if top != hi_odd + 1:
                    raise ValueError("top must follow the odd range")
                return cls.plus_top(lo, hi_odd)
            m = re.fullmatch(r"odd\[(\d+)\.\.(\d+)\]", s)
            if m:
                lo, hi = map(int, m.groups())
                if lo % 2 == 0:
                    raise ValueError("odd range must start odd")
                return cls.parity_interval(lo, hi if hi % 2 else hi - 1)
            m = re.fullmatch(r"\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}", s)
            if m:
                return cls.of(int(t) for t in m.group(1).split(","))
        except ValueError as exc:
            raise ParseError(f"bad degree set {text!r}: {exc}") from None
        raise ParseError(f"bad degree set {text!r}")


def classify(d: DegreeSet) -> SetClass:
    if d.mask & (d.mask - 1) == 0:
        return SetClass.SINGLETON
    form = d.form
    if form is Form.PARITY_INTERVAL:
        return SetClass.PARITY_INTERVAL
    if form is Form.PLUS_TOP:
        return SetClass.PLUS_TOP
    return SetClass.OTHER


@lru_cache(maxsize=None)
def j_set(m: int) -> DegreeSet:
    """``J_m``: the odd numbers up to m, plus m itself when m is even."""
    if m < 1:
        raise ValueError(f"J_m needs m >= 1, got {m}")
    if m % 2:
        return DegreeSet.parity_interval(1, m)
    return DegreeSet.plus_top(1, m - 1)


@lru_cache(maxsize=None)
def j_plus_set(m: int) -> DegreeSet:
    """All odd numbers up to m + 1."""
    if m < 1:
        raise ValueError(f"J+_m needs m >= 1, got {m}")
    return DegreeSet.parity_interval(1, m if m % 2 else m + 1)


# -- f ----------------------------------------------------------------------------


@dataclass(frozen=True)
class FSpec:
    """The vertex weight function f with values in the positive integers."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        for i, x in enumerate(vals):
            if isinstance(x, bool) or not isinstance(x, int):
                raise FSpecError(f"f({i}) = {x!r} is not an integer")
            if x < 1:
                raise FSpecError(f"f({i}) = {x} is not positive")
        object.__setattr__(self, "values", vals)

    @classmethod
    def const(cls, value: int, n: int) -> FSpec:
        return cls((value,) * n)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> FSpec:
        """``"1,2,3"`` or ``"const:2"`` (the latter needs ``n``)."""
        s = text.strip()
        if s.startswith("const:"):
            if n is None:
                raise FSpecError("const: f-spec needs the vertex count")
            try:
                value = int(s[len("const:"):])
            except ValueError:
                raise FSpecError(f"bad f-spec {text!r}") from None
            return cls.const(value, n)
        try:
            vals = tuple(int(t) for t in s.split(","))
        except ValueError:
            raise FSpecError(f"bad f-spec {text!r}") from None
        if n is not None and len(vals) != n:
            raise FSpecError(f"f-spec has {len(vals)} values for {n} vertices")
        return cls(vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def subset_sum(self, S: Iterable[int]) -> int:
        return sum(self.values[v] for v in S)

    @cached_property
    def odd_valued(self) -> bool:
        return all(x % 2 for x in self.values)

    @cached_property
    def even_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.values) if x % 2 == 0)

    def display(self) -> str:
        return ",".join(map(str, self.values))


# -- assignments ----------------------------------------------------------------------


class Provenance(enum.Enum):
    JF = "JF"
    JFPLUS = "JFPLUS"
    ODD_ALL = "ODD_ALL"
    OTHER = "OTHER"


@dataclass(frozen=True)
class HAssignment:
    """A degree set per vertex, each tagged with where it came from."""

    sets: tuple[DegreeSet, ...]
    tags: tuple[Provenance, ...] = ()

    def __post_init__(self):
        sets = tuple(self.sets)
        tags = tuple(self.tags) if self.tags else (Provenance.OTHER,) * len(sets)
        if len(tags) != len(sets):
            raise ValueError("one provenance tag per vertex")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "tags", tags)

    @classmethod
    def uniform(cls, d: DegreeSet, n: int) -> HAssignment:
        return cls((d,) * n)

    @classmethod
    def parse(cls, text: str) -> HAssignment:
        """Semicolon-separated degree sets, e.g. ``"{1};odd[1..3]+{4};{1,3}"``."""
        return cls(tuple(DegreeSet.parse(t) for t in text.split(";")))

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, v: int) -> DegreeSet:
        return self.sets[v]

    def __iter__(self):
        return iter(self.sets)

    def extended(self, d: DegreeSet, tag: Provenance = Provenance.OTHER) -> HAssignment:
        return HAssignment(self.sets + (d,), self.tags + (tag,))

    def display(self) -> list[str]:
        return [d.display() for d in self.sets]


def jf_assignment(f: FSpec) -> HAssignment:
    return HAssignment(tuple(j_set(x) for x in f), (Provenance.JF,) * len(f))


def jf_plus_assignment(f: FSpec) -> HAssignment:
    return HAssignment(
        tuple(j_plus_set(x) for x in f),
        tuple(Provenance.JFPLUS if x % 2 == 0 else Provenance.JF for x in f),
    )


def family_size(f: FSpec) -> int:
    return 1 << len(f.even_vertices)


def family_member(f: FSpec, index: int) -> HAssignment:
    """Member ``index`` of ``H_f``: bit ``j`` set means the ``j``-th even-valued
    vertex (by id) takes ``J_f^+`` instead of ``J_f``."""
    evens = f.even_vertices
    if not 0 <= index < 1 << len(evens):
        raise IndexError(f"family index {index} out of range 0..{(1 << len(evens)) - 1}")
    sets = [j_set(x) for x in f]
    tags = [Provenance.JF] * len(f)
    for j, v in enumerate(evens):
        if index >> j & 1:
            sets[v] = j_plus_set(f[v])
            tags[v] = Provenance.JFPLUS
    return HAssignment(tuple(sets), tuple(tags))


def family_index(f: FSpec, plus_vertices: Iterable[int]) -> int:
    """Index of the member putting ``J_f^+`` exactly on ``plus_vertices`` (odd ones ignored)."""
    plus = set(plus_vertices)
    return sum(1 << j for j, v in enumerate(f.even_vertices) if v in plus)


@lru_cache(maxsize=512)
def _family(f: FSpec) -> tuple[HAssignment, ...]:
    return tuple(family_member(f, i) for i in range(family_size(f)))


def h_family(f: FSpec, cap: int | None = None) -> tuple[HAssignment, ...]:
    """Every H with ``H(v)`` in ``{J_f(v), J_f^+(v)}``, in binary-counter order."""
    cap = family_cap() if cap is None else cap
    size = family_size(f)
    if size > cap:
        raise CapExceeded("H_f family", size, cap)
    return _family(f)


def colored_h(
    f: FSpec, coloring: Sequence[str], g: Multigraph, headroom: int = 0
) -> HAssignment:
    """R vertices get ``J_f(v)``; B vertices get the odd numbers up to ``deg(v) + headroom``.

    The unbounded odd set is cut at the largest degree a factor could use;
    ``headroom=1`` keeps it valid for pendant extensions ``G^x``.
    """
    if len(coloring) != g.n or len(f) != g.n:
        raise ValueError("coloring and f must have one entry per vertex")
    sets, tags = [], []
    for v, c in enumerate(coloring):
        if c == "R":
            sets.append(j_set(f[v]))
            tags.append(Provenance.JF)
        elif c == "B":
            bound = g.degrees[v] + headroom
            if bound < 1:
                raise IsolatedBlueVertex(v)
            sets.append(DegreeSet.odd_upto(bound))
            tags.append(Provenance.ODD_ALL)
        else:
            raise ValueError(f"colour {c!r} is not B or R")
    return HAssignment(tuple(sets), tuple(tags))


@dataclass(frozen=True)
class Infeasible:
    """Truncation emptied the set at ``vertex``."""

    vertex: int


def truncate(h: HAssignment, g: Multigraph) -> HAssignment | Infeasible:
    if len(h) != g.n:
        raise ValueError(f"assignment has {len(h)} sets for {g.n} vertices")
    out = []
    for v, (d, deg) in enumerate(zip(h.sets, g.degrees)):
        r = d.restrict(deg)
        if r is None:
            return Infeasible(v)
        out.append(r)
    return HAssignment(tuple(out), h.tags)


def check_family_member(f: FSpec, h: HAssignment) -> None:
    """Raise NotInFamily unless ``h`` is in ``H_f`` with consistent tags."""
    if len(h) != len(f):
        raise NotInFamily("assignment and f differ in length")
    for v, (d, tag, x) in enumerate(zip(h.sets, h.tags, f)):
        if tag is Provenance.JF:
            ok = d == j_set(x)
        elif tag is Provenance.JFPLUS:
            ok = d == j_plus_set(x)
        else:
            ok = False
        if not ok:
            raise NotInFamily(f"vertex {v}: {d.display()} tagged {tag.value} is not from H_f")
