"""Sweep driver: every requested theorem on every graph of a stream, aggregated."""

from __future__ import annotations

import json
import random
import re
import time
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice

from .degrees import FSpec, family_cap
from .errors import CapExceeded, GraphFactorError
from .factor import branch_cap
from .graph import Multigraph
from .theorems import (
    CHECKS,
    COLORING_MAX_N,
    ENUMERATION_MAX_N,
    CheckSettings,
    TheoremId,
    applicable,
    enumerate_connected_graphs,
    sample_connected_graphs,
    sample_multigraphs,
)

SOURCES = ("connected", "multigraph")
CHUNK = 256
COUNT_KEYS = ("instances", "left_true", "right_true", "agree", "skipped", "refused")


class ConfigError(GraphFactorError, ValueError):
    pass


def parse_n_values(text: str) -> tuple[int, ...]:
    """``"2..6"``, ``"2,4,6"`` or a mix such as ``"1..3,7"``."""
    out: list[int] = []
    for part in text.replace(" ", "").split(","):
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise ConfigError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        elif re.fullmatch(r"\d+", part):
            out.append(int(part))
        else:
            raise ConfigError(f"bad vertex-count list {text!r}")
    return tuple(sorted(set(out)))


def _split(text: str) -> list[str]:
    return [t for t in re.split(r"[,\s]+", text.strip()) if t]


def pattern_f(pattern: str, g: Multigraph) -> FSpec:
    """``const:k`` for f = k everywhere; ``random:s`` for values in 1..4 seeded by s and the graph."""
    kind, _, arg = pattern.partition(":")
    if kind == "const":
        return FSpec.const(int(arg), g.n)
    rng = random.Random(f"f:{arg}:{g.n}:{g.edges}")
    return FSpec(tuple(rng.randint(1, 4) for _ in range(g.n)))


def _check_pattern(p: str) -> None:
    if not re.fullmatch(r"const:[1-9]\d*|random:-?\d+", p):
        raise ConfigError(f"bad f pattern {p!r}; use const:k or random:seed")


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...] = ()
    patterns: tuple[str, ...] = ("const:1",)
    theorems: tuple[TheoremId, ...] = ()
    seed: int = 0
    samples: tuple[tuple[int, int], ...] = ()
    source: str = "connected"
    multigraph_count: int = 200
    multigraph_extra: int = 2
    multigraph_loops: int = 1
    crosscheck_limit: int = 12
    internal: bool = True
    family_cap: int = field(default_factory=family_cap)
    branch_cap: int = field(default_factory=branch_cap)
    coloring_max_n: int = COLORING_MAX_N
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "theorems", tuple(TheoremId(t) for t in self.theorems))
        self.validate()

    def validate(self) -> None:
        if self.source not in SOURCES:
            raise ConfigError(f"source must be one of {SOURCES}")
        for p in self.patterns:
            _check_pattern(p)
        if TheoremId.CK in self.theorems and self.patterns:
            # CK is skipped on even-valued f; a sweep that could never apply it is an error
            if all(p.startswith("const:") and int(p[6:]) % 2 == 0 for p in self.patterns):
                raise ConfigError("CK needs an odd-valued f; every f pattern is even")
        sampled = dict(self.samples)
        for n in self.n_values:
            if n < 1:
                raise ConfigError("vertex counts start at 1")
            if self.source == "connected" and n not in sampled and n > ENUMERATION_MAX_N:
                raise ConfigError(
                    f"n = {n} exceeds exhaustive enumeration (n <= {ENUMERATION_MAX_N}); "
                    "give a sample count"
                )
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")

    @property
    def settings(self) -> CheckSettings:
        return CheckSettings(
            crosscheck_limit=self.crosscheck_limit,
            internal=self.internal,
            family_cap=self.family_cap,
            branch_cap=self.branch_cap,
            coloring_max_n=self.coloring_max_n,
        )

    @classmethod
    def from_mapping(cls, items: Mapping[str, str], base: SweepConfig | None = None) -> SweepConfig:
        """Build from string key/values (config file lines or CLI flags) over ``base``."""
        kw = {} if base is None else {k: getattr(base, k) for k in cls.__dataclass_fields__}
        try:
            for key, value in items.items():
                key = key.strip().replace("-", "_")
                value = value.strip()
                if key == "n":
                    kw["n_values"] = parse_n_values(value)
                elif key in ("f", "patterns"):
                    kw["patterns"] = tuple(_split(value))
                elif key in ("thm", "theorems"):
                    kw["theorems"] = tuple(TheoremId(t.upper()) for t in _split(value))
                elif key in ("sample", "samples"):
                    pairs = []
                    for tok in _split(value):
                        n, _, count = tok.partition(":")
                        pairs.append((int(n), int(count)))
                    kw["samples"] = tuple(sorted(pairs))
                elif key == "source":
                    kw["source"] = value
                elif key == "multigraphs":
                    kw["multigraph_count"] = int(value)
                elif key == "internal":
                    kw["internal"] = value.lower() in ("1", "true", "yes", "on")
                elif key in (
                    "seed", "multigraph_count", "multigraph_extra", "multigraph_loops",
                    "crosscheck_limit", "family_cap", "branch_cap", "coloring_max_n", "jobs",
                ):
                    kw[key] = int(value)
                else:
                    raise ConfigError(f"unknown sweep setting {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None
        return cls(**kw)

    @classmethod
    def from_text(cls, text: str, base: SweepConfig | None = None) -> SweepConfig:
        """Flat ``key = value`` lines; ``#`` comments."""
        items: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected key = value")
            items[key.strip()] = value
        return cls.from_mapping(items, base)

    def to_json(self) -> dict:
        # jobs is left out: it must not change the report
        return {
            "n": list(self.n_values),
            "patterns": list(self.patterns),
            "theorems": [t.value for t in self.theorems],
            "seed": self.seed,
            "samples": {str(n): c for n, c in self.samples},
            "source": self.source,
            "multigraph_count": self.multigraph_count,
            "multigraph_extra": self.multigraph_extra,
            "multigraph_loops": self.multigraph_loops,
            "crosscheck_limit": self.crosscheck_limit,
            "internal": self.internal,
            "family_cap": self.family_cap,
            "branch_cap": self.branch_cap,
            "coloring_max_n": self.coloring_max_n,
        }


def graph_stream(config: SweepConfig, n: int) -> Iterator[Multigraph]:
    if config.source == "multigraph":
        yield from islice(
            sample_multigraphs(n, config.multigraph_extra, config.multigraph_loops, config.seed),
            config.multigraph_count,
        )
        return
    sampled = dict(config.samples)
    if n in sampled:
        yield from sample_connected_graphs(n, sampled[n], config.seed)
    else:
        yield from enumerate_connected_graphs(n)


@dataclass
class _Partial:
    graphs: int = 0
    counts: dict = field(default_factory=dict)
    checks: Counter = field(default_factory=Counter)
    discrepancies: list = field(default_factory=list)
    refusals: list = field(default_factory=list)

    def merge(self, other: _Partial) -> None:
        self.graphs += other.graphs
        for thm, c in other.counts.items():
            self.counts.setdefault(thm, Counter()).update(c)
        self.checks.update(other.checks)
        self.discrepancies.extend(other.discrepancies)
        self.refusals.extend(other.refusals)


def _process(config: SweepConfig, graphs: Iterable[tuple[int, tuple]]) -> _Partial:
    settings = config.settings
    part = _Partial()
    for thm in config.theorems:
        part.counts[thm.value] = Counter()
    for n, edges in graphs:
        g = Multigraph(n, edges)
        part.graphs += 1
        for pattern in config.patterns:
            f = pattern_f(pattern, g)
            for thm in config.theorems:
                c = part.counts[thm.value]
                if not applicable(thm, g, f):
                    c["skipped"] += 1
                    continue
                try:
                    v = CHECKS[thm](g, f, settings)
                except CapExceeded as exc:
                    c["refused"] += 1
                    part.refusals.append(
                        {
                            "theorem": thm.value,
                            "graph": {"n": g.n, "edges": [list(e) for e in g.edges]},
                            "f": list(f.values),
                            "error": str(exc),
                        }
                    )
                    continue
                c["instances"] += 1
                c["left_true"] += v.left
                c["right_true"] += v.right
                c["agree"] += v.agrees
                part.checks.update(v.checks)
                if not v.ok:
                    part.discrepancies.append({**v.to_json(), "pattern": pattern})
    return part


def _process_unit(unit):
    return _process(*unit)


def _units(config: SweepConfig):
    for n in config.n_values:
        stream = ((g.n, g.edges) for g in graph_stream(config, n))
        while True:
            chunk = list(islice(stream, CHUNK))
            if not chunk:
                break
            yield config, chunk


def _canonical(items: list[dict]) -> list[dict]:
    return sorted(items, key=lambda d: json.dumps(d, sort_keys=True))


@dataclass
class SweepReport:
    config: SweepConfig
    graphs: int
    counts: dict[str, dict[str, int]]
    checks: dict[str, int]
    discrepancies: list[dict]
    refusals: list[dict]
    wall_clock: float = 0.0

    @property
    def clean(self) -> bool:
        return not self.discrepancies and not self.refusals

    def to_json(self, include_timing: bool = False) -> dict:
        doc = {
            "config": self.config.to_json(),
            "graphs": self.graphs,
            "counts": self.counts,
            "checks": self.checks,
            "discrepancies": self.discrepancies,
            "refusals": self.refusals,
            "clean": self.clean,
        }
        if include_timing:
            doc["wall_clock_seconds"] = round(self.wall_clock, 3)
        return doc

    def dumps(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json(include_timing), sort_keys=True, indent=2) + "\n"


def run_sweep(config: SweepConfig) -> SweepReport:
    """Run every configured theorem over every graph; the report is independent of ``jobs``."""
    start = time.perf_counter()
    total = _Partial()
    for thm in config.theorems:
        total.counts[thm.value] = Counter()
    if config.jobs == 1:
        for unit in _units(config):
            total.merge(_process_unit(unit))
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for part in pool.map(_process_unit, _units(config)):
                total.merge(part)
    counts = {
        thm: {k: int(c.get(k, 0)) for k in COUNT_KEYS} for thm, c in sorted(total.counts.items())
    }
    return SweepReport(
        config=config,
        graphs=total.graphs,
        counts=counts,
        checks={k: int(v) for k, v in sorted(total.checks.items())},
        discrepancies=_canonical(total.discrepancies),
        refusals=_canonical(total.refusals),
        wall_clock=time.perf_counter() - start,
    )
