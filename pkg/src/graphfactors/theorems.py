"""Empirical checks of the factor characterisations over small graphs.

Each ``check_*`` function evaluates both sides of one equivalence on a single
(graph, f) instance and runs the internal consistency checks that go with
it.  The sweep module drives them over enumerated or sampled graphs.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .critical import is_h_critical
from .degrees import (
    DEFAULT_CAP,
    FSpec,
    HAssignment,
    colored_h,
    h_family,
    jf_assignment,
)
from .errors import CapExceeded, GuardError, IsolatedBlueVertex
from .factor import BRUTE_FORCE_MAX_EDGES, brute_force_exists, find_h_factor, verify_factor
from .graph import Multigraph, component_masks
from .tutte import check_tutte, necessity_fprime, subset_table

ENUMERATION_MAX_N = 7
COLORING_MAX_N = 12


class TheoremId(str, enum.Enum):
    CK = "CK"
    EKY = "EKY"
    LW_EVEN_COLORED = "LW_EVEN_COLORED"
    LW_ODD_COLORED = "LW_ODD_COLORED"
    MAIN_EVEN = "MAIN_EVEN"
    MAIN_ODD = "MAIN_ODD"


# EKY only asserts one direction.
IMPLICATIONS = frozenset({TheoremId.EKY})


# -- graph streams ----------------------------------------------------------------------


def _connected_mask(n: int, pairs, mask: int) -> bool:
    adj = [0] * n
    for k, (i, j) in enumerate(pairs):
        if mask >> k & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return len(component_masks(adj, (1 << n) - 1)) == 1


def _graph_from_mask(n: int, pairs, mask: int) -> Multigraph:
    return Multigraph(n, tuple((i, j, 1) for k, (i, j) in enumerate(pairs) if mask >> k & 1))


def enumerate_connected_graphs(n: int) -> Iterator[Multigraph]:
    """All labelled connected simple graphs on n vertices, in bitmask order.

    Bit k of the mask is the k-th pair of ``combinations(range(n), 2)``.
    """
    if not 1 <= n <= ENUMERATION_MAX_N:
        raise GuardError(f"exhaustive enumeration supports 1 <= n <= {ENUMERATION_MAX_N}")
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        if _connected_mask(n, pairs, mask):
            yield _graph_from_mask(n, pairs, mask)


def count_connected_labeled(n: int) -> int:
    """Number of labelled connected graphs, by the standard inclusion-exclusion recurrence."""
    c = [0, 1]
    for m in range(2, n + 1):
        total = 2 ** comb(m, 2)
        total -= sum(comb(m - 1, k - 1) * c[k] * 2 ** comb(m - k, 2) for k in range(1, m))
        c.append(total)
    return c[n]


def sample_connected_graphs(n: int, count: int, seed: int = 0) -> list[Multigraph]:
    """``count`` distinct labelled connected graphs drawn uniformly, sorted by bitmask."""
    pairs = list(combinations(range(n), 2))
    if n <= 5 and count >= count_connected_labeled(n):
        return list(enumerate_connected_graphs(n))
    rng = random.Random(f"connected:{seed}:{n}")
    seen: set[int] = set()
    found: list[int] = []
    while len(found) < count:
        mask = rng.getrandbits(len(pairs)) if pairs else 0
        if mask in seen:
            continue
        seen.add(mask)
        if _connected_mask(n, pairs, mask):
            found.append(mask)
    return [_graph_from_mask(n, pairs, mask) for mask in sorted(found)]


def sample_multigraphs(
    n: int, extra_edges: int = 0, loops: int = 0, seed: int = 0
) -> Iterator[Multigraph]:
    """Endless reproducible stream of connected multigraphs.

    Each graph is a random spanning tree plus ``extra_edges`` edges (half of
    them, on average, duplicating an edge already present) and ``loops`` loops.
    """
    rng = random.Random(f"multigraph:{seed}:{n}:{extra_edges}:{loops}")
    while True:
        order = list(range(n))
        rng.shuffle(order)
        edges = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
        if n >= 2:
            for _ in range(extra_edges):
                if edges and rng.random() < 0.5:
                    edges.append(rng.choice(edges))
                else:
                    u, v = rng.sample(range(n), 2)
                    edges.append((u, v))
        for _ in range(loops if n else 0):
            v = rng.randrange(n)
            edges.append((v, v))
        yield Multigraph.from_edges(n, edges)


# -- per-instance checks --------------------------------------------------------------


@dataclass(frozen=True)
class CheckSettings:
    crosscheck_limit: int = 12
    internal: bool = True
    family_cap: int = DEFAULT_CAP
    branch_cap: int = DEFAULT_CAP
    coloring_max_n: int = COLORING_MAX_N


class _Probe:
    """Solver wrapper that verifies certificates and cross-checks brute force.

    Results are memoised on the graph, so a certificate is verified and
    cross-checked once per (graph, truncated assignment) however many
    theorems ask for it.
    """

    def __init__(self, settings: CheckSettings):
        self.settings = settings
        self.checks: Counter = Counter()
        self.failures: list[dict] = []

    @property
    def limit(self) -> int:
        return min(self.settings.crosscheck_limit, BRUTE_FORCE_MAX_EDGES)

    @staticmethod
    def _key(g: Multigraph, h: HAssignment) -> tuple[int, ...]:
        limits = g.derived.get("limits")
        if limits is None:
            limits = g.derived["limits"] = tuple((2 << deg) - 1 for deg in g.degrees)
        return tuple(d.mask & lim for d, lim in zip(h.sets, limits))

    def prefetch(self, g: Multigraph, hs) -> None:
        """Compute the oracle answers for a batch of assignments in one pass."""
        if g.total_multiplicity > self.limit:
            return
        oracle = g.derived.setdefault("oracle", {})
        todo = {}
        for h in hs:
            key = self._key(g, h)
            if key not in oracle and key not in todo:
                todo[key] = h
        if todo:
            answers = brute_force_exists(g, list(todo.values()))
            oracle.update(zip(todo, answers.tolist()))

    def find(self, g: Multigraph, h: HAssignment):
        key = self._key(g, h)
        seen = g.derived.setdefault("probed", {})
        entry = seen.get(key)
        if entry is None:
            cert = find_h_factor(g, h, self.settings.branch_cap)
            if cert is not None:
                self.checks["certificates_verified"] += 1
                if not verify_factor(g, h, cert):
                    self.failures.append({"check": "verify", "H": h.display()})
            entry = seen[key] = [cert, False]
        cert = entry[0]
        if not entry[1] and g.total_multiplicity <= self.limit:
            entry[1] = True
            self.checks["crosschecks"] += 1
            self.prefetch(g, (h,))
            oracle = g.derived["oracle"][key]
            if oracle != (cert is not None):
                self.failures.append(
                    {
                        "check": "crosscheck",
                        "graph": _graph_json(g),
                        "H": h.display(),
                        "solver": cert is not None,
                        "oracle": oracle,
                    }
                )
        return cert

    def critical(self, g: Multigraph, h: HAssignment) -> bool:
        return is_h_critical(g, h, fast=True, find=self.find).is_critical


@dataclass
class TheoremVerdict:
    """Both sides of one theorem on one instance, replayable from ``instance()``."""

    theorem: TheoremId
    graph: Multigraph
    f: FSpec
    left: bool
    right: bool
    witness: dict | None = None
    failures: list[dict] = field(default_factory=list)
    checks: Counter = field(default_factory=Counter)

    @property
    def agrees(self) -> bool:
        if self.theorem in IMPLICATIONS:
            return self.right or not self.left
        return self.left == self.right

    @property
    def ok(self) -> bool:
        return self.agrees and not self.failures

    def instance(self) -> dict:
        return {"graph": _graph_json(self.graph), "f": list(self.f.values), "witness": self.witness}

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem.value,
            **self.instance(),
            "left": self.left,
            "right": self.right,
            "agrees": self.agrees,
            "failures": self.failures,
        }


def _graph_json(g: Multigraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@lru_cache(maxsize=512)
def _fprime_matrix(f: FSpec, cap: int) -> np.ndarray:
    return np.array([necessity_fprime(f, h).values for h in h_family(f, cap)], dtype=np.int64)


def _necessity(g: Multigraph, f: FSpec, settings: CheckSettings, probe: _Probe) -> None:
    # o(G-S) <= f(S) <= f'(S) for every S and every f' derived from H_f
    table = subset_table(g)
    fs = table.f_sums(f.values)
    fprime = table.members @ _fprime_matrix(f, settings.family_cap).T
    ok = (table.odd[:, None] <= fs[:, None]) & (fs[:, None] <= fprime)
    probe.checks["necessity"] += fprime.shape[1]
    bad = ~ok.all(axis=0)
    if bad.any():
        i = int(np.argmax(bad))
        probe.failures.append({"check": "necessity", "family_index": i})


def _sufficiency(g: Multigraph, f: FSpec, certs: list, probe: _Probe) -> None:
    # every odd component of G-S sends an odd number of F-edges into S, and the cuts fit under f(S)
    table = subset_table(g)
    members = table.members
    fs = table.f_sums(f.values)
    evens = list(f.even_vertices)
    # the member of H_f taking J_f on S and J_f^+ elsewhere
    idx = (1 - members[:, evens]) @ (1 << np.arange(len(evens), dtype=np.int64))
    adj = np.zeros((len(certs), g.n, g.n), dtype=np.int64)
    deg = np.zeros((len(certs), g.n), dtype=np.int64)
    for c, cert in enumerate(certs):
        for u, v, _ in cert.edges:
            if u != v:
                adj[c, u, v] += 1
                adj[c, v, u] += 1
        deg[c] = cert.degrees
    ks = table.comp_subset
    cuts = np.einsum("kn,knm,km->k", table.comp_members, adj[idx[ks]], members[ks])
    cut_total = np.bincount(ks, weights=cuts, minlength=len(table.subsets)).astype(np.int64)
    s_deg = (members * deg[idx]).sum(axis=1)
    probe.checks["sufficiency"] += len(table.subsets)
    uncut = np.zeros(len(table.subsets), dtype=bool)
    uncut[ks[cuts == 0]] = True
    # all degrees in C are odd and |C| is odd, so the cut into S has odd size
    even_cut = np.zeros(len(table.subsets), dtype=bool)
    even_cut[ks[cuts % 2 == 0]] = True
    chain = (table.odd <= cut_total) & (cut_total <= s_deg) & (s_deg <= fs)
    bad = uncut | even_cut | ~chain
    if bad.any():
        i = int(np.argmax(bad))
        if uncut[i]:
            reason = "odd component without an F-edge into S"
        elif even_cut[i]:
            reason = "odd component with an even cut into S"
        else:
            reason = "cut count chain broken"
        probe.failures.append({"check": "sufficiency", "S": list(table.subsets[i]), "reason": reason})


def _verdict(theorem, g, f, left, right, witness, probe) -> TheoremVerdict:
    return TheoremVerdict(theorem, g, f, left, right, witness, probe.failures, probe.checks)


def check_main_even(g: Multigraph, f: FSpec, settings: CheckSettings | None = None) -> TheoremVerdict:
    """Tutte condition versus an H-factor for every H in ``H_f`` (connected, even order)."""
    settings = settings or CheckSettings()
    _require(g.is_connected and g.n % 2 == 0, "MAIN_EVEN needs a connected graph of even order")
    probe = _Probe(settings)
    left = check_tutte(g, f).holds
    family = h_family(f, settings.family_cap)
    probe.prefetch(g, family)
    certs, witness = [], None
    for i, h in enumerate(family):
        cert = probe.find(g, h)
        if cert is None:
            witness = {"family_index": i, "H": h.display()}
            break
        certs.append(cert)
    right = witness is None
    if settings.internal:
        if left:
            _necessity(g, f, settings, probe)
        if right and g.n:
            _sufficiency(g, f, certs, probe)
    return _verdict(TheoremId.MAIN_EVEN, g, f, left, right, witness, probe)


def _odd_mask_only(d) -> bool:
    return not any(x % 2 == 0 for x in d.elements)


def check_main_odd(g: Multigraph, f: FSpec, settings: CheckSettings | None = None) -> TheoremVerdict:
    """Tutte condition versus factor-or-critical for every H in ``H_f`` (connected, odd order)."""
    settings = settings or CheckSettings()
    _require(g.is_connected and g.n % 2 == 1, "MAIN_ODD needs a connected graph of odd order")
    probe = _Probe(settings)
    left = check_tutte(g, f).holds
    witness = None
    family = h_family(f, settings.family_cap)
    probe.prefetch(g, family)
    for i, h in enumerate(family):
        cert = probe.find(g, h)
        if cert is not None:
            if settings.internal and all(_odd_mask_only(d) for d in h.sets):
                # odd order with only odd degrees contradicts the handshake lemma
                probe.failures.append({"check": "parity", "family_index": i})
            continue
        if not probe.critical(g, h):
            witness = {"family_index": i, "H": h.display()}
            break
    return _verdict(TheoremId.MAIN_ODD, g, f, left, witness is None, witness, probe)


def check_ck(g: Multigraph, f: FSpec, settings: CheckSettings | None = None) -> TheoremVerdict:
    """Tutte condition versus a ``J_f``-factor, for odd-valued f."""
    settings = settings or CheckSettings()
    _require(g.is_connected and g.n % 2 == 0, "CK needs a connected graph of even order")
    _require(f.odd_valued, "CK needs an odd-valued f")
    probe = _Probe(settings)
    family = h_family(f, settings.family_cap)
    if len(family) != 1 or family[0].sets != jf_assignment(f).sets:
        probe.failures.append({"check": "family_size", "size": len(family)})
    left = check_tutte(g, f).holds
    right = probe.find(g, jf_assignment(f)) is not None
    return _verdict(TheoremId.CK, g, f, left, right, None, probe)


def check_eky(g: Multigraph, f: FSpec, settings: CheckSettings | None = None) -> TheoremVerdict:
    """Tutte condition implies a ``J_f``-factor (simple, connected, even order)."""
    settings = settings or CheckSettings()
    _require(
        g.is_simple and g.is_connected and g.n % 2 == 0,
        "EKY needs a simple connected graph of even order",
    )
    probe = _Probe(settings)
    left = check_tutte(g, f).holds
    right = probe.find(g, jf_assignment(f)) is not None
    return _verdict(TheoremId.EKY, g, f, left, right, None, probe)


def colorings(n: int) -> Iterator[str]:
    """All B/R strings of length n; vertex v is B iff bit v of the counter is set."""
    for c in range(1 << n):
        yield "".join("B" if c >> v & 1 else "R" for v in range(n))


def _coloring_guard(g: Multigraph, settings: CheckSettings) -> None:
    if g.n > settings.coloring_max_n:
        raise CapExceeded("coloring sweep", 1 << g.n, 1 << settings.coloring_max_n)


def _colored_assignments(g: Multigraph, f: FSpec, headroom: int):
    out = []
    for col in colorings(g.n):
        try:
            out.append((col, colored_h(f, col, g, headroom)))
        except IsolatedBlueVertex:
            out.append((col, None))
    return out


def check_colored_even(
    g: Multigraph, f: FSpec, settings: CheckSettings | None = None
) -> TheoremVerdict:
    """Tutte condition versus an H-factor for every 2-colouring (connected, even order)."""
    settings = settings or CheckSettings()
    _require(g.is_connected and g.n % 2 == 0, "LW_EVEN_COLORED needs a connected graph of even order")
    _coloring_guard(g, settings)
    probe = _Probe(settings)
    left = check_tutte(g, f).holds
    witness = None
    assignments = _colored_assignments(g, f, 0)
    probe.prefetch(g, [h for _, h in assignments if h is not None])
    for col, h in assignments:
        if h is None:
            witness = {"coloring": col, "reason": "isolated B vertex"}
            break
        if probe.find(g, h) is None:
            witness = {"coloring": col}
            break
    return _verdict(TheoremId.LW_EVEN_COLORED, g, f, left, witness is None, witness, probe)


def check_colored_general(
    g: Multigraph, f: FSpec, settings: CheckSettings | None = None
) -> TheoremVerdict:
    """Tutte condition versus factor-or-critical for every 2-colouring (connected, any order)."""
    settings = settings or CheckSettings()
    _require(g.is_connected, "LW_ODD_COLORED needs a connected graph")
    _coloring_guard(g, settings)
    probe = _Probe(settings)
    left = check_tutte(g, f).holds
    witness = None
    # one unit of headroom so the odd sets stay exact on every G^x
    assignments = _colored_assignments(g, f, 1)
    probe.prefetch(g, [h for _, h in assignments if h is not None])
    for col, h in assignments:
        if h is None:
            witness = {"coloring": col, "reason": "isolated B vertex"}
            break
        if probe.find(g, h) is None and not probe.critical(g, h):
            witness = {"coloring": col}
            break
    return _verdict(TheoremId.LW_ODD_COLORED, g, f, left, witness is None, witness, probe)


CHECKS = {
    TheoremId.CK: check_ck,
    TheoremId.EKY: check_eky,
    TheoremId.LW_EVEN_COLORED: check_colored_even,
    TheoremId.LW_ODD_COLORED: check_colored_general,
    TheoremId.MAIN_EVEN: check_main_even,
    TheoremId.MAIN_ODD: check_main_odd,
}


def applicable(theorem: TheoremId, g: Multigraph, f: FSpec) -> bool:
    even = g.n % 2 == 0
    if theorem is TheoremId.MAIN_EVEN or theorem is TheoremId.LW_EVEN_COLORED:
        return even
    if theorem is TheoremId.MAIN_ODD:
        return not even
    if theorem is TheoremId.CK:
        return even and f.odd_valued
    if theorem is TheoremId.EKY:
        return even and g.is_simple
    return True
