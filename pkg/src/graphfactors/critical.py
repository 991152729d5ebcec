"""The pendant construction G^x, H^x and H-criticality."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

from .degrees import DegreeSet, HAssignment
from .factor import FactorCertificate, find_h_factor
from .graph import Multigraph, add_pendant

Finder = Callable[[Multigraph, HAssignment], "FactorCertificate | None"]

PENDANT_SET = DegreeSet.of([1])


def h_pendant(h: HAssignment, x_prime: int) -> HAssignment:
    """``H^x``: H with ``{1}`` at the pendant vertex, which must be the next id."""
    if x_prime != len(h):
        raise ValueError(f"pendant vertex must have id {len(h)}, got {x_prime}")
    return h.extended(PENDANT_SET)


@dataclass(frozen=True)
class CriticalityReport:
    """``per_vertex[x]`` holds the ``G^x`` certificate (or None) for every x examined.

    In fast mode examination stops early, so some x may be absent.
    """

    n: int
    has_factor: bool
    factor: FactorCertificate | None
    per_vertex: dict[int, FactorCertificate | None] = field(default_factory=dict)

    @property
    def is_critical(self) -> bool:
        return (
            not self.has_factor
            and len(self.per_vertex) == self.n
            and all(c is not None for c in self.per_vertex.values())
        )

    def to_json(self, h: HAssignment | None = None) -> dict:
        return {
            "critical": self.is_critical,
            "has_factor": self.has_factor,
            "factor": self.factor.to_json(h) if self.factor else None,
            "per_vertex": [
                {
                    "x": x,
                    "certificate": (
                        c.to_json(h_pendant(h, self.n) if h is not None else None)
                        if c is not None
                        else None
                    ),
                }
                for x, c in sorted(self.per_vertex.items())
            ],
        }


def is_h_critical(
    g: Multigraph, h: HAssignment, *, fast: bool = False, find: Finder | None = None
) -> CriticalityReport:
    """G has no H-factor while every ``G^x`` has an ``H^x``-factor.

    Full mode solves all n pendant instances regardless; fast mode stops at
    the first disqualifying answer.
    """
    find = find or find_h_factor
    factor = find(g, h)
    per_vertex: dict[int, FactorCertificate | None] = {}
    if factor is not None and fast:
        return CriticalityReport(g.n, True, factor, per_vertex)
    hx = h_pendant(h, g.n)
    for x in range(g.n):
        gx, _ = add_pendant(g, x)
        cert = find(gx, hx)
        per_vertex[x] = cert
        if cert is None and fast:
            break
    return CriticalityReport(g.n, factor is not None, factor, per_vertex)
