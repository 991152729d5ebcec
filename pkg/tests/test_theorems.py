from __future__ import annotations

from itertools import combinations, islice

import pytest

import graphfactors.theorems as thm
from conftest import complete, cycle, naive_has_factor, naive_tutte, path, star
from graphfactors.degrees import FSpec
from graphfactors.errors import CapExceeded, GuardError
from graphfactors.graph import Multigraph, components
from graphfactors.theorems import (
    CHECKS,
    CheckSettings,
    TheoremId,
    applicable,
    check_ck,
    check_colored_even,
    check_colored_general,
    check_eky,
    check_main_even,
    check_main_odd,
    colorings,
    count_connected_labeled,
    enumerate_connected_graphs,
    sample_connected_graphs,
    sample_multigraphs,
)


def ones(n):
    return FSpec.const(1, n)


# -- graph streams ----------------------------------------------------------------


def test_enumeration_counts():
    assert [len(list(enumerate_connected_graphs(n))) for n in (1, 2, 3, 4)] == [1, 1, 4, 38]
    assert list(enumerate_connected_graphs(2)) == [complete(2)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_recurrence_and_brute_force(n):
    graphs = list(enumerate_connected_graphs(n))
    assert len(graphs) == count_connected_labeled(n)
    assert all(len(components(g)) == 1 and g.is_simple for g in graphs)
    # every connected labelled graph shows up, counted by direct bitmask search
    pairs = list(combinations(range(n), 2))
    direct = 0
    for mask in range(1 << len(pairs)):
        g = Multigraph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])
        direct += len(components(g)) == 1
    assert direct == len(graphs) == len(set(graphs))


def test_recurrence_known_values():
    # counts of labelled connected graphs for n = 1..7
    assert [count_connected_labeled(n) for n in range(1, 8)] == [1, 1, 4, 38, 728, 26704, 1866256]


@pytest.mark.parametrize("n", [0, 8])
def test_enumeration_guard(n):
    with pytest.raises(GuardError):
        next(enumerate_connected_graphs(n))


def test_sample_connected_graphs():
    a = sample_connected_graphs(7, 50, seed=1)
    assert a == sample_connected_graphs(7, 50, seed=1)
    assert a != sample_connected_graphs(7, 50, seed=2)
    assert len(set(a)) == 50 and all(g.is_connected for g in a)
    assert sample_connected_graphs(4, 100) == list(enumerate_connected_graphs(4))


def test_sample_multigraphs():
    trees = list(islice(sample_multigraphs(4, seed=5), 20))
    assert all(g.is_connected and g.total_multiplicity == 3 for g in trees)
    assert trees == list(islice(sample_multigraphs(4, seed=5), 20))
    extra = list(islice(sample_multigraphs(5, extra_edges=3, loops=2, seed=0), 50))
    assert all(g.total_multiplicity == 4 + 3 + 2 and g.is_connected for g in extra)
    assert all(sum(m for u, v, m in g.edges if u == v) == 2 for g in extra)
    assert any(not g.is_simple for g in extra)


def test_colorings_order():
    assert list(colorings(2)) == ["RR", "BR", "RB", "BB"]


# -- main even --------------------------------------------------------------------


def test_main_even_c4():
    v = check_main_even(cycle(4), ones(4))
    assert v.left and v.right and v.ok


def test_main_even_star():
    v = check_main_even(star(3), ones(4))
    assert not v.left and not v.right and v.agrees
    assert v.witness == {"family_index": 0, "H": ["{1}"] * 4}


def test_main_even_star_heavy_center():
    f = FSpec((3, 1, 1, 1))
    v = check_main_even(star(3), f)
    assert v.left and v.right and v.ok
    assert naive_tutte(star(3), f.values)


def test_main_even_counts_internal_checks():
    v = check_main_even(cycle(4), FSpec.const(2, 4))
    assert v.ok
    assert v.checks["necessity"] == 16 and v.checks["sufficiency"] == 15
    assert v.checks["crosschecks"] == 16 and v.checks["certificates_verified"] == 16


def test_main_even_requires_even_connected():
    with pytest.raises(ValueError):
        check_main_even(complete(3), ones(3))
    with pytest.raises(ValueError):
        check_main_even(Multigraph(2), ones(2))


# -- main odd ---------------------------------------------------------------------


def test_main_odd_k3():
    v = check_main_odd(complete(3), ones(3))
    assert v.left and v.right and v.ok


def test_main_odd_p3():
    v = check_main_odd(path(3), ones(3))
    assert not v.left and not v.right and v.agrees
    # the pendant at the middle of P3 gives the star, which has no perfect matching
    assert not naive_has_factor(star(3), [{1}] * 4)


def test_main_odd_k5():
    v = check_main_odd(complete(5), ones(5))
    assert v.left and v.right and v.ok


# -- Cui-Kano and EKY -------------------------------------------------------------


@pytest.mark.parametrize("g,k", [(cycle(4), 1), (cycle(4), 3), (cycle(6), 1)], ids=["C4-1", "C4-3", "C6-1"])
def test_ck_examples(g, k):
    v = check_ck(g, FSpec.const(k, g.n))
    assert v.left and v.right and v.ok and not v.failures


def test_ck_needs_odd_values():
    with pytest.raises(ValueError):
        check_ck(cycle(4), FSpec.const(2, 4))


def test_eky_is_an_implication():
    v = check_eky(star(3), ones(4))
    assert not v.left and not v.right and v.agrees
    broken = thm.TheoremVerdict(TheoremId.EKY, star(3), ones(4), left=False, right=True)
    assert broken.agrees
    broken = thm.TheoremVerdict(TheoremId.EKY, star(3), ones(4), left=True, right=False)
    assert not broken.agrees


def test_eky_needs_simple_graph():
    with pytest.raises(ValueError):
        check_eky(Multigraph.from_edges(2, [(0, 1, 2)]), ones(2))


# -- colored ----------------------------------------------------------------------


def test_colored_even_k2():
    v = check_colored_even(complete(2), ones(2))
    assert v.left and v.right and v.ok and v.checks["crosschecks"] >= 1


def test_colored_even_star():
    v = check_colored_even(star(3), ones(4))
    assert not v.left and not v.right and v.witness == {"coloring": "RRRR"}


def test_colored_even_c4_two():
    v = check_colored_even(cycle(4), FSpec.const(2, 4))
    assert v.left and v.right and v.ok


@pytest.mark.parametrize(
    "g,left", [(complete(3), True), (path(3), False), (complete(2), True)], ids=["K3", "P3", "K2"]
)
def test_colored_general_examples(g, left):
    v = check_colored_general(g, ones(g.n))
    assert v.left == left and v.right == left and v.ok


def test_colored_general_single_vertex():
    # with headroom the B vertex of K1 keeps {1}; K1 + pendant is K2, so K1 is critical
    v = check_colored_general(Multigraph(1), ones(1))
    assert v.left and v.right and v.ok and v.witness is None


def test_coloring_cap():
    with pytest.raises(CapExceeded):
        check_colored_even(cycle(4), ones(4), CheckSettings(coloring_max_n=3))


# -- discrepancy detection --------------------------------------------------------


def test_broken_solver_is_caught(monkeypatch):
    monkeypatch.setattr(thm, "find_h_factor", lambda g, h, cap=None: None)
    v = check_main_even(cycle(4), ones(4))
    assert not v.agrees and not v.ok
    assert any(f["check"] == "crosscheck" and f["oracle"] for f in v.failures)


def test_bad_certificate_is_caught(monkeypatch):
    from graphfactors.factor import FactorCertificate

    monkeypatch.setattr(thm, "find_h_factor", lambda g, h, cap=None: FactorCertificate((), (0,) * g.n))
    v = check_ck(cycle(4), ones(4))
    assert [f["check"] for f in v.failures] == ["verify"]


def test_verdict_is_replayable():
    v = check_main_even(star(3), ones(4))
    doc = v.to_json()
    g = Multigraph.from_edges(doc["graph"]["n"], [tuple(e) for e in doc["graph"]["edges"]])
    again = check_main_even(g, FSpec(tuple(doc["f"])))
    assert again.to_json() == doc


def test_applicable():
    assert applicable(TheoremId.MAIN_EVEN, cycle(4), ones(4))
    assert not applicable(TheoremId.MAIN_EVEN, complete(3), ones(3))
    assert applicable(TheoremId.MAIN_ODD, complete(3), ones(3))
    assert not applicable(TheoremId.CK, cycle(4), FSpec.const(2, 4))
    assert not applicable(TheoremId.EKY, Multigraph.from_edges(2, [(0, 1, 2)]), ones(2))
    assert applicable(TheoremId.LW_ODD_COLORED, complete(3), ones(3))
    assert applicable(TheoremId.LW_ODD_COLORED, cycle(4), ones(4))
    assert set(CHECKS) == set(TheoremId)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_every_theorem_on_every_small_graph(n):
    for g in enumerate_connected_graphs(n):
        for k in (1, 2, 3):
            f = FSpec.const(k, n)
            for tid, check in CHECKS.items():
                if applicable(tid, g, f) and not (tid.name.startswith("LW") and n > 4):
                    v = check(g, f)
                    assert v.ok, (tid, g, f, v.to_json())


def test_sufficiency_check_flags_bad_certificates():
    from graphfactors.degrees import h_family
    from graphfactors.factor import FactorCertificate, find_h_factor

    g, f = cycle(4), FSpec.const(2, 4)
    family = h_family(f)
    probe = thm._Probe(CheckSettings())
    thm._sufficiency(g, f, [find_h_factor(g, h) for h in family], probe)
    assert probe.failures == [] and probe.checks["sufficiency"] == 15
    empty = [FactorCertificate((), (0, 0, 0, 0))] * len(family)
    thm._sufficiency(g, f, empty, probe)
    assert probe.failures[0]["check"] == "sufficiency"
    assert probe.failures[0]["reason"] == "odd component without an F-edge into S"
    # a double edge: for S = {0} the odd component {1} has a cut of size 2
    g2, f2 = Multigraph.from_edges(2, [(0, 1, 2)]), FSpec.const(2, 2)
    both = FactorCertificate(((0, 1, 0), (0, 1, 1)), (2, 2))
    probe = thm._Probe(CheckSettings())
    thm._sufficiency(g2, f2, [both] * 4, probe)
    assert probe.failures == [
        {"check": "sufficiency", "S": [0], "reason": "odd component with an even cut into S"}
    ]
