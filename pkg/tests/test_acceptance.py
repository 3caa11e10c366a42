"""Acceptance suite: one test per release criterion, exact tolerances.

Each test records a PASS line (printed in the terminal summary) so a full
run reads as a checklist.  The heavy exhaustive items are marked slow;
they are part of the release gate and run in the full suite.
"""

import time

import pytest

from nutgraphs.autgroup import automorphism_group, canonical_form
from nutgraphs.census import (
    census_nuts,
    default_jobs,
    enumerate_graphs,
    enumerate_regular,
    regular_with_aut_orders,
)
from nutgraphs.codec import from_graph6
from nutgraphs.construct import (
    build_nut_realization,
    build_regular_nut_realization,
    endpoint_swap,
    extend_to_degree,
    triangle_multiplier,
    triangle_swap,
    verify_report,
)
from nutgraphs.gadgets import (
    default_root_gadget,
    packaged_apex_gadgets,
    search_proto_gadgets,
    search_root_gadgets,
)
from nutgraphs.graphs import Graph, build_graph, coalesce, is_connected, subdivide_edge
from nutgraphs.kernel import nullspace, nut_certificate
from nutgraphs.perms import PermGroup, groups_isomorphic, parse_cycles

from .conftest import record
from .oracles import (
    brute_aut_order,
    connected_from_all_counts,
    cycle_index_graph_count,
    labeled_class_count,
    rational_nullity,
)

JOBS = default_jobs()


def K(n):
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def target_group(name: str) -> PermGroup:
    gens = {
        "Z1": ([], 1),
        "Z2": (["(1,2)"], 2),
        "Z3": (["(1,2,3)"], 3),
        "Z2xZ2": (["(1,2)", "(3,4)"], 4),
        "S3": (["(1,2)", "(1,2,3)"], 3),
    }[name]
    return PermGroup([parse_cycles(t, gens[1]) for t in gens[0]], degree=gens[1])


def nut_graphs_of_order(n: int) -> list[Graph]:
    out = []
    for g in enumerate_graphs(n, connected_only=True, jobs=JOBS):
        if nut_certificate(g).is_nut:
            out.append(g)
    return out


MINIMAL_4REGULAR = {
    1: "ICQfMo{]?",   # order 10
    2: "HCrdrhw",     # order 9
    3: "M?ABFAQTDOhcM_FO?",   # order 14
}


# -- criterion 1: nut census minima ------------------------------------------


@pytest.mark.slow
def test_criterion_1_nut_census_minima():
    t0 = time.time()
    counts = {row.n: row.count for row in census_nuts(9, jobs=JOBS)}
    for n in range(1, 7):
        assert counts[n] == 0
    nuts = {n: nut_graphs_of_order(n) for n in (7, 8, 9)}
    assert len(nuts[7]) == counts[7] == 3
    auts = {n: [automorphism_group(g) for g in nuts[n]] for n in nuts}

    def beta(name: str) -> int:
        target = target_group(name)
        for n in (7, 8, 9):
            for aut in auts[n]:
                if aut.order() == target.order() and groups_isomorphic(aut, target):
                    return n
        raise AssertionError(f"no nut graph for {name} up to order 9")

    values = {name: beta(name) for name in ("Z1", "Z2", "Z2xZ2", "S3")}
    assert values == {"Z1": 9, "Z2": 8, "Z2xZ2": 7, "S3": 7}
    record(
        f"criterion 1 PASS: zero nuts to n=6; smallest nut orders "
        f"Z1:9 Z2:8 Z2xZ2:7 S3:7 [{time.time() - t0:.0f}s]"
    )


# -- criterion 2: minimal 4-regular representatives ---------------------------


@pytest.mark.slow
def test_criterion_2_minimal_4regular():
    t0 = time.time()
    first_hit: dict[int, tuple[int, int, str]] = {}
    per_order = {}
    for n in range(5, 15):
        if n * 4 % 2:
            continue
        rows = list(regular_with_aut_orders(n, 4, jobs=JOBS))
        per_order[n] = len(rows)
        for target in (1, 2, 3):
            if target in first_hit:
                continue
            hits = [g for g, a in rows if a == target]
            if hits:
                from nutgraphs.codec import to_graph6

                first_hit[target] = (n, len(hits), to_graph6(hits[0]))
    # spec-pinned class counts along the way
    assert per_order[9] == 16 and per_order[10] == 59
    assert {t: v[:2] for t, v in first_hit.items()} == {
        1: (10, 4),
        2: (9, 3),
        3: (14, 8),
    }
    # the pinned pipeline inputs are exactly the first hits
    for target, (n, _, g6) in first_hit.items():
        assert g6 == MINIMAL_4REGULAR[target]
    record(
        "criterion 2 PASS: minimal 4-regular orders 10/9/14 with 4/3/8 "
        f"candidates for |Aut|=1/2/3 [{time.time() - t0:.0f}s]"
    )


# -- criterion 3: the order-288 group suite -----------------------------------


def test_criterion_3_group288_suite():
    g288 = PermGroup(
        [
            parse_cycles("(1,2,3)(4,5)(6,7,8)", 10),
            parse_cycles("(1,8)(2,7)(3,6)(4,9)(5,10)", 10),
            parse_cycles("(7,8)", 10),
        ]
    )
    assert g288.order() == 288

    edges = [(u, v) for u in range(5) for v in range(u + 1, 5) if (u, v) != (0, 1)]
    edges += [(u + 5, v + 5) for u in range(5) for v in range(u + 1, 5) if (u, v) != (0, 1)]
    edges += [(0, 10), (1, 10), (5, 10), (6, 10)]
    quartic = build_graph(11, edges)
    assert set(quartic.degrees) == {4}
    aut_a = automorphism_group(quartic)
    assert aut_a.order() == 288

    edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    edges += [(u + 5, v + 5) for u in range(5) for v in range(u + 1, 5)]
    edges += [(0, 5), (0, 6), (1, 5), (1, 6)]
    nut10 = build_graph(10, edges)
    cert = nut_certificate(nut10)
    assert cert.is_nut and nut10.n == 10
    aut_b = automorphism_group(nut10)
    assert aut_b.order() == 288
    assert groups_isomorphic(aut_b, g288) is True
    assert groups_isomorphic(aut_a, g288) is True
    record("criterion 3 PASS: printed generators give order 288; the order-11 "
           "4-regular and order-10 nut graphs both realise the group")


# -- criterion 4: multiplier law ----------------------------------------------


@pytest.mark.slow
def test_criterion_4_multiplier_law():
    t0 = time.time()
    cases = 0
    for n in range(3, 11):
        h = build_graph(n, [(i, (i + 1) % n) for i in range(n)])
        _check_multiplier_law(h, 1)
        cases += 1
    for n in range(5, 11):
        if n * 4 % 2:
            continue
        for h in enumerate_regular(n, 4, jobs=JOBS):
            _check_multiplier_law(h, 2)
            cases += 1
    record(f"criterion 4 PASS: multiplier law exact on {cases} graphs "
           f"(2t-regular, n<=10, t in 1..2) [{time.time() - t0:.0f}s]")


def _check_multiplier_law(h, t):
    from math import factorial

    m = triangle_multiplier(h)
    assert m.t == t
    assert nut_certificate(m.graph, kernel_hint=m.kernel_vector()).is_nut
    aut_h = automorphism_group(h).order()
    aut_m = automorphism_group(m.graph).order()
    assert aut_m == (2**t * factorial(t)) ** h.n * aut_h


# -- criterion 5: coalescence and subdivision closure --------------------------


@pytest.mark.slow
def test_criterion_5_closure_laws():
    t0 = time.time()
    small_nuts = nut_graphs_of_order(7) + nut_graphs_of_order(8)
    assert len(small_nuts) == 16
    pairs = 0
    for a in range(len(small_nuts)):
        for b in range(a, len(small_nuts)):
            g1, g2 = small_nuts[a], small_nuts[b]
            for v1 in range(g1.n):
                for v2 in range(g2.n):
                    g, _, _ = coalesce(g1, v1, g2, v2)
                    assert nut_certificate(g).is_nut
                    pairs += 1
    subdivided = 0
    for n in (7, 8, 9):
        for g in nut_graphs_of_order(n):
            for e in g.edges:
                g2, _ = subdivide_edge(g, e, 4)
                assert nut_certificate(g2).is_nut
                subdivided += 1
    record(f"criterion 5 PASS: {pairs} coalescences and {subdivided} 4-fold "
           f"subdivisions all nut [{time.time() - t0:.0f}s]")


# -- criterion 6: end-to-end realizations -------------------------------------


def test_criterion_6_realizations_from_minimal_inputs():
    t0 = time.time()
    expected = {1: 190, 2: 171, 3: 266}
    names = {1: "Z1", 2: "Z2", 3: "Z3"}
    for aut_order, g6 in MINIMAL_4REGULAR.items():
        h = from_graph6(g6)
        assert set(h.degrees) == {4}
        assert automorphism_group(h).order() == aut_order
        rep = build_nut_realization(h)
        assert rep.certificate.is_nut
        assert rep.order_actual == rep.order_expected == expected[aut_order]
        assert rep.restriction_equal
        assert rep.aut_order == aut_order
        target = target_group(names[aut_order])
        assert groups_isomorphic(
            automorphism_group(rep.g, known=None), target
        ) is True
        assert rep.iso_verdict is True
        assert verify_report(rep)
    record(f"criterion 6 PASS: realizations of orders 190/171/266 for Z1/Z2/Z3 "
           f"[{time.time() - t0:.0f}s]")


# -- criterion 7: regular realizations ----------------------------------------


@pytest.mark.slow
def test_criterion_7_regular_realizations_d8():
    t0 = time.time()
    built = 0
    for n in range(5, 11):
        if n * 4 % 2:
            continue
        for h in enumerate_regular(n, 4, jobs=JOBS):
            rep = build_regular_nut_realization(h, 8)
            assert rep.omega == 53
            assert rep.order_actual == 53 * h.n
            assert set(rep.g.degrees) == {8}
            assert rep.certificate.is_nut
            assert rep.restriction_equal
            aut_h = automorphism_group(h)
            assert rep.aut_order == aut_h.order()
            if aut_h.order() <= 2000:
                assert rep.iso_verdict is True
            built += 1
    record(f"criterion 7 PASS (d=8): {built} pipelines, all 8-regular nuts of "
           f"order 53|V(H)| with Aut preserved [{time.time() - t0:.0f}s]")


@pytest.mark.slow
@pytest.mark.parametrize("d,n_h", [(12, 7), (16, 9), (20, 11), (24, 13)])
def test_criterion_7_regular_realizations_high_degree(d, n_h):
    t0 = time.time()
    h = K(n_h)
    rep = build_regular_nut_realization(h, d)
    assert set(rep.g.degrees) == {d}
    assert rep.certificate.is_nut
    assert rep.restriction_equal
    assert rep.aut_order == automorphism_group(h).order()
    record(f"criterion 7 PASS (d={d}): {d}-regular nut of order {rep.order_actual} "
           f"on K{n_h}, Aut preserved; achieved omega({d}) = {rep.omega} "
           f"(recorded stretch metric) [{time.time() - t0:.0f}s]")


# -- criterion 8: gadget existence ---------------------------------------------


@pytest.mark.slow
def test_criterion_8_gadget_existence():
    t0 = time.time()
    roots = search_root_gadgets(8)
    assert len(roots) >= 1
    assert all(rec.validate() for rec in roots)
    assert default_root_gadget().gadget == roots[0].gadget

    a = search_proto_gadgets(8, 3, seed=20240801)
    b = search_proto_gadgets(8, 3, seed=20240801)
    assert [r.gadget for r in a] == [r.gadget for r in b]
    codes = {canonical_form(r.gadget).code for r in a}
    assert len(codes) == 3
    for rec in a:
        assert rec.gadget.n == 13
        assert rec.gadget.degrees[rec.roots[0]] == 6
        assert automorphism_group(rec.gadget).order() == 1
        assert nut_certificate(rec.gadget).is_nut
    record(f"criterion 8 PASS: {len(roots)} two-root gadgets at order 8; "
           f"3 deterministic non-isomorphic apex gadgets of order 13 "
           f"[{time.time() - t0:.0f}s]")


# -- criterion 9: smallest rigid cubic nut graph --------------------------------


@pytest.mark.slow
def test_criterion_9_rigid_cubic_nut_minimum():
    t0 = time.time()
    lcf = [-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2]
    edges = {(i, (i + 1) % 12) for i in range(12)}
    for i, s in enumerate(lcf):
        j = (i + s) % 12
        edges.add((min(i, j), max(i, j)))
    g = build_graph(12, sorted(edges))
    assert set(g.degrees) == {3} and g.n == 12
    assert automorphism_group(g).order() == 1
    assert nut_certificate(g).is_nut

    for n in (4, 6, 8, 10):
        for cubic in enumerate_regular(n, 3, jobs=JOBS):
            assert not (
                nut_certificate(cubic).is_nut
                and automorphism_group(cubic).order() == 1
            )
    record(f"criterion 9 PASS: the order-12 rigid cubic graph is a nut; no "
           f"rigid cubic nut exists below order 12 [{time.time() - t0:.0f}s]")


# -- criterion 10: extra automorphisms eliminated -------------------------------


def test_criterion_10_extra_automorphism_elimination():
    t0 = time.time()
    checked = 0
    for g6 in MINIMAL_4REGULAR.values():
        h = from_graph6(g6)
        m = triangle_multiplier(h)
        aut_m = automorphism_group(m.graph)
        rep = build_nut_realization(h)
        aut_g = automorphism_group(rep.g)
        for i in range(h.n):
            for j in (1, 2):
                beta = endpoint_swap(m, i, j)
                assert aut_m.contains(beta)
                ext = extend_to_degree(beta, rep.g.n)
                assert not aut_g.contains(ext)
                assert any(
                    not rep.g.has_edge(ext(u), ext(v)) for u, v in rep.g.edges
                )
            gamma = triangle_swap(m, i)
            assert aut_m.contains(gamma)
            ext = extend_to_degree(gamma, rep.g.n)
            assert not aut_g.contains(ext)
            assert any(not rep.g.has_edge(ext(u), ext(v)) for u, v in rep.g.edges)
            checked += 1
    record(f"criterion 10 PASS: endpoint and triangle swaps live in Aut(M) and "
           f"die in Aut(G) for all {checked} core vertices [{time.time() - t0:.0f}s]")


# -- criterion 11: oracle suites -------------------------------------------------


@pytest.mark.slow
def test_criterion_11_oracle_suites():
    t0 = time.time()
    aut_checked = 0
    for n in range(1, 8):
        for g in enumerate_graphs(n, jobs=JOBS):
            assert automorphism_group(g).order() == brute_aut_order(g)
            assert nullspace(g).nullity == rational_nullity(g)
            aut_checked += 1
    for n in range(1, 7):
        assert sum(1 for _ in enumerate_graphs(n)) == labeled_class_count(n)
    # order 7 counts against two independent closed-form oracles
    alls = [cycle_index_graph_count(n) for n in range(1, 8)]
    assert sum(1 for _ in enumerate_graphs(7)) == alls[6] == 1044
    assert (
        sum(1 for _ in enumerate_graphs(7, connected_only=True))
        == connected_from_all_counts(alls)[6]
        == 853
    )
    record(f"criterion 11 PASS: {aut_checked} graphs agree with the n!-brute "
           f"and rational-elimination oracles; class counts match the "
           f"labelled-filter and counting oracles [{time.time() - t0:.0f}s]")
