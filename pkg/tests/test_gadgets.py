import pytest

from nutgraphs.autgroup import automorphism_group, canonical_form
from nutgraphs.codec import to_graph6
from nutgraphs.gadgets import (
    GadgetSearchError,
    admissible_proto_orders,
    default_root_gadget,
    gadget_from_proto,
    load_gadget_records,
    packaged_apex_gadgets,
    save_gadget_records,
    search_proto_gadgets,
    search_root_gadgets,
    _havel_hakimi,
    _proto_degseq,
    _try_swap,
)
from nutgraphs.graphs import build_graph
from nutgraphs.kernel import nut_certificate
from nutgraphs.perms import orbits, stabilizer


def test_two_root_search_nonempty_at_eight():
    records = search_root_gadgets(8)
    assert records
    for rec in records:
        assert rec.gadget.n == 8
        assert rec.validate()


def test_two_root_conditions_recheck():
    rec = search_root_gadgets(8)[0]
    aut = automorphism_group(rec.gadget)
    assert aut.order() == 2
    q1, q2 = rec.roots
    cells = {v: cell for cell in orbits(aut) for v in cell}
    assert cells[q1] != cells[q2]
    assert stabilizer(aut, q1).order() == 1
    assert stabilizer(aut, q2).order() == 1
    assert nut_certificate(rec.gadget).is_nut


def test_two_root_requires_order_eight():
    with pytest.raises(ValueError):
        search_root_gadgets(7)


def test_default_root_gadget_is_pinned_first_hit():
    rec = default_root_gadget()
    assert rec.validate()
    fresh = search_root_gadgets(8)[0]
    assert to_graph6(rec.gadget) == to_graph6(fresh.gadget)
    assert rec.roots == fresh.roots


def test_gadget_from_proto_profile():
    start = _havel_hakimi([4] * 6 + [3] * 6)
    gadget, apex = gadget_from_proto(start, 8)
    assert gadget.n == 13
    degs = gadget.degrees
    assert degs[apex] == 6
    assert sorted(degs) == [6] + [8] * 12


def test_gadget_from_proto_rejects_wrong_profile():
    cubic = build_graph(12, [(i, (i + 1) % 12) for i in range(12)]
                        + [(i, (i + 6) % 12) for i in range(6)])
    assert set(cubic.degrees) == {3}
    with pytest.raises(ValueError):
        gadget_from_proto(cubic, 8)


def test_gadget_degree_sum_handshake():
    start = _havel_hakimi([4] * 6 + [3] * 6)
    gadget, _ = gadget_from_proto(start, 8)
    assert sum(gadget.degrees) == 8 * gadget.n - 2


def test_swap_preserves_degree_sequence():
    import random

    rng = random.Random(5)
    g = _havel_hakimi(_proto_degseq(15, 12))
    degs = sorted(g.degrees)
    edges = set(g.edges)
    for _ in range(500):
        _try_swap(edges, rng, 15)
        cnt = [0] * 15
        for u, v in edges:
            cnt[u] += 1
            cnt[v] += 1
        assert sorted(cnt) == degs


def test_proto_search_d8():
    records = search_proto_gadgets(8, 3, seed=7)
    assert len(records) == 3
    codes = set()
    for rec in records:
        assert rec.gadget.n == 13
        assert rec.proto.n == 12
        assert sorted(rec.proto.degrees) == [3] * 6 + [4] * 6
        assert rec.gadget.degrees[rec.roots[0]] == 6
        assert automorphism_group(rec.gadget).order() == 1
        assert nut_certificate(rec.gadget).is_nut
        codes.add(canonical_form(rec.gadget).code)
    assert len(codes) == 3


def test_proto_search_deterministic():
    a = search_proto_gadgets(8, 2, seed=99)
    b = search_proto_gadgets(8, 2, seed=99)
    assert [to_graph6(r.gadget) for r in a] == [to_graph6(r.gadget) for r in b]


def test_proto_search_budget_error_is_loud():
    with pytest.raises(GadgetSearchError):
        search_proto_gadgets(8, 3, seed=1, max_tests_per_order=5)


def test_admissible_orders_skip_forced_symmetric_profiles():
    # sequences of paths/cycles only (degrees <= 2) can never be asymmetric
    assert admissible_proto_orders(12, 3)[0] == 15
    assert admissible_proto_orders(16, 3)[0] == 19
    assert all(m - d - 1 >= 2 for d in (12, 16, 20, 24)
               for m in admissible_proto_orders(d, 3))


def test_persistence_round_trip(tmp_path):
    records = search_proto_gadgets(8, 2, seed=3)
    path = tmp_path / "lib.g6r"
    save_gadget_records(records, path)
    save_gadget_records(records[:1], path)  # append-only
    back = load_gadget_records(path)
    assert len(back) == 3
    assert to_graph6(back[0].gadget) == to_graph6(records[0].gadget)
    assert back[0].roots == records[0].roots
    assert back[0].spec == records[0].spec
    assert back[0].proto == records[0].proto
    assert all(rec.validate() for rec in back)


@pytest.mark.parametrize("d", [8, 12, 16])
def test_packaged_libraries_revalidate(d):
    records = packaged_apex_gadgets(d)
    assert len(records) >= (3 if d == 12 or d == 8 else 4)
    codes = {canonical_form(r.gadget).code for r in records}
    assert len(codes) == len(records)
    for rec in records:
        assert rec.spec.d == d
        assert rec.validate()
