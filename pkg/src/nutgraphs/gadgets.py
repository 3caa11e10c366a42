"""Discovery of decoration gadgets: small rigid nut graphs that break
unwanted symmetry when coalesced onto a host graph.

Two kinds are needed.  A *two-root* gadget is a nut graph with automorphism
group of order 2 carrying two root vertices in different orbits, each with
trivial stabiliser; these decorate pendant triangles asymmetrically.  An
*apex* gadget for even degree d is built from a *proto* graph P: take the
complement of P, which must have exactly d-2 vertices of degree d-1 and
the rest of degree d, and join a new apex vertex to the deficient ones.
Coalescing the apex (degree d-2) onto a degree-2 triangle vertex restores
degree d, so the decorated graph stays d-regular.  Apex gadgets must be
nut graphs with trivial automorphism group, pairwise non-isomorphic.

Searches are exhaustive (two-root, via the census machinery) or seeded
random walks over degree-sequence-preserving double edge swaps (proto),
so results are reproducible bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .graphs import Graph, build_graph, complement, is_connected
from .kernel import nut_certificate
from .autgroup import automorphism_group, canonical_form
from .codec import to_graph6, from_graph6


class GadgetSearchError(RuntimeError):
    """Search budget exhausted; carries the attempt statistics."""


@dataclass(frozen=True)
class GadgetSpec:
    kind: str               # 'two-root' | 'apex'
    d: int | None = None    # target regular degree for apex gadgets

    def describe(self) -> str:
        if self.kind == "two-root":
            return (
                "nut graph, |Aut| = 2, two roots in different orbits, "
                "both with trivial stabiliser"
            )
        return (
            f"order-(proto+1) nut graph, trivial Aut, apex degree {self.d - 2}, "
            f"all other degrees {self.d}"
        )


@dataclass(frozen=True)
class GadgetRecord:
    gadget: Graph
    roots: tuple[int, ...]
    spec: GadgetSpec
    proto: Graph | None = None
    provenance: str = ""

    def validate(self) -> bool:
        """Re-run every spec predicate on the stored graph."""
        g = self.gadget
        if not is_connected(g) or not nut_certificate(g).is_nut:
            return False
        aut = automorphism_group(g)
        if self.spec.kind == "two-root":
            if aut.order() != 2:
                return False
            invol = next(p for p in aut.elements() if not p.is_identity())
            q1, q2 = self.roots
            return (
                invol(q1) != q1
                and invol(q2) != q2
                and q2 not in (q1, invol(q1))
            )
        d = self.spec.d
        if aut.order() != 1:
            return False
        (w,) = self.roots
        degs = g.degrees
        if degs[w] != d - 2:
            return False
        return all(degs[v] == d for v in range(g.n) if v != w)


def search_root_gadgets(max_order: int = 8) -> list[GadgetRecord]:
    """Exhaustive hunt for two-root gadgets on orders 8..max_order.

    Roots are the lexicographically least valid pair; records are sorted
    by canonical code, so the list is reproducible run to run.
    """
    from .census import enumerate_graphs

    if max_order < 8:
        raise ValueError("two-root gadgets need order at least 8")
    found: list[tuple[bytes, GadgetRecord]] = []
    for order in range(8, max_order + 1):
        for g in enumerate_graphs(order, connected_only=True):
            if not nut_certificate(g).is_nut:
                continue
            aut = automorphism_group(g)
            if aut.order() != 2:
                continue
            invol = next(p for p in aut.elements() if not p.is_identity())
            moved = [v for v in range(g.n) if invol(v) != v]
            if len(moved) < 4:
                continue
            q1 = moved[0]
            q2 = next(v for v in moved if v not in (q1, invol(q1)))
            rec = GadgetRecord(
                gadget=g,
                roots=(q1, q2),
                spec=GadgetSpec("two-root"),
                provenance=f"exhaustive order {order}",
            )
            found.append((canonical_form(g).code, rec))
    found.sort(key=lambda t: t[0])
    return [rec for _, rec in found]


def gadget_from_proto(proto: Graph, d: int) -> tuple[Graph, int]:
    """Apex construction: complement the proto and join a new vertex to
    its degree-(d-1) vertices.  Returns (gadget, apex index)."""
    comp = complement(proto)
    degs = comp.degrees
    deficient = [v for v in range(comp.n) if degs[v] == d - 1]
    rest = [v for v in range(comp.n) if degs[v] == d]
    if len(deficient) != d - 2 or len(deficient) + len(rest) != comp.n:
        raise ValueError(
            "complement degree profile must be exactly "
            f"{d - 2} vertices of degree {d - 1} and the rest of degree {d}"
        )
    apex = comp.n
    edges = list(comp.edges) + [(v, apex) for v in deficient]
    return build_graph(comp.n + 1, edges), apex


def admissible_proto_orders(d: int, limit: int = 8):
    """Ascending proto orders m whose forced degree sequence is graphical
    and not structurally symmetric.

    The profile is d-2 vertices of degree m-d and m-d+2 of degree m-d-1.
    Sequences with m-d-1 < 2 force disjoint unions of paths, cycles and
    isolated vertices, which always carry symmetry, so they are skipped.
    """
    out = []
    m = d + 1
    while len(out) < limit:
        lo = m - d - 1
        total = (d - 2) * (m - d) + (m - d + 2) * lo
        if lo >= 2 and total % 2 == 0:
            out.append(m)
        m += 1
    return out


def _havel_hakimi(degseq: list[int]) -> Graph:
    """Deterministic realization of a graphical degree sequence."""
    n = len(degseq)
    remaining = sorted(((dv, v) for v, dv in enumerate(degseq)), reverse=True)
    edges = []
    while remaining:
        remaining.sort(reverse=True)
        dv, v = remaining.pop(0)
        if dv == 0:
            continue
        if dv > len(remaining):
            raise ValueError("degree sequence is not graphical")
        for i in range(dv):
            du, u = remaining[i]
            if du == 0:
                raise ValueError("degree sequence is not graphical")
            edges.append((min(u, v), max(u, v)))
            remaining[i] = (du - 1, u)
    return build_graph(n, edges)


def _proto_degseq(m: int, d: int) -> list[int]:
    return [m - d] * (d - 2) + [m - d - 1] * (m - d + 2)


def _try_swap(edges: set, rng: random.Random, n: int) -> None:
    """One degree-preserving double edge swap, in place (no-op on clash)."""
    e1, e2 = rng.sample(sorted(edges), 2)
    a, b = e1
    c, e = e2
    if rng.random() < 0.5:
        c, e = e, c
    if len({a, b, c, e}) < 4:
        return
    p1 = (min(a, c), max(a, c))
    p2 = (min(b, e), max(b, e))
    if p1 in edges or p2 in edges:
        return
    edges.discard(e1)
    edges.discard(e2)
    edges.add(p1)
    edges.add(p2)


def search_proto_gadgets(
    d: int,
    count: int,
    seed: int,
    max_tests_per_order: int = 25000,
    max_orders: int = 4,
) -> list[GadgetRecord]:
    """Seeded randomized search for `count` pairwise non-isomorphic apex
    gadgets of target degree d.

    Starts from the deterministic realization of the forced proto degree
    sequence at the smallest admissible order and walks by double edge
    swaps, testing the derived gadget periodically (connected, nut,
    trivial automorphisms).  Deterministic given the seed; exhausting the
    budget raises with statistics rather than returning a short list.
    """
    if d not in (8, 12, 16, 20, 24):
        raise ValueError("supported degrees are 8, 12, 16, 20 and 24")
    if d == 8:
        orders = [12]     # six degree-3 and six degree-4 vertices
    else:
        orders = admissible_proto_orders(d, limit=max_orders)
    rng = random.Random(seed)
    by_code: dict[bytes, GadgetRecord] = {}
    tests = swaps = 0
    for m in orders:
        degseq = _proto_degseq(m, d) if d != 8 else [4] * 6 + [3] * 6
        start = _havel_hakimi(degseq)
        edges = set(start.edges)
        mix = 10 * m
        cadence = max(4, m // 2)
        for _ in range(mix):
            _try_swap(edges, rng, m)
            swaps += 1
        for step in range(max_tests_per_order):
            for _ in range(cadence):
                _try_swap(edges, rng, m)
                swaps += 1
            tests += 1
            proto = Graph(m, tuple(sorted(edges)))
            try:
                gadget, apex = gadget_from_proto(proto, d)
            except ValueError:
                continue
            if not is_connected(gadget):
                continue
            if not nut_certificate(gadget).is_nut:
                continue
            if automorphism_group(gadget).order() != 1:
                continue
            code = canonical_form(gadget).code
            if code in by_code:
                continue
            by_code[code] = GadgetRecord(
                gadget=gadget,
                roots=(apex,),
                spec=GadgetSpec("apex", d=d),
                proto=proto,
                provenance=f"seed={seed} order={m} test={tests}",
            )
            if len(by_code) >= count:
                recs = sorted(by_code.items(), key=lambda t: t[0])
                return [rec for _, rec in recs[:count]]
    raise GadgetSearchError(
        f"no {count} gadgets for d={d} within budget: "
        f"{tests} tests, {swaps} swaps, orders {orders}, "
        f"found {len(by_code)}"
    )


# -- persistence ---------------------------------------------------------------


def save_gadget_records(records, path) -> None:
    """Append records to a library file: header line, then graph6 line."""
    with open(path, "a") as fh:
        for rec in records:
            bits = [f"kind={rec.spec.kind}"]
            if rec.spec.d is not None:
                bits.append(f"d={rec.spec.d}")
            bits.append("roots=" + ",".join(str(r) for r in rec.roots))
            if rec.proto is not None:
                bits.append(f"proto={to_graph6(rec.proto)}")
            if rec.provenance:
                bits.append(f"provenance={rec.provenance.replace(' ', '_')}")
            fh.write(" ".join(bits) + "\n")
            fh.write(to_graph6(rec.gadget) + "\n")


def _parse_records(text: str) -> list[GadgetRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) % 2:
        raise ValueError("gadget library must hold header/graph6 line pairs")
    out = []
    for header, payload in zip(lines[::2], lines[1::2]):
        fields = dict(bit.split("=", 1) for bit in header.split())
        spec = GadgetSpec(fields["kind"], d=int(fields["d"]) if "d" in fields else None)
        out.append(
            GadgetRecord(
                gadget=from_graph6(payload),
                roots=tuple(int(x) for x in fields["roots"].split(",")),
                spec=spec,
                proto=from_graph6(fields["proto"]) if "proto" in fields else None,
                provenance=fields.get("provenance", "").replace("_", " "),
            )
        )
    return out


def load_gadget_records(path) -> list[GadgetRecord]:
    with open(path) as fh:
        return _parse_records(fh.read())


def _load_packaged(name: str) -> list[GadgetRecord]:
    text = resources.files("nutgraphs").joinpath("data").joinpath(name).read_text()
    return _parse_records(text)


def default_root_gadget() -> GadgetRecord:
    """The pinned two-root gadget (lexicographically least order-8 hit)."""
    return _load_packaged("two_root_order8.g6r")[0]


def packaged_apex_gadgets(d: int) -> list[GadgetRecord]:
    """Pinned apex gadget library for one degree."""
    return _load_packaged(f"apex_d{d}.g6r")
