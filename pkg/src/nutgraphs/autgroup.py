"""Automorphism groups, canonical forms and isomorphism testing.

The engine is individualisation-refinement over ordered partitions:
refine to the coarsest equitable partition, branch on the vertices of the
first smallest non-singleton cell, and walk the resulting tree.  Discrete
leaves are candidate labellings; equal leaf codes yield automorphisms, and
the minimum leaf code over the (pruned) tree is the canonical form.
Verified automorphisms prune sibling branches orbit-wise, which keeps the
tree small on symmetric inputs without affecting the result.

Neighbourhoods are bitmask integers throughout; the refinement loop is
allocation-light and serves both the n<=14 enumeration inner loop and the
multi-thousand-vertex pipeline graphs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graphs import Graph
from .perms import Perm, PermGroup

# canonical codes pack the adjacency upper triangle of the relabelled
# graph; past this order the byte payload stops being a useful artifact
_CANON_LIMIT = 512


class SearchTimeout(Exception):
    """Raised when a search exceeds its cooperative deadline."""


@dataclass(frozen=True)
class CanonicalCode:
    """Isomorphism-class certificate: code bytes plus the relabelling used.

    ``labeling[pos] = vertex`` lists vertices in canonical order; two
    graphs are isomorphic iff their code bytes are equal.
    """

    code: bytes
    labeling: tuple[int, ...]


def _refine_cells(nbrs, cells: list[list[int]], alpha: list[int]) -> list[list[int]]:
    """Refine an ordered partition to equitable, seeded by worklist `alpha`.

    `nbrs` is a neighbour-list table; `alpha` holds indices into `cells`
    (all of them for a cold start, or just the fragments of an
    individualisation when the rest is already equitable).  Cells split by
    splitter-adjacency counts, fragments ordered by count ascending and
    re-enqueued; only cells containing a splitter neighbour are examined.
    Cell creation order is label-independent, so the resulting ordered
    partition is equivariant under relabelling; the split forest is
    flattened back into partition order at the end.
    """
    n = len(nbrs)
    store: list[list[int]] = [list(c) for c in cells]
    cellof = [0] * n
    for i, c in enumerate(store):
        for v in c:
            cellof[v] = i
    kids: dict[int, tuple[int, ...]] = {}
    dead = bytearray(len(store))
    queue = list(alpha)
    qi = 0
    cnt = [0] * n
    vstamp = [0] * n
    cstamp = [0] * len(store)
    rnd = 0
    while qi < len(queue):
        w = queue[qi]
        qi += 1
        if dead[w]:
            continue
        rnd += 1
        # count splitter-adjacencies by walking the splitter's edges once
        touched: list[int] = []
        for v in store[w]:
            for u in nbrs[v]:
                if vstamp[u] == rnd:
                    cnt[u] += 1
                else:
                    vstamp[u] = rnd
                    cnt[u] = 1
                    cid = cellof[u]
                    if cstamp[cid] != rnd and len(store[cid]) > 1:
                        cstamp[cid] = rnd
                        touched.append(cid)
        touched.sort()
        for cid in touched:
            cell = store[cid]
            buckets: dict[int, list[int]] = {}
            for v in cell:
                c = cnt[v] if vstamp[v] == rnd else 0
                b = buckets.get(c)
                if b is None:
                    buckets[c] = [v]
                else:
                    b.append(v)
            if len(buckets) == 1:
                continue
            frag_ids = []
            for c in sorted(buckets):
                frag = buckets[c]
                fid = len(store)
                store.append(frag)
                dead.append(0)
                cstamp.append(0)
                for v in frag:
                    cellof[v] = fid
                frag_ids.append(fid)
                queue.append(fid)
            kids[cid] = tuple(frag_ids)
            dead[cid] = 1
    out: list[list[int]] = []
    stack = list(range(len(cells) - 1, -1, -1))
    while stack:
        i = stack.pop()
        if i in kids:
            stack.extend(reversed(kids[i]))
        else:
            out.append(store[i])
    return out


def _masks_to_nbrs(masks) -> list[list[int]]:
    out = []
    for m in masks:
        row = []
        while m:
            low = m & -m
            row.append(low.bit_length() - 1)
            m ^= low
        out.append(row)
    return out


def _equitable_refine(masks, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition (cold start)."""
    return _refine_cells(_masks_to_nbrs(masks), cells, list(range(len(cells))))


def refine_partition(g: Graph, partition) -> list[tuple[int, ...]]:
    """Coarsest equitable refinement of an ordered partition of V(g)."""
    seen = set()
    for cell in partition:
        for v in cell:
            if v in seen or not 0 <= v < g.n:
                raise ValueError("not a partition of the vertex set")
            seen.add(v)
    if len(seen) != g.n:
        raise ValueError("not a partition of the vertex set")
    cells = _equitable_refine(g.neighbor_masks, [sorted(c) for c in partition])
    return [tuple(c) for c in cells]


def _is_automorphism(masks, n: int, images) -> bool:
    for v in range(n):
        m = masks[v]
        s = 0
        while m:
            low = m & -m
            s |= 1 << images[low.bit_length() - 1]
            m ^= low
        if s != masks[images[v]]:
            return False
    return True


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _bit_index(a: int, b: int, n: int) -> int:
    # upper-triangle row-major position of (a < b)
    return a * n - a * (a + 1) // 2 + (b - a - 1)


class _Search:
    """One individualisation-refinement traversal over a fixed graph."""

    def __init__(self, n: int, masks, edges, want_code: bool, deadline: float | None):
        self.masks = masks
        self.nbrs = _masks_to_nbrs(masks)
        self.n = n
        self.edges = edges
        self.want_code = want_code
        self.deadline = deadline
        self.gens: list[tuple[int, ...]] = []
        self.first_lab: list[int] | None = None
        self.first_code: int | None = None
        self.best_code: int | None = None
        self.best_lab: list[int] | None = None

    @staticmethod
    def for_graph(g: Graph, want_code: bool, deadline: float | None = None):
        return _Search(g.n, g.neighbor_masks, g.edges, want_code, deadline)

    # -- leaf handling --------------------------------------------------

    def _leaf_lab(self, cells) -> list[int]:
        return [c[0] for c in cells]

    def _leaf_code(self, lab) -> int:
        n = self.n
        pos = [0] * n
        for p, v in enumerate(lab):
            pos[v] = p
        code = 0
        for u, v in self.edges:
            a, b = pos[u], pos[v]
            if a > b:
                a, b = b, a
            code |= 1 << _bit_index(a, b, n)
        return code

    def _try_automorphism(self, ref_lab, lab) -> bool:
        images = [0] * self.n
        for p in range(self.n):
            images[ref_lab[p]] = lab[p]
        if all(images[v] == v for v in range(self.n)):
            return False
        if _is_automorphism(self.masks, self.n, images):
            self.gens.append(tuple(images))
            return True
        return False

    def _handle_leaf(self, cells) -> None:
        lab = self._leaf_lab(cells)
        if self.first_lab is None:
            self.first_lab = lab
            if self.want_code:
                self.first_code = self._leaf_code(lab)
                self.best_code = self.first_code
                self.best_lab = lab
            return
        matched = self._try_automorphism(self.first_lab, lab)
        if self.want_code:
            code = self._leaf_code(lab)
            if code < self.best_code:
                self.best_code = code
                self.best_lab = lab
            elif code == self.best_code and not matched and lab != self.best_lab:
                self._try_automorphism(self.best_lab, lab)

    # -- tree walk -------------------------------------------------------

    def _target_cell_index(self, cells) -> int | None:
        best = None
        best_size = None
        for i, c in enumerate(cells):
            if len(c) > 1 and (best_size is None or len(c) < best_size):
                best, best_size = i, len(c)
        return best

    def _orbits_fixing(self, prefix: list[int]) -> tuple[_UnionFind, int]:
        uf = _UnionFind(self.n)
        used = 0
        for images in self.gens:
            if all(images[p] == p for p in prefix):
                used += 1
                for v in range(self.n):
                    uf.union(v, images[v])
        return uf, used

    def _node(self, cells, prefix: list[int]) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout("automorphism search missed its deadline")
        t_idx = self._target_cell_index(cells)
        if t_idx is None:
            self._handle_leaf(cells)
            return
        target = cells[t_idx]
        explored: list[int] = []
        uf = None
        gens_seen = -1
        for v in target:
            if explored:
                if len(self.gens) != gens_seen:
                    uf, _ = self._orbits_fixing(prefix)
                    gens_seen = len(self.gens)
                rv = uf.find(v)
                if any(uf.find(u) == rv for u in explored):
                    continue
            child = []
            for i, c in enumerate(cells):
                if i == t_idx:
                    child.append([v])
                    child.append([u for u in c if u != v])
                else:
                    child.append(list(c))
            # parent partition is equitable, so only the two fragments of
            # the individualised cell can drive further splitting
            child = _refine_cells(self.nbrs, child, [t_idx, t_idx + 1])
            prefix.append(v)
            self._node(child, prefix)
            prefix.pop()
            explored.append(v)

    def run(self, initial_cells, seed_gens, refine_root: bool = True) -> None:
        for images in seed_gens:
            tup = tuple(images)
            if len(tup) != self.n or not _is_automorphism(self.masks, self.n, tup):
                raise ValueError("seed permutation is not an automorphism")
            if any(i != j for i, j in enumerate(tup)):
                self.gens.append(tup)
        cells = [list(c) for c in initial_cells]
        if refine_root:
            cells = _refine_cells(self.nbrs, cells, list(range(len(cells))))
        self._node(cells, [])


def automorphism_group(
    g: Graph, known=None, deadline: float | None = None
) -> PermGroup:
    """Full automorphism group as a BSGS permutation group.

    `known` may carry already-verified automorphisms (e.g. lifted from a
    construction); they are re-checked, then used to prune the search from
    the start.  `deadline` (time.monotonic value) cancels cooperatively.
    """
    if g.n == 0:
        return PermGroup([], degree=0)
    search = _Search.for_graph(g, want_code=False, deadline=deadline)
    seeds = [p.images if isinstance(p, Perm) else tuple(p) for p in (known or [])]
    search.run([list(range(g.n))], seeds)
    return PermGroup([Perm(t) for t in search.gens], degree=g.n)


def canonical_form(g: Graph, deadline: float | None = None) -> CanonicalCode:
    """Canonical code: minimum leaf adjacency bitmap over the search tree.

    Stable across vertex relabellings; equal codes iff isomorphic.
    """
    if g.n > _CANON_LIMIT:
        raise ValueError(f"canonical codes limited to order {_CANON_LIMIT}")
    if g.n == 0:
        return CanonicalCode(b"\x00\x00\x00\x00", ())
    search = _Search.for_graph(g, want_code=True, deadline=deadline)
    search.run([list(range(g.n))], [])
    nbytes = (g.n * (g.n - 1) // 2 + 7) // 8
    payload = g.n.to_bytes(4, "big") + search.best_code.to_bytes(nbytes, "big")
    return CanonicalCode(payload, tuple(search.best_lab))


def canonical_code_and_group(
    g: Graph, deadline: float | None = None
) -> tuple[CanonicalCode, PermGroup]:
    """Canonical form and automorphism group from a single traversal."""
    if g.n > _CANON_LIMIT:
        raise ValueError(f"canonical codes limited to order {_CANON_LIMIT}")
    search = _Search.for_graph(g, want_code=True, deadline=deadline)
    search.run([list(range(g.n))], [])
    nbytes = (g.n * (g.n - 1) // 2 + 7) // 8
    payload = g.n.to_bytes(4, "big") + search.best_code.to_bytes(nbytes, "big")
    code = CanonicalCode(payload, tuple(search.best_lab))
    return code, PermGroup([Perm(t) for t in search.gens], degree=g.n)


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Isomorphism by canonical-code equality (cheap invariants first)."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degrees) != sorted(g2.degrees):
        return False
    return canonical_form(g1).code == canonical_form(g2).code
