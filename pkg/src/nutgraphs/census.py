"""Isomorph-free exhaustive generation and nut-graph censuses.

Generation is by canonical augmentation: graphs grow one vertex per level,
candidate neighbourhoods for the new vertex are reduced to orbit
representatives under the parent's automorphisms, and a candidate child is
accepted exactly when its new vertex lies in the same automorphism orbit
as the vertex occupying the last canonical position.  Together the two
rules make every isomorphism class appear exactly once over the whole run.
Because refinement splits cells in place, the canonical-deletion vertex
always sits in the last cell of the root equitable partition, so most
candidates are decided by one refinement pass and no search at all.

Regular-graph generation runs the same tree under a degree cap and prunes
by remaining-degree feasibility, which is what makes connected 4-regular
generation up to n = 14 finish in desk time.  Work shards over parents;
emitted streams are sorted by canonical code per order, so output is
independent of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .graphs import Graph, is_connected
from .kernel import nut_certificate
from .perms import PermGroup, groups_isomorphic
from .autgroup import _Search, _UnionFind, _refine_cells, _masks_to_nbrs

_DEFAULT_CEILING = 10
_REGULAR_CEILING = 14

# walks are deterministic, so levels are shared across queries;
# values are lists of edge-bitmask ints in tree order
_ALL_LEVELS: dict[int, list[int]] = {1: [0]}
_REG_FINAL: dict[tuple[int, int], list[int]] = {}
_EMIT_CACHE: dict[object, list[tuple[int, int]]] = {}


class CeilingExceeded(ValueError):
    pass


@dataclass(frozen=True)
class CensusResult:
    n: int
    filter: str           # 'all' | 'connected' | 'd-regular' | 'nut'
    count: int
    witnesses: tuple[bytes, ...] | None = None


@dataclass(frozen=True)
class MinimalityResult:
    group_order: int
    predicate: str
    min_order: int | None   # None: not found within max_n
    candidate_count: int
    witnesses: tuple[Graph, ...]


# -- compact graph encoding (edge bitmask over the upper triangle) ---------


def _pair_index(u: int, v: int, n: int) -> int:
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def _mask_to_graph(n: int, mask: int) -> Graph:
    edges = []
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            if mask >> idx & 1:
                edges.append((u, v))
            idx += 1
    return Graph(n, tuple(edges))


def _graph_to_mask(g: Graph) -> int:
    mask = 0
    for u, v in g.edges:
        mask |= 1 << _pair_index(u, v, g.n)
    return mask


def _nbr_masks_from_mask(n: int, mask: int) -> list[int]:
    out = [0] * n
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            if mask >> idx & 1:
                out[u] |= 1 << v
                out[v] |= 1 << u
            idx += 1
    return out


# -- acceptance machinery ----------------------------------------------------


def _degree_cells(n: int, degs: list[int]) -> list[list[int]]:
    """Degree classes ascending: the state of a unit-partition refinement
    after its first splitter pass, so seeding with these is equivalent."""
    buckets: dict[int, list[int]] = {}
    for v in range(n):
        buckets.setdefault(degs[v], []).append(v)
    return [buckets[c] for c in sorted(buckets)]


def _root_partition(n: int, nbrs: list[list[int]], degs: list[int]) -> list[list[int]]:
    cells = _degree_cells(n, degs)
    if len(cells) == n:
        return cells
    return _refine_cells(nbrs, cells, list(range(len(cells))))


def _parent_aut_gens(k: int, nbr_masks: list[int]) -> list[tuple[int, ...]]:
    """Automorphism generators of a parent (empty if refinement is discrete)."""
    nbrs = _masks_to_nbrs(nbr_masks)
    root = _root_partition(k, nbrs, [len(r) for r in nbrs])
    if all(len(c) == 1 for c in root):
        return []
    s = _Search(k, nbr_masks, None, want_code=False, deadline=None)
    s.run([list(c) for c in root], [], refine_root=False)
    return s.gens


def _orbit_reps(cands: list[int], gens: list[tuple[int, ...]], k: int) -> list[int]:
    """Orbit representatives of candidate neighbourhood masks under the
    parent automorphisms (candidate sets are closed under them)."""
    if not gens:
        return cands
    index = {m: i for i, m in enumerate(cands)}
    uf = _UnionFind(len(cands))
    for gi, images in enumerate(gens):
        for m in cands:
            img = 0
            b = m
            while b:
                low = b & -b
                img |= 1 << images[low.bit_length() - 1]
                b ^= low
            j = index.get(img)
            if j is not None:
                uf.union(index[m], j)
    return [m for i, m in enumerate(cands) if uf.find(i) == i]


def _accept_candidate(n: int, nbr: list[int]) -> bool:
    """Canonical-deletion test for the embedding whose new vertex is n-1.

    One refinement pass decides most cases: the canonical-deletion vertex
    lives in the last cell of the root equitable partition, so a singleton
    last cell answers immediately.  Otherwise the canonical leaf picks the
    deletion vertex and discovered automorphism orbits answer membership.
    """
    nbrs = _masks_to_nbrs(nbr)
    root = _root_partition(n, nbrs, [len(r) for r in nbrs])
    last = root[-1]
    new_v = n - 1
    if len(last) == 1:
        return last[0] == new_v
    if new_v not in last:
        return False
    # edges only needed for leaf codes
    edges = []
    for u in range(n):
        m = nbr[u] >> (u + 1)
        while m:
            low = m & -m
            edges.append((u, u + 1 + low.bit_length() - 1))
            m ^= low
    s = _Search(n, nbr, tuple(edges), want_code=True, deadline=None)
    s.run([list(c) for c in root], [], refine_root=False)
    del_v = s.best_lab[-1]
    if del_v == new_v:
        return True
    uf = _UnionFind(n)
    for images in s.gens:
        for v in range(n):
            uf.union(v, images[v])
    return uf.find(new_v) == uf.find(del_v)


# -- children generation ------------------------------------------------------


def _children_all(k: int, parent_mask: int) -> list[int]:
    """Accepted child masks (tree order) for the all-graphs tree."""
    parent_nbr = _nbr_masks_from_mask(k, parent_mask)
    degs = [m.bit_count() for m in parent_nbr]
    cands = []
    for nb in range(1 << k):
        # the canonical-deletion vertex has maximum degree, so an accepted
        # new vertex must too
        s = nb.bit_count()
        ok = True
        for v in range(k):
            if degs[v] + (nb >> v & 1) > s:
                ok = False
                break
        if ok:
            cands.append(nb)
    reps = _orbit_reps(cands, _parent_aut_gens(k, parent_nbr), k)
    out = []
    n = k + 1
    base = _remap_parent_mask(parent_mask, k)
    for nb in reps:
        nbr = [m | ((nb >> v & 1) << k) for v, m in enumerate(parent_nbr)]
        nbr.append(nb)
        if _accept_candidate(n, nbr):
            out.append(base | nb_child_bits(nb, k))
    return out


def nb_child_bits(nb: int, k: int) -> int:
    """Edge bits contributed by attaching vertex k to the set nb."""
    bits = 0
    n = k + 1
    b = nb
    while b:
        low = b & -b
        v = low.bit_length() - 1
        bits |= 1 << _pair_index(v, k, n)
        b ^= low
    return bits


def _remap_parent_mask(parent_mask: int, k: int) -> int:
    """Reindex a k-vertex edge mask into the (k+1)-vertex pair numbering."""
    out = 0
    idx = 0
    for u in range(k):
        for v in range(u + 1, k):
            if parent_mask >> idx & 1:
                out |= 1 << _pair_index(u, v, k + 1)
            idx += 1
    return out


def _feasible(degs: list[int], d: int, future: int) -> bool:
    """Can past deficits still be completed to d-regularity by `future`
    more vertices?  Necessary conditions only, all chain-safe."""
    total = 0
    for dv in degs:
        deficit = d - dv
        if deficit < 0 or deficit > future:
            return False
        total += deficit
    cap = d * future
    if total > cap:
        return False
    if (cap - total) % 2:
        return False
    if (cap - total) // 2 > future * (future - 1) // 2:
        return False
    return True


def _has_saturated_component(n: int, nbr: list[int], degs: list[int], d: int) -> bool:
    """A component with every degree equal d can no longer join the rest."""
    unvisited = (1 << n) - 1
    while unvisited:
        start = (unvisited & -unvisited).bit_length() - 1
        comp = 1 << start
        frontier = [start]
        while frontier:
            v = frontier.pop()
            new = nbr[v] & ~comp
            comp |= new
            while new:
                low = new & -new
                frontier.append(low.bit_length() - 1)
                new ^= low
        saturated = True
        c = comp
        while c:
            low = c & -c
            if degs[low.bit_length() - 1] < d:
                saturated = False
                break
            c ^= low
        if saturated:
            return True
        unvisited &= ~comp
    return False


def _connected_masks(n: int, nbr: list[int]) -> bool:
    seen = 1
    frontier = [0]
    while frontier:
        v = frontier.pop()
        new = nbr[v] & ~seen
        seen |= new
        while new:
            low = new & -new
            frontier.append(low.bit_length() - 1)
            new ^= low
    return seen == (1 << n) - 1


def _children_regular(k: int, parent_mask: int, n: int, d: int) -> list[int]:
    """Accepted child masks in the degree-capped tree towards connected
    d-regular graphs of order n."""
    parent_nbr = _nbr_masks_from_mask(k, parent_mask)
    degs = [m.bit_count() for m in parent_nbr]
    future_after = n - k - 1            # vertices still to come after the new one
    forced = [v for v in range(k) if d - degs[v] == n - k]
    if len(forced) > d:
        return []
    optional = [v for v in range(k) if degs[v] < d and d - degs[v] != n - k]
    cands = []
    for extra in range(0, d - len(forced) + 1):
        for combo in combinations(optional, extra):
            nbrs = forced + list(combo)
            new_deg = len(nbrs)
            if d - new_deg > future_after:
                continue
            if k + 1 == n and new_deg != d:
                continue
            degs2 = degs[:]
            top = new_deg
            for v in nbrs:
                degs2[v] += 1
                if degs2[v] > top:
                    top = degs2[v]
            if top > new_deg:      # canonical deletion has maximum degree
                continue
            degs2.append(new_deg)
            if not _feasible(degs2, d, future_after):
                continue
            nb = 0
            for v in nbrs:
                nb |= 1 << v
            cands.append(nb)
    if not cands:
        return []
    cands.sort()
    reps = _orbit_reps(cands, _parent_aut_gens(k, parent_nbr), k)
    out = []
    base = _remap_parent_mask(parent_mask, k)
    for nb in reps:
        nbr = [m | ((nb >> v & 1) << k) for v, m in enumerate(parent_nbr)]
        nbr.append(nb)
        degs2 = [m.bit_count() for m in nbr]
        if k + 1 == n:
            if any(dv != d for dv in degs2) or not _connected_masks(n, nbr):
                continue
        elif _has_saturated_component(k + 1, nbr, degs2, d):
            continue
        if _accept_candidate(k + 1, nbr):
            out.append(base | nb_child_bits(nb, k))
    return out


# -- level-by-level walks ----------------------------------------------------


def _expand_chunk(args):
    mode, k, chunk, n, d = args
    if mode == "all":
        return [_children_all(k, m) for m in chunk]
    return [_children_regular(k, m, n, d) for m in chunk]


def _next_level(mode: str, k: int, parents: list[int], n: int, d: int, jobs: int) -> list[int]:
    if jobs <= 1 or len(parents) < 64:
        rows = _expand_chunk((mode, k, parents, n, d))
    else:
        chunks = []
        step = max(16, len(parents) // (jobs * 8))
        for i in range(0, len(parents), step):
            chunks.append((mode, k, parents[i : i + step], n, d))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows_nested = list(pool.map(_expand_chunk, chunks))
        rows = [row for group in rows_nested for row in group]
    return [item for row in rows for item in row]


def _levels_all(max_n: int, jobs: int = 1):
    """Yield (k, [mask...]) for every order 1..max_n (cached)."""
    yield 1, _ALL_LEVELS[1]
    for k in range(1, max_n):
        if k + 1 not in _ALL_LEVELS:
            _ALL_LEVELS[k + 1] = _next_level("all", k, _ALL_LEVELS[k], 0, 0, jobs)
        yield k + 1, _ALL_LEVELS[k + 1]


def _regular_final(n: int, d: int, jobs: int) -> list[int]:
    if (n, d) not in _REG_FINAL:
        level = [0]
        for k in range(1, n):
            level = _next_level("regular", k, level, n, d, jobs)
            if not level:
                break
        _REG_FINAL[(n, d)] = level
    return _REG_FINAL[(n, d)]


def _emitted(key, n: int, masks: list[int], jobs: int = 1) -> list[tuple[int, int]]:
    """(mask, aut_order) sorted by canonical code; cached per level."""
    if key not in _EMIT_CACHE:
        if jobs > 1 and len(masks) >= 256:
            chunks = []
            step = max(64, len(masks) // (jobs * 8))
            for i in range(0, len(masks), step):
                chunks.append((n, masks[i : i + step]))
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_emit_chunk, chunks))
            decorated = [t for row in rows for t in row]
        else:
            decorated = _emit_chunk((n, masks))
        decorated.sort()
        _EMIT_CACHE[key] = [(m, a) for _, m, a in decorated]
    return _EMIT_CACHE[key]


def _emit_chunk(args) -> list[tuple[int, int, int]]:
    n, masks = args
    out = []
    for mask in masks:
        g = _mask_to_graph(n, mask)
        s = _Search.for_graph(g, want_code=True)
        s.run([list(range(n))], [])
        order = PermGroup([list(t) for t in s.gens], degree=n).order() if s.gens else 1
        out.append((s.best_code, mask, order))
    return out


# -- public API ----------------------------------------------------------------


def enumerate_graphs(n: int, connected_only: bool = False, jobs: int = 1):
    """One representative per isomorphism class of order-n graphs, as a
    stream sorted by canonical code (independent of `jobs`)."""
    if n < 1:
        raise CeilingExceeded("order must be at least 1")
    if n > _DEFAULT_CEILING:
        raise CeilingExceeded(
            f"all-graph enumeration is capped at n = {_DEFAULT_CEILING}"
        )
    for k, level in _levels_all(n, jobs=jobs):
        if k == n:
            for mask, _ in _emitted(("all", n), n, level, jobs):
                g = _mask_to_graph(n, mask)
                if connected_only and not is_connected(g):
                    continue
                yield g


def enumerate_regular(n: int, d: int, jobs: int = 1):
    """One representative per class of connected d-regular graphs of order n."""
    if n * d % 2:
        raise ValueError("n * d must be even")
    if not 0 <= d < n:
        raise ValueError("need 0 <= d < n")
    if n > _REGULAR_CEILING:
        raise CeilingExceeded(
            f"regular enumeration is capped at n = {_REGULAR_CEILING}"
        )
    level = _regular_final(n, d, jobs)
    for mask, _ in _emitted(("reg", n, d), n, level, jobs):
        yield _mask_to_graph(n, mask)


def regular_with_aut_orders(n: int, d: int, jobs: int = 1):
    """(Graph, |Aut|) pairs for connected d-regular graphs of order n."""
    if n * d % 2:
        raise ValueError("n * d must be even")
    if n > _REGULAR_CEILING:
        raise CeilingExceeded(
            f"regular enumeration is capped at n = {_REGULAR_CEILING}"
        )
    level = _regular_final(n, d, jobs)
    for mask, aut_order in _emitted(("reg", n, d), n, level, jobs):
        yield _mask_to_graph(n, mask), aut_order


def census_nuts(max_n: int, jobs: int = 1) -> list[CensusResult]:
    """Per-order counts of nut graphs among connected graphs, orders 1..max_n."""
    if max_n > _DEFAULT_CEILING:
        raise CeilingExceeded(
            f"all-graph censuses are capped at n = {_DEFAULT_CEILING}"
        )
    out = []
    for k, level in _levels_all(max_n, jobs=jobs):
        count = 0
        for mask in level:
            g = _mask_to_graph(k, mask)
            if not is_connected(g):
                continue
            if nut_certificate(g).is_nut:
                count += 1
        out.append(CensusResult(n=k, filter="nut", count=count))
    return out


def _predicate_stream(predicate: str, order: int, jobs: int):
    """Graphs of one order satisfying a minimality predicate, with |Aut|.

    For the nut predicate, |Aut| is computed only for the survivors.
    """
    from .autgroup import automorphism_group

    if predicate == "nut":
        for k, level in _levels_all(order, jobs=jobs):
            if k < order:
                continue
            for mask in level:
                g = _mask_to_graph(order, mask)
                if is_connected(g) and nut_certificate(g).is_nut:
                    yield g, automorphism_group(g).order()
    elif predicate.endswith("-regular"):
        d = int(predicate.split("-")[0])
        yield from regular_with_aut_orders(order, d, jobs=jobs)
    elif predicate.endswith("-regular-nut"):
        d = int(predicate.split("-")[0])
        for g, aut_order in regular_with_aut_orders(order, d, jobs=jobs):
            if nut_certificate(g).is_nut:
                yield g, aut_order
    else:
        raise ValueError(f"unknown predicate {predicate!r}")


def minimal_order_for_group(
    target: PermGroup,
    predicate: str,
    max_n: int,
    jobs: int = 1,
    iso_bound: int = 2000,
) -> MinimalityResult:
    """Smallest order at which some predicate graph has Aut isomorphic to
    `target`, scanning orders exhaustively and ascending.

    The |Aut| = |target| filter is exact; survivors are compared with the
    bounded abstract-isomorphism test.  Not found within max_n gives
    min_order None (an explicitly open verdict, not a failure).
    """
    from .autgroup import automorphism_group

    t_order = target.order()
    for order in range(1, max_n + 1):
        if predicate != "nut" and order * int(predicate.split("-")[0]) % 2:
            continue
        witnesses = []
        for g, aut_order in _predicate_stream(predicate, order, jobs):
            if aut_order != t_order:
                continue
            verdict = groups_isomorphic(automorphism_group(g), target, bound=iso_bound)
            if verdict is True:
                witnesses.append(g)
            elif verdict is None:
                raise ValueError(
                    f"|Aut| = {aut_order} exceeds the isomorphism bound {iso_bound}"
                )
        if witnesses:
            return MinimalityResult(
                group_order=t_order,
                predicate=predicate,
                min_order=order,
                candidate_count=len(witnesses),
                witnesses=tuple(witnesses),
            )
    return MinimalityResult(
        group_order=t_order,
        predicate=predicate,
        min_order=None,
        candidate_count=0,
        witnesses=(),
    )


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))
