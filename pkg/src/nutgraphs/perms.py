"""Permutation groups: BSGS via deterministic Schreier-Sims.

Points are 0-based internally; the external cycle-notation format is
1-based, and conversion is confined to :func:`parse_cycles` /
:func:`format_cycles`.  The Schreier-Sims variant here is deliberately
non-randomised: generator insertion order, orbit BFS order and base-point
choice are all fixed, so identical inputs give identical chains.
"""

from __future__ import annotations

import re
from itertools import product
from math import lcm


class PermError(ValueError):
    pass


class Perm:
    """Immutable permutation of 0..degree-1 stored as an image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        self.images = tuple(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(range(degree))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        """self then other: (self * other)(x) = other(self(x))."""
        o = other.images
        return Perm([o[i] for i in self.images])

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        out = 1
        for cyc in self.cycles():
            out = lcm(out, len(cyc))
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its minimum, sorted."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return sorted(out)

    def min_moved(self) -> int | None:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Perm({format_cycles(self)})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse 1-based disjoint-cycle notation, e.g. "(1,2,3)(4,5)".

    Points not mentioned are fixed; "()" is the identity.  Malformed text,
    repeated points and points above the degree are errors.
    """
    stripped = text.replace(" ", "")
    if not stripped:
        raise PermError("empty permutation text")
    if _CYCLE_RE.sub("", stripped):
        raise PermError(f"malformed cycle notation: {text!r}")
    images = list(range(degree))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            pts = [int(tok) for tok in body.split(",")]
        except ValueError as exc:
            raise PermError(f"bad point in {text!r}") from exc
        for p in pts:
            if not 1 <= p <= degree:
                raise PermError(f"point {p} outside 1..{degree}")
            if p - 1 in used:
                raise PermError(f"point {p} repeated")
            used.add(p - 1)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b - 1
    return Perm(images)


def format_cycles(perm: Perm) -> str:
    """1-based disjoint-cycle string; the identity prints as "()"."""
    cycs = perm.cycles()
    if not cycs:
        return "()"
    return "".join("(" + ",".join(str(p + 1) for p in cyc) + ")" for cyc in cycs)


class _ChainNode:
    """One level of a stabiliser chain.

    The node's group is generated by ``gens`` together with everything in
    the subchain; ``tree`` maps each point of the fundamental orbit to a
    transversal element carrying ``point`` to it... (t(base_point) == point).
    """

    __slots__ = ("degree", "base_point", "gens", "tree", "stab")

    def __init__(self, degree: int):
        self.degree = degree
        self.base_point: int | None = None
        self.gens: list[Perm] = []
        self.tree: dict[int, Perm] = {}
        self.stab: "_ChainNode | None" = None

    def all_gens(self) -> list[Perm]:
        node, out = self, []
        while node is not None and node.base_point is not None:
            out.extend(node.gens)
            node = node.stab
        return out

    def sift(self, perm: Perm) -> Perm:
        node, h = self, perm
        while node is not None and node.base_point is not None:
            img = h(node.base_point)
            t = node.tree.get(img)
            if t is None:
                return h
            h = h * t.inverse()
            node = node.stab
        return h

    def add_gen(self, perm: Perm) -> None:
        residue = self.sift(perm)
        if not residue.is_identity():
            self.add_new_gen(residue)

    def add_new_gen(self, perm: Perm) -> None:
        if self.base_point is None:
            self.base_point = perm.min_moved()
            self.tree = {self.base_point: Perm.identity(self.degree)}
            self.stab = _ChainNode(self.degree)
        if perm(self.base_point) == self.base_point:
            self.stab.add_new_gen(perm)
        else:
            self.gens.append(perm)
        # restore the Schreier property: sift every Schreier generator into
        # the subchain, repeating if that enlarged the stabiliser (a larger
        # stabiliser can enlarge this orbit and create new Schreier gens)
        while True:
            self.rebuild_tree()
            before = self.stab.order()
            gens = self.gens + self.stab.all_gens()
            for a in sorted(self.tree):
                ta = self.tree[a]
                for g in gens:
                    tb = self.tree[g(a)]
                    schreier = ta * g * tb.inverse()
                    if not schreier.is_identity():
                        self.stab.add_gen(schreier)
            if self.stab.order() == before:
                break

    def rebuild_tree(self) -> None:
        gens = self.gens + (self.stab.all_gens() if self.stab else [])
        tree = {self.base_point: Perm.identity(self.degree)}
        frontier = [self.base_point]
        while frontier:
            a = frontier.pop(0)
            ta = tree[a]
            for g in gens:
                b = g(a)
                if b not in tree:
                    tree[b] = ta * g
                    frontier.append(b)
        self.tree = tree

    def order(self) -> int:
        node, out = self, 1
        while node is not None and node.base_point is not None:
            out *= len(node.tree)
            node = node.stab
        return out


class PermGroup:
    """Permutation group with a base and strong generating set."""

    def __init__(self, generators, degree: int | None = None, base_prefix=()):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        gens = [g for g in gens if not g.is_identity()]
        if degree is None:
            if not gens:
                raise PermError("degree required for an empty generator list")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise PermError("generator degree mismatch")
        self.degree = degree
        self.generators = tuple(gens)
        self._root = _ChainNode(degree)
        # pre-pin requested base points (used for stabiliser computations)
        node = self._root
        for b in base_prefix:
            node.base_point = b
            node.tree = {b: Perm.identity(degree)}
            node.stab = _ChainNode(degree)
            node = node.stab
        for g in gens:
            self._root.add_gen(g)

    @property
    def base(self) -> tuple[int, ...]:
        out = []
        node = self._root
        while node is not None and node.base_point is not None:
            out.append(node.base_point)
            node = node.stab
        return tuple(out)

    def order(self) -> int:
        return self._root.order()

    def contains(self, perm: Perm) -> bool:
        if perm.degree != self.degree:
            return False
        return self._root.sift(perm).is_identity()

    def strong_generators(self) -> list[Perm]:
        return self._root.all_gens()

    def elements(self, limit: int | None = None) -> list[Perm]:
        """All group elements via transversal products; guarded by limit."""
        if limit is not None and self.order() > limit:
            raise PermError(f"group order {self.order()} exceeds limit {limit}")
        trans = []
        node = self._root
        while node is not None and node.base_point is not None:
            trans.append([node.tree[p] for p in sorted(node.tree)])
            node = node.stab
        out = []
        for combo in product(*reversed(trans)) if trans else [()]:
            p = Perm.identity(self.degree)
            for t in combo:
                p = p * t
            out.append(p)
        return out

    def orbit_partition(self) -> list[tuple[int, ...]]:
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for a in range(self.degree):
                ra, rb = find(a), find(g(a))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        cells: dict[int, list[int]] = {}
        for v in range(self.degree):
            cells.setdefault(find(v), []).append(v)
        return [tuple(cells[r]) for r in sorted(cells)]

    def __repr__(self) -> str:  # pragma: no cover
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_from_generators(gens, degree: int | None = None) -> PermGroup:
    """BSGS group from a generator list (degree required when empty)."""
    return PermGroup(gens, degree=degree)


def group_order(group: PermGroup) -> int:
    return group.order()


def orbits(group: PermGroup) -> list[tuple[int, ...]]:
    """Orbit partition of the points; cells sorted by their minima."""
    return group.orbit_partition()


def stabilizer(group: PermGroup, point: int) -> PermGroup:
    """Pointwise stabiliser of one point via a chain with base prefix [point]."""
    if not 0 <= point < group.degree:
        raise PermError(f"point {point} out of range")
    rebased = PermGroup(group.generators, degree=group.degree, base_prefix=[point])
    stab_node = rebased._root.stab
    gens = stab_node.all_gens() if stab_node is not None else []
    return PermGroup(gens, degree=group.degree)


def restrict_group(group: PermGroup, points) -> PermGroup:
    """Restriction to an invariant point set, relabelled to 0..len-1.

    Raises unless every generator maps the set onto itself.
    """
    pts = sorted(points)
    pos = {p: i for i, p in enumerate(pts)}
    restricted = []
    for g in group.generators:
        images = []
        for p in pts:
            q = g(p)
            if q not in pos:
                raise PermError("point set is not invariant under the group")
            images.append(pos[q])
        restricted.append(Perm(images))
    return PermGroup(restricted, degree=len(pts))


def perm_groups_equal(g1: PermGroup, g2: PermGroup) -> bool:
    """Equality as permutation groups on the same points (two-way inclusion)."""
    if g1.degree != g2.degree or g1.order() != g2.order():
        return False
    return all(g2.contains(g) for g in g1.generators) and all(
        g1.contains(g) for g in g2.generators
    )


def _element_order_profile(elements) -> dict[int, int]:
    prof: dict[int, int] = {}
    for e in elements:
        o = e.order()
        prof[o] = prof.get(o, 0) + 1
    return prof


def _generating_sequence(elements: list[Perm], degree: int) -> list[Perm]:
    """Short deterministic generating sequence via greedy subgroup growth."""
    target = len(elements)
    chosen: list[Perm] = []
    sub = {Perm.identity(degree)}
    for e in sorted(elements, key=lambda p: (-p.order(), p.images)):
        if e in sub:
            continue
        chosen.append(e)
        frontier = list(sub)
        while frontier:
            x = frontier.pop()
            for g in chosen:
                y = x * g
                if y not in sub:
                    sub.add(y)
                    frontier.append(y)
        if len(sub) == target:
            break
    return chosen


def _hom_closure(gens1: list[Perm], imgs: list[Perm], degree1: int):
    """Map extension on <gens1>; returns the mapping or None on conflict."""
    ident1 = Perm.identity(degree1)
    ident2 = Perm.identity(imgs[0].degree)
    mapping = {ident1: ident2}
    frontier = [ident1]
    while frontier:
        x = frontier.pop()
        fx = mapping[x]
        for g, h in zip(gens1, imgs):
            y = x * g
            fy = fx * h
            known = mapping.get(y)
            if known is None:
                mapping[y] = fy
                frontier.append(y)
            elif known != fy:
                return None
    return mapping


def groups_isomorphic(g1: PermGroup, g2: PermGroup, bound: int = 2000):
    """Abstract isomorphism test: True / False / None (undecided at bound).

    Distinct orders decide False outright.  Within the bound the test lists
    all elements, prunes by element-order profiles, then backtracks over
    generator images with incremental consistency checks.  Orders above the
    bound return None, never a guess.
    """
    o1, o2 = g1.order(), g2.order()
    if o1 != o2:
        return False
    if o1 > bound:
        return None
    els1 = g1.elements(limit=bound)
    els2 = g2.elements(limit=bound)
    if _element_order_profile(els1) != _element_order_profile(els2):
        return False
    gens1 = _generating_sequence(els1, g1.degree)
    if not gens1:
        return True  # both trivial
    by_order: dict[int, list[Perm]] = {}
    for e in sorted(els2, key=lambda p: p.images):
        by_order.setdefault(e.order(), []).append(e)
    orders1 = [g.order() for g in gens1]

    def backtrack(idx: int, imgs: list[Perm]) -> bool:
        if idx == len(gens1):
            mapping = _hom_closure(gens1, imgs, g1.degree)
            if mapping is None or len(mapping) != o1:
                return False
            return len(set(mapping.values())) == o1
        for cand in by_order.get(orders1[idx], ()):
            imgs.append(cand)
            if _hom_closure(gens1[: idx + 1], imgs, g1.degree) is not None:
                if backtrack(idx + 1, imgs):
                    imgs.pop()
                    return True
            imgs.pop()
        return False

    return backtrack(0, [])
