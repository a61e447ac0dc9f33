"""Finite groups given by Cayley tables, and their subgroups.

Elements are indices ``0..order-1`` with ``0`` the identity.  Groups built
from permutations keep the permutations as ``element_labels``; permutations
compose right-to-left, ``(s*t)(i) = s(t(i))``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

Perm = tuple[int, ...]

CYCLIC = "cyclic"
METACYCLIC = "metacyclic"
OTHER = "other"


class GroupError(ValueError):
    """Malformed group input."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mult_table: tuple[tuple[int, ...], ...]
    generators: tuple[int, ...]
    element_labels: tuple[Perm, ...] | None = None

    def __post_init__(self):
        if len(self.mult_table) != self.order:
            raise GroupError("multiplication table has the wrong size")

    def mul(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            row = self.mult_table[a]
            inv[a] = row.index(0)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, s: int, a: int) -> int:
        """s a s^-1."""
        return self.mul(self.mul(s, a), self.inv(s))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def spanning_tree(self) -> tuple[tuple[int, int, int], ...]:
        """BFS tree from the identity: ``(element, parent, generator position)``.

        ``element = parent * generators[position]``; the identity is omitted.
        """
        return _bfs_tree(self, self.generators, range(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        t = self.mult_table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def closure(self, gens) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, elements) -> "Subgroup":
        """Wrap a closed element set as a :class:`Subgroup` (validated)."""
        elems = tuple(sorted(set(int(e) for e in elements)))
        if not elems or elems[0] != 0:
            raise GroupError("subgroup must contain the identity")
        if any(e < 0 or e >= self.order for e in elems):
            raise GroupError("element index out of range")
        s = set(elems)
        for a in elems:
            if self.inv(a) not in s or any(self.mul(a, b) not in s for b in elems):
                raise GroupError("element set is not closed under multiplication")
        return _make_subgroup(self, elems)

    def generated_subgroup(self, gens) -> "Subgroup":
        return _make_subgroup(self, tuple(sorted(self.closure(gens))))

    @cached_property
    def trivial(self) -> "Subgroup":
        return _make_subgroup(self, (0,))

    @cached_property
    def whole(self) -> "Subgroup":
        return _make_subgroup(self, tuple(range(self.order)))

    @cached_property
    def _subgroup_data(self):
        return _enumerate_subgroups(self)

    def label(self, a: int) -> str:
        if self.element_labels is None:
            return f"g{a}"
        return cycle_string(self.element_labels[a])


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    elements: tuple[int, ...]
    classification: str
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in self._elemset

    @cached_property
    def _elemset(self) -> frozenset[int]:
        return frozenset(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._elemset <= other._elemset

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    @cached_property
    def spanning_tree(self) -> tuple[tuple[int, int, int], ...]:
        return _bfs_tree(self.parent, self.generators, self.elements)

    @property
    def is_cyclic(self) -> bool:
        return self.classification == CYCLIC


def _bfs_tree(G: FiniteGroup, gens, elements) -> tuple[tuple[int, int, int], ...]:
    tree = []
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for pos, g in enumerate(gens):
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                tree.append((y, x, pos))
                queue.append(y)
    if len(seen) != len(elements):
        raise GroupError("generators do not generate the element set")
    return tuple(tree)


def _small_generating_set(G: FiniteGroup, elems: tuple[int, ...]) -> tuple[int, ...]:
    # greedy, largest element orders first, ties by index
    order = sorted(elems[1:], key=lambda a: (-G.element_order(a), a))
    gens: list[int] = []
    span = frozenset([0])
    for a in order:
        if len(span) == len(elems):
            break
        if a not in span:
            gens.append(a)
            span = G.closure(gens)
    return tuple(gens)


def _classify(G: FiniteGroup, elems: tuple[int, ...]) -> str:
    n = len(elems)
    if any(G.element_order(a) == n for a in elems):
        return CYCLIC
    for a in elems:
        N = G.closure([a])
        if n % len(N) or any(G.conj(s, x) not in N for s in elems for x in N):
            continue
        need = n // len(N)
        # H/N cyclic iff some coset bN has order |H/N|
        for b in elems:
            k, x = 1, b
            while x not in N:
                x = G.mul(x, b)
                k += 1
            if k == need:
                return METACYCLIC
    return OTHER


def _make_subgroup(G: FiniteGroup, elems: tuple[int, ...]) -> Subgroup:
    return Subgroup(G, elems, _classify(G, elems), _small_generating_set(G, elems))


# ---------------------------------------------------------------- construction


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse 1-indexed cycle notation such as ``"(1 2)(3 4)"`` into a 0-indexed tuple."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\))*", text):
        raise GroupError(f"malformed cycle notation: {text!r}")
    cycles = [
        [int(x) - 1 for x in re.split(r"[\s,]+", c.strip()) if x]
        for c in re.findall(r"\(([^)]*)\)", text)
    ]
    pts = [p for c in cycles for p in c]
    if any(p < 0 for p in pts):
        raise GroupError("points are 1-indexed")
    n = max([degree or 0] + [p + 1 for p in pts])
    img = list(range(n))
    seen: set[int] = set()
    for c in cycles:
        if len(set(c)) != len(c) or seen & set(c):
            raise GroupError(f"cycles are not disjoint: {text!r}")
        seen |= set(c)
        for i, p in enumerate(c):
            img[p] = c[(i + 1) % len(c)]
    return tuple(img)


def cycle_string(p: Perm) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j + 1)
            j = p[j]
        out.append("(" + " ".join(map(str, c)) + ")")
    return "".join(out) or "()"


def _compose(s: Perm, t: Perm) -> Perm:
    return tuple(s[i] for i in t)


def build_group(generator_permutations) -> FiniteGroup:
    """Group generated by permutations (tuples, lists or cycle strings).

    Elements are numbered breadth-first from the identity, multiplying on the
    right by the sorted generators.
    """
    raw = [parse_cycles(g) if isinstance(g, str) else tuple(int(x) for x in g) for g in generator_permutations]
    n = max([len(p) for p in raw] + [0])
    gens: list[Perm] = []
    for p in raw:
        if sorted(p) != list(range(len(p))):
            raise GroupError(f"not a permutation: {p}")
        p = p + tuple(range(len(p), n))
        gens.append(p)
    ident = tuple(range(n))
    gens = sorted(set(g for g in gens if g != ident))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _compose(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = tuple(tuple(index[_compose(a, b)] for b in elems) for a in elems)
    return FiniteGroup(len(elems), table, tuple(index[g] for g in gens), tuple(elems))


def from_table(table, generators=None) -> FiniteGroup:
    """Group from an explicit Cayley table (index 0 must be the identity)."""
    t = tuple(tuple(int(x) for x in row) for row in table)
    n = len(t)
    if n == 0 or any(len(r) != n for r in t):
        raise GroupError("Cayley table must be square and nonempty")
    if any(sorted(r) != list(range(n)) for r in t) or any(
        sorted(t[i][j] for i in range(n)) != list(range(n)) for j in range(n)
    ):
        raise GroupError("Cayley table is not a Latin square")
    if t[0] != tuple(range(n)) or any(t[i][0] != i for i in range(n)):
        raise GroupError("index 0 is not a two-sided identity")
    for a, b, c in product(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            raise GroupError("Cayley table is not associative")
    G0 = FiniteGroup(n, t, ())
    gens = tuple(generators) if generators is not None else _small_generating_set(G0, tuple(range(n)))
    if len(G0.closure(gens)) != n:
        raise GroupError("generators do not generate the group")
    return FiniteGroup(n, t, tuple(gens))


# ------------------------------------------------------------- subgroup lattice


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, sorted by (order, element list)."""
    return list(_subgroup_data(G)[0])


def subgroup_classes(G: FiniteGroup) -> list[Subgroup]:
    """One representative (lexicographically smallest) per conjugacy class."""
    return list(_subgroup_data(G)[1])


def cyclic_subgroup_classes(G: FiniteGroup) -> list[Subgroup]:
    return [h for h in subgroup_classes(G) if h.is_cyclic]


def conjugacy_class_of(h: Subgroup) -> list[Subgroup]:
    G = h.parent
    sets = {tuple(sorted(G.conj(s, a) for a in h.elements)) for s in range(G.order)}
    return [_lookup(G, e) for e in sorted(sets)]


def class_representative(h: Subgroup) -> Subgroup:
    return conjugacy_class_of(h)[0]


def _lookup(G: FiniteGroup, elems: tuple[int, ...]) -> Subgroup:
    return _subgroup_data(G)[2][elems]


def _subgroup_data(G: FiniteGroup):
    return G._subgroup_data


def _enumerate_subgroups(G: FiniteGroup):
    cyclic = {G.closure([a]) for a in range(G.order)}
    found: set[frozenset[int]] = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = G.closure(list(H | C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    keyed = sorted((len(s), tuple(sorted(s))) for s in found)
    subs = {e: _make_subgroup(G, e) for _, e in keyed}
    allsubs = [subs[e] for _, e in keyed]
    reps = []
    seen: set[tuple[int, ...]] = set()
    for h in allsubs:
        if h.elements in seen:
            continue
        orbit = {tuple(sorted(G.conj(s, a) for a in h.elements)) for s in range(G.order)}
        seen |= orbit
        reps.append(subs[min(orbit)])
    reps.sort(key=lambda h: (h.order, h.elements))
    return tuple(allsubs), tuple(reps), subs


# ------------------------------------------------------------------ named groups


def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return build_group([])
    return build_group([tuple((i + 1) % n for i in range(n))])


def klein_four() -> FiniteGroup:
    return build_group(["(1 2)", "(3 4)"])


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return build_group([rot, ref])


def symmetric_group(n: int) -> FiniteGroup:
    if n < 2:
        return build_group([])
    return build_group(["(1 2)", "(" + " ".join(map(str, range(1, n + 1))) + ")"])


def alternating_group(n: int) -> FiniteGroup:
    gens = ["(" + f"1 2 {k}" + ")" for k in range(3, n + 1)]
    return build_group(gens)


def quaternion_group() -> FiniteGroup:
    # regular representation of Q8 on 8 points
    return build_group(["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H as permutations on the disjoint union of their regular actions."""
    n, m = G.order, H.order
    gens = []
    for g in G.generators:
        gens.append(tuple(G.mul(g, i) for i in range(n)) + tuple(range(n, n + m)))
    for h in H.generators:
        gens.append(tuple(range(n)) + tuple(n + H.mul(h, j) for j in range(m)))
    return build_group(gens)
