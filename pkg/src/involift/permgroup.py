"""The group generated by lifted steps: closure, orders, words, and the
dihedral-of-order-8 classification for two-step pipelines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lifting import Perm

DEFAULT_ELEMENT_CAP = 1_000_000


class ClosureCapExceeded(RuntimeError):
    """Closure enumeration would exceed the element cap."""

    def __init__(self, element_cap: int):
        super().__init__(f"group closure exceeds the cap of {element_cap} elements")
        self.element_cap = element_cap


def perm_compose(p: Perm, q: Perm) -> Perm:
    """p after q: (p composed with q)(s) = p(q(s))."""
    if p.total_width != q.total_width:
        raise ValueError(f"width mismatch: {p.total_width} vs {q.total_width}")
    pm = p.mapping
    return Perm(p.total_width, tuple(pm[v] for v in q.mapping))


def perm_inverse(p: Perm) -> Perm:
    inverse = [0] * len(p.mapping)
    for i, v in enumerate(p.mapping):
        inverse[v] = i
    return Perm(p.total_width, tuple(inverse))


def perm_order(p: Perm) -> int:
    """Smallest k >= 1 with p^k = identity, as the lcm of cycle lengths."""
    mapping = p.mapping
    seen = bytearray(len(mapping))
    order = 1
    for start in range(len(mapping)):
        if seen[start]:
            continue
        length = 0
        cursor = start
        while not seen[cursor]:
            seen[cursor] = 1
            cursor = mapping[cursor]
            length += 1
        order = math.lcm(order, length)
    return order


def evaluate_word(generators: Sequence[Perm], word: Iterable[int]) -> Perm:
    """Evaluate a generator word as a permutation product.

    The word reads left to right in composition order, so the rightmost
    symbol acts on a state first.
    """
    generators = tuple(generators)
    acc = Perm.identity(generators[0].total_width)
    for symbol in word:
        acc = perm_compose(acc, generators[symbol])
    return acc


@dataclass(frozen=True)
class GroupClosure:
    """A fully enumerated finite permutation group.

    elements[0] is the identity; words[e] is a minimal-length generator word
    evaluating to elements[e] (ties broken toward the lexicographically
    smallest word); cayley[i][j] is the index of elements[i] composed with
    elements[j].
    """

    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    words: tuple[tuple[int, ...], ...]
    cayley: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p.mapping: i for i, p in enumerate(self.elements)})

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, perm: Perm) -> int:
        try:
            return self._index[perm.mapping]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError("permutation is not an element of this group") from None

    def inverse_index(self, element: int) -> int:
        return self.cayley[element].index(0)


def closure(generators: Sequence[Perm], element_cap: int = DEFAULT_ELEMENT_CAP) -> GroupClosure:
    """Enumerate the generated group by breadth-first left multiplication.

    Starting from the identity, each frontier element is multiplied on the
    left by every generator (generators in given order, frontier in
    discovery order), which makes the discovery order deterministic and
    yields shortest, lexicographically smallest words.  The Cayley table is
    filled by lookup afterwards.  Raises :class:`ClosureCapExceeded` when
    the group has more than ``element_cap`` elements.
    """
    gens = tuple(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    width = gens[0].total_width
    for g in gens[1:]:
        if g.total_width != width:
            raise ValueError("generators must all act on the same width")
    if element_cap < 1:
        raise ValueError("element_cap must be >= 1")

    identity = Perm.identity(width)
    elements = [identity]
    words: list[tuple[int, ...]] = [()]
    index = {identity.mapping: 0}
    frontier = [0]
    while frontier:
        next_frontier = []
        for gi, gen in enumerate(gens):
            gm = gen.mapping
            for ei in frontier:
                product = tuple(gm[v] for v in elements[ei].mapping)
                if product in index:
                    continue
                if len(elements) >= element_cap:
                    raise ClosureCapExceeded(element_cap)
                index[product] = len(elements)
                words.append((gi,) + words[ei])
                elements.append(Perm(width, product))
                next_frontier.append(len(elements) - 1)
        frontier = next_frontier

    size = len(elements)
    cayley = []
    for i in range(size):
        pm = elements[i].mapping
        cayley.append(tuple(index[tuple(pm[v] for v in elements[j].mapping)] for j in range(size)))
    return GroupClosure(
        generators=gens, elements=tuple(elements), words=tuple(words), cayley=tuple(cayley)
    )


def shortest_word(group: GroupClosure, element: int) -> tuple[int, ...]:
    """Minimal generator word for an element, by index."""
    if not 0 <= element < len(group):
        raise ValueError(f"element index {element} out of range 0..{len(group) - 1}")
    return group.words[element]


def element_order_histogram(group: GroupClosure) -> dict[int, int]:
    """Multiset of element orders, as an order -> count map."""
    histogram: dict[int, int] = {}
    for p in group.elements:
        k = perm_order(p)
        histogram[k] = histogram.get(k, 0) + 1
    return dict(sorted(histogram.items()))


def _span(cayley: Sequence[Sequence[int]], seeds: Iterable[int]) -> int:
    """Size of the subgroup generated by the seed element indices."""
    seeds = tuple(seeds)
    members = {0}
    frontier = [0]
    while frontier:
        next_frontier = []
        for m in frontier:
            for s in seeds:
                t = cayley[s][m]
                if t not in members:
                    members.add(t)
                    next_frontier.append(t)
        frontier = next_frontier
    return len(members)


@dataclass(frozen=True)
class Dihedral8Witness:
    """Indices of a rotation A (order 4) and reflection B (order 2) with
    B A B = A^-1 and <A, B> the whole group."""

    rotation: int
    reflection: int
    from_generators: bool  # True when A = gen1 composed with gen2, B = gen2


def is_dihedral_8(group: GroupClosure) -> Dihedral8Witness | None:
    """Dihedral-of-order-8 test with an explicit witness pair.

    For a group built from exactly two generators (p, q), the pair
    A = p composed with q, B = q is tried first and reported when it works;
    otherwise all element pairs are searched in index order.
    """
    if len(group) != 8:
        return None
    orders = [perm_order(p) for p in group.elements]

    def qualifies(a: int, b: int) -> bool:
        if orders[a] != 4 or orders[b] != 2:
            return False
        if group.cayley[b][group.cayley[a][b]] != group.inverse_index(a):
            return False
        return _span(group.cayley, (a, b)) == len(group)

    if group.generator_count == 2:
        a = group.index_of(perm_compose(group.generators[0], group.generators[1]))
        b = group.index_of(group.generators[1])
        if qualifies(a, b):
            return Dihedral8Witness(a, b, from_generators=True)
    for a in range(len(group)):
        for b in range(len(group)):
            if qualifies(a, b):
                return Dihedral8Witness(a, b, from_generators=False)
    return None


def nondegeneracy_defects(generators: Sequence[Perm]) -> tuple[str, ...]:
    """Violations of the generic-case conditions: no generator may be the
    identity, generators must be pairwise distinct, and every adjacent
    product must have order 4.  Empty result means nondegenerate."""
    generators = tuple(generators)
    defects = []
    for i, g in enumerate(generators, start=1):
        if g.is_identity:
            defects.append(f"generator {i} is the identity")
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            if generators[i].mapping == generators[j].mapping:
                defects.append(f"generators {i + 1} and {j + 1} are equal")
    for i in range(len(generators) - 1):
        k = perm_order(perm_compose(generators[i + 1], generators[i]))
        if k != 4:
            defects.append(f"product of adjacent generators {i + 1} and {i + 2} has order {k}, expected 4")
    return tuple(defects)
