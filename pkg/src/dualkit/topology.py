"""Finite topologies stored as the full open-set family, one bitmask per open.

Subbases are closed under intersection and union explicitly; no
specialization-preorder shortcut is taken in the core (a preorder view
exists only for rendering).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import BudgetExceeded, InvalidInput

MAX_POINTS = 20


def mask_of(points) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def bits_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class FiniteTopology:
    """Points 0..n-1 plus every open set as a bitmask."""

    n: int
    opens: frozenset[int]

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_POINTS:
            raise InvalidInput("point count must lie in 0..%d" % MAX_POINTS)
        full = (1 << self.n) - 1
        if 0 not in self.opens or full not in self.opens:
            raise InvalidInput("a topology contains the empty set and the whole space")
        for u in self.opens:
            if u & ~full:
                raise InvalidInput("open set outside the point range")
            for v in self.opens:
                if u | v not in self.opens or u & v not in self.opens:
                    raise InvalidInput("opens not closed under union/intersection")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def is_closed(self, mask: int) -> bool:
        return (self.full_mask & ~mask) in self.opens

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    def min_nbhd(self, point: int) -> int:
        """Smallest open set containing the point (opens are meet-closed)."""
        out = self.full_mask
        for u in self.opens:
            if u & (1 << point):
                out &= u
        return out

    def components(self) -> tuple[int, ...]:
        """Classes of the equivalence generated by y in min_nbhd(x).

        A function into a discrete space is continuous exactly when it is
        constant on these classes.
        """
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x in range(self.n):
            for y in bits_of(self.min_nbhd(x)):
                parent[find(x)] = find(y)
        canon: dict[int, int] = {}
        out = []
        for x in range(self.n):
            r = find(x)
            if r not in canon:
                canon[r] = len(canon)
            out.append(canon[r])
        return tuple(out)

    def specialization(self):
        """x <= y iff every open containing y contains x.

        A rendering helper only; the core works with the open-set family.
        """
        return [[bool(self.min_nbhd(y) & (1 << x)) for y in range(self.n)]
                for x in range(self.n)]

    def subspace(self, points) -> "FiniteTopology":
        points = sorted(set(points))
        position = {p: i for i, p in enumerate(points)}
        opens = set()
        for u in self.opens:
            opens.add(mask_of(position[p] for p in bits_of(u) if p in position))
        return FiniteTopology(len(points), frozenset(opens))

    def quotient(self, classes) -> "FiniteTopology":
        """Quotient topology along a point -> class index map."""
        classes = tuple(classes)
        if len(classes) != self.n:
            raise InvalidInput("class vector does not match point count")
        m = max(classes) + 1 if classes else 0
        opens = set()
        for candidate in range(1 << m):
            preimage = mask_of(p for p in range(self.n) if candidate & (1 << classes[p]))
            if preimage in self.opens:
                opens.add(candidate)
        return FiniteTopology(m, frozenset(opens))


def discrete_topology(n: int) -> FiniteTopology:
    if n > MAX_POINTS:
        raise BudgetExceeded("too many points for an explicit topology")
    return FiniteTopology(n, frozenset(range(1 << n)))


def indiscrete_topology(n: int) -> FiniteTopology:
    return FiniteTopology(n, frozenset((0, (1 << n) - 1)))


def topology_from_subbasis(n: int, masks) -> FiniteTopology:
    """Generate a topology: close the subbasis under intersection and union."""
    if n > MAX_POINTS:
        raise BudgetExceeded("too many points for an explicit topology")
    full = (1 << n) - 1
    opens = {0, full}
    opens.update(m & full for m in masks)
    changed = True
    while changed:
        changed = False
        current = list(opens)
        for i, u in enumerate(current):
            for v in current[i + 1:]:
                for w in (u | v, u & v):
                    if w not in opens:
                        opens.add(w)
                        changed = True
    return FiniteTopology(n, frozenset(opens))
