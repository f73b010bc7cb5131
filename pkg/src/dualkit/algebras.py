"""Finite algebras as total operation tables.

Everything downstream (spectra, clones, constrained spaces) reduces to a
handful of primitives on tabulated algebras: subuniverse generation, finite
powers, homomorphism enumeration, congruences and quotients, and membership
in the prevariety generated by a fixed dualizing algebra.

Elements are dense indices ``0..n-1``; human-readable labels live in the
catalog and in file formats, never here.  All values are immutable after
construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

#: Refuse to materialize carriers larger than this unless told otherwise.
DEFAULT_BUDGET = 10**6


class InvalidInput(ValueError):
    """Rejected input: a precondition on arguments does not hold."""


class BudgetExceeded(RuntimeError):
    """A requested construction exceeds the configured size budget."""


@dataclass(frozen=True)
class Signature:
    """An ordered list of (operation symbol, arity) pairs; names unique."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.ops]
        if len(set(names)) != len(names):
            raise InvalidInput("duplicate operation symbols: %r" % (names,))
        for name, arity in self.ops:
            if arity < 0:
                raise InvalidInput("negative arity for %r" % name)

    def arity(self, name: str) -> int:
        for op, arity in self.ops:
            if op == name:
                return arity
        raise InvalidInput("unknown operation symbol %r" % name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ops)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(name for name, arity in self.ops if arity == 0)

    def restrict(self, names) -> "Signature":
        keep = set(names)
        unknown = keep - set(self.names)
        if unknown:
            raise InvalidInput("unknown operation symbols %r" % sorted(unknown))
        return Signature(tuple(op for op in self.ops if op[0] in keep))


class FiniteAlgebra:
    """A finite algebra: carrier ``0..size-1`` plus one flat table per symbol.

    Tables are row-major in the argument tuple (mixed-radix with the first
    argument most significant).  A size-0 algebra is permitted exactly when
    the signature has no constants.
    """

    __slots__ = ("signature", "size", "tables", "_key")

    def __init__(self, signature: Signature, size: int, tables: dict):
        if size < 0:
            raise InvalidInput("negative size")
        if size == 0 and signature.constants:
            raise InvalidInput("empty algebra requires a constant-free signature")
        if set(tables) != set(signature.names):
            raise InvalidInput("tables do not match signature symbols")
        frozen = {}
        for name, arity in signature.ops:
            table = tuple(tables[name])
            if len(table) != size**arity:
                raise InvalidInput(
                    "table for %r has %d entries, expected %d"
                    % (name, len(table), size**arity)
                )
            for value in table:
                if not 0 <= value < size:
                    raise InvalidInput("table entry %r out of range for %r" % (value, name))
            frozen[name] = table
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "tables", frozen)
        key = (signature, size, tuple(frozen[name] for name in signature.names))
        object.__setattr__(self, "_key", key)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteAlgebra is immutable")

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "FiniteAlgebra(size=%d, ops=%r)" % (self.size, list(self.signature.names))

    def apply(self, name: str, *args: int) -> int:
        """Apply a basic operation to element indices."""
        arity = self.signature.arity(name)
        if len(args) != arity:
            raise InvalidInput("%r expects %d arguments, got %d" % (name, arity, len(args)))
        index = 0
        for a in args:
            index = index * self.size + a
        return self.tables[name][index]

    @property
    def elements(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class ElementMap:
    """A total map of element indices between two algebras (set level)."""

    domain: FiniteAlgebra
    codomain: FiniteAlgebra
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.size:
            raise InvalidInput("map length does not match domain size")
        for value in self.values:
            if not 0 <= value < self.codomain.size:
                raise InvalidInput("map value %r outside codomain" % (value,))

    def __call__(self, element: int) -> int:
        return self.values[element]

    def is_homomorphism(self) -> bool:
        A, B, h = self.domain, self.codomain, self.values
        for name, arity in A.signature.ops:
            for args in itertools.product(A.elements, repeat=arity):
                if h[A.apply(name, *args)] != B.apply(name, *(h[a] for a in args)):
                    return False
        return True

    def compose(self, inner: "ElementMap") -> "ElementMap":
        """self after inner (inner's codomain must be self's domain)."""
        if inner.codomain is not self.domain and inner.codomain != self.domain:
            raise InvalidInput("composition mismatch")
        return ElementMap(inner.domain, self.codomain,
                          tuple(self.values[v] for v in inner.values))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.codomain.size


@dataclass(frozen=True)
class Congruence:
    """A compatible partition of a carrier, as a block-index vector.

    Blocks are numbered by first occurrence, so equal partitions compare
    equal.  Compatibility is not checked here; constructors in this module
    either guarantee it or validate explicitly.
    """

    blocks: tuple[int, ...]

    @staticmethod
    def from_blocks(blocks) -> "Congruence":
        canon, seen = [], {}
        for b in blocks:
            if b not in seen:
                seen[b] = len(seen)
            canon.append(seen[b])
        return Congruence(tuple(canon))

    @property
    def num_blocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    def same(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def leq(self, other: "Congruence") -> bool:
        """Refinement order: every block of self lies inside a block of other."""
        rep = {}
        for x, b in enumerate(self.blocks):
            if b in rep:
                if other.blocks[x] != other.blocks[rep[b]]:
                    return False
            else:
                rep[b] = x
        return True

    def meet(self, other: "Congruence") -> "Congruence":
        return Congruence.from_blocks(list(zip(self.blocks, other.blocks)))

    def join(self, other: "Congruence") -> "Congruence":
        # Transitive closure of the union; for congruences this is again one.
        n = len(self.blocks)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for theta in (self, other):
            rep = {}
            for x, b in enumerate(theta.blocks):
                if b in rep:
                    parent[find(x)] = find(rep[b])
                else:
                    rep[b] = x
        return Congruence.from_blocks([find(x) for x in range(n)])


def identity_congruence(A: FiniteAlgebra) -> Congruence:
    return Congruence(tuple(range(A.size)))


def total_congruence(A: FiniteAlgebra) -> Congruence:
    return Congruence(tuple(0 for _ in A.elements))


def _op_columns(A):
    """Per operation: argument index columns and the flat result array.

    The flat table is already in lexicographic argument order, so the result
    array is the table itself; the argument columns are its mixed-radix
    decode.  Cached on the algebra via its key id.
    """
    cache = _OP_COLUMNS_CACHE
    hit = cache.get(id(A))
    if hit is not None and hit[0] is A:
        return hit[1]
    n = A.size
    out = {}
    for name, arity in A.signature.ops:
        if arity == 0:
            continue
        idx = np.arange(n**arity)
        cols = [(idx // n ** (arity - 1 - i)) % n for i in range(arity)]
        out[name] = (cols, np.array(A.tables[name], dtype=np.int64))
    cache[id(A)] = (A, out)
    if len(cache) > 256:
        cache.pop(next(iter(cache)))
    return out


_OP_COLUMNS_CACHE: dict = {}


def _closure_mask(A: FiniteAlgebra, seed) -> np.ndarray:
    """Boolean membership array of the subuniverse generated by ``seed``."""
    known = np.zeros(A.size, dtype=bool)
    for s in seed:
        if not 0 <= s < A.size:
            raise InvalidInput("seed element %r outside carrier" % (s,))
        known[s] = True
    for name in A.signature.constants:
        known[A.apply(name)] = True
    columns = _op_columns(A)
    changed = True
    while changed:
        changed = False
        for cols, res in columns.values():
            mask = ~known[res]
            for c in cols:
                mask &= known[c]
            if mask.any():
                known[res[mask]] = True
                changed = True
    return known


def generate_subalgebra(A: FiniteAlgebra, seed) -> frozenset:
    """Least subuniverse of A containing ``seed`` and all constants."""
    return frozenset(int(x) for x in np.nonzero(_closure_mask(A, list(seed)))[0])


def minimal_generating_set(A: FiniteAlgebra) -> tuple[int, ...]:
    """Small generating set, grown greedily from the constants closure."""
    gens: list[int] = []
    closed = generate_subalgebra(A, gens)
    while len(closed) < A.size:
        missing = min(set(A.elements) - closed)
        gens.append(missing)
        closed = generate_subalgebra(A, gens)
    return tuple(gens)


def subalgebra(A: FiniteAlgebra, universe) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Restrict A to a subuniverse.  Returns (algebra, old indices in order)."""
    old = tuple(sorted(set(universe)))
    index = {x: i for i, x in enumerate(old)}
    tables = {}
    for name, arity in A.signature.ops:
        entries = []
        for args in itertools.product(old, repeat=arity):
            value = A.apply(name, *args)
            if value not in index:
                raise InvalidInput("set is not closed under %r" % name)
            entries.append(index[value])
        tables[name] = tuple(entries)
    return FiniteAlgebra(A.signature, len(old), tables), old


def subuniverses(A: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> list[frozenset]:
    """All subuniverses of A, by closing generated subalgebras upward.

    Every subuniverse is reached by adding one element at a time to a
    smaller one, so a breadth-first sweep over ``Sg(U + {x})`` is complete.
    """
    if A.size > 64:
        raise BudgetExceeded("subuniverse enumeration capped at carrier 64")
    base = generate_subalgebra(A, ())
    found = {base}
    queue = [base]
    while queue:
        u = queue.pop()
        for x in A.elements:
            if x in u:
                continue
            bigger = generate_subalgebra(A, tuple(u) + (x,))
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)
        if len(found) > budget:
            raise BudgetExceeded("more than %d subuniverses" % budget)
    return sorted(found, key=lambda u: (len(u), sorted(u)))


def direct_product(factors, budget: int = DEFAULT_BUDGET) -> FiniteAlgebra:
    """Product algebra with operations computed pointwise.

    The carrier is the lexicographic enumeration of tuples; use
    ``product_tuple``/``product_index`` to translate.
    """
    factors = list(factors)
    if not factors:
        raise InvalidInput("empty factor list; use direct_power(A, 0) for the empty power")
    signature = factors[0].signature
    for f in factors:
        if f.signature != signature:
            raise InvalidInput("factors must share a signature")
    size = 1
    for f in factors:
        size *= f.size
    if size > budget:
        raise BudgetExceeded("product carrier %d exceeds budget %d" % (size, budget))
    sizes = [f.size for f in factors]
    tables = {}
    for name, arity in signature.ops:
        entries = []
        for args in itertools.product(range(size), repeat=arity):
            coords = [product_tuple(sizes, a) for a in args]
            value = [factors[i].apply(name, *(c[i] for c in coords))
                     for i in range(len(factors))]
            entries.append(product_index(sizes, value))
        tables[name] = tuple(entries)
    return FiniteAlgebra(signature, size, tables)


def direct_power(A: FiniteAlgebra, exponent: int, budget: int = DEFAULT_BUDGET) -> FiniteAlgebra:
    """A**exponent; the empty power is the singleton algebra."""
    if exponent < 0:
        raise InvalidInput("negative exponent")
    if exponent == 0:
        tables = {name: (0,) * (1 if arity == 0 else 1)
                  for name, arity in A.signature.ops}
        return FiniteAlgebra(A.signature, 1, tables)
    return direct_product([A] * exponent, budget=budget)


def product_tuple(sizes, index: int) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        out.append(index % s)
        index //= s
    return tuple(reversed(out))


def product_index(sizes, coords) -> int:
    index = 0
    for s, c in zip(sizes, coords):
        index = index * s + c
    return index


def power_tuple(n: int, length: int, index: int) -> tuple[int, ...]:
    return product_tuple([n] * length, index)


def power_index(n: int, coords) -> int:
    return product_index([n] * len(tuple(coords)), tuple(coords))


def generate_vectors(L: FiniteAlgebra, length: int, seeds,
                     budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Closure of vectors in L**length under pointwise operations.

    Works directly on tuples so large powers never have to be tabulated.
    Returns the closed set sorted; it is empty only for constant-free
    signatures with no seeds.
    """
    seeds = [tuple(s) for s in seeds]
    for s in seeds:
        if len(s) != length:
            raise InvalidInput("seed vector of wrong length")
        if any(not 0 <= v < L.size for v in s):
            raise InvalidInput("seed vector outside carrier")
    known = set(seeds)
    for name in L.signature.constants:
        known.add((L.apply(name),) * length)
    frontier = list(known)
    while frontier:
        new = []
        ordered = sorted(known)
        fresh = set(frontier)
        for name, arity in L.signature.ops:
            if arity == 0:
                continue
            table = L.tables[name]
            n = L.size
            for args in itertools.product(ordered, repeat=arity):
                if not fresh.intersection(args):
                    continue
                if arity == 2:
                    u, v = args
                    vec = tuple(table[a * n + b] for a, b in zip(u, v))
                else:
                    vec = tuple(table[product_index([n] * arity, pointwise)]
                                for pointwise in zip(*args))
                if vec not in known:
                    known.add(vec)
                    new.append(vec)
                    if len(known) > budget:
                        raise BudgetExceeded("vector closure exceeds budget %d" % budget)
        frontier = new
    return sorted(known)


def algebra_from_vectors(L: FiniteAlgebra, length: int, vectors):
    """Abstract algebra on a closed set of vectors (pointwise operations).

    Returns (algebra, carrier) where carrier[i] is the vector of element i.
    """
    carrier = sorted(set(tuple(v) for v in vectors))
    index = {v: i for i, v in enumerate(carrier)}
    n = L.size
    tables = {}
    for name, arity in L.signature.ops:
        table = L.tables[name]
        entries = []
        for args in itertools.product(carrier, repeat=arity):
            if arity == 0:
                vec = (table[0],) * length
            elif arity == 2:
                vec = tuple(table[a * n + b] for a, b in zip(args[0], args[1]))
            else:
                vec = tuple(table[product_index([n] * arity, pw)] for pw in zip(*args))
            if vec not in index:
                raise InvalidInput("vector set is not closed under %r" % name)
            entries.append(index[vec])
        tables[name] = tuple(entries)
    return FiniteAlgebra(L.signature, len(carrier), tables), carrier


# --- homomorphism enumeration -------------------------------------------------

class _HomPlan:
    """Derivation plan for backtracking over generator images.

    Elements are replayed level by level (level i = closure of the first i
    generators together with the constants); operation-consistency checks are
    grouped by the level at which all their arguments become known, so a bad
    partial assignment is rejected as early as possible.
    """

    def __init__(self, A: FiniteAlgebra, gens):
        self.gens = tuple(gens)
        levels = len(self.gens) + 1
        columns = _op_columns(A)
        known = np.zeros(A.size, dtype=bool)
        level_of = np.full(A.size, -1, dtype=np.int64)
        recipes: list[list] = []

        def close(level, steps):
            changed = True
            while changed:
                changed = False
                for name, (cols, res) in columns.items():
                    arity = len(cols)
                    mask = ~known[res]
                    for c in cols:
                        mask &= known[c]
                    if not mask.any():
                        continue
                    fresh, first = np.unique(res[mask], return_index=True)
                    spots = np.nonzero(mask)[0][first]
                    for value, spot in zip(fresh.tolist(), spots.tolist()):
                        known[value] = True
                        level_of[value] = level
                        args = tuple((spot // A.size ** (arity - 1 - i)) % A.size
                                     for i in range(arity))
                        steps.append((value, name, args))
                    changed = True
            return steps

        consts = []
        for name in A.signature.constants:
            value = A.apply(name)
            if not known[value]:
                known[value] = True
                level_of[value] = 0
                consts.append((value, name, ()))
        recipes.append(close(0, consts))
        # a generator already derived at an earlier level has a forced image
        self.gen_fresh: list[bool] = []
        for i, g in enumerate(self.gens, start=1):
            steps = []
            self.gen_fresh.append(not known[g])
            if not known[g]:
                known[g] = True
                level_of[g] = i
                steps.append((g, None, ()))
            recipes.append(close(i, steps))
        if not known.all():
            raise InvalidInput("given generators do not generate the algebra")
        self.recipes = recipes
        # Constant agreement must hold outright.
        self.const_checks = [(A.apply(name), name) for name in A.signature.constants]
        # Group every op application by the level where its arguments exist.
        self.checks: list[dict] = [{} for _ in range(levels)]
        for name, (cols, res) in columns.items():
            lvl = level_of[cols[0]]
            for c in cols[1:]:
                lvl = np.maximum(lvl, level_of[c])
            for level in range(levels):
                mask = lvl == level
                if mask.any():
                    self.checks[level][name] = (
                        np.stack([c[mask] for c in cols], axis=1), res[mask])


def enumerate_homs(A: FiniteAlgebra, B: FiniteAlgebra, gens=None) -> list[ElementMap]:
    """All homomorphisms A -> B, in lexicographic order of generator images.

    Backtracks over images of a generating set, forward-propagating forced
    values (closure replay) and rejecting on the first operation or constant
    disagreement.
    """
    if A.signature != B.signature:
        raise InvalidInput("algebras must share a signature")
    if A.size == 0:
        return [ElementMap(A, B, ())]
    if B.size == 0:
        return []
    if gens is None:
        gens = minimal_generating_set(A)
    else:
        gens = tuple(gens)
        for g in gens:
            if not 0 <= g < A.size:
                raise InvalidInput("generator %r outside carrier" % (g,))
    plan = _HomPlan(A, gens)  # raises if the generators do not generate
    b_tables = {name: np.array(B.tables[name], dtype=np.int64).reshape((B.size,) * arity)
                for name, arity in B.signature.ops if arity > 0}
    image = np.full(A.size, -1, dtype=np.int64)
    results: list[ElementMap] = []

    def replay(level, gen_image):
        if level > 0 and not plan.gen_fresh[level - 1]:
            # the generator was derived earlier; its image is already forced
            if image[gens[level - 1]] != gen_image:
                return False
        for element, name, args in plan.recipes[level]:
            if name is None:
                image[element] = gen_image
            elif not args:
                image[element] = B.apply(name)
            else:
                image[element] = B.apply(name, *(int(image[a]) for a in args))
        if level == 0:
            for element, name in plan.const_checks:
                if image[element] != B.apply(name):
                    return False
        for name, (args, res) in plan.checks[level].items():
            lhs = b_tables[name][tuple(image[args[:, i]] for i in range(args.shape[1]))]
            if not np.array_equal(lhs, image[res]):
                return False
        return True

    def search(level):
        if level > len(gens):
            results.append(ElementMap(A, B, tuple(int(v) for v in image)))
            return
        if level == 0:
            if replay(0, None):
                search(1)
            return
        for b in B.elements:
            if replay(level, b):
                search(level + 1)
    search(0)
    return results


def kernel(h: ElementMap) -> Congruence:
    """Partition of the domain by equal images; requires a homomorphism."""
    if not h.is_homomorphism():
        raise InvalidInput("kernel is only defined for homomorphisms")
    return Congruence.from_blocks(h.values)


def _induced_tables(A: FiniteAlgebra, blocks, num_blocks):
    """Quotient tables, or None if the partition is not compatible."""
    tables = {}
    for name, arity in A.signature.ops:
        entries = {}
        for args in itertools.product(A.elements, repeat=arity):
            key = tuple(blocks[a] for a in args)
            value = blocks[A.apply(name, *args)]
            if entries.setdefault(key, value) != value:
                return None
        table = []
        for key in itertools.product(range(num_blocks), repeat=arity):
            table.append(entries[key])
        tables[name] = tuple(table)
    return tables


def is_congruence(A: FiniteAlgebra, theta: Congruence) -> bool:
    if len(theta.blocks) != A.size:
        return False
    return _induced_tables(A, theta.blocks, theta.num_blocks) is not None


def quotient(A: FiniteAlgebra, theta: Congruence):
    """A/theta together with the projection homomorphism."""
    if len(theta.blocks) != A.size:
        raise InvalidInput("partition does not match carrier")
    tables = _induced_tables(A, theta.blocks, theta.num_blocks)
    if tables is None:
        raise InvalidInput("partition is not compatible with the operations")
    Q = FiniteAlgebra(A.signature, theta.num_blocks, tables)
    return Q, ElementMap(A, Q, theta.blocks)


def generate_congruence(A: FiniteAlgebra, pairs) -> Congruence:
    """Least congruence identifying the given pairs (union-find + propagation)."""
    n = A.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = []

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            queue.append((a, b))

    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidInput("pair outside carrier")
        union(a, b)
    while queue:
        a, b = queue.pop()
        for name, arity in A.signature.ops:
            if arity == 0:
                continue
            for pos in range(arity):
                for context in itertools.product(range(n), repeat=arity - 1):
                    args_a = context[:pos] + (a,) + context[pos:]
                    args_b = context[:pos] + (b,) + context[pos:]
                    union(A.apply(name, *args_a), A.apply(name, *args_b))
    return Congruence.from_blocks([find(x) for x in range(n)])


def all_congruences(A: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> list[Congruence]:
    """Every congruence of A: join-closure of the principal congruences."""
    delta = identity_congruence(A)
    principals = set()
    for a in A.elements:
        for b in range(a + 1, A.size):
            principals.add(generate_congruence(A, [(a, b)]))
    found = {delta} | principals
    queue = list(found)
    while queue:
        theta = queue.pop()
        for p in principals:
            j = theta.join(p)
            if j not in found:
                found.add(j)
                queue.append(j)
                if len(found) > budget:
                    raise BudgetExceeded("congruence lattice exceeds budget")
    return sorted(found, key=lambda t: (t.num_blocks, t.blocks), reverse=True)


def in_prevariety(A: FiniteAlgebra, L: FiniteAlgebra) -> bool:
    """Whether A embeds in a power of L, i.e. Hom(A, L) separates elements.

    Degenerate cases: a singleton always embeds (empty product); the empty
    algebra embeds exactly when the signature is constant-free.
    """
    if A.signature != L.signature:
        raise InvalidInput("algebras must share a signature")
    if A.size == 0:
        return not A.signature.constants
    if A.size == 1:
        return True
    homs = enumerate_homs(A, L)
    for a in A.elements:
        for b in range(a + 1, A.size):
            if not any(h.values[a] != h.values[b] for h in homs):
                return False
    return True


def relative_congruences(A: FiniteAlgebra, L: FiniteAlgebra,
                         budget: int = DEFAULT_BUDGET) -> list[Congruence]:
    """Congruences whose quotient lies in the prevariety generated by L.

    The result is closed under intersection; this is asserted rather than
    assumed.
    """
    out = []
    for theta in all_congruences(A, budget=budget):
        Q, _ = quotient(A, theta)
        if in_prevariety(Q, L):
            out.append(theta)
    for t1 in out:
        for t2 in out:
            if t1.meet(t2) not in out:
                raise AssertionError("relative congruences not meet-closed")
    return out


def is_distributive_lattice(elems, meet, join) -> bool:
    """Triple-scan distributivity test for an explicitly given finite lattice."""
    for x in elems:
        for y in elems:
            for z in elems:
                if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)):
                    return False
    return True
