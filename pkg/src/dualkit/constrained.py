"""k-ary and unary L-constrained spaces.

A k-ary constrained space is a finite topology plus a continuous subdirect
family of constraints A_I <= L^I for |I| <= k; the unary form replaces the
family by one subuniverse of L per point and a closed equivalence relation.
Constraints are stored for |I| = k and |I| <= 1 only; intermediate sizes are
derived by projection, which subdirectness makes unambiguous (validation
checks exactly that).  Local functions on I are tuples aligned with
sorted(I).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebras import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    FiniteAlgebra,
    InvalidInput,
    direct_power,
    power_index,
    power_tuple,
    subuniverses,
)
from .spaces import LSpace, is_continuous_vector, lspace
from .terms import TermFunction, check_near_unanimity
from .topology import FiniteTopology, bits_of, mask_of


def restrict_local(fun, I_sorted, J_sorted):
    position = {p: i for i, p in enumerate(I_sorted)}
    return tuple(fun[position[q]] for q in J_sorted)


class ConstrainedSpace:
    """A k-ary constrained space for k >= 2 (immutable after construction)."""

    __slots__ = ("k", "topology", "dualizer", "constraints", "_derived")

    def __init__(self, k: int, topology: FiniteTopology, dualizer: FiniteAlgebra,
                 constraints: dict):
        if k < 2:
            raise InvalidInput("k-ary constrained spaces require k >= 2; use the unary form")
        n = topology.n
        m = min(k, n)
        required = {frozenset(c) for c in itertools.combinations(range(n), m)}
        required |= {frozenset((x,)) for x in range(n)}
        required.add(frozenset())
        normalized = {}
        given = {frozenset(key): frozenset(tuple(f) for f in funs)
                 for key, funs in constraints.items()}
        for key in given:
            if not key <= set(range(n)):
                raise InvalidInput("constraint key outside the point set")
            if len(key) > k:
                raise InvalidInput("constraint key larger than k")
        # larger keys first so smaller ones can be derived by projection
        for key in sorted(required, key=lambda s: (-len(s), sorted(s))):
            if key in given:
                normalized[key] = given[key]
            elif len(key) < m:
                normalized[key] = _derive_by_projection(normalized, key, n, m)
            elif len(key) == 0 and dualizer.signature.constants:
                normalized[key] = frozenset(((),))
            else:
                raise InvalidInput("missing constraint for %r" % sorted(key))
        for key, funs in normalized.items():
            order = tuple(sorted(key))
            for f in funs:
                if len(f) != len(order):
                    raise InvalidInput("local function of wrong length for %r" % (order,))
                if any(not 0 <= v < dualizer.size for v in f):
                    raise InvalidInput("local function value outside the carrier")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "topology", topology)
        object.__setattr__(self, "dualizer", dualizer)
        object.__setattr__(self, "constraints", normalized)
        object.__setattr__(self, "_derived", {})

    def __setattr__(self, name, value):
        raise AttributeError("ConstrainedSpace is immutable")

    @property
    def n(self) -> int:
        return self.topology.n

    def constraint(self, points) -> frozenset:
        """A_I for any I with |I| <= k, derived by projection if not stored."""
        key = frozenset(points)
        if len(key) > self.k:
            raise InvalidInput("constraint arity exceeds k")
        if key in self.constraints:
            return self.constraints[key]
        if key not in self._derived:
            m = min(self.k, self.n)
            self._derived[key] = _derive_by_projection(
                self.constraints, key, self.n, m)
        return self._derived[key]

    def constraint_tuple(self, xs) -> frozenset:
        """A_{<x1..xl>} in the tuple presentation (repeats allowed)."""
        xs = tuple(xs)
        key_sorted = tuple(sorted(set(xs)))
        funs = self.constraint(key_sorted)
        position = {p: i for i, p in enumerate(key_sorted)}
        return frozenset(tuple(f[position[x]] for x in xs) for f in funs)


def _derive_by_projection(stored, key, n, m):
    if len(key) >= m:
        raise InvalidInput("cannot derive a constraint of size %d" % len(key))
    rest = [p for p in range(n) if p not in key]
    superset = frozenset(sorted(key) + rest[: m - len(key)])
    base = stored.get(superset)
    if base is None:
        raise InvalidInput("missing constraint for %r" % sorted(superset))
    I_sorted = tuple(sorted(superset))
    J_sorted = tuple(sorted(key))
    return frozenset(restrict_local(f, I_sorted, J_sorted) for f in base)


class UnaryConstrainedSpace:
    """Per-point subuniverses of L plus a closed equivalence relation."""

    __slots__ = ("topology", "dualizer", "fibers", "equiv", "a_empty")

    def __init__(self, topology: FiniteTopology, dualizer: FiniteAlgebra,
                 fibers, equiv, a_empty: bool | None = None):
        n = topology.n
        fibers = tuple(frozenset(f) for f in fibers)
        if len(fibers) != n:
            raise InvalidInput("one fiber per point is required")
        for f in fibers:
            if any(not 0 <= v < dualizer.size for v in f):
                raise InvalidInput("fiber element outside the carrier")
        equiv = tuple(equiv)
        if len(equiv) != n:
            raise InvalidInput("equivalence class vector of wrong length")
        if a_empty is None:
            if dualizer.signature.constants:
                a_empty = True
            elif n > 0:
                a_empty = all(len(f) > 0 for f in fibers)
            else:
                raise InvalidInput("a_empty must be given for the empty constant-free space")
        object.__setattr__(self, "topology", topology)
        object.__setattr__(self, "dualizer", dualizer)
        object.__setattr__(self, "fibers", fibers)
        object.__setattr__(self, "equiv", equiv)
        object.__setattr__(self, "a_empty", bool(a_empty))

    def __setattr__(self, name, value):
        raise AttributeError("UnaryConstrainedSpace is immutable")

    @property
    def n(self) -> int:
        return self.topology.n

    def related(self, x: int, y: int) -> bool:
        return self.equiv[x] == self.equiv[y]


# --- validation -----------------------------------------------------------------

@dataclass(frozen=True)
class ConstrainedReport:
    subdirect: bool
    continuous: bool
    separated: bool
    scott_continuous: bool

    @property
    def valid(self) -> bool:
        return self.subdirect and self.continuous


def _subuniverse_of_tuples(L, width, funs) -> bool:
    funs = set(funs)
    for name, arity in L.signature.ops:
        if arity == 0:
            if (L.apply(name),) * width not in funs:
                return False
            continue
        for args in itertools.product(sorted(funs), repeat=arity):
            if tuple(L.apply(name, *pw) for pw in zip(*args)) not in funs:
                return False
    return True


def validate_constrained(space: ConstrainedSpace) -> ConstrainedReport:
    """Exact flags for subdirectness, continuity, separation, Scott continuity.

    Scott continuity is computed independently against the principal upsets
    of Sub(L^k) and must agree with the openness flag; a mismatch is an
    internal error, not a property of the input.
    """
    L, n, k = space.dualizer, space.n, space.k
    m = min(k, n)
    subdirect = True
    for key, funs in space.constraints.items():
        if not _subuniverse_of_tuples(L, len(key), funs):
            raise InvalidInput("constraint for %r is not a subuniverse" % sorted(key))
    stored_m = [key for key in space.constraints if len(key) == m]
    for key in stored_m:
        I_sorted = tuple(sorted(key))
        for size in range(m):
            for J in itertools.combinations(I_sorted, size):
                projected = frozenset(restrict_local(f, I_sorted, J) for f in space.constraints[key])
                if projected != space.constraint(J):
                    subdirect = False
    for k1, k2 in itertools.combinations(stored_m, 2):
        common = k1 & k2
        for size in range(len(common) + 1):
            for J in itertools.combinations(sorted(common), size):
                p1 = frozenset(restrict_local(f, tuple(sorted(k1)), J) for f in space.constraints[k1])
                p2 = frozenset(restrict_local(f, tuple(sorted(k2)), J) for f in space.constraints[k2])
                if p1 != p2:
                    subdirect = False

    continuous = _family_is_continuous(space)
    scott = _family_is_scott_continuous(space)
    if scott != continuous:
        raise AssertionError("Scott-continuity disagrees with fiber openness")

    separated = True
    for x in range(n):
        for y in range(x + 1, n):
            pairs = space.constraint_tuple((x, y))
            if not any(a != b for a, b in pairs):
                separated = False
    return ConstrainedReport(subdirect, continuous, separated, scott)


def _local_continuous(top: FiniteTopology, points_sorted, fun) -> bool:
    sub = top.subspace(points_sorted)
    return is_continuous_vector(sub, fun)


def _family_is_continuous(space: ConstrainedSpace) -> bool:
    top, L, k, n = space.topology, space.dualizer, space.k, space.n
    for key, funs in space.constraints.items():
        order = tuple(sorted(key))
        for f in funs:
            if not _local_continuous(top, order, f):
                return False
    # X_a = { xbar : abar in A_xbar } must be open in the product topology.
    nbhd = [bits_of(top.min_nbhd(x)) for x in range(n)]
    for abar in itertools.product(L.elements, repeat=k):
        for xbar in itertools.product(range(n), repeat=k):
            if abar not in space.constraint_tuple(xbar):
                continue
            for ybar in itertools.product(*(nbhd[x] for x in xbar)):
                if abar not in space.constraint_tuple(ybar):
                    return False
    return True


def _family_is_scott_continuous(space: ConstrainedSpace) -> bool:
    """The map xbar -> A_xbar is continuous into Sub(L^k) with the Scott topology.

    On a finite algebra the Scott opens are generated by principal upsets of
    subalgebras, so continuity says each { xbar : C <= A_xbar } is open.
    """
    top, L, k, n = space.topology, space.dualizer, space.k, space.n
    square = direct_power(L, k)
    subs = [frozenset(power_tuple(L.size, k, u) for u in universe)
            for universe in subuniverses(square)]
    nbhd = [bits_of(top.min_nbhd(x)) for x in range(n)]
    for C in subs:
        for xbar in itertools.product(range(n), repeat=k):
            if not C <= space.constraint_tuple(xbar):
                continue
            for ybar in itertools.product(*(nbhd[x] for x in xbar)):
                if not C <= space.constraint_tuple(ybar):
                    return False
    return True


@dataclass(frozen=True)
class UnaryReport:
    subdirect: bool
    continuous: bool
    separated: bool
    equiv_closed: bool
    separation_witnessed: bool

    @property
    def valid(self) -> bool:
        return (self.subdirect and self.continuous and self.equiv_closed
                and self.separation_witnessed)


def validate_unary(space: UnaryConstrainedSpace) -> UnaryReport:
    top, L, n = space.topology, space.dualizer, space.n
    for f in space.fibers:
        if not _subuniverse_of_tuples(L, 1, {(v,) for v in f}):
            raise InvalidInput("a fiber is not a subuniverse of the dualizer")
    subdirect = all(bool(f) == space.a_empty for f in space.fibers) if n else True
    continuous = all(
        top.is_open(mask_of(x for x in range(n) if a in space.fibers[x]))
        for a in L.elements)
    # the complement of the equivalence relation must be open in X^2
    equiv_closed = True
    for x in range(n):
        for y in range(n):
            if space.related(x, y):
                continue
            for u in bits_of(top.min_nbhd(x)):
                for v in bits_of(top.min_nbhd(y)):
                    if space.related(u, v):
                        equiv_closed = False
    separation_witnessed = all(
        space.related(x, y)
        or any(a != b for a in space.fibers[x] for b in space.fibers[y])
        for x in range(n) for y in range(n))
    separated = all(space.related(x, y) == (x == y)
                    for x in range(n) for y in range(n))
    return UnaryReport(subdirect, continuous, separated, equiv_closed, separation_witnessed)


# --- compatible functions -------------------------------------------------------

def is_compatible_local(space, points_sorted, fun, check_continuity=True) -> bool:
    """Compatibility of a local function on a subset (both space kinds)."""
    points_sorted = tuple(points_sorted)
    if isinstance(space, UnaryConstrainedSpace):
        if not space.a_empty:
            return False
        for i, p in enumerate(points_sorted):
            if fun[i] not in space.fibers[p]:
                return False
        for i, p in enumerate(points_sorted):
            for j, q in enumerate(points_sorted):
                if space.related(p, q) and fun[i] != fun[j]:
                    return False
    else:
        for size in range(min(space.k, len(points_sorted)) + 1):
            for J in itertools.combinations(points_sorted, size):
                if restrict_local(fun, points_sorted, J) not in space.constraint(J):
                    return False
    if check_continuity and not _local_continuous(space.topology, points_sorted, fun):
        return False
    return True


def ccomp(space, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """The continuous compatible global functions, backtracking over points.

    Points are assigned in ascending fiber-size order; every touched
    constraint among assigned points prunes, as does disagreement on a
    topological component (which is exactly the continuity requirement).
    """
    L, top, n = space.dualizer, space.topology, space.n
    if L.size and L.size**n > budget:
        raise BudgetExceeded("ccomp search exceeds budget")
    unary = isinstance(space, UnaryConstrainedSpace)
    if unary:
        fibers = space.fibers
        empty_ok = space.a_empty
    else:
        fibers = tuple(frozenset(f[0] for f in space.constraint((x,))) for x in range(n))
        empty_ok = () in space.constraint(())
    if not empty_ok:
        return []
    if n == 0:
        return [()]
    order = sorted(range(n), key=lambda x: (len(fibers[x]), x))
    components = top.components()
    values: list[int | None] = [None] * n
    out = []

    def admissible(p, v):
        for q in range(n):
            if values[q] is None or q == p:
                continue
            if components[q] == components[p] and values[q] != v:
                return False
        if unary:
            return all(values[q] is None or q == p or not space.related(p, q)
                       or values[q] == v
                       for q in range(n))
        assigned = [q for q in range(n) if values[q] is not None and q != p]
        for size in range(min(space.k, len(assigned) + 1)):
            for rest in itertools.combinations(assigned, size):
                S = tuple(sorted(rest + (p,)))
                local = tuple(v if q == p else values[q] for q in S)
                if local not in space.constraint(S):
                    return False
        return True

    def extend(idx):
        if idx == n:
            out.append(tuple(values))
            return
        p = order[idx]
        for v in sorted(fibers[p]):
            if admissible(p, v):
                values[p] = v
                extend(idx + 1)
                values[p] = None

    extend(0)
    return sorted(out)


def func(space, budget: int = DEFAULT_BUDGET) -> LSpace:
    """Wrap the space's topology with its continuous compatible functions."""
    return lspace(space.topology, space.dualizer, ccomp(space, budget=budget))


def cons(X: LSpace, k: int):
    """Constraints by projection of the compatible functions of an L-space.

    For k >= 2 this is the k-ary space with A_I = pi_I[Comp X]; for k = 1 the
    unary space whose equivalence relates points on which every compatible
    function agrees.  The result has the global extension property by
    construction.
    """
    n = X.n
    functions = sorted(X.functions)
    if k == 1:
        classes: list[int] = []
        seen: dict[tuple, int] = {}
        for x in range(n):
            profile = tuple(f[x] for f in functions)
            if profile not in seen:
                seen[profile] = len(seen)
            classes.append(seen[profile])
        fibers = [frozenset(f[x] for f in functions) for x in range(n)]
        a_empty = bool(functions)
        return UnaryConstrainedSpace(X.topology, X.dualizer, fibers, classes, a_empty)
    if k < 1:
        raise InvalidInput("constraint arity must be >= 1")
    m = min(k, n)
    family = {}
    for size in {m, 0, 1}:
        for key in itertools.combinations(range(n), size):
            family[frozenset(key)] = {tuple(f[p] for p in key) for f in functions}
    return ConstrainedSpace(k, X.topology, X.dualizer, family)


# --- extension properties --------------------------------------------------------

def has_global_extension(space, budget: int = DEFAULT_BUDGET):
    """Whether every local constraint member extends to a global function.

    Returns (flag, witness, functions); a witness is an unextendable pair
    (points, local function), or a pair of points for the unary separation
    clause.
    """
    functions = ccomp(space, budget=budget)
    if isinstance(space, UnaryConstrainedSpace):
        if space.a_empty and not functions:
            return False, ((), ()), functions
        for x in range(space.n):
            for a in sorted(space.fibers[x]):
                if not any(f[x] == a for f in functions):
                    return False, ((x,), (a,)), functions
        for x in range(space.n):
            for y in range(space.n):
                if not space.related(x, y):
                    if not any(f[x] != f[y] for f in functions):
                        return False, ((x, y), None), functions
        return True, None, functions
    for key in sorted(space.constraints, key=lambda s: (len(s), sorted(s))):
        order = tuple(sorted(key))
        covered = {tuple(f[p] for p in order) for f in functions}
        for g in sorted(space.constraints[key]):
            if g not in covered:
                return False, (order, g), functions
        if not covered <= space.constraints[key]:
            return False, (order, None), functions
    return True, None, functions


def compatible_local_functions(space, points_sorted):
    L = space.dualizer
    out = []
    for fun in itertools.product(L.elements, repeat=len(points_sorted)):
        if is_compatible_local(space, points_sorted, fun):
            out.append(fun)
    return out


def has_local_extension(space, n_arity: int):
    """n-ary local extension property: every compatible local function on at
    most n points extends by any one further point.  Returns (flag, witness)
    with witness = (points, new point, local function)."""
    n = space.n
    for size in range(min(n_arity, n) + 1):
        for I in itertools.combinations(range(n), size):
            for g in compatible_local_functions(space, I):
                for j in range(n):
                    if j in I:
                        continue
                    J = tuple(sorted(I + (j,)))
                    extended = False
                    for b in space.dualizer.elements:
                        candidate = tuple(b if q == j else g[I.index(q)] for q in J)
                        if is_compatible_local(space, J, candidate):
                            extended = True
                            break
                    if not extended:
                        return False, (I, j, g)
    return True, None


def possible_extensions(space: ConstrainedSpace, points_sorted, fun, y: int) -> frozenset:
    """M_{f,y}: the values extending a compatible f on I (|I| <= k-1) to y."""
    points_sorted = tuple(points_sorted)
    if len(points_sorted) > space.k - 1:
        raise InvalidInput("possible_extensions needs |I| <= k-1")
    if y in points_sorted:
        raise InvalidInput("extension point must lie outside I")
    J = tuple(sorted(points_sorted + (y,)))
    out = set()
    for b in sorted(f[0] for f in space.constraint((y,))):
        candidate = tuple(b if q == y else fun[points_sorted.index(q)] for q in J)
        if candidate in space.constraint(J):
            out.add(b)
    return frozenset(out)


def _convex_within(L, m: TermFunction, subset, ambient) -> bool:
    """Convexity of subset relative to ambient: the odd entry ranges over
    ambient rather than all of L (the form the extension lemma provides)."""
    subset, ambient = sorted(subset), sorted(ambient)
    for pos in range(m.arity):
        for inside in itertools.product(subset, repeat=m.arity - 1):
            for odd in ambient:
                args = inside[:pos] + (odd,) + inside[pos:]
                if m.table[power_index(L.size, args)] not in subset:
                    return False
    return True


@dataclass(frozen=True)
class LocalToGlobalVerdict:
    lep: bool
    lep_witness: tuple | None
    gep: bool | None
    gep_witness: tuple | None

    @property
    def theorem_holds(self) -> bool:
        return (not self.lep) or bool(self.gep)


def local_to_global_verify(space: ConstrainedSpace, m: TermFunction,
                           budget: int = DEFAULT_BUDGET) -> LocalToGlobalVerdict:
    """If the space has the k(k-1)-ary local extension property, the global
    one must follow; any counterexample is an implementation bug, so it is
    reported as a fatal theorem violation.  The convexity of every
    possible-extension set (relative to its fiber) is asserted along the way.
    """
    if not check_near_unanimity(space.dualizer, m):
        raise InvalidInput("local_to_global_verify needs a near-unanimity function")
    if m.arity != space.k + 1:
        raise InvalidInput("near-unanimity arity must be k+1")
    k = space.k
    for size in range(k):
        for I in itertools.combinations(range(space.n), size):
            for g in compatible_local_functions(space, I):
                for y in range(space.n):
                    if y in I:
                        continue
                    M = possible_extensions(space, I, g, y)
                    fiber = {f[0] for f in space.constraint((y,))}
                    if not _convex_within(space.dualizer, m, M, fiber):
                        raise AssertionError(
                            "possible-extension set is not convex: lemma violated")
    lep, lep_wit = has_local_extension(space, k * (k - 1))
    if not lep:
        return LocalToGlobalVerdict(False, lep_wit, None, None)
    gep, gep_wit, _ = has_global_extension(space, budget=budget)
    return LocalToGlobalVerdict(True, None, gep, gep_wit)


# --- unary <-> binary -----------------------------------------------------------

def binary_to_unary(space: ConstrainedSpace) -> UnaryConstrainedSpace:
    """Present a binary space by fibers plus an equivalence relation.

    Requires every pair constraint to be a subdiagonal or a full product of
    the fibers; pairs classifying as anything else, or a non-transitive
    induced relation, are rejected with the offending points.
    """
    if space.k != 2:
        raise InvalidInput("binary_to_unary expects a binary space")
    n = space.n
    fibers = [frozenset(f[0] for f in space.constraint((x,))) for x in range(n)]
    related = [[False] * n for _ in range(n)]
    for x in range(n):
        related[x][x] = True
    for x, y in itertools.combinations(range(n), 2):
        pairs = space.constraint_tuple((x, y))
        if all(a == b for a, b in pairs):
            if pairs != frozenset((a, a) for a in fibers[x]):
                raise InvalidInput("pair %r is a proper subdiagonal" % ((x, y),))
            related[x][y] = related[y][x] = True
        elif pairs == frozenset(itertools.product(fibers[x], fibers[y])):
            pass
        else:
            raise InvalidInput(
                "pair %r is neither a subdiagonal nor the product of its fibers"
                % ((x, y),))
    classes: list[int] = []
    seen: dict[int, int] = {}
    for x in range(n):
        root = min(y for y in range(n) if related[x][y])
        if root not in seen:
            seen[root] = len(seen)
        classes.append(seen[root])
    for x in range(n):
        for y in range(n):
            if (classes[x] == classes[y]) != related[x][y]:
                raise InvalidInput("induced relation is not transitive at %r" % ((x, y),))
    a_empty = () in space.constraint(())
    return UnaryConstrainedSpace(space.topology, space.dualizer, fibers, classes, a_empty)


def unary_to_binary(space: UnaryConstrainedSpace) -> ConstrainedSpace:
    """A_{x,y} := A_x x A_y off the equivalence, the diagonal of A_x on it."""
    n = space.n
    family: dict = {frozenset(): {()} if space.a_empty else set()}
    for x in range(n):
        family[frozenset((x,))] = {(a,) for a in space.fibers[x]}
    for x, y in itertools.combinations(range(n), 2):
        if space.related(x, y):
            funs = {(a, a) for a in space.fibers[x]}
        else:
            funs = set(itertools.product(sorted(space.fibers[x]), sorted(space.fibers[y])))
        family[frozenset((x, y))] = funs
    return ConstrainedSpace(2, space.topology, space.dualizer, family)


def is_constrained_map(values, X, Y, check_continuity: bool = True) -> bool:
    """Constraint reflection (plus continuity, plus the unary equivalence)."""
    values = tuple(values)
    if len(values) != X.n or any(not 0 <= v < Y.n for v in values):
        raise InvalidInput("point map does not match the spaces")
    if check_continuity:
        for u in Y.topology.opens:
            pre = mask_of(x for x in range(X.n) if u & (1 << values[x]))
            if not X.topology.is_open(pre):
                return False
    if isinstance(X, UnaryConstrainedSpace) != isinstance(Y, UnaryConstrainedSpace):
        raise InvalidInput("spaces must be of the same kind")
    if isinstance(X, UnaryConstrainedSpace):
        if Y.a_empty and not X.a_empty:
            return False
        for x in range(X.n):
            if not Y.fibers[values[x]] <= X.fibers[x]:
                return False
        for x in range(X.n):
            for y in range(X.n):
                if X.related(x, y) and not Y.related(values[x], values[y]):
                    return False
        return True
    if X.k != Y.k:
        raise InvalidInput("spaces must share the constraint arity")
    for size in range(min(X.k, X.n) + 1):
        for I in itertools.combinations(range(X.n), size):
            image_sorted = tuple(sorted({values[p] for p in I}))
            for g in Y.constraint(image_sorted):
                pulled = tuple(g[image_sorted.index(values[p])] for p in I)
                if pulled not in X.constraint(I):
                    return False
    return True


# --- the Priestley bridge and positive-MV instances -------------------------------

DL_LEQ_FORBIDDEN = (1, 0)      # x <= y  iff  (1,0) is not a constraint pair


def priestley_from_order(top: FiniteTopology, leq, dl: FiniteAlgebra) -> ConstrainedSpace:
    """Binary 2_DL-constrained space of a reflexive closed binary relation."""
    n = top.n
    if dl.size != 2:
        raise InvalidInput("the Priestley bridge needs the two-element lattice")
    for x in range(n):
        if not leq[x][x]:
            raise InvalidInput("relation must be reflexive")
    for x in range(n):
        for y in range(n):
            if leq[x][y]:
                continue
            for u in bits_of(top.min_nbhd(x)):
                for v in bits_of(top.min_nbhd(y)):
                    if leq[u][v]:
                        raise InvalidInput("relation is not closed in the product")
    family: dict = {frozenset(): {()}}
    for x in range(n):
        family[frozenset((x,))] = {(0,), (1,)}
    for x, y in itertools.combinations(range(n), 2):
        funs = {(0, 0), (1, 1)}
        if not leq[y][x]:
            funs.add((0, 1))
        if not leq[x][y]:
            funs.add((1, 0))
        family[frozenset((x, y))] = funs
    return ConstrainedSpace(2, top, dl, family)


def priestley_to_order(space: ConstrainedSpace):
    """Extract x <= y  iff  (1,0) not in A_{x,y} from a binary 2_DL space."""
    if space.dualizer.size != 2:
        raise InvalidInput("the Priestley bridge needs the two-element lattice")
    n = space.n
    leq = [[False] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            leq[x][y] = DL_LEQ_FORBIDDEN not in space.constraint_tuple((x, y))
    return leq


@dataclass(frozen=True)
class MVPriestleyReport:
    structurally_valid: bool              # subdirect + continuous family
    order_is_partial_order: bool
    subdirect_inclusions: bool
    subdiagonal_iff_equal: bool
    pairwise_extension: bool
    matches_generic: bool | None          # None when the family itself is invalid
    local_extension_cases: bool | None
    local_matches_generic: bool | None

    @property
    def valid(self) -> bool:
        return (self.structurally_valid and self.order_is_partial_order
                and self.subdirect_inclusions and self.subdiagonal_iff_equal
                and self.pairwise_extension and bool(self.matches_generic))


def _mv_leq(space, x, y) -> bool:
    return all(a <= b for a, b in space.constraint_tuple((x, y)))


def mv_priestley_validate(space: ConstrainedSpace,
                          budget: int = DEFAULT_BUDGET) -> MVPriestleyReport:
    """The positive-MV reading of a binary constrained space.

    Extracts the order x <= y iff A_{x,y} lies under the gradedness relation,
    then checks the three structural conditions and the five-case local
    extension schema, cross-checking each verdict against the generic
    machinery (validate + GEP, and the binary local extension property).
    """
    if space.k != 2:
        raise InvalidInput("MV-Priestley validation expects a binary space")
    if "oplus" not in space.dualizer.signature.names:
        raise InvalidInput("MV-Priestley validation expects a positive MV chain")
    n = space.n
    leq = [[_mv_leq(space, x, y) for y in range(n)] for x in range(n)]
    order_ok = all(leq[x][x] for x in range(n))
    order_ok = order_ok and all(not (leq[x][y] and leq[y][x]) or x == y
                                for x in range(n) for y in range(n))
    order_ok = order_ok and all(not (leq[x][y] and leq[y][z]) or leq[x][z]
                                for x in range(n) for y in range(n) for z in range(n))

    fibers = [frozenset(f[0] for f in space.constraint((x,))) for x in range(n)]
    subdirect_inclusions = True
    for x in range(n):
        for y in range(n):
            pairs = space.constraint_tuple((x, y))
            if ({a for a, _ in pairs} != fibers[x]) or ({b for _, b in pairs} != fibers[y]):
                subdirect_inclusions = False
    subdiag_ok = all(
        (all(a == b for a, b in space.constraint_tuple((x, y)))) == (x == y)
        for x in range(n) for y in range(n))

    gep, _, functions = has_global_extension(space, budget=budget)
    pairwise = True
    for x in range(n):
        for y in range(n):
            for a, b in space.constraint_tuple((x, y)):
                if not any(f[x] == a and f[y] == b for f in functions):
                    pairwise = False
    report = validate_constrained(space)
    mv_side = order_ok and subdirect_inclusions and subdiag_ok and pairwise
    # given a valid family, the three conditions plus the order are exactly
    # separation and global extension in the generic sense
    matches = mv_side == (report.separated and gep) if report.valid else None

    local_cases = local_matches = None
    if report.valid and mv_side:
        local_cases = _mv_local_extension_cases(space, leq, fibers)
        lep, _ = has_local_extension(space, 2)
        local_matches = local_cases == lep
    return MVPriestleyReport(report.valid, order_ok, subdirect_inclusions,
                             subdiag_ok, pairwise, matches, local_cases,
                             local_matches)


def _mv_oriented(space, leq, fibers, x, y):
    """B_{x,y}: the pair constraint in order orientation, free when parallel."""
    if leq[x][y]:
        return space.constraint_tuple((x, y))
    if leq[y][x]:
        return frozenset((b, a) for a, b in space.constraint_tuple((y, x)))
    return frozenset(itertools.product(sorted(fibers[x]), sorted(fibers[y])))


def _mv_local_extension_cases(space, leq, fibers) -> bool:
    """For all triples: (a,b) in B_{x,y} splits through z via some c."""
    n = space.n
    for x, y, z in itertools.permutations(range(n), 3):
        bxy = _mv_oriented(space, leq, fibers, x, y)
        bxz = _mv_oriented(space, leq, fibers, x, z)
        bzy = _mv_oriented(space, leq, fibers, z, y)
        for a, b in bxy:
            if not any((a, c) in bxz and (c, b) in bzy for c in sorted(fibers[z])):
                return False
    return True
