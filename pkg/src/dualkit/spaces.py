"""L-spaces and the two halves of the duality.

An L-space is a finite topological space together with a designated
subalgebra of continuous L-valued functions (its compatible functions).
``spectrum`` sends an algebra to its space of homomorphisms into L,
``canonical_embedding`` is the unit a |-> (h |-> h(a)), and
``evaluation_map`` is the counit x |-> pi_x.  ``check_duality_roundtrip``
verifies both directions plus the triangle identities and naturality on
explicit witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebras import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ElementMap,
    FiniteAlgebra,
    InvalidInput,
    algebra_from_vectors,
    enumerate_homs,
    in_prevariety,
)
from .topology import (
    FiniteTopology,
    discrete_topology,
    mask_of,
    topology_from_subbasis,
)


def is_continuous_vector(top: FiniteTopology, vec) -> bool:
    """Every fiber of the vector is open (the codomain is discrete)."""
    fibers: dict[int, int] = {}
    for point, value in enumerate(vec):
        fibers[value] = fibers.get(value, 0) | (1 << point)
    return all(top.is_open(m) for m in fibers.values())


def continuous_functions(top: FiniteTopology, L: FiniteAlgebra,
                         budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All continuous maps into the discrete carrier of L.

    These are exactly the functions constant on the topological components,
    so the search assigns one value per component instead of one per point.
    """
    classes = top.components()
    count = max(classes) + 1 if classes else 0
    if L.size**count > budget:
        raise BudgetExceeded("continuous-function search exceeds budget")
    out = []
    for choice in itertools.product(L.elements, repeat=count):
        out.append(tuple(choice[c] for c in classes))
    return sorted(out)


@dataclass(frozen=True)
class LSpace:
    """A finite topology plus a subalgebra of continuous L-valued functions."""

    topology: FiniteTopology
    dualizer: FiniteAlgebra
    functions: frozenset

    def __post_init__(self):
        for f in self.functions:
            if len(f) != self.topology.n:
                raise InvalidInput("compatible function of wrong length")
            if any(not 0 <= v < self.dualizer.size for v in f):
                raise InvalidInput("compatible function outside the carrier")
            if not is_continuous_vector(self.topology, f):
                raise InvalidInput("compatible function is not continuous")
        _check_subuniverse(self.dualizer, self.topology.n, self.functions)

    @property
    def n(self) -> int:
        return self.topology.n

    def comp_algebra(self):
        """The compatible functions as an abstract algebra (pointwise tables).

        Returns (algebra, carrier) with carrier[i] the vector of element i.
        """
        return algebra_from_vectors(self.dualizer, self.n, self.functions)


def _check_subuniverse(L, length, vectors):
    vectors = set(vectors)
    for name, arity in L.signature.ops:
        if arity == 0:
            if (L.apply(name),) * length not in vectors:
                raise InvalidInput("compatible functions miss the constant %r" % name)
            continue
        for args in itertools.product(sorted(vectors), repeat=arity):
            value = tuple(L.apply(name, *pw) for pw in zip(*args)) if args else ()
            if value not in vectors:
                raise InvalidInput("compatible functions not closed under %r" % name)


def lspace(top: FiniteTopology, L: FiniteAlgebra, functions) -> LSpace:
    return LSpace(top, L, frozenset(tuple(f) for f in functions))


def full_function_space(top: FiniteTopology, L: FiniteAlgebra) -> LSpace:
    return lspace(top, L, continuous_functions(top, L))


@dataclass(frozen=True)
class LMap:
    """A point map between L-spaces; validity is checked by ``is_lmap``."""

    domain: LSpace
    codomain: LSpace
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.n:
            raise InvalidInput("point map length does not match the domain")
        if any(not 0 <= v < self.codomain.n for v in self.values):
            raise InvalidInput("point map value outside the codomain")


def is_point_map_continuous(phi: LMap) -> bool:
    for u in phi.codomain.topology.opens:
        pre = mask_of(x for x in range(phi.domain.n) if u & (1 << phi.values[x]))
        if not phi.domain.topology.is_open(pre):
            return False
    return True


def reflects_compatibility(phi: LMap) -> bool:
    for g in phi.codomain.functions:
        if tuple(g[phi.values[x]] for x in range(phi.domain.n)) not in phi.domain.functions:
            return False
    return True


def is_lmap(phi: LMap) -> bool:
    return is_point_map_continuous(phi) and reflects_compatibility(phi)


def is_lspace_isomorphism(phi: LMap) -> bool:
    """Bijective homeomorphism reflecting compatibility in both directions."""
    if phi.domain.n != phi.codomain.n or len(set(phi.values)) != phi.domain.n:
        return False
    if not is_lmap(phi):
        return False
    inverse = [0] * phi.domain.n
    for x, y in enumerate(phi.values):
        inverse[y] = x
    return is_lmap(LMap(phi.codomain, phi.domain, tuple(inverse)))


@dataclass(frozen=True)
class Spectrum:
    """Spec A: points are the homomorphisms A -> L in canonical order."""

    algebra: FiniteAlgebra
    dualizer: FiniteAlgebra
    homs: tuple[ElementMap, ...]
    space: LSpace


def spectrum(A: FiniteAlgebra, L: FiniteAlgebra, gens=None) -> Spectrum:
    """The dual space of A: Hom(A, L) under the clopen subbasis U_{a -> W}.

    Compatible functions are the images of eta_A; point order is the
    lexicographic order of the homomorphisms' value vectors.
    """
    homs = sorted(enumerate_homs(A, L, gens=gens), key=lambda h: h.values)
    n = len(homs)
    subbasis = []
    for a in A.elements:
        for w in L.elements:
            subbasis.append(mask_of(i for i, h in enumerate(homs) if h.values[a] == w))
    top = topology_from_subbasis(n, subbasis)
    comp = frozenset(tuple(h.values[a] for h in homs) for a in A.elements)
    return Spectrum(A, L, tuple(homs), lspace(top, L, comp))


@dataclass(frozen=True)
class CanonicalEmbedding:
    """eta_A : A -> Comp Spec A, with the comp algebra materialized."""

    spectrum: Spectrum
    comp_algebra: FiniteAlgebra
    comp_carrier: tuple
    map: ElementMap  # A -> comp_algebra

    @property
    def is_injective(self) -> bool:
        return self.map.is_injective()

    @property
    def is_isomorphism(self) -> bool:
        # eta is a surjection onto Comp Spec A by construction, so bijectivity
        # reduces to injectivity; the homomorphism property is still verified.
        return self.map.is_injective() and self.map.is_homomorphism()


def canonical_embedding(A: FiniteAlgebra, L: FiniteAlgebra, gens=None) -> CanonicalEmbedding:
    spec = spectrum(A, L, gens=gens)
    comp_alg, carrier = spec.space.comp_algebra()
    lookup = {v: i for i, v in enumerate(carrier)}
    values = tuple(lookup[tuple(h.values[a] for h in spec.homs)] for a in A.elements)
    return CanonicalEmbedding(spec, comp_alg, tuple(carrier), ElementMap(A, comp_alg, values))


@dataclass(frozen=True)
class EvaluationMap:
    """ev_X : X -> Spec Comp X, sending a point to evaluation at it."""

    space: LSpace
    comp_algebra: FiniteAlgebra
    comp_carrier: tuple
    spectrum: Spectrum
    map: LMap

    @property
    def is_injective(self) -> bool:
        return len(set(self.map.values)) == self.space.n

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map.values)) == self.spectrum.space.n


def evaluation_map(X: LSpace) -> EvaluationMap:
    comp_alg, carrier = X.comp_algebra()
    spec = spectrum(comp_alg, X.dualizer)
    hom_index = {h.values: i for i, h in enumerate(spec.homs)}
    values = []
    for x in range(X.n):
        pi_x = tuple(vec[x] for vec in carrier)
        if pi_x not in hom_index:
            raise AssertionError("point evaluation is not a homomorphism")
        values.append(hom_index[pi_x])
    ev = LMap(X, spec.space, tuple(values))
    if not is_lmap(ev):
        raise AssertionError("evaluation map failed to be a continuous L-map")
    return EvaluationMap(X, comp_alg, tuple(carrier), spec, ev)


@dataclass(frozen=True)
class SpaceProperties:
    separated: bool
    full: bool
    completely_regular: bool
    discrete: bool
    compact: bool = True


def space_properties(X: LSpace) -> SpaceProperties:
    separated = True
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if not any(f[x] != f[y] for f in X.functions):
                separated = False
    comp_alg, carrier = X.comp_algebra()
    evaluations = {tuple(vec[x] for vec in carrier) for x in range(X.n)}
    full = all(h.values in evaluations for h in enumerate_homs(comp_alg, X.dualizer))
    completely_regular = X.topology == _fiber_topology(X)
    return SpaceProperties(separated, full, completely_regular, X.topology.is_discrete())


def _fiber_topology(X: LSpace) -> FiniteTopology:
    subbasis = []
    for f in X.functions:
        for a in X.dualizer.elements:
            subbasis.append(mask_of(x for x in range(X.n) if f[x] == a))
    return topology_from_subbasis(X.n, subbasis)


def regularize(X: LSpace) -> LSpace:
    """Install the initial topology generated by the fibers of comp."""
    return lspace(_fiber_topology(X), X.dualizer, X.functions)


def discretize(X: LSpace) -> LSpace:
    return lspace(discrete_topology(X.n), X.dualizer, X.functions)


def separated_quotient(X: LSpace) -> tuple[LSpace, tuple[int, ...]]:
    """Collapse points that all compatible functions fail to distinguish.

    Returns the quotient space and the point -> class vector; the quotient
    carries the quotient topology and the pushed-down functions.
    """
    classes: list[int] = []
    seen: dict[tuple, int] = {}
    for x in range(X.n):
        signature = tuple(f[x] for f in sorted(X.functions))
        if signature not in seen:
            seen[signature] = len(seen)
        classes.append(seen[signature])
    top = X.topology.quotient(classes)
    functions = set()
    m = max(classes) + 1 if classes else 0
    for f in X.functions:
        pushed = [None] * m
        for x, c in enumerate(classes):
            pushed[c] = f[x]
        functions.add(tuple(pushed))
    return lspace(top, X.dualizer, functions), tuple(classes)


@dataclass
class RoundtripReport:
    failures: list = field(default_factory=list)
    checked: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name, ok, witness=None):
        self.checked.append(name)
        if not ok:
            self.failures.append((name, witness))


def check_duality_roundtrip_algebra(A: FiniteAlgebra, L: FiniteAlgebra,
                                    gens=None) -> RoundtripReport:
    """For A in the prevariety of L: eta_A is an isomorphism onto Comp Spec A,
    Spec A is full/separated/completely regular, and the triangle identity
    on Spec A holds pointwise."""
    report = RoundtripReport()
    if not in_prevariety(A, L):
        report.record("algebra in prevariety", False, "Hom(A, L) does not separate")
        return report
    eta = canonical_embedding(A, L, gens=gens)
    report.record("eta injective", eta.is_injective)
    report.record("eta isomorphism", eta.is_isomorphism)
    props = space_properties(eta.spectrum.space)
    report.record("spectrum separated", props.separated)
    report.record("spectrum full", props.full)
    report.record("spectrum completely regular", props.completely_regular)
    # Triangle: Spec(eta_A) after ev_{Spec A} is the identity on points.
    ev = evaluation_map(eta.spectrum.space)
    for i, h in enumerate(eta.spectrum.homs):
        point = ev.map.values[i]
        transported = tuple(ev.spectrum.homs[point].values[eta.map.values[a]]
                            for a in A.elements)
        report.record("triangle on spectrum point %d" % i, transported == h.values,
                      (h.values, transported))
    return report


def check_duality_roundtrip_space(X: LSpace) -> RoundtripReport:
    """For a full separated (finite, hence discrete) L-space: ev_X is an
    isomorphism of L-spaces, and the triangle identity on Comp X holds."""
    report = RoundtripReport()
    props = space_properties(X)
    ev = evaluation_map(X)
    report.record("ev injective iff separated", ev.is_injective == props.separated)
    report.record("ev surjective iff full", ev.is_surjective == props.full)
    if props.separated and props.full:
        report.record("ev isomorphism", is_lspace_isomorphism(ev.map))
    # Triangle: Comp(ev_X) after eta_{Comp X} is the identity on Comp X.
    carrier = ev.comp_carrier
    for i, vec in enumerate(carrier):
        eta_vec = tuple(h.values[i] for h in ev.spectrum.homs)
        pulled = tuple(eta_vec[ev.map.values[x]] for x in range(X.n))
        report.record("triangle on compatible function %d" % i, pulled == vec,
                      (vec, pulled))
    return report


def check_duality_roundtrip(obj, dualizer: FiniteAlgebra | None = None,
                            gens=None) -> RoundtripReport:
    """Dispatch on the argument: an L-space checks the counit, an algebra
    (with an explicit dualizer) checks the unit."""
    if isinstance(obj, LSpace):
        return check_duality_roundtrip_space(obj)
    if dualizer is None:
        raise InvalidInput("round-tripping an algebra needs the dualizer")
    return check_duality_roundtrip_algebra(obj, dualizer, gens=gens)


def check_naturality(h: ElementMap, L: FiniteAlgebra) -> RoundtripReport:
    """Comp(Spec h) . eta_A = eta_B . h, checked pointwise on elements of A."""
    A, B = h.domain, h.codomain
    report = RoundtripReport()
    if not h.is_homomorphism():
        report.record("input is a homomorphism", False)
        return report
    spec_a = spectrum(A, L)
    spec_b = spectrum(B, L)
    # Spec h maps a point g of Spec B to g . h, a point of Spec A.
    index_a = {hm.values: i for i, hm in enumerate(spec_a.homs)}
    spec_h = []
    for g in spec_b.homs:
        composed = tuple(g.values[h.values[a]] for a in A.elements)
        if composed not in index_a:
            report.record("Spec h lands in Spec A", False, composed)
            return report
        spec_h.append(index_a[composed])
    for a in A.elements:
        eta_a = tuple(hm.values[a] for hm in spec_a.homs)
        lhs = tuple(eta_a[spec_h[j]] for j in range(len(spec_b.homs)))
        rhs = tuple(hm.values[h.values[a]] for hm in spec_b.homs)
        report.record("naturality at element %d" % a, lhs == rhs, (lhs, rhs))
    return report


def spec_contravariant_check(h: ElementMap, g: ElementMap, L: FiniteAlgebra) -> bool:
    """Spec(g . h) = Spec(h) . Spec(g) on points, for composable homs h, g."""
    composed = g.compose(h)
    spec_outer = spectrum(composed.domain, L)

    def spec_of(m, target_spec):
        index = {hm.values: i for i, hm in enumerate(target_spec.homs)}
        def act(point_hom):
            return index[tuple(point_hom.values[m.values[a]] for a in m.domain.elements)]
        return act

    spec_mid = spectrum(g.domain, L)
    act_g = spec_of(g, spec_mid)          # Spec g : Spec C -> Spec B
    act_h = spec_of(h, spec_outer)        # Spec h : Spec B -> Spec A
    act_gh = spec_of(composed, spec_outer)
    spec_c = spectrum(g.codomain, L)
    for p in spec_c.homs:
        mid = spec_mid.homs[act_g(p)]
        if act_h(mid) != act_gh(p):
            return False
    return True
