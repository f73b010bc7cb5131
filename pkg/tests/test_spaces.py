import itertools

import pytest

from dualkit.algebras import (
    FiniteAlgebra,
    InvalidInput,
    direct_power,
    enumerate_homs,
    generate_vectors,
    power_index,
    subalgebra,
)
from dualkit.catalog import bool2, dl2, luk
from dualkit.spaces import (
    LMap,
    canonical_embedding,
    check_duality_roundtrip_algebra,
    check_duality_roundtrip_space,
    check_naturality,
    continuous_functions,
    discretize,
    evaluation_map,
    full_function_space,
    is_continuous_vector,
    is_lmap,
    is_lspace_isomorphism,
    lspace,
    regularize,
    separated_quotient,
    space_properties,
    spec_contravariant_check,
    spectrum,
)
from dualkit.terms import free_one_generated
from dualkit.topology import (
    discrete_topology,
    indiscrete_topology,
    mask_of,
    topology_from_subbasis,
)

DL = dl2().algebra
BA = bool2().algebra
L2 = luk(2).algebra

SIERPINSKI = topology_from_subbasis(2, [mask_of([0])])


def constants_space(top, L):
    return lspace(top, L, [(a,) * top.n for a in L.elements])


# --- continuous functions -----------------------------------------------------

def test_discrete_two_points_all_functions_continuous():
    assert len(continuous_functions(discrete_topology(2), DL)) == 4


def test_sierpinski_admits_only_constants():
    # both fibers must be open, and only one singleton is
    fns = continuous_functions(SIERPINSKI, DL)
    assert fns == [(0, 0), (1, 1)]
    by_filter = [f for f in itertools.product(range(2), repeat=2)
                 if is_continuous_vector(SIERPINSKI, f)]
    assert fns == by_filter


def test_indiscrete_admits_only_constants():
    fns = continuous_functions(indiscrete_topology(3), L2)
    assert fns == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]


# --- spectra -------------------------------------------------------------------

def test_spectrum_of_free_boolean_algebra():
    F, _ = free_one_generated(BA)
    spec = spectrum(F, BA)
    assert spec.space.n == 2
    assert spec.space.topology.is_discrete()


def test_spectrum_of_inconsistent_singleton_is_empty():
    single = FiniteAlgebra(DL.signature, 1,
                           {"meet": (0,), "join": (0,), "zero": (0,), "one": (0,)})
    spec = spectrum(single, DL)
    assert spec.space.n == 0
    assert spec.space.functions == frozenset({()})


def test_spectrum_of_dl_cube_has_three_points():
    spec = spectrum(direct_power(DL, 3), DL)
    assert spec.space.n == 3
    assert len(spec.homs) == len(enumerate_homs(direct_power(DL, 3), DL))


# --- the unit ------------------------------------------------------------------

def test_embedding_of_dl_itself():
    eta = canonical_embedding(DL, DL)
    assert eta.spectrum.space.n == 1
    assert eta.is_isomorphism
    assert eta.comp_algebra.size == 2


def test_embedding_of_three_chain_injective():
    chain = FiniteAlgebra(
        DL.signature, 3,
        {"meet": tuple(min(a, b) for a in range(3) for b in range(3)),
         "join": tuple(max(a, b) for a in range(3) for b in range(3)),
         "zero": (0,), "one": (2,)})
    eta = canonical_embedding(chain, DL)
    assert eta.is_injective and eta.is_isomorphism


def test_embedding_of_singleton():
    single = FiniteAlgebra(DL.signature, 1,
                           {"meet": (0,), "join": (0,), "zero": (0,), "one": (0,)})
    eta = canonical_embedding(single, DL)
    assert eta.is_isomorphism
    assert eta.comp_algebra.size == 1


# --- the counit -----------------------------------------------------------------

def test_evaluation_bijective_on_full_power():
    X = full_function_space(discrete_topology(2), DL)
    ev = evaluation_map(X)
    assert ev.is_injective and ev.is_surjective


def test_evaluation_not_injective_on_constants():
    X = constants_space(discrete_topology(2), DL)
    ev = evaluation_map(X)
    assert not ev.is_injective


def test_evaluation_bijective_on_spectra():
    spec = spectrum(direct_power(DL, 2), DL)
    ev = evaluation_map(spec.space)
    assert ev.is_injective and ev.is_surjective
    assert is_lspace_isomorphism(ev.map)


# --- property flags ---------------------------------------------------------------

def test_separated_finite_space_is_discrete():
    # property forced by the lemma on separated spaces; checked on samples
    for vectors in [[(0, 1)], [(0, 1), (1, 0)], [(0, 0, 1), (0, 1, 1)]]:
        n = len(vectors[0])
        closed = generate_vectors(DL, n, vectors)
        X = regularize(lspace(discrete_topology(n), DL, closed))
        props = space_properties(X)
        if props.separated:
            assert props.discrete


def test_constants_not_separated():
    props = space_properties(constants_space(discrete_topology(2), DL))
    assert not props.separated


def test_spectra_are_full_separated_regular():
    spec = spectrum(direct_power(L2, 2), L2)
    props = space_properties(spec.space)
    assert props.separated and props.full and props.completely_regular
    assert props.compact


def test_fullness_can_fail_without_constants():
    # over the constant-free lattice reduct the diagonal's constant
    # homomorphisms are not point evaluations
    from dualkit.catalog import reduct
    bare = reduct(DL, ("meet", "join"))
    X = lspace(discrete_topology(2), bare, [(0, 0), (1, 1)])
    props = space_properties(X)
    assert not props.full
    assert not props.separated


# --- separated quotients -----------------------------------------------------------

def test_quotient_of_constants_is_a_point():
    X = constants_space(discrete_topology(2), DL)
    Q, classes = separated_quotient(X)
    assert Q.n == 1
    assert classes == (0, 0)


def test_quotient_of_separated_space_is_itself():
    X = full_function_space(discrete_topology(2), DL)
    Q, classes = separated_quotient(X)
    assert Q.n == X.n
    assert sorted(Q.functions) == sorted(X.functions)


def test_quotient_matches_topological_indistinguishability_when_regular():
    # x and y indistinguishable, z separated; comp generated by (0,0,1)
    comp = generate_vectors(DL, 3, [(0, 0, 1)])
    top = topology_from_subbasis(3, [mask_of([0, 1]), mask_of([2])])
    X = lspace(top, DL, comp)
    assert space_properties(X).completely_regular
    Q, classes = separated_quotient(X)
    assert classes == (0, 0, 1)
    assert space_properties(Q).separated


def test_quotient_preserves_fullness():
    X = constants_space(indiscrete_topology(2), L2)
    assert space_properties(X).full
    Q, _ = separated_quotient(X)
    assert space_properties(Q).full


# --- regularize / discretize ----------------------------------------------------------

def test_regularize_full_power_is_discrete():
    X = full_function_space(discrete_topology(2), DL)
    assert regularize(X).topology.is_discrete()


def test_regularize_constants_is_indiscrete():
    X = constants_space(discrete_topology(2), DL)
    assert regularize(X).topology == indiscrete_topology(2)


def test_regularize_monotone_functions_on_chain():
    monotone = [(0, 0), (0, 1), (1, 1)]
    X = lspace(discrete_topology(2), DL, monotone)
    R = regularize(X)
    # fibers: {x}, {y}, {x,y} and complements arise, so the topology is discrete
    assert R.topology.is_discrete()
    assert regularize(R).topology == R.topology


def test_discretize():
    X = constants_space(indiscrete_topology(2), DL)
    assert discretize(X).topology.is_discrete()


# --- round-trips and naturality ----------------------------------------------------------

def test_roundtrip_dl_square():
    report = check_duality_roundtrip_algebra(direct_power(DL, 2), DL)
    assert report.ok, report.failures


def test_roundtrip_full_discrete_space():
    X = full_function_space(discrete_topology(3), DL)
    report = check_duality_roundtrip_space(X)
    assert report.ok, report.failures


def test_roundtrip_luk2_subalgebras():
    P = direct_power(L2, 2)
    from dualkit.algebras import generate_subalgebra
    universe = generate_subalgebra(P, (power_index(3, (1, 0)),))
    A, _ = subalgebra(P, universe)
    report = check_duality_roundtrip_algebra(A, L2)
    assert report.ok, report.failures


def test_naturality_square():
    P = direct_power(DL, 2)
    for h in enumerate_homs(P, DL):
        report = check_naturality(h, DL)
        assert report.ok, report.failures


def test_spec_contravariant():
    P = direct_power(DL, 2)
    for h in enumerate_homs(P, DL):          # h : P -> DL
        for g in enumerate_homs(DL, DL):     # g : DL -> DL
            assert spec_contravariant_check(h, g, DL)


# --- L-maps ---------------------------------------------------------------------------

def test_identity_is_lmap():
    X = full_function_space(discrete_topology(2), DL)
    assert is_lmap(LMap(X, X, (0, 1)))


def test_collapse_to_constants_space():
    X = full_function_space(discrete_topology(2), DL)
    Y = constants_space(discrete_topology(1), DL)
    assert is_lmap(LMap(X, Y, (0, 0)))


def test_non_lmap_detected():
    X = constants_space(discrete_topology(2), DL)
    Y = full_function_space(discrete_topology(2), DL)
    # identity points, but Y has functions that do not pull back to constants
    assert not is_lmap(LMap(X, Y, (0, 1)))


def test_lspace_rejects_discontinuous_functions():
    with pytest.raises(InvalidInput):
        lspace(indiscrete_topology(2), DL, [(0, 1), (0, 0), (1, 1)])


def test_lspace_rejects_non_subuniverse():
    with pytest.raises(InvalidInput):
        lspace(discrete_topology(2), DL, [(0, 1)])
