import pytest

from dualkit.catalog import dl2, luk
from dualkit.constrained import ConstrainedSpace, UnaryConstrainedSpace
from dualkit.fileformat import (
    ParseError,
    ValidationError,
    export_dot,
    parse_algebra,
    parse_document,
    parse_space,
    resolve_algebra,
    serialize_algebra,
    serialize_space,
    space_document,
)
from dualkit.spaces import lspace, spectrum
from dualkit.terms import free_one_generated
from dualkit.topology import discrete_topology

DL_DOC = """\
kind: algebra
name: dl2
signature: [["meet", 2], ["join", 2], ["zero", 0], ["one", 0]]
size: 2
labels: ["0", "1"]
table meet: [[0, 0], [0, 1]]
table join: [[0, 1], [1, 1]]
table zero: 0
table one: 1
"""

PRIESTLEY_DOC = """\
kind: constrained-2
dualizer: builtin:dl2
points: ["x", "y"]
constraint ["x"]: [["0"], ["1"]]
constraint ["y"]: [["0"], ["1"]]
constraint ["x", "y"]: [["0", "0"], ["0", "1"], ["1", "1"]]
"""


def test_algebra_document_round_trip():
    doc = parse_algebra(DL_DOC)
    assert doc.algebra == dl2().algebra
    canonical = serialize_algebra(doc)
    assert parse_algebra(canonical).algebra == doc.algebra
    assert serialize_algebra(parse_algebra(canonical)) == canonical


def test_duplicate_keys_rejected_with_line():
    bad = DL_DOC + "size: 2\n"
    with pytest.raises(ParseError) as err:
        parse_document(bad)
    assert err.value.line == 10


def test_missing_colon_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_document("kind algebra")


def test_out_of_range_entry_names_op_and_tuple():
    bad = DL_DOC.replace("table meet: [[0, 0], [0, 1]]",
                         "table meet: [[0, 5], [0, 1]]")
    with pytest.raises(ValidationError) as err:
        parse_algebra(bad)
    assert "meet" in str(err.value) and "(0, 1)" in str(err.value)


def test_builtin_reference_resolves_without_a_file():
    doc = resolve_algebra("builtin:luk(2)")
    assert doc.algebra == luk(2).algebra
    assert doc.labels == ("0", "1/2", "1")


def test_lspace_document_round_trip():
    X = lspace(discrete_topology(2), dl2().algebra, [(0, 0), (0, 1), (1, 1)])
    doc = space_document(X, "builtin:dl2", points=("x", "y"))
    text = serialize_space(doc)
    again = parse_space(text)
    assert again.space.functions == X.functions
    assert again.space.topology == X.topology
    assert serialize_space(again) == text


def test_constrained_document_round_trip():
    doc = parse_space(PRIESTLEY_DOC)
    assert isinstance(doc.space, ConstrainedSpace)
    assert doc.space.constraint((0, 1)) == frozenset({(0, 0), (0, 1), (1, 1)})
    text = serialize_space(doc)
    assert parse_space(text).space.constraint((0, 1)) == doc.space.constraint((0, 1))
    assert serialize_space(parse_space(text)) == text


def test_unary_document_round_trip():
    space = UnaryConstrainedSpace(discrete_topology(2), luk(2).algebra,
                                  [{0, 2}, {0, 1, 2}], [0, 0])
    doc = space_document(space, "builtin:luk(2)", points=("x", "y"))
    text = serialize_space(doc)
    again = parse_space(text)
    assert again.space.fibers == space.fibers
    assert again.space.related(0, 1)
    assert serialize_space(again) == text


def test_poset_document():
    text = 'kind: poset\npoints: ["a", "b"]\nleq: [["a", "b"]]\n'
    doc = parse_space(text)
    assert doc.kind == "poset"
    assert doc.space == [[True, True], [False, True]]
    assert serialize_space(doc) == text


def test_indices_accepted_as_values():
    text = PRIESTLEY_DOC.replace('[["0"], ["1"]]', "[[0], [1]]", 1)
    doc = parse_space(text)
    assert doc.space.constraint((0,)) == frozenset({(0,), (1,)})


def test_unknown_point_rejected():
    bad = PRIESTLEY_DOC.replace('constraint ["x"]', 'constraint ["q"]')
    with pytest.raises(ValidationError):
        parse_space(bad)


def test_dot_for_two_chain_has_one_edge():
    doc = parse_space(PRIESTLEY_DOC)
    dot = export_dot(doc)
    assert dot.count("->") == 1
    assert '"x" -> "y"' in dot


def test_dot_for_antichain_has_no_edges():
    text = 'kind: poset\npoints: ["a", "b"]\nleq: []\n'
    dot = export_dot(parse_space(text))
    assert "->" not in dot


def test_dot_for_spectrum_is_isolated_annotated_nodes():
    from dualkit.catalog import bool2
    F, _ = free_one_generated(bool2().algebra)
    spec = spectrum(F, bool2().algebra)
    doc = space_document(spec.space, "builtin:bool2")
    dot = export_dot(doc)
    assert "->" not in dot
    assert dot.count("label=") == 2


def test_dot_for_unary_boxes_classes():
    space = UnaryConstrainedSpace(discrete_topology(3), luk(2).algebra,
                                  [{0, 2}, {0, 2}, {0, 1, 2}], [0, 0, 1])
    doc = space_document(space, "builtin:luk(2)")
    dot = export_dot(doc)
    assert dot.count("subgraph cluster_") == 2
    assert "1/2" in dot
