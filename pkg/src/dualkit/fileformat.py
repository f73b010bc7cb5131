"""Line-oriented document formats and DOT export.

Documents are ``key: value`` lines with JSON-style values; ``#`` starts a
comment line and duplicate keys are rejected.  Algebra tables are nested
arrays, row-major in the first argument.  Element values inside space
documents are written as dualizer labels; bare indices are accepted on
input.  Parsing errors carry line numbers and are distinct from semantic
validation errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebras import FiniteAlgebra, InvalidInput, Signature
from .catalog import build
from .constrained import (
    ConstrainedSpace,
    UnaryConstrainedSpace,
    priestley_to_order,
)
from .spaces import LSpace, lspace
from .topology import bits_of, discrete_topology, mask_of, topology_from_subbasis


class ParseError(ValueError):
    """Syntactically malformed document; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__("line %d: %s" % (line, message))
        self.line = line


class ValidationError(InvalidInput):
    """Well-formed document with inconsistent content."""


def parse_document(text: str) -> dict:
    """Key/value lines -> ordered dict; values are JSON or raw strings."""
    out: dict[str, object] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError(number, "expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        if not key:
            raise ParseError(number, "empty key")
        if key in out:
            raise ParseError(number, "duplicate key %r" % key)
        value = value.strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def serialize_document(items) -> str:
    lines = []
    for key, value in items:
        if isinstance(value, str):
            lines.append("%s: %s" % (key, value))
        else:
            lines.append("%s: %s" % (key, json.dumps(value)))
    return "\n".join(lines) + "\n"


# --- algebras ---------------------------------------------------------------------

def _nest_table(table, size, arity):
    if arity == 0:
        return table[0]
    if arity == 1:
        return list(table)
    width = size ** (arity - 1)
    return [_nest_table(table[i * width:(i + 1) * width], size, arity - 1)
            for i in range(size)]


def _flatten_table(nested, size, arity, name):
    if arity == 0:
        if not isinstance(nested, int):
            raise ValidationError("table for %r must be a single index" % name)
        return (nested,)
    if not isinstance(nested, list) or len(nested) != size:
        raise ValidationError("table for %r must have %d rows" % (name, size))
    out = []
    for row in nested:
        out.extend(_flatten_table(row, size, arity - 1, name))
    return tuple(out)


@dataclass(frozen=True)
class AlgebraDocument:
    name: str
    algebra: FiniteAlgebra
    labels: tuple[str, ...]

    def label_index(self, value) -> int:
        if isinstance(value, int):
            if not 0 <= value < self.algebra.size:
                raise ValidationError("element index %r out of range" % value)
            return value
        if value in self.labels:
            return self.labels.index(value)
        raise ValidationError("unknown element label %r" % (value,))


def parse_algebra(text: str) -> AlgebraDocument:
    doc = parse_document(text)
    if doc.get("kind") != "algebra":
        raise ValidationError("expected kind: algebra")
    try:
        signature = Signature(tuple((str(n), int(a)) for n, a in doc["signature"]))
        size = int(doc["size"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("bad signature/size: %s" % exc)
    labels = doc.get("labels")
    if labels is None:
        labels = [str(i) for i in range(size)]
    if len(labels) != size or len(set(labels)) != size:
        raise ValidationError("labels must be bijective with the carrier")
    tables = {}
    for name, arity in signature.ops:
        key = "table %s" % name
        if key not in doc:
            raise ValidationError("missing %r" % key)
        flat = _flatten_table(doc[key], size, arity, name)
        for position, entry in enumerate(flat):
            if not isinstance(entry, int) or not 0 <= entry < size:
                args = tuple(_unrank(position, size, arity))
                raise ValidationError(
                    "table entry %r out of range in %r at %r" % (entry, name, args))
        tables[name] = flat
    algebra = FiniteAlgebra(signature, size, tables)
    return AlgebraDocument(str(doc.get("name", "")), algebra, tuple(labels))


def _unrank(position, size, arity):
    out = []
    for _ in range(arity):
        out.append(position % size)
        position //= size
    return reversed(out)


def serialize_algebra(doc: AlgebraDocument) -> str:
    items = [("kind", "algebra")]
    if doc.name:
        items.append(("name", doc.name))
    items.append(("signature", [[n, a] for n, a in doc.algebra.signature.ops]))
    items.append(("size", doc.algebra.size))
    items.append(("labels", list(doc.labels)))
    for name, arity in doc.algebra.signature.ops:
        items.append(("table %s" % name,
                      _nest_table(doc.algebra.tables[name], doc.algebra.size, arity)))
    return serialize_document(items)


def resolve_algebra(ref: str, read_file=None) -> AlgebraDocument:
    """Resolve ``builtin:NAME`` against the catalog, anything else as a path."""
    ref = ref.strip()
    if ref.startswith("builtin:"):
        entry = build(ref[len("builtin:"):])
        name = entry.name if not entry.params else \
            "%s(%s)" % (entry.name, ",".join(map(str, entry.params)))
        return AlgebraDocument(name, entry.algebra, entry.labels)
    if read_file is None:
        with open(ref, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = read_file(ref)
    return parse_algebra(text)


# --- spaces -----------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceDocument:
    kind: str                  # lspace | constrained-k | constrained-unary | poset
    points: tuple[str, ...]
    dualizer_ref: str
    dualizer: AlgebraDocument | None
    space: object              # LSpace | ConstrainedSpace | UnaryConstrainedSpace | leq


def _parse_points(doc):
    points = doc.get("points")
    if not isinstance(points, list) or len(set(points)) != len(points):
        raise ValidationError("points must be a list of distinct labels")
    return tuple(str(p) for p in points)


def _parse_topology(doc, points):
    opens = doc.get("opens")
    n = len(points)
    if opens is None:
        return discrete_topology(n)
    index = {p: i for i, p in enumerate(points)}
    masks = []
    for subset in opens:
        try:
            masks.append(mask_of(index[p] for p in subset))
        except KeyError as exc:
            raise ValidationError("unknown point %s in opens" % exc)
    return topology_from_subbasis(n, masks)


def _value_tuple(dualizer_doc, values):
    return tuple(dualizer_doc.label_index(v) for v in values)


def parse_space(text: str, read_file=None) -> SpaceDocument:
    doc = parse_document(text)
    kind = doc.get("kind")
    if kind == "poset":
        return _parse_poset(doc)
    if kind not in ("lspace", "constrained-unary") and not (
            isinstance(kind, str) and kind.startswith("constrained-")):
        raise ValidationError("unknown document kind %r" % kind)
    ref = doc.get("dualizer")
    if not isinstance(ref, str):
        raise ValidationError("missing dualizer reference")
    dualizer = resolve_algebra(ref, read_file=read_file)
    points = _parse_points(doc)
    top = _parse_topology(doc, points)
    index = {p: i for i, p in enumerate(points)}

    if kind == "lspace":
        comp = doc.get("comp")
        if not isinstance(comp, list):
            raise ValidationError("lspace documents need a comp block")
        functions = [_value_tuple(dualizer, f) for f in comp]
        space = lspace(top, dualizer.algebra, functions)
        return SpaceDocument(kind, points, ref, dualizer, space)

    if kind == "constrained-unary":
        fibers_doc = doc.get("fibers")
        if not isinstance(fibers_doc, list) or len(fibers_doc) != len(points):
            raise ValidationError("fibers must list one value set per point")
        fibers = [frozenset(dualizer.label_index(v) for v in f) for f in fibers_doc]
        equiv_doc = doc.get("equiv")
        classes = list(range(len(points)))
        if equiv_doc is not None:
            seen = set()
            for c, block in enumerate(equiv_doc):
                for p in block:
                    if p not in index or p in seen:
                        raise ValidationError("bad equivalence block %r" % (block,))
                    seen.add(p)
                    classes[index[p]] = c
            if len(seen) != len(points):
                raise ValidationError("equivalence blocks must cover every point")
        a_empty = doc.get("a_empty")
        space = UnaryConstrainedSpace(top, dualizer.algebra, fibers, classes,
                                      a_empty if a_empty is None else bool(a_empty))
        return SpaceDocument(kind, points, ref, dualizer, space)

    try:
        k = int(kind.split("-", 1)[1])
    except ValueError:
        raise ValidationError("unknown document kind %r" % kind)
    family = {}
    for key, value in doc.items():
        if not key.startswith("constraint "):
            continue
        try:
            subset = json.loads(key[len("constraint "):])
        except json.JSONDecodeError:
            raise ValidationError("bad constraint key %r" % key)
        try:
            pts = tuple(index[p] for p in subset)
        except KeyError as exc:
            raise ValidationError("unknown point %s in constraint key" % exc)
        if sorted(pts) != list(pts):
            raise ValidationError("constraint keys list points in document order")
        family[frozenset(pts)] = {_value_tuple(dualizer, f) for f in value}
    if "a_empty" in doc:
        family[frozenset()] = {()} if doc["a_empty"] else set()
    space = ConstrainedSpace(k, top, dualizer.algebra, family)
    return SpaceDocument(kind, points, ref, dualizer, space)


def _parse_poset(doc):
    points = _parse_points(doc)
    index = {p: i for i, p in enumerate(points)}
    n = len(points)
    leq = [[x == y for y in range(n)] for x in range(n)]
    for pair in doc.get("leq", []):
        try:
            x, y = pair
            leq[index[x]][index[y]] = True
        except (ValueError, KeyError):
            raise ValidationError("bad leq pair %r" % (pair,))
    return SpaceDocument("poset", points, "", None, leq)


def _serialize_topology(items, space, points):
    top = space.topology if hasattr(space, "topology") else None
    if top is not None and not top.is_discrete():
        opens = sorted(sorted(points[i] for i in bits_of(u)) for u in top.opens)
        items.append(("opens", opens))


def serialize_space(doc: SpaceDocument) -> str:
    points = doc.points
    if doc.kind == "poset":
        leq = doc.space
        pairs = sorted([points[x], points[y]]
                       for x in range(len(points)) for y in range(len(points))
                       if x != y and leq[x][y])
        return serialize_document([("kind", "poset"), ("points", list(points)),
                                   ("leq", pairs)])
    labels = doc.dualizer.labels
    items = [("kind", doc.kind), ("dualizer", doc.dualizer_ref),
             ("points", list(points))]
    _serialize_topology(items, doc.space, points)
    space = doc.space
    if doc.kind == "lspace":
        items.append(("comp", sorted([labels[v] for v in f]
                                     for f in space.functions)))
    elif doc.kind == "constrained-unary":
        items.append(("fibers", [sorted(labels[v] for v in f) for f in space.fibers]))
        blocks: dict[int, list] = {}
        for p, c in enumerate(space.equiv):
            blocks.setdefault(c, []).append(points[p])
        items.append(("equiv", sorted(blocks.values())))
        if not space.dualizer.signature.constants:
            items.append(("a_empty", space.a_empty))
    else:
        for key in sorted(space.constraints, key=lambda s: (len(s), sorted(s))):
            if not key and space.dualizer.signature.constants:
                continue
            if not key:
                items.append(("a_empty", () in space.constraints[key]))
                continue
            pts = sorted(key)
            funs = sorted([labels[v] for v in f] for f in space.constraints[key])
            items.append(("constraint %s" % json.dumps([points[p] for p in pts]), funs))
    return serialize_document(items)


def space_document(space, dualizer_ref: str, read_file=None,
                   points=None) -> SpaceDocument:
    """Wrap an in-memory space for serialization."""
    dualizer = resolve_algebra(dualizer_ref, read_file=read_file)
    n = space.n
    if points is None:
        points = tuple("p%d" % i for i in range(n))
    if isinstance(space, LSpace):
        kind = "lspace"
    elif isinstance(space, UnaryConstrainedSpace):
        kind = "constrained-unary"
    else:
        kind = "constrained-%d" % space.k
    return SpaceDocument(kind, tuple(points), dualizer_ref, dualizer, space)


# --- DOT export --------------------------------------------------------------------

def _hasse_edges(leq, n):
    strict = [[leq[x][y] and not leq[y][x] for y in range(n)] for x in range(n)]
    edges = []
    for x in range(n):
        for y in range(n):
            if not strict[x][y]:
                continue
            if any(strict[x][z] and strict[z][y] for z in range(n)):
                continue
            edges.append((x, y))
    return edges


def export_dot(doc: SpaceDocument) -> str:
    """Deterministic DOT: Hasse edges for extracted orders, fibers as node
    annotations, equivalence classes boxed."""
    points = doc.points
    lines = ["digraph dual {", "  rankdir=BT;"]
    if doc.kind == "poset":
        for x, y in _hasse_edges(doc.space, len(points)):
            lines.append('  "%s" -> "%s";' % (points[x], points[y]))
        for p in points:
            lines.append('  "%s";' % p)
    elif doc.kind == "constrained-unary":
        space = doc.space
        labels = doc.dualizer.labels
        blocks: dict[int, list] = {}
        for p, c in enumerate(space.equiv):
            blocks.setdefault(c, []).append(p)
        for c, members in sorted(blocks.items()):
            lines.append("  subgraph cluster_%d {" % c)
            for p in sorted(members):
                annotation = ",".join(labels[v] for v in sorted(space.fibers[p]))
                lines.append('    "%s" [label="%s {%s}"];' % (points[p], points[p], annotation))
            lines.append("  }")
    elif doc.kind.startswith("constrained-"):
        space = doc.space
        if space.dualizer.size == 2:
            leq = priestley_to_order(space)
        else:
            leq = [[_mv_graded(space, x, y) for y in range(space.n)]
                   for x in range(space.n)]
        labels = doc.dualizer.labels
        for x, y in _hasse_edges(leq, space.n):
            lines.append('  "%s" -> "%s";' % (points[x], points[y]))
        for p in range(space.n):
            fiber = ",".join(labels[f[0]] for f in sorted(space.constraint((p,))))
            lines.append('  "%s" [label="%s {%s}"];' % (points[p], points[p], fiber))
    else:
        space = doc.space
        labels = doc.dualizer.labels
        for p in range(space.n):
            column = ",".join(labels[f[p]] for f in sorted(space.functions))
            lines.append('  "%s" [label="%s (%s)"];' % (points[p], points[p], column))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _mv_graded(space, x, y):
    return all(a <= b for a, b in space.constraint_tuple((x, y)))
