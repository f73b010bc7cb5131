"""Built-in dualizing algebras.

``bool2`` and ``dl2`` are the two-element Boolean algebra and bounded
distributive lattice; ``luk(n)`` is the Lukasiewicz chain on
``{0, 1/n, ..., 1}`` with truncated arithmetic, and ``posluk(n)`` its
negation-free reduct.  Labels are exact rationals; no floating point is
used anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebras import FiniteAlgebra, InvalidInput, Signature

BOOL_SIGNATURE = Signature((("meet", 2), ("join", 2), ("neg", 1), ("zero", 0), ("one", 0)))
DL_SIGNATURE = Signature((("meet", 2), ("join", 2), ("zero", 0), ("one", 0)))
MV_SIGNATURE = Signature((("oplus", 2), ("odot", 2), ("neg", 1),
                          ("join", 2), ("meet", 2), ("zero", 0), ("one", 0)))
POSMV_SIGNATURE = Signature((("oplus", 2), ("odot", 2),
                             ("join", 2), ("meet", 2), ("zero", 0), ("one", 0)))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple
    labels: tuple[str, ...]
    algebra: FiniteAlgebra

    def __post_init__(self):
        if len(self.labels) != self.algebra.size:
            raise InvalidInput("labels must be bijective with the carrier")

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidInput("unknown element label %r for %s" % (label, self.name))


def _binary_table(n, fn):
    return tuple(fn(a, b) for a in range(n) for b in range(n))


def bool2() -> CatalogEntry:
    tables = {
        "meet": _binary_table(2, min),
        "join": _binary_table(2, max),
        "neg": (1, 0),
        "zero": (0,),
        "one": (1,),
    }
    return CatalogEntry("bool2", (), ("0", "1"), FiniteAlgebra(BOOL_SIGNATURE, 2, tables))


def dl2() -> CatalogEntry:
    tables = {
        "meet": _binary_table(2, min),
        "join": _binary_table(2, max),
        "zero": (0,),
        "one": (1,),
    }
    return CatalogEntry("dl2", (), ("0", "1"), FiniteAlgebra(DL_SIGNATURE, 2, tables))


def _luk_tables(n):
    # element i stands for the rational i/n
    size = n + 1
    return {
        "oplus": _binary_table(size, lambda a, b: min(a + b, n)),
        "odot": _binary_table(size, lambda a, b: max(a + b - n, 0)),
        "neg": tuple(n - a for a in range(size)),
        "join": _binary_table(size, max),
        "meet": _binary_table(size, min),
        "zero": (0,),
        "one": (n,),
    }


def _chain_labels(n):
    return tuple(str(Fraction(i, n)) for i in range(n + 1))


def luk(n: int) -> CatalogEntry:
    if n < 1:
        raise InvalidInput("luk(n) requires n >= 1")
    algebra = FiniteAlgebra(MV_SIGNATURE, n + 1, _luk_tables(n))
    return CatalogEntry("luk", (n,), _chain_labels(n), algebra)


def posluk(n: int) -> CatalogEntry:
    if n < 1:
        raise InvalidInput("posluk(n) requires n >= 1")
    tables = {k: v for k, v in _luk_tables(n).items() if k != "neg"}
    algebra = FiniteAlgebra(POSMV_SIGNATURE, n + 1, tables)
    return CatalogEntry("posluk", (n,), _chain_labels(n), algebra)


_NAME_RE = re.compile(r"^(bool2|dl2)$|^(luk|posluk)\((\d+)\)$")


def build(name: str) -> CatalogEntry:
    """Resolve a catalog name such as ``dl2`` or ``luk(2)``."""
    m = _NAME_RE.match(name.strip())
    if not m:
        raise InvalidInput("unknown catalog name %r" % name)
    if m.group(1) == "bool2":
        return bool2()
    if m.group(1) == "dl2":
        return dl2()
    ctor = luk if m.group(2) == "luk" else posluk
    return ctor(int(m.group(3)))


def reduct(A: FiniteAlgebra, op_subset) -> FiniteAlgebra:
    """Same carrier, tables restricted to the named symbols."""
    signature = A.signature.restrict(op_subset)
    tables = {name: A.tables[name] for name in signature.names}
    return FiniteAlgebra(signature, A.size, tables)


@dataclass(frozen=True)
class HyperarchimedeanReport:
    odot_form: bool | None
    oplus_form: bool | None

    def __bool__(self):
        primary = self.odot_form if self.odot_form is not None else self.oplus_form
        return bool(primary)


def _eventually_idempotent(A, op, a):
    # powers a, a*a, a*a*a, ... must hit an idempotent within |A| steps
    power = a
    for _ in range(A.size):
        if A.apply(op, power, power) == power:
            return True
        power = A.apply(op, power, a)
    return False


def check_hyperarchimedean(A: FiniteAlgebra) -> HyperarchimedeanReport:
    """Every element has an idempotent power (odot form; oplus form dual)."""
    names = set(A.signature.names)
    if "odot" not in names and "oplus" not in names:
        raise InvalidInput("requires odot or oplus in the signature")
    odot = None
    if "odot" in names:
        odot = all(_eventually_idempotent(A, "odot", a) for a in A.elements)
    oplus = None
    if "oplus" in names:
        oplus = all(_eventually_idempotent(A, "oplus", a) for a in A.elements)
    return HyperarchimedeanReport(odot, oplus)
