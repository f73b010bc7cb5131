import pytest

from dualkit.algebras import InvalidInput
from dualkit.catalog import (
    bool2,
    build,
    check_hyperarchimedean,
    dl2,
    luk,
    posluk,
    reduct,
)


def test_luk1_is_two_element():
    entry = luk(1)
    assert entry.algebra.size == 2
    assert entry.labels == ("0", "1")


def test_luk2_truncated_arithmetic():
    L = luk(2).algebra
    assert L.apply("odot", 1, 1) == 0    # 1/2 (.) 1/2 = 0
    assert L.apply("oplus", 1, 1) == 2   # 1/2 (+) 1/2 = 1
    assert L.apply("neg", 1) == 1
    assert L.apply("neg", 0) == 2


def test_posluk_drops_negation():
    entry = posluk(2)
    assert "neg" not in entry.algebra.signature.names
    assert set(entry.algebra.signature.names) == {"oplus", "odot", "join", "meet", "zero", "one"}


def test_chain_labels_are_exact_rationals():
    assert luk(4).labels == ("0", "1/4", "1/2", "3/4", "1")
    assert luk(3).labels == ("0", "1/3", "2/3", "1")


def test_build_resolves_names():
    assert build("dl2").algebra == dl2().algebra
    assert build("bool2").algebra == bool2().algebra
    assert build("luk(2)").algebra == luk(2).algebra
    assert build(" posluk(3) ").algebra == posluk(3).algebra
    with pytest.raises(InvalidInput):
        build("post(3)")
    with pytest.raises(InvalidInput):
        build("luk(0)")


def test_reduct_keeps_tables():
    L = luk(2).algebra
    R = reduct(L, ("oplus", "meet", "join", "zero", "one"))
    assert R.size == L.size
    assert set(R.signature.names) == {"oplus", "meet", "join", "zero", "one"}
    assert R.tables["oplus"] == L.tables["oplus"]


def test_reduct_of_full_signature_is_identity():
    L = luk(2).algebra
    assert reduct(L, L.signature.names) == L


def test_reduct_to_empty_signature():
    R = reduct(luk(2).algebra, ())
    assert R.size == 3
    assert R.signature.names == ()


def test_reduct_rejects_unknown_symbol():
    with pytest.raises(InvalidInput):
        reduct(dl2().algebra, ("neg",))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_luk_chains_hyperarchimedean(n):
    report = check_hyperarchimedean(luk(n).algebra)
    assert report.odot_form and report.oplus_form
    assert bool(report)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_posluk_chains_hyperarchimedean(n):
    report = check_hyperarchimedean(posluk(n).algebra)
    assert report.odot_form and report.oplus_form


def test_hyperarchimedean_needs_mv_operation():
    with pytest.raises(InvalidInput):
        check_hyperarchimedean(dl2().algebra)


def test_zero_is_idempotent_immediately():
    L = luk(3).algebra
    assert L.apply("odot", 0, 0) == 0
