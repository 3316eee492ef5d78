"""Exel-Laca coefficients, support sets, and relation verification."""

import pytest
from hypothesis import given, strategies as st

from wmfock.exel_laca import (ELKind, ELMatrixSpec, FinitenessError, a_coeff,
                              condition_elements, relation_instance,
                              support_set, verify_el_suite)
from wmfock.expr import Element, parse
from wmfock.fock import TruncSpace, verify_identity
from wmfock.rewrite import equal_z

WMZ = ELMatrixSpec(ELKind.WM_Z)
WMN = ELMatrixSpec(ELKind.WM_N)


def test_entry_frozen():
    assert WMZ.entry(3, 3) == 1
    assert WMZ.entry(2, 5) == 0
    table = ELMatrixSpec(ELKind.TABLE, table=((1,),))
    assert table.entry(0, 0) == 1
    with pytest.raises(Exception):
        table.entry(0, 5)


def test_table_shape_guards():
    with pytest.raises(ValueError):
        ELMatrixSpec(ELKind.TABLE, table=((1, 0), (0, 0)))  # zero row
    with pytest.raises(ValueError):
        ELMatrixSpec(ELKind.TABLE, table=((1, 0, 1), (0, 1, 0)))  # not square
    with pytest.raises(ValueError):
        ELMatrixSpec(ELKind.TABLE, table=((2,),))  # non-binary entry


def test_a_coeff_frozen():
    assert a_coeff(WMZ, {3}, {0}, 2) == 1
    assert a_coeff(WMZ, {3}, {0}, 5) == 0
    for j in (-4, 0, 7):
        assert a_coeff(WMZ, set(), set(), j) == 1


def test_support_set_frozen():
    assert support_set(WMZ, {3}, {0}) == (1, 2, 3)
    assert support_set(WMZ, {0}, {3}) == ()
    with pytest.raises(FinitenessError):
        support_set(WMZ, set(), {0})
    with pytest.raises(FinitenessError):
        support_set(WMZ, {2}, set())  # unbounded below over the integers
    with pytest.raises(FinitenessError):
        support_set(WMZ, set(), set())


def test_support_set_wm_n_clamps_at_zero():
    assert support_set(WMN, {2}, set()) == (0, 1, 2)
    assert support_set(WMN, {2}, {0}) == (1, 2)
    with pytest.raises(FinitenessError):
        support_set(WMN, set(), {1})


def test_support_set_table_scan():
    table = ELMatrixSpec(ELKind.TABLE, table=((1, 1), (0, 1)))
    assert support_set(table, {0}, set()) == (0, 1)
    assert support_set(table, {0, 1}, set()) == (1,)
    assert support_set(table, {0}, {1}) == (0,)


small_sets = st.sets(st.integers(min_value=-5, max_value=5), min_size=1,
                     max_size=3)


@given(small_sets, small_sets)
def test_support_empty_iff_crossing(X, Y):
    assert (support_set(WMZ, X, Y) == ()) == (min(X) <= max(Y))


@given(small_sets, small_sets, small_sets,
       st.integers(min_value=-6, max_value=6))
def test_a_coeff_multiplicative(X1, X2, Y, j):
    X2 = X2 - X1
    X = X1 | X2
    assert a_coeff(WMZ, X, Y, j) == a_coeff(WMZ, X1, Y, j) * a_coeff(WMZ, X2, Y, j)


def test_relation_instance_frozen():
    lhs, rhs = relation_instance(WMZ, [3], [0])
    assert equal_z(lhs, parse("q(3)(I - q(0))", "Z"))
    assert equal_z(rhs, parse("p(1) + p(2) + p(3)", "Z"))


def test_relation_instance_empty_support():
    lhs, rhs = relation_instance(WMZ, [0], [0])
    assert rhs.is_zero()
    # lhs = q(0)(I - q(0)) need not be syntactically zero, only equivalently
    assert equal_z(lhs, rhs)


def test_relation_ladder():
    # the instance X={j+1}, Y={j} rearranges to q_{j+1} = q_j + p_{j+1}
    for j in (-2, 0, 3):
        lhs, rhs = relation_instance(WMZ, [j + 1], [j])
        assert equal_z(parse(f"q({j + 1})", "Z"),
                       parse(f"q({j}) + p({j + 1})", "Z"))
        space = TruncSpace("Z", j - 2, j + 3, 3)
        assert verify_identity(space, lhs, rhs).passed


def test_condition_elements_pair_shape():
    lhs, rhs = condition_elements(WMZ, [2], [0])
    assert equal_z(lhs, parse("q(2)(I - q(0))", "Z"))
    total = Element.zero("Z")
    for j in support_set(WMZ, {2}, {0}):
        total = total + parse(f"p({j})", "Z")
    assert equal_z(rhs, total)


def test_verify_el_suite_small_exact():
    space = TruncSpace("Z", -4, 4, 3)
    report = verify_el_suite(space, WMZ, universe=[-2, -1, 0, 1, 2], max_size=1)
    assert report.passed
    assert all(i.passed for i in report.instances)
    assert any(i.details.get("support") == "infinite"
               for i in report.instances)
    kinds = {i.id.split("[")[0] for i in report.instances}
    assert kinds == {"q-commute", "p-orthogonal", "q-on-p", "sum-relation",
                     "ladder"}


def test_verify_el_suite_explicit_pairs():
    space = TruncSpace("Z", -4, 4, 3)
    report = verify_el_suite(space, WMZ, universe=[-1, 0, 1, 2],
                             pairs=[([2], [0]), ([1], [-1])], remark=False)
    assert report.passed
    sums = [i for i in report.instances if i.id.startswith("sum-relation")]
    assert len(sums) == 2


def test_conditions_two_and_three():
    space = TruncSpace("Z", -4, 4, 3)
    zero = Element.zero("Z")
    assert verify_identity(space, parse("p(1)p(2)", "Z"), zero).passed
    assert verify_identity(space, parse("q(2)p(1)", "Z"), parse("p(1)", "Z")).passed
    assert verify_identity(space, parse("q(1)p(2)", "Z"), zero).passed


def test_remark_ladder_in_suite():
    space = TruncSpace("Z", -4, 4, 3)
    report = verify_el_suite(space, WMZ, universe=[-1, 0, 1], max_size=1)
    ladder = [i for i in report.instances if i.id.startswith("ladder")]
    assert ladder and all(i.passed for i in ladder)
