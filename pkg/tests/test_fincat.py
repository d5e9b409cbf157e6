import random

import pytest

from volut.errors import StructuralError
from volut.fincat import (
    FiniteCategory,
    NatTrans,
    Variance,
    chain_category,
    check_category,
    check_functor,
    check_nattrans,
    discrete_category,
    enumerate_functors,
    free_category,
    functor_category,
    identity_functor,
    identity_transformation,
    opposite,
    pair_id,
    product,
    random_category,
    same_shape,
    split_pair,
    terminal_category,
    transformation_monoid,
    walking_arrow,
)


def test_walking_arrow_tables():
    c = walking_arrow()
    assert c.objects == ("0", "1")
    assert sorted(c.morphisms()) == ["0<=0", "0<=1", "1<=1"]
    assert c.compose("1<=1", "0<=1") == "0<=1"
    assert check_category(c).ok


@pytest.mark.parametrize(
    "c",
    [terminal_category(), walking_arrow(), chain_category(4), discrete_category(3)],
    ids=lambda c: c.name,
)
def test_builtin_categories_are_valid(c, config):
    assert check_category(c, config).ok


def test_opposite_reverses_homs():
    c = chain_category(3)
    op = opposite(c)
    assert op.hom_size("2", "0") == 1
    assert op.hom_size("0", "2") == 0
    assert opposite(op) is c
    assert check_category(op).ok


def test_product_counts():
    c = product(walking_arrow(), walking_arrow())
    assert len(c.objects) == 4
    assert c.morphism_count() == 9
    assert split_pair(pair_id("0", "1")) == ("0", "1")
    assert check_category(c).ok


def test_free_category_paths():
    c = free_category(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")])
    assert c.hom("a", "c") == ("f;g",)
    assert c.compose("g", "f") == "f;g"
    assert check_category(c).ok


def test_free_category_rejects_cycles():
    with pytest.raises(StructuralError):
        free_category(["a", "b"], [("f", "a", "b"), ("g", "b", "a")])


def test_transformation_monoid_group():
    c = transformation_monoid([(1, 0)])
    assert c.morphism_count() == 2
    assert c.inverse("m10") == "m10"
    assert check_category(c).ok


def test_broken_unit_law_is_reported():
    c = FiniteCategory(
        ["a"],
        [("1", "a", "a"), ("e", "a", "a")],
        {"a": "1"},
        {("1", "1"): "1", ("1", "e"): "1", ("e", "1"): "e", ("e", "e"): "e"},
    )
    report = check_category(c)
    assert not report.ok
    assert "e" in report.witnesses("unit")


def test_missing_composite_is_reported():
    c = FiniteCategory(
        ["a", "b"],
        [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")],
        {"a": "1a", "b": "1b"},
        {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("f", "1a"): "f"},
    )
    assert check_category(c).witnesses("composability") == [["1b", "f"]]


def test_dangling_ids_raise():
    c = FiniteCategory(["a"], [("1", "a", "a")], {"a": "1"}, {("1", "z"): "1"})
    with pytest.raises(StructuralError):
        check_category(c)


def test_random_categories_respect_bounds():
    rng = random.Random(5)
    for _ in range(20):
        c = random_category(rng, max_objects=3, max_morphisms=8)
        assert len(c.objects) <= 3
        assert c.morphism_count() <= 8
        assert check_category(c).ok


def test_functors_between_arrows():
    functors = list(enumerate_functors(walking_arrow(), walking_arrow()))
    assert len(functors) == 3
    for f in functors:
        assert check_functor(f).ok


def test_contravariant_functors_into_arrow():
    functors = list(enumerate_functors(walking_arrow(), walking_arrow(), Variance.CONTRAVARIANT))
    assert len(functors) == 3
    assert all(f.contravariant for f in functors)


def test_functor_category_of_arrows_is_a_three_chain():
    h = functor_category(walking_arrow(), walking_arrow())
    assert len(h.objects) == 3
    assert h.morphism_count() == 6
    assert check_category(h).ok


def test_naturality_failure():
    # all four maps on a two-element set; the swap does not commute with the constants
    c = transformation_monoid([(1, 0), (0, 0)])
    assert c.morphism_count() == 4
    f = identity_functor(c)
    assert check_nattrans(identity_transformation(f)).ok
    report = check_nattrans(NatTrans(f, f, {"*": "m10"}, "swap"))
    assert not report.ok
    assert "m00" in report.witnesses("naturality")


def test_same_shape_looks_past_object_names():
    assert same_shape(walking_arrow(), walking_arrow())
    assert not same_shape(chain_category(3), discrete_category(3))
    # same ids, reversed endpoints
    assert not same_shape(opposite(walking_arrow()), walking_arrow())
