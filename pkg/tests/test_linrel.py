import random
from fractions import Fraction

import pytest

from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.linrel import (
    GaussianRational,
    check_lemmas,
    conjugate_transpose,
    diagonal,
    find_lax_strict_witness,
    format_scalar,
    full_relation,
    matmul,
    parse_scalar,
    random_matrix,
    random_relation,
    rel_adjoint,
    rel_compose,
    rel_domain,
    rel_graph,
    rel_included,
    rel_is_graph,
    rel_kernel,
    rel_multivalued_part,
    rel_operator,
    rel_reverse,
    relation,
    zero_relation,
)

I = GaussianRational(Fraction(0), Fraction(1))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", GaussianRational(Fraction(3))),
        ("1/2+3/4*i", GaussianRational(Fraction(1, 2), Fraction(3, 4))),
        ("-2*i", GaussianRational(Fraction(0), Fraction(-2))),
        ("i", I),
        ("1-i", GaussianRational(Fraction(1), Fraction(-1))),
    ],
)
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["1/2+3/4*i", "-2*i", "5", "-1/3-1*i"])
def test_format_scalar_parses_back(text):
    z = parse_scalar(text)
    assert parse_scalar(format_scalar(z)) == z


@pytest.mark.parametrize("text", ["", "x", "1/2+", "i*i"])
def test_parse_scalar_rejects_garbage(text):
    with pytest.raises(StructuralError):
        parse_scalar(text)


def test_gaussian_arithmetic():
    assert I * I == GaussianRational(Fraction(-1))
    assert (1 + I) * (1 + I).conjugate() == GaussianRational(Fraction(2))
    assert (1 + I) / (1 + I) == GaussianRational(Fraction(1))


def test_relation_is_canonical():
    assert relation(1, 1, [[2, 2]]) == diagonal(1)
    assert relation(1, 1, [[1, 1], [2, 2]]).dim == 1


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_diagonal_is_self_adjoint(n):
    assert rel_adjoint(diagonal(n)) == diagonal(n)


def test_adjoint_of_graph_is_graph_of_conjugate_transpose():
    t = [(GaussianRational(Fraction(1)), I)]
    v = rel_graph(t, 2, 1)
    assert rel_adjoint(v) == rel_graph(conjugate_transpose(t, 1, 2), 1, 2)


def test_adjoint_swaps_zero_and_full():
    assert rel_adjoint(zero_relation(2, 1)) == full_relation(1, 2)
    assert rel_adjoint(full_relation(1, 2)) == zero_relation(2, 1)


def test_composition_of_graphs(rng):
    for _ in range(10):
        t = random_matrix(rng, 2, 3)
        s = random_matrix(rng, 2, 2)
        composite = rel_compose(rel_graph(s, 2, 2), rel_graph(t, 3, 2))
        assert composite == rel_graph(matmul(s, t, 3), 3, 2)


def test_compose_rejects_mismatched_middle():
    with pytest.raises(StructuralError):
        rel_compose(diagonal(2), diagonal(3))


def test_reverse_is_an_involution(rng):
    for _ in range(10):
        v = random_relation(rng, 2, 3)
        assert rel_reverse(rel_reverse(v)) == v
        assert rel_reverse(v).source.dim == 3


def test_inclusion_is_reversed_by_adjoint(rng):
    for _ in range(10):
        v = random_relation(rng, 2, 2)
        w = full_relation(2, 2)
        assert rel_included(v, w)
        assert rel_included(rel_adjoint(w), rel_adjoint(v))


def test_parts_of_a_multivalued_relation():
    # span{(0, 1)} in C ⊕ C: nothing in the domain, everything multivalued
    v = relation(1, 1, [[0, 1]])
    assert rel_domain(v).dim == 0
    assert rel_multivalued_part(v).dim == 1
    assert not rel_is_graph(v)
    assert rel_operator(v) is None


def test_kernel_of_zero_operator():
    v = rel_graph([[0]], 1, 1)
    assert rel_kernel(v).dim == 1
    assert rel_is_graph(v)
    assert rel_operator(v) == [(GaussianRational(),)]


def test_real_random_relations_have_no_imaginary_part():
    rng = random.Random(3)
    for _ in range(10):
        v = random_relation(rng, 2, 2, real=True)
        assert all(not z.im for row in v.basis for z in row)


@pytest.mark.parametrize("real", [False, True])
def test_lemmas_hold(real):
    report = check_lemmas(VolutConfig(samples=40, seed=11), max_dim=3, real=real)
    assert report.ok, report.violations


def test_no_strict_lax_witness_in_finite_dimension():
    assert find_lax_strict_witness(VolutConfig(samples=20), max_dim=2) is None
