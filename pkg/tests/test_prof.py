import random

import pytest

from volut.closedmon import build_lax_volutive
from volut.errors import PreconditionError, StructuralError
from volut.fincat import (
    chain_category,
    discrete_category,
    random_category,
    terminal_category,
    walking_arrow,
)
from volut.instances.quantale import build_quantale
from volut.profmor import prof
from volut.volutive import Kind, check_volutive


def test_identity_profunctor_is_hom(config):
    c = walking_arrow()
    p = prof.identity_profunctor(c)
    assert p.value("0", "1") == ("0<=1",)
    assert p.value("1", "0") == ()
    assert prof.check_profunctor(p, config).ok


def test_composing_with_the_identity(config):
    c = chain_category(3)
    hom = prof.identity_profunctor(c)
    composite = prof.prof_compose(hom, hom)
    for cell in hom.cells():
        assert len(composite.value(*cell)) == len(hom.value(*cell))
    assert prof.check_profunctor(composite, config).ok


@pytest.mark.parametrize("seed", range(5))
def test_ninja_yoneda(seed, config):
    rng = random.Random(seed)
    c, d = random_category(rng, 3, 8), random_category(rng, 3, 8)
    p = prof.random_profunctor(rng, c, d, 2)
    assert prof.check_profunctor(p, config).ok
    left_unit, iso_left, right_unit, iso_right = prof.ninja_yoneda_isos(p)
    assert prof.natural_iso(left_unit, p, iso_left).ok
    assert prof.natural_iso(right_unit, p, iso_right).ok


@pytest.mark.parametrize("seed", range(5))
def test_coend_associativity(seed):
    rng = random.Random(seed)
    cats = [random_category(rng, 3, 6) for _ in range(4)]
    f = prof.random_profunctor(rng, cats[0], cats[1], 2)
    g = prof.random_profunctor(rng, cats[1], cats[2], 2)
    h = prof.random_profunctor(rng, cats[2], cats[3], 2)
    lhs, rhs, components = prof.associator_iso(h, g, f)
    assert prof.natural_iso(lhs, rhs, components).ok


@pytest.mark.parametrize("c", [terminal_category(), walking_arrow(), chain_category(3)], ids=lambda c: c.name)
def test_dual_snake_identities(c, config):
    assert prof.verify_prof_zorro(c, config).ok


def test_identity_is_iso_to_itself(config):
    c = walking_arrow()
    assert prof.find_iso_to_identity(prof.identity_profunctor(c), config) is not None


def test_empty_profunctor_is_not_iso_to_identity(config):
    c = walking_arrow()
    empty = prof.sieve_profunctor(c, c, [], "∅")
    assert prof.find_iso_to_identity(empty, config) is None


@pytest.mark.parametrize("seed", range(3))
def test_internal_hom_adjunction(seed, config):
    rng = random.Random(seed)
    c, d, e = (random_category(rng, 2, 4) for _ in range(3))
    x = prof.random_profunctor(rng, c, d, 2)
    z = prof.random_profunctor(rng, d, e, 2)
    y = prof.random_profunctor(rng, c, e, 2)
    assert prof.check_ihom_adjunction(z, x, y, config).ok


def test_local_structure_on_terminal(terminal, config):
    local = prof.prof_local_structure(terminal, terminal, 2, config)
    # sets of size 0, 1 and 2
    assert len(local.category.objects) == 3
    assert check_volutive(local.volutive, Kind.LAX, config).ok


def test_local_structure_on_arrow_to_terminal(arrow, terminal, config):
    local = prof.prof_local_structure(arrow, terminal, 2, config)
    assert check_volutive(local.volutive, Kind.LAX, config).ok


def test_local_structure_needs_an_involution(terminal, config):
    _, closed = build_quantale("lukasiewicz3", config)
    with pytest.raises(PreconditionError):
        prof.prof_local_structure(build_lax_volutive(closed, config), terminal, 1, config)


def test_hermitian_points_compose(terminal, config):
    local = prof.prof_local_structure(terminal, terminal, 2, config)
    s = terminal.d
    points = [
        h for p in local.profunctors.values() for h in prof.lax_hermitian_points(p, s, s, config)
    ]
    assert points
    for hx in points:
        for hy in points:
            h = prof.prof_compose_hermitian(hx, hy, config)
            assert prof.check_prof_hermitian(h, config).ok


@pytest.mark.parametrize("seed", range(10))
def test_random_profunctors_keep_their_categories(seed):
    c, d = chain_category(3), discrete_category(3)
    p = prof.random_profunctor(random.Random(seed), c, d, 2)
    assert p.source is c
    assert p.target is d


def test_internal_hom_needs_a_common_source(config):
    c, d = chain_category(2), discrete_category(2)
    x = prof.identity_profunctor(c)
    y = prof.identity_profunctor(d)
    with pytest.raises(StructuralError):
        prof.internal_hom(x, y, config)
