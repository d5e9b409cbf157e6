import numpy as np
import pytest

from volut.config import VolutConfig
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError
from volut.fincat import check_category, check_functor
from volut.instances.fdvect import build_fdvect, decode, encode, field_extension
from volut.instances.finmod import (
    StarRing,
    build_finmod,
    cyclic_ring,
    dual_module,
    find_nonreflexive_module,
    homs,
    load_star_ring,
    module_oplax_witness,
    right_actions,
    seed_modules,
)
from volut.instances.finset import build_finset
from volut.instances.quantale import build_quantale
from volut.volutive import (
    Kind,
    check_laxvol_functor,
    check_volutive,
    laxherm_category,
    laxherm_pushforward,
    reflexive_subcategory,
)


def test_matrix_ids():
    m = np.array([[1, 0, 2], [0, 1, 1]])
    assert encode(m) == "2x3:102011"
    assert np.array_equal(decode("2x3:102011"), m)
    with pytest.raises(StructuralError):
        decode("2x2:1")


@pytest.mark.parametrize("q, max_dim, morphisms", [(2, 1, 5), (2, 2, 31), (3, 1, 6)])
def test_fdvect_sizes(q, max_dim, morphisms, config):
    category, _, v = build_fdvect(q, max_dim, config)
    assert category.morphism_count() == morphisms
    assert check_volutive(v, Kind.STRICT, config).ok


def test_fdvect_cap():
    with pytest.raises(ResourceCapExceeded):
        build_fdvect(3, 3, VolutConfig(cap=100))


def test_finset_sizes(config):
    category, _ = build_finset(2, config)
    assert category.morphism_count() == sum(n**m for m in range(3) for n in range(3))
    assert check_category(category, config).ok


def test_finset_bound():
    with pytest.raises(PreconditionError):
        build_finset(5)


def test_unknown_quantale_preset():
    with pytest.raises(StructuralError):
        build_quantale("nope")


def test_custom_quantale():
    _, closed = build_quantale(
        {"elements": ["0", "1"], "tensor": {"0,0": "0", "0,1": "0", "1,1": "1"}, "unit": "1"}
    )
    assert closed.ihom("1", "0") == "0"
    assert closed.ihom("0", "0") == "1"


def test_custom_quantale_without_unit():
    with pytest.raises(PreconditionError):
        build_quantale(
            {"elements": ["0", "1"], "tensor": {"0,0": "0", "0,1": "0", "1,1": "0"}, "unit": "1"}
        )


@pytest.mark.parametrize("preset", ["z4", "f2xy", "t2f2"])
def test_bundled_rings_are_valid(preset):
    ring = load_star_ring(preset)
    ring.validate()
    assert ring.size in (4, 8)


def test_unknown_ring():
    with pytest.raises(StructuralError):
        load_star_ring("no-such-ring")


def test_broken_star_is_rejected():
    ring = cyclic_ring(4)
    bad = StarRing("bad", ring.add, ring.mul, np.array([0, 3, 2, 3]), ring.one, ring.labels)
    with pytest.raises(PreconditionError):
        bad.validate()


@pytest.mark.parametrize("preset", ["z4", "f2xy", "t2f2"])
def test_module_categories_are_lax_volutive(preset, config):
    category, v = build_finmod(load_star_ring(preset), size_cap=8, config=config)
    assert check_category(category, config).ok
    assert check_volutive(v, Kind.LAX, config).ok


def test_z4_modules_are_reflexive(config):
    assert find_nonreflexive_module(load_star_ring("z4"), 8, config) is None


def test_local_ring_with_big_socle_has_a_nonreflexive_module(config):
    witness = find_nonreflexive_module(load_star_ring("f2xy"), 8, config)
    assert witness is not None
    assert witness.size != witness.double_dual_size or not witness.injective


def test_hom_images_are_distinct_maps():
    ring = load_star_ring("t2f2")
    for m in seed_modules(ring, 8):
        found = homs(m, m)
        assert len(found) == len(set(found))


def test_dual_of_a_module_starts_at_the_zero_map():
    ring = load_star_ring("t2f2")
    for m in seed_modules(ring, 8):
        dm = dual_module(m)
        assert set(dm.maps[0]) == {0}


@pytest.mark.parametrize("dim, classes", [(1, 2), (2, 4), (3, 6)])
def test_triangular_algebra_actions_up_to_conjugacy(dim, classes):
    ring = load_star_ring("t2f2")
    assert len(right_actions(ring.algebra, dim)) == classes
    for action in right_actions(ring.algebra, dim):
        # e11 + e22 acts as the identity
        assert np.array_equal((action[0] + action[2]) % 2, np.eye(dim, dtype=np.int64))


def test_seeds_cover_modules_that_are_not_cyclic_quotients():
    ring = load_star_ring("f2xy")
    seeds = seed_modules(ring, 8)
    for m in seeds:
        m.check()
    assert any(m.size == 2 for m in seeds)
    # k ⊕ k and the three uniserial quotients
    assert sum(m.size == 4 for m in seeds) == 4


def test_triangular_modules_are_lax_but_not_strict(config):
    category, v = build_finmod(load_star_ring("t2f2"), size_cap=8, config=config)
    assert check_volutive(v, Kind.LAX, config).ok
    assert not check_volutive(v, Kind.STRICT, config).ok
    refl = reflexive_subcategory(v)
    assert 1 < len(refl.base.objects) < len(category.objects)
    assert check_volutive(refl, Kind.STRICT, config).ok


def test_residue_field_comparison_over_f2xy():
    w = module_oplax_witness(load_star_ring("f2xy"))
    assert w.rank <= min(w.source_dim, w.target_dim)
    assert w.to_dict()["invertible"] == (w.source_dim == w.target_dim == w.rank)


@pytest.mark.parametrize("preset", ["z4", "t2f2"])
def test_residue_field_comparison_needs_a_commutative_algebra(preset):
    with pytest.raises(PreconditionError):
        module_oplax_witness(load_star_ring(preset))


def test_scalar_extension_pushes_hermitian_points_forward(config):
    small = build_fdvect(2, 1, config)[2]
    large = build_fdvect(4, 1, config)[2]
    f = field_extension(small, large)
    assert check_laxvol_functor(f, config).ok
    push = laxherm_pushforward(f, config)
    assert check_functor(push, config).ok
    assert push.ob("1¦1x1:1") == "1¦1x1:1"
    # F4 adds the points theta = w and w²
    assert len(laxherm_category(large, config).objects) == len(push.source.objects) + 2


def test_scalar_extension_needs_every_dimension(config):
    small = build_fdvect(2, 2, config)[2]
    large = build_fdvect(4, 1, config)[2]
    with pytest.raises(StructuralError):
        field_extension(small, large)
