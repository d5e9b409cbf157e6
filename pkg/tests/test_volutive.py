import pytest

from volut.closedmon import build_lax_volutive
from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.fincat import identity_transformation
from volut.instances.fdvect import build_fdvect
from volut.instances.quantale import build_quantale
from volut.volutive import (
    HermPoint,
    Kind,
    LaxVolFunctor,
    check_dagger,
    check_isometry_closure,
    check_laxvol_functor,
    check_laxvol_transformation,
    check_volutive,
    dagger_category,
    functor_cat_volutive,
    hermitian_points,
    identity_laxvol_functor,
    is_isometry,
    is_lax_isometry,
    is_unitary,
    laxherm_category,
    mutation_sweep,
    product_volutive,
    reflexive_subcategory,
    shift_structure,
)


@pytest.fixture(scope="module")
def vect2():
    _, _, v = build_fdvect(2, 2, VolutConfig(samples=60))
    return v


def test_builtin_structures_are_strict(arrow, terminal, config):
    assert check_volutive(arrow, Kind.STRICT, config).ok
    assert check_volutive(terminal, Kind.STRICT, config).ok


def test_transpose_duality_is_strict(vect2, config):
    assert vect2.base.morphism_count() == 31
    assert check_volutive(vect2, Kind.STRICT, config).ok


def test_zero_eta_breaks_coherence(vect2, config):
    mutant = vect2.with_eta("1", "1x1:0")
    report = check_volutive(mutant, Kind.LAX, config)
    assert "1" in report.witnesses("lax-coherence")


def test_d_must_preserve_identities(vect2, config):
    mutant = vect2.with_d("1x1:1", "1x1:0")
    assert not check_volutive(mutant, config=config).ok


def test_strict_structure_is_also_lax(arrow, config):
    assert check_volutive(arrow.as_kind(Kind.LAX), config=config).ok


def test_mutation_sweep_catches_broken_structures(vect2, config):
    result = mutation_sweep(vect2, config=config)
    assert result.total > 0
    assert result.detected > 0
    assert result.detected + len(result.undetected) == result.total


def test_product_of_strict_structures(arrow, terminal, config):
    v = product_volutive(arrow, arrow)
    assert v.kind is Kind.STRICT
    assert len(v.base.objects) == 4
    assert check_volutive(v, config=config).ok
    assert check_volutive(product_volutive(arrow, terminal), config=config).ok


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_shifted_structures_stay_volutive(arrow, config, k):
    assert check_volutive(shift_structure(arrow, k, config), config=config).ok


def test_transpose_gives_a_dagger(vect2, config):
    dc = dagger_category(vect2, config)
    assert check_dagger(dc, config).ok
    p = HermPoint("2", "2x2:1001", True).key
    swap, collapse = dc.lift("2x2:0110", p, p), dc.lift("2x2:1100", p, p)
    assert is_isometry(dc, swap)
    assert is_unitary(dc, swap)
    assert not is_isometry(dc, collapse)
    assert not is_unitary(dc, collapse)
    with pytest.raises(StructuralError):
        dc.lift("2x1:10", p, p)


def test_hermitian_points_of_the_arrow(arrow, config):
    # theta: a → d(a); only 0 ≤ d(0) = 1 exists
    points = hermitian_points(arrow, config)
    assert [p.obj for p in points] == ["0"]


def test_isometries_compose(vect2, config):
    h = laxherm_category(vect2, config)
    assert check_isometry_closure(h, config).ok


def test_identity_functor_is_lax_volutive(arrow, vect2, config):
    assert check_laxvol_functor(identity_laxvol_functor(arrow), config).ok
    assert check_laxvol_functor(identity_laxvol_functor(vect2), config).ok


def test_reflexive_part_of_a_strict_structure_is_everything(arrow):
    sub = reflexive_subcategory(arrow)
    assert sub.base.objects == arrow.base.objects


@pytest.fixture(scope="module")
def vect1():
    _, _, v = build_fdvect(2, 1, VolutConfig(samples=60))
    return v


def test_lax_isometries_of_a_line(vect1):
    p = HermPoint("1", "1x1:1", True)
    assert is_lax_isometry(vect1, p, p, "1x1:1")
    assert not is_lax_isometry(vect1, p, p, "1x1:0")
    with pytest.raises(StructuralError):
        is_lax_isometry(vect1, p, HermPoint("0", "0x0:", True), "1x1:1")


def test_identity_transformation_is_volutive(arrow, vect1, config):
    for v in (arrow, vect1):
        f = identity_laxvol_functor(v)
        xi = identity_transformation(f.functor)
        assert check_laxvol_transformation(xi, f, f, config).ok


def test_volutive_transformation_needs_matching_alpha(vect1, config):
    f = identity_laxvol_functor(vect1)
    base = vect1.base
    broken = LaxVolFunctor(f.functor, vect1, vect1, {"0": base.identity("0"), "1": "1x1:0"}, "broken")
    xi = identity_transformation(f.functor)
    report = check_laxvol_transformation(xi, broken, f, config)
    assert report.witnesses("volutive-transformation") == ["1"]


def test_functors_out_of_a_point_recover_the_arrow(terminal, arrow, config):
    v = functor_cat_volutive(terminal, arrow, config)
    assert v.kind is Kind.STRICT
    assert len(v.base.objects) == 2
    assert check_volutive(v, Kind.STRICT, config).ok


def test_endofunctors_of_the_arrow(arrow, config):
    v = functor_cat_volutive(arrow, arrow, config)
    assert len(v.base.objects) == 3
    assert check_volutive(v, Kind.STRICT, config).ok


@pytest.mark.parametrize("k", [1, 2])
def test_shifted_lax_structures_stay_lax(config, k):
    _, closed = build_quantale("lukasiewicz3", config)
    lax = build_lax_volutive(closed, config)
    shifted = shift_structure(lax, k, config)
    assert check_volutive(shifted, Kind.LAX, config).ok
