import pytest

from volut.closedmon import (
    build_lax_volutive,
    build_volutive_dualizing,
    check_closed_structure,
    check_oplax_naturality,
    check_pulling_through,
    dual_morphism,
    eta_component,
    oplax_monoidality,
)
from volut.errors import PreconditionError, StructuralError, ValidationReport
from volut.instances.fdvect import build_fdvect
from volut.instances.finset import build_finset
from volut.instances.quantale import PRESETS, build_quantale
from volut.volutive import Kind, check_volutive


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_quantales_are_closed(preset, config):
    _, closed = build_quantale(preset, config)
    assert check_closed_structure(closed, config).ok
    assert check_pulling_through(closed, config).ok


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_induced_structure_is_lax_volutive(preset, config):
    _, closed = build_quantale(preset, config)
    v = build_lax_volutive(closed, config)
    assert check_volutive(v, Kind.LAX, config).ok


def test_lukasiewicz_unit_dual_is_not_strict(config):
    _, closed = build_quantale("lukasiewicz3", config)
    v = build_lax_volutive(closed, config)
    # 1^a = 1 everywhere, so eta_0: 0 → 1 cannot be invertible
    report = check_volutive(v, Kind.STRICT, config)
    assert "0" in report.witnesses("invertibility")


def test_lukasiewicz_zero_is_dualizing(config):
    _, closed = build_quantale("lukasiewicz3", config)
    v = build_volutive_dualizing(closed, "0", config)
    assert v.dual("0") == "1"
    assert v.dual("1/2") == "1/2"
    assert check_volutive(v, Kind.STRICT, config).ok


def test_non_dualizing_object_is_rejected(config):
    _, closed = build_quantale("lukasiewicz3", config)
    with pytest.raises(PreconditionError) as info:
        build_volutive_dualizing(closed, "1", config)
    assert info.value.witness == "0"


def test_unit_chain_phi_is_not_invertible(config):
    # d swaps 0 and 1, so phi_{0,1}: 1⊗0 → d(0) is 0 ≤ 1
    _, closed = build_quantale("unit_chain3", config)
    data = oplax_monoidality(closed, config)
    assert ("0", "1") in data.non_invertible
    assert data.invertible[("1", "1")]
    assert check_oplax_naturality(closed, data, config).ok


def test_heyting_chain_phi_is_invertible(config):
    _, closed = build_quantale("heyting_chain3", config)
    assert oplax_monoidality(closed, config).non_invertible == []


def test_finset_exponentials(config):
    _, closed = build_finset(2, config)
    assert closed.ihom("2", "3") == "9"
    assert check_closed_structure(closed, config).ok
    v = build_lax_volutive(closed, config)
    assert check_volutive(v, Kind.LAX, config).ok
    assert not check_volutive(v, Kind.STRICT, config).ok


def test_finset_phi_components(config):
    _, closed = build_finset(2, config)
    data = oplax_monoidality(closed, config)
    assert set(data.phi) == {(a, b) for a in closed.objects for b in closed.objects}
    assert check_oplax_naturality(closed, data, config).ok


def test_unit_chain_unit_dual_is_already_strict(config):
    _, closed = build_quantale("unit_chain3", config)
    v = build_lax_volutive(closed, config)
    assert v.dual("0") == "1"
    assert v.dual("e") == "e"
    assert check_volutive(v, Kind.STRICT, config).ok


def _failing_check(*args, **kwargs):
    report = ValidationReport("broken")
    report.add("lax-coherence", "coherence fails", "0")
    return report


def test_builders_raise_when_the_self_check_fails(config, monkeypatch):
    _, closed = build_quantale("lukasiewicz3", config)
    monkeypatch.setattr("volut.closedmon.check_volutive", _failing_check)
    with pytest.raises(StructuralError):
        build_lax_volutive(closed, config)
    with pytest.raises(StructuralError):
        build_volutive_dualizing(closed, "0", config)
    assert build_lax_volutive(closed, config, verify=False).kind is Kind.LAX
    assert build_volutive_dualizing(closed, "0", config, verify=False).kind is Kind.STRICT


def test_induced_dual_of_a_matrix_is_its_transpose(config):
    _, closed, v = build_fdvect(2, 2, config)
    assert dual_morphism(closed, "2x1:10") == "1x2:10"
    assert dual_morphism(closed, "1x2:01") == "2x1:01"
    assert dual_morphism(closed, "2x2:1101") == "2x2:1011"
    for x in v.base.morphisms():
        assert dual_morphism(closed, x) == v.dual_morphism(x)


def test_induced_eta_on_vector_spaces_is_the_identity(config):
    _, closed, v = build_fdvect(2, 2, config)
    assert eta_component(closed, "2") == "2x2:1001"
    for a in v.base.objects:
        assert eta_component(closed, a) == v.base.identity(a)
