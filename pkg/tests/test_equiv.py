import pytest

from volut.closedmon import build_lax_volutive
from volut.equiv import (
    NotRepresentable,
    adjunction_data_from_volutive,
    check_pairing,
    check_presentations,
    check_round_trip,
    constant_pairing,
    find_all_representations,
    find_representation,
    is_adjoint_equivalence,
    is_perfect,
    pairing_from_volutive,
    representation_iso,
    verify_zorro,
    volutive_from_pairing,
)
from volut.fincat import walking_arrow
from volut.instances.fdvect import build_fdvect
from volut.instances.quantale import build_quantale
from volut.volutive import Kind, check_volutive


@pytest.fixture(scope="module")
def vect1():
    _, _, v = build_fdvect(2, 1)
    return v


@pytest.fixture(scope="module")
def u3():
    _, closed = build_quantale("unit_chain3")
    return build_lax_volutive(closed)


@pytest.fixture(scope="module")
def lukasiewicz():
    _, closed = build_quantale("lukasiewicz3")
    return build_lax_volutive(closed)


def test_pairing_of_a_structure_is_valid(arrow, config):
    p = pairing_from_volutive(arrow)
    assert p.value("0", "0") == ("0<=1",)
    assert check_pairing(p, config).ok


@pytest.mark.parametrize("name", ["arrow", "terminal", "vect1", "u3", "lukasiewicz"])
def test_round_trip(name, request, config):
    v = request.getfixturevalue(name)
    assert check_round_trip(v, config).ok


def test_recovered_kind(arrow, lukasiewicz, config):
    assert volutive_from_pairing(pairing_from_volutive(arrow), config).kind is Kind.STRICT
    assert volutive_from_pairing(pairing_from_volutive(lukasiewicz), config).kind is Kind.LAX


def test_perfect_pairings(arrow, lukasiewicz, config):
    assert is_perfect(pairing_from_volutive(arrow), config)
    assert not is_perfect(pairing_from_volutive(lukasiewicz), config)


def test_constant_pairing_is_not_representable(config):
    found = find_representation(constant_pairing(walking_arrow(), 2), config)
    assert isinstance(found, NotRepresentable)
    assert found.obj == "0"
    assert found.to_dict()["representable"] is False


def test_search_recovers_a_representation(arrow, config):
    p = pairing_from_volutive(arrow).with_representation(None)
    rep = find_representation(p, config)
    assert not isinstance(rep, NotRepresentable)
    assert rep.d.ob("0") == "1"


def test_representations_agree_up_to_iso(arrow, config):
    p = pairing_from_volutive(arrow).with_representation(None)
    reps = find_all_representations(p, config)
    assert reps
    for r in reps:
        iso = representation_iso(p, reps[0], r)
        assert all(arrow.base.is_iso(iso[a]) for a in arrow.base.objects)
    first = reps[0]
    assert representation_iso(p, first, first) == {
        a: arrow.base.identity(first.d.ob(a)) for a in arrow.base.objects
    }


@pytest.mark.parametrize("name", ["arrow", "vect1", "u3", "lukasiewicz"])
def test_zorro_holds_for_volutive_structures(name, request, config):
    v = request.getfixturevalue(name)
    assert verify_zorro(adjunction_data_from_volutive(v), config).ok


def test_zorro_detects_a_broken_eta(vect1, config):
    mutant = vect1.with_eta("1", "1x1:0")
    report = verify_zorro(adjunction_data_from_volutive(mutant), config)
    assert not report.ok
    assert report.ok == check_volutive(mutant, Kind.LAX, config).ok
    # for Z = Z^op both triangles reduce to d(h_a)∘h_{d a} = id
    assert report.witnesses("zorro-1") == report.witnesses("zorro-2") == ["1"]


def test_adjoint_equivalence(arrow, lukasiewicz):
    assert is_adjoint_equivalence(adjunction_data_from_volutive(arrow))
    assert not is_adjoint_equivalence(adjunction_data_from_volutive(lukasiewicz))


def test_presentations_agree(u3, config):
    assert check_presentations(u3, config).ok
