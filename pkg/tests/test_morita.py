import pytest

from volut.config import VolutConfig
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError
from volut.profmor import morita

ALGEBRAS = morita.f2_algebras(2)


def test_small_algebras():
    assert [a.dim for a in ALGEBRAS] == [1, 2, 2, 2]
    assert len(morita.f2_algebras(1)) == 1
    with pytest.raises(PreconditionError):
        morita.f2_algebras(3)


@pytest.mark.parametrize("a", ALGEBRAS, ids=lambda a: a.name)
def test_regular_bimodule(a):
    r = morita.regular_bimodule(a)
    assert morita.check_bimodule(r).ok
    f, src = morita.left_unitor(r)
    assert morita.check_bimodule_iso(f, src, r).ok
    g, src = morita.right_unitor(r)
    assert morita.check_bimodule_iso(g, src, r).ok


@pytest.mark.parametrize("a", ALGEBRAS, ids=lambda a: a.name)
def test_regular_closedness(a, config):
    r = morita.regular_bimodule(a)
    assert morita.verify_morita_closedness(a, a, a, r, r, r, config=config).ok
    assert morita.check_counit(r, r).ok


def test_closedness_respects_the_cap():
    a = ALGEBRAS[1]
    r = morita.regular_bimodule(a)
    with pytest.raises(ResourceCapExceeded):
        morita.verify_morita_closedness(a, a, a, r, r, r, config=VolutConfig(morita_cap=4))


def test_closedness_rejects_wrong_algebras(config):
    f2, f4 = ALGEBRAS[0], ALGEBRAS[3]
    r = morita.regular_bimodule(f4)
    with pytest.raises(StructuralError):
        morita.verify_morita_closedness(f2, f2, f2, r, r, r, config=config)


def test_bimodules_over_f2():
    # F2-F2 bimodules are vector spaces: one per dimension
    found = morita.bimodules(ALGEBRAS[0], ALGEBRAS[0], 2)
    assert [m.dim for m in found] == [0, 1, 2]
    assert all(morita.check_bimodule(m).ok for m in found)


def test_enumerated_bimodules_are_valid():
    dual = ALGEBRAS[2]
    for m in morita.bimodules(dual, dual, 2):
        assert morita.check_bimodule(m).ok


def test_associator_on_regular_bimodules():
    for a in ALGEBRAS:
        r = morita.regular_bimodule(a)
        f, src, tgt = morita.associator(r, r, r)
        assert morita.check_bimodule_iso(f, src, tgt).ok


def test_tensor_with_regular_keeps_dimension():
    for m in morita.bimodules(ALGEBRAS[0], ALGEBRAS[2], 2):
        tensor = morita.balanced_tensor(m, morita.regular_bimodule(ALGEBRAS[2]))
        assert tensor.dim == m.dim


def test_unit_pairing_is_hermitian():
    for a in ALGEBRAS:
        h = morita.unit_herm(a)
        assert morita.check_herm(h).ok
        assert morita.theta_invertible(h)


def test_degenerate_witness():
    w = morita.degenerate_witness()
    assert morita.check_herm(w.left).ok
    assert morita.check_herm(w.right).ok
    assert len(morita.radical(w.left)) == 0
    assert len(morita.radical(w.composite)) == 1
    assert morita.nondegenerate(w.composite).gram.shape == (0, 0, 1)
    assert w.to_dict()["radical_dim"] == 1


def test_herm_search_finds_a_degenerate_composite(config):
    found = morita.herm_search(max_dim=1, config=config)
    assert found is not None
    assert len(morita.radical(found.composite)) > 0


@pytest.mark.parametrize("a", ALGEBRAS, ids=lambda a: a.name)
def test_unit_pairing_composes_with_itself(a):
    u = morita.unit_herm(a)
    h, q = morita.herm_compose(u, u)
    assert morita.check_herm(h).ok
    assert h.module.dim == q.dim == a.dim
    assert len(morita.radical(h)) == 0
