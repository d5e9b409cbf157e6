import json
import random

import numpy as np
import pytest

from volut.closedmon import check_closed_structure
from volut.config import VolutConfig
from volut.equiv import check_pairing, pairing_from_volutive
from volut.errors import ResourceCapExceeded, StructuralError
from volut.fincat import chain_category, check_category, same_category, walking_arrow
from volut.instances.fdvect import build_fdvect
from volut.instances.finmod import load_star_ring
from volut.instances.quantale import build_quantale
from volut.linrel import random_relation
from volut.profmor import morita, prof
from volut.serialize import (
    algebra_to_dict,
    bimodule_to_dict,
    category_to_dict,
    closed_to_dict,
    load_structure,
    pairing_to_dict,
    parse_category,
    parse_structure,
    profunctor_to_dict,
    relation_to_dict,
    save_document,
    star_ring_to_dict,
    volutive_to_dict,
)
from volut.volutive import Kind, check_volutive


def test_category_tables():
    document = category_to_dict(walking_arrow())
    assert document["type"] == "category"
    assert document["morphisms"] == [["0<=0", "0", "0"], ["0<=1", "0", "1"], ["1<=1", "1", "1"]]
    assert ["1<=1", "0<=1", "0<=1"] in document["composition"]
    assert same_category(parse_category(document), walking_arrow())


def test_category_cap():
    with pytest.raises(ResourceCapExceeded):
        category_to_dict(chain_category(5), VolutConfig(cap=4))


def test_missing_composite_is_rejected():
    document = category_to_dict(walking_arrow())
    document["composition"] = [row for row in document["composition"] if row[0] != "1<=1"]
    with pytest.raises(StructuralError):
        parse_category(document)


def test_dangling_morphism_is_rejected():
    document = category_to_dict(walking_arrow())
    document["morphisms"].append(["z", "0", "7"])
    with pytest.raises(StructuralError):
        parse_category(document)


def test_volutive_document(config):
    _, _, v = build_fdvect(2, 1, config)
    back = parse_structure(volutive_to_dict(v, config))
    assert back.kind is Kind.STRICT
    assert back.d_table() == v.d_table()
    assert check_volutive(back, config=config).ok


def test_volutive_needs_contravariant_d(arrow, config):
    document = volutive_to_dict(arrow, config)
    document["d"]["variance"] = "covariant"
    with pytest.raises(StructuralError):
        parse_structure(document)


def test_closed_document(config):
    _, closed = build_quantale("lukasiewicz3", config)
    back = parse_structure(closed_to_dict(closed, config))
    assert back.ihom("1/2", "0") == "1/2"
    assert check_closed_structure(back, config).ok


def test_pairing_document(arrow, config):
    back = parse_structure(pairing_to_dict(pairing_from_volutive(arrow), config))
    assert back.representation is not None
    assert check_pairing(back, config).ok


def test_relation_document():
    rng = random.Random(2)
    for _ in range(5):
        v = random_relation(rng, 2, 2)
        document = json.loads(json.dumps(relation_to_dict(v)))
        assert parse_structure(document) == v


def test_profunctor_document(config):
    c = walking_arrow()
    p = prof.identity_profunctor(c)
    back = parse_structure(profunctor_to_dict(p, config))
    assert prof.same_profunctor(back, p)
    assert prof.check_profunctor(back, config).ok


def test_algebra_and_bimodule_documents():
    for a in morita.f2_algebras(2):
        back = parse_structure(algebra_to_dict(a))
        assert morita.same_algebra(back, a)
        r = morita.regular_bimodule(a)
        m = parse_structure(bimodule_to_dict(r))
        assert np.array_equal(m.left, r.left)
        assert np.array_equal(m.right, r.right)


@pytest.mark.parametrize("preset", ["z4", "f2xy"])
def test_ring_document(preset):
    ring = load_star_ring(preset)
    back = parse_structure(star_ring_to_dict(ring))
    assert back.size == ring.size
    assert np.array_equal(back.mul, ring.mul)


def test_save_and_load(tmp_path):
    path = tmp_path / "nested" / "arrow.json"
    save_document(category_to_dict(walking_arrow()), path)
    assert check_category(load_structure(path)).ok


def test_load_errors(tmp_path):
    with pytest.raises(StructuralError):
        load_structure(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(StructuralError):
        load_structure(broken)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(StructuralError):
        load_structure(listed)


def test_unknown_type():
    with pytest.raises(StructuralError):
        parse_structure({"type": "sheaf"})
