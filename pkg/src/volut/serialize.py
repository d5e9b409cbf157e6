"""
JSON documents for volut structures.

Every document carries a "type" tag so that ``load_structure`` can dispatch on
it. Categories are written with explicit tables, morphisms in lexicographic
order, so a saved structure no longer depends on the builder that made it.
"""

from __future__ import annotations

import json
import logging
import pathlib
from collections.abc import Mapping
from typing import Any

import numpy as np

from volut.closedmon import ClosedSymMonoidal
from volut.config import VolutConfig, resolve
from volut.equiv import Pairing, Representation
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError
from volut.fincat import (
    FiniteCategory,
    Functor,
    NatTrans,
    Variance,
    composable_pairs,
    identity_functor,
    compose_functors,
)
from volut.instances.finmod import StarRing, star_ring_from_document
from volut.linrel import LinearRelation, format_scalar, parse_scalar, relation
from volut.profmor.morita import Bimodule, FinAlgebra
from volut.profmor.prof import Profunctor, from_tables
from volut.volutive import Kind, VolutiveStructure

logger = logging.getLogger(__name__)


def save_document(document: Mapping[str, Any], path: str | pathlib.Path) -> None:
    path = pathlib.Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(document, f, indent=2, ensure_ascii=False)
        logger.info(f"Saved {document.get('type', 'document')} to {path}")
    except OSError as e:
        logger.error(f"Error saving {path}: {e}")
        raise


def load_document(path: str | pathlib.Path) -> dict[str, Any]:
    """Read a JSON document.

    Raises:
        StructuralError: if the file is missing or not a JSON object
    """
    path = pathlib.Path(path)
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error loading {path}: {e}")
        raise StructuralError(f"cannot load {path}: {e}")
    if not isinstance(document, dict):
        raise StructuralError(f"{path}: expected a JSON object")
    logger.info(f"Loaded {document.get('type', 'document')} from {path}")
    return document


def _field(document: Mapping, key: str, kind: str) -> Any:
    try:
        return document[key]
    except (KeyError, TypeError):
        raise StructuralError(f"{kind} document has no {key!r}")


# -- categories, functors, transformations ----------------------------------------


def category_to_dict(c: FiniteCategory, config: VolutConfig | None = None) -> dict:
    """Explicit tables for ``c``.

    Raises:
        ResourceCapExceeded: if c has more morphisms or composable pairs than the caps allow
    """
    cfg = resolve(config)
    count = c.morphism_count()
    if count > cfg.cap:
        raise ResourceCapExceeded(f"serializing {c.name}", cfg.cap, count)
    pairs = c.pair_count()
    if pairs > cfg.check_cap:
        raise ResourceCapExceeded(f"composition table of {c.name}", cfg.check_cap, pairs)
    morphisms = sorted(c.morphisms())
    return {
        "type": "category",
        "name": c.name,
        "objects": list(c.objects),
        "morphisms": [[m, *c.endpoints(m)] for m in morphisms],
        "identities": {a: c.identity(a) for a in c.objects},
        "composition": sorted([g, f, c.compose(g, f)] for f, g in composable_pairs(c)),
    }


def parse_category(document: Mapping) -> FiniteCategory:
    """Raises StructuralError on malformed or dangling tables."""
    try:
        objects = [str(a) for a in _field(document, "objects", "category")]
        morphisms = [(str(m), str(a), str(b)) for m, a, b in _field(document, "morphisms", "category")]
        identity = {str(a): str(i) for a, i in _field(document, "identities", "category").items()}
        composition = {
            (str(g), str(f)): str(gf) for g, f, gf in _field(document, "composition", "category")
        }
    except (TypeError, ValueError, AttributeError) as e:
        raise StructuralError(f"malformed category document: {e}")
    c = FiniteCategory(objects, morphisms, identity, composition, name=str(document.get("name", "C")))
    c.validate_structure()
    for f, g in composable_pairs(c):
        if c.composite_or_none(g, f) is None:
            raise StructuralError(f"{c.name}: composite of {g!r} after {f!r} is missing")
    return c


def functor_to_dict(f: Functor) -> dict:
    return {
        "type": "functor",
        "name": f.name,
        "variance": f.variance.value,
        "objects": dict(f.object_map),
        "morphisms": {m: f.fmap(m) for m in sorted(f.source.morphisms())},
    }


def parse_functor(document: Mapping, source: FiniteCategory, target: FiniteCategory) -> Functor:
    """Raises StructuralError on missing or dangling images."""
    objects = _field(document, "objects", "functor")
    morphisms = _field(document, "morphisms", "functor")
    try:
        variance = Variance(document.get("variance", Variance.COVARIANT.value))
    except ValueError:
        raise StructuralError(f"unknown variance {document.get('variance')!r}")
    for a in source.objects:
        if a not in objects or not target.has_object(objects[a]):
            raise StructuralError(f"functor has no valid image for object {a!r}")
    for m in source.morphisms():
        if m not in morphisms or morphisms[m] not in target:
            raise StructuralError(f"functor has no valid image for morphism {m!r}")
    return Functor(
        source, target, dict(objects), dict(morphisms), variance, str(document.get("name", "F"))
    )


def nattrans_to_dict(t: NatTrans) -> dict:
    return {"type": "nattrans", "name": t.name, "components": dict(t.components)}


def parse_nattrans(document: Mapping, source: Functor, target: Functor) -> NatTrans:
    components = _field(document, "components", "nattrans")
    for a in source.source.objects:
        if a not in components or components[a] not in source.target:
            raise StructuralError(f"transformation has no valid component at {a!r}")
    return NatTrans(source, target, dict(components), str(document.get("name", "alpha")))


# -- volutive and closed structures ------------------------------------------------


def volutive_to_dict(v: VolutiveStructure, config: VolutConfig | None = None) -> dict:
    return {
        "type": "volutive",
        "name": v.name,
        "kind": v.kind.value,
        "category": category_to_dict(v.base, config),
        "d": functor_to_dict(v.d),
        "eta": dict(v.eta.components),
    }


def parse_volutive(document: Mapping) -> VolutiveStructure:
    base = parse_category(_field(document, "category", "volutive"))
    d = parse_functor(_field(document, "d", "volutive"), base, base)
    if not d.contravariant:
        raise StructuralError("the duality d of a volutive structure must be contravariant")
    eta = parse_nattrans(
        {"components": _field(document, "eta", "volutive")},
        identity_functor(base),
        compose_functors(d, d, "d∘d"),
    )
    try:
        kind = Kind(document.get("kind", Kind.LAX.value))
    except ValueError:
        raise StructuralError(f"unknown kind {document.get('kind')!r}")
    return VolutiveStructure.from_maps(
        base,
        d.object_map,
        d.morphism_table(),
        eta.components,
        kind,
        str(document.get("name", "v")),
    )


def closed_to_dict(m: ClosedSymMonoidal, config: VolutConfig | None = None) -> dict:
    """Tables of the closed structure restricted to its object range.

    Raises:
        PreconditionError: if a tensor product or internal hom leaves the range
    """
    category = m.within_range()
    objects = m.objects
    tensor, ihom = {}, {}
    for a in objects:
        for b in objects:
            for table, value in ((tensor, m.tensor(a, b)), (ihom, m.ihom(a, b))):
                if value not in objects:
                    raise PreconditionError(f"{m.name} is not closed on its object range", (a, b))
                table[f"{a}|{b}"] = value
    morphisms = sorted(category.morphisms())
    return {
        "type": "closed",
        "name": m.name,
        "unit": m.unit,
        "category": category_to_dict(category, config),
        "tensor": tensor,
        "ihom": ihom,
        "tensor_morphisms": {f"{f}|{g}": m.tensor_mor(f, g) for f in morphisms for g in morphisms},
        "braiding": {key: m.beta(*key.split("|")) for key in tensor},
        "evaluation": {key: m.ev(*key.split("|")) for key in ihom},
    }


def parse_closed(document: Mapping) -> ClosedSymMonoidal:
    category = parse_category(_field(document, "category", "closed"))
    tables = {
        key: dict(_field(document, key, "closed"))
        for key in ("tensor", "ihom", "tensor_morphisms", "braiding", "evaluation")
    }

    def lookup(key: str):
        def get(*args: str) -> str:
            try:
                return tables[key]["|".join(args)]
            except KeyError:
                raise StructuralError(f"closed structure has no {key} entry for {args}")

        return get

    return ClosedSymMonoidal(
        category,
        category.objects,
        tensor=lookup("tensor"),
        tensor_morphisms=lookup("tensor_morphisms"),
        unit=str(_field(document, "unit", "closed")),
        braiding=lookup("braiding"),
        internal_hom=lookup("ihom"),
        evaluation=lookup("evaluation"),
        name=str(document.get("name", "M")),
    )


# -- pairings ----------------------------------------------------------------------


def pairing_to_dict(p: Pairing, config: VolutConfig | None = None) -> dict:
    """Values and the full action table of a pairing.

    Raises:
        ResourceCapExceeded: if the action table would exceed the search cap
    """
    cfg = resolve(config)
    base = p.base
    action = []
    for (a, b), elements in sorted(p.values.items()):
        for x_src in base.objects:
            for y_src in base.objects:
                for x in base.hom(x_src, a):
                    for y in base.hom(y_src, b):
                        for f in elements:
                            action.append([x, y, f, p.act(x, y, f)])
                            if len(action) > cfg.search_cap:
                                raise ResourceCapExceeded(
                                    f"action table of {p.name}", cfg.search_cap
                                )
    document = {
        "type": "pairing",
        "name": p.name,
        "category": category_to_dict(base, config),
        "values": [[a, b, list(vs)] for (a, b), vs in sorted(p.values.items())],
        "action": action,
    }
    if p.symmetry is not None:
        document["symmetry"] = [
            [a, b, dict(table)] for (a, b), table in sorted(p.symmetry.items())
        ]
    if p.representation is not None:
        document["representation"] = {
            "d": functor_to_dict(p.representation.d),
            "universal": dict(p.representation.universal),
        }
    return document


def parse_pairing(document: Mapping) -> Pairing:
    base = parse_category(_field(document, "category", "pairing"))
    try:
        values = {(str(a), str(b)): tuple(map(str, vs)) for a, b, vs in document["values"]}
        action = {(str(x), str(y), str(f)): str(g) for x, y, f, g in document["action"]}
        symmetry = None
        if "symmetry" in document:
            symmetry = {(str(a), str(b)): dict(t) for a, b, t in document["symmetry"]}
    except (KeyError, TypeError, ValueError) as e:
        raise StructuralError(f"malformed pairing document: {e}")
    missing = [(a, b) for a in base.objects for b in base.objects if (a, b) not in values]
    if missing:
        raise StructuralError(f"pairing has no value set at {missing[0]}")

    def act(x: str, y: str, f: str) -> str:
        try:
            return action[(x, y, f)]
        except KeyError:
            raise StructuralError(f"pairing action undefined at ({x}, {y}, {f})")

    representation = None
    if "representation" in document:
        rep = document["representation"]
        d = parse_functor(_field(rep, "d", "representation"), base, base)
        representation = Representation(d, dict(_field(rep, "universal", "representation")))
    return Pairing(base, values, act, symmetry, representation, str(document.get("name", "F")))


# -- linear relations --------------------------------------------------------------


def relation_to_dict(v: LinearRelation) -> dict:
    return {
        "type": "relation",
        "source": v.source.dim,
        "target": v.target.dim,
        "basis": [[format_scalar(z) for z in row] for row in v.basis],
    }


def parse_relation(document: Mapping) -> LinearRelation:
    try:
        m = int(_field(document, "source", "relation"))
        n = int(_field(document, "target", "relation"))
        rows = [[parse_scalar(z) for z in row] for row in document.get("basis", [])]
    except (TypeError, ValueError) as e:
        raise StructuralError(f"malformed relation document: {e}")
    return relation(m, n, rows)


# -- profunctors -------------------------------------------------------------------


def _key(*parts: str) -> str:
    return "|".join(parts)


def profunctor_to_dict(f: Profunctor, config: VolutConfig | None = None) -> dict:
    left, right = f.tables()
    return {
        "type": "profunctor",
        "name": f.name,
        "source": category_to_dict(f.source, config),
        "target": category_to_dict(f.target, config),
        "values": [[d, c, list(f.value(d, c))] for d, c in f.cells()],
        "left": {_key(*k): v for k, v in sorted(left.items())},
        "right": {_key(*k): v for k, v in sorted(right.items())},
    }


def parse_profunctor(document: Mapping) -> Profunctor:
    source = parse_category(_field(document, "source", "profunctor"))
    target = parse_category(_field(document, "target", "profunctor"))
    try:
        values = {(str(d), str(c)): tuple(map(str, vs)) for d, c, vs in document["values"]}
        left = {tuple(k.split("|")): str(v) for k, v in document["left"].items()}
        right = {tuple(k.split("|")): str(v) for k, v in document["right"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise StructuralError(f"malformed profunctor document: {e}")
    if any(len(k) != 3 for k in (*left, *right)):
        raise StructuralError("profunctor action keys must read morphism|object|element")
    for d in target.objects:
        for c in source.objects:
            if (d, c) not in values:
                raise StructuralError(f"profunctor has no value set at ({d}, {c})")
    return from_tables(source, target, values, left, right, str(document.get("name", "F")))


# -- algebras, bimodules, star rings -----------------------------------------------


def algebra_to_dict(a: FinAlgebra) -> dict:
    return {"type": "algebra", **a.to_document()}


def parse_algebra(document: Mapping) -> FinAlgebra:
    return FinAlgebra.from_document(document)


def bimodule_to_dict(m: Bimodule) -> dict:
    return {
        "type": "bimodule",
        "name": m.name,
        "left_algebra": m.left_algebra.to_document(),
        "right_algebra": m.right_algebra.to_document(),
        "dim": m.dim,
        "left": m.left.tolist(),
        "right": m.right.tolist(),
    }


def parse_bimodule(document: Mapping) -> Bimodule:
    a = FinAlgebra.from_document(_field(document, "left_algebra", "bimodule"))
    b = FinAlgebra.from_document(_field(document, "right_algebra", "bimodule"))
    try:
        dim = int(document["dim"])
        left = np.asarray(document["left"], dtype=np.int64).reshape(a.dim, dim, dim) % 2
        right = np.asarray(document["right"], dtype=np.int64).reshape(b.dim, dim, dim) % 2
    except (KeyError, TypeError, ValueError) as e:
        raise StructuralError(f"malformed bimodule document: {e}")
    return Bimodule(a, b, dim, left, right, str(document.get("name", "M")))


def star_ring_to_dict(r: StarRing) -> dict:
    if r.algebra is not None:
        return {"type": "ring", **r.algebra.to_document()}
    return {"type": "ring", "kind": "cyclic", "modulus": r.size, "name": r.name}


def parse_star_ring(document: Mapping) -> StarRing:
    ring = star_ring_from_document(document)
    ring.validate()
    return ring


PARSERS = {
    "category": parse_category,
    "volutive": parse_volutive,
    "closed": parse_closed,
    "pairing": parse_pairing,
    "relation": parse_relation,
    "profunctor": parse_profunctor,
    "algebra": parse_algebra,
    "bimodule": parse_bimodule,
    "ring": parse_star_ring,
}


def parse_structure(document: Mapping) -> Any:
    """Dispatch on the document's "type" tag."""
    kind = document.get("type")
    if kind not in PARSERS:
        raise StructuralError(f"unknown document type {kind!r}")
    return PARSERS[kind](document)


def load_structure(path: str | pathlib.Path) -> Any:
    return parse_structure(load_document(path))
