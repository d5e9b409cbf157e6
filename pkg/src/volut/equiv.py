"""
Pairings, their representations, and the adjunction presentation of lax volutive structures.

A pairing on C assigns a finite set F(a, b) to each pair of objects,
contravariantly in both slots: for X: a' → a and Y: b' → b the action
F(X, Y) maps F(a, b) to F(a', b'). A lax volutive structure (d, eta) gives
F(a, b) = Hom(b, d(a)) with F(X, Y)(f) = d(X)∘f∘Y and the symmetry
f ↦ d(f)∘eta_a.

A representation is a contravariant d with universal elements x_a in
F(a, d(a)) such that every u(f) = F(id, f)(x_a) is a bijection
Hom(b, d(a)) → F(a, b).
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field

from volut.config import VolutConfig, resolve
from volut.errors import ResourceCapExceeded, StructuralError, ValidationReport
from volut.fincat import (
    FiniteCategory,
    Functor,
    NatTrans,
    Variance,
    check_functor,
    check_nattrans,
    compose_functors,
    identity_functor,
    opposite,
    vertical_compose,
    whisker_left,
    whisker_right,
)
from volut.volutive import Kind, VolutiveStructure, check_volutive

logger = logging.getLogger(__name__)

Action = Callable[[str, str, str], str]


@dataclass(frozen=True, eq=False)
class Representation:
    d: Functor
    universal: Mapping[str, str]


@dataclass(frozen=True, eq=False)
class Pairing:
    """Value sets F(a, b), the action (X, Y, f) ↦ F(X, Y)(f), and optional extra structure."""

    base: FiniteCategory
    values: Mapping[tuple[str, str], tuple[str, ...]]
    action: Action
    symmetry: Mapping[tuple[str, str], Mapping[str, str]] | None = None
    representation: Representation | None = None
    name: str = "F"

    def act(self, x: str, y: str, f: str) -> str:
        return self.action(x, y, f)

    def value(self, a: str, b: str) -> tuple[str, ...]:
        try:
            return self.values[(a, b)]
        except KeyError:
            raise StructuralError(f"pairing {self.name}: no value set at ({a}, {b})")

    def unit_map(self, rep: Representation, a: str, b: str) -> dict[str, str]:
        """u: Hom(b, d(a)) → F(a, b), f ↦ F(id, f)(x_a)."""
        base = self.base
        ida = base.identity(a)
        x = rep.universal[a]
        return {f: self.act(ida, f, x) for f in base.hom(b, rep.d.ob(a))}

    def with_representation(self, rep: Representation | None) -> Pairing:
        return Pairing(self.base, self.values, self.action, self.symmetry, rep, self.name)


@dataclass(frozen=True)
class NotRepresentable:
    """Exhaustion certificate: no (object, universal element) works for F(obj, −)."""

    obj: str
    log: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"representable": False, "object": self.obj, "log": self.log}


def pairing_from_volutive(v: VolutiveStructure) -> Pairing:
    """F(a, b) = Hom(b, d(a)) with the symmetry f ↦ d(f)∘eta_a and d as its representation."""
    base, d = v.base, v.d
    values = {(a, b): base.hom(b, d.ob(a)) for a in base.objects for b in base.objects}

    def action(x: str, y: str, f: str) -> str:
        return base.compose_all(d.fmap(x), f, y)

    symmetry = {
        (a, b): {f: base.compose(d.fmap(f), v.eta[a]) for f in values[(a, b)]}
        for a in base.objects
        for b in base.objects
    }
    universal = {a: base.identity(d.ob(a)) for a in base.objects}
    return Pairing(base, values, action, symmetry, Representation(d, universal), f"Φ({v.name})")


def constant_pairing(base: FiniteCategory, size: int, name: str | None = None) -> Pairing:
    """F(a, b) = {0, .., size-1} with every morphism acting as the identity."""
    elements = tuple(str(i) for i in range(size))
    values = {(a, b): elements for a in base.objects for b in base.objects}
    return Pairing(base, values, lambda x, y, f: f, None, None, name or f"const{size}")


def _checked_morphisms(base: FiniteCategory, cfg: VolutConfig, report: ValidationReport) -> list[str]:
    morphisms = list(base.morphisms())
    if len(morphisms) * len(base.objects) > cfg.check_cap:
        report.sampled = True
        return random.Random(cfg.seed).sample(morphisms, max(1, cfg.check_cap // len(base.objects)))
    return morphisms


def check_pairing(p: Pairing, config: VolutConfig | None = None) -> ValidationReport:
    """Functoriality of the action, and the symmetry and representation when present."""
    cfg = resolve(config)
    base = p.base
    report = ValidationReport(subject=f"pairing {p.name}")
    obs = base.objects
    morphisms = _checked_morphisms(base, cfg, report)

    for a, b in itertools.product(obs, repeat=2):
        ida, idb = base.identity(a), base.identity(b)
        for f in p.value(a, b):
            report.checked += 1
            if p.act(ida, idb, f) != f:
                report.add("identity", f"F(id, id) moves {f} in F({a}, {b})", (a, b, f))
    for x in morphisms:
        a2, a = base.endpoints(x)
        for b in obs:
            idb = base.identity(b)
            for f in p.value(a, b):
                report.checked += 1
                if p.act(x, idb, f) not in p.value(a2, b):
                    report.add("action", f"F({x}, id)({f}) lands outside F({a2}, {b})", (x, f))
            for f in p.value(b, a):
                report.checked += 1
                if p.act(idb, x, f) not in p.value(b, a2):
                    report.add("action", f"F(id, {x})({f}) lands outside F({b}, {a2})", (x, f))
    if not report.ok:
        return report
    pairs = 0
    for x in morphisms:
        a2, a = base.endpoints(x)
        for y in morphisms:
            b2, b = base.endpoints(y)
            idb = base.identity(b)
            for f in p.value(a, b):
                report.checked += 1
                both = p.act(x, y, f)
                x_first = p.act(base.identity(a2), y, p.act(x, idb, f))
                y_first = p.act(x, base.identity(b2), p.act(base.identity(a), y, f))
                if both != x_first or both != y_first:
                    report.add("bifunctor", f"F({x}, {y}) does not split into its slots", (x, y, f))
            pairs += 1
        if pairs > cfg.check_cap:
            report.sampled = True
            break
    for x, y in _composable(base, morphisms):
        _, a = base.endpoints(y)
        yx = base.compose(y, x)
        for b in obs:
            idb = base.identity(b)
            for f in p.value(a, b):
                report.checked += 1
                if p.act(yx, idb, f) != p.act(x, idb, p.act(y, idb, f)):
                    report.add("composition", f"F({y}∘{x}, id) ≠ F({x}, id)F({y}, id)", (x, y, f))
            for f in p.value(b, a):
                report.checked += 1
                if p.act(idb, yx, f) != p.act(idb, x, p.act(idb, y, f)):
                    report.add("composition", f"F(id, {y}∘{x}) ≠ F(id, {x})F(id, {y})", (x, y, f))
    if p.symmetry is not None:
        report.merge(_check_symmetry(p, morphisms))
    if p.representation is not None:
        report.merge(check_representation(p, p.representation, cfg))
    return report


def _composable(base: FiniteCategory, morphisms: list[str]) -> Iterator[tuple[str, str]]:
    by_domain: dict[str, list[str]] = {}
    for m in morphisms:
        by_domain.setdefault(base.endpoints(m)[0], []).append(m)
    for x in morphisms:
        for y in by_domain.get(base.endpoints(x)[1], []):
            yield x, y


def _check_symmetry(p: Pairing, morphisms: list[str]) -> ValidationReport:
    base, sigma = p.base, p.symmetry
    report = ValidationReport(subject=f"symmetry of {p.name}")
    for a, b in itertools.product(base.objects, repeat=2):
        component = sigma.get((a, b))
        if component is None:
            raise StructuralError(f"pairing {p.name}: no symmetry component at ({a}, {b})")
        back = sigma[(b, a)]
        for f in p.value(a, b):
            report.checked += 1
            g = component.get(f)
            if g not in p.value(b, a):
                report.add("symmetry", f"sigma({f}) lands outside F({b}, {a})", (a, b, f))
            elif back.get(g) != f:
                report.add("involution", f"sigma∘sigma moves {f} in F({a}, {b})", (a, b, f))
    for x in morphisms:
        a2, a = base.endpoints(x)
        for y in morphisms:
            b2, b = base.endpoints(y)
            for f in p.value(a, b):
                report.checked += 1
                lhs = sigma[(a2, b2)].get(p.act(x, y, f))
                rhs = p.act(y, x, sigma[(a, b)][f])
                if lhs != rhs:
                    report.add("symmetry-naturality", f"sigma is not natural at ({x}, {y})", (x, y, f))
    return report


def check_representation(
    p: Pairing, rep: Representation, config: VolutConfig | None = None
) -> ValidationReport:
    """Bijectivity of every u_{a,b} and naturality of u in the first slot."""
    cfg = resolve(config)
    base, d = p.base, rep.d
    report = ValidationReport(subject=f"representation of {p.name}")
    if not d.contravariant:
        raise StructuralError(f"pairing {p.name}: a representation needs a contravariant d")
    report.merge(check_functor(d, cfg))
    units = {}
    for a, b in itertools.product(base.objects, repeat=2):
        if rep.universal[a] not in p.value(a, d.ob(a)):
            report.add("universal", f"x_{a} is not in F({a}, d({a}))", a)
            return report
        u = p.unit_map(rep, a, b)
        units[(a, b)] = u
        report.checked += 1
        if sorted(set(u.values())) != sorted(p.value(a, b)) or len(u) != len(p.value(a, b)):
            report.add("bijection", f"u: Hom({b}, d({a})) → F({a}, {b}) is not a bijection", (a, b))
    for x in _checked_morphisms(base, cfg, report):
        a2, a = base.endpoints(x)
        for b in base.objects:
            idb = base.identity(b)
            for f in base.hom(b, d.ob(a)):
                report.checked += 1
                lhs = p.act(x, idb, units[(a, b)][f])
                rhs = units[(a2, b)].get(base.compose(d.fmap(x), f))
                if lhs != rhs:
                    report.add("representation-naturality", f"u is not natural at {x}", (x, f))
    return report


def _representing_candidates(
    p: Pairing, a: str, budget: list[int], log: list[str], cfg: VolutConfig
) -> Iterator[tuple[str, str]]:
    base = p.base
    ida = base.identity(a)
    for r in base.objects:
        if any(base.hom_size(b, r) != len(p.value(a, b)) for b in base.objects):
            log.append(f"{a}: {r} pruned by hom-set cardinality")
            continue
        for x in p.value(a, r):
            budget[0] += 1
            if budget[0] > cfg.search_cap:
                raise ResourceCapExceeded("representation search", cfg.search_cap, log=log)
            ok = True
            for b in base.objects:
                images = {p.act(ida, f, x) for f in base.hom(b, r)}
                if len(images) != len(p.value(a, b)):
                    ok = False
                    break
            if ok:
                yield r, x
            else:
                log.append(f"{a}: ({r}, {x}) is not universal")


def _assemble(p: Pairing, choice: Mapping[str, tuple[str, str]]) -> Representation:
    """The contravariant d induced by universal elements: d(X) is the g with u(g) = F(X, id)(x_a)."""
    base = p.base
    objects = {a: r for a, (r, _) in choice.items()}
    universal = {a: x for a, (_, x) in choice.items()}
    morphisms = {}
    for m in base.morphisms():
        a2, a = base.endpoints(m)
        target = p.act(m, base.identity(objects[a]), universal[a])
        ida2 = base.identity(a2)
        matches = [
            g for g in base.hom(objects[a], objects[a2]) if p.act(ida2, g, universal[a2]) == target
        ]
        if len(matches) != 1:
            raise StructuralError(f"pairing {p.name}: no unique d({m})")
        morphisms[m] = matches[0]
    d = Functor(base, base, objects, morphisms, Variance.CONTRAVARIANT, "d")
    return Representation(d, universal)


def find_representation(
    p: Pairing, config: VolutConfig | None = None
) -> Representation | NotRepresentable:
    """The first representation in canonical order, post-verified, or an exhaustion certificate.

    Raises:
        ResourceCapExceeded: if more than search_cap candidates are examined
    """
    cfg = resolve(config)
    budget = [0]
    log: list[str] = []
    choice = {}
    for a in p.base.objects:
        found = next(_representing_candidates(p, a, budget, log, cfg), None)
        if found is None:
            logger.info(f"{p.name}: F({a}, −) is not representable")
            return NotRepresentable(a, log)
        choice[a] = found
    rep = _assemble(p, choice)
    report = check_representation(p, rep, cfg)
    if not report.ok:
        raise StructuralError(f"{p.name}: assembled representation fails: {report.summary()}")
    logger.info(f"{p.name}: representation found after {budget[0]} candidates")
    return rep


def find_all_representations(
    p: Pairing, config: VolutConfig | None = None, limit: int = 64
) -> list[Representation]:
    """Every choice of representing objects and universal elements, up to ``limit``."""
    cfg = resolve(config)
    budget = [0]
    log: list[str] = []
    options = [list(_representing_candidates(p, a, budget, log, cfg)) for a in p.base.objects]
    found = []
    for combo in itertools.product(*options):
        found.append(_assemble(p, dict(zip(p.base.objects, combo))))
        if len(found) >= limit:
            break
    return found


def representation_iso(p: Pairing, r1: Representation, r2: Representation) -> dict[str, str]:
    """The components phi_a: d2(a) → d1(a) with u1(phi_a) = x2_a.

    Raises:
        StructuralError: if the components are not invertible and natural
    """
    base = p.base
    components = {}
    for a in base.objects:
        u = p.unit_map(r1, a, r2.d.ob(a))
        matches = [g for g, value in u.items() if value == r2.universal[a]]
        if len(matches) != 1 or not base.is_iso(matches[0]):
            raise StructuralError(f"representations disagree at {a}")
        components[a] = matches[0]
    for m in base.morphisms():
        a2, a = base.endpoints(m)
        lhs = base.compose(r1.d.fmap(m), components[a])
        rhs = base.compose(components[a2], r2.d.fmap(m))
        if lhs != rhs:
            raise StructuralError(f"representation isomorphism is not natural at {m}")
    return components


def is_perfect(p: Pairing, config: VolutConfig | None = None) -> bool:
    """Whether the representing d is an equivalence C → C^op."""
    rep = p.representation
    if rep is None:
        found = find_representation(p, config)
        if isinstance(found, NotRepresentable):
            return False
        rep = found
    base, d = p.base, rep.d
    for a, b in itertools.product(base.objects, repeat=2):
        images = {d.fmap(m) for m in base.hom(a, b)}
        if len(images) != base.hom_size(a, b) or len(images) != base.hom_size(d.ob(b), d.ob(a)):
            return False
    image = {d.ob(a) for a in base.objects}
    for a in base.objects:
        if not any(
            any(base.is_iso(m) for m in base.hom(a, r)) for r in image
        ):
            return False
    return True


def volutive_from_pairing(p: Pairing, config: VolutConfig | None = None) -> VolutiveStructure:
    """Recover (d, eta): eta_b is the u-preimage of sigma(x_b) in Hom(b, d(d(b))).

    Raises:
        StructuralError: if the pairing has no symmetry or no representation can be found
    """
    if p.symmetry is None:
        raise StructuralError(f"pairing {p.name} has no symmetry")
    rep = p.representation
    if rep is None:
        found = find_representation(p, config)
        if isinstance(found, NotRepresentable):
            raise StructuralError(f"pairing {p.name} is not representable at {found.obj}")
        rep = found
    base, d = p.base, rep.d
    eta = {}
    for b in base.objects:
        db = d.ob(b)
        target = p.symmetry[(b, db)][rep.universal[b]]
        u = p.unit_map(rep, db, b)
        matches = [g for g, value in u.items() if value == target]
        if len(matches) != 1:
            raise StructuralError(f"pairing {p.name}: no unique eta_{b}")
        eta[b] = matches[0]
    kind = Kind.STRICT if is_perfect(p.with_representation(rep), config) else Kind.LAX
    return VolutiveStructure.from_maps(
        base, dict(d.object_map), d.morphism_table(), eta, kind, f"v({p.name})"
    )


def check_round_trip(v: VolutiveStructure, config: VolutConfig | None = None) -> ValidationReport:
    """pairing_from_volutive followed by volutive_from_pairing gives back d and eta on the nose."""
    pairing = pairing_from_volutive(v)
    report = ValidationReport(subject=f"round trip {v.name}")
    report.merge(check_pairing(pairing, config))
    back = volutive_from_pairing(pairing, config)
    for a in v.base.objects:
        report.checked += 1
        if back.dual(a) != v.dual(a):
            report.add("round-trip-d", f"d({a}) changed", a)
        if back.eta[a] != v.eta[a]:
            report.add("round-trip-eta", f"eta_{a} changed", a)
    for m in v.base.morphisms():
        report.checked += 1
        if back.dual_morphism(m) != v.dual_morphism(m):
            report.add("round-trip-d", f"d({m}) changed", m)
    found = find_representation(pairing.with_representation(None), config)
    if isinstance(found, NotRepresentable):
        report.add("representation", f"search failed at {found.obj}", found.obj)
    else:
        try:
            representation_iso(pairing, pairing.representation, found)
        except StructuralError as e:
            report.add("representation-iso", str(e))
    return report


@dataclass(frozen=True, eq=False)
class VolutiveAdjunctionData:
    """(c, Z, h): a category, a contravariant endofunctor and h: id ⇒ Z^op Z."""

    c: FiniteCategory
    Z: Functor
    h: NatTrans


def adjunction_data_from_volutive(v: VolutiveStructure) -> VolutiveAdjunctionData:
    return VolutiveAdjunctionData(v.base, v.d, v.eta)


def verify_zorro(data: VolutiveAdjunctionData, config: VolutConfig | None = None) -> ValidationReport:
    """Both triangle identities of Z ⊣ Z^op, as whiskered transformations in Cat.

    Z is read as a covariant functor C → C^op. The unit is h and the counit
    Z Z^op ⇒ id has the components of h read in C^op. Naturality of h is
    checked as well, so the report fails for any h that is not a 2-cell.
    Since Z^op is Z on the nose, both identities come down to
    d(h_a)∘h_{d(a)} = id_{d(a)} and always fail at the same objects.
    """
    c = data.c
    cop = opposite(c)
    z = Functor(c, cop, data.Z.object_map, data.Z.morphism_map, Variance.COVARIANT, "Z")
    zop = Functor(cop, c, data.Z.object_map, data.Z.morphism_map, Variance.COVARIANT, "Z^op")
    report = ValidationReport(subject=f"zorro {c.name}")
    report.merge(check_nattrans(data.h, config))
    unit = NatTrans(identity_functor(c), compose_functors(zop, z), dict(data.h.components), "h")
    counit = NatTrans(
        compose_functors(z, zop), identity_functor(cop), dict(data.h.components), "eps"
    )
    first = vertical_compose(whisker_right(counit, z), whisker_left(z, unit))
    second = vertical_compose(whisker_left(zop, counit), whisker_right(unit, zop))
    for a in c.objects:
        report.checked += 2
        if first[a] != cop.identity(z.ob(a)):
            report.add("zorro-1", f"(eps Z)•(Z h) is not the identity at {a}", a)
        if second[a] != c.identity(zop.ob(a)):
            report.add("zorro-2", f"(Z^op eps)•(h Z^op) is not the identity at {a}", a)
    return report


def is_adjoint_equivalence(data: VolutiveAdjunctionData) -> bool:
    return all(data.c.is_iso(data.h[a]) for a in data.c.objects)


def check_presentations(v: VolutiveStructure, config: VolutConfig | None = None) -> ValidationReport:
    """The pairing, the adjunction data and the structure itself agree."""
    report = ValidationReport(subject=f"presentations of {v.name}")
    report.merge(check_volutive(v, Kind.LAX, config))
    report.merge(check_round_trip(v, config))
    report.merge(verify_zorro(adjunction_data_from_volutive(v), config))
    return report
