"""
Finite profunctors.

A profunctor F: C ↛ D is a functor D^op × C → FinSet. Its value sets are keyed
(d, c); ``left(y, c, e)`` is the action of y: d' → d, taking F(d, c) to
F(d', c), and ``right(x, d, e)`` is the action of x: c → c', taking F(d, c)
to F(d, c'). Composites are coends computed by union-find, internal homs are
sets of natural families, and the Hom-category Prof(C, D) is the functor
category [D^op × C, FinSet_k].
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from volut.config import VolutConfig, resolve
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError, ValidationReport
from volut.fincat import (
    FiniteCategory,
    Functor,
    FunctorCategory,
    Variance,
    functor_category,
    opposite,
    pair_id,
    product,
    same_shape,
    split_pair,
    terminal_category,
)
from volut.instances.finset import FinSetCategory
from volut.instances.finset import decode as decode_map
from volut.instances.finset import encode as encode_map
from volut.volutive import Kind, VolutiveStructure

logger = logging.getLogger(__name__)

Cell = tuple[str, str]
Side = Callable[[str, str, str], str]
ProfMap = Mapping[Cell, Mapping[str, str]]


@dataclass(frozen=True, eq=False)
class Profunctor:
    """F: source ↛ target with value sets keyed (target object, source object)."""

    source: FiniteCategory
    target: FiniteCategory
    values: Mapping[Cell, tuple[str, ...]]
    left: Side
    right: Side
    name: str = "F"

    def value(self, d: str, c: str) -> tuple[str, ...]:
        try:
            return self.values[(d, c)]
        except KeyError:
            raise StructuralError(f"profunctor {self.name}: no value set at ({d}, {c})")

    def cells(self) -> Iterator[Cell]:
        for d in self.target.objects:
            for c in self.source.objects:
                yield d, c

    def act(self, y: str, x: str, e: str) -> str:
        """F(y, x)(e) for y: d' → d and x: c → c'."""
        d = self.target.endpoints(y)[1]
        c2 = self.source.endpoints(x)[1]
        return self.left(y, c2, self.right(x, d, e))

    @property
    def max_size(self) -> int:
        return max((len(v) for v in self.values.values()), default=0)

    def tables(self) -> tuple[dict, dict]:
        """The one-sided actions materialized as dictionaries."""
        left, right = {}, {}
        for y in self.target.morphisms():
            d2, d = self.target.endpoints(y)
            for c in self.source.objects:
                for e in self.value(d, c):
                    left[(y, c, e)] = self.left(y, c, e)
        for x in self.source.morphisms():
            c, _ = self.source.endpoints(x)
            for d in self.target.objects:
                for e in self.value(d, c):
                    right[(x, d, e)] = self.right(x, d, e)
        return left, right

    def renamed(self, name: str) -> Profunctor:
        return Profunctor(self.source, self.target, self.values, self.left, self.right, name)


def from_tables(
    source: FiniteCategory,
    target: FiniteCategory,
    values: Mapping[Cell, Sequence[str]],
    left: Mapping[tuple[str, str, str], str],
    right: Mapping[tuple[str, str, str], str],
    name: str = "F",
) -> Profunctor:
    """A profunctor whose actions are looked up in tables; missing identity entries act trivially."""

    def lookup(table: Mapping, category: FiniteCategory) -> Side:
        def act(m: str, other: str, e: str) -> str:
            if (m, other, e) in table:
                return table[(m, other, e)]
            if category.is_identity(m):
                return e
            raise StructuralError(f"profunctor {name}: no action of {m} on {e}")

        return act

    return Profunctor(
        source,
        target,
        {cell: tuple(v) for cell, v in values.items()},
        lookup(left, target),
        lookup(right, source),
        name,
    )


def same_profunctor(f: Profunctor, g: Profunctor) -> bool:
    if not (same_shape(f.source, g.source) and same_shape(f.target, g.target)):
        return False
    if dict(f.values) != dict(g.values):
        return False
    return f.tables() == g.tables()


def check_profunctor(p: Profunctor, config: VolutConfig | None = None) -> ValidationReport:
    """Membership, identities, functoriality on each side and commutation of the two actions."""
    src, tgt = p.source, p.target
    report = ValidationReport(subject=f"profunctor {p.name}")
    for d, c in p.cells():
        p.value(d, c)
    for y in tgt.morphisms():
        d2, d = tgt.endpoints(y)
        for c in src.objects:
            for e in p.value(d, c):
                report.checked += 1
                image = p.left(y, c, e)
                if image not in p.value(d2, c):
                    report.add("action", f"{y} sends {e} outside F({d2}, {c})", (y, c, e))
                elif tgt.is_identity(y) and image != e:
                    report.add("identity", f"{y} moves {e}", (y, c, e))
    for x in src.morphisms():
        c, c2 = src.endpoints(x)
        for d in tgt.objects:
            for e in p.value(d, c):
                report.checked += 1
                image = p.right(x, d, e)
                if image not in p.value(d, c2):
                    report.add("action", f"{x} sends {e} outside F({d}, {c2})", (x, d, e))
                elif src.is_identity(x) and image != e:
                    report.add("identity", f"{x} moves {e}", (x, d, e))
    if not report.ok:
        return report
    for a, b, d in itertools.product(tgt.objects, repeat=3):
        for y1 in tgt.hom(a, b):
            for y2 in tgt.hom(b, d):
                y = tgt.compose(y2, y1)
                for c in src.objects:
                    for e in p.value(d, c):
                        report.checked += 1
                        if p.left(y, c, e) != p.left(y1, c, p.left(y2, c, e)):
                            report.add("left-composition", f"{y2}∘{y1} acts wrongly on {e}", (y1, y2, e))
    for a, b, c2 in itertools.product(src.objects, repeat=3):
        for x1 in src.hom(a, b):
            for x2 in src.hom(b, c2):
                x = src.compose(x2, x1)
                for d in tgt.objects:
                    for e in p.value(d, a):
                        report.checked += 1
                        if p.right(x, d, e) != p.right(x2, d, p.right(x1, d, e)):
                            report.add("right-composition", f"{x2}∘{x1} acts wrongly on {e}", (x1, x2, e))
    for y in tgt.morphisms():
        d2, d = tgt.endpoints(y)
        for x in src.morphisms():
            c, c2 = src.endpoints(x)
            for e in p.value(d, c):
                report.checked += 1
                if p.left(y, c2, p.right(x, d, e)) != p.right(x, d2, p.left(y, c, e)):
                    report.add("interchange", f"{y} and {x} do not commute on {e}", (y, x, e))
    return report


# -- basic profunctors -----------------------------------------------------------


def identity_profunctor(c: FiniteCategory) -> Profunctor:
    """C(−, −): values Hom(d, c) with composition as both actions."""
    values = {(d, a): c.hom(d, a) for d in c.objects for a in c.objects}
    return Profunctor(
        c,
        c,
        values,
        lambda y, a, e: c.compose(e, y),
        lambda x, d, e: c.compose(x, e),
        f"id_{c.name}",
    )


def representable(k: Functor, name: str | None = None) -> Profunctor:
    """K_*: C ↛ D with values D(d, K c) for a covariant K: C → D."""
    if k.contravariant:
        raise StructuralError(f"functor {k.name} must be covariant to be embedded")
    c, d = k.source, k.target
    values = {(b, a): d.hom(b, k.ob(a)) for b in d.objects for a in c.objects}
    return Profunctor(
        c,
        d,
        values,
        lambda y, a, e: d.compose(e, y),
        lambda x, b, e: d.compose(k.fmap(x), e),
        name or f"{k.name}_*",
    )


def corepresentable(k: Functor, name: str | None = None) -> Profunctor:
    """K^*: D ↛ C with values D(K c, d) for a covariant K: C → D."""
    if k.contravariant:
        raise StructuralError(f"functor {k.name} must be covariant to be embedded")
    c, d = k.source, k.target
    values = {(a, b): d.hom(k.ob(a), b) for a in c.objects for b in d.objects}
    return Profunctor(
        d,
        c,
        values,
        lambda x, b, e: d.compose(e, k.fmap(x)),
        lambda y, a, e: d.compose(y, e),
        name or f"{k.name}^*",
    )


def sieve_profunctor(
    c: FiniteCategory, d: FiniteCategory, generators: Sequence[Cell], name: str = "S"
) -> Profunctor:
    """The subterminal profunctor supported on the closure of ``generators``."""
    support = set()
    pending = list(generators)
    while pending:
        b, a = pending.pop()
        if (b, a) in support:
            continue
        support.add((b, a))
        for b2 in d.objects:
            if d.hom_size(b2, b):
                pending.append((b2, a))
        for a2 in c.objects:
            if c.hom_size(a, a2):
                pending.append((b, a2))
    values = {(b, a): ("•",) if (b, a) in support else () for b in d.objects for a in c.objects}
    return Profunctor(c, d, values, lambda y, a, e: e, lambda x, b, e: e, name)


def prof_sum(f: Profunctor, g: Profunctor, name: str | None = None) -> Profunctor:
    """The coproduct F ⊔ G with elements tagged ⟨0,e⟩ and ⟨1,e⟩."""
    _require_parallel(f, g)
    parts = (f, g)
    values = {
        cell: tuple(pair_id("0", e) for e in f.values[cell])
        + tuple(pair_id("1", e) for e in g.values[cell])
        for cell in f.cells()
    }

    def left(y: str, a: str, e: str) -> str:
        tag, inner = split_pair(e)
        return pair_id(tag, parts[int(tag)].left(y, a, inner))

    def right(x: str, b: str, e: str) -> str:
        tag, inner = split_pair(e)
        return pair_id(tag, parts[int(tag)].right(x, b, inner))

    return Profunctor(f.source, f.target, values, left, right, name or f"{f.name}⊔{g.name}")


def random_profunctor(
    rng: random.Random, c: FiniteCategory, d: FiniteCategory, max_size: int = 2
) -> Profunctor:
    """A coproduct of sieves and small (co)representables with every value of size ≤ max_size."""
    pieces: list[Profunctor] = []
    budget = max_size
    while budget > 0 and rng.random() < 0.8:
        options: list[Profunctor] = []
        if c is d:
            for a in c.objects:
                if all(c.hom_size(b, a) <= budget for b in c.objects):
                    options.append(_hom_into(c, a))
                if all(c.hom_size(a, b) <= budget for b in c.objects):
                    options.append(_hom_out_of(c, a))
        generators = [(rng.choice(d.objects), rng.choice(c.objects)) for _ in range(rng.randint(0, 2))]
        options.append(sieve_profunctor(c, d, generators))
        piece = rng.choice(options)
        pieces.append(piece)
        budget -= max(1, piece.max_size)
    if not pieces:
        return sieve_profunctor(c, d, [], "∅")
    result = pieces[0]
    for piece in pieces[1:]:
        result = prof_sum(result, piece)
    return result.renamed(f"rand{rng.randrange(10**6)}")


def _hom_into(c: FiniteCategory, a: str) -> Profunctor:
    """(d, b) ↦ Hom(d, a), constant in b."""
    values = {(d, b): c.hom(d, a) for d in c.objects for b in c.objects}
    return Profunctor(c, c, values, lambda y, b, e: c.compose(e, y), lambda x, d, e: e, f"y{a}")


def _hom_out_of(c: FiniteCategory, a: str) -> Profunctor:
    """(d, b) ↦ Hom(a, b), constant in d."""
    values = {(d, b): c.hom(a, b) for d in c.objects for b in c.objects}
    return Profunctor(c, c, values, lambda y, b, e: e, lambda x, d, e: c.compose(x, e), f"{a}y")


def _require_parallel(f: Profunctor, g: Profunctor) -> None:
    if not (same_shape(f.source, g.source) and same_shape(f.target, g.target)):
        raise StructuralError(f"profunctors {f.name} and {g.name} are not parallel")


# -- composition -------------------------------------------------------------------


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


Triple = tuple[str, str, str]


@dataclass(frozen=True, eq=False)
class CoendProfunctor(Profunctor):
    """G∘F with each element named by the least representative ⟨m,⟨g,f⟩⟩ of its class."""

    classes: Mapping[Cell, Mapping[Triple, str]] = field(default_factory=dict)
    members: Mapping[Cell, Mapping[str, tuple[Triple, ...]]] = field(default_factory=dict)

    def class_of(self, cell: Cell, triple: Triple) -> str:
        try:
            return self.classes[cell][triple]
        except KeyError:
            raise StructuralError(f"{self.name}: {triple} is not an element at {cell}")

    def representative(self, cell: Cell, e: str) -> Triple:
        return self.members[cell][e][0]


def _coend_id(triple: Triple) -> str:
    m, g, f = triple
    return pair_id(m, pair_id(g, f))


def prof_compose(g: Profunctor, f: Profunctor, name: str | None = None) -> CoendProfunctor:
    """(G∘F)(e, c) = ∫^m G(e, m) × F(m, c), the quotient by the zig-zags of single middle morphisms."""
    middle = f.target
    if not same_shape(middle, g.source):
        raise StructuralError(f"cannot compose {g.name} after {f.name}: middle categories differ")
    values: dict[Cell, tuple[str, ...]] = {}
    classes: dict[Cell, dict[Triple, str]] = {}
    members: dict[Cell, dict[str, tuple[Triple, ...]]] = {}
    for z in g.target.objects:
        for a in f.source.objects:
            triples = [
                (m, x, y) for m in middle.objects for x in g.value(z, m) for y in f.value(m, a)
            ]
            index = {t: i for i, t in enumerate(triples)}
            uf = _UnionFind(len(triples))
            for h in middle.morphisms():
                m1, m2 = middle.endpoints(h)
                for x in g.value(z, m1):
                    gx = g.right(h, z, x)
                    for y in f.value(m2, a):
                        try:
                            uf.union(index[(m2, gx, y)], index[(m1, x, f.left(h, a, y))])
                        except KeyError:
                            raise StructuralError(f"action of {h} leaves the value sets at ({z}, {a})")
            groups: dict[int, list[Triple]] = {}
            for i, t in enumerate(triples):
                groups.setdefault(uf.find(i), []).append(t)
            cell = (z, a)
            classes[cell] = {}
            members[cell] = {}
            names = []
            for root in sorted(groups):
                eid = _coend_id(triples[root])
                names.append(eid)
                members[cell][eid] = tuple(groups[root])
                for t in groups[root]:
                    classes[cell][t] = eid
            values[cell] = tuple(names)

    def left(w: str, a: str, e: str) -> str:
        z2, z = g.target.endpoints(w)
        m, x, y = members[(z, a)][e][0]
        return classes[(z2, a)][(m, g.left(w, m, x), y)]

    def right(v: str, z: str, e: str) -> str:
        a, a2 = f.source.endpoints(v)
        m, x, y = members[(z, a)][e][0]
        return classes[(z, a2)][(m, x, f.right(v, m, y))]

    result = CoendProfunctor(
        f.source, g.target, values, left, right, name or f"{g.name}∘{f.name}", classes, members
    )
    logger.debug(f"composed {result.name}: largest value set {result.max_size}")
    return result


def compose_all(*profunctors: Profunctor) -> Profunctor:
    """compose_all(h, g, f) = (h∘g)∘f ... folded right to left."""
    result = profunctors[-1]
    for p in reversed(profunctors[:-1]):
        result = prof_compose(p, result)
    return result


# -- transformations -------------------------------------------------------------------


def check_prof_transformation(
    f: Profunctor, g: Profunctor, components: ProfMap, subject: str = "transformation"
) -> ValidationReport:
    _require_parallel(f, g)
    report = ValidationReport(subject=subject)
    for cell in f.cells():
        comp = components.get(cell)
        if comp is None or set(comp) != set(f.value(*cell)):
            report.add("component", f"component at {cell} is not defined on F{cell}", cell)
            return report
        for e, image in comp.items():
            if image not in g.value(*cell):
                report.add("component", f"component at {cell} sends {e} outside G{cell}", (cell, e))
    if not report.ok:
        return report
    for y in f.target.morphisms():
        d2, d = f.target.endpoints(y)
        for c in f.source.objects:
            for e in f.value(d, c):
                report.checked += 1
                if components[(d2, c)][f.left(y, c, e)] != g.left(y, c, components[(d, c)][e]):
                    report.add("naturality", f"square at {y} fails on {e}", (y, c, e))
    for x in f.source.morphisms():
        c, c2 = f.source.endpoints(x)
        for d in f.target.objects:
            for e in f.value(d, c):
                report.checked += 1
                if components[(d, c2)][f.right(x, d, e)] != g.right(x, d, components[(d, c)][e]):
                    report.add("naturality", f"square at {x} fails on {e}", (x, d, e))
    return report


def natural_iso(f: Profunctor, g: Profunctor, components: ProfMap) -> ValidationReport:
    """Check that ``components`` is a natural bijection F ⇒ G."""
    report = check_prof_transformation(f, g, components, f"iso {f.name} ≅ {g.name}")
    if not report.ok:
        return report
    for cell in f.cells():
        report.checked += 1
        images = set(components[cell].values())
        if len(images) != len(f.value(*cell)) or len(images) != len(g.value(*cell)):
            report.add("bijection", f"component at {cell} is not a bijection", cell)
    return report


def _constraints(f: Profunctor, g: Profunctor) -> dict[Cell, list[tuple[Cell, Cell, Callable, Callable]]]:
    """Naturality squares as (source cell, target cell, F-action, G-action), filed under both cells."""
    table: dict[Cell, list] = {cell: [] for cell in f.cells()}
    for y in f.target.morphisms():
        d2, d = f.target.endpoints(y)
        for c in f.source.objects:
            entry = (
                (d, c),
                (d2, c),
                lambda e, y=y, c=c: f.left(y, c, e),
                lambda e, y=y, c=c: g.left(y, c, e),
            )
            table[(d, c)].append(entry)
            table[(d2, c)].append(entry)
    for x in f.source.morphisms():
        c, c2 = f.source.endpoints(x)
        for d in f.target.objects:
            entry = (
                (d, c),
                (d, c2),
                lambda e, x=x, d=d: f.right(x, d, e),
                lambda e, x=x, d=d: g.right(x, d, e),
            )
            table[(d, c)].append(entry)
            table[(d, c2)].append(entry)
    return table


def enumerate_prof_transformations(
    f: Profunctor, g: Profunctor, config: VolutConfig | None = None
) -> Iterator[dict[Cell, dict[str, str]]]:
    """Every natural transformation F ⇒ G, by backtracking over cells.

    Raises:
        ResourceCapExceeded: if more than search_cap partial assignments are tried
    """
    _require_parallel(f, g)
    cfg = resolve(config)
    cells = list(f.cells())
    constraints = _constraints(f, g)
    tried = [0]

    def consistent(cell: Cell, comps: dict[Cell, dict[str, str]]) -> bool:
        for src, tgt, f_act, g_act in constraints[cell]:
            if src in comps and tgt in comps:
                for e in f.value(*src):
                    if comps[tgt][f_act(e)] != g_act(comps[src][e]):
                        return False
        return True

    def extend(i: int, comps: dict[Cell, dict[str, str]]) -> Iterator[dict[Cell, dict[str, str]]]:
        if i == len(cells):
            yield {cell: dict(comp) for cell, comp in comps.items()}
            return
        cell = cells[i]
        domain = f.value(*cell)
        for images in itertools.product(g.value(*cell), repeat=len(domain)):
            tried[0] += 1
            if tried[0] > cfg.search_cap:
                raise ResourceCapExceeded("profunctor transformations", cfg.search_cap)
            comps[cell] = dict(zip(domain, images))
            if consistent(cell, comps):
                yield from extend(i + 1, comps)
            del comps[cell]

    yield from extend(0, {})


def find_iso_to_identity(
    p: Profunctor, config: VolutConfig | None = None
) -> dict[Cell, dict[str, str]] | None:
    """A natural iso C(−, −) ⇒ P, found through its dinatural element family xi_c ∈ P(c, c)."""
    c = p.source
    if not same_shape(c, p.target):
        raise StructuralError(f"{p.name} is not an endo-profunctor")
    cfg = resolve(config)
    ident = identity_profunctor(c)
    families = itertools.product(*(p.value(a, a) for a in c.objects))
    for count, choice in enumerate(families):
        if count > cfg.search_cap:
            raise ResourceCapExceeded("dinatural families", cfg.search_cap)
        xi = dict(zip(c.objects, choice))
        if any(
            p.right(x, a, xi[a]) != p.left(x, b, xi[b])
            for x in c.morphisms()
            for a, b in [c.endpoints(x)]
        ):
            continue
        components = {
            (d, a): {m: p.right(m, d, xi[d]) for m in c.hom(d, a)} for d, a in p.cells()
        }
        if natural_iso(ident, p, components).ok:
            return components
    return None


def ninja_yoneda_isos(p: Profunctor) -> tuple[CoendProfunctor, dict, CoendProfunctor, dict]:
    """id∘F ⇒ F and F∘id ⇒ F given by acting with the middle morphism."""
    left_unit = prof_compose(identity_profunctor(p.target), p)
    right_unit = prof_compose(p, identity_profunctor(p.source))
    iso_left = {
        (d, c): {
            e: p.left(y, c, x)
            for e in left_unit.value(d, c)
            for _, y, x in [left_unit.representative((d, c), e)]
        }
        for d, c in p.cells()
    }
    iso_right = {
        (d, c): {
            e: p.right(x, d, y)
            for e in right_unit.value(d, c)
            for _, y, x in [right_unit.representative((d, c), e)]
        }
        for d, c in p.cells()
    }
    return left_unit, iso_left, right_unit, iso_right


def associator_iso(
    h: Profunctor, g: Profunctor, f: Profunctor
) -> tuple[CoendProfunctor, CoendProfunctor, dict]:
    """(H∘G)∘F ⇒ H∘(G∘F) sending ⟨m,⟨⟨n,⟨x,y⟩⟩,z⟩⟩ to ⟨n,⟨x,⟨m,⟨y,z⟩⟩⟩⟩."""
    hg = prof_compose(h, g)
    gf = prof_compose(g, f)
    lhs = prof_compose(hg, f)
    rhs = prof_compose(h, gf)
    components = {}
    for cell in lhs.cells():
        e, a = cell
        comp = {}
        for elem in lhs.value(*cell):
            m, outer, z = lhs.representative(cell, elem)
            n, x, y = hg.representative((e, m), outer)
            inner = gf.class_of((n, a), (m, y, z))
            comp[elem] = rhs.class_of(cell, (n, x, inner))
        components[cell] = comp
    return lhs, rhs, components


# -- opposites, reindexing, products ---------------------------------------------------


def prof_opposite(f: Profunctor) -> Profunctor:
    """F^op: D^op ↛ C^op with F^op(c, d) = F(d, c)."""
    values = {(c, d): f.value(d, c) for d, c in f.cells()}
    return Profunctor(
        opposite(f.target),
        opposite(f.source),
        values,
        lambda y, d, e: f.right(y, d, e),
        lambda x, c, e: f.left(x, c, e),
        f"{f.name}^op",
    )


def prof_reindex(
    f: Profunctor, target_functor: Functor, source_functor: Functor, name: str | None = None
) -> Profunctor:
    """(d', c') ↦ F(K d', J c') for covariant K: D' → D and J: C' → C."""
    k, j = target_functor, source_functor
    if k.contravariant or j.contravariant:
        raise StructuralError("reindexing needs covariant functors")
    if not (same_shape(k.target, f.target) and same_shape(j.target, f.source)):
        raise StructuralError(f"cannot reindex {f.name} along {k.name} and {j.name}")
    values = {
        (d, c): f.value(k.ob(d), j.ob(c)) for d in k.source.objects for c in j.source.objects
    }
    return Profunctor(
        j.source,
        k.source,
        values,
        lambda y, c, e: f.left(k.fmap(y), j.ob(c), e),
        lambda x, d, e: f.right(j.fmap(x), k.ob(d), e),
        name or f"{f.name}[{k.name},{j.name}]",
    )


def prof_product(
    f: Profunctor,
    g: Profunctor,
    source: FiniteCategory | None = None,
    target: FiniteCategory | None = None,
) -> Profunctor:
    """F × G: C × C' ↛ D × D' with values F(d, c) × G(d', c')."""
    source = source or product(f.source, g.source)
    target = target or product(f.target, g.target)
    values = {}
    for d1, d2 in itertools.product(f.target.objects, g.target.objects):
        for c1, c2 in itertools.product(f.source.objects, g.source.objects):
            values[(pair_id(d1, d2), pair_id(c1, c2))] = tuple(
                pair_id(e1, e2) for e1 in f.value(d1, c1) for e2 in g.value(d2, c2)
            )

    def left(y: str, c: str, e: str) -> str:
        (y1, y2), (c1, c2), (e1, e2) = split_pair(y), split_pair(c), split_pair(e)
        return pair_id(f.left(y1, c1, e1), g.left(y2, c2, e2))

    def right(x: str, d: str, e: str) -> str:
        (x1, x2), (d1, d2), (e1, e2) = split_pair(x), split_pair(d), split_pair(e)
        return pair_id(f.right(x1, d1, e1), g.right(x2, d2, e2))

    return Profunctor(source, target, values, left, right, f"{f.name}×{g.name}")


def check_opposite_embedding(k: Functor) -> ValidationReport:
    """(K_*)^op and (K^op)^* agree as tables."""
    report = ValidationReport(subject=f"opposite embedding of {k.name}")
    lhs = prof_opposite(representable(k))
    k_op = Functor(opposite(k.source), opposite(k.target), k.object_map, k.morphism_map, k.variance)
    rhs = corepresentable(k_op)
    report.checked += 1
    if not same_profunctor(lhs, rhs):
        report.add("opposite-embedding", f"(K_*)^op ≠ (K^op)^* for {k.name}", k.name)
    return report


# -- duals -------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualData:
    """ev: C^op × C ↛ 1 and coev: 1 ↛ C × C^op, both Hom_C reinterpreted."""

    category: FiniteCategory
    op: FiniteCategory
    unit: FiniteCategory
    ev: Profunctor
    coev: Profunctor


def prof_dual_data(c: FiniteCategory) -> DualData:
    cop = opposite(c)
    one = terminal_category()
    star = one.objects[0]
    copc = product(cop, c)
    ccop = product(c, cop)
    ev_values = {(star, pair_id(a, b)): c.hom(a, b) for a in c.objects for b in c.objects}
    coev_values = {(pair_id(a, b), star): c.hom(a, b) for a in c.objects for b in c.objects}

    def ev_right(x: str, d: str, e: str) -> str:
        u, v = split_pair(x)
        return c.compose_all(v, e, u)

    def coev_left(y: str, a: str, e: str) -> str:
        u, v = split_pair(y)
        return c.compose_all(v, e, u)

    ev = Profunctor(copc, one, ev_values, lambda y, a, e: e, ev_right, f"ev_{c.name}")
    coev = Profunctor(one, ccop, coev_values, coev_left, lambda x, d, e: e, f"coev_{c.name}")
    return DualData(c, cop, one, ev, coev)


def _structural(
    source: FiniteCategory,
    target: FiniteCategory,
    on_objects: Callable[[str], str],
    on_morphisms: Callable[[str], str],
    name: str,
) -> Functor:
    return Functor(
        source,
        target,
        {a: on_objects(a) for a in source.objects},
        on_morphisms,
        Variance.COVARIANT,
        name,
    )


def _reassociate(x: str) -> str:
    """⟨⟨a,b⟩,c⟩ ↦ ⟨a,⟨b,c⟩⟩."""
    ab, c = split_pair(x)
    a, b = split_pair(ab)
    return pair_id(a, pair_id(b, c))


def _reassociate_back(x: str) -> str:
    """⟨a,⟨b,c⟩⟩ ↦ ⟨⟨a,b⟩,c⟩."""
    a, bc = split_pair(x)
    b, c = split_pair(bc)
    return pair_id(pair_id(a, b), c)


def zorro_composites(c: FiniteCategory) -> tuple[Profunctor, Profunctor]:
    """The two snake composites C → C and C^op → C^op built from ev and coev."""
    data = prof_dual_data(c)
    cop, one, ev, coev = data.op, data.unit, data.ev, data.coev
    star = one.objects[0]
    one_id = one.identity(star)

    one_c = product(one, c)
    ccop = coev.target
    copc = ev.source
    ccop_c = product(ccop, c)
    c_copc = product(c, copc)
    c_one = product(c, one)
    lam = _structural(c, one_c, lambda a: pair_id(star, a), lambda m: pair_id(one_id, m), "λ")
    alpha = _structural(ccop_c, c_copc, _reassociate, _reassociate, "α")
    rho = _structural(c_one, c, lambda a: split_pair(a)[0], lambda m: split_pair(m)[0], "ρ")
    first = compose_all(
        representable(rho),
        prof_product(identity_profunctor(c), ev, c_copc, c_one),
        representable(alpha),
        prof_product(coev, identity_profunctor(c), one_c, ccop_c),
        representable(lam),
    )

    cop_one = product(cop, one)
    cop_ccop = product(cop, ccop)
    copc_cop = product(copc, cop)
    one_cop = product(one, cop)
    rho_inv = _structural(
        cop, cop_one, lambda a: pair_id(a, star), lambda m: pair_id(m, one_id), "ρ⁻¹"
    )
    alpha_inv = _structural(cop_ccop, copc_cop, _reassociate_back, _reassociate_back, "α⁻¹")
    lam_inv = _structural(one_cop, cop, lambda a: split_pair(a)[1], lambda m: split_pair(m)[1], "λ⁻¹")
    second = compose_all(
        representable(lam_inv),
        prof_product(ev, identity_profunctor(cop), copc_cop, one_cop),
        representable(alpha_inv),
        prof_product(identity_profunctor(cop), coev, cop_one, cop_ccop),
        representable(rho_inv),
    )
    return first.renamed(f"zorro1_{c.name}"), second.renamed(f"zorro2_{c.name}")


def verify_prof_zorro(c: FiniteCategory, config: VolutConfig | None = None) -> ValidationReport:
    """Both snake composites are naturally isomorphic to identity profunctors."""
    report = ValidationReport(subject=f"prof zorro {c.name}")
    for kind, composite in zip(("zorro-1", "zorro-2"), zorro_composites(c)):
        report.checked += 1
        iso = find_iso_to_identity(composite, config)
        if iso is None:
            report.add(kind, f"{composite.name} is not isomorphic to the identity", c.name)
        else:
            logger.info(f"{composite.name}: iso to the identity found")
    return report


# -- internal homs ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InternalHom:
    """Y^X: D ↛ E whose element "k" at (e, d) is the k-th natural family X(d, −) ⇒ Y(e, −)."""

    x: Profunctor
    y: Profunctor
    profunctor: Profunctor
    keys: Mapping[str, tuple[tuple[str, str], ...]]
    families: Mapping[Cell, tuple[tuple[str, ...], ...]]

    def family(self, cell: Cell, e: str) -> dict[tuple[str, str], str]:
        return dict(zip(self.keys[cell[1]], self.families[cell][int(e)]))

    def element(self, cell: Cell, family: Mapping[tuple[str, str], str]) -> str:
        wanted = tuple(family[k] for k in self.keys[cell[1]])
        try:
            return str(self.families[cell].index(wanted))
        except ValueError:
            raise StructuralError(f"{self.profunctor.name}: no such natural family at {cell}")


def _natural_families(
    x: Profunctor, y: Profunctor, e: str, d: str, cfg: VolutConfig, budget: list[int]
) -> list[tuple[str, ...]]:
    c = x.source
    obs = c.objects
    found = []

    def ok(assigned: dict[str, dict[str, str]], a: str) -> bool:
        for b in assigned:
            for m in itertools.chain(c.hom(a, b), c.hom(b, a) if b != a else ()):
                src, tgt = c.endpoints(m)
                for xi in x.value(d, src):
                    if y.right(m, e, assigned[src][xi]) != assigned[tgt][x.right(m, d, xi)]:
                        return False
        return True

    def extend(i: int, assigned: dict[str, dict[str, str]]) -> None:
        if i == len(obs):
            found.append(tuple(assigned[a][xi] for a in obs for xi in x.value(d, a)))
            return
        a = obs[i]
        domain = x.value(d, a)
        for images in itertools.product(y.value(e, a), repeat=len(domain)):
            budget[0] += 1
            if budget[0] > cfg.search_cap:
                raise ResourceCapExceeded("internal hom families", cfg.search_cap)
            assigned[a] = dict(zip(domain, images))
            if ok(assigned, a):
                extend(i + 1, assigned)
            del assigned[a]

    extend(0, {})
    return found


def internal_hom(x: Profunctor, y: Profunctor, config: VolutConfig | None = None) -> InternalHom:
    """Y^X(e, d) = natural families X(d, c) → Y(e, c), as an equalizer of the two actions.

    Raises:
        ResourceCapExceeded: if the family space exceeds search_cap
    """
    if not same_shape(x.source, y.source):
        raise StructuralError(f"{x.name} and {y.name} need a common source")
    cfg = resolve(config)
    c, dcat, ecat = x.source, x.target, y.target
    keys = {d: tuple((a, xi) for a in c.objects for xi in x.value(d, a)) for d in dcat.objects}
    budget = [0]
    families = {
        (e, d): tuple(_natural_families(x, y, e, d, cfg, budget))
        for e in ecat.objects
        for d in dcat.objects
    }
    index = {cell: {fam: str(i) for i, fam in enumerate(fams)} for cell, fams in families.items()}
    values = {cell: tuple(str(i) for i in range(len(fams))) for cell, fams in families.items()}

    def look(cell: Cell, fam: tuple[str, ...]) -> str:
        try:
            return index[cell][fam]
        except KeyError:
            raise StructuralError(f"action leaves the natural families at {cell}")

    def left(w: str, d: str, e: str) -> str:
        e2, e1 = ecat.endpoints(w)
        fam = families[(e1, d)][int(e)]
        return look((e2, d), tuple(y.left(w, a, v) for (a, _), v in zip(keys[d], fam)))

    def right(v: str, e: str, el: str) -> str:
        d, d1 = dcat.endpoints(v)
        fam = dict(zip(keys[d], families[(e, d)][int(el)]))
        return look((e, d1), tuple(fam[(a, x.left(v, a, xi))] for a, xi in keys[d1]))

    profunctor = Profunctor(dcat, ecat, values, left, right, f"{y.name}^{x.name}")
    logger.debug(f"internal hom {profunctor.name}: {budget[0]} partial families tried")
    return InternalHom(x, y, profunctor, keys, families)


def prof_internal_hom(x: Profunctor, y: Profunctor, config: VolutConfig | None = None) -> Profunctor:
    return internal_hom(x, y, config).profunctor


def check_ihom_adjunction(
    z: Profunctor, x: Profunctor, y: Profunctor, config: VolutConfig | None = None
) -> ValidationReport:
    """Hom(Z, Y^X) ≅ Hom(Z∘X, Y) through the transpose τ ↦ (⟨d,z,ξ⟩ ↦ τ(z)(ξ))."""
    report = ValidationReport(subject=f"ihom adjunction {z.name}, {x.name}, {y.name}")
    ih = internal_hom(x, y, config)
    zx = prof_compose(z, x)
    left_side = list(enumerate_prof_transformations(z, ih.profunctor, config))
    right_side = list(enumerate_prof_transformations(zx, y, config))
    report.checked += 1
    if len(left_side) != len(right_side):
        report.add(
            "adjunction-count",
            f"|Hom(Z, Y^X)| = {len(left_side)} but |Hom(Z∘X, Y)| = {len(right_side)}",
            (len(left_side), len(right_side)),
        )
    seen = set()
    for tau in left_side:
        transpose = {}
        for cell in zx.cells():
            comp = {}
            for elem in zx.value(*cell):
                d, zz, xi = zx.representative(cell, elem)
                family = ih.family((cell[0], d), tau[(cell[0], d)][zz])
                comp[elem] = family[(cell[1], xi)]
            transpose[cell] = comp
        sub = check_prof_transformation(zx, y, transpose, "transpose")
        report.checked += 1
        if not sub.ok:
            report.add("transpose-natural", "a transposed cell is not natural", sub.witnesses()[:1])
        key = tuple(sorted((cell, tuple(sorted(comp.items()))) for cell, comp in transpose.items()))
        if key in seen:
            report.add("transpose-injective", "two transformations share a transpose")
        seen.add(key)
    return report


# -- the local structure on Prof(C, D) -------------------------------------------------


def _check_involution(s: Functor) -> None:
    if not s.contravariant or not same_shape(s.source, s.target):
        raise PreconditionError(f"{s.name} is not a contravariant endofunctor", s.name)
    for a in s.source.objects:
        if s.ob(s.ob(a)) != a:
            raise PreconditionError(f"{s.name} is not an involution on objects", a)
    for m in s.source.morphisms():
        if s.fmap(s.fmap(m)) != m:
            raise PreconditionError(f"{s.name} is not an involution on morphisms", m)


def _as_covariant(s: Functor) -> Functor:
    return Functor(
        s.source, opposite(s.source), s.object_map, s.morphism_map, Variance.COVARIANT, s.name
    )


@dataclass(frozen=True, eq=False)
class LocalDual:
    """d̄X(d, c) = (id_C^X)(s c, s d) together with the families behind each element."""

    x: Profunctor
    s_source: Functor
    s_target: Functor
    ihom: InternalHom
    profunctor: Profunctor

    def family(self, d: str, c: str, e: str) -> dict[tuple[str, str], str]:
        """Keys (c'', ξ) with ξ ∈ X(s d, c''); values in Hom(s c, c'')."""
        return self.ihom.family((self.s_source.ob(c), self.s_target.ob(d)), e)

    def element(self, d: str, c: str, family: Mapping[tuple[str, str], str]) -> str:
        return self.ihom.element((self.s_source.ob(c), self.s_target.ob(d)), family)


def prof_local_dual(
    x: Profunctor, s_source: Functor, s_target: Functor, config: VolutConfig | None = None
) -> LocalDual:
    """The opposite of the internal hom into id_C, reindexed along the chosen self-dualities."""
    _check_involution(s_source)
    _check_involution(s_target)
    ih = internal_hom(x, identity_profunctor(x.source), config)
    dual = prof_reindex(
        prof_opposite(ih.profunctor),
        _as_covariant(s_target),
        _as_covariant(s_source),
        f"d̄({x.name})",
    )
    return LocalDual(x, s_source, s_target, ih, dual)


def local_dual_map(components: ProfMap, dual: LocalDual, dual2: LocalDual) -> dict:
    """d̄τ: d̄X' ⇒ d̄X for τ: X ⇒ X', by precomposing families with τ."""
    result = {}
    for d, c in dual2.profunctor.cells():
        comp = {}
        for e in dual2.profunctor.value(d, c):
            fam2 = dual2.family(d, c, e)
            sd = dual.s_target.ob(d)
            fam = {(a, xi): fam2[(a, components[(sd, a)][xi])] for a, xi in _family_keys(dual, d, c)}
            comp[e] = dual.element(d, c, fam)
        result[(d, c)] = comp
    return result


def _family_keys(dual: LocalDual, d: str, c: str) -> tuple[tuple[str, str], ...]:
    return dual.ihom.keys[dual.s_target.ob(d)]


def local_eta(dual: LocalDual, dual2: LocalDual) -> dict:
    """η̄_X: X ⇒ d̄d̄X, x ↦ (ψ ↦ s(ψ_c(x))); ``dual2`` is the local dual of d̄X."""
    x, s = dual.x, dual.s_source
    result = {}
    for d, c in x.cells():
        comp = {}
        for el in x.value(d, c):
            fam = {}
            for c2, psi in _family_keys(dual2, d, c):
                inner = dual.family(dual.s_target.ob(d), c2, psi)
                fam[(c2, psi)] = s.fmap(inner[(c, el)])
            comp[el] = dual2.element(d, c, fam)
        result[(d, c)] = comp
    return result


def _then(first: ProfMap, second: ProfMap) -> dict:
    return {cell: {e: second[cell][v] for e, v in comp.items()} for cell, comp in first.items()}


# -- hermitian fixed points ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProfHerm:
    """(X, θ: X ⇒ d̄X); θ reads as a pairing ⟨x, x'⟩ ∈ Hom(s c, c'') for x ∈ X(d, c), x' ∈ X(s d, c'')."""

    dual: LocalDual
    theta: ProfMap
    name: str = "h"

    @property
    def profunctor(self) -> Profunctor:
        return self.dual.x

    def pair(self, d: str, c: str, x: str, c2: str, x2: str) -> str:
        return self.dual.family(d, c, self.theta[(d, c)][x])[(c2, x2)]


def check_prof_hermitian(h: ProfHerm, config: VolutConfig | None = None) -> ValidationReport:
    """θ is natural and θ = d̄(θ)∘η̄_X."""
    x, dual = h.profunctor, h.dual
    report = check_prof_transformation(x, dual.profunctor, h.theta, f"hermitian {h.name}")
    if not report.ok:
        return report
    dual2 = prof_local_dual(dual.profunctor, dual.s_source, dual.s_target, config)
    eta = local_eta(dual, dual2)
    dtheta = local_dual_map(h.theta, dual, dual2)
    composite = _then(eta, dtheta)
    for cell in x.cells():
        for e in x.value(*cell):
            report.checked += 1
            if composite[cell][e] != h.theta[cell][e]:
                report.add("fixed-point", f"θ ≠ d̄(θ)∘η̄ at {cell} on {e}", (cell, e))
    return report


def lax_hermitian_points(
    x: Profunctor, s_source: Functor, s_target: Functor, config: VolutConfig | None = None
) -> list[ProfHerm]:
    dual = prof_local_dual(x, s_source, s_target, config)
    points = []
    for k, theta in enumerate(enumerate_prof_transformations(x, dual.profunctor, config)):
        h = ProfHerm(dual, theta, f"{x.name}#{k}")
        if check_prof_hermitian(h, config).ok:
            points.append(h)
    return points


def is_honest(h: ProfHerm) -> bool:
    return all(
        len(set(comp.values())) == len(comp) == len(h.dual.profunctor.value(*cell))
        for cell, comp in h.theta.items()
    )


def prof_compose_hermitian(
    hx: ProfHerm, hy: ProfHerm, config: VolutConfig | None = None
) -> ProfHerm:
    """X∘Y with ⟨⟨m,x,y⟩, ⟨m',x',y'⟩⟩ = ⟨y, Y(⟨x,x'⟩, id)(y')⟩.

    Raises:
        StructuralError: if the categories differ or the induced pairing depends on representatives
    """
    x, y = hx.profunctor, hy.profunctor
    s = hx.dual.s_source
    if not (same_shape(x.source, x.target) and same_shape(y.source, y.target)):
        raise StructuralError("hermitian composition needs endo-profunctors")
    z = prof_compose(x, y)
    dual = prof_local_dual(z, s, s, config)
    theta = {}
    for cell in z.cells():
        d, c = cell
        comp = {}
        for el in z.value(*cell):
            fam = {}
            for c2, el2 in _family_keys(dual, d, c):
                outcomes = {
                    hy.pair(m, c, yy, c2, y.left(hx.pair(d, m, xx, m2, xx2), c2, yy2))
                    for m, xx, yy in z.members[cell][el]
                    for m2, xx2, yy2 in z.members[(s.ob(d), c2)][el2]
                }
                if len(outcomes) != 1:
                    raise StructuralError(f"composite pairing is not well defined at {cell}")
                fam[(c2, el2)] = outcomes.pop()
            comp[el] = dual.element(d, c, fam)
        theta[cell] = comp
    return ProfHerm(dual, theta, f"{hx.name}⊗{hy.name}")


# -- the Hom-category ---------------------------------------------------------------------


def prof_hom_category(
    c: FiniteCategory, d: FiniteCategory, max_size: int = 2, config: VolutConfig | None = None
) -> FunctorCategory:
    """Prof(C, D) with value sets of size ≤ max_size, as [D^op × C, FinSet].

    Raises:
        ResourceCapExceeded: if the functor category exceeds the morphism cap
    """
    h = functor_category(product(opposite(d), c), FinSetCategory(max_size), config)
    logger.info(f"Prof({c.name}, {d.name}): {len(h.objects)} profunctors, {h.morphism_count()} cells")
    return h


def profunctor_from_functor(fn: Functor, c: FiniteCategory, d: FiniteCategory, name: str) -> Profunctor:
    values = {
        (b, a): tuple(str(i) for i in range(int(fn.ob(pair_id(b, a)))))
        for b in d.objects
        for a in c.objects
    }

    def left(y: str, a: str, e: str) -> str:
        return str(decode_map(fn.fmap(pair_id(y, c.identity(a))))[2][int(e)])

    def right(x: str, b: str, e: str) -> str:
        return str(decode_map(fn.fmap(pair_id(d.identity(b), x)))[2][int(e)])

    return Profunctor(c, d, values, left, right, name)


def profunctor_to_functor(p: Profunctor, h: FunctorCategory) -> str:
    """The object of ``h`` matching ``p`` after labelling each value set by position."""
    bound = int(h.target.objects[-1])
    if p.max_size > bound:
        raise ResourceCapExceeded("profunctor value size", bound, p.max_size)
    src = h.source
    objects = {pair_id(b, a): str(len(p.value(b, a))) for b, a in p.cells()}
    morphisms = {}
    for m in src.morphisms():
        y, x = split_pair(m)
        (b, a) = split_pair(src.endpoints(m)[0])
        (b2, a2) = split_pair(src.endpoints(m)[1])
        values = p.value(b, a)
        images = p.value(b2, a2)
        morphisms[m] = encode_map(
            len(values), len(images), [images.index(p.act(y, x, e)) for e in values]
        )
    return h.find_functor(objects, morphisms)


def prof_map_from_nattrans(h: FunctorCategory, tid: str) -> dict[Cell, dict[str, str]]:
    t = h.transformations[tid]
    result = {}
    for obj in h.source.objects:
        b, a = split_pair(obj)
        _, _, images = decode_map(t[obj])
        result[(b, a)] = {str(i): str(v) for i, v in enumerate(images)}
    return result


def _nattrans_id(
    h: FunctorCategory, src: str, tgt: str, components: ProfMap, f: Profunctor, g: Profunctor
) -> str:
    labelled = {}
    for b, a in f.cells():
        values, images = f.value(b, a), g.value(b, a)
        labelled[pair_id(b, a)] = encode_map(
            len(values), len(images), [images.index(components[(b, a)][e]) for e in values]
        )
    return h.find_transformation(src, tgt, labelled)


@dataclass(frozen=True, eq=False)
class LocalStructure:
    category: FunctorCategory
    volutive: VolutiveStructure
    profunctors: Mapping[str, Profunctor]
    duals: Mapping[str, LocalDual]


def prof_local_structure(
    cv: VolutiveStructure,
    dv: VolutiveStructure,
    max_size: int = 2,
    config: VolutConfig | None = None,
) -> LocalStructure:
    """(d̄, η̄) on Prof(C, D), using the dualities of ``cv`` and ``dv`` as s_C and s_D.

    Raises:
        PreconditionError: if either duality is not an involution on the nose
        ResourceCapExceeded: if the Hom-category or a dual exceeds its cap
    """
    c, d = cv.base, dv.base
    s_c, s_d = cv.d, dv.d
    h = prof_hom_category(c, d, max_size, config)
    profs = {fid: profunctor_from_functor(h.functors[fid], c, d, fid) for fid in h.objects}
    duals = {fid: prof_local_dual(p, s_c, s_d, config) for fid, p in profs.items()}
    d_objects = {fid: profunctor_to_functor(duals[fid].profunctor, h) for fid in h.objects}
    d_morphisms = {}
    for tid in h.morphisms():
        src, tgt = h.endpoints(tid)
        mapped = local_dual_map(prof_map_from_nattrans(h, tid), duals[src], duals[tgt])
        d_morphisms[tid] = _nattrans_id(
            h, d_objects[tgt], d_objects[src], mapped, duals[tgt].profunctor, duals[src].profunctor
        )
    eta = {}
    for fid in h.objects:
        dd = d_objects[d_objects[fid]]
        comps = local_eta(duals[fid], duals[d_objects[fid]])
        eta[fid] = _nattrans_id(h, fid, dd, comps, profs[fid], profs[dd])
    v = VolutiveStructure.from_maps(
        h, d_objects, d_morphisms, eta, Kind.LAX, f"local({c.name},{d.name})"
    )
    return LocalStructure(h, v, profs, duals)
