"""
Finite categories, functors and natural transformations.

Every construction in volut lives in a FiniteCategory: a finite set of objects,
morphisms with globally unique string ids, designated identities and a
composition operation. Morphism equality is id equality.

Two flavours share one interface. The plain FiniteCategory stores explicit
tables; GeneratedCategory computes hom-sets and composites on demand, which is
how matrix categories, opposites, products and dagger categories avoid
materializing composition tables with hundreds of millions of entries.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from volut.config import VolutConfig, resolve
from volut.errors import ResourceCapExceeded, StructuralError, ValidationReport

logger = logging.getLogger(__name__)


class Variance(str, Enum):
    COVARIANT = "covariant"
    CONTRAVARIANT = "contravariant"

    def __mul__(self, other: Variance) -> Variance:
        if self is other:
            return Variance.COVARIANT
        return Variance.CONTRAVARIANT


class FiniteCategory:
    """A finite category given by explicit tables.

    Args:
        objects: Object ids
        morphisms: Triples (morphism id, domain, codomain)
        identity: Object id to identity morphism id
        composition: (g, f) to the id of g∘f, for cod(f) = dom(g)
        name: Display name
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[tuple[str, str, str]],
        identity: Mapping[str, str],
        composition: Mapping[tuple[str, str], str],
        *,
        name: str = "C",
    ):
        self.name = name
        self._objects = tuple(objects)
        self._object_set = frozenset(self._objects)
        self._endpoints: dict[str, tuple[str, str]] = {}
        self._homs: dict[tuple[str, str], list[str]] = {}
        for mid, dom, cod in morphisms:
            self._endpoints[mid] = (dom, cod)
            self._homs.setdefault((dom, cod), []).append(mid)
        self._hom_tuples = {key: tuple(value) for key, value in self._homs.items()}
        self._identity = dict(identity)
        self._composition = dict(composition)
        self._inverses: dict[str, str | None] = {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}: {len(self.objects)} objects>"

    # -- basic interface -------------------------------------------------

    @property
    def objects(self) -> tuple[str, ...]:
        return self._objects

    def has_object(self, a: str) -> bool:
        return a in self._object_set

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom_tuples.get((a, b), ())

    def hom_size(self, a: str, b: str) -> int:
        return len(self.hom(a, b))

    def endpoints(self, m: str) -> tuple[str, str]:
        try:
            return self._endpoints[m]
        except KeyError:
            raise StructuralError(f"{self.name}: unknown morphism {m!r}")

    def __contains__(self, m: object) -> bool:
        return m in self._endpoints

    def identity(self, a: str) -> str:
        try:
            return self._identity[a]
        except KeyError:
            raise StructuralError(f"{self.name}: no identity for object {a!r}")

    def composite_or_none(self, g: str, f: str) -> str | None:
        return self._composition.get((g, f))

    def compose(self, g: str, f: str) -> str:
        """Return g∘f."""
        gf = self.composite_or_none(g, f)
        if gf is None:
            raise StructuralError(f"{self.name}: no composite for ({g!r}, {f!r})")
        return gf

    def validate_structure(self) -> None:
        """Raise StructuralError on dangling ids."""
        for mid, (dom, cod) in self._endpoints.items():
            if dom not in self._object_set or cod not in self._object_set:
                raise StructuralError(f"{self.name}: morphism {mid!r} has an unknown endpoint")
        for a in self._objects:
            if a not in self._identity:
                raise StructuralError(f"{self.name}: no identity for object {a!r}")
        for a, i in self._identity.items():
            if a not in self._object_set:
                raise StructuralError(f"{self.name}: identity given for unknown object {a!r}")
            if i not in self._endpoints:
                raise StructuralError(f"{self.name}: identity of {a!r} is unknown morphism {i!r}")
        for (g, f), gf in self._composition.items():
            for m in (g, f, gf):
                if m not in self._endpoints:
                    raise StructuralError(
                        f"{self.name}: composition entry ({g!r}, {f!r}) mentions unknown {m!r}"
                    )

    def table_violations(self, report: ValidationReport) -> None:
        """Check that composition is defined exactly on composable pairs."""
        for (g, f), gf in self._composition.items():
            (a, b), (b2, c) = self.endpoints(f), self.endpoints(g)
            if b != b2:
                report.add("composability", f"composite given for non-composable ({g}, {f})", [g, f])
            elif self.endpoints(gf) != (a, c):
                report.add("composability", f"{g}∘{f} = {gf} lands outside Hom({a},{c})", [g, f])
        for a, b, c in itertools.product(self._objects, repeat=3):
            for f in self.hom(a, b):
                for g in self.hom(b, c):
                    if (g, f) not in self._composition:
                        report.add("composability", f"missing composite for ({g}, {f})", [g, f])

    # -- derived interface -----------------------------------------------

    def dom(self, m: str) -> str:
        return self.endpoints(m)[0]

    def cod(self, m: str) -> str:
        return self.endpoints(m)[1]

    def compose_all(self, *ms: str) -> str:
        """Compose right to left: compose_all(h, g, f) = h∘g∘f."""
        if not ms:
            raise ValueError("compose_all needs at least one morphism")
        result = ms[-1]
        for m in reversed(ms[:-1]):
            result = self.compose(m, result)
        return result

    def morphisms(self) -> Iterator[str]:
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)

    def morphism_count(self) -> int:
        return sum(self.hom_size(a, b) for a in self.objects for b in self.objects)

    def pair_count(self) -> int:
        """Number of composable pairs."""
        obs = self.objects
        return sum(
            self.hom_size(a, b) * self.hom_size(b, c) for a in obs for b in obs for c in obs
        )

    def triple_count(self) -> int:
        obs = self.objects
        into = {b: sum(self.hom_size(a, b) for a in obs) for b in obs}
        out_of = {c: sum(self.hom_size(c, d) for d in obs) for c in obs}
        return sum(into[b] * self.hom_size(b, c) * out_of[c] for b in obs for c in obs)

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        hom = self.hom(a, b)
        return rng.choice(hom) if hom else None

    def inverse(self, m: str) -> str | None:
        if m not in self._inverses:
            a, b = self.endpoints(m)
            found = None
            for g in self.hom(b, a):
                if self.compose(g, m) == self.identity(a) and self.compose(m, g) == self.identity(b):
                    found = g
                    break
            self._inverses[m] = found
        return self._inverses[m]

    def is_iso(self, m: str) -> bool:
        return self.inverse(m) is not None

    def is_identity(self, m: str) -> bool:
        a, b = self.endpoints(m)
        return a == b and self.identity(a) == m

    def is_thin(self) -> bool:
        return all(self.hom_size(a, b) <= 1 for a in self.objects for b in self.objects)


class GeneratedCategory(FiniteCategory):
    """A finite category whose hom-sets and composites are computed on demand.

    Args:
        objects: Object ids
        hom: Callable returning the ids of Hom(a, b) in canonical order
        endpoints: Callable returning (dom, cod) of an id, raising StructuralError if unknown
        identity: Callable returning the identity of an object
        compose: Callable returning g∘f
        name: Display name
        hom_size: Optional callable counting Hom(a, b) without enumerating it
    """

    def __init__(
        self,
        objects: Iterable[str],
        *,
        hom: Callable[[str, str], Sequence[str]],
        endpoints: Callable[[str], tuple[str, str]],
        identity: Callable[[str], str],
        compose: Callable[[str, str], str],
        name: str = "C",
        hom_size: Callable[[str, str], int] | None = None,
    ):
        super().__init__(objects, (), {}, {}, name=name)
        self._hom_fn = hom
        self._endpoints_fn = endpoints
        self._identity_fn = identity
        self._compose_fn = compose
        self._hom_size_fn = hom_size
        self._hom_cache: dict[tuple[str, str], tuple[str, ...]] = {}

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        key = (a, b)
        if key not in self._hom_cache:
            if not (self.has_object(a) and self.has_object(b)):
                return ()
            self._hom_cache[key] = tuple(self._hom_fn(a, b))
        return self._hom_cache[key]

    def hom_size(self, a: str, b: str) -> int:
        if self._hom_size_fn is not None and (a, b) not in self._hom_cache:
            if not (self.has_object(a) and self.has_object(b)):
                return 0
            return self._hom_size_fn(a, b)
        return len(self.hom(a, b))

    def endpoints(self, m: str) -> tuple[str, str]:
        dom, cod = self._endpoints_fn(m)
        if not (self.has_object(dom) and self.has_object(cod)):
            raise StructuralError(f"{self.name}: morphism {m!r} is not in this category")
        return dom, cod

    def __contains__(self, m: object) -> bool:
        try:
            self.endpoints(m)  # type: ignore[arg-type]
        except (StructuralError, ValueError, KeyError, TypeError):
            return False
        return True

    def identity(self, a: str) -> str:
        if not self.has_object(a):
            raise StructuralError(f"{self.name}: no identity for object {a!r}")
        return self._identity_fn(a)

    def composite_or_none(self, g: str, f: str) -> str | None:
        if self.endpoints(f)[1] != self.endpoints(g)[0]:
            return None
        return self._compose_fn(g, f)

    def validate_structure(self) -> None:
        for a in self.objects:
            self.identity(a)

    def table_violations(self, report: ValidationReport) -> None:
        return None


# -- structural constructions ----------------------------------------------

PAIR_OPEN, PAIR_CLOSE = "⟨", "⟩"


def pair_id(x: str, y: str) -> str:
    return f"{PAIR_OPEN}{x},{y}{PAIR_CLOSE}"


def split_pair(pid: str) -> tuple[str, str]:
    if not (pid.startswith(PAIR_OPEN) and pid.endswith(PAIR_CLOSE)):
        raise StructuralError(f"{pid!r} is not a pair id")
    body = pid[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch == PAIR_OPEN:
            depth += 1
        elif ch == PAIR_CLOSE:
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1 :]
    raise StructuralError(f"{pid!r} is not a pair id")


class OppositeCategory(GeneratedCategory):
    """C^op: same ids, reversed endpoints, reversed composition."""

    def __init__(self, base: FiniteCategory):
        self.base = base
        super().__init__(
            base.objects,
            hom=lambda a, b: base.hom(b, a),
            endpoints=lambda m: tuple(reversed(base.endpoints(m))),
            identity=base.identity,
            compose=lambda g, f: base.compose(f, g),
            hom_size=lambda a, b: base.hom_size(b, a),
            name=f"{base.name}^op",
        )

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        return self.base.random_morphism(b, a, rng)

    def inverse(self, m: str) -> str | None:
        return self.base.inverse(m)


def opposite(c: FiniteCategory) -> FiniteCategory:
    """Return C^op; opposite(opposite(c)) is c itself."""
    if isinstance(c, OppositeCategory):
        return c.base
    return OppositeCategory(c)


class ProductCategory(GeneratedCategory):
    """C1 × C2 with pair ids ⟨x,y⟩ for objects and morphisms."""

    def __init__(self, first: FiniteCategory, second: FiniteCategory):
        self.first = first
        self.second = second

        def hom(a: str, b: str) -> list[str]:
            (a1, a2), (b1, b2) = split_pair(a), split_pair(b)
            return [pair_id(f, g) for f in first.hom(a1, b1) for g in second.hom(a2, b2)]

        def endpoints(m: str) -> tuple[str, str]:
            f, g = split_pair(m)
            (a1, b1), (a2, b2) = first.endpoints(f), second.endpoints(g)
            return pair_id(a1, a2), pair_id(b1, b2)

        def identity(a: str) -> str:
            a1, a2 = split_pair(a)
            return pair_id(first.identity(a1), second.identity(a2))

        def compose(g: str, f: str) -> str:
            (g1, g2), (f1, f2) = split_pair(g), split_pair(f)
            return pair_id(first.compose(g1, f1), second.compose(g2, f2))

        def hom_size(a: str, b: str) -> int:
            (a1, a2), (b1, b2) = split_pair(a), split_pair(b)
            return first.hom_size(a1, b1) * second.hom_size(a2, b2)

        super().__init__(
            [pair_id(x, y) for x in first.objects for y in second.objects],
            hom=hom,
            endpoints=endpoints,
            identity=identity,
            compose=compose,
            hom_size=hom_size,
            name=f"{first.name}×{second.name}",
        )

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        (a1, a2), (b1, b2) = split_pair(a), split_pair(b)
        f = self.first.random_morphism(a1, b1, rng)
        g = self.second.random_morphism(a2, b2, rng)
        if f is None or g is None:
            return None
        return pair_id(f, g)


def product(c1: FiniteCategory, c2: FiniteCategory) -> ProductCategory:
    return ProductCategory(c1, c2)


class Subcategory(GeneratedCategory):
    """Full subcategory on a subset of objects."""

    def __init__(self, base: FiniteCategory, objects: Iterable[str], name: str | None = None):
        self.base = base
        keep = [a for a in objects]
        for a in keep:
            if not base.has_object(a):
                raise StructuralError(f"{base.name}: unknown object {a!r}")
        super().__init__(
            keep,
            hom=base.hom,
            endpoints=base.endpoints,
            identity=base.identity,
            compose=base.compose,
            hom_size=base.hom_size,
            name=name or f"{base.name}|sub",
        )

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        return self.base.random_morphism(a, b, rng)

    def inverse(self, m: str) -> str | None:
        return self.base.inverse(m)


def full_subcategory(c: FiniteCategory, objects: Iterable[str], name: str | None = None) -> Subcategory:
    return Subcategory(c, objects, name)


def materialize(c: FiniteCategory, config: VolutConfig | None = None) -> FiniteCategory:
    """Copy any category into explicit tables, refusing beyond the morphism cap."""
    cfg = resolve(config)
    count = c.morphism_count()
    if count > cfg.cap:
        raise ResourceCapExceeded(f"materializing {c.name}", cfg.cap, count)
    obs = c.objects
    morphisms = [(m, a, b) for a in obs for b in obs for m in c.hom(a, b)]
    composition = {}
    for a, b, d in itertools.product(obs, repeat=3):
        for f in c.hom(a, b):
            for g in c.hom(b, d):
                composition[(g, f)] = c.compose(g, f)
    return FiniteCategory(
        obs, morphisms, {a: c.identity(a) for a in obs}, composition, name=c.name
    )


def same_category(c1: FiniteCategory, c2: FiniteCategory) -> bool:
    """Component-wise equality: objects, hom-sets, identities and composition."""
    if set(c1.objects) != set(c2.objects):
        return False
    obs = c1.objects
    for a in obs:
        if c1.identity(a) != c2.identity(a):
            return False
        for b in obs:
            if set(c1.hom(a, b)) != set(c2.hom(a, b)):
                return False
    for a, b, d in itertools.product(obs, repeat=3):
        for f in c1.hom(a, b):
            for g in c1.hom(b, d):
                if c1.compose(g, f) != c2.compose(g, f):
                    return False
    return True


# -- small named categories -------------------------------------------------


def poset_category(elements: Sequence[str], leq: Callable[[str, str], bool], name: str = "P") -> FiniteCategory:
    """Thin category with a morphism a<=b whenever leq(a, b)."""
    morphisms = [(f"{a}<={b}", a, b) for a in elements for b in elements if leq(a, b)]
    existing = {m for m, _, _ in morphisms}
    composition = {}
    for f, a, b in morphisms:
        for g, b2, c in morphisms:
            if b == b2:
                gf = f"{a}<={c}"
                if gf not in existing:
                    raise StructuralError(f"{name}: relation is not transitive at {a}, {b}, {c}")
                composition[(g, f)] = gf
    return FiniteCategory(
        elements, morphisms, {a: f"{a}<={a}" for a in elements}, composition, name=name
    )


def terminal_category() -> FiniteCategory:
    return poset_category(["*"], lambda a, b: True, name="1")


def walking_arrow() -> FiniteCategory:
    return chain_category(2, name="2")


def chain_category(n: int, name: str | None = None) -> FiniteCategory:
    elements = [str(i) for i in range(n)]
    return poset_category(elements, lambda a, b: int(a) <= int(b), name=name or f"[{n}]")


def discrete_category(n: int, name: str | None = None) -> FiniteCategory:
    elements = [str(i) for i in range(n)]
    return poset_category(elements, lambda a, b: a == b, name=name or f"disc{n}")


def free_category(
    objects: Sequence[str], edges: Sequence[tuple[str, str, str]], name: str = "Free"
) -> FiniteCategory:
    """Free category on an acyclic graph; paths are written diagrammatically as e1;e2."""
    out: dict[str, list[tuple[str, str]]] = {a: [] for a in objects}
    for eid, src, tgt in edges:
        out[src].append((eid, tgt))
    paths: list[tuple[tuple[str, ...], str, str]] = []

    def walk(start: str, current: str, trail: tuple[str, ...], depth: int) -> None:
        if depth > len(edges):
            raise StructuralError(f"{name}: graph has a cycle")
        paths.append((trail, start, current))
        for eid, tgt in out[current]:
            walk(start, tgt, trail + (eid,), depth + 1)

    for a in objects:
        walk(a, a, (), 0)

    def pid(trail: tuple[str, ...], a: str) -> str:
        return ";".join(trail) if trail else f"id_{a}"

    morphisms = [(pid(t, a), a, b) for t, a, b in paths]
    by_id = {pid(t, a): (t, a, b) for t, a, b in paths}
    composition = {}
    for f, (tf, a, b) in by_id.items():
        for g, (tg, b2, c) in by_id.items():
            if b == b2:
                composition[(g, f)] = pid(tf + tg, a)
    return FiniteCategory(objects, morphisms, {a: f"id_{a}" for a in objects}, composition, name=name)


def monoid_category(elements: Sequence[str], table: Mapping[tuple[str, str], str], unit: str, name: str = "M") -> FiniteCategory:
    """One-object category of a finite monoid; table[(g, f)] is the product g·f."""
    morphisms = [(e, "*", "*") for e in elements]
    return FiniteCategory(["*"], morphisms, {"*": unit}, dict(table), name=name)


def transformation_monoid(generators: Sequence[tuple[int, ...]], name: str = "M") -> FiniteCategory:
    """Monoid of maps on {0..n-1} generated under composition, as a one-object category."""
    n = len(generators[0]) if generators else 0
    unit = tuple(range(n))
    elements = [unit]
    seen = {unit}
    frontier = [unit]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = tuple(g[x[i]] for i in range(n))
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    ids = {e: "m" + "".join(str(v) for v in e) for e in elements}
    table = {}
    for g in elements:
        for f in elements:
            table[(ids[g], ids[f])] = ids[tuple(g[f[i]] for i in range(n))]
    return monoid_category([ids[e] for e in elements], table, ids[unit], name=name)


def random_category(rng: random.Random, max_objects: int = 4, max_morphisms: int = 12) -> FiniteCategory:
    """A random small category: a poset, a free category on a DAG or a transformation monoid."""
    for _ in range(200):
        kind = rng.choice(["poset", "free", "monoid"])
        n = rng.randint(1, max_objects)
        objects = [str(i) for i in range(n)]
        if kind == "poset":
            rel = {(a, a) for a in range(n)}
            for a in range(n):
                for b in range(a + 1, n):
                    if rng.random() < 0.5:
                        rel.add((a, b))
            changed = True
            while changed:
                changed = False
                for a, b in list(rel):
                    for b2, c in list(rel):
                        if b == b2 and (a, c) not in rel:
                            rel.add((a, c))
                            changed = True
            c = poset_category(objects, lambda x, y: (int(x), int(y)) in rel, name="rand-poset")
        elif kind == "free":
            edges = []
            for a in range(n):
                for b in range(a + 1, n):
                    for _ in range(rng.choice([0, 0, 1, 1, 2])):
                        edges.append((f"e{len(edges)}", str(a), str(b)))
            c = free_category(objects, edges, name="rand-free")
        else:
            size = rng.randint(1, 3)
            gens = [tuple(rng.randrange(size) for _ in range(size)) for _ in range(rng.randint(1, 2))]
            c = transformation_monoid(gens, name="rand-monoid")
        if c.morphism_count() <= max_morphisms:
            return c
    return terminal_category()


# -- functors -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Functor:
    """A functor between finite categories with an explicit variance flag."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str] | Callable[[str], str]
    variance: Variance = Variance.COVARIANT
    name: str = "F"

    @property
    def contravariant(self) -> bool:
        return self.variance is Variance.CONTRAVARIANT

    def ob(self, a: str) -> str:
        try:
            return self.object_map[a]
        except KeyError:
            raise StructuralError(f"functor {self.name}: no image for object {a!r}")

    def fmap(self, m: str) -> str:
        if callable(self.morphism_map):
            return self.morphism_map(m)
        try:
            return self.morphism_map[m]
        except KeyError:
            raise StructuralError(f"functor {self.name}: no image for morphism {m!r}")

    def morphism_table(self) -> dict[str, str]:
        return {m: self.fmap(m) for m in self.source.morphisms()}

    def with_morphism(self, m: str, image: str) -> Functor:
        """A copy with one morphism image replaced."""
        table = self.morphism_table()
        table[m] = image
        return Functor(self.source, self.target, dict(self.object_map), table, self.variance, self.name)


def identity_functor(c: FiniteCategory) -> Functor:
    return Functor(c, c, {a: a for a in c.objects}, lambda m: m, Variance.COVARIANT, f"id_{c.name}")


def compose_functors(g: Functor, f: Functor, name: str | None = None) -> Functor:
    """The composite g∘f; variances multiply."""
    if f.target is not g.source and not same_shape(f.target, g.source):
        raise StructuralError(f"cannot compose {g.name} after {f.name}: categories differ")
    return Functor(
        f.source,
        g.target,
        {a: g.ob(f.ob(a)) for a in f.source.objects},
        {m: g.fmap(f.fmap(m)) for m in f.source.morphisms()},
        f.variance * g.variance,
        name or f"{g.name}∘{f.name}",
    )


def same_shape(c1: FiniteCategory, c2: FiniteCategory) -> bool:
    """Same objects and the same morphism ids with the same endpoints."""
    if c1 is c2:
        return True
    if set(c1.objects) != set(c2.objects) or c1.morphism_count() != c2.morphism_count():
        return False
    return all(m in c2 and c2.endpoints(m) == c1.endpoints(m) for m in c1.morphisms())


def as_opposite(f: Functor) -> Functor:
    """F^op: the same assignment regarded between the opposite categories."""
    return Functor(
        opposite(f.source), opposite(f.target), f.object_map, f.morphism_map, f.variance, f"{f.name}^op"
    )


def enumerate_functors(
    source: FiniteCategory,
    target: FiniteCategory,
    variance: Variance = Variance.COVARIANT,
    limit: int | None = None,
) -> Iterator[Functor]:
    """All functors source → target, by backtracking over object and morphism images."""
    obs = source.objects
    non_identities = [m for m in source.morphisms() if not source.is_identity(m)]
    pairs = [(g, f, source.compose(g, f)) for f, g in composable_pairs(source)]
    produced = 0

    def image_hom(m: str, omap: dict[str, str]) -> tuple[str, ...]:
        a, b = source.endpoints(m)
        if variance is Variance.COVARIANT:
            return target.hom(omap[a], omap[b])
        return target.hom(omap[b], omap[a])

    def consistent(mmap: dict[str, str]) -> bool:
        for g, f, gf in pairs:
            if g in mmap and f in mmap and gf in mmap:
                if variance is Variance.COVARIANT:
                    expected = target.compose(mmap[g], mmap[f])
                else:
                    expected = target.compose(mmap[f], mmap[g])
                if expected != mmap[gf]:
                    return False
        return True

    for images in itertools.product(target.objects, repeat=len(obs)):
        omap = dict(zip(obs, images))
        base = {source.identity(a): target.identity(omap[a]) for a in obs}

        def extend(i: int, mmap: dict[str, str]) -> Iterator[dict[str, str]]:
            if i == len(non_identities):
                yield dict(mmap)
                return
            m = non_identities[i]
            for candidate in image_hom(m, omap):
                mmap[m] = candidate
                if consistent(mmap):
                    yield from extend(i + 1, mmap)
                del mmap[m]

        for mmap in extend(0, dict(base)):
            produced += 1
            if limit is not None and produced > limit:
                raise ResourceCapExceeded("functor enumeration", limit, produced)
            yield Functor(source, target, dict(omap), mmap, variance, f"F{produced - 1}")


# -- natural transformations ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class NatTrans:
    """A natural transformation source ⇒ target with components in the target category."""

    source: Functor
    target: Functor
    components: Mapping[str, str]
    name: str = "alpha"

    def __getitem__(self, a: str) -> str:
        try:
            return self.components[a]
        except KeyError:
            raise StructuralError(f"transformation {self.name}: no component at {a!r}")

    def with_component(self, a: str, m: str) -> NatTrans:
        components = dict(self.components)
        components[a] = m
        return NatTrans(self.source, self.target, components, self.name)


def identity_transformation(f: Functor) -> NatTrans:
    return NatTrans(f, f, {a: f.target.identity(f.ob(a)) for a in f.source.objects}, f"id_{f.name}")


def vertical_compose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """β•α with components β_a∘α_a."""
    cat = alpha.source.target
    return NatTrans(
        alpha.source,
        beta.target,
        {a: cat.compose(beta[a], alpha[a]) for a in alpha.source.source.objects},
        f"{beta.name}•{alpha.name}",
    )


def whisker_left(f: Functor, alpha: NatTrans) -> NatTrans:
    """F∘α; a contravariant F reverses the direction."""
    src = compose_functors(f, alpha.source)
    tgt = compose_functors(f, alpha.target)
    components = {a: f.fmap(alpha[a]) for a in alpha.source.source.objects}
    if f.contravariant:
        src, tgt = tgt, src
    return NatTrans(src, tgt, components, f"{f.name}{alpha.name}")


def whisker_right(alpha: NatTrans, f: Functor) -> NatTrans:
    """α∘F with components α_{F(c)}."""
    return NatTrans(
        compose_functors(alpha.source, f),
        compose_functors(alpha.target, f),
        {c: alpha[f.ob(c)] for c in f.source.objects},
        f"{alpha.name}{f.name}",
    )


# -- checkers -------------------------------------------------------------------


def _sample_triples(c: FiniteCategory, rng: random.Random, count: int) -> Iterator[tuple[str, str, str]]:
    obs = c.objects
    produced = 0
    attempts = 0
    while produced < count and attempts < 50 * count:
        attempts += 1
        a, b, d, e = (rng.choice(obs) for _ in range(4))
        f = c.random_morphism(a, b, rng)
        g = c.random_morphism(b, d, rng)
        h = c.random_morphism(d, e, rng)
        if f is None or g is None or h is None:
            continue
        produced += 1
        yield f, g, h


def _sample_pairs(c: FiniteCategory, rng: random.Random, count: int) -> Iterator[tuple[str, str]]:
    for f, g, _ in _sample_triples(c, rng, count):
        yield f, g


def composable_pairs(c: FiniteCategory) -> Iterator[tuple[str, str]]:
    """All (f, g) with cod(f) = dom(g)."""
    for a, b, d in itertools.product(c.objects, repeat=3):
        for f in c.hom(a, b):
            for g in c.hom(b, d):
                yield f, g


def check_category(c: FiniteCategory, config: VolutConfig | None = None) -> ValidationReport:
    """Check identities, unit laws, composability and associativity.

    Raises:
        StructuralError: if the tables mention unknown ids
    """
    cfg = resolve(config)
    c.validate_structure()
    report = ValidationReport(f"category {c.name}")
    for a in c.objects:
        i = c.identity(a)
        if c.endpoints(i) != (a, a):
            report.add("identity", f"identity of {a} is not an endomorphism of {a}", a)
    c.table_violations(report)
    for f in c.morphisms():
        a, b = c.endpoints(f)
        report.checked += 1
        left = c.composite_or_none(c.identity(b), f)
        right = c.composite_or_none(f, c.identity(a))
        if left is not None and left != f:
            report.add("unit", f"id_{b}∘{f} = {left}", f)
        if right is not None and right != f:
            report.add("unit", f"{f}∘id_{a} = {right}", f)

    def check_triple(f: str, g: str, h: str) -> None:
        gf = c.composite_or_none(g, f)
        hg = c.composite_or_none(h, g)
        if gf is None or hg is None:
            return
        left = c.composite_or_none(h, gf)
        right = c.composite_or_none(hg, f)
        if left is None or right is None:
            return
        report.checked += 1
        if left != right:
            report.add("associativity", f"{h}∘({g}∘{f}) != ({h}∘{g})∘{f}", [h, g, f])

    if c.triple_count() <= cfg.check_cap:
        for f, g in composable_pairs(c):
            for d in c.objects:
                for h in c.hom(c.cod(g), d):
                    check_triple(f, g, h)
    else:
        logger.warning(f"{c.name}: sampling {cfg.samples} triples for associativity")
        report.sampled = True
        for f, g, h in _sample_triples(c, random.Random(cfg.seed), cfg.samples):
            check_triple(f, g, h)
    return report


def check_functor(f: Functor, config: VolutConfig | None = None) -> ValidationReport:
    """Check endpoints, identities and composition, respecting variance.

    Raises:
        StructuralError: if a component is missing
    """
    cfg = resolve(config)
    src, tgt = f.source, f.target
    report = ValidationReport(f"functor {f.name}")
    for a in src.objects:
        if not tgt.has_object(f.ob(a)):
            raise StructuralError(f"functor {f.name}: {a} maps to unknown object {f.ob(a)!r}")
    for m in src.morphisms():
        a, b = src.endpoints(m)
        image = f.fmap(m)
        expected = (f.ob(b), f.ob(a)) if f.contravariant else (f.ob(a), f.ob(b))
        report.checked += 1
        if image not in tgt or tgt.endpoints(image) != expected:
            report.add("endpoints", f"{f.name}({m}) = {image} has the wrong endpoints", m)
    for a in src.objects:
        if f.fmap(src.identity(a)) != tgt.identity(f.ob(a)):
            report.add("identity", f"{f.name}(id_{a}) is not an identity", a)
    if not report.ok:
        return report

    def check_pair(m: str, g: str) -> None:
        report.checked += 1
        lhs = f.fmap(src.compose(g, m))
        if f.contravariant:
            rhs = tgt.compose(f.fmap(m), f.fmap(g))
        else:
            rhs = tgt.compose(f.fmap(g), f.fmap(m))
        if lhs != rhs:
            report.add("composition", f"{f.name} does not preserve {g}∘{m}", [g, m])

    if src.pair_count() <= cfg.check_cap:
        for m, g in composable_pairs(src):
            check_pair(m, g)
    else:
        logger.warning(f"{f.name}: sampling {cfg.samples} composable pairs")
        report.sampled = True
        for m, g in _sample_pairs(src, random.Random(cfg.seed), cfg.samples):
            check_pair(m, g)
    return report


def check_nattrans(t: NatTrans, config: VolutConfig | None = None) -> ValidationReport:
    """Check every naturality square.

    Raises:
        StructuralError: if the endpoints disagree or a component lies outside its hom-set
    """
    F, G = t.source, t.target
    if F.variance is not G.variance:
        raise StructuralError(f"transformation {t.name}: endpoint functors differ in variance")
    if not (same_shape(F.source, G.source) and same_shape(F.target, G.target)):
        raise StructuralError(f"transformation {t.name}: endpoint functors differ in categories")
    src, tgt = F.source, F.target
    for a in src.objects:
        comp = t[a]
        if comp not in tgt or tgt.endpoints(comp) != (F.ob(a), G.ob(a)):
            raise StructuralError(
                f"transformation {t.name}: component at {a} is not in Hom({F.ob(a)}, {G.ob(a)})"
            )
    report = ValidationReport(f"transformation {t.name}")
    for m in src.morphisms():
        a, b = src.endpoints(m)
        report.checked += 1
        if F.contravariant:
            lhs = tgt.compose(t[a], F.fmap(m))
            rhs = tgt.compose(G.fmap(m), t[b])
        else:
            lhs = tgt.compose(G.fmap(m), t[a])
            rhs = tgt.compose(t[b], F.fmap(m))
        if lhs != rhs:
            report.add("naturality", f"square at {m}: {a}→{b} does not commute", m)
    return report


# -- functor categories ---------------------------------------------------------


class FunctorCategory(FiniteCategory):
    """[C1, C2] with functors as objects and natural transformations as morphisms."""

    def __init__(
        self,
        source: FiniteCategory,
        target: FiniteCategory,
        functors: dict[str, Functor],
        transformations: dict[str, NatTrans],
        identity: dict[str, str],
        composition: dict[tuple[str, str], str],
    ):
        morphisms = [
            (tid, _functor_id(functors, t.source), _functor_id(functors, t.target))
            for tid, t in transformations.items()
        ]
        super().__init__(
            list(functors), morphisms, identity, composition, name=f"[{source.name},{target.name}]"
        )
        self.source = source
        self.target = target
        self.functors = functors
        self.transformations = transformations

    def functor_id(self, f: Functor) -> str:
        return _functor_id(self.functors, f)

    def find_functor(self, object_map: Mapping[str, str], morphism_map: Mapping[str, str]) -> str:
        for fid, f in self.functors.items():
            if dict(f.object_map) == dict(object_map) and all(
                f.fmap(m) == morphism_map[m] for m in self.source.morphisms()
            ):
                return fid
        raise StructuralError(f"{self.name}: no such functor")

    def find_transformation(self, src: str, tgt: str, components: Mapping[str, str]) -> str:
        for tid in self.hom(src, tgt):
            t = self.transformations[tid]
            if all(t[a] == components[a] for a in self.source.objects):
                return tid
        raise StructuralError(f"{self.name}: no such transformation {src} ⇒ {tgt}")


def _functor_id(functors: Mapping[str, Functor], f: Functor) -> str:
    for fid, g in functors.items():
        if g is f:
            return fid
    raise StructuralError(f"functor {f.name} is not an object here")


def enumerate_transformations(f: Functor, g: Functor) -> Iterator[dict[str, str]]:
    """All component families f ⇒ g passing naturality."""
    src, tgt = f.source, f.target
    obs = src.objects
    morphisms = list(src.morphisms())

    def ok(comps: dict[str, str]) -> bool:
        for m in morphisms:
            a, b = src.endpoints(m)
            if a in comps and b in comps:
                if f.contravariant:
                    lhs = tgt.compose(comps[a], f.fmap(m))
                    rhs = tgt.compose(g.fmap(m), comps[b])
                else:
                    lhs = tgt.compose(g.fmap(m), comps[a])
                    rhs = tgt.compose(comps[b], f.fmap(m))
                if lhs != rhs:
                    return False
        return True

    def extend(i: int, comps: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(obs):
            yield dict(comps)
            return
        a = obs[i]
        for candidate in tgt.hom(f.ob(a), g.ob(a)):
            comps[a] = candidate
            if ok(comps):
                yield from extend(i + 1, comps)
            del comps[a]

    yield from extend(0, {})


def functor_category(
    c1: FiniteCategory, c2: FiniteCategory, config: VolutConfig | None = None
) -> FunctorCategory:
    """Materialize [C1, C2].

    Raises:
        ResourceCapExceeded: if the number of transformations exceeds the morphism cap
    """
    cfg = resolve(config)
    functors: dict[str, Functor] = {}
    for i, f in enumerate(enumerate_functors(c1, c2, limit=cfg.cap)):
        functors[f"F{i}"] = Functor(f.source, f.target, f.object_map, f.morphism_map, f.variance, f"F{i}")
    transformations: dict[str, NatTrans] = {}
    identity: dict[str, str] = {}
    hom: dict[tuple[str, str], list[str]] = {}
    for fid, f in functors.items():
        for gid, g in functors.items():
            for k, comps in enumerate(enumerate_transformations(f, g)):
                tid = f"{fid}=>{gid}#{k}"
                transformations[tid] = NatTrans(f, g, comps, tid)
                hom.setdefault((fid, gid), []).append(tid)
                if len(transformations) > cfg.cap:
                    raise ResourceCapExceeded(
                        f"functor category [{c1.name},{c2.name}]", cfg.cap, len(transformations)
                    )
                if fid == gid and all(comps[a] == c2.identity(f.ob(a)) for a in c1.objects):
                    identity[fid] = tid
    composition: dict[tuple[str, str], str] = {}
    lookup = {
        (fid, gid): {tuple(transformations[t][a] for a in c1.objects): t for t in ts}
        for (fid, gid), ts in hom.items()
    }
    for (fid, gid), alphas in hom.items():
        for hid in functors:
            for beta_id in hom.get((gid, hid), []):
                for alpha_id in alphas:
                    alpha, beta = transformations[alpha_id], transformations[beta_id]
                    key = tuple(c2.compose(beta[a], alpha[a]) for a in c1.objects)
                    composition[(beta_id, alpha_id)] = lookup[(fid, hid)][key]
    logger.info(
        f"functor category [{c1.name},{c2.name}]: {len(functors)} functors, "
        f"{len(transformations)} transformations"
    )
    return FunctorCategory(c1, c2, functors, transformations, identity, composition)
