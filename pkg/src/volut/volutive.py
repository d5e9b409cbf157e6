"""
(Lax) volutive structures and the categories built from them.

A volutive structure on a finite category is a contravariant endofunctor d
together with a transformation eta: id ⇒ d∘d. It is lax when it only satisfies
d(eta_a)∘eta_{d(a)} = id, and strict when in addition every eta_a is
invertible with d(eta_a) = eta_{d(a)}^{-1}.

Hermitian fixed points (a, theta: a → d(a)) with theta = d(theta)∘eta_a and the
lax isometries between them form LaxHerm; the honest (invertible theta) ones
carry a dagger given by theta_a^{-1}∘d(X)∘theta_b.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from volut.config import VolutConfig, resolve
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError, ValidationReport
from volut.fincat import (
    FiniteCategory,
    Functor,
    FunctorCategory,
    GeneratedCategory,
    NatTrans,
    Variance,
    check_functor,
    check_nattrans,
    compose_functors,
    composable_pairs,
    full_subcategory,
    functor_category,
    identity_functor,
    pair_id,
    product,
    split_pair,
    terminal_category,
    walking_arrow,
)

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    STRICT = "strict"
    LAX = "lax"


@dataclass(frozen=True, eq=False)
class VolutiveStructure:
    """A contravariant endofunctor d with eta: id ⇒ d∘d on ``base``."""

    base: FiniteCategory
    d: Functor
    eta: NatTrans
    kind: Kind = Kind.LAX
    name: str = "v"

    @classmethod
    def from_maps(
        cls,
        base: FiniteCategory,
        d_objects: Mapping[str, str],
        d_morphisms: Mapping[str, str],
        eta: Mapping[str, str],
        kind: Kind = Kind.LAX,
        name: str = "v",
    ) -> VolutiveStructure:
        d = Functor(base, base, dict(d_objects), dict(d_morphisms), Variance.CONTRAVARIANT, "d")
        dd = compose_functors(d, d, "d∘d")
        return cls(base, d, NatTrans(identity_functor(base), dd, dict(eta), "eta"), kind, name)

    def dual(self, a: str) -> str:
        return self.d.ob(a)

    def dual_morphism(self, m: str) -> str:
        return self.d.fmap(m)

    def eta_at(self, a: str) -> str:
        return self.eta[a]

    def d_table(self) -> dict[str, str]:
        return self.d.morphism_table()

    def with_eta(self, a: str, m: str) -> VolutiveStructure:
        eta = dict(self.eta.components)
        eta[a] = m
        return VolutiveStructure.from_maps(
            self.base, self.d.object_map, self.d_table(), eta, self.kind, self.name
        )

    def with_d(self, m: str, image: str) -> VolutiveStructure:
        table = self.d_table()
        table[m] = image
        return VolutiveStructure.from_maps(
            self.base, self.d.object_map, table, self.eta.components, self.kind, self.name
        )

    def as_kind(self, kind: Kind) -> VolutiveStructure:
        return VolutiveStructure(self.base, self.d, self.eta, kind, self.name)


def _check_endpoints(v: VolutiveStructure) -> None:
    base, d, eta = v.base, v.d, v.eta
    if not d.contravariant:
        raise StructuralError(f"{v.name}: d must be contravariant")
    for a in base.objects:
        if not base.has_object(d.ob(a)):
            raise StructuralError(f"{v.name}: d({a}) is not an object of {base.name}")
        if eta.source.ob(a) != a or eta.target.ob(a) != d.ob(d.ob(a)):
            raise StructuralError(f"{v.name}: eta is not a transformation id → d² at {a}")
    if eta.target.contravariant or eta.source.contravariant:
        raise StructuralError(f"{v.name}: eta is not a transformation id → d²")


def check_volutive(
    v: VolutiveStructure, kind: Kind | str | None = None, config: VolutConfig | None = None
) -> ValidationReport:
    """Check functoriality of d, naturality of eta and the coherence for ``kind``.

    Raises:
        StructuralError: if eta does not go from the identity to d∘d
    """
    kind = Kind(kind) if kind is not None else v.kind
    _check_endpoints(v)
    base, d, eta = v.base, v.d, v.eta
    report = ValidationReport(f"volutive {v.name} ({kind.value})")
    report.merge(check_functor(d, config))
    report.merge(check_nattrans(eta, config))
    for a in base.objects:
        da = d.ob(a)
        report.checked += 1
        if base.compose(d.fmap(eta[a]), eta[da]) != base.identity(da):
            report.add("lax-coherence", f"d(eta_{a})∘eta_{da} is not the identity", a)
        if kind is Kind.STRICT:
            inverse = base.inverse(eta[da])
            if not base.is_iso(eta[a]):
                report.add("invertibility", f"eta_{a} is not invertible", a)
            if inverse is None or d.fmap(eta[a]) != inverse:
                report.add("strict-coherence", f"d(eta_{a}) is not eta_{da}^-1", a)
    return report


def terminal_volutive() -> VolutiveStructure:
    c = terminal_category()
    return VolutiveStructure.from_maps(
        c, {"*": "*"}, {"*<=*": "*<=*"}, {"*": "*<=*"}, Kind.STRICT, "terminal"
    )


def walking_arrow_volutive() -> VolutiveStructure:
    """The swap duality 0 ↔ 1 on the walking arrow."""
    c = walking_arrow()
    return VolutiveStructure.from_maps(
        c,
        {"0": "1", "1": "0"},
        {"0<=0": "1<=1", "1<=1": "0<=0", "0<=1": "0<=1"},
        {"0": "0<=0", "1": "1<=1"},
        Kind.STRICT,
        "arrow",
    )


# -- hermitian fixed points ----------------------------------------------------


@dataclass(frozen=True)
class HermPoint:
    """A lax hermitian fixed point (obj, theta: obj → d(obj))."""

    obj: str
    theta: str
    honest: bool

    @property
    def key(self) -> str:
        return f"{self.obj}¦{self.theta}"


def is_hermitian(v: VolutiveStructure, a: str, theta: str) -> bool:
    base = v.base
    return base.compose(v.d.fmap(theta), v.eta[a]) == theta


def hermitian_points(v: VolutiveStructure, config: VolutConfig | None = None) -> list[HermPoint]:
    """All (a, theta) with theta = d(theta)∘eta_a, in canonical order."""
    cfg = resolve(config)
    base = v.base
    budget = sum(base.hom_size(a, v.dual(a)) for a in base.objects)
    if budget > cfg.search_cap:
        raise ResourceCapExceeded("hermitian point enumeration", cfg.search_cap, budget)
    points = []
    for a in base.objects:
        for theta in base.hom(a, v.dual(a)):
            if is_hermitian(v, a, theta):
                points.append(HermPoint(a, theta, base.is_iso(theta)))
    logger.info(f"{v.name}: {len(points)} lax hermitian fixed points")
    return points


def is_lax_isometry(v: VolutiveStructure, p: HermPoint, q: HermPoint, x: str) -> bool:
    """Whether d(x)∘theta_q∘x = theta_p.

    Raises:
        StructuralError: if x is not a morphism p.obj → q.obj
    """
    base = v.base
    if base.endpoints(x) != (p.obj, q.obj):
        raise StructuralError(f"{x} is not a morphism {p.obj} → {q.obj}")
    return base.compose_all(v.d.fmap(x), q.theta, x) == p.theta


SEP = "‖"


class HermCategory(GeneratedCategory):
    """Category over hermitian points; a morphism is a base morphism tagged with its points."""

    def __init__(
        self,
        v: VolutiveStructure,
        points: Iterable[HermPoint],
        hom_filter=None,
        name: str = "Herm",
    ):
        self.structure = v
        self.points = {p.key: p for p in points}
        base = v.base
        self._filter = hom_filter
        self._allowed: dict[tuple[str, str], frozenset[str]] = {}

        def hom(p: str, q: str) -> list[str]:
            pp, qq = self.points[p], self.points[q]
            return [self.tag(x, p, q) for x in self._base_hom(pp, qq)]

        def endpoints(m: str) -> tuple[str, str]:
            x, p, q = self.untag(m)
            if p not in self.points or q not in self.points:
                raise StructuralError(f"{self.name}: unknown point in {m!r}")
            pp, qq = self.points[p], self.points[q]
            if base.endpoints(x) != (pp.obj, qq.obj) or not self._admits(pp, qq, x):
                raise StructuralError(f"{self.name}: {m!r} is not a morphism here")
            return p, q

        def identity(p: str) -> str:
            return self.tag(base.identity(self.points[p].obj), p, p)

        def compose(g: str, f: str) -> str:
            y, q, r = self.untag(g)
            x, p, _ = self.untag(f)
            composite = self.tag(base.compose(y, x), p, r)
            if self._filter is not None:
                endpoints(composite)
            return composite

        def hom_size(p: str, q: str) -> int:
            if self._filter is not None:
                return len(self.hom(p, q))
            return base.hom_size(self.points[p].obj, self.points[q].obj)

        super().__init__(
            list(self.points),
            hom=hom,
            endpoints=endpoints,
            identity=identity,
            compose=compose,
            hom_size=hom_size,
            name=name,
        )

    def _base_hom(self, p: HermPoint, q: HermPoint) -> list[str]:
        hom = self.structure.base.hom(p.obj, q.obj)
        if self._filter is None:
            return list(hom)
        return [x for x in hom if self._filter(p, q, x)]

    def _admits(self, p: HermPoint, q: HermPoint, x: str) -> bool:
        if self._filter is None:
            return True
        key = (p.key, q.key)
        if key not in self._allowed:
            self._allowed[key] = frozenset(self._base_hom(p, q))
        return x in self._allowed[key]

    @staticmethod
    def tag(x: str, p: str, q: str) -> str:
        return f"{x}{SEP}{p}{SEP}{q}"

    @staticmethod
    def untag(m: str) -> tuple[str, str, str]:
        parts = m.rsplit(SEP, 2)
        if len(parts) != 3:
            raise StructuralError(f"{m!r} is not a hermitian-point morphism")
        return parts[0], parts[1], parts[2]

    def underlying(self, m: str) -> str:
        return self.untag(m)[0]

    def random_morphism(self, p: str, q: str, rng: random.Random) -> str | None:
        if self._filter is not None:
            return super().random_morphism(p, q, rng)
        x = self.structure.base.random_morphism(self.points[p].obj, self.points[q].obj, rng)
        return None if x is None else self.tag(x, p, q)


def laxherm_category(v: VolutiveStructure, config: VolutConfig | None = None) -> HermCategory:
    """LaxHerm: lax hermitian fixed points and the lax isometries between them."""
    cfg = resolve(config)
    points = hermitian_points(v, cfg)
    base = v.base
    candidates = sum(base.hom_size(p.obj, q.obj) for p in points for q in points)
    if candidates > cfg.cap * 50:
        raise ResourceCapExceeded(f"LaxHerm of {v.name}", cfg.cap * 50, candidates)
    category = HermCategory(
        v, points, hom_filter=lambda p, q, x: is_lax_isometry(v, p, q, x), name=f"LaxHerm({v.name})"
    )
    count = category.morphism_count()
    if count > cfg.cap:
        raise ResourceCapExceeded(f"LaxHerm of {v.name}", cfg.cap, count)
    return category


def check_isometry_closure(h: HermCategory, config: VolutConfig | None = None) -> ValidationReport:
    """Re-check that composites of enumerated lax isometries are enumerated."""
    report = ValidationReport(f"isometry closure {h.name}")
    v = h.structure
    for f, g in composable_pairs(h):
        x, p, _ = h.untag(f)
        y, _, r = h.untag(g)
        composite = v.base.compose(y, x)
        report.checked += 1
        if composite not in h._base_hom(h.points[p], h.points[r]):
            report.add("closure", f"{y}∘{x} is not a lax isometry {p} → {r}", [g, f])
    return report


# -- dagger categories -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DaggerCategory:
    """Honest hermitian points of a volutive structure with † = theta_a^-1∘d(X)∘theta_b."""

    base: HermCategory
    dagger: Functor
    structure: VolutiveStructure

    def apply(self, m: str) -> str:
        return self.dagger.fmap(m)

    def lift(self, x: str, p: str, q: str) -> str:
        """The base morphism x read between the points with keys p and q.

        Raises:
            StructuralError: if x does not run between the points' objects
        """
        m = self.base.tag(x, p, q)
        self.base.endpoints(m)
        return m


def dagger_category(v: VolutiveStructure, config: VolutConfig | None = None) -> DaggerCategory:
    points = [p for p in hermitian_points(v, config) if p.honest]
    herm = HermCategory(v, points, name=f"Dagger({v.name})")
    base = v.base
    inverses = {p.key: base.inverse(p.theta) for p in points}

    def dagger(m: str) -> str:
        x, p, q = herm.untag(m)
        underlying = base.compose_all(inverses[p], v.d.fmap(x), herm.points[q].theta)
        return herm.tag(underlying, q, p)

    functor = Functor(
        herm, herm, {k: k for k in herm.objects}, dagger, Variance.CONTRAVARIANT, "dagger"
    )
    logger.info(f"{v.name}: dagger category on {len(points)} honest points")
    return DaggerCategory(herm, functor, v)


def check_dagger(dc: DaggerCategory, config: VolutConfig | None = None) -> ValidationReport:
    """Identity on objects, †(id) = id, †† = id and †(g∘f) = †(f)∘†(g)."""
    cfg = resolve(config)
    c, dag = dc.base, dc.dagger
    report = ValidationReport(f"dagger {c.name}")
    for p in c.objects:
        if dag.ob(p) != p:
            report.add("objects", f"† moves {p}", p)
        if dag.fmap(c.identity(p)) != c.identity(p):
            report.add("identity", f"†(id_{p}) is not the identity", p)
    rng = random.Random(cfg.seed)
    if c.morphism_count() <= cfg.check_cap:
        morphisms = list(c.morphisms())
    else:
        report.sampled = True
        morphisms = []
        for _ in range(cfg.samples):
            p, q = rng.choice(c.objects), rng.choice(c.objects)
            m = c.random_morphism(p, q, rng)
            if m is not None:
                morphisms.append(m)
    for m in morphisms:
        report.checked += 1
        back = dag.fmap(m)
        if c.endpoints(back) != tuple(reversed(c.endpoints(m))):
            report.add("endpoints", f"†({m}) has the wrong endpoints", m)
        elif dag.fmap(back) != m:
            report.add("involution", f"††({m}) != {m}", m)
    report.merge(check_functor(dag, cfg))
    return report


def is_isometry(dc: DaggerCategory, x: str) -> bool:
    c = dc.base
    p, _ = c.endpoints(x)
    return c.compose(dc.apply(x), x) == c.identity(p)


def is_unitary(dc: DaggerCategory, x: str) -> bool:
    c = dc.base
    _, q = c.endpoints(x)
    return is_isometry(dc, x) and c.compose(x, dc.apply(x)) == c.identity(q)


# -- constructions ---------------------------------------------------------------


def shift_structure(v: VolutiveStructure, k: int, config: VolutConfig | None = None) -> VolutiveStructure:
    """d_k = (d∘d)^k∘d with eta_k the composite of 2k+1 eta steps id ⇒ d_k∘d_k.

    Raises:
        ResourceCapExceeded: when the functor power is too large to tabulate
    """
    if k < 0:
        raise ValueError("shift must be non-negative")
    if k == 0:
        return v
    cfg = resolve(config)
    base = v.base
    power = 2 * k + 1
    work = base.morphism_count() * power
    if work > cfg.search_cap:
        raise ResourceCapExceeded(f"shift {k} of {v.name}", cfg.search_cap, work)

    def d_pow(x: str, n: int, on_objects: bool) -> str:
        for _ in range(n):
            x = v.dual(x) if on_objects else v.dual_morphism(x)
        return x

    objects = {a: d_pow(a, power, True) for a in base.objects}
    morphisms = {m: d_pow(m, power, False) for m in base.morphisms()}
    eta = {}
    for a in base.objects:
        component = v.eta[a]
        current = v.dual(v.dual(a))
        for _ in range(2 * k):
            component = base.compose(v.eta[current], component)
            current = v.dual(v.dual(current))
        eta[a] = component
    return VolutiveStructure.from_maps(base, objects, morphisms, eta, v.kind, f"{v.name}[{k}]")


def product_volutive(v1: VolutiveStructure, v2: VolutiveStructure) -> VolutiveStructure:
    c = product(v1.base, v2.base)
    objects = {pair_id(a, b): pair_id(v1.dual(a), v2.dual(b)) for a in v1.base.objects for b in v2.base.objects}

    def d_morphism(m: str) -> str:
        f, g = split_pair(m)
        return pair_id(v1.dual_morphism(f), v2.dual_morphism(g))

    morphisms = {m: d_morphism(m) for m in c.morphisms()}
    eta = {
        pair_id(a, b): pair_id(v1.eta[a], v2.eta[b]) for a in v1.base.objects for b in v2.base.objects
    }
    kind = Kind.STRICT if v1.kind is Kind.STRICT and v2.kind is Kind.STRICT else Kind.LAX
    return VolutiveStructure.from_maps(c, objects, morphisms, eta, kind, f"{v1.name}×{v2.name}")


def functor_cat_volutive(
    v1: VolutiveStructure, v2: VolutiveStructure, config: VolutConfig | None = None
) -> VolutiveStructure:
    """The structure on [C1, C2] with d(F) = d2∘F∘d1 and eta_F = eta2 F d1² ∘ F(eta1)."""
    fc: FunctorCategory = functor_category(v1.base, v2.base, config)
    c1, c2 = v1.base, v2.base
    morphisms_c1 = list(c1.morphisms())
    index = {
        (tuple(f.ob(a) for a in c1.objects), tuple(f.fmap(m) for m in morphisms_c1)): fid
        for fid, f in fc.functors.items()
    }

    def dual_functor(fid: str) -> str:
        f = fc.functors[fid]
        key = (
            tuple(v2.dual(f.ob(v1.dual(a))) for a in c1.objects),
            tuple(v2.dual_morphism(f.fmap(v1.dual_morphism(m))) for m in morphisms_c1),
        )
        try:
            return index[key]
        except KeyError:
            raise StructuralError(f"d({fid}) is not a functor {c1.name} → {c2.name}")

    d_objects = {fid: dual_functor(fid) for fid in fc.objects}
    d_morphisms = {}
    for tid, t in fc.transformations.items():
        src, tgt = fc.functor_id(t.source), fc.functor_id(t.target)
        components = {a: v2.dual_morphism(t[v1.dual(a)]) for a in c1.objects}
        d_morphisms[tid] = fc.find_transformation(d_objects[tgt], d_objects[src], components)
    eta = {}
    for fid, f in fc.functors.items():
        components = {}
        for a in c1.objects:
            dda = v1.dual(v1.dual(a))
            components[a] = c2.compose(v2.eta[f.ob(dda)], f.fmap(v1.eta[a]))
        eta[fid] = fc.find_transformation(fid, d_objects[d_objects[fid]], components)
    kind = Kind.STRICT if v1.kind is Kind.STRICT and v2.kind is Kind.STRICT else Kind.LAX
    return VolutiveStructure.from_maps(fc, d_objects, d_morphisms, eta, kind, f"[{v1.name},{v2.name}]")


def reflexive_subcategory(v: VolutiveStructure) -> VolutiveStructure:
    """Full subcategory on objects with invertible eta, as a strict structure."""
    base = v.base
    keep = [a for a in base.objects if base.is_iso(v.eta[a])]
    dropped = [a for a in base.objects if a not in keep]
    if dropped:
        logger.info(f"{v.name}: dropping non-reflexive objects {dropped}")
    for a in keep:
        if v.dual(a) not in keep:
            raise StructuralError(f"{v.name}: d({a}) is not reflexive although {a} is")
    sub = full_subcategory(base, keep, name=f"{base.name}^refl")
    return VolutiveStructure.from_maps(
        sub,
        {a: v.dual(a) for a in keep},
        {m: v.dual_morphism(m) for m in sub.morphisms()},
        {a: v.eta[a] for a in keep},
        Kind.STRICT,
        f"{v.name}^refl",
    )


# -- lax volutive functors ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LaxVolFunctor:
    """A functor F with alpha_a: F(d(a)) → d'(F(a)) in the target category."""

    functor: Functor
    source: VolutiveStructure
    target: VolutiveStructure
    alpha: Mapping[str, str]
    name: str = "F"


def identity_laxvol_functor(v: VolutiveStructure) -> LaxVolFunctor:
    base = v.base
    return LaxVolFunctor(
        identity_functor(base), v, v, {a: base.identity(v.dual(a)) for a in base.objects}, "id"
    )


def inclusion_laxvol_functor(sub: VolutiveStructure, v: VolutiveStructure) -> LaxVolFunctor:
    """Inclusion of a full substructure (such as the reflexive part) with identity alpha."""
    base = sub.base
    f = Functor(base, v.base, {a: a for a in base.objects}, lambda m: m, Variance.COVARIANT, "incl")
    return LaxVolFunctor(f, sub, v, {a: v.base.identity(v.dual(a)) for a in base.objects}, "incl")


def check_laxvol_functor(f: LaxVolFunctor, config: VolutConfig | None = None) -> ValidationReport:
    """Functoriality, naturality of alpha and compatibility with eta.

    Raises:
        StructuralError: if an alpha component lies outside Hom(F(d a), d'(F a))
    """
    F, v, w = f.functor, f.source, f.target
    c, c2 = v.base, w.base
    report = ValidationReport(f"lax volutive functor {f.name}")
    report.merge(check_functor(F, config))
    for a in c.objects:
        comp = f.alpha.get(a)
        expected = (F.ob(v.dual(a)), w.dual(F.ob(a)))
        if comp is None or comp not in c2 or c2.endpoints(comp) != expected:
            raise StructuralError(f"{f.name}: alpha_{a} is not a morphism {expected[0]} → {expected[1]}")
    for x in c.morphisms():
        a, b = c.endpoints(x)
        report.checked += 1
        lhs = c2.compose(f.alpha[a], F.fmap(v.dual_morphism(x)))
        rhs = c2.compose(w.dual_morphism(F.fmap(x)), f.alpha[b])
        if lhs != rhs:
            report.add("naturality", f"alpha is not natural at {x}", x)
    for a in c.objects:
        report.checked += 1
        lhs = c2.compose(f.alpha[v.dual(a)], F.fmap(v.eta[a]))
        rhs = c2.compose(w.dual_morphism(f.alpha[a]), w.eta[F.ob(a)])
        if lhs != rhs:
            report.add("compatibility", f"alpha and eta are incompatible at {a}", a)
    return report


def check_laxvol_transformation(
    xi: NatTrans, f1: LaxVolFunctor, f2: LaxVolFunctor, config: VolutConfig | None = None
) -> ValidationReport:
    """xi: F1 ⇒ F2 is volutive when d'(xi_a)∘alpha2_a∘xi_{d(a)} = alpha1_a."""
    report = check_nattrans(xi, config)
    v, w = f1.source, f1.target
    c2 = w.base
    for a in v.base.objects:
        report.checked += 1
        lhs = c2.compose_all(w.dual_morphism(xi[a]), f2.alpha[a], xi[v.dual(a)])
        if lhs != f1.alpha[a]:
            report.add("volutive-transformation", f"equation fails at {a}", a)
    return report


def laxherm_pushforward(f: LaxVolFunctor, config: VolutConfig | None = None) -> Functor:
    """The induced functor LaxHerm(source) → LaxHerm(target).

    Points map to (F(a), alpha_a∘F(theta)); morphisms map through F. Both
    assignments are re-verified.

    Raises:
        PreconditionError: if the lax volutive functor fails its checks
    """
    report = check_laxvol_functor(f, config)
    if not report.ok:
        raise PreconditionError(f"{f.name} is not a lax volutive functor", report.witnesses())
    F, v, w = f.functor, f.source, f.target
    source = laxherm_category(v, config)
    target = laxherm_category(w, config)
    object_map = {}
    for key, p in source.points.items():
        theta = w.base.compose(f.alpha[p.obj], F.fmap(p.theta))
        image = HermPoint(F.ob(p.obj), theta, w.base.is_iso(theta))
        if image.key not in target.points:
            raise StructuralError(f"pushforward of {key} is not a lax hermitian fixed point")
        object_map[key] = image.key
    morphism_map = {}
    for m in source.morphisms():
        x, p, q = source.untag(m)
        image = target.tag(F.fmap(x), object_map[p], object_map[q])
        if image not in target:
            raise StructuralError(f"pushforward of {m} is not a lax isometry")
        morphism_map[m] = image
    return Functor(source, target, object_map, morphism_map, Variance.COVARIANT, f"{f.name}_*")


# -- mutation battery ---------------------------------------------------------------


@dataclass
class MutationResult:
    total: int = 0
    detected: int = 0
    undetected: list[str] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return 1.0 if self.total == 0 else self.detected / self.total


def mutation_sweep(
    v: VolutiveStructure,
    per_site: int = 2,
    max_sites: int = 30,
    config: VolutConfig | None = None,
) -> MutationResult:
    """Perturb single eta components and d entries and count detections."""
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    base = v.base
    result = MutationResult()
    sites: list[tuple[str, str, str]] = []
    for a in base.objects:
        current = v.eta[a]
        options = [m for m in base.hom(a, v.dual(v.dual(a))) if m != current]
        for m in rng.sample(options, min(per_site, len(options))):
            sites.append(("eta", a, m))
    morphisms = [m for m in base.morphisms() if base.hom_size(*base.endpoints(m)) > 1]
    for x in rng.sample(morphisms, min(max_sites, len(morphisms))):
        current = v.dual_morphism(x)
        a, b = base.endpoints(current)
        options = [m for m in base.hom(a, b) if m != current]
        for m in rng.sample(options, min(per_site, len(options))):
            sites.append(("d", x, m))
    for where, site, replacement in sites:
        mutant = v.with_eta(site, replacement) if where == "eta" else v.with_d(site, replacement)
        result.total += 1
        if check_volutive(mutant, config=cfg).ok:
            result.undetected.append(f"{where}:{site}->{replacement}")
        else:
            result.detected += 1
    logger.info(f"{v.name}: {result.detected}/{result.total} mutants detected")
    return result
