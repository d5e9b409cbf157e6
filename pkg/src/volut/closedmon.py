"""
Strict-skeletal closed symmetric monoidal structures and the lax volutive
structure they induce.

The monoidal data lives on an ambient category that may be generated lazily
(tensoring leaves any finite range of objects), while checks and the induced
structure are restricted to a declared finite range of objects.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from volut.config import VolutConfig, resolve
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError, ValidationReport
from volut.fincat import FiniteCategory, full_subcategory
from volut.volutive import Kind, VolutiveStructure, check_volutive

logger = logging.getLogger(__name__)


class ClosedSymMonoidal:
    """A strict symmetric monoidal closed structure on an ambient category.

    Args:
        base: Ambient category holding every tensor product and internal hom
        objects: The finite range of objects checks and induced structures run over
        tensor: Object-level tensor a⊗b
        tensor_morphisms: Morphism-level tensor f⊗g
        unit: The unit object
        braiding: beta(a, b): a⊗b → b⊗a
        internal_hom: ihom(a, b) = b^a
        evaluation: ev(a, b): b^a⊗a → b
        psi_inverse: Optional closed formula (c, a, b, k) → h with psi(h) = k
        name: Display name
    """

    def __init__(
        self,
        base: FiniteCategory,
        objects: Sequence[str],
        *,
        tensor: Callable[[str, str], str],
        tensor_morphisms: Callable[[str, str], str],
        unit: str,
        braiding: Callable[[str, str], str],
        internal_hom: Callable[[str, str], str],
        evaluation: Callable[[str, str], str],
        psi_inverse: Callable[[str, str, str, str], str] | None = None,
        name: str = "M",
    ):
        self.base = base
        self.objects = tuple(objects)
        self.unit = unit
        self.name = name
        self._tensor = tensor
        self._tensor_morphisms = tensor_morphisms
        self._braiding = braiding
        self._internal_hom = internal_hom
        self._evaluation = evaluation
        self._psi_inverse_rule = psi_inverse
        self._psi_tables: dict[tuple[str, str, str], dict[str, str]] = {}
        self.table_limit = 50_000

    def __repr__(self) -> str:
        return f"<ClosedSymMonoidal {self.name} on {len(self.objects)} objects>"

    def tensor(self, a: str, b: str) -> str:
        return self._tensor(a, b)

    def tensor_mor(self, f: str, g: str) -> str:
        return self._tensor_morphisms(f, g)

    def beta(self, a: str, b: str) -> str:
        return self._braiding(a, b)

    def ihom(self, a: str, b: str) -> str:
        """The internal hom b^a."""
        return self._internal_hom(a, b)

    def ev(self, a: str, b: str) -> str:
        """Evaluation b^a⊗a → b."""
        return self._evaluation(a, b)

    def psi(self, a: str, b: str, h: str) -> str:
        """psi(h) = ev∘(h⊗id_a) for h: c → b^a."""
        return self.base.compose(self.ev(a, b), self.tensor_mor(h, self.base.identity(a)))

    def psi_table(self, c: str, a: str, b: str) -> dict[str, str]:
        """The stored bijection Hom(c⊗a, b) → Hom(c, b^a) as an explicit table.

        Raises:
            ResourceCapExceeded: if Hom(c, b^a) is too large to tabulate
        """
        key = (c, a, b)
        if key not in self._psi_tables:
            target = self.ihom(a, b)
            size = self.base.hom_size(c, target)
            if size > self.table_limit:
                raise ResourceCapExceeded(f"psi table ({c}, {a}, {b})", self.table_limit, size)
            table: dict[str, str] = {}
            for h in self.base.hom(c, target):
                table.setdefault(self.psi(a, b, h), h)
            self._psi_tables[key] = table
        return self._psi_tables[key]

    def psi_inverse(self, c: str, a: str, b: str, k: str) -> str:
        """The unique h: c → b^a with psi(h) = k.

        Raises:
            StructuralError: if k has no preimage in a tabulated psi
        """
        if self._psi_inverse_rule is not None:
            return self._psi_inverse_rule(c, a, b, k)
        try:
            return self.psi_table(c, a, b)[k]
        except KeyError:
            raise StructuralError(f"{self.name}: {k} has no psi-preimage in Hom({c}, {b}^{a})")

    def within_range(self) -> FiniteCategory:
        return full_subcategory(self.base, self.objects, name=f"{self.base.name}|{len(self.objects)}")


# -- checking -----------------------------------------------------------------


def _range_morphisms(m: ClosedSymMonoidal, rng: random.Random, count: int) -> list[str]:
    base, obs = m.base, m.objects
    total = sum(base.hom_size(a, b) for a in obs for b in obs)
    if total <= count:
        return [f for a in obs for b in obs for f in base.hom(a, b)]
    picked = []
    for _ in range(count):
        f = base.random_morphism(rng.choice(obs), rng.choice(obs), rng)
        if f is not None:
            picked.append(f)
    return picked


def check_closed_structure(m: ClosedSymMonoidal, config: VolutConfig | None = None) -> ValidationReport:
    """Check strictness, the tensor bifunctor, the symmetry and every psi bijection.

    Object-level laws and hom-set cardinalities are checked over the whole
    declared range; morphism-level laws are exhaustive over small ranges and
    sampled otherwise, which marks the report as sampled.
    """
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    base, obs, one = m.base, m.objects, m.unit
    report = ValidationReport(f"closed structure {m.name}")

    for a in obs:
        report.checked += 1
        if m.tensor(one, a) != a or m.tensor(a, one) != a:
            report.add("unit", f"{a} is not strictly unital", a)
    for a, b, c in itertools.product(obs, repeat=3):
        report.checked += 1
        if m.tensor(m.tensor(a, b), c) != m.tensor(a, m.tensor(b, c)):
            report.add("associativity", f"tensor is not strictly associative at {a}, {b}, {c}", [a, b, c])
    for a, b in itertools.product(obs, repeat=2):
        ab, ba = m.tensor(a, b), m.tensor(b, a)
        report.checked += 1
        if m.tensor_mor(base.identity(a), base.identity(b)) != base.identity(ab):
            report.add("tensor-identity", f"id_{a}⊗id_{b} is not the identity", [a, b])
        beta = m.beta(a, b)
        if base.endpoints(beta) != (ab, ba):
            report.add("braiding", f"beta_{a},{b} has the wrong endpoints", [a, b])
            continue
        if base.compose(m.beta(b, a), beta) != base.identity(ab):
            report.add("symmetry", f"beta_{b},{a}∘beta_{a},{b} is not the identity", [a, b])
        ev = m.ev(a, b)
        if base.endpoints(ev) != (m.tensor(m.ihom(a, b), a), b):
            report.add("evaluation", f"ev_{a},{b} has the wrong endpoints", [a, b])
    for a, b, c in itertools.product(obs, repeat=3):
        report.checked += 1
        lhs = m.beta(m.tensor(a, b), c)
        rhs = base.compose(
            m.tensor_mor(m.beta(a, c), base.identity(b)),
            m.tensor_mor(base.identity(a), m.beta(b, c)),
        )
        if lhs != rhs:
            report.add("hexagon", f"hexagon fails at {a}, {b}, {c}", [a, b, c])
    if not report.ok:
        return report

    sample = _range_morphisms(m, rng, cfg.samples)
    exhaustive = len(sample) == sum(base.hom_size(a, b) for a in obs for b in obs)
    report.sampled = report.sampled or not exhaustive
    one_id = base.identity(one)
    for f in sample:
        report.checked += 1
        if m.tensor_mor(one_id, f) != f or m.tensor_mor(f, one_id) != f:
            report.add("unit", f"the unit does not act trivially on {f}", f)
    for _ in range(cfg.samples):
        f, g, h = rng.choice(sample), rng.choice(sample), rng.choice(sample)
        report.checked += 1
        if m.tensor_mor(m.tensor_mor(f, g), h) != m.tensor_mor(f, m.tensor_mor(g, h)):
            report.add("associativity", f"({f}⊗{g})⊗{h} != {f}⊗({g}⊗{h})", [f, g, h])
        a, b = base.endpoints(f)
        c, d = base.endpoints(g)
        lhs = base.compose(m.beta(b, d), m.tensor_mor(f, g))
        rhs = base.compose(m.tensor_mor(g, f), m.beta(a, c))
        if lhs != rhs:
            report.add("braiding-naturality", f"beta is not natural at {f}, {g}", [f, g])
        f2 = base.random_morphism(b, rng.choice(obs), rng)
        g2 = base.random_morphism(d, rng.choice(obs), rng)
        if f2 is not None and g2 is not None:
            lhs = base.compose(m.tensor_mor(f2, g2), m.tensor_mor(f, g))
            rhs = m.tensor_mor(base.compose(f2, f), base.compose(g2, g))
            if lhs != rhs:
                report.add("interchange", f"tensor is not functorial at {f2}∘{f}, {g2}∘{g}", [f, g])
    if len(sample) ** 3 > cfg.samples:
        report.sampled = True
    report.merge(_check_psi(m, rng, cfg))
    return report


def _check_psi(m: ClosedSymMonoidal, rng: random.Random, cfg: VolutConfig) -> ValidationReport:
    base, obs = m.base, m.objects
    report = ValidationReport()
    triples = list(itertools.product(obs, repeat=3))
    per_triple = max(4, cfg.samples // max(1, len(triples)))
    for c, a, b in triples:
        ba, ca = m.ihom(a, b), m.tensor(c, a)
        left, right = base.hom_size(c, ba), base.hom_size(ca, b)
        report.checked += 1
        if left != right:
            report.add("psi-bijection", f"|Hom({c}, {b}^{a})| = {left} but |Hom({c}⊗{a}, {b})| = {right}", [c, a, b])
            continue
        if left <= per_triple:
            hs = list(base.hom(c, ba))
            images = {m.psi(a, b, h) for h in hs}
            if len(images) != len(hs):
                report.add("psi-bijection", f"psi is not injective on Hom({c}, {b}^{a})", [c, a, b])
                continue
            ks = list(base.hom(ca, b))
        else:
            report.sampled = True
            hs = [base.random_morphism(c, ba, rng) for _ in range(per_triple)]
            ks = [base.random_morphism(ca, b, rng) for _ in range(per_triple)]
        for h in hs:
            report.checked += 1
            if m.psi_inverse(c, a, b, m.psi(a, b, h)) != h:
                report.add("psi-bijection", f"psi^-1(psi({h})) != {h}", [c, a, b, h])
        for k in ks:
            report.checked += 1
            if m.psi(a, b, m.psi_inverse(c, a, b, k)) != k:
                report.add("psi-bijection", f"psi(psi^-1({k})) != {k}", [c, a, b, k])
        # naturality in c and b
        for h in hs[:per_triple]:
            c2 = rng.choice(obs)
            g = base.random_morphism(c2, c, rng)
            if g is not None:
                report.checked += 1
                lhs = m.psi(a, b, base.compose(h, g))
                rhs = base.compose(m.psi(a, b, h), m.tensor_mor(g, base.identity(a)))
                if lhs != rhs:
                    report.add("psi-naturality", f"psi is not natural in c at {g}", [c, a, b, g])
            b2 = rng.choice(obs)
            y = base.random_morphism(b, b2, rng)
            if y is not None:
                report.checked += 1
                y_a = m.psi_inverse(ba, a, b2, base.compose(y, m.ev(a, b)))
                lhs = m.psi(a, b2, base.compose(y_a, h))
                rhs = base.compose(y, m.psi(a, b, h))
                if lhs != rhs:
                    report.add("psi-naturality", f"psi is not natural in b at {y}", [c, a, b, y])
    return report


# -- the induced structure ---------------------------------------------------------


def dual_morphism(m: ClosedSymMonoidal, x: str, dualizing: str | None = None) -> str:
    """1^X = psi^-1(ev_b∘(id_{1^b}⊗X)): 1^b → 1^a for X: a → b."""
    o = dualizing if dualizing is not None else m.unit
    base = m.base
    a, b = base.endpoints(x)
    ob = m.ihom(b, o)
    k = base.compose(m.ev(b, o), m.tensor_mor(base.identity(ob), x))
    return m.psi_inverse(ob, a, o, k)


def eta_component(m: ClosedSymMonoidal, a: str, dualizing: str | None = None) -> str:
    """eta_a = psi^-1(ev_a∘beta_{a,1^a}): a → 1^(1^a)."""
    o = dualizing if dualizing is not None else m.unit
    da = m.ihom(a, o)
    k = m.base.compose(m.ev(a, o), m.beta(a, da))
    return m.psi_inverse(a, da, o, k)


def _induced(m: ClosedSymMonoidal, dualizing: str | None, kind: Kind, name: str) -> VolutiveStructure:
    o = dualizing if dualizing is not None else m.unit
    sub = m.within_range()
    d_objects = {}
    for a in m.objects:
        da = m.ihom(a, o)
        if da not in sub.objects:
            raise StructuralError(f"{m.name}: {o}^{a} = {da} lies outside the declared range")
        d_objects[a] = da
    d_morphisms = {x: dual_morphism(m, x, dualizing) for x in sub.morphisms()}
    eta = {a: eta_component(m, a, dualizing) for a in m.objects}
    return VolutiveStructure.from_maps(sub, d_objects, d_morphisms, eta, kind, name)


def build_lax_volutive(
    m: ClosedSymMonoidal, config: VolutConfig | None = None, verify: bool = True
) -> VolutiveStructure:
    """The lax volutive structure a ↦ 1^a with the canonical eta.

    Raises:
        StructuralError: if ``verify`` is set and the induced structure fails its lax check
    """
    v = _induced(m, None, Kind.LAX, f"1^(-) on {m.name}")
    if verify:
        report = check_volutive(v, Kind.LAX, config)
        if not report.ok:
            raise StructuralError(f"{m.name}: induced structure self-check failed: {report.summary()}")
        logger.info(f"{m.name}: induced lax volutive structure verified ({report.checked} checks)")
    return v


def build_volutive_dualizing(
    m: ClosedSymMonoidal, dualizing: str, config: VolutConfig | None = None, verify: bool = True
) -> VolutiveStructure:
    """The strict structure a ↦ D^a for a dualizing object D.

    Raises:
        PreconditionError: naming the first object whose canonical map a → D^(D^a) is not invertible
        StructuralError: if ``verify`` is set and the structure fails its strict check
    """
    for a in m.objects:
        eta = eta_component(m, a, dualizing)
        if not m.base.is_iso(eta):
            raise PreconditionError(f"{dualizing} is not dualizing: {a} → {dualizing}^({dualizing}^{a}) is not invertible", a)
    v = _induced(m, dualizing, Kind.STRICT, f"{dualizing}^(-) on {m.name}")
    if verify:
        report = check_volutive(v, Kind.STRICT, config)
        if not report.ok:
            raise StructuralError(f"{m.name}: dualizing structure self-check failed: {report.summary()}")
    return v


@dataclass
class OplaxData:
    """phi_{a,b}: 1^a⊗1^b → 1^(a⊗b) and u: 1 → 1^1, with invertibility per pair."""

    phi: dict[tuple[str, str], str] = field(default_factory=dict)
    unit_map: str = ""
    invertible: dict[tuple[str, str], bool] = field(default_factory=dict)

    @property
    def non_invertible(self) -> list[tuple[str, str]]:
        return [pair for pair, ok in self.invertible.items() if not ok]


def oplax_component(m: ClosedSymMonoidal, a: str, b: str) -> str:
    base, one = m.base, m.unit
    da, db = m.ihom(a, one), m.ihom(b, one)
    middle = m.tensor_mor(m.tensor_mor(base.identity(da), m.beta(db, a)), base.identity(b))
    k = base.compose(m.tensor_mor(m.ev(a, one), m.ev(b, one)), middle)
    return m.psi_inverse(m.tensor(da, db), m.tensor(a, b), one, k)


def oplax_monoidality(m: ClosedSymMonoidal, config: VolutConfig | None = None) -> OplaxData:
    """The oplax monoidal data of 1^(-); invertibility is reported, never required."""
    data = OplaxData()
    base = m.base
    one = m.unit
    for a, b in itertools.product(m.objects, repeat=2):
        phi = oplax_component(m, a, b)
        data.phi[(a, b)] = phi
        data.invertible[(a, b)] = base.is_iso(phi)
    data.unit_map = m.psi_inverse(one, one, one, base.identity(one))
    if data.non_invertible:
        logger.info(f"{m.name}: {len(data.non_invertible)} non-invertible phi components")
    return data


def check_oplax_naturality(
    m: ClosedSymMonoidal, data: OplaxData, config: VolutConfig | None = None
) -> ValidationReport:
    """phi_{a,b}∘(1^X⊗1^Y) = 1^(X⊗Y)∘phi_{a',b'} for X: a → a', Y: b → b'."""
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    base = m.base
    report = ValidationReport(f"oplax naturality {m.name}")
    sample = _range_morphisms(m, rng, cfg.samples)
    pairs = [(x, y) for x in sample for y in sample]
    if len(pairs) > cfg.samples:
        report.sampled = True
        pairs = rng.sample(pairs, cfg.samples)
    for x, y in pairs:
        a, a2 = base.endpoints(x)
        b, b2 = base.endpoints(y)
        report.checked += 1
        lhs = base.compose(data.phi[(a, b)], m.tensor_mor(dual_morphism(m, x), dual_morphism(m, y)))
        rhs = base.compose(dual_morphism(m, m.tensor_mor(x, y)), data.phi[(a2, b2)])
        if lhs != rhs:
            report.add("phi-naturality", f"phi is not natural at {x}, {y}", [x, y])
    return report


def check_pulling_through(m: ClosedSymMonoidal, config: VolutConfig | None = None) -> ValidationReport:
    """ev_a∘(1^X⊗id_a) = ev_b∘(id_{1^b}⊗X) for every X: a → b in range."""
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    base, one = m.base, m.unit
    report = ValidationReport(f"pulling through evaluations {m.name}")
    sample = _range_morphisms(m, rng, cfg.check_cap)
    report.sampled = len(sample) < sum(base.hom_size(a, b) for a in m.objects for b in m.objects)
    for x in sample:
        a, b = base.endpoints(x)
        report.checked += 1
        lhs = base.compose(m.ev(a, one), m.tensor_mor(dual_morphism(m, x), base.identity(a)))
        rhs = base.compose(m.ev(b, one), m.tensor_mor(base.identity(m.ihom(b, one)), x))
        if lhs != rhs:
            report.add("pulling-through", f"evaluations disagree at {x}", x)
    return report
