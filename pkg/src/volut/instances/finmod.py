"""
Finite right modules over a finite ring with involution.

Module elements are the integers 0..size-1 with 0 the zero element; a module is
given by its addition table and its right action table. The dual of M is
Hom_R(M, R) with (φ·r)(m) = r^⋆φ(m), and ι_M: M → M^∨∨ sends m to
φ ↦ φ(m)^⋆.

The category keeps one module per isomorphism class (or every constructed
module when ``skeletal`` is off). Duals are transported to the chosen
representatives along explicit isomorphisms.
"""

from __future__ import annotations

import itertools
import json
import logging
import pathlib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from volut.config import VolutConfig, resolve
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError
from volut.fields import GF2
from volut.fincat import FiniteCategory, GeneratedCategory, check_category
from volut.profmor.morita import (
    Bimodule,
    FinAlgebra,
    balanced,
    intertwiner_object,
    quotient,
    regular_bimodule,
)
from volut.volutive import Kind, VolutiveStructure, check_volutive

logger = logging.getLogger(__name__)

PRESET_DIR = pathlib.Path(__file__).resolve().parent.parent / "presets"


@dataclass(frozen=True, eq=False)
class StarRing:
    """A finite ring on 0..size-1 (0 is zero) with an involutive anti-automorphism."""

    name: str
    add: np.ndarray
    mul: np.ndarray
    star: np.ndarray
    one: int
    labels: tuple[str, ...]
    algebra: FinAlgebra | None = None

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def zero(self) -> int:
        return 0

    def validate(self) -> None:
        """Raise PreconditionError naming the first failing ring or star law."""
        n = self.size
        els = np.arange(n)
        i, j, k = np.meshgrid(els, els, els, indexing="ij")
        add, mul, star = self.add, self.mul, self.star
        if add.shape != (n, n) or mul.shape != (n, n) or star.shape != (n,):
            raise PreconditionError(f"{self.name}: tables do not match {n} elements")
        laws = [
            ("addition is not associative", add[add[i, j], k] == add[i, add[j, k]]),
            ("addition is not commutative", add == add.T),
            ("0 is not an additive identity", add[0] == els),
            ("some element has no negative", (add == 0).any(axis=1)),
            ("multiplication is not associative", mul[mul[i, j], k] == mul[i, mul[j, k]]),
            ("the unit is not two-sided", (mul[self.one] == els) & (mul[:, self.one] == els)),
            ("left distributivity fails", mul[i, add[j, k]] == add[mul[i, j], mul[i, k]]),
            ("right distributivity fails", mul[add[i, j], k] == add[mul[i, k], mul[j, k]]),
            ("star is not additive", star[add] == add[star[:, None], star[None, :]]),
            ("star is not an anti-homomorphism", star[mul] == mul[star[None, :], star[:, None]]),
            ("star does not fix 1", np.array(star[self.one] == self.one)),
            ("star is not an involution", star[star] == els),
        ]
        for message, holds in laws:
            if not np.all(holds):
                witness = None
                if np.ndim(holds):
                    witness = tuple(int(x) for x in np.argwhere(~np.asarray(holds))[0])
                raise PreconditionError(f"{self.name}: {message}", witness)


def cyclic_ring(n: int, name: str | None = None) -> StarRing:
    """Z/n with the identity star."""
    els = np.arange(n)
    return StarRing(
        name or f"Z/{n}",
        (els[:, None] + els[None, :]) % n,
        (els[:, None] * els[None, :]) % n,
        els.copy(),
        1 % n,
        tuple(str(x) for x in range(n)),
    )


def from_f2_algebra(a: FinAlgebra) -> StarRing:
    """The ring underlying an F2-algebra; element sum b_i 2^i is the vector b."""
    n = 2**a.dim
    vectors = [np.array([(x >> i) & 1 for i in range(a.dim)], dtype=np.int64) for x in range(n)]

    def index(v: np.ndarray) -> int:
        return int(sum(int(b) << i for i, b in enumerate(v)))

    add = np.array([[x ^ y for y in range(n)] for x in range(n)], dtype=np.int64)
    mul = np.array([[index(a.product(u, v)) for v in vectors] for u in vectors], dtype=np.int64)
    star = np.array([index(a.apply_star(v)) for v in vectors], dtype=np.int64)
    names = a.basis or tuple(f"e{i}" for i in range(a.dim))
    labels = tuple("+".join(names[i] for i in range(a.dim) if v[i]) or "0" for v in vectors)
    return StarRing(a.name, add, mul, star, index(a.unit), labels, a)


def star_ring_from_document(document: Mapping) -> StarRing:
    """A ring from a preset document: {"kind": "cyclic", "modulus": n} or an F2-algebra.

    Raises:
        StructuralError: if the document is malformed
    """
    kind = document.get("kind")
    if kind == "cyclic":
        try:
            modulus = int(document["modulus"])
        except (KeyError, TypeError, ValueError) as e:
            raise StructuralError(f"malformed cyclic ring document: {e}")
        return cyclic_ring(modulus, document.get("name"))
    if kind == "f2-algebra":
        return from_f2_algebra(FinAlgebra.from_document(document))
    raise StructuralError(f"unknown ring kind {kind!r}")


def load_star_ring(preset: str) -> StarRing:
    """Load a ring from a JSON file or a bundled preset name (z4, f2xy, t2f2).

    Raises:
        StructuralError: if nothing can be loaded
        PreconditionError: if the ring or its star is invalid
    """
    path = pathlib.Path(preset)
    if not path.exists():
        path = PRESET_DIR / (path.name if path.suffix == ".json" else f"{path.name}.json")
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error loading ring {preset}: {e}")
        raise StructuralError(f"cannot load ring {preset!r}: {e}")
    ring = star_ring_from_document(document)
    ring.validate()
    logger.info(f"Loaded ring {ring.name} with {ring.size} elements")
    return ring


@dataclass(eq=False)
class FinModule:
    """A right R-module on 0..size-1 with addition and action tables."""

    ring: StarRing
    add: np.ndarray
    act: np.ndarray
    name: str = "M"
    maps: list[tuple[int, ...]] | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.add.shape[0]

    @cached_property
    def expressions(self) -> tuple[tuple[int, ...], dict[int, tuple[int, ...]]]:
        """Greedy generators and, per element, coefficients writing it as sum g_i r_i."""
        gens: list[int] = []
        exprs: dict[int, tuple[int, ...]] = {0: ()}
        for m in range(self.size):
            if m in exprs:
                continue
            gens.append(m)
            exprs = {}
            for coeffs in itertools.product(range(self.ring.size), repeat=len(gens)):
                value = 0
                for g, r in zip(gens, coeffs):
                    value = int(self.add[value, self.act[g, r]])
                exprs.setdefault(value, coeffs)
        # a generator always names its own image
        for i, g in enumerate(gens):
            exprs[g] = tuple(self.ring.one if j == i else 0 for j in range(len(gens)))
        return tuple(gens), exprs

    @property
    def generators(self) -> tuple[int, ...]:
        return self.expressions[0]

    def check(self) -> None:
        """Raise PreconditionError if the tables are not a right module."""
        ring, add, act = self.ring, self.add, self.act
        s, n = self.size, ring.size
        m, x, r = np.meshgrid(np.arange(s), np.arange(s), np.arange(n), indexing="ij")
        mm, r1, r2 = np.meshgrid(np.arange(s), np.arange(n), np.arange(n), indexing="ij")
        laws = [
            ("addition is not commutative", add == add.T),
            ("0 is not an additive identity", add[0] == np.arange(s)),
            (
                "the action does not distribute over module addition",
                act[add[m, x], r] == add[act[m, r], act[x, r]],
            ),
            (
                "the action does not distribute over ring addition",
                act[mm, ring.add[r1, r2]] == add[act[mm, r1], act[mm, r2]],
            ),
            ("the action is not associative", act[mm, ring.mul[r1, r2]] == act[act[mm, r1], r2]),
            ("1 does not act as the identity", act[:, ring.one] == np.arange(s)),
        ]
        for message, holds in laws:
            if not np.all(holds):
                raise PreconditionError(f"{self.name}: {message}", self.name)


def regular_module(ring: StarRing) -> FinModule:
    return FinModule(ring, ring.add.copy(), ring.mul.copy(), "R")


def zero_module(ring: StarRing) -> FinModule:
    return FinModule(ring, np.zeros((1, 1), dtype=np.int64), np.zeros((1, ring.size), dtype=np.int64), "0")


def right_ideals(ring: StarRing) -> list[frozenset[int]]:
    """All right ideals, smallest first."""
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        ideal = frontier.pop()
        for x in range(ring.size):
            if x in ideal:
                continue
            grown = set(ideal) | {int(ring.mul[x, r]) for r in range(ring.size)}
            while True:
                closed = grown | {int(ring.add[a, b]) for a in grown for b in grown}
                if closed == grown:
                    break
                grown = closed
            grown = frozenset(grown)
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    return sorted(found, key=lambda i: (len(i), sorted(i)))


def quotient_module(ring: StarRing, ideal: frozenset[int], name: str) -> FinModule:
    """R/I with cosets labelled by their order of smallest representatives."""
    cosets: dict[int, int] = {}
    reps: list[int] = []
    for x in range(ring.size):
        if x in cosets:
            continue
        label = len(reps)
        reps.append(x)
        for i in ideal:
            cosets[int(ring.add[x, i])] = label
    add = np.array([[cosets[int(ring.add[a, b])] for b in reps] for a in reps], dtype=np.int64)
    act = np.array([[cosets[int(ring.mul[a, r])] for r in range(ring.size)] for a in reps], dtype=np.int64)
    return FinModule(ring, add, act, name)


def direct_sum(m: FinModule, n: FinModule) -> FinModule:
    """M ⊕ N with (i, j) at i*|N| + j."""
    s, t = m.size, n.size
    i, j = np.divmod(np.arange(s * t), t)
    add = m.add[i[:, None], i[None, :]] * t + n.add[j[:, None], j[None, :]]
    act = m.act[i] * t + n.act[j]
    return FinModule(m.ring, add, act, f"{m.name}⊕{n.name}")


def homs(m: FinModule, n: FinModule, budget: int | None = None) -> list[tuple[int, ...]]:
    """Every R-linear map M → N as a tuple of images.

    Images of the generators are enumerated, every other image follows from the
    stored expressions, and the candidate is kept when it respects both tables.

    Raises:
        ResourceCapExceeded: if more than ``budget`` candidates would be tried
    """
    gens, exprs = m.expressions
    total = n.size ** len(gens)
    if budget is not None and total > budget:
        raise ResourceCapExceeded(f"homs {m.name} → {n.name}", budget, total)
    order = list(range(m.size))
    coeffs = [exprs[x] for x in order]
    found = []
    for images in itertools.product(range(n.size), repeat=len(gens)):
        values = np.zeros(m.size, dtype=np.int64)
        for x, cs in zip(order, coeffs):
            value = 0
            for y, r in zip(images, cs):
                value = int(n.add[value, n.act[y, r]])
            values[x] = value
        if not np.array_equal(n.add[values[:, None], values[None, :]], values[m.add]):
            continue
        if not np.array_equal(n.act[values], values[m.act]):
            continue
        found.append(tuple(int(v) for v in values))
    return found


def find_isomorphism(m: FinModule, n: FinModule, budget: int | None = None) -> tuple[int, ...] | None:
    if m.size != n.size:
        return None
    for f in homs(m, n, budget):
        if len(set(f)) == m.size:
            return f
    return None


def _inverse_map(f: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(f)
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


def dual_module(m: FinModule, budget: int | None = None) -> FinModule:
    """Hom_R(M, R) as a right module through the star; ``maps`` lists its elements."""
    ring = m.ring
    maps = homs(m, regular_module(ring), budget)
    index = {phi: i for i, phi in enumerate(maps)}
    add = np.array(
        [[index[tuple(int(v) for v in ring.add[list(p), list(q)])] for q in maps] for p in maps],
        dtype=np.int64,
    )
    act = np.array(
        [
            [index[tuple(int(ring.mul[ring.star[r], v]) for v in p)] for r in range(ring.size)]
            for p in maps
        ],
        dtype=np.int64,
    ).reshape(len(maps), ring.size)
    return FinModule(ring, add, act, f"d({m.name})", maps)


def dual_map(f: Sequence[int], dm: FinModule, dn: FinModule) -> tuple[int, ...]:
    """d(f): d(N) → d(M), ψ ↦ ψ∘f, on the enumerated duals."""
    index = {phi: i for i, phi in enumerate(dm.maps)}
    return tuple(index[tuple(psi[y] for y in f)] for psi in dn.maps)


def iota(m: FinModule, dm: FinModule, ddm: FinModule) -> tuple[int, ...]:
    """ι_M: M → d(d(M)), m ↦ (φ ↦ φ(m)^⋆)."""
    star = m.ring.star
    index = {phi: i for i, phi in enumerate(ddm.maps)}
    return tuple(index[tuple(int(star[phi[x]]) for phi in dm.maps)] for x in range(m.size))


def is_reflexive(m: FinModule, budget: int | None = None) -> bool:
    dm = dual_module(m, budget)
    ddm = dual_module(dm, budget)
    return len(set(iota(m, dm, ddm))) == m.size == ddm.size


def is_simple(m: FinModule) -> bool:
    """Every nonzero element generates; x·R is already closed under addition."""
    return m.size > 1 and all(len(set(m.act[x].tolist())) == m.size for x in range(1, m.size))


def right_actions(alg: FinAlgebra, dim: int, budget: int | None = None) -> list[np.ndarray]:
    """Right actions of ``alg`` on F2^dim, one per simultaneous conjugacy class.

    ``action[i]`` is e_i acting on column vectors, so e_i e_j acts as
    ``action[j] @ action[i]``. The last basis vector in the unit's support is
    solved from the unit; each law is checked as soon as its matrices are set.

    Raises:
        ResourceCapExceeded: if one step would try more than ``budget`` matrices
    """
    n = alg.dim
    pivot = int(np.nonzero(alg.unit)[0][-1])
    free = [i for i in range(n) if i != pivot]
    step_of = {i: s for s, i in enumerate(free)} | {pivot: n - 1}
    laws: dict[int, list[tuple[int, int, np.ndarray]]] = {}
    for i, j in itertools.product(range(n), repeat=2):
        prod = alg.product(alg.e(i), alg.e(j))
        step = max(step_of[k] for k in {i, j, *(int(x) for x in np.nonzero(prod)[0])})
        laws.setdefault(step, []).append((i, j, prod))
    choices = list(GF2.all_matrices(dim, dim))
    if budget is not None and free and len(choices) > budget:
        raise ResourceCapExceeded(f"actions of {alg.name} on F2^{dim}", budget, len(choices))
    eye = np.eye(dim, dtype=np.int64)
    action = np.zeros((n, dim, dim), dtype=np.int64)
    found: list[np.ndarray] = []

    def holds(step: int) -> bool:
        return all(
            np.array_equal(action[j] @ action[i] % 2, np.tensordot(prod, action, axes=1) % 2)
            for i, j, prod in laws.get(step, ())
        )

    def extend(step: int) -> None:
        if step == n - 1:
            action[pivot] = (eye + sum(action[k] for k in free if alg.unit[k])) % 2
            if holds(step):
                found.append(action.copy())
            return
        for x in choices:
            action[free[step]] = x
            if holds(step):
                extend(step + 1)

    extend(0)
    group = [(g, inv) for g in choices if (inv := GF2.inverse(g)) is not None]
    classes: list[np.ndarray] = []
    seen: set[bytes] = set()
    for a in found:
        if a.tobytes() in seen:
            continue
        classes.append(a)
        seen.update((g @ a @ inv % 2).tobytes() for g, inv in group)
    logger.debug(f"{alg.name}: {len(found)} actions on F2^{dim}, {len(classes)} up to conjugacy")
    return classes


def action_module(ring: StarRing, action: np.ndarray, name: str) -> FinModule:
    """F2^dim as a right module over ``ring.algebra``; vector b is element sum b_i 2^i."""
    dim = action.shape[1]
    size = 2**dim
    vectors = (np.arange(size)[:, None] >> np.arange(dim)[None, :]) & 1
    coords = (np.arange(ring.size)[:, None] >> np.arange(ring.algebra.dim)[None, :]) & 1
    matrices = np.tensordot(coords, action, axes=1) % 2
    images = np.einsum("rab,vb->vra", matrices, vectors) % 2
    act = images @ (1 << np.arange(dim))
    add = np.arange(size)[:, None] ^ np.arange(size)[None, :]
    return FinModule(ring, add.astype(np.int64), act.astype(np.int64), name)


def seed_modules(ring: StarRing, size_cap: int) -> list[FinModule]:
    """0, R and then every module within the size cap.

    Over an F2-algebra that is one module per conjugacy class of right actions
    on each F2^dim; otherwise the cyclic quotients R/I and their direct sums.
    """
    seeds = [zero_module(ring)]
    if ring.size <= size_cap:
        seeds.append(regular_module(ring))
    if ring.algebra is not None:
        dim = 1
        while 2**dim <= size_cap:
            for k, action in enumerate(right_actions(ring.algebra, dim)):
                seeds.append(action_module(ring, action, f"V{dim}.{k}"))
            dim += 1
        return seeds
    for k, ideal in enumerate(right_ideals(ring)):
        if 1 < len(ideal) < ring.size and ring.size // len(ideal) <= size_cap:
            seeds.append(quotient_module(ring, ideal, f"R/I{k}"))
    cyclic = [s for s in seeds if s.size > 1]
    frontier = list(cyclic)
    while frontier:
        grown = []
        for s in frontier:
            for c in cyclic:
                if s.size * c.size <= size_cap:
                    grown.append(direct_sum(s, c))
        seeds.extend(grown)
        frontier = grown
    return seeds


def simple_modules(ring: StarRing) -> list[FinModule]:
    """The simple cyclic quotients, one per isomorphism class."""
    found: list[FinModule] = []
    for k, ideal in enumerate(right_ideals(ring)):
        if len(ideal) == ring.size:
            continue
        m = quotient_module(ring, ideal, f"R/I{k}")
        if is_simple(m) and all(find_isomorphism(m, s) is None for s in found):
            found.append(m)
    return found


def encode(a: str, b: str, images: Sequence[int]) -> str:
    return f"{a}>{b}:" + ",".join(str(v) for v in images)


def decode(mid: str) -> tuple[str, str, tuple[int, ...]]:
    try:
        shape, body = mid.rsplit(":", 1)
        a, b = shape.split(">", 1)
        images = tuple(int(v) for v in body.split(",")) if body else ()
    except ValueError:
        raise StructuralError(f"{mid!r} is not a module map id")
    return a, b, images


class ModuleCategory(GeneratedCategory):
    """Right modules named by ``modules`` with all R-linear maps between them."""

    def __init__(self, modules: Mapping[str, FinModule], budget: int | None = None, name: str = "Mod"):
        self.modules = dict(modules)

        def hom(a: str, b: str) -> list[str]:
            return [encode(a, b, f) for f in homs(self.modules[a], self.modules[b], budget)]

        def endpoints(m: str) -> tuple[str, str]:
            a, b, images = decode(m)
            if a not in self.modules or b not in self.modules or len(images) != self.modules[a].size:
                raise StructuralError(f"{m!r} is not a map between known modules")
            return a, b

        def compose(g: str, f: str) -> str:
            a, _, fv = decode(f)
            _, c, gv = decode(g)
            return encode(a, c, [gv[x] for x in fv])

        super().__init__(
            list(self.modules),
            hom=hom,
            endpoints=endpoints,
            identity=lambda a: encode(a, a, range(self.modules[a].size)),
            compose=compose,
            name=name,
        )

    def images(self, m: str) -> tuple[int, ...]:
        return decode(m)[2]


def _closed_family(
    seeds: Sequence[FinModule], size_cap: int, skeletal: bool, budget: int
) -> tuple[list[FinModule], dict[str, FinModule], list[str]]:
    """The greatest family containing the seeds' survivors that is closed under duals."""
    family: list[FinModule] = []
    for s in seeds:
        if skeletal and any(find_isomorphism(s, t, budget) is not None for t in family):
            continue
        family.append(s)
    banned: list[FinModule] = []
    duals: dict[str, FinModule] = {}
    dropped: list[str] = []

    def matches(d: FinModule, pool: Sequence[FinModule]) -> bool:
        return any(find_isomorphism(d, t, budget) is not None for t in pool)

    changed = True
    while changed:
        changed = False
        for m in list(family):
            if m.name not in duals:
                duals[m.name] = dual_module(m, budget)
            d = duals[m.name]
            if d.size > size_cap or matches(d, banned):
                family.remove(m)
                banned.append(m)
                dropped.append(f"{m.name} (dual of size {d.size})")
                changed = True
            elif not matches(d, family):
                family.append(FinModule(d.ring, d.add, d.act, d.name))
                changed = True
    return family, duals, dropped


def build_finmod(
    ring: StarRing,
    size_cap: int = 8,
    config: VolutConfig | None = None,
    skeletal: bool = True,
    verify: bool = True,
) -> tuple[FiniteCategory, VolutiveStructure]:
    """The lax volutive category of finite right R-modules up to ``size_cap`` elements.

    Raises:
        PreconditionError: if the ring is not a valid star ring
        ResourceCapExceeded: if a hom enumeration exceeds the search cap
        StructuralError: if the self-check fails
    """
    cfg = resolve(config)
    ring.validate()
    budget = cfg.search_cap
    family, duals, dropped = _closed_family(seed_modules(ring, size_cap), size_cap, skeletal, budget)
    if dropped:
        logger.info(f"{ring.name}: dropped modules without a dual in range: {dropped}")
    modules = {m.name: m for m in family}
    category = ModuleCategory(modules, budget, name=f"Mod({ring.name})≤{size_cap}")

    rep: dict[str, str] = {}
    to_rep: dict[str, tuple[int, ...]] = {}
    for m in family:
        d = duals[m.name]
        for t in family:
            iso = find_isomorphism(d, t, budget)
            if iso is not None:
                rep[m.name], to_rep[m.name] = t.name, iso
                break

    d_morphisms: dict[str, str] = {}
    for f in category.morphisms():
        a, b, images = decode(f)
        raw = dual_map(images, duals[a], duals[b])
        transported = [to_rep[a][raw[y]] for y in _inverse_map(to_rep[b])]
        d_morphisms[f] = encode(rep[b], rep[a], transported)

    eta: dict[str, str] = {}
    for m in family:
        r1 = modules[rep[m.name]]
        ddm = dual_module(duals[m.name], budget)
        i_m = iota(m, duals[m.name], ddm)
        back = _inverse_map(to_rep[m.name])
        pulled = dual_map(back, duals[r1.name], ddm)
        images = [to_rep[r1.name][pulled[x]] for x in i_m]
        eta[m.name] = encode(m.name, rep[r1.name], images)

    v = VolutiveStructure.from_maps(category, rep, d_morphisms, eta, Kind.LAX, f"Mod({ring.name})")
    if verify:
        for report in (check_category(category, cfg), check_volutive(v, Kind.LAX, cfg)):
            if not report.ok:
                raise StructuralError(f"Mod({ring.name}) self-check failed: {report.summary()}")
    logger.info(
        f"built Mod({ring.name}) with {len(family)} modules: {category.morphism_count()} morphisms"
    )
    return category, v


@dataclass(frozen=True)
class NonReflexiveWitness:
    module: str
    size: int
    dual_size: int
    double_dual_size: int
    injective: bool

    def to_dict(self) -> dict:
        return {
            "module": self.module,
            "size": self.size,
            "dual_size": self.dual_size,
            "double_dual_size": self.double_dual_size,
            "iota_injective": self.injective,
        }


def find_nonreflexive_module(
    ring: StarRing, size_cap: int = 8, config: VolutConfig | None = None
) -> NonReflexiveWitness | None:
    """The first module (simple ones first) whose ι is not a bijection."""
    cfg = resolve(config)
    candidates = simple_modules(ring) + seed_modules(ring, size_cap)
    for m in candidates:
        dm = dual_module(m, cfg.search_cap)
        ddm = dual_module(dm, cfg.search_cap)
        image = iota(m, dm, ddm)
        if not (len(set(image)) == m.size == ddm.size):
            logger.info(f"{ring.name}: {m.name} is not reflexive ({m.size} vs {ddm.size})")
            return NonReflexiveWitness(m.name, m.size, dm.size, ddm.size, len(set(image)) == m.size)
    return None


@dataclass(frozen=True)
class OplaxWitness:
    """φ: d(k) ⊗ d(k) → d(k ⊗ k) for the residue module k, as bimodules over R."""

    ring: str
    source_dim: int
    target_dim: int
    rank: int

    @property
    def invertible(self) -> bool:
        return self.source_dim == self.target_dim == self.rank

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "rank": self.rank,
            "invertible": self.invertible,
        }


def residue_bimodule(a: FinAlgebra) -> Bimodule:
    """R/J for J spanned by e_1..e_{n-1}, which must be a two-sided ideal."""
    regular = regular_bimodule(a)
    ideal = np.eye(a.dim, dtype=np.int64)[1:]
    for x in ideal:
        for i in range(a.dim):
            for image in (regular.left[i] @ x % 2, regular.right[i] @ x % 2):
                if image[0]:
                    raise PreconditionError(f"{a.name}: the span of e_1.. is not an ideal", a.name)
    q = quotient(ideal, a.dim)
    left = np.stack([q.projection @ x @ q.section % 2 for x in regular.left])
    right = np.stack([q.projection @ x @ q.section % 2 for x in regular.right])
    return Bimodule(a, a, q.dim, left, right, "k")


def module_oplax_witness(ring: StarRing) -> OplaxWitness:
    """Compare d(k) ⊗_R d(k) with d(k ⊗_R k) over a commutative F2-algebra.

    Raises:
        PreconditionError: if the ring is not a commutative F2-algebra with residue field
    """
    a = ring.algebra
    if a is None or not np.array_equal(a.mult, a.mult.transpose(1, 0, 2)):
        raise PreconditionError(f"{ring.name} is not a commutative F2-algebra", ring.name)
    regular = regular_bimodule(a)
    k = residue_bimodule(a)
    dk = intertwiner_object(regular, k)
    source, q_source = balanced(dk.bimodule, dk.bimodule)
    kk, q_kk = balanced(k, k)
    target = intertwiner_object(regular, kk)
    # φ(X ⊗ Y)(m ⊗ n) = X(m)·Y(n), written in the coordinates of the target
    h = dk.bimodule.dim
    columns = []
    for t in range(source.dim):
        coeffs = q_source.section[:, t].reshape(h, h)
        value = np.zeros((a.dim, kk.dim), dtype=np.int64)
        for s, u in itertools.product(range(h), repeat=2):
            if not coeffs[s, u]:
                continue
            for col in range(kk.dim):
                pre = q_kk.section[:, col].reshape(k.dim, k.dim)
                for p, r in zip(*np.nonzero(pre)):
                    value[:, col] ^= a.product(dk.maps[s][:, p], dk.maps[u][:, r])
        columns.append(target.coordinates(value))
    matrix = np.stack(columns, axis=1) if columns else np.zeros((target.bimodule.dim, 0), dtype=np.int64)
    rank = GF2.rank(matrix) if matrix.size else 0
    witness = OplaxWitness(ring.name, source.dim, target.bimodule.dim, rank)
    logger.info(f"{ring.name}: oplax comparison {witness.source_dim} → {witness.target_dim}, rank {rank}")
    return witness
