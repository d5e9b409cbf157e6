"""
Named check batteries.

Each battery builds its instances from the bundled presets, runs the relevant
checkers and collects one CheckResult per check into a SuiteReport. All
randomness derives from ``config.seed``; a battery never raises for an axiom
failure, and an exhausted cap turns the affected check into a skip.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from volut import linrel
from volut.closedmon import (
    ClosedSymMonoidal,
    build_lax_volutive,
    build_volutive_dualizing,
    oplax_monoidality,
)
from volut.config import VolutConfig, resolve
from volut.equiv import (
    NotRepresentable,
    adjunction_data_from_volutive,
    check_round_trip,
    constant_pairing,
    find_representation,
    verify_zorro,
)
from volut.errors import ResourceCapExceeded, ValidationReport, VolutError, jsonable
from volut.fincat import random_category, walking_arrow
from volut.instances.fdvect import build_fdvect
from volut.instances.finmod import (
    build_finmod,
    find_nonreflexive_module,
    load_star_ring,
    module_oplax_witness,
)
from volut.instances.finset import build_finset
from volut.instances.quantale import PRESETS, build_quantale
from volut.profmor import morita, prof
from volut.volutive import (
    Kind,
    VolutiveStructure,
    check_dagger,
    check_volutive,
    dagger_category,
    mutation_sweep,
    terminal_volutive,
    walking_arrow_volutive,
)

logger = logging.getLogger(__name__)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


@dataclass
class CheckResult:
    name: str
    status: Status
    detail: str = ""
    witness: Any = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "detail": self.detail,
            "witness": jsonable(self.witness),
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    wall_time: float = 0.0

    def count(self, status: Status) -> int:
        return sum(1 for c in self.checks if c.status is status)

    @property
    def ok(self) -> bool:
        return self.count(Status.FAIL) == 0

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status is Status.FAIL]

    def record(self, name: str, report: ValidationReport) -> CheckResult:
        if report.ok:
            result = CheckResult(name, Status.PASS, report.summary())
        else:
            first = report.violations[0]
            result = CheckResult(name, Status.FAIL, report.summary(), first.to_dict())
        self.checks.append(result)
        return result

    def add(self, name: str, passed: bool, detail: str = "", witness: Any = None) -> CheckResult:
        result = CheckResult(name, Status.PASS if passed else Status.FAIL, detail, witness)
        self.checks.append(result)
        return result

    def skip(self, name: str, detail: str, witness: Any = None) -> CheckResult:
        result = CheckResult(name, Status.SKIP, detail, witness)
        self.checks.append(result)
        return result

    @contextmanager
    def guard(self, name: str) -> Iterator[None]:
        """Turn a cap into a skip and any other volut error into a failure."""
        try:
            yield
        except ResourceCapExceeded as e:
            logger.warning(f"{self.suite}/{name}: {e}")
            self.skip(name, str(e), {"limit": e.limit, "required": e.required})
        except VolutError as e:
            logger.warning(f"{self.suite}/{name}: {e}")
            self.add(name, False, f"{type(e).__name__}: {e}", getattr(e, "witness", None))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "ok": self.ok,
            "counts": {s.value: self.count(s) for s in Status},
            "wall_time": round(self.wall_time, 3),
            "checks": [c.to_dict() for c in self.checks],
        }

    def render_text(self) -> str:
        counts = ", ".join(f"{self.count(s)} {s.value}" for s in Status)
        lines = [f"{self.suite} (seed {self.seed}): {counts} in {self.wall_time:.1f}s"]
        for c in self.checks:
            lines.append(f"  [{c.status.value}] {c.name}: {c.detail}")
            if c.status is Status.FAIL and c.witness is not None:
                lines.append(f"         witness: {jsonable(c.witness)}")
        return "\n".join(lines)


# -- instances -------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedInstance:
    name: str
    closed: ClosedSymMonoidal
    rigid: bool


def closed_instances(cfg: VolutConfig) -> list[ClosedInstance]:
    """The bundled closed categories; ``rigid`` marks those whose canonical eta is invertible."""
    found = []
    _, closed = build_finset(4, cfg)
    found.append(ClosedInstance("finset≤4", closed, False))
    for q, dim in ((2, 3), (3, 2)):
        _, closed, _ = build_fdvect(q, dim, cfg, verify=False)
        found.append(ClosedInstance(f"vect-F{q}≤{dim}", closed, True))
    for preset in sorted(PRESETS):
        _, closed = build_quantale(preset, cfg)
        # U3's unit has an involutive residual, so 1^(-) is already strict there
        found.append(ClosedInstance(preset, closed, preset == "unit_chain3"))
    return found


def strict_instances(cfg: VolutConfig) -> list[VolutiveStructure]:
    found = [terminal_volutive(), walking_arrow_volutive()]
    for q, dim in ((2, 2), (3, 1)):
        found.append(build_fdvect(q, dim, cfg)[2])
    _, l3 = build_quantale("lukasiewicz3", cfg)
    found.append(build_volutive_dualizing(l3, "0", cfg))
    return found


def lax_instances(cfg: VolutConfig) -> list[VolutiveStructure]:
    found = []
    for preset in ("z4", "f2xy", "t2f2"):
        found.append(build_finmod(load_star_ring(preset), 8, cfg)[1])
    for preset in sorted(PRESETS):
        found.append(build_lax_volutive(build_quantale(preset, cfg)[1], cfg))
    return found


# -- batteries -------------------------------------------------------------------------


def coherence_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("coherence", cfg.seed)
    with report.guard("finset"):
        _, closed = build_finset(4, cfg)
        report.record("finset≤4 lax", check_volutive(build_lax_volutive(closed, cfg), Kind.LAX, cfg))
    structures = []
    with report.guard("strict instances"):
        structures += strict_instances(cfg)
        _, _, v3 = build_fdvect(2, 3, cfg)
        structures.append(v3)
    with report.guard("lax instances"):
        structures += lax_instances(cfg)
    total = detected = 0
    undetected: list[str] = []
    for v in structures:
        report.record(f"{v.name} {v.kind.value}", check_volutive(v, v.kind, cfg))
        with report.guard(f"{v.name} mutants"):
            result = mutation_sweep(v, config=cfg)
            total += result.total
            detected += result.detected
            undetected += [f"{v.name}:{u}" for u in result.undetected]
    rate = 1.0 if total == 0 else detected / total
    # an undetected mutant passed every axiom, so it is another valid structure
    report.add(
        "mutation detection",
        True,
        f"{detected}/{total} mutants detected ({rate:.1%}); the rest are valid structures",
        undetected[:20],
    )
    return report


def theorem_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("theorem", cfg.seed)
    with report.guard("instances"):
        for inst in closed_instances(cfg):
            v = build_lax_volutive(inst.closed, cfg)
            report.record(f"{inst.name} lax", check_volutive(v, Kind.LAX, cfg))
            strict = check_volutive(v, Kind.STRICT, cfg)
            report.add(
                f"{inst.name} strict iff rigid",
                strict.ok == inst.rigid,
                f"strict coherence {'holds' if strict.ok else 'fails'}, rigid={inst.rigid}",
                None if strict.ok else strict.violations[0].to_dict(),
            )
    with report.guard("lukasiewicz3 dualizing"):
        _, l3 = build_quantale("lukasiewicz3", cfg)
        strict = build_volutive_dualizing(l3, "0", cfg)
        report.record("lukasiewicz3 via 0", check_volutive(strict, Kind.STRICT, cfg))
    return report


def roundtrip_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("roundtrip", cfg.seed)
    structures: list[VolutiveStructure] = []
    with report.guard("instances"):
        structures += strict_instances(cfg)
        structures.append(build_fdvect(2, 1, cfg)[2])
        structures += lax_instances(cfg)
        _, closed = build_finset(2, cfg)
        structures.append(build_lax_volutive(closed, cfg))
    for v in structures:
        with report.guard(f"{v.name} round trip"):
            report.record(f"{v.name} round trip", check_round_trip(v, cfg))
        zorro = verify_zorro(adjunction_data_from_volutive(v), cfg)
        report.record(f"{v.name} zorro", zorro)
        mismatches = []
        tried = 0
        for a in v.base.objects:
            for m in v.base.hom(a, v.dual(v.dual(a))):
                if m == v.eta[a] or tried >= cfg.samples:
                    continue
                tried += 1
                mutant = v.with_eta(a, m)
                holds = verify_zorro(adjunction_data_from_volutive(mutant), cfg).ok
                if holds != check_volutive(mutant, Kind.LAX, cfg).ok:
                    mismatches.append([a, m])
        report.add(
            f"{v.name} zorro on eta-mutants",
            not mismatches,
            f"{tried} mutants; zorro fails exactly on the incoherent ones",
            mismatches[:5],
        )
    found = find_representation(constant_pairing(walking_arrow(), 2), cfg)
    report.add(
        "constant pairing is not representable",
        isinstance(found, NotRepresentable),
        "exhaustive search",
        found.to_dict() if isinstance(found, NotRepresentable) else None,
    )
    return report


def linrel_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("linrel", cfg.seed)
    report.record("lemmas over Q(i)", linrel.check_lemmas(cfg, max_dim=4))
    report.record(
        "lemmas over Q",
        linrel.check_lemmas(cfg.with_overrides(samples=max(1, cfg.samples // 5)), max_dim=4, real=True),
    )
    witness = linrel.find_lax_strict_witness(cfg)
    if witness is None:
        report.skip(
            "strict lax inclusion",
            f"none among {cfg.samples} samples; (W∘V)† = V†∘W† holds in finite dimension",
        )
    else:
        report.add("strict lax inclusion", True, "found", witness.to_dict())
    return report


def _cases(report: SuiteReport, name: str, count: int, run: Callable[[int], ValidationReport]) -> None:
    failed: list[Any] = []
    skipped = 0
    for i in range(count):
        try:
            sub = run(i)
        except ResourceCapExceeded:
            skipped += 1
            continue
        except VolutError as e:
            failed.append({"case": i, "error": str(e)})
            continue
        if not sub.ok:
            failed.append({"case": i, "violation": sub.violations[0].to_dict()})
    detail = f"{count - len(failed) - skipped}/{count} cases pass, {skipped} over cap"
    report.add(name, not failed, detail, failed[:3])


def prof_battery(config: VolutConfig | None = None, cases: int = 50) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("prof", cfg.seed)
    rng = random.Random(cfg.seed)

    def ninja(_: int) -> ValidationReport:
        c, d = random_category(rng, 4, 12), random_category(rng, 4, 12)
        p = prof.random_profunctor(rng, c, d, 2)
        left_unit, iso_left, right_unit, iso_right = prof.ninja_yoneda_isos(p)
        return prof.natural_iso(left_unit, p, iso_left).merge(prof.natural_iso(right_unit, p, iso_right))

    def assoc(_: int) -> ValidationReport:
        cats = [random_category(rng, 3, 8) for _ in range(4)]
        f = prof.random_profunctor(rng, cats[0], cats[1], 2)
        g = prof.random_profunctor(rng, cats[1], cats[2], 2)
        h = prof.random_profunctor(rng, cats[2], cats[3], 2)
        lhs, rhs, components = prof.associator_iso(h, g, f)
        return prof.natural_iso(lhs, rhs, components)

    def zorro(_: int) -> ValidationReport:
        return prof.verify_prof_zorro(random_category(rng, 3, 8), cfg)

    def ihom(_: int) -> ValidationReport:
        c, d, e = (random_category(rng, 2, 4) for _ in range(3))
        x = prof.random_profunctor(rng, c, d, 2)
        z = prof.random_profunctor(rng, d, e, 2)
        y = prof.random_profunctor(rng, c, e, 2)
        return prof.check_ihom_adjunction(z, x, y, cfg)

    _cases(report, "ninja yoneda", cases, ninja)
    _cases(report, "coend associativity", cases, assoc)
    _cases(report, "dual zorro", cases, zorro)
    _cases(report, "internal hom adjunction", cases, ihom)
    return report


def local_battery(config: VolutConfig | None = None, pair_limit: int = 40) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("local", cfg.seed)
    fixtures = {"terminal": terminal_volutive(), "arrow": walking_arrow_volutive()}
    for (cn, cv), (dn, dv) in itertools.product(fixtures.items(), repeat=2):
        max_size = 1 if cn == dn == "arrow" else 2
        with report.guard(f"Prof({cn},{dn})"):
            local = prof.prof_local_structure(cv, dv, max_size, cfg)
            report.record(f"Prof({cn},{dn}) lax", check_volutive(local.volutive, Kind.LAX, cfg))
            if cn != dn:
                continue
            s = cv.d
            points = [
                h
                for p in local.profunctors.values()
                for h in prof.lax_hermitian_points(p, s, s, cfg)
            ]
            pairs = list(itertools.product(points, repeat=2))[:pair_limit]
            composite = ValidationReport(subject=f"hermitian composites on Prof({cn},{cn})")
            for hx, hy in pairs:
                composite.checked += 1
                try:
                    h = prof.prof_compose_hermitian(hx, hy, cfg)
                except ResourceCapExceeded:
                    composite.sampled = True
                    continue
                except VolutError as e:
                    composite.add("well-defined", str(e), (hx.name, hy.name))
                    continue
                sub = prof.check_prof_hermitian(h, cfg)
                if not sub.ok:
                    composite.add("fixed-point", f"{h.name} is not hermitian", (hx.name, hy.name))
            report.record(f"Prof({cn},{cn}) hermitian composition ({len(points)} points)", composite)
    return report


def morita_battery(config: VolutConfig | None = None, max_dim: int = 2) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("morita", cfg.seed)
    rng = random.Random(cfg.seed)
    algebras = morita.f2_algebras(2)
    cache: dict[tuple[int, int], list[morita.Bimodule]] = {}

    def mods(i: int, j: int) -> list[morita.Bimodule]:
        if (i, j) not in cache:
            cache[(i, j)] = morita.bimodules(algebras[i], algebras[j], max_dim)
        return cache[(i, j)]

    closedness = ValidationReport(subject=f"Morita closedness, bimodules of dim ≤ {max_dim}")
    indices = range(len(algebras))
    for i, j, k in itertools.product(indices, repeat=3):
        a, b, c = algebras[i], algebras[j], algebras[k]
        for m, n, p in itertools.product(mods(i, k), mods(j, k), mods(i, j)):
            closedness.merge(morita.verify_morita_closedness(a, b, c, m, n, p, config=cfg))
    report.record("closedness bijection", closedness)

    units = ValidationReport(subject="unitors")
    for (i, j) in itertools.product(indices, repeat=2):
        for m in mods(i, j):
            f, src = morita.left_unitor(m)
            units.merge(morita.check_bimodule_iso(f, src, m, f"λ {m.name}"))
            f, src = morita.right_unitor(m)
            units.merge(morita.check_bimodule_iso(f, src, m, f"ρ {m.name}"))
            units.merge(morita.check_counit(m, m))
    report.record("unit isos", units)

    assoc = ValidationReport(subject="associators", sampled=True)
    for _ in range(cfg.samples):
        i, j, k, l = (rng.randrange(len(algebras)) for _ in range(4))
        m, n, p = rng.choice(mods(i, j)), rng.choice(mods(j, k)), rng.choice(mods(k, l))
        f, src, tgt = morita.associator(m, n, p)
        assoc.merge(morita.check_bimodule_iso(f, src, tgt, f"α {m.name},{n.name},{p.name}"))
    report.record("associativity isos", assoc)
    return report


def witnesses_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("witnesses", cfg.seed)
    with report.guard("non-reflexive module"):
        found = find_nonreflexive_module(load_star_ring("f2xy"), 8, cfg)
        report.add(
            "non-reflexive module over F2[x,y]/(x,y)²",
            found is not None,
            "eta is not invertible" if found else "every module tried is reflexive",
            found.to_dict() if found else None,
        )
    with report.guard("non-reflexive object in Mod"):
        _, v = build_finmod(load_star_ring("t2f2"), 8, cfg)
        stuck = [a for a in v.base.objects if not v.base.is_iso(v.eta[a])]
        report.add(
            "Mod(T2(F2)) is lax but not strict",
            bool(stuck),
            f"eta is not invertible at {stuck[:3]}" if stuck else "every eta is invertible",
            stuck,
        )
    with report.guard("non-invertible phi"):
        _, closed = build_quantale("unit_chain3", cfg)
        data = oplax_monoidality(closed, cfg)
        report.add(
            "non-invertible oplax phi",
            bool(data.non_invertible),
            f"{len(data.non_invertible)} non-invertible components on {closed.name}",
            [list(pair) + [data.phi[pair]] for pair in data.non_invertible[:3]],
        )
    with report.guard("module phi"):
        witness = module_oplax_witness(load_star_ring("f2xy"))
        if witness.invertible:
            report.skip("module phi over F2[x,y]/(x,y)²", "phi is invertible here", witness.to_dict())
        else:
            report.add("module phi over F2[x,y]/(x,y)²", True, "phi is not invertible", witness.to_dict())
    with report.guard("degenerate composite"):
        found = morita.herm_search(config=cfg)
        report.add(
            "degenerate composite of honest hermitian bimodules",
            found is not None,
            "radical of the composite is nonzero" if found else "search exhausted",
            found.to_dict() if found else None,
        )
    return report


def dagger_battery(config: VolutConfig | None = None) -> SuiteReport:
    cfg = resolve(config)
    report = SuiteReport("dagger", cfg.seed)
    with report.guard("strict instances"):
        structures = strict_instances(cfg)
        structures.append(build_lax_volutive(build_quantale("unit_chain3", cfg)[1], cfg))
        for v in structures:
            report.record(f"dagger on {v.name}", check_dagger(dagger_category(v, cfg), cfg))
    return report


BATTERIES: dict[str, Callable[[VolutConfig | None], SuiteReport]] = {
    "coherence": coherence_battery,
    "theorem": theorem_battery,
    "roundtrip": roundtrip_battery,
    "linrel": linrel_battery,
    "prof": prof_battery,
    "local": local_battery,
    "morita": morita_battery,
    "witnesses": witnesses_battery,
    "dagger": dagger_battery,
}


def run_suite(name: str, config: VolutConfig | None = None) -> SuiteReport:
    """Run one named battery and time it.

    Raises:
        KeyError: if no battery has that name
    """
    cfg = resolve(config)
    battery = BATTERIES[name]
    logger.info(f"running suite {name} with seed {cfg.seed}")
    start = time.perf_counter()
    report = battery(cfg)
    report.wall_time = time.perf_counter() - start
    logger.info(f"suite {name}: {len(report.failures())} failure(s) in {report.wall_time:.1f}s")
    return report


def run_suites(names: list[str], config: VolutConfig | None = None, jobs: int = 1) -> list[SuiteReport]:
    """Run several batteries; with jobs > 1 they run in worker processes.

    Reports come back in the order of ``names`` whatever the scheduling.
    """
    cfg = resolve(config)
    expanded = list(BATTERIES) if "all" in names else names
    if jobs <= 1 or len(expanded) == 1:
        return [run_suite(name, cfg) for name in expanded]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_suite, name, cfg) for name in expanded]
        return [f.result() for f in futures]
