"""
Finite commutative quantales as thin closed symmetric monoidal categories.

Morphisms are the order relations "a<=b"; the tensor of two relations is the
relation between the tensors, and the internal hom is the residuation
a⊸b = max{c : c⊗a ≤ b}.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from volut.closedmon import ClosedSymMonoidal, check_closed_structure
from volut.config import VolutConfig
from volut.errors import PreconditionError, StructuralError
from volut.fincat import FiniteCategory, poset_category

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quantale:
    """A finite commutative quantale given by its order, tensor table and unit."""

    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]
    tensor: Mapping[tuple[str, str], str]
    unit: str
    name: str = "Q"

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def residual(self, a: str, b: str) -> str:
        """a⊸b, the largest c with c⊗a ≤ b.

        Raises:
            PreconditionError: if the candidates have no largest element
        """
        candidates = [c for c in self.elements if self.le(self.tensor[(c, a)], b)]
        top = [c for c in candidates if all(self.le(x, c) for x in candidates)]
        if not top:
            raise PreconditionError(f"{self.name}: {a}⊸{b} does not exist", (a, b))
        return top[0]

    def validate(self) -> None:
        """Raise PreconditionError naming the first violated quantale law."""
        els = self.elements
        for a in els:
            if not self.le(a, a):
                raise PreconditionError(f"{self.name}: order is not reflexive", a)
            if self.tensor[(self.unit, a)] != a:
                raise PreconditionError(f"{self.name}: {self.unit} is not a unit", a)
        for a, b in itertools.product(els, repeat=2):
            if self.le(a, b) and self.le(b, a) and a != b:
                raise PreconditionError(f"{self.name}: order is not antisymmetric", (a, b))
            if self.tensor[(a, b)] != self.tensor[(b, a)]:
                raise PreconditionError(f"{self.name}: tensor is not commutative", (a, b))
        for a, b, c in itertools.product(els, repeat=3):
            if self.le(a, b) and self.le(b, c) and not self.le(a, c):
                raise PreconditionError(f"{self.name}: order is not transitive", (a, b, c))
            if self.tensor[(self.tensor[(a, b)], c)] != self.tensor[(a, self.tensor[(b, c)])]:
                raise PreconditionError(f"{self.name}: tensor is not associative", (a, b, c))
            if self.le(a, b) and not self.le(self.tensor[(a, c)], self.tensor[(b, c)]):
                raise PreconditionError(f"{self.name}: tensor is not monotone", (a, b, c))
        for a, b, c in itertools.product(els, repeat=3):
            adjoint = self.le(self.tensor[(a, b)], c) == self.le(b, self.residual(a, c))
            if not adjoint:
                raise PreconditionError(f"{self.name}: residuation fails", (a, b, c))


def chain_quantale(elements: Sequence[str], tensor, unit: str, name: str) -> Quantale:
    index = {a: i for i, a in enumerate(elements)}
    leq = frozenset((a, b) for a in elements for b in elements if index[a] <= index[b])
    table = {(a, b): tensor(a, b) for a in elements for b in elements}
    return Quantale(tuple(elements), leq, table, unit, name)


def lukasiewicz3() -> Quantale:
    """The three-element MV-chain 0 < 1/2 < 1 with a⊗b = max(0, a+b-1)."""
    elements = ["0", "1/2", "1"]

    def tensor(a: str, b: str) -> str:
        value = max(Fraction(0), Fraction(a) + Fraction(b) - 1)
        return str(value)

    return chain_quantale(elements, tensor, "1", "Ł3")


def heyting_chain(n: int) -> Quantale:
    """The chain 0 < .. < n-1 with meet as tensor."""
    elements = [str(i) for i in range(n)]
    return chain_quantale(elements, lambda a, b: str(min(int(a), int(b))), str(n - 1), f"H{n}")


def boolean2() -> Quantale:
    return heyting_chain(2)


def unit_chain3() -> Quantale:
    """0 < e < 1 with e the unit, 0 absorbing and 1⊗1 = 1."""
    elements = ["0", "e", "1"]

    def tensor(a: str, b: str) -> str:
        if "0" in (a, b):
            return "0"
        if a == "e":
            return b
        if b == "e":
            return a
        return "1"

    return chain_quantale(elements, tensor, "e", "U3")


def custom_quantale(document: Mapping) -> Quantale:
    """A quantale from {"elements": [...], "leq": [[a, b], ...] | null, "tensor": {"a,b": c}, "unit": u}.

    A missing "leq" means the elements are listed as a chain.

    Raises:
        StructuralError: if the document is malformed
    """
    try:
        elements = [str(e) for e in document["elements"]]
        unit = str(document["unit"])
        raw = document["tensor"]
        table = {}
        for key, value in raw.items():
            a, b = key.split(",")
            table[(a.strip(), b.strip())] = str(value)
        if document.get("leq") is None:
            index = {a: i for i, a in enumerate(elements)}
            leq = frozenset((a, b) for a in elements for b in elements if index[a] <= index[b])
        else:
            leq = frozenset((str(a), str(b)) for a, b in document["leq"])
    except (KeyError, TypeError, ValueError) as e:
        raise StructuralError(f"malformed quantale document: {e}")
    for a, b in itertools.product(elements, repeat=2):
        if (a, b) not in table:
            table[(a, b)] = table.get((b, a), "")
        if table[(a, b)] not in elements:
            raise StructuralError(f"tensor of {a} and {b} is missing")
    return Quantale(tuple(elements), leq, table, unit, str(document.get("name", "custom")))


PRESETS = {
    "lukasiewicz3": lukasiewicz3,
    "boolean2": boolean2,
    "unit_chain3": unit_chain3,
    "heyting_chain3": lambda: heyting_chain(3),
    "heyting_chain4": lambda: heyting_chain(4),
}


def quantale_closed(q: Quantale) -> ClosedSymMonoidal:
    category = poset_category(list(q.elements), q.le, name=q.name)

    def rel(a: str, b: str) -> str:
        return f"{a}<={b}"

    def ends(m: str) -> tuple[str, str]:
        return category.endpoints(m)

    def tensor_morphisms(f: str, g: str) -> str:
        (a, b), (c, d) = ends(f), ends(g)
        return rel(q.tensor[(a, c)], q.tensor[(b, d)])

    def psi_inverse(c: str, a: str, b: str, k: str) -> str:
        if ends(k) != (q.tensor[(c, a)], b):
            raise StructuralError(f"{k} is not a morphism {c}⊗{a} → {b}")
        return rel(c, q.residual(a, b))

    return ClosedSymMonoidal(
        category,
        list(q.elements),
        tensor=lambda a, b: q.tensor[(a, b)],
        tensor_morphisms=tensor_morphisms,
        unit=q.unit,
        braiding=lambda a, b: rel(q.tensor[(a, b)], q.tensor[(b, a)]),
        internal_hom=q.residual,
        evaluation=lambda a, b: rel(q.tensor[(q.residual(a, b), a)], b),
        psi_inverse=psi_inverse,
        name=q.name,
    )


def build_quantale(
    preset: str | Quantale | Mapping, config: VolutConfig | None = None
) -> tuple[FiniteCategory, ClosedSymMonoidal]:
    """A thin closed symmetric monoidal category from a preset name, a Quantale or a table document.

    Raises:
        PreconditionError: naming the violated quantale law
        StructuralError: for an unknown preset or a failing self-check
    """
    if isinstance(preset, Quantale):
        q = preset
    elif isinstance(preset, str):
        if preset.startswith("heyting_chain") and preset[len("heyting_chain"):].isdigit():
            q = heyting_chain(int(preset[len("heyting_chain"):]))
        elif preset in PRESETS:
            q = PRESETS[preset]()
        else:
            raise StructuralError(f"unknown quantale preset {preset!r}")
    else:
        q = custom_quantale(preset)
    q.validate()
    closed = quantale_closed(q)
    report = check_closed_structure(closed, config)
    if not report.ok:
        raise StructuralError(f"{q.name} self-check failed: {report.summary()}")
    logger.info(f"built quantale {q.name} on {len(q.elements)} elements")
    return closed.base, closed
