"""
Skeletal finite sets with the cartesian closed structure.

The object n is {0, .., n-1}; a map f: a → b is written "{a}>{b}:f(0),f(1),..".
Pairs (i, j) in a×b sit at index i*b + j and a function g: a → b in b^a sits at
index sum g(k)*b^k.
"""

from __future__ import annotations

import itertools
import logging
import random

from volut.closedmon import ClosedSymMonoidal, check_closed_structure
from volut.config import VolutConfig, resolve
from volut.errors import PreconditionError, StructuralError
from volut.fincat import FiniteCategory, GeneratedCategory, check_category

logger = logging.getLogger(__name__)


def encode(a: int, b: int, values: tuple[int, ...] | list[int]) -> str:
    return f"{a}>{b}:" + ",".join(str(v) for v in values)


def decode(mid: str) -> tuple[int, int, tuple[int, ...]]:
    try:
        shape, body = mid.split(":", 1)
        a, b = (int(s) for s in shape.split(">"))
        values = tuple(int(v) for v in body.split(",")) if body else ()
    except ValueError:
        raise StructuralError(f"{mid!r} is not a map id")
    if len(values) != a or any(not 0 <= v < b for v in values):
        raise StructuralError(f"{mid!r} is not a map {a} → {b}")
    return a, b, values


class FinSetCategory(GeneratedCategory):
    def __init__(self, bound: int):
        def hom(a: str, b: str) -> list[str]:
            na, nb = int(a), int(b)
            return [encode(na, nb, v) for v in itertools.product(range(nb), repeat=na)]

        def endpoints(m: str) -> tuple[str, str]:
            a, b, _ = decode(m)
            return str(a), str(b)

        def compose(g: str, f: str) -> str:
            a, _, fv = decode(f)
            _, c, gv = decode(g)
            return encode(a, c, [gv[x] for x in fv])

        super().__init__(
            [str(n) for n in range(bound + 1)],
            hom=hom,
            endpoints=endpoints,
            identity=lambda a: encode(int(a), int(a), range(int(a))),
            compose=compose,
            hom_size=lambda a, b: int(b) ** int(a),
            name="FinSet",
        )

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        na, nb = int(a), int(b)
        if na > 0 and nb == 0:
            return None
        return encode(na, nb, [rng.randrange(nb) for _ in range(na)])

    def inverse(self, m: str) -> str | None:
        a, b, values = decode(m)
        if a != b or len(set(values)) != a:
            return None
        inv = [0] * a
        for i, v in enumerate(values):
            inv[v] = i
        return encode(b, a, inv)


def _tensor_morphisms(f: str, g: str) -> str:
    a, a2, fv = decode(f)
    b, b2, gv = decode(g)
    return encode(a * b, a2 * b2, [fv[i] * b2 + gv[j] for i in range(a) for j in range(b)])


def _braiding(a: str, b: str) -> str:
    na, nb = int(a), int(b)
    values = [0] * (na * nb)
    for i in range(na):
        for j in range(nb):
            values[i * nb + j] = j * na + i
    return encode(na * nb, na * nb, values)


def _evaluation(a: str, b: str) -> str:
    na, nb = int(a), int(b)
    size = nb**na
    values = [(g // nb**k) % nb for g in range(size) for k in range(na)]
    return encode(size * na, nb, values)


def _psi_inverse(c: str, a: str, b: str, k: str) -> str:
    nc, na, nb = int(c), int(a), int(b)
    _, _, kv = decode(k)
    values = [sum(kv[i * na + j] * nb**j for j in range(na)) for i in range(nc)]
    return encode(nc, nb**na, values)


def finset_closed(max_size: int) -> ClosedSymMonoidal:
    bound = max(max_size**max_size * max_size, max_size**2, 1)
    ambient = FinSetCategory(bound)
    return ClosedSymMonoidal(
        ambient,
        [str(n) for n in range(max_size + 1)],
        tensor=lambda a, b: str(int(a) * int(b)),
        tensor_morphisms=_tensor_morphisms,
        unit="1",
        braiding=_braiding,
        internal_hom=lambda a, b: str(int(b) ** int(a)),
        evaluation=_evaluation,
        psi_inverse=_psi_inverse,
        name=f"FinSet≤{max_size}",
    )


def build_finset(
    max_size: int, config: VolutConfig | None = None, verify: bool = True
) -> tuple[FiniteCategory, ClosedSymMonoidal]:
    """Skeletal FinSet on 0..max_size with products and exponentials.

    Raises:
        PreconditionError: if max_size is outside 0..4
    """
    if not 0 <= max_size <= 4:
        raise PreconditionError("FinSet is supported up to size 4", max_size)
    cfg = resolve(config)
    closed = finset_closed(max_size)
    category = closed.within_range()
    if verify:
        for report in (check_category(category, cfg), check_closed_structure(closed, cfg)):
            if not report.ok:
                raise StructuralError(f"FinSet self-check failed: {report.summary()}")
    logger.info(f"built FinSet up to size {max_size}: {category.morphism_count()} morphisms")
    return category, closed
