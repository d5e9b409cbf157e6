"""
Skeletal finite-dimensional vector spaces over F2, F3 and F4.

Objects are dimensions; a morphism X: a → b is a b×a matrix written as
"{b}x{a}:{entries}" with the entries row-major, so composition is the matrix
product G@F. The tensor is the Kronecker product and b^a has dimension ab, the
entry (i, j) of a b×a matrix sitting at index i*a + j.
"""

from __future__ import annotations

import logging
import random

import numpy as np

from volut.closedmon import ClosedSymMonoidal, check_closed_structure
from volut.config import VolutConfig, resolve
from volut.errors import ResourceCapExceeded, StructuralError
from volut.fields import FiniteField, gf
from volut.fincat import FiniteCategory, Functor, GeneratedCategory, Variance, check_category
from volut.volutive import Kind, LaxVolFunctor, VolutiveStructure, check_volutive

logger = logging.getLogger(__name__)


def encode(matrix: np.ndarray) -> str:
    rows, cols = matrix.shape
    return f"{rows}x{cols}:" + "".join(str(int(v)) for v in matrix.reshape(-1))


def decode(mid: str) -> np.ndarray:
    try:
        shape, entries = mid.split(":", 1)
        rows, cols = (int(s) for s in shape.split("x"))
        values = [int(ch) for ch in entries]
    except ValueError:
        raise StructuralError(f"{mid!r} is not a matrix id")
    if len(values) != rows * cols:
        raise StructuralError(f"{mid!r} has {len(values)} entries, expected {rows * cols}")
    return np.array(values, dtype=np.int64).reshape(rows, cols)


class MatrixCategory(GeneratedCategory):
    """Dimensions 0..bound over a finite field, generated on demand."""

    def __init__(self, field: FiniteField, bound: int):
        self.field = field

        def hom(a: str, b: str) -> list[str]:
            return [encode(x) for x in field.all_matrices(int(b), int(a))]

        def endpoints(m: str) -> tuple[str, str]:
            x = decode(m)
            if x.size and int(x.max()) >= field.q:
                raise StructuralError(f"{m!r} has entries outside GF({field.q})")
            return str(x.shape[1]), str(x.shape[0])

        super().__init__(
            [str(n) for n in range(bound + 1)],
            hom=hom,
            endpoints=endpoints,
            identity=lambda a: encode(field.identity(int(a))),
            compose=lambda g, f: encode(field.matmul(decode(g), decode(f))),
            hom_size=lambda a, b: field.q ** (int(a) * int(b)),
            name=f"Vect(F{field.q})",
        )

    def random_morphism(self, a: str, b: str, rng: random.Random) -> str | None:
        rows, cols = int(b), int(a)
        values = [rng.randrange(self.field.q) for _ in range(rows * cols)]
        return encode(np.array(values, dtype=np.int64).reshape(rows, cols))

    def inverse(self, m: str) -> str | None:
        inv = self.field.inverse(decode(m))
        return None if inv is None else encode(inv)

    def transpose(self, m: str) -> str:
        return encode(decode(m).T.copy())


def braiding_matrix(a: int, b: int) -> np.ndarray:
    """The permutation a⊗b → b⊗a sending e_i⊗e_j to e_j⊗e_i."""
    p = np.zeros((a * b, a * b), dtype=np.int64)
    for i in range(a):
        for j in range(b):
            p[j * a + i, i * b + j] = 1
    return p


def evaluation_matrix(a: int, b: int) -> np.ndarray:
    """ev: b^a⊗a → b with e_{ij}⊗e_k ↦ δ_jk e_i."""
    ev = np.zeros((b, a * b * a), dtype=np.int64)
    for i in range(b):
        for j in range(a):
            ev[i, (i * a + j) * a + j] = 1
    return ev


def fdvect_closed(field: FiniteField, max_dim: int, dualizing_bound: int | None = None) -> ClosedSymMonoidal:
    """The closed structure on dims 0..max_dim inside an ambient range large enough for it."""
    bound = dualizing_bound or max(1, max_dim) ** 4
    ambient = MatrixCategory(field, bound)

    def psi_inverse(c: str, a: str, b: str, k: str) -> str:
        kc, ka, kb = int(c), int(a), int(b)
        km = decode(k)
        h = np.zeros((ka * kb, kc), dtype=np.int64)
        for i in range(kb):
            for j in range(ka):
                for l in range(kc):
                    h[i * ka + j, l] = km[i, l * ka + j]
        return encode(h)

    return ClosedSymMonoidal(
        ambient,
        [str(n) for n in range(max_dim + 1)],
        tensor=lambda a, b: str(int(a) * int(b)),
        tensor_morphisms=lambda f, g: encode(field.kron(decode(f), decode(g))),
        unit="1",
        braiding=lambda a, b: encode(braiding_matrix(int(a), int(b))),
        internal_hom=lambda a, b: str(int(a) * int(b)),
        evaluation=lambda a, b: encode(evaluation_matrix(int(a), int(b))),
        psi_inverse=psi_inverse,
        name=f"Vect(F{field.q})≤{max_dim}",
    )


def transpose_structure(category: FiniteCategory, field: FiniteField) -> VolutiveStructure:
    """d(n) = n, d(X) = X^T, eta = identity: the hand-built strict structure."""
    morphisms = {m: encode(decode(m).T.copy()) for m in category.morphisms()}
    eta = {a: category.identity(a) for a in category.objects}
    return VolutiveStructure.from_maps(
        category, {a: a for a in category.objects}, morphisms, eta, Kind.STRICT, f"Vect(F{field.q})"
    )


def build_fdvect(
    q: int, max_dim: int, config: VolutConfig | None = None, verify: bool = True
) -> tuple[FiniteCategory, ClosedSymMonoidal, VolutiveStructure]:
    """Skeletal F_q-Vect on dims 0..max_dim with its closed and strict volutive structures.

    Raises:
        ResourceCapExceeded: if q^(max_dim²) exceeds the morphism cap
        StructuralError: if a self-check fails
    """
    cfg = resolve(config)
    field = gf(q)
    largest = q ** (max_dim * max_dim)
    if largest > cfg.cap:
        raise ResourceCapExceeded(f"Vect(F{q}) up to dimension {max_dim}", cfg.cap, largest)
    closed = fdvect_closed(field, max_dim)
    category = closed.within_range()
    v = transpose_structure(category, field)
    if verify:
        for report in (
            check_category(category, cfg),
            check_closed_structure(closed, cfg),
            check_volutive(v, Kind.STRICT, cfg),
        ):
            if not report.ok:
                raise StructuralError(f"Vect(F{q}) self-check failed: {report.summary()}")
    logger.info(f"built Vect(F{q}) up to dimension {max_dim}: {category.morphism_count()} morphisms")
    return category, closed, v


def field_extension(small: VolutiveStructure, large: VolutiveStructure) -> LaxVolFunctor:
    """Scalar extension F2-Vect → F4-Vect; F2 entries keep their encoding in F4."""
    base, target = small.base, large.base
    missing = [a for a in base.objects if not target.has_object(a)]
    if missing:
        raise StructuralError(f"target lacks dimensions {missing}")
    functor = Functor(base, target, {a: a for a in base.objects}, lambda m: m, Variance.COVARIANT, "F4⊗-")
    alpha = {a: target.identity(a) for a in base.objects}
    return LaxVolFunctor(functor, small, large, alpha, "F4⊗-")
