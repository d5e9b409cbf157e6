"""
Finite-dimensional algebras and bimodules over F2.

An algebra is stored by structure constants, e_i e_j = sum_k mult[i, j, k] e_k,
with an optional star given row-wise (row i is the image of e_i). A bimodule
M: A → B is a left A-, right B-module whose actions are matrices on column
vectors: left[i] is v ↦ e_i·v and right[j] is v ↦ v·e_j.

Tensors of coordinate spaces use the Kronecker order, e_p ⊗ f_q at p*n + q,
and a linear map X: F2^n → F2^m is vectorized row-major, X[i, j] at i*n + j.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from volut.config import VolutConfig, resolve
from volut.errors import (
    PreconditionError,
    ResourceCapExceeded,
    StructuralError,
    ValidationReport,
)
from volut.fields import GF2, nullspace, rref

logger = logging.getLogger(__name__)


def _bits(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % 2


def _mm(*mats: np.ndarray) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = GF2.matmul(out, m)
    return out


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b).astype(np.int64) % 2


def _unit_vector(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def _eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


@dataclass(frozen=True)
class Quotient:
    """F2^n modulo a subspace: projection (d×n) onto the free coordinates and a section (n×d)."""

    projection: np.ndarray
    section: np.ndarray

    @property
    def dim(self) -> int:
        return self.projection.shape[0]


def quotient(relations: np.ndarray, n: int) -> Quotient:
    """Quotient of F2^n by the row span of ``relations``.

    The free columns of the reduced relations give the quotient basis; a pivot
    coordinate reduces to the free part of its row.
    """
    relations = _bits(relations).reshape(len(relations), n)
    reduced, pivots = rref(GF2, relations)
    free = [c for c in range(n) if c not in pivots]
    projection = np.zeros((len(free), n), dtype=np.int64)
    section = np.zeros((n, len(free)), dtype=np.int64)
    for t, c in enumerate(free):
        projection[t, c] = 1
        section[c, t] = 1
    for r, p in enumerate(pivots):
        projection[:, p] = reduced[r, free]
    return Quotient(projection, section)


def solution_space(system: np.ndarray, n: int) -> tuple[np.ndarray, list[int]]:
    """Basis rows of {x : system·x = 0} and the free columns that serve as coordinates."""
    system = _bits(system).reshape(len(system), n)
    _, pivots = rref(GF2, system)
    free = [c for c in range(n) if c not in pivots]
    return nullspace(GF2, system), free


def _intertwining_system(pairs: Sequence[tuple[np.ndarray, np.ndarray]], rows: int, cols: int) -> np.ndarray:
    """Equations f·S = T·f for f: rows×cols, one block per (S, T) pair."""
    blocks = [_kron(_eye(rows), s.T) ^ _kron(t, _eye(cols)) for s, t in pairs]
    if not blocks:
        return np.zeros((0, rows * cols), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


@dataclass(frozen=True, eq=False)
class FinAlgebra:
    """A unital associative algebra over F2 given by structure constants."""

    dim: int
    mult: np.ndarray
    unit: np.ndarray
    star: np.ndarray | None = None
    name: str = "A"
    basis: tuple[str, ...] = ()

    def __repr__(self) -> str:
        return f"FinAlgebra({self.name}, dim={self.dim})"

    def e(self, i: int) -> np.ndarray:
        return _unit_vector(self.dim, i)

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", _bits(x), _bits(y), self.mult) % 2

    def apply_star(self, x: np.ndarray) -> np.ndarray:
        if self.star is None:
            return _bits(x)
        return (_bits(x) @ self.star) % 2

    def left_regular(self, x: np.ndarray) -> np.ndarray:
        return np.stack([self.product(x, self.e(j)) for j in range(self.dim)], axis=1)

    def right_regular(self, x: np.ndarray) -> np.ndarray:
        return np.stack([self.product(self.e(j), x) for j in range(self.dim)], axis=1)

    def elements(self) -> Iterator[np.ndarray]:
        for bits in itertools.product((0, 1), repeat=self.dim):
            yield np.array(bits, dtype=np.int64)

    def validate(self) -> None:
        """Raise PreconditionError naming the first failing algebra law."""
        if self.dim < 1 or self.mult.shape != (self.dim,) * 3 or self.unit.shape != (self.dim,):
            raise PreconditionError(f"{self.name}: tables do not match dimension {self.dim}", self.dim)
        basis = [self.e(i) for i in range(self.dim)]
        for i, x in enumerate(basis):
            if not (np.array_equal(self.product(self.unit, x), x) and np.array_equal(self.product(x, self.unit), x)):
                raise PreconditionError(f"{self.name}: unit is not two-sided", i)
        for (i, x), (j, y), (k, z) in itertools.product(enumerate(basis), repeat=3):
            if not np.array_equal(self.product(self.product(x, y), z), self.product(x, self.product(y, z))):
                raise PreconditionError(f"{self.name}: multiplication is not associative", (i, j, k))
        if self.star is None:
            return
        if not np.array_equal(self.apply_star(self.unit), self.unit):
            raise PreconditionError(f"{self.name}: star does not fix the unit")
        for (i, x), (j, y) in itertools.product(enumerate(basis), repeat=2):
            if not np.array_equal(
                self.apply_star(self.product(x, y)), self.product(self.apply_star(y), self.apply_star(x))
            ):
                raise PreconditionError(f"{self.name}: star is not an anti-homomorphism", (i, j))
        for i, x in enumerate(basis):
            if not np.array_equal(self.apply_star(self.apply_star(x)), x):
                raise PreconditionError(f"{self.name}: star is not an involution", i)

    def with_star(self, star: np.ndarray | None, name: str | None = None) -> FinAlgebra:
        return FinAlgebra(self.dim, self.mult, self.unit, star, name or self.name, self.basis)

    @classmethod
    def from_document(cls, document: Mapping) -> FinAlgebra:
        """Parse {"basis": [...], "unit": [...], "mult": [[...] * n*n], "star": [[...] * n]}.

        Raises:
            StructuralError: if the document is malformed
        """
        try:
            basis = tuple(str(b) for b in document["basis"])
            n = len(basis)
            unit = _bits(document["unit"])
            mult = _bits(document["mult"]).reshape(n, n, n)
            star = document.get("star")
            star = None if star is None else _bits(star).reshape(n, n)
        except (KeyError, TypeError, ValueError) as e:
            raise StructuralError(f"malformed algebra document: {e}")
        if unit.shape != (n,):
            raise StructuralError(f"unit has {unit.size} entries, expected {n}")
        return cls(n, mult, unit, star, str(document.get("name", "A")), basis)

    def to_document(self) -> dict:
        n = self.dim
        document = {
            "name": self.name,
            "kind": "f2-algebra",
            "basis": list(self.basis) or [f"e{i}" for i in range(n)],
            "unit": self.unit.tolist(),
            "mult": self.mult.reshape(n * n, n).tolist(),
        }
        if self.star is not None:
            document["star"] = self.star.tolist()
        return document


def same_algebra(a: FinAlgebra, b: FinAlgebra) -> bool:
    if a is b:
        return True
    if a.dim != b.dim or not np.array_equal(a.mult, b.mult) or not np.array_equal(a.unit, b.unit):
        return False
    sa = a.star if a.star is not None else _eye(a.dim)
    sb = b.star if b.star is not None else _eye(b.dim)
    return np.array_equal(sa, sb)


def algebra_from_products(
    name: str, basis: Sequence[str], products: Mapping[tuple[int, int], Sequence[int]]
) -> FinAlgebra:
    """An algebra with e_0 as unit and the remaining products given explicitly (missing ones are 0)."""
    n = len(basis)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        mult[0, i, i] = 1
        mult[i, 0, i] = 1
    for (i, j), value in products.items():
        mult[i, j] = _bits(value)
    return FinAlgebra(n, mult, _unit_vector(n, 0), None, name, tuple(basis))


def opposite_algebra(a: FinAlgebra) -> FinAlgebra:
    return FinAlgebra(a.dim, a.mult.transpose(1, 0, 2).copy(), a.unit, a.star, f"{a.name}^op", a.basis)


def field_f2() -> FinAlgebra:
    return algebra_from_products("F2", ["1"], {})


def split_f2() -> FinAlgebra:
    return algebra_from_products("F2×F2", ["1", "e"], {(1, 1): [0, 1]})


def dual_numbers() -> FinAlgebra:
    return algebra_from_products("F2[x]/x²", ["1", "x"], {(1, 1): [0, 0]})


def field_f4() -> FinAlgebra:
    return algebra_from_products("F4", ["1", "w"], {(1, 1): [1, 1]})


def f2_algebras(max_dim: int = 2) -> list[FinAlgebra]:
    """The unital F2-algebras of dimension ≤ max_dim up to isomorphism (max_dim ≤ 2)."""
    if max_dim > 2:
        raise PreconditionError("algebras are classified up to dimension 2", max_dim)
    algebras = [field_f2()]
    if max_dim >= 2:
        algebras += [split_f2(), dual_numbers(), field_f4()]
    return algebras


def star_involutions(a: FinAlgebra) -> list[np.ndarray]:
    """Every involutive anti-automorphism of ``a``, as row-wise matrices."""
    stars = []
    for star in GF2.all_matrices(a.dim, a.dim):
        try:
            a.with_star(star).validate()
        except PreconditionError:
            continue
        stars.append(star)
    return stars


@dataclass(frozen=True, eq=False)
class Bimodule:
    """An A-B bimodule on F2^dim with commuting left and right actions."""

    left_algebra: FinAlgebra
    right_algebra: FinAlgebra
    dim: int
    left: np.ndarray
    right: np.ndarray
    name: str = "M"

    def __repr__(self) -> str:
        return f"Bimodule({self.name}: {self.left_algebra.name} → {self.right_algebra.name}, dim={self.dim})"

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        return np.tensordot(_bits(a), self.left, axes=1) % 2

    def right_matrix(self, b: np.ndarray) -> np.ndarray:
        return np.tensordot(_bits(b), self.right, axes=1) % 2

    def key(self) -> bytes:
        return self.left.tobytes() + b"|" + self.right.tobytes()


def check_bimodule(m: Bimodule) -> ValidationReport:
    report = ValidationReport(subject=f"bimodule {m.name}")
    a, b = m.left_algebra, m.right_algebra
    ident = _eye(m.dim)
    if m.left.shape != (a.dim, m.dim, m.dim) or m.right.shape != (b.dim, m.dim, m.dim):
        report.add("shape", "action tensors do not match the dimensions", (m.left.shape, m.right.shape))
        return report
    if not np.array_equal(m.left_matrix(a.unit), ident):
        report.add("left-unit", "the unit of the left algebra does not act as the identity")
    if not np.array_equal(m.right_matrix(b.unit), ident):
        report.add("right-unit", "the unit of the right algebra does not act as the identity")
    for i, j in itertools.product(range(a.dim), repeat=2):
        report.checked += 1
        if not np.array_equal(m.left_matrix(a.product(a.e(i), a.e(j))), _mm(m.left[i], m.left[j])):
            report.add("left-action", f"e{i}e{j} acts wrongly on the left", (i, j))
    for i, j in itertools.product(range(b.dim), repeat=2):
        report.checked += 1
        if not np.array_equal(m.right_matrix(b.product(b.e(i), b.e(j))), _mm(m.right[j], m.right[i])):
            report.add("right-action", f"e{i}e{j} acts wrongly on the right", (i, j))
    for i, j in itertools.product(range(a.dim), range(b.dim)):
        report.checked += 1
        if not np.array_equal(_mm(m.left[i], m.right[j]), _mm(m.right[j], m.left[i])):
            report.add("commuting", f"left e{i} and right e{j} do not commute", (i, j))
    return report


def regular_bimodule(a: FinAlgebra) -> Bimodule:
    left = np.stack([a.left_regular(a.e(i)) for i in range(a.dim)])
    right = np.stack([a.right_regular(a.e(j)) for j in range(a.dim)])
    return Bimodule(a, a, a.dim, left, right, a.name)


def zero_bimodule(a: FinAlgebra, b: FinAlgebra) -> Bimodule:
    return Bimodule(
        a, b, 0, np.zeros((a.dim, 0, 0), dtype=np.int64), np.zeros((b.dim, 0, 0), dtype=np.int64), "0"
    )


def induced_bimodule(m: Bimodule, q: Quotient, name: str) -> Bimodule:
    """The actions of ``m`` carried to a quotient by an invariant subspace."""
    left = np.stack([_mm(q.projection, x, q.section) for x in m.left]).reshape(len(m.left), q.dim, q.dim)
    right = np.stack([_mm(q.projection, x, q.section) for x in m.right]).reshape(
        len(m.right), q.dim, q.dim
    )
    return Bimodule(m.left_algebra, m.right_algebra, q.dim, left, right, name)


def balanced(m: Bimodule, n: Bimodule) -> tuple[Bimodule, Quotient]:
    """M ⊗_B N with the quotient data of M ⊗ N it was cut from.

    Raises:
        StructuralError: if the middle algebras differ
    """
    if not same_algebra(m.right_algebra, n.left_algebra):
        raise StructuralError(f"cannot tensor {m.name} and {n.name} over different algebras")
    size = m.dim * n.dim
    relations = [
        (_kron(r, _eye(n.dim)) ^ _kron(_eye(m.dim), l)).T for r, l in zip(m.right, n.left)
    ]
    stacked = np.concatenate(relations, axis=0) if relations else np.zeros((0, size), dtype=np.int64)
    q = quotient(stacked, size)
    left = np.stack([_mm(q.projection, _kron(x, _eye(n.dim)), q.section) for x in m.left])
    right = np.stack([_mm(q.projection, _kron(_eye(m.dim), y), q.section) for y in n.right])
    tensor = Bimodule(
        m.left_algebra,
        n.right_algebra,
        q.dim,
        left.reshape(len(m.left), q.dim, q.dim),
        right.reshape(len(n.right), q.dim, q.dim),
        f"{m.name}⊗{n.name}",
    )
    logger.debug(f"{tensor.name}: dimension {q.dim} from {size}")
    return tensor, q


def balanced_tensor(m: Bimodule, n: Bimodule) -> Bimodule:
    return balanced(m, n)[0]


def hom_bimodules(x: Bimodule, y: Bimodule) -> list[np.ndarray]:
    """A basis of the bimodule maps x → y, as y.dim × x.dim matrices."""
    pairs = list(zip(x.left, y.left)) + list(zip(x.right, y.right))
    basis, _ = solution_space(_intertwining_system(pairs, y.dim, x.dim), y.dim * x.dim)
    return [row.reshape(y.dim, x.dim) for row in basis]


def is_bimodule_map(f: np.ndarray, x: Bimodule, y: Bimodule) -> bool:
    if f.shape != (y.dim, x.dim):
        return False
    for s, t in list(zip(x.left, y.left)) + list(zip(x.right, y.right)):
        if not np.array_equal(_mm(f, s), _mm(t, f)):
            return False
    return True


def check_bimodule_iso(f: np.ndarray, x: Bimodule, y: Bimodule, subject: str = "iso") -> ValidationReport:
    report = ValidationReport(subject=subject, checked=1)
    if not is_bimodule_map(f, x, y):
        report.add("not-a-map", f"{subject} does not commute with the actions", f)
    elif x.dim != y.dim or GF2.inverse(f) is None:
        report.add("not-invertible", f"{subject} is not invertible", f)
    return report


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """M^N_C: the right C-linear maps N → M, with coordinates read off the free columns."""

    bimodule: Bimodule
    maps: np.ndarray
    free: list[int]
    target: Bimodule
    source: Bimodule

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        return _bits(x).reshape(-1)[self.free]


def intertwiner_object(m: Bimodule, n: Bimodule) -> Intertwiner:
    """The intertwiner object of M: A → C and N: B → C, an A-B bimodule.

    a·X = L^M_a X and X·b = X L^N_b.

    Raises:
        StructuralError: if M and N have different right algebras
    """
    if not same_algebra(m.right_algebra, n.right_algebra):
        raise StructuralError(f"{m.name} and {n.name} have different right algebras")
    system = _intertwining_system(list(zip(n.right, m.right)), m.dim, n.dim)
    basis, free = solution_space(system, m.dim * n.dim)
    maps = basis.reshape(len(basis), m.dim, n.dim)
    h = len(maps)

    def action(transform) -> np.ndarray:
        columns = [transform(x).reshape(-1)[free] for x in maps]
        return np.stack(columns, axis=1) if columns else np.zeros((0, 0), dtype=np.int64)

    left = np.stack([action(lambda x, a=a: _mm(a, x)) for a in m.left]).reshape(len(m.left), h, h)
    right = np.stack([action(lambda x, b=b: _mm(x, b)) for b in n.left]).reshape(len(n.left), h, h)
    bimodule = Bimodule(m.left_algebra, n.left_algebra, h, left, right, f"{m.name}^{n.name}")
    return Intertwiner(bimodule, maps, free, m, n)


def evaluation_map(intertwiner: Intertwiner) -> tuple[np.ndarray, Bimodule]:
    """ev: M^N ⊗_B N → M, X ⊗ n ↦ X(n), with its source."""
    n, m = intertwiner.source, intertwiner.target
    tensor, q = balanced(intertwiner.bimodule, n)
    full = np.zeros((m.dim, intertwiner.bimodule.dim * n.dim), dtype=np.int64)
    for s, x in enumerate(intertwiner.maps):
        for j in range(n.dim):
            full[:, s * n.dim + j] = x[:, j]
    return _mm(full, q.section), tensor


def transpose_map(intertwiner: Intertwiner, q: Quotient, f: np.ndarray) -> np.ndarray:
    """The map P ⊗_B N → M, p ⊗ n ↦ f(p)(n), of a bimodule map f: P → M^N."""
    n = intertwiner.source
    mpq = np.einsum("sp,smq->mpq", f, intertwiner.maps) % 2
    full = mpq.reshape(intertwiner.target.dim, f.shape[1] * n.dim)
    return _mm(full, q.section)


def _tensor_with_identity(f: np.ndarray, n: Bimodule, q_src: Quotient, q_tgt: Quotient) -> np.ndarray:
    return _mm(q_tgt.projection, _kron(f, _eye(n.dim)), q_src.section)


def verify_morita_closedness(
    a: FinAlgebra,
    b: FinAlgebra,
    c: FinAlgebra,
    m: Bimodule,
    n: Bimodule,
    p: Bimodule,
    p2: Bimodule | None = None,
    config: VolutConfig | None = None,
) -> ValidationReport:
    """Check hom_{A,B}(P, M^N_C) ≅ hom_{A,C}(P ⊗_B N, M) for M: A→C, N: B→C, P: A→B.

    The bijection sends f to p ⊗ n ↦ f(p)(n). Both sides are solved as linear
    systems, the map is checked to land in the right-hand side and to be
    injective, and naturality is checked against every map P2 → P (P2 = P by default).

    Raises:
        StructuralError: if the bimodules do not fit the algebras
        ResourceCapExceeded: if dim M · dim N · dim P exceeds the Morita cap
    """
    cfg = resolve(config)
    expected = [(m, a, c), (n, b, c), (p, a, b)] + ([(p2, a, b)] if p2 is not None else [])
    for module, left, right in expected:
        if not (same_algebra(module.left_algebra, left) and same_algebra(module.right_algebra, right)):
            raise StructuralError(f"{module.name} is not a {left.name}-{right.name} bimodule")
    required = m.dim * n.dim * p.dim
    if required > cfg.morita_cap:
        raise ResourceCapExceeded("Morita closedness check", cfg.morita_cap, required)
    report = ValidationReport(subject=f"closedness {m.name}^{n.name} vs {p.name}")
    intertwiner = intertwiner_object(m, n)
    tensor, q = balanced(p, n)
    lhs = hom_bimodules(p, intertwiner.bimodule)
    rhs = hom_bimodules(tensor, m)
    report.checked += 1
    if len(lhs) != len(rhs):
        report.add("dimension", f"hom spaces have dimensions {len(lhs)} and {len(rhs)}", (len(lhs), len(rhs)))
    images = [transpose_map(intertwiner, q, f) for f in lhs]
    for i, g in enumerate(images):
        report.checked += 1
        if not is_bimodule_map(g, tensor, m):
            report.add("not-a-map", f"the image of basis map {i} is not a bimodule map", i)
    if images:
        stacked = np.stack([g.reshape(-1) for g in images])
        if GF2.rank(stacked) != len(images):
            report.add("not-injective", "the transpose of some nonzero map vanishes")
    if len(lhs) <= 8:
        seen = set()
        for coeffs in itertools.product((0, 1), repeat=len(lhs)):
            f = sum((k * x for k, x in zip(coeffs, lhs)), np.zeros((intertwiner.bimodule.dim, p.dim), dtype=np.int64)) % 2
            seen.add(transpose_map(intertwiner, q, f).tobytes())
        report.checked += len(seen)
        if len(seen) != 2 ** len(lhs):
            report.add("not-injective", "enumeration found colliding transposes", len(seen))
    other = p2 if p2 is not None else p
    other_tensor, other_q = balanced(other, n)
    for g in hom_bimodules(other, p):
        lifted = _tensor_with_identity(g, n, other_q, q)
        for i, f in enumerate(lhs):
            report.checked += 1
            lhs_value = transpose_map(intertwiner, other_q, _mm(f, g))
            rhs_value = _mm(transpose_map(intertwiner, q, f), lifted)
            if not np.array_equal(lhs_value, rhs_value):
                report.add("naturality", f"transpose is not natural at basis map {i}", g)
    return report


def check_counit(m: Bimodule, n: Bimodule) -> ValidationReport:
    """The identity of M^N transposes to the evaluation map."""
    intertwiner = intertwiner_object(m, n)
    ev, _ = evaluation_map(intertwiner)
    _, q = balanced(intertwiner.bimodule, n)
    report = ValidationReport(subject=f"counit {m.name}^{n.name}", checked=1)
    if not np.array_equal(transpose_map(intertwiner, q, _eye(intertwiner.bimodule.dim)), ev):
        report.add("counit", "the identity does not transpose to the evaluation")
    return report


def left_unitor(m: Bimodule) -> tuple[np.ndarray, Bimodule]:
    """A ⊗_A M → M, a ⊗ x ↦ a·x."""
    unit = regular_bimodule(m.left_algebra)
    tensor, q = balanced(unit, m)
    full = np.concatenate([m.left[i] for i in range(unit.dim)], axis=1)
    return _mm(full, q.section), tensor


def right_unitor(m: Bimodule) -> tuple[np.ndarray, Bimodule]:
    """M ⊗_B B → M, x ⊗ b ↦ x·b."""
    unit = regular_bimodule(m.right_algebra)
    tensor, q = balanced(m, unit)
    full = np.zeros((m.dim, m.dim * unit.dim), dtype=np.int64)
    for p_, j in itertools.product(range(m.dim), range(unit.dim)):
        full[:, p_ * unit.dim + j] = m.right[j][:, p_]
    return _mm(full, q.section), tensor


def associator(m: Bimodule, n: Bimodule, p: Bimodule) -> tuple[np.ndarray, Bimodule, Bimodule]:
    """(M ⊗ N) ⊗ P → M ⊗ (N ⊗ P), with source and target."""
    mn, q_mn = balanced(m, n)
    src, q_src = balanced(mn, p)
    np_, q_np = balanced(n, p)
    tgt, q_tgt = balanced(m, np_)
    expand = _kron(q_mn.section, _eye(p.dim))
    collapse = _mm(q_tgt.projection, _kron(_eye(m.dim), q_np.projection))
    return _mm(collapse, expand, q_src.section), src, tgt


def bimodules(
    a: FinAlgebra, b: FinAlgebra, max_dim: int = 2, min_dim: int = 0
) -> list[Bimodule]:
    """All A-B bimodules of dimension min_dim..max_dim up to isomorphism.

    Raises:
        PreconditionError: if an algebra does not have e_0 as its unit
    """
    for alg in (a, b):
        if not np.array_equal(alg.unit, alg.e(0)):
            raise PreconditionError(f"{alg.name}: enumeration expects e_0 as the unit", alg.name)
    found: list[Bimodule] = []
    for dim in range(min_dim, max_dim + 1):
        lefts = _representations(a, dim, opposite=False)
        rights = _representations(b, dim, opposite=True)
        group = [g for g in GF2.all_matrices(dim, dim) if GF2.inverse(g) is not None]
        keys = set()
        for left, right in itertools.product(lefts, rights):
            if any(not np.array_equal(_mm(x, y), _mm(y, x)) for x in left for y in right):
                continue
            key = min(
                b"".join(_mm(g, x, GF2.inverse(g)).tobytes() for x in (*left, *right)) for g in group
            )
            if key in keys:
                continue
            keys.add(key)
            found.append(
                Bimodule(a, b, dim, left.reshape(a.dim, dim, dim), right.reshape(b.dim, dim, dim), f"M{len(found)}")
            )
    logger.debug(f"{len(found)} {a.name}-{b.name} bimodules up to dimension {max_dim}")
    return found


def _representations(alg: FinAlgebra, dim: int, opposite: bool) -> list[np.ndarray]:
    """Action tensors of ``alg`` on F2^dim with e_0 acting as the identity."""
    reps = []
    choices = list(GF2.all_matrices(dim, dim))
    for images in itertools.product(choices, repeat=alg.dim - 1):
        action = np.stack([_eye(dim), *images]).reshape(alg.dim, dim, dim)
        ok = True
        for i, j in itertools.product(range(alg.dim), repeat=2):
            prod = np.tensordot(alg.product(alg.e(i), alg.e(j)), action, axes=1) % 2
            expected = _mm(action[j], action[i]) if opposite else _mm(action[i], action[j])
            if not np.array_equal(prod, expected):
                ok = False
                break
        if ok:
            reps.append(action)
    return reps


@dataclass(frozen=True, eq=False)
class HermBimodule:
    """A bimodule M: A → B with a B-valued pairing, gram[p, q] = ⟨e_p, e_q⟩.

    The pairing is right B-linear in the second slot, star-linear in the first,
    symmetric up to star and moves A across as a^⋆. Symmetry is the lax
    hermitian fixed-point equation for theta: m ↦ ⟨m, −⟩.
    """

    module: Bimodule
    gram: np.ndarray
    name: str = "H"

    def pair(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("p,q,pqk->k", _bits(x), _bits(y), self.gram) % 2


def check_herm(h: HermBimodule) -> ValidationReport:
    m = h.module
    a, b = m.left_algebra, m.right_algebra
    report = ValidationReport(subject=f"hermitian {h.name}")
    if h.gram.shape != (m.dim, m.dim, b.dim):
        report.add("shape", "the gram tensor does not match the bimodule", h.gram.shape)
        return report
    basis = [_unit_vector(m.dim, i) for i in range(m.dim)]
    for (p, x), (q, y) in itertools.product(enumerate(basis), repeat=2):
        value = h.pair(x, y)
        report.checked += 1
        if not np.array_equal(b.apply_star(value), h.pair(y, x)):
            report.add("symmetry", f"⟨e{p}, e{q}⟩^⋆ ≠ ⟨e{q}, e{p}⟩", (p, q))
        for k in range(b.dim):
            bk = b.e(k)
            if not np.array_equal(h.pair(x, _mm(m.right[k], y[:, None])[:, 0]), b.product(value, bk)):
                report.add("right-linear", f"⟨e{p}, e{q}·b{k}⟩ ≠ ⟨e{p}, e{q}⟩b{k}", (p, q, k))
            if not np.array_equal(
                h.pair(_mm(m.right[k], x[:, None])[:, 0], y), b.product(b.apply_star(bk), value)
            ):
                report.add("star-linear", f"⟨e{p}·b{k}, e{q}⟩ ≠ b{k}^⋆⟨e{p}, e{q}⟩", (p, q, k))
        for i in range(a.dim):
            ai = a.e(i)
            moved = _mm(m.left_matrix(a.apply_star(ai)), y[:, None])[:, 0]
            if not np.array_equal(h.pair(_mm(m.left[i], x[:, None])[:, 0], y), h.pair(x, moved)):
                report.add("left-adjoint", f"⟨a{i}e{p}, e{q}⟩ ≠ ⟨e{p}, a{i}^⋆e{q}⟩", (p, q, i))
    return report


def radical(h: HermBimodule) -> np.ndarray:
    """Basis rows of {v : ⟨v, w⟩ = 0 for all w}."""
    m, k = h.module.dim, h.module.right_algebra.dim
    system = h.gram.transpose(1, 2, 0).reshape(m * k, m)
    basis, _ = solution_space(system, m)
    return basis


def theta_invertible(h: HermBimodule) -> bool:
    """Whether m ↦ ⟨m, −⟩ is a bijection onto hom_B(M, B)."""
    m, b = h.module, h.module.right_algebra
    if len(radical(h)):
        return False
    regular = regular_bimodule(b)
    system = _intertwining_system(list(zip(m.right, regular.right)), b.dim, m.dim)
    basis, _ = solution_space(system, b.dim * m.dim)
    return len(basis) == m.dim


def unit_herm(a: FinAlgebra) -> HermBimodule:
    """A as an A-A bimodule with ⟨x, y⟩ = x^⋆y."""
    gram = np.stack(
        [np.stack([a.product(a.apply_star(a.e(p)), a.e(q)) for q in range(a.dim)]) for p in range(a.dim)]
    )
    return HermBimodule(regular_bimodule(a), gram, f"⟨{a.name}⟩")


def herm_compose(hm: HermBimodule, hn: HermBimodule) -> tuple[HermBimodule, Quotient]:
    """The pairing ⟨m⊗n, m′⊗n′⟩ = ⟨n, ⟨m, m′⟩·n′⟩ on M ⊗_B N, with the quotient data."""
    m, n = hm.module, hn.module
    tensor, q = balanced(m, n)
    size = m.dim * n.dim
    full = np.zeros((size, size, n.right_algebra.dim), dtype=np.int64)
    for p, p2 in itertools.product(range(m.dim), repeat=2):
        act = n.left_matrix(hm.gram[p, p2])
        for j, j2 in itertools.product(range(n.dim), repeat=2):
            full[p * n.dim + j, p2 * n.dim + j2] = hn.pair(_unit_vector(n.dim, j), act[:, j2])
    gram = np.einsum("xt,yu,xyk->tuk", q.section, q.section, full) % 2
    return HermBimodule(tensor, gram, f"{hm.name}⊗{hn.name}"), q


def nondegenerate(h: HermBimodule) -> HermBimodule:
    """The quotient of h by the radical of its pairing."""
    rad = radical(h)
    q = quotient(rad, h.module.dim)
    module = induced_bimodule(h.module, q, f"{h.module.name}/rad")
    gram = np.einsum("xt,yu,xyk->tuk", q.section, q.section, h.gram) % 2
    logger.debug(f"{h.name}: radical of dimension {len(rad)}")
    return HermBimodule(module, gram, f"{h.name}/rad")


def hermitian_structures(m: Bimodule, honest_only: bool = True) -> Iterator[HermBimodule]:
    """Every pairing on m satisfying the hermitian axioms, in the order of its bits."""
    shape = (m.dim, m.dim, m.right_algebra.dim)
    for bits in itertools.product((0, 1), repeat=int(np.prod(shape))):
        h = HermBimodule(m, np.array(bits, dtype=np.int64).reshape(shape), m.name)
        if check_herm(h).ok and (not honest_only or theta_invertible(h)):
            yield h


@dataclass(frozen=True)
class DegenerateComposite:
    left: HermBimodule
    right: HermBimodule
    composite: HermBimodule

    def to_dict(self) -> dict:
        def describe(h: HermBimodule) -> dict:
            m = h.module
            return {
                "bimodule": f"{m.left_algebra.name} → {m.right_algebra.name}",
                "dim": m.dim,
                "gram": h.gram.tolist(),
            }

        return {
            "left": describe(self.left),
            "right": describe(self.right),
            "composite": describe(self.composite),
            "radical_dim": int(len(radical(self.composite))),
        }


def herm_search(
    algebras: Sequence[FinAlgebra] | None = None, max_dim: int = 2, config: VolutConfig | None = None
) -> DegenerateComposite | None:
    """The first pair of honest hermitian bimodules with a degenerate composite.

    Candidates are scanned by module dimensions, then algebras, then bimodules
    and pairings in enumeration order, so the result is deterministic.

    Raises:
        ResourceCapExceeded: if more than search_cap compositions are tried
    """
    cfg = resolve(config)
    algebras = list(algebras) if algebras is not None else f2_algebras(2)
    tried = 0
    cache: dict[tuple[int, int, int], list[HermBimodule]] = {}

    def honest(x: int, y: int, dim: int) -> list[HermBimodule]:
        if (x, y, dim) not in cache:
            modules = bimodules(algebras[x], algebras[y], dim, dim)
            cache[(x, y, dim)] = [h for mod in modules for h in hermitian_structures(mod)]
        return cache[(x, y, dim)]

    for mdim, ndim in itertools.product(range(1, max_dim + 1), repeat=2):
        for bi, ai, ci in itertools.product(range(len(algebras)), repeat=3):
            for hm in honest(ai, bi, mdim):
                for hn in honest(bi, ci, ndim):
                    tried += 1
                    if tried > cfg.search_cap:
                        raise ResourceCapExceeded("hermitian composition search", cfg.search_cap)
                    composite, _ = herm_compose(hm, hn)
                    if len(radical(composite)):
                        logger.info(f"degenerate composite after {tried} compositions")
                        return DegenerateComposite(hm, hn, composite)
    logger.info(f"no degenerate composite among {tried} compositions")
    return None


def degenerate_witness() -> DegenerateComposite:
    """k over F2[x]/x² paired by x on one side and by 1 on the other; the composite pairs to 0."""
    f2, dual = field_f2(), dual_numbers()
    one = np.ones((1, 1, 1), dtype=np.int64)
    m = Bimodule(f2, dual, 1, one.copy(), np.array([[[1]], [[0]]], dtype=np.int64), "k")
    n = Bimodule(dual, f2, 1, np.array([[[1]], [[0]]], dtype=np.int64), one.copy(), "k")
    hm = HermBimodule(m, np.array([[[0, 1]]], dtype=np.int64), "k_x")
    hn = HermBimodule(n, np.array([[[1]]], dtype=np.int64), "k_1")
    composite, _ = herm_compose(hm, hn)
    return DegenerateComposite(hm, hn, composite)
