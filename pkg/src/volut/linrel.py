"""
Linear relations between finite-dimensional hermitian spaces.

Scalars are exact Gaussian rationals. A relation H → H' is a subspace of
H ⊕ H', stored as the rows of its reduced row-echelon basis, so two relations
are equal exactly when their bases are. The adjoint is
V† = {(u, v) ∈ H' ⊕ H : ⟨v, x⟩ = ⟨u, y⟩ for all (x, y) ∈ V}, with the inner
product conjugate-linear in its first argument.

In finite dimension every subspace is closed, so V†† = V, V† = V††† and
(W∘V)† = V†∘W† hold on the nose; the lemma sweep still checks them exactly.
"""

from __future__ import annotations

import logging
import random
import re
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from volut.config import VolutConfig, resolve
from volut.errors import StructuralError, ValidationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def lift(cls, value: GaussianRational | Fraction | int) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(Fraction(value), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other) -> GaussianRational:
        o = GaussianRational.lift(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> GaussianRational:
        o = GaussianRational.lift(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __mul__(self, other) -> GaussianRational:
        o = GaussianRational.lift(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> GaussianRational:
        o = GaussianRational.lift(other)
        norm = o.re * o.re + o.im * o.im
        if not norm:
            raise ZeroDivisionError("division by a zero Gaussian rational")
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))

_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_SCALAR = re.compile(
    rf"^(?:(?P<re>{_RATIONAL})(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)?\*?i)?"
    rf"|(?P<pure>[+-]?(?:\d+(?:/\d+)?)?)\*?i)$"
)


def parse_scalar(text: str | int) -> GaussianRational:
    """Parse "a/b+c/d*i", "a/b", "c/d*i" or "i".

    Raises:
        StructuralError: if the text is not a Gaussian rational
    """
    if isinstance(text, int):
        return GaussianRational.lift(text)
    match = _SCALAR.match(text.replace(" ", ""))
    if not match:
        raise StructuralError(f"{text!r} is not a Gaussian rational")
    if match.group("re") is not None:
        real = Fraction(match.group("re"))
        if match.group("sign") is None:
            return GaussianRational(real)
        imag = Fraction(match.group("im") or 1)
        return GaussianRational(real, imag if match.group("sign") == "+" else -imag)
    pure = match.group("pure")
    imag = Fraction(1) if pure in ("", "+") else Fraction(-1) if pure == "-" else Fraction(pure)
    return GaussianRational(Fraction(0), imag)


def format_scalar(z: GaussianRational) -> str:
    if not z.im:
        return str(z.re)
    if not z.re:
        return f"{z.im}*i"
    sign = "+" if z.im > 0 else "-"
    return f"{z.re}{sign}{abs(z.im)}*i"


Row = tuple[GaussianRational, ...]


def rref(rows: Sequence[Sequence[GaussianRational]], ncols: int) -> tuple[tuple[Row, ...], tuple[int, ...]]:
    """Reduced row-echelon form without zero rows, and the pivot columns."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def nullspace(rows: Sequence[Sequence[GaussianRational]], ncols: int) -> list[Row]:
    """A basis of {x : Σ_k row_k x_k = 0 for every row}."""
    reduced, pivots = rref(rows, ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [ZERO] * ncols
        v[free] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence[GaussianRational]], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


@dataclass(frozen=True)
class HermSpace:
    """C^dim over the Gaussian rationals with ⟨a, b⟩ = Σ conj(a_i) b_i."""

    dim: int

    def inner(self, a: Sequence[GaussianRational], b: Sequence[GaussianRational]) -> GaussianRational:
        return sum((x.conjugate() * y for x, y in zip(a, b)), ZERO)


@dataclass(frozen=True)
class LinearRelation:
    source: HermSpace
    target: HermSpace
    basis: tuple[Row, ...]

    @property
    def width(self) -> int:
        return self.source.dim + self.target.dim

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __str__(self) -> str:
        rows = "; ".join(" ".join(format_scalar(z) for z in row) for row in self.basis)
        return f"Rel({self.source.dim}→{self.target.dim})[{rows}]"


def relation(m: int, n: int, rows: Sequence[Sequence[GaussianRational | int]]) -> LinearRelation:
    """The span of ``rows`` in C^m ⊕ C^n, canonicalized.

    Raises:
        StructuralError: if a row has the wrong length
    """
    lifted = []
    for row in rows:
        if len(row) != m + n:
            raise StructuralError(f"row of length {len(row)} in a relation {m} → {n}")
        lifted.append(tuple(GaussianRational.lift(v) for v in row))
    reduced, _ = rref(lifted, m + n)
    return LinearRelation(HermSpace(m), HermSpace(n), reduced)


def zero_relation(m: int, n: int) -> LinearRelation:
    return relation(m, n, [])


def full_relation(m: int, n: int) -> LinearRelation:
    return relation(m, n, _identity_rows(m + n))


def _identity_rows(n: int) -> list[Row]:
    return [tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)]


def matmul(
    a: Sequence[Sequence[GaussianRational]], b: Sequence[Sequence[GaussianRational]], cols: int
) -> list[Row]:
    """The product of a and b, where b has ``cols`` columns."""
    inner = len(b)
    return [
        tuple(sum((row[k] * b[k][j] for k in range(inner)), ZERO) for j in range(cols)) for row in a
    ]


def conjugate_transpose(t: Sequence[Sequence[GaussianRational]], rows: int, cols: int) -> list[Row]:
    """T* for an rows×cols matrix T."""
    return [tuple(t[i][j].conjugate() for i in range(rows)) for j in range(cols)]


def rel_graph(t: Sequence[Sequence[GaussianRational | int]], m: int, n: int) -> LinearRelation:
    """Γ(T) = {(x, Tx)} for an n×m matrix T: C^m → C^n."""
    if len(t) != n or any(len(row) != m for row in t):
        raise StructuralError(f"graph needs a {n}×{m} matrix")
    rows = []
    for i in range(m):
        unit = [ONE if j == i else ZERO for j in range(m)]
        rows.append(tuple(unit) + tuple(GaussianRational.lift(t[k][i]) for k in range(n)))
    return relation(m, n, rows)


def diagonal(h: HermSpace | int) -> LinearRelation:
    n = h.dim if isinstance(h, HermSpace) else h
    return rel_graph(_identity_rows(n), n, n)


def rel_reverse(v: LinearRelation) -> LinearRelation:
    m = v.source.dim
    return relation(v.target.dim, m, [row[m:] + row[:m] for row in v.basis])


def rel_compose(w: LinearRelation, v: LinearRelation) -> LinearRelation:
    """W∘V = {(x, z) : (x, y) ∈ V and (y, z) ∈ W for some y}.

    Raises:
        StructuralError: if the middle spaces differ
    """
    if v.target != w.source:
        raise StructuralError(f"cannot compose: middle dimensions {v.target.dim} and {w.source.dim}")
    m, n, p = v.source.dim, v.target.dim, w.target.dim
    width = m + n + p
    pad_v = [row + (ZERO,) * p for row in v.basis]
    pad_v += [tuple(ONE if j == m + n + k else ZERO for j in range(width)) for k in range(p)]
    pad_w = [tuple(ONE if j == k else ZERO for j in range(width)) for k in range(m)]
    pad_w += [(ZERO,) * m + row for row in w.basis]
    annihilator = nullspace(pad_v, width) + nullspace(pad_w, width)
    meet = nullspace(annihilator, width)
    return relation(m, p, [row[:m] + row[m + n :] for row in meet])


def rel_adjoint(v: LinearRelation) -> LinearRelation:
    """V† ⊆ H' ⊕ H, the kernel of the rows (−conj(y), conj(x)) for (x, y) in a basis of V."""
    m, n = v.source.dim, v.target.dim
    equations = [
        tuple(-z.conjugate() for z in row[m:]) + tuple(z.conjugate() for z in row[:m])
        for row in v.basis
    ]
    return relation(n, m, nullspace(equations, m + n))


def rel_closure(v: LinearRelation) -> LinearRelation:
    """Finite-dimensional subspaces are closed."""
    return v


def rel_included(v: LinearRelation, w: LinearRelation) -> bool:
    if (v.source, v.target) != (w.source, w.target):
        raise StructuralError("inclusion between relations of different types")
    return rank(w.basis + v.basis, w.width) == w.dim


def _project(v: LinearRelation, start: int, stop: int) -> list[Row]:
    return [row[start:stop] for row in v.basis]


def _as_subspace(rows: Sequence[Row], dim: int) -> LinearRelation:
    return relation(dim, 0, rows)


def rel_domain(v: LinearRelation) -> LinearRelation:
    """dom V as a relation C^m → 0."""
    return _as_subspace(_project(v, 0, v.source.dim), v.source.dim)


def rel_range(v: LinearRelation) -> LinearRelation:
    return _as_subspace(_project(v, v.source.dim, v.width), v.target.dim)


def rel_kernel(v: LinearRelation) -> LinearRelation:
    """{x : (x, 0) ∈ V}."""
    return _slice(v, v.source.dim, keep_source=True)


def rel_multivalued_part(v: LinearRelation) -> LinearRelation:
    """{y : (0, y) ∈ V}."""
    return _slice(v, v.source.dim, keep_source=False)


def _slice(v: LinearRelation, m: int, keep_source: bool) -> LinearRelation:
    width = v.width
    if keep_source:
        constraints = [tuple(ONE if j == k else ZERO for j in range(width)) for k in range(m, width)]
    else:
        constraints = [tuple(ONE if j == k else ZERO for j in range(width)) for k in range(m)]
    annihilator = nullspace(v.basis, width) + constraints
    meet = nullspace(annihilator, width)
    if keep_source:
        return _as_subspace([row[:m] for row in meet], m)
    return _as_subspace([row[m:] for row in meet], width - m)


def rel_is_graph(v: LinearRelation) -> bool:
    """Whether V is the graph of an everywhere-defined operator."""
    return rel_multivalued_part(v).dim == 0 and rel_domain(v).dim == v.source.dim


def rel_operator(v: LinearRelation) -> list[Row] | None:
    """The matrix T with V = Γ(T), when V is such a graph."""
    if not rel_is_graph(v):
        return None
    m, n = v.source.dim, v.target.dim
    return [tuple(v.basis[i][m + k] for i in range(m)) for k in range(n)]


# -- random relations and the lemma sweep -------------------------------------------


def random_scalar(rng: random.Random, real: bool = False, spread: int = 2) -> GaussianRational:
    re_part = Fraction(rng.randint(-spread, spread), rng.randint(1, 2))
    im_part = Fraction(0) if real else Fraction(rng.randint(-spread, spread), rng.randint(1, 2))
    return GaussianRational(re_part, im_part)


def random_matrix(rng: random.Random, rows: int, cols: int, real: bool = False) -> list[Row]:
    return [tuple(random_scalar(rng, real) for _ in range(cols)) for _ in range(rows)]


def random_relation(
    rng: random.Random, m: int, n: int, real: bool = False, max_rank: int | None = None
) -> LinearRelation:
    top = m + n if max_rank is None else min(max_rank, m + n)
    k = rng.randint(0, top)
    return relation(m, n, random_matrix(rng, k, m + n, real))


def enlarge(rng: random.Random, v: LinearRelation, real: bool = False) -> LinearRelation:
    """A random relation containing V."""
    extra = random_matrix(rng, rng.randint(0, 2), v.width, real)
    return relation(v.source.dim, v.target.dim, list(v.basis) + extra)


@dataclass(frozen=True)
class LaxWitness:
    v: LinearRelation
    w: LinearRelation
    lhs: LinearRelation
    rhs: LinearRelation

    def to_dict(self) -> dict:
        return {"V": str(self.v), "W": str(self.w), "V†∘W†": str(self.lhs), "(W∘V)†": str(self.rhs)}


def check_lemmas(
    config: VolutConfig | None = None, max_dim: int = 4, real: bool = False
) -> ValidationReport:
    """The relation lemmas on cfg.samples seeded random instances, checked exactly."""
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    report = ValidationReport(subject=f"linrel lemmas ({cfg.samples} samples, dims ≤ {max_dim})")
    for n in range(max_dim + 1):
        report.checked += 1
        if rel_adjoint(diagonal(n)) != diagonal(n):
            report.add("diagonal", f"Δ† ≠ Δ in dimension {n}", n)
    for i in range(cfg.samples):
        m, n, p = (rng.randint(0, max_dim) for _ in range(3))
        v = random_relation(rng, m, n, real)
        w = random_relation(rng, n, p, real)
        adj = rel_adjoint(v)
        report.checked += 6
        if rel_adjoint(adj) != rel_closure(v):
            report.add("double-adjoint", "V†† ≠ V", str(v))
        if rel_adjoint(rel_adjoint(adj)) != adj:
            report.add("triple-adjoint", "V† ≠ V†††", str(v))
        if rel_reverse(rel_reverse(v)) != v:
            report.add("reverse", "reverse is not an involution", str(v))
        big = enlarge(rng, v, real)
        if not rel_included(v, big) or not rel_included(rel_adjoint(big), adj):
            report.add("anti-tonicity", "V ⊆ W but W† ⊄ V†", (str(v), str(big)))
        big_w = enlarge(rng, w, real)
        if not rel_included(rel_compose(w, v), rel_compose(big_w, big)):
            report.add("monotonicity", "V ⊆ W, V' ⊆ W' but V'∘V ⊄ W'∘W", (str(v), str(w)))
        lhs = rel_compose(adj, rel_adjoint(w))
        if not rel_included(lhs, rel_adjoint(rel_compose(w, v))):
            report.add("lax-inclusion", "V†∘W† ⊄ (W∘V)†", (str(v), str(w)))
        if min(m, n, p) <= 3 and max(m, n, p) <= 3:
            t = random_matrix(rng, n, m, real)
            s = random_matrix(rng, p, n, real)
            report.checked += 2
            composite = rel_compose(rel_graph(s, n, p), rel_graph(t, m, n))
            if composite != rel_graph(matmul(s, t, m), m, p):
                report.add("graph-composition", "Γ(ST) ≠ Γ(S)∘Γ(T)", i)
            if rel_adjoint(rel_graph(t, m, n)) != rel_graph(conjugate_transpose(t, n, m), n, m):
                report.add("graph-adjoint", "Γ(T)† ≠ Γ(T*)", i)
    logger.info(report.summary())
    return report


def find_lax_strict_witness(
    config: VolutConfig | None = None, max_dim: int = 3, real: bool = False
) -> LaxWitness | None:
    """Search for V, W with V†∘W† strictly inside (W∘V)†.

    In finite dimension the two sides always coincide, so a None result is the
    expected outcome; the search is kept as an executable check of that fact.
    """
    cfg = resolve(config)
    rng = random.Random(cfg.seed)
    for _ in range(cfg.samples):
        m, n, p = (rng.randint(0, max_dim) for _ in range(3))
        v = random_relation(rng, m, n, real)
        w = random_relation(rng, n, p, real)
        lhs = rel_compose(rel_adjoint(v), rel_adjoint(w))
        rhs = rel_adjoint(rel_compose(w, v))
        if lhs != rhs:
            logger.info(f"strict lax inclusion found at dims {m}, {n}, {p}")
            return LaxWitness(v, w, lhs, rhs)
    logger.info(f"no strict lax inclusion among {cfg.samples} samples")
    return None
