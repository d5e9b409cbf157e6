"""
Table arithmetic for the small finite fields F2, F3 and F4, plus matrix helpers.

F4 elements are encoded as b0 + 2*b1 for b0 + b1*w with w^2 = w + 1, so that
addition is bitwise xor.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from functools import lru_cache

import numpy as np

from volut.errors import PreconditionError


class FiniteField:
    """GF(q) for q in {2, 3, 4} with precomputed add/mul/neg/inv tables."""

    SUPPORTED = (2, 3, 4)

    def __init__(self, q: int):
        if q not in self.SUPPORTED:
            raise PreconditionError(f"field size {q} is not supported", q)
        self.q = q
        self.prime = q in (2, 3)
        if self.prime:
            self.add = np.fromfunction(lambda a, b: (a + b) % q, (q, q), dtype=np.int64)
            self.mul = np.fromfunction(lambda a, b: (a * b) % q, (q, q), dtype=np.int64)
        else:
            self.add = np.fromfunction(lambda a, b: np.bitwise_xor(a, b), (q, q), dtype=np.int64)
            self.mul = np.array(
                [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]], dtype=np.int64
            )
        self.neg = np.array([int(np.argmax(self.add[a] == 0)) for a in range(q)], dtype=np.int64)
        self.inv = np.array(
            [0] + [int(np.argmax(self.mul[a] == 1)) for a in range(1, q)], dtype=np.int64
        )

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if self.prime:
            return (a @ b) % self.q
        if a.shape[1] == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        products = self.mul[a[:, :, None], b[None, :, :]]
        return np.bitwise_xor.reduce(products, axis=1)

    def matadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add[a, b]

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
        out = np.zeros((rows, cols), dtype=np.int64)
        for i, j in itertools.product(range(a.shape[0]), range(a.shape[1])):
            out[i * b.shape[0] : (i + 1) * b.shape[0], j * b.shape[1] : (j + 1) * b.shape[1]] = (
                self.mul[a[i, j], b]
            )
        return out

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inverse(self, a: np.ndarray) -> np.ndarray | None:
        """Gauss-Jordan inverse, or None when singular."""
        n = a.shape[0]
        if a.shape != (n, n):
            return None
        work = np.concatenate([a.copy(), self.identity(n)], axis=1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r, col] != 0), None)
            if pivot is None:
                return None
            work[[col, pivot]] = work[[pivot, col]]
            work[col] = self.mul[self.inv[work[col, col]], work[col]]
            for r in range(n):
                if r != col and work[r, col] != 0:
                    factor = self.neg[work[r, col]]
                    work[r] = self.add[work[r], self.mul[factor, work[col]]]
        return work[:, n:]

    def rank(self, a: np.ndarray) -> int:
        return len(rref(self, a)[1])

    def all_matrices(self, rows: int, cols: int) -> Iterator[np.ndarray]:
        for entries in itertools.product(range(self.q), repeat=rows * cols):
            yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def rref(field: FiniteField, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over the field and its pivot columns."""
    work = a.copy() % field.q if field.prime else a.copy()
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if work[i, c] != 0), None)
        if pivot is None:
            continue
        work[[r, pivot]] = work[[pivot, r]]
        work[r] = field.mul[field.inv[work[r, c]], work[r]]
        for i in range(rows):
            if i != r and work[i, c] != 0:
                work[i] = field.add[work[i], field.mul[field.neg[work[i, c]], work[r]]]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def nullspace(field: FiniteField, a: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : a x = 0}."""
    cols = a.shape[1]
    reduced, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for row, p in enumerate(pivots):
            v[p] = field.neg[reduced[row, f]]
        basis.append(v)
    if not basis:
        return np.zeros((0, cols), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def span_elements(field: FiniteField, basis: np.ndarray) -> Iterator[np.ndarray]:
    """Every vector in the row span of ``basis``."""
    k, n = basis.shape
    for coeffs in itertools.product(range(field.q), repeat=k):
        v = np.zeros(n, dtype=np.int64)
        for c, row in zip(coeffs, basis):
            v = field.add[v, field.mul[c, row]]
        yield v


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    return FiniteField(q)


GF2 = gf(2)
