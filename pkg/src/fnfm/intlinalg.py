"""Exact integer linear algebra: kernels, Diophantine systems, periodic lattices.

Matrices are plain nested sequences of Python ints (row-major).  All
arithmetic is exact; nothing here ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = Sequence[Sequence[int]]
Vector = Sequence[int]

# Finite orders in GL2(Z) are 1, 2, 3, 4, 6.
PERIOD_EXPONENT = 12


def _shape(M: Matrix) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(A: Matrix, B: Matrix) -> list[list[int]]:
    n, k = _shape(A)
    k2, m = _shape(B)
    if k != k2:
        raise ValueError("dimension mismatch")
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def matvec(A: Matrix, x: Vector) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def matpow(A: Matrix, e: int) -> list[list[int]]:
    n, m = _shape(A)
    if n != m:
        raise ValueError("square matrix required")
    out = identity(n)
    base = [list(r) for r in A]
    while e:
        if e & 1:
            out = matmul(out, base)
        base = matmul(base, base)
        e >>= 1
    return out


def _column_echelon(A: Matrix):
    """Unimodular column reduction: returns (H, U, pivots) with A·U = H.

    H is in column echelon form; ``pivots`` lists (row, col) of the leading
    entries, which are positive.  Columns of H beyond the last pivot are zero.
    """
    rows, cols = _shape(A)
    H = [list(r) for r in A]
    U = identity(cols)

    def colop(dst, src, q):
        # column dst -= q * column src
        for M in (H, U):
            for r in M:
                r[dst] -= q * r[src]

    def swap(i, j):
        for M in (H, U):
            for r in M:
                r[i], r[j] = r[j], r[i]

    pivots = []
    c = 0
    for i in range(rows):
        if c >= cols:
            break
        while True:
            nz = [j for j in range(c, cols) if H[i][j] != 0]
            if not nz:
                break
            j = min(nz, key=lambda t: abs(H[i][t]))
            if j != c:
                swap(c, j)
            done = True
            for t in range(c + 1, cols):
                if H[i][t]:
                    colop(t, c, H[i][t] // H[i][c])
                    if H[i][t]:
                        done = False
            if done:
                break
        if H[i][c] != 0:
            if H[i][c] < 0:
                for M in (H, U):
                    for r in M:
                        r[c] = -r[c]
            pivots.append((i, c))
            c += 1
    return H, U, pivots


def _row_hnf(vectors: Sequence[Vector], dim: int) -> tuple[tuple[int, ...], ...]:
    """Hermite normal form of the row lattice spanned by ``vectors`` (zero rows dropped)."""
    if not vectors:
        return ()
    # Column echelon of the transpose is row echelon of the original.
    T = [[v[i] for v in vectors] for i in range(dim)]
    H, _, pivots = _column_echelon(T)
    basis = [[H[i][c] for i in range(dim)] for _, c in pivots]
    # reduce entries above each pivot into [0, pivot)
    for k, (pr, _) in enumerate(pivots):
        p = basis[k][pr]
        for j in range(k):
            q = basis[j][pr] // p
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[k])]
    return tuple(tuple(b) for b in basis)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^dim, stored by its row Hermite normal form basis.

    Two Lattice values compare equal exactly when they are the same subgroup.
    """

    dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def spanned_by(cls, dim: int, vectors: Sequence[Vector]) -> "Lattice":
        for v in vectors:
            if len(v) != dim:
                raise ValueError("vector of wrong dimension")
        return cls(dim, _row_hnf([list(v) for v in vectors], dim))

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls.spanned_by(dim, identity(dim))

    @classmethod
    def trivial(cls, dim: int) -> "Lattice":
        return cls(dim, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v: Vector) -> bool:
        if len(v) != self.dim:
            raise ValueError("vector of wrong dimension")
        if not self.basis:
            return not any(v)
        A = [[b[i] for b in self.basis] for i in range(self.dim)]
        return solve_diophantine(A, v) is not None


def kernel_basis(M: Matrix) -> Lattice:
    """Integer kernel {x : Mx = 0} by unimodular column reduction."""
    rows, cols = _shape(M)
    H, U, pivots = _column_echelon(M)
    r = len(pivots)
    vecs = [[U[i][j] for i in range(cols)] for j in range(r, cols)]
    return Lattice.spanned_by(cols, vecs)


def solve_diophantine(A: Matrix, b: Vector):
    """Solve A·x = b over the integers.

    Returns ``(x0, kernel)`` with every solution equal to x0 plus an element of
    ``kernel``, or None when no integer solution exists.
    """
    rows, cols = _shape(A)
    if len(b) != rows:
        raise ValueError("right-hand side has wrong length")
    H, U, pivots = _column_echelon(A)
    y = [0] * cols
    for k, (i, c) in enumerate(pivots):
        rest = b[i] - sum(H[i][t] * y[t] for t in range(c))
        if rest % H[i][c]:
            return None
        y[c] = rest // H[i][c]
    if matvec(H, y) != list(b):
        return None
    x0 = matvec(U, y)
    r = len(pivots)
    kern = Lattice.spanned_by(cols, [[U[i][j] for i in range(cols)] for j in range(r, cols)])
    return tuple(x0), kern


def periodic_lattice(M: Matrix) -> Lattice:
    """Per(M) = union of Ker(M^k - I), computed as Ker(M^12 - I) for 2x2 M."""
    if _shape(M) != (2, 2):
        raise ValueError("periodic_lattice expects a 2x2 matrix")
    P = matpow(M, PERIOD_EXPONENT)
    return kernel_basis([[P[i][j] - int(i == j) for j in range(2)] for i in range(2)])


def vector_period(M: Matrix, v: Vector, limit: int = PERIOD_EXPONENT) -> int | None:
    """Least k <= limit with M^k v = v, or None."""
    w = list(v)
    for k in range(1, limit + 1):
        w = matvec(M, w)
        if w == list(v):
            return k
    return None
