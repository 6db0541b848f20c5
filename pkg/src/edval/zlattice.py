"""Integer matrices and lattices: Smith and Hermite normal forms, saturation.

Matrices are plain lists of rows of Python ints, so entries never overflow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

IntMatrix = list[list[int]]

MINORS_MAX_DIM = 6


class LatticeError(ValueError):
    pass


# --- small matrix helpers ---------------------------------------------------


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return [[int(x) for x in row] for row in rows]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    Bt = list(zip(*B))
    if A and len(A[0]) != len(B):
        raise LatticeError(f"shape mismatch {shape(A)} x {shape(B)}")
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def is_unimodular(T: Sequence[Sequence[int]]) -> bool:
    m, n = shape(T)
    return m == n and abs(det(T)) == 1


# --- Smith normal form ------------------------------------------------------


def _smith_full(M: Sequence[Sequence[int]]):
    """Return ``(U, D, V, Vinv)`` with ``U @ M @ V == D`` and ``V @ Vinv == I``."""
    m, n = shape(M)
    A = [list(row) for row in M]
    U = identity(m)
    V = identity(n)
    Vinv = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                return U, A, V, Vinv
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    if q:
                        add_row(i, t, -q)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    if q:
                        add_col(j, t, -q)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if piv < 0:
                A[t][t] = -piv
                U[t] = [-x for x in U[t]]
            break
    return U, A, V, Vinv


def smith(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    ``d_1 | d_2 | ...`` and zeros last. Pivoting is on the smallest nonzero
    absolute entry of the remaining block.
    """
    U, D, V, _ = _smith_full(as_matrix(M))
    return U, D, V


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    m, n = shape(M)
    if m == 0 or n == 0:
        return []
    _, D, _, _ = _smith_full(as_matrix(M))
    return [D[i][i] for i in range(min(m, n))]


def minors_gcd_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors from determinantal divisors (gcds of k x k minors).

    Independent of :func:`smith`; used as a cross-check only.
    """
    m, n = shape(M)
    k_max = min(m, n)
    if k_max > MINORS_MAX_DIM:
        raise LatticeError(f"minor enumeration limited to min(rows, cols) <= {MINORS_MAX_DIM}")
    out = []
    prev = 1
    for k in range(1, k_max + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[M[i][j] for j in cols] for i in rows]))
                if g == prev:
                    break
            if g == prev:
                break
        if g == 0:
            out.extend([0] * (k_max - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def unimodular_inverse(T: Sequence[Sequence[int]]) -> IntMatrix:
    U, D, V, _ = _smith_full(as_matrix(T))
    m, n = shape(T)
    if m != n or any(D[i][i] != 1 for i in range(n)):
        raise LatticeError("matrix is not unimodular")
    return matmul(V, U)


# --- Hermite normal form and lattices ---------------------------------------


def hnf_rows(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row Hermite normal form of the Z-span of ``rows`` (zero rows dropped).

    Pivots are positive, strictly move right, and entries above a pivot lie in
    ``[0, pivot)``.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    out: IntMatrix = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        rest = [r for r in A if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        A = rest
        col += 1
    for i, row in enumerate(out):
        c = next(j for j, a in enumerate(row) if a)
        for k in range(i):
            q = out[k][c] // row[c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], row)]
    return out


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hnf_rows(rows))


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^r given by a basis of linearly independent rows."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        if any(len(v) != self.ambient_rank for v in basis):
            raise LatticeError("basis vector length differs from ambient rank")
        if rank(basis) != len(basis):
            raise LatticeError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, ambient_rank: int, vectors: Iterable[Sequence[int]]) -> Lattice:
        """Lattice generated by arbitrary vectors, in canonical HNF basis."""
        vectors = [list(v) for v in vectors]
        return cls(ambient_rank, tuple(map(tuple, hnf_rows(vectors))))

    @classmethod
    def full(cls, ambient_rank: int) -> Lattice:
        return cls(ambient_rank, tuple(map(tuple, identity(ambient_rank))))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return [list(v) for v in self.basis]

    def canonical(self) -> Lattice:
        return Lattice.span(self.ambient_rank, self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return rank(self.matrix() + [list(v)]) == self.rank and (
            hnf_rows(self.matrix() + [list(v)]) == hnf_rows(self.matrix())
        )

    def is_saturated(self) -> bool:
        return all(d == 1 for d in elementary_divisors(self.matrix()))


def saturate(L: Lattice) -> Lattice:
    """``(L tensor Q) meet Z^r`` as a lattice in HNF."""
    if L.rank == 0:
        return L
    _, _, _, Vinv = _smith_full(L.matrix())
    return Lattice.span(L.ambient_rank, Vinv[: L.rank])


def basis_extend(L: Lattice) -> IntMatrix:
    """Unimodular r x r matrix whose first ``L.rank`` rows are ``L.basis``."""
    if not L.is_saturated():
        raise LatticeError("saturate first")
    r = L.ambient_rank
    if L.rank == 0:
        return identity(r)
    _, _, _, Vinv = _smith_full(L.matrix())
    return L.matrix() + [list(row) for row in Vinv[L.rank :]]


# --- serialization ----------------------------------------------------------


def matrix_to_json(M: Sequence[Sequence[int]]) -> list[list[str]]:
    return [[str(int(x)) for x in row] for row in M]


def matrix_from_json(data) -> IntMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    return [[int(x) for x in row] for row in data]
