"""Sparse exterior algebra of Z^r with Q_p/Z_p coefficients.

A :class:`Multivector` maps strictly increasing index tuples ``I`` (the pure
wedge ``e_I``) to nonzero :class:`PCoeff` values. The empty tuple is the
degree-0 part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .pzcoeff import CoefficientError, PCoeff, is_prime, parse_pcoeff, pc_normalize
from .zlattice import LatticeError, det, is_unimodular, unimodular_inverse


class MultivectorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Multivector:
    p: int
    rank: int
    terms: Mapping[tuple[int, ...], PCoeff] = field(default_factory=dict)

    def __post_init__(self):
        if not is_prime(self.p):
            raise CoefficientError(f"non-prime modulus {self.p}")
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if c.p != self.p:
                raise MultivectorError(f"coefficient prime {c.p} != {self.p}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise MultivectorError(f"index tuple {idx} not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= self.rank):
                raise MultivectorError(f"index tuple {idx} out of range for rank {self.rank}")
            if c.num:
                clean[idx] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, p: int, rank: int) -> Multivector:
        return cls(p, rank, {})

    @classmethod
    def from_numerators(
        cls, p: int, rank: int, exp: int, nums: Mapping[tuple[int, ...], int]
    ) -> Multivector:
        """Build ``sum nums[I] / p**exp * e_I``."""
        return cls(p, rank, {I: pc_normalize(p, a, exp) for I, a in nums.items() if a})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.p, self.rank, self.terms) == (other.p, other.rank, other.terms)

    def __hash__(self) -> int:
        return hash((self.p, self.rank, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: Multivector) -> Multivector:
        return mv_add(self, other)

    def __neg__(self) -> Multivector:
        return self.scale(-1)

    def __sub__(self, other: Multivector) -> Multivector:
        return mv_add(self, -other)

    def __rmul__(self, m: int) -> Multivector:
        return self.scale(m)

    def __repr__(self) -> str:
        body = ", ".join(f"{I}: {c}" for I, c in self.terms.items())
        return f"Multivector(p={self.p}, rank={self.rank}, {{{body}}})"

    def scale(self, m: int) -> Multivector:
        return Multivector(self.p, self.rank, {I: m * c for I, c in self.terms.items()})

    @property
    def degrees(self) -> set[int]:
        return {len(I) for I in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> int | None:
        """The common degree of a nonzero homogeneous element, else None."""
        ds = self.degrees
        return next(iter(ds)) if len(ds) == 1 else None

    @property
    def exponent(self) -> int:
        """Smallest ``N`` with ``p**N`` killing every coefficient."""
        return max((c.exp for c in self.terms.values()), default=0)

    def numerators(self, exp: int | None = None) -> dict[tuple[int, ...], int]:
        exp = self.exponent if exp is None else exp
        return {I: c.lift(exp) for I, c in self.terms.items()}

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "terms": [{"idx": list(I), "coeff": str(c)} for I, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Multivector:
        p = int(data["p"])
        terms: dict[tuple[int, ...], PCoeff] = {}
        for t in data["terms"]:
            I = tuple(int(i) for i in t["idx"])
            if I in terms:
                raise MultivectorError(f"duplicate index tuple {I}")
            terms[I] = parse_pcoeff(t["coeff"], p)
        return cls(p, int(data["rank"]), terms)


# --- construction -----------------------------------------------------------


def _small_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j, a in enumerate(rows[0]):
        if a:
            sub = [row[:j] + row[j + 1 :] for row in rows[1:]]
            total += (-1) ** j * a * _small_det(sub)
    return total


def minor(vectors: Sequence[Sequence[int]], cols: Sequence[int]) -> int:
    """Determinant of the square submatrix of ``vectors`` on columns ``cols``."""
    rows = [[v[j] for j in cols] for v in vectors]
    if len(rows) <= 4:
        return _small_det(rows)
    return det(rows)


def mv_wedge_vectors(
    p: int, c: PCoeff, vectors: Sequence[Sequence[int]], rank: int | None = None
) -> Multivector:
    """Expand ``c (x) v_1 ^ ... ^ v_d`` in the standard basis.

    The coefficient of ``e_I`` is ``c`` times the d x d minor on columns ``I``.
    """
    if c.p != p:
        raise MultivectorError(f"coefficient prime {c.p} != {p}")
    if rank is None:
        if not vectors:
            raise MultivectorError("rank needed for an empty wedge")
        rank = len(vectors[0])
    if any(len(v) != rank for v in vectors):
        raise MultivectorError("vector length differs from rank")
    d = len(vectors)
    if not c.num or any(not any(v) for v in vectors):
        return Multivector.zero(p, rank)
    support = sorted({j for v in vectors for j, a in enumerate(v) if a})
    terms = {}
    for I in combinations(support, d):
        a = minor(vectors, I)
        if a:
            terms[I] = pc_normalize(p, a * c.num, c.exp)
    return Multivector(p, rank, terms)


def mv_add(a: Multivector, b: Multivector) -> Multivector:
    if a.p != b.p or a.rank != b.rank:
        raise MultivectorError(f"cannot add (p={a.p}, rank={a.rank}) and (p={b.p}, rank={b.rank})")
    terms = dict(a.terms)
    for I, c in b.terms.items():
        terms[I] = terms[I] + c if I in terms else c
    return Multivector(a.p, a.rank, terms)


def mv_sum(p: int, rank: int, parts: Iterable[Multivector]) -> Multivector:
    """Sum of many multivectors via a single common-denominator accumulation."""
    acc: dict[tuple[int, ...], int] = {}
    parts = list(parts)
    exp = max((m.exponent for m in parts), default=0)
    for m in parts:
        if m.p != p or m.rank != rank:
            raise MultivectorError("mismatched p or rank in sum")
        for I, a in m.numerators(exp).items():
            acc[I] = acc.get(I, 0) + a
    return Multivector.from_numerators(p, rank, exp, acc)


def degree_part(m: Multivector, d: int) -> Multivector:
    return Multivector(m.p, m.rank, {I: c for I, c in m.terms.items() if len(I) == d})


# --- contractions -----------------------------------------------------------


def _contract_index(m: Multivector, j: int) -> Multivector:
    exp = m.exponent
    acc: dict[tuple[int, ...], int] = {}
    for I, a in m.numerators(exp).items():
        if j in I:
            t = I.index(j)
            key = I[:t] + I[t + 1 :]
            acc[key] = acc.get(key, 0) + (-a if t % 2 else a)
    return Multivector.from_numerators(m.p, m.rank, exp, acc)


def contract_dual(m: Multivector, J: Sequence[int]) -> Multivector:
    """Contraction against ``e^{j_1} ^ ... ^ e^{j_k}`` (the empty wedge is the identity).

    Applied as ``iota_{e^{j_1}}`` after ... after ``iota_{e^{j_k}}``; a single
    ``iota_f`` sends ``g_1 ^ ... ^ g_d`` to ``sum_i (-1)^(i-1) f(g_i) g_1 ^ .. (omit g_i) .. ^ g_d``.
    """
    for j in J:
        if not 0 <= j < m.rank:
            raise MultivectorError(f"dual index {j} out of range for rank {m.rank}")
    if any(b <= a for a, b in zip(J, J[1:])):
        raise MultivectorError(f"dual indices {tuple(J)} not strictly increasing")
    for j in reversed(J):
        m = _contract_index(m, j)
    return m


def contract_vector(m: Multivector, v: Sequence[int]) -> Multivector:
    """Contraction against the functional ``x -> <v, x>``."""
    if len(v) != m.rank:
        raise MultivectorError(f"functional of length {len(v)} on rank {m.rank}")
    exp = m.exponent
    acc: dict[tuple[int, ...], int] = {}
    for I, a in m.numerators(exp).items():
        for t, i in enumerate(I):
            if v[i]:
                key = I[:t] + I[t + 1 :]
                acc[key] = acc.get(key, 0) + (-1) ** t * v[i] * a
    return Multivector.from_numerators(m.p, m.rank, exp, acc)


# --- linear maps ------------------------------------------------------------


def map_linear(m: Multivector, C: Sequence[Sequence[int]], target_rank: int | None = None) -> Multivector:
    """Push ``m`` forward along ``e_i -> sum_j C[i][j] f_j``."""
    if len(C) != m.rank:
        raise MultivectorError(f"map has {len(C)} rows, expected {m.rank}")
    if target_rank is None:
        target_rank = len(C[0]) if C else 0
    parts = [mv_wedge_vectors(m.p, c, [C[i] for i in I], target_rank) for I, c in m.terms.items()]
    return mv_sum(m.p, target_rank, parts)


def change_basis(m: Multivector, T: Sequence[Sequence[int]]) -> Multivector:
    """Coordinates of ``m`` with respect to the basis formed by the rows of ``T``."""
    if len(T) != m.rank or not is_unimodular(T):
        raise MultivectorError("change of basis needs a unimodular rank x rank matrix")
    try:
        Tinv = unimodular_inverse(T)
    except LatticeError as exc:
        raise MultivectorError(str(exc)) from exc
    return map_linear(m, Tinv)


def to_skew_matrix(m: Multivector) -> tuple[list[list[int]], int]:
    """``(M, N)`` with ``m = (1/p^N) sum_{i<j} M[i][j] e_i ^ e_j`` and ``M`` skew.

    ``M`` matches the Brauer matrix convention ``a b^t - b a^t`` for ``a ^ b``.
    """
    if m.degrees - {2}:
        raise MultivectorError("skew matrix needs a homogeneous degree-2 element")
    N = m.exponent
    M = [[0] * m.rank for _ in range(m.rank)]
    for (i, j), a in m.numerators(N).items():
        M[i][j] = a
        M[j][i] = -a
    return M, N
