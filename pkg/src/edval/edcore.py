"""Essential dimension of classes presented by their wedge-valuation image.

For ``omega`` in ``wedge(Z^r) (x) Q_p/Z_p`` the subgroup ``A_omega`` of
``(Q_p/Z_p)^r`` is generated by the degree-1 parts of all contractions of
``omega``; its minimal number of generators ``rho`` is the least rank of a
subgroup ``W`` of ``Z^r`` with ``omega`` in ``wedge(W) (x) Q_p/Z_p``. For
monomial classes ``rho`` is the essential dimension, in general a lower bound.
Degree-2 classes also get an independent route through the elementary divisors
of an integer skew-symmetric matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import gcd
from typing import Sequence

from .extalg import Multivector, change_basis, contract_dual, degree_part, map_linear
from .pzcoeff import is_prime
from .symcalc import SymbolClass, SymbolTerm, wedge_nu
from .zlattice import (
    IntMatrix,
    Lattice,
    _smith_full,
    basis_extend,
    elementary_divisors,
    matrix_to_json,
    saturate,
    shape,
)


class ContractError(ValueError):
    """A precondition of an ed computation does not hold."""


class GapViolation(AssertionError):
    """``rho == d + 1`` for a homogeneous degree-``d`` element; this should be impossible."""


class Classification(str, Enum):
    ZERO = "Zero"
    SYMBOL = "Symbol"
    NONSYMBOL = "NonSymbol"
    MIXED = "Mixed"


@dataclass(frozen=True)
class FiniteAbelianP:
    """``Z/k_1 + ... + Z/k_s`` realised inside ``(Q_p/Z_p)^r``.

    ``generators[i]`` is a degree-1 multivector of order ``invariant_factors[i]``.
    """

    p: int
    invariant_factors: tuple[int, ...]
    generators: tuple[Multivector, ...] = ()

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for k in self.invariant_factors:
            out *= k
        return out


@dataclass(frozen=True)
class BrauerData:
    M: IntMatrix
    divisors: tuple[int, ...]
    i0: int
    factors: tuple[int, ...]


@dataclass(frozen=True)
class EdReport:
    p: int
    rank: int
    degree: int | None
    rho: int
    exact: bool
    classification: Classification | None
    a_omega: FiniteAbelianP
    witness: Lattice
    brauer: BrauerData | None = None
    omega: Multivector | None = field(default=None, compare=False)

    @property
    def ed_lower_bound(self) -> int:
        return self.rho

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "degree": self.degree,
            "rho": self.rho,
            "ed_lower_bound": self.ed_lower_bound,
            "exact": self.exact,
            "classification": self.classification.value if self.classification else None,
            "a_omega": {"factors": list(self.a_omega.invariant_factors)},
            "witness": [list(v) for v in self.witness.basis],
            "brauer": None
            if self.brauer is None
            else {
                "M": matrix_to_json(self.brauer.M),
                "divisors": list(self.brauer.divisors),
                "i0": self.brauer.i0,
            },
        }


# --- A_omega ------------------------------------------------------------------


def contraction_generators(m: Multivector) -> list[Multivector]:
    """Degree-1 parts of contractions of ``m`` against dual basis wedges.

    For the degree-``d`` part only ``(d-1)``-subsets of a term's support can
    give a nonzero result, so those are the only duals enumerated. The empty
    dual (identity) contributes the degree-1 part of ``m`` itself.
    """
    gens = []
    for d in sorted(m.degrees - {0}):
        part = degree_part(m, d)
        duals = sorted({J for I in part.terms for J in combinations(I, d - 1)})
        for J in duals:
            g = contract_dual(part, J)
            if g:
                gens.append(g)
    return gens


def _group_from_generators(p: int, r: int, gens: Sequence[Multivector]):
    """Invariant factors, canonical generators and their numerator rows."""
    N = max((g.exponent for g in gens), default=0)
    if N == 0:
        return (), (), []
    q = p**N
    rows = []
    for g in gens:
        row = [0] * r
        for (i,), a in g.numerators(N).items():
            row[i] = a
        rows.append(row)
    rows += [[q * int(i == j) for j in range(r)] for i in range(r)]
    _, D, _, Vinv = _smith_full(rows)
    # the subgroup is (row span)/(q Z^r); row span has basis D[i][i] * Vinv[i]
    found = []
    for i in range(r):
        e = D[i][i]
        k = q // e
        if k > 1:
            found.append((k, e, Vinv[i]))
    found.sort(key=lambda t: t[0])
    factors = tuple(k for k, _, _ in found)
    gens_out = tuple(
        Multivector.from_numerators(p, r, N, {(j,): e * a for j, a in enumerate(v) if a})
        for _, e, v in found
    )
    return factors, gens_out, [list(v) for _, _, v in found]


def a_omega(m: Multivector) -> FiniteAbelianP:
    factors, gens, _ = _group_from_generators(m.p, m.rank, contraction_generators(m))
    return FiniteAbelianP(m.p, factors, gens)


def rho(m: Multivector) -> int:
    return a_omega(m).ngens


def witness(m: Multivector) -> Lattice:
    """A subgroup ``W`` of rank ``rho(m)`` with ``m`` in ``wedge(W) (x) Q_p/Z_p``, in HNF."""
    _, _, lifts = _group_from_generators(m.p, m.rank, contraction_generators(m))
    return saturate(Lattice.span(m.rank, lifts))


def membership(m: Multivector, W: Lattice) -> bool:
    """Whether ``m`` is in the image of ``wedge(W) (x) Q_p/Z_p``.

    Q_p/Z_p is divisible, so only the saturation of ``W`` matters.
    """
    if W.ambient_rank != m.rank:
        raise ContractError(f"lattice in Z^{W.ambient_rank} but multivector of rank {m.rank}")
    S = saturate(W)
    T = basis_extend(S)
    coords = change_basis(m, T)
    return all(all(i < S.rank for i in I) for I in coords.terms)


def classify(m: Multivector) -> Classification:
    if not m:
        return Classification.ZERO
    d = m.degree
    if d is None:
        raise ContractError("classification requires homogeneous class")
    if d == 0:
        raise ContractError("classification requires positive degree")
    r = rho(m)
    if r == d + 1:
        raise GapViolation(f"rho = d + 1 = {r} for {m!r}")
    if r < d:
        raise GapViolation(f"nonzero degree-{d} element with rho = {r} < d: {m!r}")
    return Classification.SYMBOL if r <= d else Classification.NONSYMBOL


# --- degree 2 via elementary divisors ---------------------------------------


def brauer_matrix(c: SymbolClass) -> IntMatrix:
    """``M = sum weight * (nu(a) nu(b)^t - nu(b) nu(a)^t)`` over the terms ``(a, b)``."""
    if c.terms and c.degrees != {2}:
        raise ContractError("Brauer matrix needs a homogeneous degree-2 class")
    if len(c.levels) > 1:
        raise ContractError(f"Brauer matrix needs a single level, got {sorted(c.levels)}")
    r = c.rank
    M = [[0] * r for _ in range(r)]
    for t in c.terms:
        a, b = t.slots[0].valuation, t.slots[1].valuation
        for i in range(r):
            if a[i] or b[i]:
                for j in range(r):
                    M[i][j] += t.weight * (a[i] * b[j] - b[i] * a[j])
    return M


def brauer_i0(M: Sequence[Sequence[int]], p: int, n: int) -> BrauerData:
    """Elementary divisors ``d_i`` of ``M`` and ``i0 = #{i : p^n does not divide d_i}``.

    ``factors`` lists the nontrivial ``p^n / gcd(p^n, d_i)`` in increasing
    order. Zero divisors are divisible by ``p^n`` and never count.
    """
    r, cols = shape(M)
    if r != cols or any(M[i][j] != -M[j][i] for i in range(r) for j in range(r)):
        raise ContractError("matrix is not skew-symmetric")
    if not is_prime(p) or n < 1:
        raise ContractError(f"bad level p={p}, n={n}")
    q = p**n
    divs = tuple(elementary_divisors(M))
    ks = sorted(q // gcd(q, d) for d in divs)
    factors = tuple(k for k in ks if k > 1)
    i0 = sum(1 for d in divs if d % q)
    return BrauerData([list(row) for row in M], divs, i0, factors)


def common_level(c: SymbolClass) -> SymbolClass:
    """Rewrite every term at the highest level present (``(a)_{p^m} = p^(n-m) (a)_{p^n}``)."""
    if not c.terms:
        return c
    n = max(c.levels)
    terms = tuple(SymbolTerm(n, t.weight * c.p ** (n - t.n), t.slots) for t in c.terms)
    return SymbolClass(c.p, c.rank, terms)


# --- reports ----------------------------------------------------------------


def ed_report(c: SymbolClass, henselian: bool = False) -> EdReport:
    m = wedge_nu(c)
    group = a_omega(m)
    degree = c.degree
    if c.mixed:
        classification = Classification.MIXED
    elif degree is None:
        classification = Classification.ZERO
    else:
        classification = classify(m)
    brauer = None
    if degree == 2:
        cl = common_level(c)
        brauer = brauer_i0(brauer_matrix(cl), c.p, max(c.levels))
    exact = (henselian or not c.has_unit) and not c.mixed
    return EdReport(
        p=c.p,
        rank=c.rank,
        degree=degree,
        rho=group.ngens,
        exact=exact,
        classification=classification,
        a_omega=group,
        witness=witness(m),
        brauer=brauer,
        omega=m,
    )


# --- split-degree bound -----------------------------------------------------


def overlattice_inclusion(gamma_prime: Lattice, denom_exp: int, p: int) -> IntMatrix:
    """Coordinates of ``e_1..e_r`` in the basis ``rows / p^denom_exp`` of the overlattice.

    Returns the integer matrix ``C`` with ``e_i = sum_j C[i][j] * b_j / p^N``;
    raises if ``Z^r`` is not contained in the overlattice.
    """
    r = gamma_prime.ambient_rank
    if gamma_prime.rank != r:
        raise ContractError("overlattice must have full rank")
    B = gamma_prime.matrix()
    q = p**denom_exp
    # B^{-1} = V D^{-1} U
    U, D, V, _ = _smith_full(B)
    scaled = []
    for i in range(r):
        d = D[i][i]
        if q % d:
            raise ContractError("overlattice does not contain Z^r")
        scaled.append([(q // d) * x for x in U[i]])
    return [[sum(V[i][k] * scaled[k][j] for k in range(r)) for j in range(r)] for i in range(r)]


def overlattice_index(gamma_prime: Lattice, denom_exp: int, p: int) -> int:
    C = overlattice_inclusion(gamma_prime, denom_exp, p)
    out = 1
    for d in elementary_divisors(C):
        out *= d
    return out


def split_hypothesis(m: Multivector, gamma_prime: Lattice, denom_exp: int, n: int) -> bool:
    """Whether ``m`` dies in the exterior algebra of the overlattice.

    The overlattice is ``(1/p^denom_exp) * span(gamma_prime)``; its index over
    ``Z^r`` must be a power of ``p`` dividing ``p^n``.
    """
    p = m.p
    index = overlattice_index(gamma_prime, denom_exp, p)
    if index < 1 or (p**n) % index:
        raise ContractError(f"index {index} of the overlattice does not divide {p}^{n}")
    C = overlattice_inclusion(gamma_prime, denom_exp, p)
    return not map_linear(m, C)


def split_bound_check(m: Multivector, gamma_prime: Lattice, denom_exp: int, n: int) -> bool:
    """True unless ``m`` dies over the overlattice while ``rho(m) > 2n``."""
    if m.degrees - {2}:
        raise ContractError("split bound concerns degree-2 elements")
    if not split_hypothesis(m, gamma_prime, denom_exp, n):
        return True
    return rho(m) <= 2 * n


__all__ = [
    "BrauerData",
    "Classification",
    "ContractError",
    "EdReport",
    "FiniteAbelianP",
    "GapViolation",
    "a_omega",
    "brauer_i0",
    "brauer_matrix",
    "classify",
    "common_level",
    "contraction_generators",
    "ed_report",
    "membership",
    "overlattice_inclusion",
    "overlattice_index",
    "rho",
    "split_bound_check",
    "split_hypothesis",
    "witness",
]
