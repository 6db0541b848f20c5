"""Brute-force checks of two self-contained lemmas.

* For ``d >= 3``, ``n >= d + 2`` and any ``j`` in Z/n there is a set of ``d``
  distinct residues containing ``j`` and summing to 0. This is what makes the
  congruence family reach ``rho = n``.
* If ``Gamma`` has index prime to ``p`` in ``Gamma'``, the inclusion induces an
  isomorphism of exterior algebras with Q_p/Z_p coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .extalg import minor
from .pzcoeff import is_prime
from .zlattice import elementary_divisors, is_unimodular, matmul


class ClaimError(ValueError):
    pass


class ClaimFalsified(AssertionError):
    pass


@dataclass(frozen=True)
class SubsetWitness:
    n: int
    d: int
    j: int
    S: tuple[int, ...]

    @property
    def case(self) -> str:
        """Which case of the constructive argument covers ``(n, d, j)``."""
        if (2 * self.j) % self.n:
            return "1" if self.d % 2 == 0 else "2"
        if self.d % 2:
            return "3"
        return "4a" if self.n % 2 else "4b"

    def is_valid(self) -> bool:
        return (
            len(set(self.S)) == self.d
            and all(0 <= s < self.n for s in self.S)
            and self.j in self.S
            and sum(self.S) % self.n == 0
        )

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "j": self.j, "S": list(self.S), "case": self.case}


def claim_subset(n: int, d: int, j: int) -> SubsetWitness:
    if d < 3 or n < d + 2:
        raise ClaimError(f"need d >= 3 and n >= d + 2, got n={n}, d={d}")
    j %= n
    others = [i for i in range(n) if i != j]
    for rest in combinations(others, d - 1):
        if (j + sum(rest)) % n == 0:
            return SubsetWitness(n, d, j, tuple(sorted((j, *rest))))
    raise ClaimFalsified(f"CLAIM FALSIFIED: no {d}-subset of Z/{n} through {j} sums to 0")


def compound_matrix(G: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    """k-th exterior power of the row map ``G``: rows and columns are k-subsets."""
    r = len(G)
    cols = len(G[0]) if G else 0
    return [
        [minor([G[i] for i in I], J) for J in combinations(range(cols), k)]
        for I in combinations(range(r), k)
    ]


def verify_prime_index_iso(d_values: Sequence[int], T: Sequence[Sequence[int]], p: int, n: int) -> bool:
    """Check that ``Gamma = rows of diag(d) T`` inside ``Z^r`` gives ``wedge Gamma / p^n = wedge Z^r / p^n``.

    The image of ``wedge^k Gamma`` is spanned by the rows of the k-th compound
    matrix; it is everything modulo ``p^n`` exactly when no elementary divisor
    of that matrix is divisible by ``p``.
    """
    if not is_prime(p):
        raise ClaimError(f"non-prime modulus {p}")
    if any(d <= 0 or gcd(d, p) != 1 for d in d_values):
        raise ClaimError(f"index factors {tuple(d_values)} must be positive and prime to {p}")
    r = len(d_values)
    if len(T) != r or not is_unimodular(T):
        raise ClaimError("T must be a unimodular r x r matrix")
    if n < 1:
        raise ClaimError("level must be positive")
    diag = [[d_values[i] if i == j else 0 for j in range(r)] for i in range(r)]
    G = matmul(diag, T)
    for k in range(1, r + 1):
        C = compound_matrix(G, k)
        divs = elementary_divisors(C)
        if len(divs) != comb(r, k) or any(dv == 0 or dv % p == 0 for dv in divs):
            return False
    return True
