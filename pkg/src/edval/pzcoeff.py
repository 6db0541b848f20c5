"""Exact arithmetic in Q_p/Z_p.

An element is stored as ``num / p**exp`` reduced modulo 1, with ``num`` prime
to ``p`` (or the canonical zero ``0 / p**0``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache


class CoefficientError(ValueError):
    """Raised on a bad modulus or on mixing coefficients of different primes."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_split(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` and ``e >= 1``, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def p_valuation(p: int, m: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``m``."""
    if m == 0:
        raise ValueError("valuation of zero")
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True, order=True)
class PCoeff:
    p: int
    num: int
    exp: int

    def __add__(self, other: PCoeff) -> PCoeff:
        return pc_add(self, other)

    def __neg__(self) -> PCoeff:
        return pc_scale(-1, self)

    def __sub__(self, other: PCoeff) -> PCoeff:
        return pc_add(self, -other)

    def __rmul__(self, m: int) -> PCoeff:
        return pc_scale(m, self)

    def __bool__(self) -> bool:
        return self.num != 0

    def __str__(self) -> str:
        return format_pcoeff(self)

    @property
    def order(self) -> int:
        return pc_order(self)

    def lift(self, exp: int) -> int:
        """Numerator of this element over the common denominator ``p**exp``."""
        if exp < self.exp:
            raise CoefficientError(f"{self} does not fit over {self.p}^{exp}")
        return self.num * self.p ** (exp - self.exp)


def pc_normalize(p: int, num: int, exp: int) -> PCoeff:
    if not is_prime(p):
        raise CoefficientError(f"non-prime modulus {p}")
    if exp < 0:
        raise CoefficientError("negative exponent")
    num %= p**exp
    if num == 0:
        return PCoeff(p, 0, 0)
    while num % p == 0:
        num //= p
        exp -= 1
    return PCoeff(p, num, exp)


def pc_zero(p: int) -> PCoeff:
    return pc_normalize(p, 0, 0)


def pc_add(a: PCoeff, b: PCoeff) -> PCoeff:
    if a.p != b.p:
        raise CoefficientError(f"mismatched primes {a.p} and {b.p}")
    e = max(a.exp, b.exp)
    return pc_normalize(a.p, a.lift(e) + b.lift(e), e)


def pc_scale(m: int, a: PCoeff) -> PCoeff:
    return pc_normalize(a.p, m * a.num, a.exp)


def pc_order(a: PCoeff) -> int:
    return a.p**a.exp


_PCOEFF_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_pcoeff(a: PCoeff) -> str:
    if a.num == 0:
        return "0"
    return f"{a.num}/{a.p ** a.exp}"


def parse_pcoeff(text: str, p: int | None = None) -> PCoeff:
    """Parse ``"num/p^exp"`` (denominator written out, e.g. ``"3/8"``) or ``"0"``.

    ``p`` is required only when the text carries no denominator.
    """
    m = _PCOEFF_RE.match(text)
    if not m:
        raise CoefficientError(f"cannot parse coefficient {text!r}")
    num = int(m.group(1))
    if m.group(2) is None or int(m.group(2)) == 1:
        if p is None:
            raise CoefficientError(f"prime needed to read {text!r}")
        return pc_normalize(p, num, 0)
    split = prime_power_split(int(m.group(2)))
    if split is None:
        raise CoefficientError(f"denominator of {text!r} is not a prime power")
    q, e = split
    if p is not None and q != p:
        raise CoefficientError(f"{text!r} is not a {p}-power fraction")
    return pc_normalize(q, num, e)
