"""Symbol classes over iterated Laurent series fields and the wedge-valuation map.

A class is a formal sum of symbols ``(a_1, ..., a_d)_{p^n}`` whose slots are
Laurent monomials ``u * t_0^{e_0} * ... * t_{r-1}^{e_{r-1}}`` with ``u`` a
nonzero integer scalar. Only the exponent vector (the valuation) enters the
wedge-valuation map; a scalar other than +-1 is remembered as a unit.

Text form::

    [rank R;] term ("+" term)*
    term   := [int "*"] "(" slot ("," slot)* ")" "_" q      q a prime power
    slot   := factor ("*" factor)*
    factor := nonzero-int | "t" nat ["^" int]

e.g. ``"(t0, t1)_4 + 3*(t2^2*t3, 5*t4)_4"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .extalg import Multivector, mv_sum, mv_wedge_vectors
from .pzcoeff import is_prime, pc_normalize, prime_power_split


class ParseError(ValueError):
    """Malformed class text; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at column {pos + 1}"
            if text:
                message += f"\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class SymbolError(ValueError):
    pass


@dataclass(frozen=True)
class Slot:
    valuation: tuple[int, ...]
    scalar: int = 1

    def __post_init__(self):
        object.__setattr__(self, "valuation", tuple(int(x) for x in self.valuation))
        if self.scalar == 0:
            raise SymbolError("zero scalar factor")

    @property
    def has_unit(self) -> bool:
        return self.scalar not in (1, -1)


@dataclass(frozen=True)
class SymbolTerm:
    n: int
    weight: int
    slots: tuple[Slot, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if self.n < 1:
            raise SymbolError("level exponent must be >= 1")
        if self.weight == 0:
            raise SymbolError("zero weight")
        if not self.slots:
            raise SymbolError("symbol without slots")

    @property
    def degree(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class SymbolClass:
    p: int
    rank: int
    terms: tuple[SymbolTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not is_prime(self.p):
            raise SymbolError(f"non-prime modulus {self.p}")
        for t in self.terms:
            for s in t.slots:
                if len(s.valuation) != self.rank:
                    raise SymbolError(f"slot valuation {s.valuation} does not have length {self.rank}")

    @property
    def degrees(self) -> set[int]:
        return {t.degree for t in self.terms}

    @property
    def mixed(self) -> bool:
        return len(self.degrees) > 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees
        return next(iter(ds)) if len(ds) == 1 else None

    @property
    def levels(self) -> set[int]:
        return {t.n for t in self.terms}

    @property
    def has_unit(self) -> bool:
        return any(s.has_unit for t in self.terms for s in t.slots)

    def __str__(self) -> str:
        return render_class(self)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "terms": [
                {
                    "n": t.n,
                    "weight": t.weight,
                    "slots": [_slot_json(s) for s in t.slots],
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> SymbolClass:
        terms = []
        for t in data["terms"]:
            slots = []
            for s in t["slots"]:
                # a bare "unit": true gets a placeholder scalar; only has_unit matters downstream
                scalar = int(s.get("scalar", 2 if s.get("unit") else 1))
                slot = Slot(tuple(s["val"]), scalar)
                if bool(s.get("unit", False)) != slot.has_unit:
                    raise SymbolError(f"unit flag disagrees with scalar {scalar}")
                slots.append(slot)
            terms.append(SymbolTerm(int(t["n"]), int(t.get("weight", 1)), tuple(slots)))
        return cls(int(data["p"]), int(data["rank"]), tuple(terms))


def _slot_json(s: Slot) -> dict:
    out = {"val": list(s.valuation), "unit": s.has_unit}
    if s.scalar != 1:
        out["scalar"] = s.scalar
    return out


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>t\d+)|(?P<kw>rank)|(?P<op>[-+*(),_^;]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, value: str | None = None, kind: str | None = None) -> bool:
        k, v, _ = self.toks[self.i]
        return (value is None or v == value) and (kind is None or k == kind)

    def pos(self) -> int:
        return self.toks[self.i][2]

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.text, self.pos() if pos is None else pos)

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, int]:
        k, v, pos = self.toks[self.i]
        if not self.peek(value, kind):
            want = repr(value) if value else kind
            got = repr(v) if v else "end of input"
            self.error(f"expected {want}, found {got}")
        self.i += 1
        return v, pos

    def signed_int(self) -> tuple[int, int]:
        pos = self.pos()
        sign = 1
        if self.peek("-"):
            self.take("-")
            sign = -1
        v, _ = self.take(kind="int")
        return sign * int(v), pos

    def parse(self):
        declared_rank = None
        if self.peek("rank"):
            self.take("rank")
            v, _ = self.take(kind="int")
            declared_rank = int(v)
            self.take(";")
        terms = [self.term()]
        while self.peek("+"):
            self.take("+")
            terms.append(self.term())
        if not self.peek(kind="end"):
            self.error(f"unexpected {self.toks[self.i][1]!r}")
        return declared_rank, terms

    def term(self):
        start = self.pos()
        weight = 1
        if not self.peek("("):
            weight, wpos = self.signed_int()
            if weight == 0:
                self.error("zero weight", wpos)
            self.take("*")
        self.take("(")
        slots = [self.slot()]
        while self.peek(","):
            self.take(",")
            slots.append(self.slot())
        self.take(")")
        self.take("_")
        v, qpos = self.take(kind="int")
        split = prime_power_split(int(v))
        if split is None:
            self.error(f"subscript must be a prime power, got {v}", qpos)
        return start, qpos, weight, slots, split

    def slot(self):
        factors = [self.factor()]
        while self.peek("*"):
            self.take("*")
            factors.append(self.factor())
        scalar = 1
        exps: dict[int, int] = {}
        for kind, a, b in factors:
            if kind == "int":
                scalar *= a
            else:
                exps[a] = exps.get(a, 0) + b
        return scalar, exps

    def factor(self):
        if self.peek(kind="var"):
            v, _ = self.take(kind="var")
            e = 1
            if self.peek("^"):
                self.take("^")
                e, _ = self.signed_int()
            return ("var", int(v[1:]), e)
        if self.peek(kind="int") or self.peek("-"):
            a, pos = self.signed_int()
            if a == 0:
                self.error("zero scalar factor", pos)
            return ("int", a, None)
        self.error(f"expected a factor, found {self.toks[self.i][1] or 'end of input'!r}")


def parse_class(text: str, rank: int | None = None) -> SymbolClass:
    """Parse the class DSL. ``rank`` (or a ``rank R;`` header) embeds into a larger Z^r."""
    parser = _Parser(text)
    declared, raw_terms = parser.parse()
    if rank is not None and declared is not None and rank != declared:
        raise ParseError(f"rank {rank} conflicts with header rank {declared}")
    declared = rank if rank is not None else declared
    p = None
    p_pos = 0
    max_var = -1
    for _, qpos, _, slots, (q, _) in raw_terms:
        if p is None:
            p, p_pos = q, qpos
        elif q != p:
            raise ParseError(f"mixed primes {p} and {q}", text, qpos)
        for _, exps in slots:
            max_var = max([max_var, *exps])
    r = max_var + 1 if declared is None else declared
    if max_var >= r:
        raise ParseError(f"variable t{max_var} outside declared rank {r}", text, 0)
    terms = []
    for _, _, weight, slots, (_, n) in raw_terms:
        built = []
        for scalar, exps in slots:
            val = [0] * r
            for i, e in exps.items():
                val[i] = e
            built.append(Slot(tuple(val), scalar))
        terms.append(SymbolTerm(n, weight, tuple(built)))
    return SymbolClass(p, r, tuple(terms))


def _render_slot(s: Slot) -> str:
    parts = [str(s.scalar)] if s.scalar != 1 else []
    for i, e in enumerate(s.valuation):
        if e == 1:
            parts.append(f"t{i}")
        elif e:
            parts.append(f"t{i}^{e}")
    return "*".join(parts) or "1"


def render_class(c: SymbolClass) -> str:
    body = " + ".join(
        ("" if t.weight == 1 else f"{t.weight}*")
        + "("
        + ", ".join(_render_slot(s) for s in t.slots)
        + f")_{c.p ** t.n}"
        for t in c.terms
    )
    used = [i for t in c.terms for s in t.slots for i, e in enumerate(s.valuation) if e]
    default_rank = max(used, default=-1) + 1
    return body if c.rank == default_rank else f"rank {c.rank}; {body}"


# --- the wedge-valuation map -------------------------------------------------


def wedge_nu(c: SymbolClass) -> Multivector:
    """``sum weight * (1/p^n) (x) nu(a_1) ^ ... ^ nu(a_d)`` over the terms of ``c``."""
    parts = [
        mv_wedge_vectors(c.p, pc_normalize(c.p, t.weight, t.n), [s.valuation for s in t.slots], c.rank)
        for t in c.terms
    ]
    return mv_sum(c.p, c.rank, parts)


# --- example families -------------------------------------------------------


def _unit_vector(r: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(r))


def _monomial_class(p: int, rank: int, n: int, index_tuples: Sequence[Sequence[int]]) -> SymbolClass:
    terms = tuple(
        SymbolTerm(n, 1, tuple(Slot(_unit_vector(rank, i)) for i in idx)) for idx in index_tuples
    )
    return SymbolClass(p, rank, terms)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise SymbolError(f"non-prime modulus {p}")


def gen_generic(r: int, d: int, p: int, n: int) -> SymbolClass:
    """``r`` degree-``d`` symbols in ``r*d`` independent variables, level ``p^n``."""
    if min(r, d, n) < 1:
        raise SymbolError("r, d and n must be positive")
    _check_prime(p)
    return _monomial_class(p, r * d, n, [range(i * d, (i + 1) * d) for i in range(r)])


def gen_block_brauer(r: int, p: int, n: int) -> SymbolClass:
    """Tensor product of ``r`` generic symbol algebras ``(t_{2i}, t_{2i+1})_{p^n}``."""
    return gen_generic(r, 2, p, n)


def gen_chain(r: int, p: int) -> SymbolClass:
    """``(t0) u [(t1, t2) + ... + (t_{2r-1}, t_{2r})]`` at level ``p``."""
    if r < 1:
        raise SymbolError("r must be positive")
    _check_prime(p)
    return _monomial_class(p, 2 * r + 1, 1, [(0, 2 * i - 1, 2 * i) for i in range(1, r + 1)])


def gen_congruence(nv: int, d: int, p: int) -> SymbolClass:
    """Sum of ``(t_{i_1}, ..., t_{i_d})_p`` over ``i_1 < ... < i_d`` with ``sum i == 0 mod nv``."""
    if d < 3 or nv < d + 2:
        raise SymbolError(f"need d >= 3 and nv >= d + 2, got nv={nv}, d={d}")
    _check_prime(p)
    tuples = [I for I in combinations(range(nv), d) if sum(I) % nv == 0]
    return _monomial_class(p, nv, 1, tuples)


# Rost invariant values of the E7 / E8 torsors, after the linear change of variables.
ROST_T1 = "(t0, t1, t2)_2 + (t0, t3, t4)_2 + (t0, t5, t6)_2"
ROST_T2 = "(t0, t1, t2)_2 + (t0, t3, t4)_2 + (t0, t5, t6)_2 + (t0, t7, t8)_2"
# The same E7 class before the change of variables (s_i written as t_i).
ROST_T1_RAW = "(t0, t1, t3)_2 + (t0, t2*t3*t5, t4)_2 + (t0, t5, t6)_2"


def fixture_classes() -> dict[str, SymbolClass]:
    """Named classes shipped as fixtures."""
    return {
        "t1": parse_class(ROST_T1),
        "t2": parse_class(ROST_T2),
        "block": gen_block_brauer(2, 2, 1),
        "generic": gen_generic(2, 3, 3, 1),
        "congruence": gen_congruence(7, 3, 2),
    }
