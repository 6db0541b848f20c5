"""Seeded acceptance sweeps shared by the test suite and ``edval sweep``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .claims import claim_subset, verify_prime_index_iso
from .edcore import (
    a_omega,
    brauer_i0,
    brauer_matrix,
    ed_report,
    membership,
    rho,
    split_bound_check,
    split_hypothesis,
    witness,
)
from .extalg import Multivector, mv_sum, mv_wedge_vectors
from .pzcoeff import pc_normalize
from .symcalc import (
    ROST_T1,
    ROST_T2,
    Slot,
    SymbolClass,
    SymbolTerm,
    gen_block_brauer,
    gen_chain,
    gen_congruence,
    gen_generic,
    parse_class,
    wedge_nu,
)
from .zlattice import Lattice, det, elementary_divisors, matmul, minors_gcd_divisors, smith

DEFAULT_SEED = 20240607


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


# --- random objects ---------------------------------------------------------


def random_unimodular(rng: random.Random, r: int, steps: int = 8) -> list[list[int]]:
    T = [[int(i == j) for j in range(r)] for i in range(r)]
    if r < 2:
        return [[rng.choice((1, -1))]] if r else T
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        q = rng.randint(-2, 2)
        T[i] = [a + q * b for a, b in zip(T[i], T[j])]
        if rng.random() < 0.2:
            T[i], T[j] = T[j], T[i]
    return T


def random_class(
    rng: random.Random,
    d: int,
    max_rank: int = 6,
    max_terms: int = 4,
    bound: int = 9,
    primes=(2, 3, 5),
    max_n: int = 3,
    density: float = 0.5,
) -> SymbolClass:
    """Homogeneous degree-``d`` class with random slot valuations in ``[-bound, bound]``."""
    r = rng.randint(2, max_rank)
    p = rng.choice(primes)
    n = rng.randint(1, max_n)
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        slots = tuple(
            Slot(tuple(rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(r)))
            for _ in range(d)
        )
        terms.append(SymbolTerm(n, rng.choice((1, 1, 1, -1, 2)), slots))
    return SymbolClass(p, r, tuple(terms))


def degree2_corpus(seed: int = DEFAULT_SEED, size: int = 500) -> list[SymbolClass]:
    rng = random.Random(seed)
    return [random_class(rng, 2, density=rng.choice((0.3, 0.6, 1.0))) for _ in range(size)]


def homogeneous_corpus(seed: int = DEFAULT_SEED + 1, size: int = 500) -> list[SymbolClass]:
    rng = random.Random(seed)
    return [random_class(rng, rng.choice((2, 3)), density=rng.choice((0.3, 0.6, 1.0))) for _ in range(size)]


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 20) -> list[list[int]]:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    density = rng.choice((0.3, 0.7, 1.0))
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


# --- criteria ---------------------------------------------------------------


def crit_generic() -> tuple[bool, str]:
    bad = []
    count = 0
    t0 = time.perf_counter()
    for r in (1, 2, 3):
        for d in (1, 2, 3):
            for p in (2, 3):
                for n in (1, 2):
                    rep = ed_report(gen_generic(r, d, p, n))
                    count += 1
                    ok = (
                        rep.rho == r * d
                        and rep.exact
                        and rep.a_omega.invariant_factors == (p**n,) * (r * d)
                    )
                    if not ok:
                        bad.append((r, d, p, n, rep.rho))
    elapsed = time.perf_counter() - t0
    if elapsed >= 1.0:
        bad.append(f"runtime {elapsed:.2f}s >= 1s")
    return not bad, f"{count} classes, rho = r*d, factors p^n, runtime {elapsed:.3f}s" + (
        f"; {len(bad)} bad (r, d, p, n, rho), e.g. {bad[:3]}" if bad else ""
    )


def crit_block() -> tuple[bool, str]:
    bad = []
    count = 0
    for r in range(1, 5):
        for p in (2, 3):
            for n in (1, 2, 3):
                c = gen_block_brauer(r, p, n)
                b = brauer_i0(brauer_matrix(c), p, n)
                rh = rho(wedge_nu(c))
                count += 1
                if not (all(x == 1 for x in b.divisors) and b.i0 == 2 * r and rh == 2 * r):
                    bad.append((r, p, n, b.divisors, b.i0, rh))
    return not bad, f"{count} block classes, divisors 1, i0 = rho = 2r" + (f"; bad {bad[:3]}" if bad else "")


def crit_chain() -> tuple[bool, str]:
    bad = []
    for r in range(1, 5):
        rep = ed_report(gen_chain(r, 2))
        if rep.rho != 2 * r + 1 or not rep.exact:
            bad.append((r, rep.rho))
    t1 = ed_report(parse_class(ROST_T1))
    t2 = ed_report(parse_class(ROST_T2))
    if parse_class(ROST_T1) != gen_chain(3, 2) or t1.rho != 7:
        bad.append(("T1", t1.rho))
    if parse_class(ROST_T2) != gen_chain(4, 2) or t2.rho != 9:
        bad.append(("T2", t2.rho))
    return not bad, f"rho = 2r+1 for r = 1..4; T1 -> {t1.rho}, T2 -> {t2.rho}" + (f"; bad {bad}" if bad else "")


def crit_oracle(corpus: list[SymbolClass]) -> tuple[bool, str]:
    mismatches = []
    for c in corpus:
        n = max(c.levels)
        b = brauer_i0(brauer_matrix(c), c.p, n)
        g = a_omega(wedge_nu(c))
        if b.i0 != g.ngens or b.factors != g.invariant_factors:
            mismatches.append((str(c), b.factors, g.invariant_factors))
    return not mismatches, f"{len(corpus)} degree-2 classes, {len(mismatches)} mismatches" + (
        f"; first {mismatches[0]}" if mismatches else ""
    )


def crit_parity(corpus: list[SymbolClass]) -> tuple[bool, str]:
    odd = [str(c) for c in corpus if rho(wedge_nu(c)) % 2]
    dist = sorted({rho(wedge_nu(c)) for c in corpus})
    return not odd, f"{len(corpus)} classes, rho values {dist}, {len(odd)} odd"


def crit_gap(corpus: list[SymbolClass]) -> tuple[bool, str]:
    violations = []
    seen = set()
    for c in corpus:
        d = c.degree
        m = wedge_nu(c)
        r = rho(m)
        seen.add((d, r))
        if r in set(range(1, d)) | {d + 1} or (r == 0) != (not m):
            violations.append((str(c), r))
    return not violations, f"{len(corpus)} classes, (d, rho) seen {sorted(seen)}, {len(violations)} violations"


def _random_lattice_checks(rng: random.Random, omegas: list[Multivector], wanted: int) -> tuple[int, list]:
    checked = 0
    bad = []
    attempts = 0
    while checked < wanted and attempts < 50 * wanted:
        attempts += 1
        m = rng.choice(omegas)
        r = m.rank
        if rng.random() < 0.5:
            # superset of the witness, rescaled, plus a few extra vectors
            base = [[rng.choice((1, 2, 3, -1)) * x for x in v] for v in witness(m).basis]
            gens = base + [[rng.randint(-3, 3) for _ in range(r)] for _ in range(rng.randint(0, 2))]
        else:
            gens = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(rng.randint(0, r))]
        W = Lattice.span(r, gens)
        if membership(m, W):
            checked += 1
            if W.rank < rho(m):
                bad.append((m, W))
    return checked, bad


def crit_witness(corpora: list[list[SymbolClass]], seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    checked_total = 0
    for corpus in corpora:
        omegas = [wedge_nu(c) for c in corpus]
        for m in omegas:
            W = witness(m)
            if W.rank != rho(m) or not membership(m, W):
                bad.append(("witness", m))
        checked, worse = _random_lattice_checks(rng, [m for m in omegas if m], 100)
        checked_total += checked
        if checked < 100:
            bad.append(("only", checked))
        bad.extend(worse)
    n_cases = sum(len(c) for c in corpora)
    return not bad, f"{n_cases} witnesses sound, {checked_total} member lattices all rank >= rho" + (
        f"; bad {bad[:2]}" if bad else ""
    )


def crit_snf(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(500):
        M = random_matrix(rng)
        U, D, V = smith(M)
        m, n = len(M), len(M[0])
        diag = [D[i][i] for i in range(min(m, n))]
        ok = (
            matmul(matmul(U, M), V) == D
            and abs(det(U)) == 1
            and abs(det(V)) == 1
            and all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
            and all(x >= 0 for x in diag)
            and all((b == 0) if a == 0 else b % a == 0 for a, b in zip(diag, diag[1:]))
        )
        if ok and min(m, n) <= 5:
            ok = elementary_divisors(M) == minors_gcd_divisors(M)
        if not ok:
            bad.append(M)
    return not bad, f"500 matrices up to 6x6, {len(bad)} failures"


def crit_claim() -> tuple[bool, str]:
    count = 0
    bad = []
    for d in range(3, 7):
        for n in range(d + 2, 13):
            for j in range(n):
                w = claim_subset(n, d, j)
                count += 1
                if not w.is_valid():
                    bad.append((n, d, j))
    cong = {nv: rho(wedge_nu(gen_congruence(nv, 3, 2))) for nv in range(5, 10)}
    bad.extend((nv, r) for nv, r in cong.items() if r != nv)
    return not bad, f"{count} (n, d, j) witnesses; congruence rho {cong}"


def crit_prime_index(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(100):
        p = rng.choice((2, 3))
        r = rng.randint(1, 4)
        n = rng.randint(1, 2)
        ds = [rng.choice([x for x in range(1, 12) if x % p]) for _ in range(r)]
        T = random_unimodular(rng, r)
        if not verify_prime_index_iso(ds, T, p, n):
            failures += 1
    return failures == 0, f"100 instances, {failures} failures"


def split_instance(rng: random.Random):
    """A degree-2 element that dies over an overlattice of index dividing ``p^n``."""
    p = rng.choice((2, 3, 5))
    n = rng.randint(1, 2)
    r = rng.randint(2, 6)
    T = random_unimodular(rng, r)
    a = [0] * r
    budget = n
    for i in rng.sample(range(r), r):
        take = rng.randint(0, budget)
        a[i] = take
        budget -= take
    N = max(a)
    # overlattice basis t_i / p^{a_i}, written over the common denominator p^N
    rows = [[p ** (N - a[i]) * x for x in T[i]] for i in range(r)]
    parts = []
    for i in range(r):
        for j in range(i + 1, r):
            e = a[i] + a[j]
            c = pc_normalize(p, rng.randint(0, p**e), e) if e else pc_normalize(p, 0, 0)
            if rng.random() < 0.7 and c:
                parts.append(mv_wedge_vectors(p, c, [T[i], T[j]]))
    m = mv_sum(p, r, parts)
    return m, Lattice(r, tuple(map(tuple, rows))), N, n


def crit_split(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    cases = []
    p = 2
    m0 = mv_wedge_vectors(p, pc_normalize(p, 1, 1), [[1, 0, 0], [0, 1, 0]])
    cases.append((m0, Lattice(3, ((1, 0, 0), (0, 2, 0), (0, 0, 2))), 1, 1))
    while len(cases) < 50:
        cases.append(split_instance(rng))
    bad = []
    maxed = 0
    for m, G, N, n in cases:
        if not split_hypothesis(m, G, N, n):
            bad.append(("hypothesis", m))
            continue
        r = rho(m)
        maxed += r == 2 * n
        if not split_bound_check(m, G, N, n):
            bad.append((m, r, n))
    first = rho(cases[0][0])
    return not bad and first == 2, f"{len(cases)} pairs, hand example rho = {first}, {maxed} attain 2n" + (
        f"; bad {bad[:2]}" if bad else ""
    )


CRITERIA: list[tuple[int, str]] = [
    (1, "rd-variables family"),
    (2, "block Brauer example"),
    (3, "chain classes / Rost values"),
    (4, "degree-2 oracle equivalence"),
    (5, "parity of degree-2 rho"),
    (6, "gap property"),
    (7, "witness soundness and minimality"),
    (8, "Smith normal form contract"),
    (9, "combinatorial claim and congruence family"),
    (10, "prime-to-p index isomorphism"),
    (11, "split-degree bound"),
]


def criterion_runners(seed: int = DEFAULT_SEED) -> dict[int, Callable[[], tuple[bool, str]]]:
    cache: dict[str, list[SymbolClass]] = {}

    def deg2():
        if "deg2" not in cache:
            cache["deg2"] = degree2_corpus(seed)
        return cache["deg2"]

    def homog():
        if "homog" not in cache:
            cache["homog"] = homogeneous_corpus(seed + 1)
        return cache["homog"]

    return {
        1: crit_generic,
        2: crit_block,
        3: crit_chain,
        4: lambda: crit_oracle(deg2()),
        5: lambda: crit_parity(deg2()),
        6: lambda: crit_gap(homog()),
        7: lambda: crit_witness([deg2(), homog()], seed + 7),
        8: lambda: crit_snf(seed + 8),
        9: crit_claim,
        10: lambda: crit_prime_index(seed + 10),
        11: lambda: crit_split(seed + 11),
    }


def run_criterion(number: int, seed: int = DEFAULT_SEED, runners=None) -> CriterionResult:
    runners = runners or criterion_runners(seed)
    name = dict(CRITERIA)[number]
    t0 = time.perf_counter()
    passed, detail = runners[number]()
    return CriterionResult(number, name, passed, detail, time.perf_counter() - t0)


def run_all(seed: int = DEFAULT_SEED, only: list[int] | None = None) -> list[CriterionResult]:
    runners = criterion_runners(seed)
    numbers = only or [n for n, _ in CRITERIA]
    return [run_criterion(n, seed, runners) for n in sorted(numbers)]
