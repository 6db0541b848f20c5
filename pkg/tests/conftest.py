import random
from itertools import combinations, product

import pytest

from edval.zlattice import det


@pytest.fixture
def rng():
    return random.Random(1234)


def random_unimodular(rng, r, steps=10):
    T = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        q = rng.randint(-2, 2)
        T[i] = [a + q * b for a, b in zip(T[i], T[j])]
    if rng.random() < 0.5 and r:
        T[0] = [-x for x in T[0]]
    assert abs(det(T)) == 1
    return T


def subgroup_invariants(vectors, p, N, r):
    """Invariant factors of the subgroup of (Z/p^N)^r generated by ``vectors`` by enumeration.

    Counts elements killed by p^k for every k; the counts pin down the
    invariant factors of a finite abelian p-group.
    """
    q = p**N
    seen = {tuple([0] * r)}
    frontier = list(seen)
    gens = [tuple(x % q for x in v) for v in vectors]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % q for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    # n_k = #elements of order dividing p^k
    counts = [sum(1 for x in seen if all((p**k * a) % q == 0 for a in x)) for k in range(N + 1)]
    # number of cyclic factors of order >= p^k is log_p(n_k / n_{k-1})
    at_least = []
    for k in range(1, N + 1):
        ratio = counts[k] // counts[k - 1]
        e = 0
        while ratio > 1:
            ratio //= p
            e += 1
        at_least.append(e)
    factors = []
    for k in range(1, N + 1):
        exact = at_least[k - 1] - (at_least[k] if k < N else 0)
        factors += [p**k] * exact
    return tuple(sorted(factors))


def f2_rho(terms, r, d):
    """Least dim of a subspace V of F_2^r with omega in wedge^d V, by exhaustive search.

    ``terms`` is a set of index tuples (omega over F_2). Uses: omega in wedge V
    iff every functional vanishing on V contracts omega to zero.
    """

    def contract(om, f):
        out = {}
        for I in om:
            for t, i in enumerate(I):
                if f[i]:
                    key = I[:t] + I[t + 1 :]
                    out[key] = out.get(key, 0) ^ 1
        return {k for k, v in out.items() if v}

    if not terms:
        return 0
    vecs = [v for v in product((0, 1), repeat=r) if any(v)]
    for k in range(0, r + 1):
        for basis in combinations(vecs, k):
            span = {tuple([0] * r)}
            for b in basis:
                span |= {tuple(x ^ y for x, y in zip(s, b)) for s in span}
            if len(span) != 2**k:
                continue
            annihilator = [f for f in vecs if all(sum(a * b for a, b in zip(f, s)) % 2 == 0 for s in span)]
            if all(not contract(terms, f) for f in annihilator):
                return k
    return r
