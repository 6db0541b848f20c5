import json
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_unimodular
from edval.extalg import (
    Multivector,
    MultivectorError,
    change_basis,
    contract_dual,
    contract_vector,
    degree_part,
    mv_add,
    mv_wedge_vectors,
    to_skew_matrix,
)
from edval.pzcoeff import parse_pcoeff, pc_normalize
from edval.zlattice import matmul, matvec, unimodular_inverse




def make(p, rank, terms):
    return Multivector(p, rank, {tuple(I): parse_pcoeff(c, p) for I, c in terms.items()})


half = pc_normalize(2, 1, 1)
quarter = pc_normalize(2, 1, 2)


def test_wedge_examples():
    assert mv_wedge_vectors(2, half, [[1, 0], [0, 1]]) == make(2, 2, {(0, 1): "1/2"})
    assert not mv_wedge_vectors(2, quarter, [[1, 0], [2, 0]])
    got = mv_wedge_vectors(2, half, [[1, 1, 0], [0, 1, 1]])
    # 2x2 minors of [[1,1,0],[0,1,1]] on column pairs (0,1), (0,2), (1,2)
    assert got == make(2, 3, {(0, 1): "1/2", (0, 2): "1/2", (1, 2): "1/2"})


def test_wedge_zero_vector_and_errors():
    assert not mv_wedge_vectors(3, pc_normalize(3, 1, 1), [[0, 0, 0], [1, 0, 0]])
    with pytest.raises(MultivectorError):
        mv_wedge_vectors(2, half, [[1, 0], [1, 0, 0]])
    assert mv_wedge_vectors(2, half, [], rank=3) == make(2, 3, {(): "1/2"})


def test_wedge_large_degree_matches_cofactor():
    rng = random.Random(7)
    vecs = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(5)]
    c = pc_normalize(3, 1, 3)
    got = mv_wedge_vectors(3, c, vecs)
    # expand one vector at a time: v1 ^ (v2 ^ ... ^ v5)
    acc = {(): 1}
    for v in reversed(vecs):
        nxt = {}
        for I, a in acc.items():
            for j, x in enumerate(v):
                if x and j not in I:
                    key = tuple(sorted((j,) + I))
                    sign = (-1) ** sum(1 for i in I if i < j)
                    nxt[key] = nxt.get(key, 0) + sign * x * a
        acc = nxt
    assert got == Multivector.from_numerators(3, 6, 3, acc)


def test_add_examples():
    x = make(2, 3, {(0, 1): "1/2"})
    assert mv_add(x, Multivector.zero(2, 3)) == x
    assert not mv_add(x, x)
    y = mv_add(make(2, 3, {(0, 1): "1/4"}), make(2, 3, {(1, 2): "1/2"}))
    assert set(y.terms) == {(0, 1), (1, 2)}
    with pytest.raises(MultivectorError):
        mv_add(x, make(3, 3, {(0, 1): "1/3"}))
    with pytest.raises(MultivectorError):
        mv_add(x, make(2, 4, {(0, 1): "1/2"}))


def test_contract_dual_examples():
    m = make(2, 2, {(0, 1): "1/2"})
    assert contract_dual(m, (0,)) == make(2, 2, {(1,): "1/2"})
    assert contract_dual(m, (1,)) == make(2, 2, {(0,): "1/2"})
    assert contract_dual(m, ()) == m
    with pytest.raises(MultivectorError):
        contract_dual(m, (2,))


def test_contract_dual_sign_visible_at_odd_prime():
    m = make(3, 2, {(0, 1): "1/3"})
    assert contract_dual(m, (1,)) == make(3, 2, {(0,): "2/3"})
    # the last index acts first: e0 ^ e1 -> -e0 -> -1
    assert contract_dual(m, (0, 1)) == make(3, 2, {(): "2/3"})


def test_contract_vector_examples():
    m = make(2, 2, {(0, 1): "1/2"})
    assert contract_vector(m, [0, 1]) == make(2, 2, {(0,): "1/2"})
    assert not contract_vector(make(2, 2, {(): "1/2"}), [1, 1])
    with pytest.raises(MultivectorError):
        contract_vector(m, [1])


def test_contract_vector_is_matrix_product():
    # omega = (1/p^n) M with M = a b^t - b a^t; contraction with v gives -Mv = M^t v
    a, b = [1, 2, 0, -1], [0, 1, 3, 1]
    p, n = 5, 2
    m = mv_wedge_vectors(p, pc_normalize(p, 1, n), [a, b])
    M = [[a[i] * b[j] - b[i] * a[j] for j in range(4)] for i in range(4)]
    assert to_skew_matrix(m) == (M, n)
    for v in ([1, 0, 0, 0], [2, -1, 3, 1], [0, 0, 0, 7]):
        Mv = matvec(M, v)
        expected = Multivector.from_numerators(p, 4, n, {(i,): -x for i, x in enumerate(Mv)})
        assert contract_vector(m, v) == expected


def test_change_basis_examples():
    m = make(2, 2, {(0, 1): "1/2"})
    assert change_basis(m, [[1, 0], [0, 1]]) == m
    assert change_basis(m, [[0, 1], [1, 0]]) == m
    m3 = make(3, 2, {(0, 1): "1/3"})
    assert change_basis(m3, [[0, 1], [1, 0]]) == make(3, 2, {(0, 1): "2/3"})
    with pytest.raises(MultivectorError):
        change_basis(m, [[2, 0], [0, 1]])


def test_degree_part():
    m = make(3, 3, {(): "1/3", (0,): "1/3", (1, 2): "2/9"})
    assert degree_part(m, 1) == make(3, 3, {(0,): "1/3"})
    assert degree_part(m, 0) == make(3, 3, {(): "1/3"})
    assert not degree_part(make(3, 3, {(1, 2): "1/3"}), 3)


def test_json_round_trip():
    m = make(2, 4, {(0, 1): "1/2", (2, 3): "3/4"})
    data = m.to_json()
    assert data == {"p": 2, "rank": 4, "terms": [{"idx": [0, 1], "coeff": "1/2"}, {"idx": [2, 3], "coeff": "3/4"}]}
    assert Multivector.from_json(json.loads(json.dumps(data))) == m


def test_invariants_enforced():
    with pytest.raises(MultivectorError):
        Multivector(2, 3, {(1, 0): half})
    with pytest.raises(MultivectorError):
        Multivector(2, 2, {(0, 2): half})
    with pytest.raises(MultivectorError):
        Multivector(3, 2, {(0, 1): half})


# --- properties -------------------------------------------------------------


@st.composite
def multivectors(draw, homogeneous=None):
    p = draw(st.sampled_from([2, 3, 5]))
    r = draw(st.integers(1, 5))
    degs = [homogeneous] if homogeneous is not None else list(range(r + 1))
    terms = {}
    for _ in range(draw(st.integers(0, 5))):
        d = draw(st.sampled_from(degs))
        if d > r:
            continue
        I = tuple(sorted(draw(st.sets(st.integers(0, r - 1), min_size=d, max_size=d))))
        terms[I] = pc_normalize(p, draw(st.integers(-50, 50)), draw(st.integers(0, 3)))
    return Multivector(p, r, terms)


vectors_seed = st.integers(0, 10**6)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(2, 5), st.integers(2, 4), vectors_seed)
def test_antisymmetry(p, r, d, seed):
    rng = random.Random(seed)
    d = min(d, r)
    vs = [[rng.randint(-4, 4) for _ in range(r)] for _ in range(d)]
    c = pc_normalize(p, 1, 2)
    base = mv_wedge_vectors(p, c, vs)
    i = rng.randrange(d - 1)
    swapped = vs[:i] + [vs[i + 1], vs[i]] + vs[i + 2 :]
    assert mv_wedge_vectors(p, c, swapped) == -base
    repeated = vs[:i] + [vs[i], vs[i]] + vs[i + 2 :]
    assert not mv_wedge_vectors(p, c, repeated)


@settings(max_examples=150, deadline=None)
@given(multivectors(), vectors_seed)
def test_contraction_squares_to_zero(m, seed):
    rng = random.Random(seed)
    f = [rng.randint(-3, 3) for _ in range(m.rank)]
    assert not contract_vector(contract_vector(m, f), f)
    j = rng.randrange(m.rank)
    assert not contract_dual(contract_dual(m, (j,)), (j,))


@settings(max_examples=150, deadline=None)
@given(multivectors(), vectors_seed)
def test_composition_law(m, seed):
    rng = random.Random(seed)
    k = rng.randint(1, m.rank)
    J = tuple(sorted(rng.sample(range(m.rank), k)))
    assert contract_dual(m, J) == contract_dual(contract_dual(m, J[1:]), J[:1])
    e = [[int(i == j) for j in range(m.rank)] for i in range(m.rank)]
    step = m
    for j in reversed(J):
        step = contract_vector(step, e[j])
    assert contract_dual(m, J) == step


@settings(max_examples=150, deadline=None)
@given(multivectors(), multivectors(), vectors_seed)
def test_contract_vector_additive(m1, m2, seed):
    rng = random.Random(seed)
    if (m1.p, m1.rank) != (m2.p, m2.rank):
        m2 = Multivector(m1.p, m1.rank, {})
    u = [rng.randint(-3, 3) for _ in range(m1.rank)]
    w = [rng.randint(-3, 3) for _ in range(m1.rank)]
    uw = [a + b for a, b in zip(u, w)]
    assert contract_vector(m1, uw) == contract_vector(m1, u) + contract_vector(m1, w)
    assert contract_vector(m1 + m2, u) == contract_vector(m1, u) + contract_vector(m2, u)


@settings(max_examples=100, deadline=None)
@given(multivectors(homogeneous=2), vectors_seed)
def test_degree2_matrix_identity(m, seed):
    rng = random.Random(seed)
    if not m:
        return
    M, N = to_skew_matrix(m)
    v = [rng.randint(-5, 5) for _ in range(m.rank)]
    Mt = [list(col) for col in zip(*M)]
    expected = Multivector.from_numerators(m.p, m.rank, N, {(i,): x for i, x in enumerate(matvec(Mt, v))})
    assert contract_vector(m, v) == expected


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 5), st.integers(1, 3), vectors_seed)
def test_change_basis_of_wedge(p, r, d, seed):
    rng = random.Random(seed)
    d = min(d, r)
    T = random_unimodular(rng, r)
    Tinv = unimodular_inverse(T)
    vs = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(d)]
    c = pc_normalize(p, rng.randint(1, 8), 2)
    m = mv_wedge_vectors(p, c, vs)
    # coordinates of v in the row basis of T are v T^{-1}
    coords = matmul(vs, Tinv)
    assert change_basis(m, T) == mv_wedge_vectors(p, c, coords)
    assert change_basis(change_basis(m, T), Tinv) == m
