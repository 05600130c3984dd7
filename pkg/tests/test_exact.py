import random
from itertools import combinations, permutations
from math import ceil, comb, log2

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from conftest import random_local_realiser, random_poset
from ldim.codec import is_cube_embedding
from ldim.constructions import far_layers_realiser, lex_realiser_add, lex_realiser_subst
from ldim.errors import Exceeded, ParameterError
from ldim.exact import (
    SearchBudget,
    critical_pairs,
    exact_dim,
    exact_dim_witness,
    exact_ldim,
    exact_ldim_witness,
    exact_twodim,
    exact_twodim_witness,
)
from ldim.order import (
    antichain,
    chain,
    is_partial_linear_extension,
    lex_sum,
    make_poset,
    standard_example,
    unlabelled_posets,
)
from ldim.realiser import verify, verify_local_realiser


def sequences(P):
    """All partial linear extensions of length >= 2, by permutation filtering."""
    E = list(P.elements())
    for r in range(2, len(E) + 1):
        for p in permutations(E, r):
            if all(not P.less(p[j], p[i]) for i in range(r) for j in range(i + 1, r)):
                yield p


def ilp_ldim(P):
    """Local dimension as a 0/1 program: choose lists, minimise the max multiplicity."""
    if P.n == 1:
        return 1
    seqs = list(sequences(P))
    reqs = [(x, y) for x in P.elements() for y in P.elements() if x != y and not P.less(y, x)]
    nv = len(seqs) + 1  # last variable is d
    rows, lo, hi = [], [], []
    for x, y in reqs:
        row = np.zeros(nv)
        for j, s in enumerate(seqs):
            if x in s and y in s and s.index(x) < s.index(y):
                row[j] = 1
        rows.append(row)
        lo.append(1)
        hi.append(np.inf)
    for a in P.elements():
        row = np.zeros(nv)
        for j, s in enumerate(seqs):
            if a in s:
                row[j] = 1
        row[-1] = -1
        rows.append(row)
        lo.append(-np.inf)
        hi.append(0)
    c = np.zeros(nv)
    c[-1] = 1
    ub = np.ones(nv)
    ub[-1] = P.n
    res = milp(
        c,
        constraints=LinearConstraint(np.array(rows), lo, hi),
        integrality=np.ones(nv),
        bounds=Bounds(np.zeros(nv), ub),
    )
    assert res.success
    return round(res.fun)


def brute_dim(P):
    les = [tuple(p) for p in permutations(P.elements()) if is_partial_linear_extension(P, p)]
    inc = [(x, y) for x in P.elements() for y in P.elements() if x != y and not P.comparable(x, y)]
    for t in range(1, len(les) + 1):
        for family in combinations(les, t):
            if all(any(L.index(x) < L.index(y) for L in family) for x, y in inc):
                return t


def brute_twodim(P):
    n = P.n
    for d in range(0, n + 1):
        subsets = [frozenset(c) for r in range(d + 1) for c in combinations(range(1, d + 1), r)]
        for images in permutations(subsets, n):
            if is_cube_embedding(P, images):
                return d


SMALL = [P for n in range(1, 6) for P in unlabelled_posets(n)]


class TestKnownValues:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_chain(self, n):
        assert exact_ldim(chain(n)) == 1
        assert exact_dim(chain(n)) == 1
        assert exact_twodim(chain(n)) == n - 1

    @pytest.mark.parametrize("n", range(2, 7))
    def test_antichain(self, n):
        assert exact_ldim(antichain(n)) == 2
        assert exact_dim(antichain(n)) == 2

    def test_antichain6_twodim(self):
        assert exact_twodim(antichain(6)) == 4

    def test_single(self):
        assert exact_twodim(make_poset(1)) == 0

    def test_s3(self):
        S3 = standard_example(3)
        assert exact_ldim(S3) == 3
        assert exact_dim(S3) == 3

    def test_s4(self):
        assert exact_ldim(standard_example(4)) == 3
        assert exact_dim(standard_example(4)) == 4

    @pytest.mark.parametrize("n", [3, 4])
    def test_far_layers_matches(self, n):
        R = far_layers_realiser(n, 1, n - 1)
        assert verify(R).max_multiplicity == exact_ldim(standard_example(n)) == 3


class TestWitnesses:
    @pytest.mark.parametrize("P", SMALL[:30], ids=lambda P: f"n{P.n}r{P.relation_count()}")
    def test_ldim_witness(self, P):
        d, R = exact_ldim_witness(P)
        rep = verify(R)
        assert rep.valid and rep.max_multiplicity <= d

    @pytest.mark.parametrize("P", SMALL[:30], ids=lambda P: f"n{P.n}r{P.relation_count()}")
    def test_dim_witness(self, P):
        t, les = exact_dim_witness(P)
        assert len(les) == t
        assert all(len(L) == P.n for L in les)
        assert verify_local_realiser(P, [list(L) for L in les]).valid

    @pytest.mark.parametrize("P", SMALL[:30], ids=lambda P: f"n{P.n}r{P.relation_count()}")
    def test_twodim_witness(self, P):
        d, images = exact_twodim_witness(P)
        assert all(img <= frozenset(range(1, d + 1)) for img in images)
        assert is_cube_embedding(P, images)


def test_ldim_matches_ilp_on_all_small_posets():
    # n <= 4 exhaustively plus every 5-element poset
    for P in SMALL:
        assert exact_ldim(P) == ilp_ldim(P), P.relations()


def test_dim_matches_brute_force():
    for P in SMALL:
        assert exact_dim(P) == brute_dim(P)


def test_twodim_matches_brute_force():
    for P in SMALL:
        if P.n <= 4:
            assert exact_twodim(P) == brute_twodim(P)


def test_chain_of_inequalities():
    for P in SMALL:
        l, d, t = exact_ldim(P), exact_dim(P), exact_twodim(P)
        assert l <= d
        if P.n >= 2:
            assert d <= t
        assert ceil(log2(P.n)) <= t <= P.n
        assert (l == 1) == P.is_chain()


def test_critical_pairs_of_antichain():
    assert sorted(critical_pairs(antichain(2))) == [(1, 2), (2, 1)]
    assert critical_pairs(chain(3)) == []


def test_exceeded():
    with pytest.raises(Exceeded) as exc:
        exact_ldim(standard_example(3), SearchBudget(d_max=2))
    assert exc.value.lower_bound == 3
    with pytest.raises(Exceeded):
        exact_ldim(standard_example(4), SearchBudget(node_limit=5))
    with pytest.raises(Exceeded):
        exact_twodim(antichain(6), SearchBudget(d_max=3))


def test_bad_budget():
    with pytest.raises(ParameterError):
        SearchBudget(d_max=0)


def test_dim_size_guard():
    with pytest.raises(ParameterError):
        exact_dim(antichain(9))


def test_lex_sum_inequalities():
    rng = random.Random(11)
    for _ in range(8):
        P = random_poset(rng, rng.randint(1, 3))
        Q = {x: random_poset(rng, rng.randint(1, 2)) for x in P.elements()}
        S, _ = lex_sum(P, Q)
        l = exact_ldim(S)
        assert l >= max(exact_ldim(P), *(exact_ldim(q) for q in Q.values()))
        _, L_P = exact_ldim_witness(P)
        M = {x: [list(L) for L in exact_dim_witness(q)[1]] for x, q in Q.items()}
        R, _ = lex_realiser_subst(L_P, Q, M)
        assert l <= verify(R).max_multiplicity
        M2 = {x: [list(L) for L in exact_ldim_witness(q)[1].lists] for x, q in Q.items()}
        R2, _ = lex_realiser_add(L_P, Q, M2)
        assert l <= verify(R2).max_multiplicity


def test_sperner_values():
    for n in range(2, 7):
        expected = min(m for m in range(n + 1) if comb(m, m // 2) >= n)
        assert exact_twodim(antichain(n)) == expected


def test_random_realiser_never_beats_oracle():
    rng = random.Random(5)
    for _ in range(20):
        P = random_poset(rng, rng.randint(2, 6))
        R = random_local_realiser(P, rng)
        assert verify(R).max_multiplicity >= exact_ldim(P)
