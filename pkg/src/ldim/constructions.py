"""Explicit local realisers and order embeddings.

Wherever a construction allows lists "in any order" we use ascending bitmask
order within a layer, and exact reversal where a reversed copy is needed.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from math import ceil, isqrt, log2

from .errors import (
    DegreeError,
    InvalidListError,
    NotARealiserError,
    ParameterError,
    RangeError,
)
from .order import (
    BasePoset,
    LayerPoset,
    divisibility_poset,
    is_partial_linear_extension,
    iter_bits,
    lex_sum,
)
from .realiser import LocalRealiser, multiplicities, verify_local_realiser


def _checked(R: LocalRealiser) -> LocalRealiser:
    report = verify_local_realiser(R.host, R)
    if not report.valid:
        raise AssertionError(
            f"construction produced an invalid realiser ({report.uncovered_count} pairs uncovered)"
        )
    return R


def layer_stats(R: LocalRealiser) -> dict[str, int]:
    """Max multiplicity over each layer of a LayerPoset host."""
    host = R.host
    mult = R.multiplicity()
    out = {"lists": len(R.lists), "max_multiplicity": max(mult.values(), default=0)}
    if isinstance(host, LayerPoset):
        out[f"max_multiplicity_layer_{host.ell}"] = max((mult[a] for a in host.low_ids()), default=0)
        out[f"max_multiplicity_layer_{host.k}"] = max((mult[a] for a in host.high_ids()), default=0)
    return out


# -- far layers --------------------------------------------------------------


def far_layers_realiser(n: int, ell: int, top: int, check: bool = True) -> LocalRealiser:
    """Realiser of Q_n^(ell, top) with multiplicity at most 2 + max(ell, n - top).

    Two reversed copies of "low layer then high layer", and for each ground
    element i the list of top-sets missing i followed by low sets containing i.
    """
    if not 0 <= ell < top <= n:
        raise ParameterError(f"need 0 <= ell < top <= n, got n={n} ell={ell} top={top}")
    P = LayerPoset(n, ell, top)
    low = list(P.low_ids())
    high = list(P.high_ids())
    lists = [low + high, low[::-1] + high[::-1]]
    for i in range(n):
        bit = 1 << i
        L = [b for b in high if not P.masks[b] & bit]
        L += [a for a in low if P.masks[a] & bit]
        lists.append(L)
    R = LocalRealiser(P, [L for L in lists if len(L) >= 2])
    return _checked(R) if check else R


# -- bipartite-graph construction ---------------------------------------------


@dataclass(frozen=True)
class BipartiteGraph:
    """Edges are (a, b) pairs, 1-based on each side; edge i is ground element i."""

    a_count: int
    b_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.a_count < 1 or self.b_count < 1:
            raise DegreeError("both parts must be nonempty")
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.edges)) != len(self.edges):
            raise DegreeError("duplicate edge")
        for a, b in self.edges:
            if not (1 <= a <= self.a_count and 1 <= b <= self.b_count):
                raise DegreeError(f"edge ({a}, {b}) out of range")

    @property
    def n(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for a, _ in self.edges if a == v)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(1, self.a_count + 1)), default=0)

    def edge_mask(self, v: int) -> int:
        m = 0
        for i, (a, _) in enumerate(self.edges):
            if a == v:
                m |= 1 << i
        return m


def bipartite_realiser(G: BipartiteGraph, ell: int, k: int, check: bool = True) -> LocalRealiser:
    """Local realiser of Q_n^(ell,k), n = |E(G)|, built from the graph G.

    Besides the two layered lists, for each a-vertex v and each set X of its
    neighbours there is a list: the k-sets whose edges at v go exactly to X,
    then the ell-sets using some edge at v that leaves X.  A k-set therefore
    appears in at most a_count + 2 lists.
    """
    n = G.n
    if not 1 <= ell < k <= n:
        raise ParameterError(f"need 1 <= ell < k <= n={n}, got ell={ell} k={k}")
    P = LayerPoset(n, ell, k)
    masks = P.masks
    low = list(P.low_ids())
    high = list(P.high_ids())
    lists = [low + high, low[::-1] + high[::-1]]
    for v in range(1, G.a_count + 1):
        ev = G.edge_mask(v)
        groups: dict[int, list[int]] = {}
        for b in high:
            groups.setdefault(masks[b] & ev, []).append(b)
        # all submasks of ev, ascending
        sub = 0
        while True:
            outside = ev & ~sub
            L = list(groups.get(sub, ()))
            L += [a for a in low if masks[a] & outside]
            if len(L) >= 2:
                lists.append(L)
            if sub == ev:
                break
            sub = (sub - ev) & ev
    R = LocalRealiser(P, lists)
    return _checked(R) if check else R


def low_multiplicity_bounds(G: BipartiteGraph, ell: int) -> dict[str, float]:
    """The two ell-set multiplicity expressions written for the bipartite construction."""
    d = G.max_degree()
    return {
        "pow_times_ell_plus_2": 2 ** (d - 1) * ell + 2,
        "pow_plus_2ell": 2 ** (d - 1) + 2 * ell,
    }


def default_bipartite_graph(n: int, ell: int) -> BipartiteGraph:
    """Row-major graph with ceil(n/x) a-vertices and ceil(x) b-vertices,
    x = log n - log log n - log ell."""
    if n < 2 or ell < 1:
        raise ParameterError("need n >= 2 and ell >= 1")
    x = log2(n) - log2(log2(n)) - log2(ell)
    if x <= 0:
        raise ParameterError(f"log n - log log n - log ell = {x:.4g} is not positive")
    b_count = ceil(x)
    a_count = ceil(n / x)
    if a_count * b_count < n:
        raise ParameterError("not enough room for n edges")
    edges = []
    for a in range(1, a_count + 1):
        for b in range(1, b_count + 1):
            if len(edges) < n:
                edges.append((a, b))
    return BipartiteGraph(a_count, b_count, tuple(edges))


def hypercube_graph_union(m: int, ell: int = 1) -> BipartiteGraph:
    """ell disjoint copies of the m-cube graph; even-weight vertices form side A."""
    if m < 1 or ell < 1:
        raise ParameterError("need m >= 1 and ell >= 1")
    if m > 20:
        raise ParameterError("m > 20 refused (edge count overflow guard)")
    verts = range(1 << m)
    even = [v for v in verts if bin(v).count("1") % 2 == 0]
    odd = [v for v in verts if bin(v).count("1") % 2 == 1]
    a_rank = {v: i for i, v in enumerate(even)}
    b_rank = {v: i for i, v in enumerate(odd)}
    half = 1 << (m - 1)
    edges = []
    for c in range(ell):
        for v in even:
            for d in range(m):
                u = v ^ (1 << d)
                edges.append((c * half + a_rank[v] + 1, c * half + b_rank[u] + 1))
    return BipartiteGraph(half * ell, half * ell, tuple(edges))


# -- lexicographic sums --------------------------------------------------------


def _as_map(family):
    if isinstance(family, Mapping):
        return family
    return {i + 1: v for i, v in enumerate(family)}


def _check_local(Qx: BasePoset, lists, what: str) -> None:
    try:
        report = verify_local_realiser(Qx, lists)
    except InvalidListError as e:
        raise NotARealiserError(f"{what}: {e}") from None
    if not report.valid:
        raise NotARealiserError(f"{what}: {report.uncovered_count} requirements uncovered")


def _check_full(Qx: BasePoset, L, what: str) -> None:
    if len(L) != Qx.n or not is_partial_linear_extension(Qx, L):
        raise NotARealiserError(f"{what}: {list(L)} is not a linear extension")


def lex_realiser_subst(L_P: LocalRealiser, Q, M):
    """Substitute realisers M[x] of Q[x] into a local realiser of P.

    Each occurrence of x is replaced by x times one list of M[x].  If x occurs
    at least |M[x]| times the lists are used cyclically; otherwise each
    occurrence gets a distinct list and the unused ones are appended.  The
    element (x, y) ends up with multiplicity max(mu(x), |M[x]|).

    Returns (realiser of the lexicographic sum, (x, y) -> id index).
    """
    P = L_P.host
    Q = _as_map(Q)
    M = _as_map(M)
    _check_local(P, L_P.lists, "index realiser")
    sumP, index = lex_sum(P, Q)
    for x in P.elements():
        if not M.get(x):
            raise NotARealiserError(f"no realiser given for summand {x}")
        for L in M[x]:
            _check_full(Q[x], L, f"summand {x}")
        _check_local(Q[x], M[x], f"summand {x}")

    mu = multiplicities(P, L_P.lists)
    seen = dict.fromkeys(P.elements(), 0)

    def block(x, L):
        return [index[(x, y)] for y in L]

    lists = []
    for L in L_P.lists:
        out = []
        for x in L:
            j = seen[x]
            seen[x] += 1
            Mx = M[x]
            choice = Mx[j % len(Mx)] if len(Mx) <= mu[x] else Mx[j]
            out += block(x, choice)
        lists.append(out)
    for x in P.elements():
        for j in range(mu[x], len(M[x])):
            lists.append(block(x, M[x][j]))
    return _checked(LocalRealiser(sumP, lists)), index


def lex_realiser_add(L_P: LocalRealiser, Q, M, K=None):
    """Compose local realisers additively: mu(x, y) = mu_P(x) + mu_{M[x]}(y).

    Occurrences of x in L_P become x times the linear extension K[x]
    (canonical one by default), and every list of M[x] is added as x times M.
    """
    P = L_P.host
    Q = _as_map(Q)
    M = _as_map(M)
    _check_local(P, L_P.lists, "index realiser")
    sumP, index = lex_sum(P, Q)
    K = dict(_as_map(K)) if K is not None else {}
    for x in P.elements():
        K.setdefault(x, Q[x].linear_extension())
        _check_full(Q[x], K[x], f"K[{x}]")
        _check_local(Q[x], M.get(x, ()), f"summand {x}")

    lists = []
    for L in L_P.lists:
        lists.append([index[(x, y)] for x in L for y in K[x]])
    for x in P.elements():
        for Lx in M.get(x, ()):
            lists.append([index[(x, y)] for y in Lx])
    return _checked(LocalRealiser(sumP, lists)), index


# -- embeddings -----------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    source: BasePoset
    target: BasePoset
    f: dict[int, int]

    def is_valid(self) -> bool:
        return verify_embedding(self.source, self.target, self.f)

    def lines(self) -> list[str]:
        return [f"f {a} {self.f[a]}" for a in self.source.elements()]


def verify_embedding(source: BasePoset, target: BasePoset, f) -> bool:
    """True iff f is injective and x <= y exactly when f(x) <= f(y)."""
    img = [f[a] for a in source.elements()]
    if len(set(img)) != len(img):
        return False
    for a in source.elements():
        for b in source.elements():
            if a != b and source.less(a, b) != target.less(f[a], f[b]):
                return False
    return True


def compose(e1: Embedding, e2: Embedding) -> Embedding:
    return Embedding(e1.source, e2.target, {a: e2.f[e1.f[a]] for a in e1.source.elements()})


def shift_embedding_12(n: int, k: int) -> Embedding:
    """Q_{n-k+1}^(1,2) into Q_n^(k,k+1) by adding the k-1 fixed elements n-k+2..n."""
    if k < 1 or n - k + 1 < 2:
        raise ParameterError(f"need k >= 1 and n - k + 1 >= 2, got n={n} k={k}")
    src = LayerPoset(n - k + 1, 1, 2)
    dst = LayerPoset(n, k, k + 1)
    fresh = ((1 << (k - 1)) - 1) << (n - k + 1)
    f = {a: dst.id_of(src.masks[a] | fresh) for a in src.elements()}
    return Embedding(src, dst, f)


def shift_embedding_up(n: int, ell: int, k: int) -> Embedding:
    """Q_n^(ell,k) into Q_{n+1}^(ell,k+1): k-sets gain the new element n+1."""
    if not 1 <= ell < k <= n:
        raise ParameterError(f"need 1 <= ell < k <= n, got n={n} ell={ell} k={k}")
    src = LayerPoset(n, ell, k)
    dst = LayerPoset(n + 1, ell, k + 1)
    new = 1 << n
    f = {a: dst.id_of(src.masks[a]) for a in src.low_ids()}
    f.update({b: dst.id_of(src.masks[b] | new) for b in src.high_ids()})
    return Embedding(src, dst, f)


def first_primes(k: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def divisibility_embedding(k: int, n: int) -> Embedding:
    """Q_k^(1, floor(sqrt k)) into ([n], |) via S -> product of the i-th primes, i in S."""
    r = isqrt(k)
    if r <= 1:
        raise ParameterError(f"floor(sqrt({k})) = {r} leaves no second layer above the singletons")
    primes = first_primes(k)
    top = 1
    for p in primes[-r:]:
        top *= p
    if top > n:
        raise RangeError(f"largest image {top} exceeds n={n}")
    src = LayerPoset(k, 1, r)
    dst = divisibility_poset(n)
    f = {}
    for a in src.elements():
        v = 1
        for i in iter_bits(src.masks[a]):
            v *= primes[i]
        f[a] = v
    return Embedding(src, dst, f)
