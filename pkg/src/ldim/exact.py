"""Brute-force oracles for local dimension, dimension and 2-dimension.

These are exponential searches intended for posets with at most about eight
elements.  Each one either returns the exact value or raises
:class:`~ldim.errors.Exceeded`; none of them guesses.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product
from math import ceil, log2

from .errors import Exceeded, ParameterError
from .order import BasePoset, iter_bits, popcount
from .realiser import LocalRealiser


@dataclass(frozen=True)
class SearchBudget:
    d_max: int = 32
    node_limit: int = 20_000_000
    time_limit: float = 300.0

    def __post_init__(self):
        if self.d_max < 1 or self.node_limit < 1 or self.time_limit <= 0:
            raise ParameterError("search budget fields must be positive")


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit
        self.lower = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise Exceeded(self.lower, "node_limit")
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise Exceeded(self.lower, "time_limit")


def _pair_index(pairs):
    return {p: i for i, p in enumerate(pairs)}


def _partial_extensions(P: BasePoset):
    """Yield every partial linear extension of length >= 2 as a tuple."""
    elems = list(P.elements())
    for r in range(2, len(elems) + 1):
        for S in combinations(elems, r):
            smask = 0
            for a in S:
                smask |= 1 << a
            out: list[int] = []

            def rec(placed):
                if len(out) == r:
                    yield tuple(out)
                    return
                for a in S:
                    if not placed >> a & 1 and P.down_mask(a) & smask & ~placed == 0:
                        out.append(a)
                        yield from rec(placed | 1 << a)
                        out.pop()

            yield from rec(0)


def _coverage(seq, index) -> int:
    c = 0
    for i, a in enumerate(seq):
        for b in seq[i + 1 :]:
            j = index.get((a, b))
            if j is not None:
                c |= 1 << j
    return c


# -- local dimension ------------------------------------------------------------


class _LdimSearch:
    def __init__(self, P: BasePoset, meter: _Meter):
        self.P = P
        self.meter = meter
        self.pairs = sorted((x, y) for x in P.elements() for y in iter_bits(P.requirement_mask(x)))
        index = _pair_index(self.pairs)
        n = P.n
        # pairs touching each element, and per element the out/in partner maps
        self.touch = [0] * (n + 1)
        for j, (x, y) in enumerate(self.pairs):
            self.touch[x] |= 1 << j
            self.touch[y] |= 1 << j
        self.covering: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in self.pairs]
        for seq in _partial_extensions(P):
            c = _coverage(seq, index)
            emask = 0
            for a in seq:
                emask |= 1 << a
            for j in iter_bits(c):
                self.covering[j].append((emask, c, seq))
        self.full = (1 << len(self.pairs)) - 1

    def endpoints(self, c: int) -> int:
        m = 0
        for z in self.P.elements():
            if c & self.touch[z]:
                m |= 1 << z
        return m

    def infeasible(self, U: int, budget: list[int]) -> bool:
        for z in self.P.elements():
            t = U & self.touch[z]
            if not t:
                continue
            if budget[z] == 0:
                return True
            if budget[z] == 1:
                outs = ins = 0
                for j in iter_bits(t):
                    x, y = self.pairs[j]
                    if x == z:
                        outs |= 1 << y
                    else:
                        ins |= 1 << x
                if outs & ins:
                    return True
        return False

    def candidates(self, U: int, avail: int, p: int):
        best: dict[int, tuple[int, ...]] = {}
        for emask, cov, seq in self.covering[p]:
            if emask & ~avail:
                continue
            c = cov & U
            if c not in best:
                best[c] = seq
        cands = []
        for c, seq in best.items():
            ends = self.endpoints(c)
            cands.append((c, ends, tuple(a for a in seq if ends >> a & 1)))
        # drop c when another candidate covers more using no extra elements
        cands.sort(key=lambda t: -popcount(t[0]))
        kept = []
        for c, ends, seq in cands:
            if any(c2 & c == c and c2 != c and ends2 & ~ends == 0 for c2, ends2, _ in kept):
                continue
            kept.append((c, ends, seq))
        return kept

    def solve(self, d: int):
        budget = [d] * (self.P.n + 1)
        failed: set = set()
        chosen: list[tuple[int, ...]] = []

        def rec(U: int) -> bool:
            if not U:
                return True
            key = (U, tuple(budget))
            if key in failed:
                return False
            self.meter.tick()
            if self.infeasible(U, budget):
                failed.add(key)
                return False
            p = (U & -U).bit_length() - 1
            avail = 0
            for z in self.P.elements():
                if budget[z]:
                    avail |= 1 << z
            for c, ends, seq in self.candidates(U, avail, p):
                for z in iter_bits(ends):
                    budget[z] -= 1
                chosen.append(seq)
                ok = rec(U & ~c)
                if ok:
                    return True
                chosen.pop()
                for z in iter_bits(ends):
                    budget[z] += 1
            failed.add(key)
            return False

        if rec(self.full):
            return list(chosen)
        return None


def exact_ldim_witness(P: BasePoset, budget: SearchBudget | None = None):
    """Return (ldim, witness realiser) by iterative deepening on d."""
    budget = budget or SearchBudget()
    meter = _Meter(budget)
    if P.is_chain():
        return 1, LocalRealiser(P, [P.linear_extension()])
    search = _LdimSearch(P, meter)
    d = 2
    meter.lower = 2
    while True:
        if d > budget.d_max:
            raise Exceeded(meter.lower, "d_max")
        lists = search.solve(d)
        if lists is not None:
            return d, LocalRealiser(P, lists)
        d += 1
        meter.lower = d


def exact_ldim(P: BasePoset, budget: SearchBudget | None = None) -> int:
    return exact_ldim_witness(P, budget)[0]


# -- Dushnik-Miller dimension ----------------------------------------------------


def critical_pairs(P: BasePoset) -> list[tuple[int, int]]:
    """(a, b) incomparable with D(a) within D(b) and U(b) within U(a)."""
    out = []
    for a in P.elements():
        for b in iter_bits(P.incomparable_mask(a)):
            if P.down_mask(a) & ~P.down_mask(b) == 0 and P.up_mask(b) & ~P.up_mask(a) == 0:
                out.append((a, b))
    return out


def exact_dim_witness(P: BasePoset, size_limit: int = 8, budget: SearchBudget | None = None):
    """Return (dim, list of linear extensions) via exact set cover.

    A family of linear extensions realises P iff every critical pair (a, b)
    is reversed (b before a) somewhere, so only those reversals are covered.
    """
    if P.n > size_limit:
        raise ParameterError(f"exact_dim refuses posets with more than {size_limit} elements")
    meter = _Meter(budget or SearchBudget())
    exts = list(P.linear_extensions())
    if P.is_chain():
        return 1, [exts[0]]
    universe = sorted({(b, a) for a, b in critical_pairs(P)})
    index = _pair_index(universe)
    full = (1 << len(universe)) - 1
    by_cov: dict[int, list[int]] = {}
    for L in exts:
        by_cov.setdefault(_coverage(L, index), L)
    covers = list(by_cov.items())

    def rec(U: int, left: int, chosen: list) -> bool:
        if not U:
            return True
        if left == 0:
            return False
        meter.tick()
        if max(popcount(c & U) for c, _ in covers) * left < popcount(U):
            return False
        p = U & -U
        cands = {c & U: L for c, L in covers if c & p}
        items = sorted(cands.items(), key=lambda t: -popcount(t[0]))
        kept = []
        for c, L in items:
            if any(c2 & c == c for c2, _ in kept):
                continue
            kept.append((c, L))
        for c, L in kept:
            chosen.append(L)
            if rec(U & ~c, left - 1, chosen):
                return True
            chosen.pop()
        return False

    t = 2
    while True:
        chosen: list = []
        if rec(full, t, chosen):
            return t, chosen
        t += 1


def exact_dim(P: BasePoset, size_limit: int = 8) -> int:
    return exact_dim_witness(P, size_limit)[0]


# -- 2-dimension -----------------------------------------------------------------


def exact_twodim_witness(P: BasePoset, budget: SearchBudget | None = None):
    """Return (d, images) with images[i] the subset of 1..d for element i+1.

    Coordinates whose columns agree on every element placed so far are
    interchangeable, so for each such class only the number of coordinates
    taken matters; this removes all coordinate-permutation symmetry.
    """
    budget = budget or SearchBudget()
    meter = _Meter(budget)
    n = P.n
    order = P.linear_extension()
    lower = max(ceil(log2(n)) if n > 1 else 0, P.height() - 1)
    meter.lower = lower

    def attempt(d: int):
        img: dict[int, int] = {}

        def rec(i: int, classes: list[list[int]]) -> bool:
            if i == n:
                return True
            meter.tick()
            a = order[i]
            below = 0
            for b in iter_bits(P.down_mask(a)):
                below |= img[b]
            for counts in product(*(range(len(c) + 1) for c in classes)):
                m = 0
                for cls, c in zip(classes, counts):
                    for j in cls[:c]:
                        m |= 1 << j
                if below & ~m:
                    continue
                ok = True
                for b, mb in img.items():
                    if P.less(b, a):
                        if mb == m:
                            ok = False
                            break
                    elif mb & ~m == 0 or m & ~mb == 0:
                        # b incomparable to a (b cannot be above a: order is a linear extension)
                        ok = False
                        break
                if not ok:
                    continue
                img[a] = m
                split = []
                for cls, c in zip(classes, counts):
                    split += [part for part in (cls[:c], cls[c:]) if part]
                if rec(i + 1, split):
                    return True
                del img[a]
            return False

        if rec(0, [list(range(d))] if d else []):
            return [frozenset(j + 1 for j in iter_bits(img[a])) for a in P.elements()]
        return None

    d = lower
    while True:
        if d > budget.d_max:
            raise Exceeded(meter.lower, "d_max")
        images = attempt(d)
        if images is not None:
            return d, images
        d += 1
        meter.lower = d


def exact_twodim(P: BasePoset, budget: SearchBudget | None = None) -> int:
    return exact_twodim_witness(P, budget)[0]
