"""Finite posets on 1..n, stored transitively closed as per-element bitmasks.

Bit ``b`` of ``up_mask(a)`` is set iff ``a < b``; bit 0 is never used so that
element ids and bit positions coincide.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from functools import cached_property
from itertools import combinations, permutations
from math import comb

from .errors import (
    CycleError,
    DuplicateElementError,
    EmptySummandError,
    ParameterError,
    ParseError,
    RangeError,
)

DENSE_CAP = 14


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def layer_masks(n: int, r: int) -> list[int]:
    """All r-subsets of {1..n} as bitmasks (bit i-1 for element i), ascending."""
    if r < 0 or r > n:
        return []
    if r == 0:
        return [0]
    out = []
    v = (1 << r) - 1
    limit = 1 << n
    while v < limit:
        out.append(v)
        # Gosper's hack: next larger integer with the same popcount
        c = v & -v
        s = v + c
        v = (((v ^ s) >> 2) // c) | s
    return out


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in iter_bits(mask))


def set_to_mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << (i - 1)
    return m


class BasePoset:
    """Read interface shared by :class:`Poset` and :class:`LayerPoset`."""

    n: int

    def up_mask(self, a: int) -> int:
        raise NotImplementedError

    def down_mask(self, a: int) -> int:
        raise NotImplementedError

    def label(self, a: int) -> str:
        return str(a)

    def __len__(self) -> int:
        return self.n

    def elements(self) -> range:
        return range(1, self.n + 1)

    @property
    def all_mask(self) -> int:
        return (1 << (self.n + 1)) - 2

    def check_id(self, a: int) -> None:
        if not 1 <= a <= self.n:
            raise RangeError(f"element {a} outside 1..{self.n}")

    def less(self, a: int, b: int) -> bool:
        return bool(self.up_mask(a) >> b & 1)

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    def relations(self) -> Iterator[tuple[int, int]]:
        """All strict pairs (a, b) with a < b, sorted."""
        for a in self.elements():
            for b in iter_bits(self.up_mask(a)):
                yield a, b

    def relation_count(self) -> int:
        return sum(popcount(self.up_mask(a)) for a in self.elements())

    def covers(self) -> Iterator[tuple[int, int]]:
        for a, b in self.relations():
            if not self.up_mask(a) & self.down_mask(b):
                yield a, b

    def incomparable_mask(self, a: int) -> int:
        return self.all_mask & ~(1 << a) & ~self.up_mask(a) & ~self.down_mask(a)

    def requirement_mask(self, a: int) -> int:
        """Elements y with (a, y) a requirement, i.e. y != a and not y < a."""
        return self.all_mask & ~(1 << a) & ~self.down_mask(a)

    def is_chain(self) -> bool:
        return all(not self.incomparable_mask(a) for a in self.elements())

    def is_antichain(self) -> bool:
        return all(not self.up_mask(a) for a in self.elements())

    def height(self) -> int:
        """Number of elements in a longest chain."""
        best = {}
        for a in self.linear_extension():
            below = [best[b] for b in iter_bits(self.down_mask(a))]
            best[a] = 1 + max(below, default=0)
        return max(best.values())

    def linear_extension(self) -> list[int]:
        """Canonical linear extension: repeatedly take the least-id minimal element."""
        placed = 0
        out = []
        remaining = list(self.elements())
        while remaining:
            for i, a in enumerate(remaining):
                if self.down_mask(a) & ~placed == 0:
                    out.append(a)
                    placed |= 1 << a
                    del remaining[i]
                    break
        return out

    def linear_extensions(self) -> Iterator[list[int]]:
        """All linear extensions, in lexicographic order of the id sequence."""
        n = self.n
        out: list[int] = []

        def rec(placed: int):
            if len(out) == n:
                yield list(out)
                return
            for a in self.elements():
                if not placed >> a & 1 and self.down_mask(a) & ~placed == 0:
                    out.append(a)
                    yield from rec(placed | 1 << a)
                    out.pop()

        yield from rec(0)

    def to_poset(self) -> Poset:
        ups = [0] + [self.up_mask(a) for a in self.elements()]
        labels = [self.label(a) for a in self.elements()]
        return Poset._from_up(self.n, ups, labels)

    def relation_matrix(self):
        """Dense 0-based boolean matrix M[a-1, b-1] = (a < b)."""
        import numpy as np

        m = np.zeros((self.n, self.n), dtype=bool)
        for a, b in self.relations():
            m[a - 1, b - 1] = True
        return m

    def key(self) -> tuple[int, tuple[int, ...]]:
        return self.n, tuple(self.up_mask(a) for a in self.elements())

    def same_order(self, other: BasePoset) -> bool:
        return self.key() == other.key()


class Poset(BasePoset):
    """A finite strict order on 1..n. Immutable; build with :func:`make_poset`."""

    __slots__ = ("n", "_up", "_down", "_labels")

    def __init__(self, n, up, down, labels=None):
        self.n = n
        self._up = tuple(up)
        self._down = tuple(down)
        self._labels = tuple(labels) if labels is not None else None

    @classmethod
    def _from_up(cls, n, up, labels=None):
        down = [0] * (n + 1)
        for a in range(1, n + 1):
            for b in iter_bits(up[a]):
                down[b] |= 1 << a
        return cls(n, up, down, labels)

    def up_mask(self, a):
        return self._up[a]

    def down_mask(self, a):
        return self._down[a]

    def less(self, a, b):
        return bool(self._up[a] >> b & 1)

    def label(self, a):
        if self._labels is None:
            return str(a)
        return self._labels[a - 1]

    @property
    def labels(self):
        return self._labels

    def with_labels(self, labels) -> Poset:
        return Poset(self.n, self._up, self._down, labels)

    def __eq__(self, other):
        if not isinstance(other, BasePoset):
            return NotImplemented
        return self.same_order(other)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rel = " ".join(f"{a}<{b}" for a, b in self.covers())
        return f"Poset(n={self.n}, covers=[{rel}])"


def make_poset(n: int, relations: Iterable[tuple[int, int]] = (), labels=None) -> Poset:
    """Transitively close ``relations`` on 1..n."""
    if n < 1:
        raise ParameterError("posets are nonempty")
    up = [0] * (n + 1)
    for a, b in relations:
        for x in (a, b):
            if not 1 <= x <= n:
                raise RangeError(f"element {x} outside 1..{n}")
        if a == b:
            raise CycleError(f"relation {a} < {a} is reflexive")
        up[a] |= 1 << b
    # Warshall over bitmask rows
    for k in range(1, n + 1):
        bit = 1 << k
        row = up[k]
        for i in range(1, n + 1):
            if up[i] & bit:
                up[i] |= row
    for a in range(1, n + 1):
        if up[a] >> a & 1:
            raise CycleError(f"element {a} lies on a cycle")
    return Poset._from_up(n, up, labels)


def chain(n: int) -> Poset:
    return make_poset(n, [(i, i + 1) for i in range(1, n)])


def antichain(n: int) -> Poset:
    return make_poset(n)


class LayerPoset(BasePoset):
    """Two layers of the Boolean lattice Q_n, ordered by inclusion.

    Ids 1..C(n, ell) are the ell-sets and the following C(n, k) ids the k-sets,
    each layer in ascending bitmask order.
    """

    def __init__(self, n: int, ell: int, k: int, dense_cap: int = DENSE_CAP):
        if not 0 <= ell < k <= n:
            raise ParameterError(f"need 0 <= ell < k <= n, got n={n} ell={ell} k={k}")
        self.cube_n = n
        self.ell = ell
        self.k = k
        self.dense_cap = dense_cap
        low = layer_masks(n, ell)
        high = layer_masks(n, k)
        self.low_count = len(low)
        self.high_count = len(high)
        self.n = len(low) + len(high)
        self.masks = (0, *low, *high)
        self._id_low = {m: i + 1 for i, m in enumerate(low)}
        self._id_high = {m: i + 1 + len(low) for i, m in enumerate(high)}

    def __repr__(self):
        return f"LayerPoset(n={self.cube_n}, ell={self.ell}, k={self.k})"

    def low_ids(self) -> range:
        return range(1, self.low_count + 1)

    def high_ids(self) -> range:
        return range(self.low_count + 1, self.n + 1)

    def is_low(self, a: int) -> bool:
        return a <= self.low_count

    def id_of(self, subset) -> int:
        mask = subset if isinstance(subset, int) else set_to_mask(subset)
        r = popcount(mask)
        table = self._id_low if r == self.ell else self._id_high if r == self.k else None
        if table is None or mask not in table:
            raise RangeError(f"{sorted(mask_to_set(mask))} is not in layer {self.ell} or {self.k}")
        return table[mask]

    def subset(self, a: int) -> frozenset[int]:
        return mask_to_set(self.masks[a])

    def label(self, a):
        return "{" + ",".join(map(str, sorted(self.subset(a)))) + "}"

    def less(self, a, b):
        return (
            a <= self.low_count < b
            and self.masks[a] & ~self.masks[b] == 0
        )

    @cached_property
    def _down(self) -> tuple[int, ...]:
        down = [0] * (self.n + 1)
        for b in self.high_ids():
            bits = list(iter_bits(self.masks[b]))
            m = 0
            for sub in combinations(bits, self.ell):
                sm = 0
                for i in sub:
                    sm |= 1 << i
                m |= 1 << self._id_low[sm]
            down[b] = m
        return tuple(down)

    @cached_property
    def _up(self) -> tuple[int, ...]:
        up = [0] * (self.n + 1)
        for b in self.high_ids():
            bit = 1 << b
            for a in iter_bits(self._down[b]):
                up[a] |= bit
        return tuple(up)

    def down_mask(self, a):
        return self._down[a]

    def up_mask(self, a):
        return self._up[a]

    def relation_count(self):
        return self.low_count * comb(self.cube_n - self.ell, self.k - self.ell)

    def relation_matrix(self):
        if self.cube_n > self.dense_cap:
            raise ParameterError(
                f"dense matrix refused for n={self.cube_n} > cap {self.dense_cap}"
            )
        return super().relation_matrix()


def boolean_layer_poset(n: int, ell: int, k: int) -> LayerPoset:
    return LayerPoset(n, ell, k)


def standard_example(n: int) -> LayerPoset:
    return LayerPoset(n, 1, n - 1)


def divisibility_poset(n: int) -> Poset:
    if n < 1:
        raise ParameterError("n must be >= 1")
    up = [0] * (n + 1)
    for a in range(1, n + 1):
        for b in range(2 * a, n + 1, a):
            up[a] |= 1 << b
    return Poset._from_up(n, up)


def lex_sum(P: BasePoset, Q) -> tuple[Poset, dict[tuple[int, int], int]]:
    """Lexicographic sum of the family ``Q`` (indexed by elements of P) over P.

    ``Q`` is a mapping x -> poset or a sequence whose (x-1)-th entry is Q_x.
    Returns the sum on ids 1..N and the map (x, y) -> id, ids assigned in
    lexicographic order of (x, y).
    """
    if not isinstance(Q, Mapping):
        Q = {i + 1: q for i, q in enumerate(Q)}
    for x in P.elements():
        if x not in Q or Q[x] is None or len(Q[x]) == 0:
            raise EmptySummandError(f"summand for {x} is missing or empty")
    index: dict[tuple[int, int], int] = {}
    block = {}
    nxt = 1
    for x in P.elements():
        start = nxt
        for y in Q[x].elements():
            index[(x, y)] = nxt
            nxt += 1
        block[x] = ((1 << nxt) - 1) ^ ((1 << start) - 1)
    total = nxt - 1
    up = [0] * (total + 1)
    for x in P.elements():
        above = 0
        for z in iter_bits(P.up_mask(x)):
            above |= block[z]
        for y in Q[x].elements():
            m = above
            for w in iter_bits(Q[x].up_mask(y)):
                m |= 1 << index[(x, w)]
            up[index[(x, y)]] = m
    labels = [f"{P.label(x)}:{Q[x].label(y)}" for (x, y) in index]
    return Poset._from_up(total, up, labels), index


def dual(P: BasePoset) -> Poset:
    n = P.n
    up = [0] + [P.down_mask(a) for a in P.elements()]
    down = [0] + [P.up_mask(a) for a in P.elements()]
    labels = [P.label(a) for a in P.elements()]
    return Poset(n, up, down, labels)


def requirements(P: BasePoset) -> set[tuple[int, int]]:
    """Ordered pairs (x, y), x != y, with not y < x."""
    return {(x, y) for x in P.elements() for y in iter_bits(P.requirement_mask(x))}


def check_items(P: BasePoset, items: Sequence[int]) -> None:
    seen = set()
    for a in items:
        P.check_id(a)
        if a in seen:
            raise DuplicateElementError(f"element {a} repeated")
        seen.add(a)


def is_partial_linear_extension(P: BasePoset, items: Sequence[int]) -> bool:
    check_items(P, items)
    seen = 0
    for b in items:
        # b must not lie strictly below anything already placed
        if P.up_mask(b) & seen:
            return False
        seen |= 1 << b
    return True


def induced(P: BasePoset, items: Sequence[int]) -> tuple[Poset, list[int]]:
    """Suborder on ``items`` relabelled 1..len(items) in the given order."""
    pos = {a: i + 1 for i, a in enumerate(items)}
    rel = [(pos[a], pos[b]) for a in items for b in items if P.less(a, b)]
    return make_poset(len(items), rel, [P.label(a) for a in items]), list(items)


# -- text format -----------------------------------------------------------


def parse_poset(text: str) -> Poset:
    """Parse ``poset <n>`` followed by ``< a b`` lines; '#' starts a comment."""
    n = None
    rel = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "poset":
                raise ParseError("expected header 'poset <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad size {parts[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("poset size must be positive", lineno)
            continue
        if len(parts) != 3 or parts[0] != "<":
            raise ParseError(f"expected '< a b', got {line!r}", lineno)
        try:
            a, b = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"bad element ids in {line!r}", lineno) from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise ParseError(f"element id out of 1..{n}", lineno)
        if a == b:
            raise ParseError(f"reflexive relation {a} < {b}", lineno)
        rel.append((a, b))
    if n is None:
        raise ParseError("missing 'poset <n>' header")
    try:
        return make_poset(n, rel)
    except CycleError as e:
        raise ParseError(f"relations contain a cycle: {e}") from None


def format_poset(P: BasePoset) -> str:
    lines = [f"poset {P.n}"]
    lines += [f"< {a} {b}" for a, b in P.covers()]
    return "\n".join(lines) + "\n"


# -- enumeration helpers ----------------------------------------------------


def labelled_posets(n: int) -> Iterator[Poset]:
    """Every poset on the labelled ground set 1..n (1, 1, 3, 19, 219, 4231, ...)."""
    if n < 1:
        return
    if n == 1:
        yield make_poset(1)
        return
    for P in labelled_posets(n - 1):
        m = n - 1
        downs = _closed_sets(P, down=True)
        ups = _closed_sets(P, down=False)
        for D in downs:
            for U in ups:
                if D & U:
                    continue
                # every d in D must already lie below every u in U
                if any(U & ~P.up_mask(d) for d in iter_bits(D)):
                    continue
                up = [P.up_mask(a) for a in range(0, m + 1)]
                up = list(up) + [U]
                for d in iter_bits(D):
                    up[d] |= 1 << n
                yield Poset._from_up(n, up)


def _closed_sets(P: BasePoset, down: bool) -> list[int]:
    out = []
    elems = list(P.elements())
    for r in range(len(elems) + 1):
        for sub in combinations(elems, r):
            m = 0
            for a in sub:
                m |= 1 << a
            if all(
                (P.down_mask(a) if down else P.up_mask(a)) & ~m == 0 for a in sub
            ):
                out.append(m)
    return out


def canonical_form(P: BasePoset) -> tuple:
    """Isomorphism-invariant key, by brute force over relabellings."""
    n = P.n
    best = None
    rel = list(P.relations())
    for perm in permutations(range(1, n + 1)):
        key = tuple(sorted((perm[a - 1], perm[b - 1]) for a, b in rel))
        if best is None or key < best:
            best = key
    return n, best


def unlabelled_posets(n: int) -> list[Poset]:
    seen = {}
    for P in labelled_posets(n):
        seen.setdefault(canonical_form(P), P)
    return list(seen.values())
