"""Crespelle code for posets with local realisers, and the binary cube-embedding code.

A Crespelle codeword lists the nontrivial lists of a local realiser one after
another.  The first symbol of each list carries tag ``i``, the rest carry
``m``, and the very last symbol of the word is retagged ``f``.  Because ``f``
occurs exactly once, at the end, no codeword is a proper prefix of another.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass
from math import ceil, log2

from .errors import (
    EmptyRealiserError,
    GrammarError,
    HeaderRangeError,
    ParseError,
    TrivialListError,
)
from .order import BasePoset, Poset, make_poset
from .realiser import LocalRealiser


class Tag(enum.Enum):
    INIT = "i"
    MID = "m"
    FIN = "f"


@dataclass(frozen=True)
class Codeword:
    n: int
    symbols: tuple[tuple[int, Tag], ...]

    def __len__(self):
        return len(self.symbols)

    def text(self) -> str:
        return " ".join(f"{a}{t.value}" for a, t in self.symbols)

    def is_prefix_of(self, other: Codeword) -> bool:
        return len(self) < len(other) and other.symbols[: len(self)] == self.symbols


def crespelle_encode(R: LocalRealiser, list_order: Sequence[int] | None = None) -> Codeword:
    lists = R.lists
    if not lists:
        raise EmptyRealiserError("realiser has no lists to encode")
    if list_order is None:
        list_order = range(len(lists))
    if sorted(list_order) != list(range(len(lists))):
        raise ValueError("list_order must be a permutation of the list indices")
    symbols = []
    for j in list_order:
        L = lists[j]
        if len(L) < 2:
            raise TrivialListError(f"list {j} has length {len(L)}; drop trivial lists first")
        symbols.append((L[0], Tag.INIT))
        symbols.extend((a, Tag.MID) for a in L[1:])
    symbols[-1] = (symbols[-1][0], Tag.FIN)
    return Codeword(R.host.n, tuple(symbols))


def split_codeword(w: Codeword) -> list[tuple[int, ...]]:
    """Recover the lists, enforcing the grammar strictly."""
    sym = w.symbols
    if not sym:
        raise GrammarError("empty codeword")
    if sym[0][1] is not Tag.INIT:
        raise GrammarError("codeword must start with an i-symbol")
    if sym[-1][1] is not Tag.FIN:
        raise GrammarError("codeword must end with an f-symbol")
    if sum(1 for _, t in sym if t is Tag.FIN) != 1:
        raise GrammarError("f-symbol may only appear once, at the end")
    lists: list[list[int]] = []
    for pos, (a, t) in enumerate(sym):
        if not 1 <= a <= w.n:
            raise GrammarError(f"symbol {pos}: element {a} outside 1..{w.n}")
        if t is Tag.INIT:
            if lists and len(lists[-1]) < 2:
                raise GrammarError(f"block ending before symbol {pos} has length 1")
            lists.append([a])
        else:
            if a in lists[-1]:
                raise GrammarError(f"symbol {pos}: element {a} repeated within a block")
            lists[-1].append(a)
    if len(lists[-1]) < 2:
        raise GrammarError("final block has length 1")
    return [tuple(L) for L in lists]


def infer_poset(n: int, lists) -> Poset:
    """a < b iff some list puts a before b and none puts b before a."""
    before = set()
    for L in lists:
        for i, a in enumerate(L):
            for b in L[i + 1 :]:
                before.add((a, b))
    rel = [(a, b) for (a, b) in before if (b, a) not in before]
    return make_poset(n, rel)


def crespelle_decode(w: Codeword) -> tuple[list[tuple[int, ...]], Poset]:
    lists = split_codeword(w)
    return lists, infer_poset(w.n, lists)


def codeword_bit_cost(w, n: int) -> float:
    """Length in bits of a word over the 3n-symbol alphabet."""
    length = w if isinstance(w, int) else len(w)
    return length * log2(3 * n)


def format_codeword(w: Codeword) -> str:
    return w.text() + "\n"


def parse_codeword(text: str, n: int | None = None) -> Codeword:
    """Parse ``1i 2m 2i 1f``.  ``n`` defaults to the largest id present."""
    symbols = []
    for tok in text.split():
        if len(tok) < 2 or tok[-1] not in "imf":
            raise ParseError(f"bad symbol {tok!r}")
        try:
            a = int(tok[:-1])
        except ValueError:
            raise ParseError(f"bad symbol {tok!r}") from None
        symbols.append((a, Tag(tok[-1])))
    if n is None:
        n = max((a for a, _ in symbols), default=0)
    return Codeword(n, tuple(symbols))


# -- binary code for embeddings into the d-cube ----------------------------------


def header_bits(n: int) -> int:
    return ceil(log2(n)) if n > 1 else 0


def twodim_binary_encode(P: BasePoset, images: Sequence, d: int) -> str:
    """Header of ceil(log n) bits holding d, then one d-bit block per element.

    ``images[i]`` is the subset of 1..d assigned to element i+1; character j
    of a block is 1 iff j+1 belongs to the image.
    """
    n = P.n
    if len(images) != n:
        raise ValueError(f"need {n} images, got {len(images)}")
    h = header_bits(n)
    if d >= 1 << h:
        raise HeaderRangeError(f"d={d} does not fit in {h} header bits")
    out = [format(d, f"0{h}b")] if h else []
    for img in images:
        s = set(img)
        if any(not 1 <= j <= d for j in s):
            raise ValueError(f"image {sorted(s)} not inside 1..{d}")
        out.append("".join("1" if j in s else "0" for j in range(1, d + 1)))
    return "".join(out)


def twodim_binary_decode(bits: str, n: int) -> tuple[int, list[frozenset[int]]]:
    if set(bits) - {"0", "1"}:
        raise ParseError("bit string may only contain 0 and 1")
    h = header_bits(n)
    if len(bits) < h:
        raise ParseError("bit string shorter than its header")
    d = int(bits[:h], 2) if h else 0
    if len(bits) != h + d * n:
        raise ParseError(f"expected {h + d * n} bits for d={d}, got {len(bits)}")
    images = []
    for i in range(n):
        block = bits[h + i * d : h + (i + 1) * d]
        images.append(frozenset(j + 1 for j, c in enumerate(block) if c == "1"))
    return d, images


def is_cube_embedding(P: BasePoset, images: Sequence) -> bool:
    """Images are distinct and a < b exactly when image(a) is a proper subset of image(b)."""
    sets = [frozenset(s) for s in images]
    if len(set(sets)) != len(sets):
        return False
    for a in P.elements():
        for b in P.elements():
            if a != b and P.less(a, b) != (sets[a - 1] < sets[b - 1]):
                return False
    return True
