"""Local realisers: coverage verification and multiplicity accounting.

Verification works row-wise on bitmasks.  For every element x we accumulate
the set of elements appearing after x in some list; the pairs (x, y) still
missing from that set are the uncovered requirements.  This avoids touching
the ~N^2 requirement pairs one by one, which matters for layer posets with
tens of thousands of elements.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import InvalidListError, ParseError
from .order import BasePoset, check_items, iter_bits, popcount


@dataclass(frozen=True)
class LocalRealiser:
    host: BasePoset
    lists: tuple[tuple[int, ...], ...]

    def __init__(self, host: BasePoset, lists: Iterable[Sequence[int]]):
        lists = tuple(tuple(L) for L in lists)
        for L in lists:
            check_items(host, L)
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "lists", lists)

    def __len__(self):
        return len(self.lists)

    def __iter__(self):
        return iter(self.lists)

    def multiplicity(self) -> dict[int, int]:
        return multiplicities(self.host, self.lists)

    def max_multiplicity(self) -> int:
        return max(self.multiplicity().values(), default=0)

    def total_length(self) -> int:
        return sum(len(L) for L in self.lists)

    def drop_trivial(self) -> LocalRealiser:
        """Remove lists of length < 2; they cover no requirement."""
        return LocalRealiser(self.host, [L for L in self.lists if len(L) >= 2])


def multiplicities(host: BasePoset, lists) -> dict[int, int]:
    mult = dict.fromkeys(host.elements(), 0)
    for L in lists:
        for a in L:
            mult[a] += 1
    return mult


@dataclass
class VerificationReport:
    valid: bool
    multiplicity: dict[int, int]
    max_multiplicity: int
    list_count: int
    uncovered_count: int
    # x -> mask of y with (x, y) uncovered; expanded lazily by `uncovered`
    _uncovered_rows: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def uncovered(self) -> set[tuple[int, int]]:
        return {(x, y) for x, row in self._uncovered_rows.items() for y in iter_bits(row)}

    def summary(self) -> str:
        return f"valid {str(self.valid).lower()} max_multiplicity {self.max_multiplicity}"


def _cover_rows(host: BasePoset, lists) -> list[int]:
    """after[x] = mask of elements following x in at least one list."""
    after = [0] * (host.n + 1)
    for idx, L in enumerate(lists):
        suffix = 0
        for a in reversed(L):
            if suffix & host.down_mask(a):
                b = next(iter_bits(suffix & host.down_mask(a)))
                raise InvalidListError(
                    f"list {idx} places {b} after {a} although {b} < {a}"
                )
            after[a] |= suffix
            suffix |= 1 << a
    return after


def verify_local_realiser(host: BasePoset, R) -> VerificationReport:
    """Check every list is a partial linear extension and every requirement is covered."""
    lists = R.lists if isinstance(R, LocalRealiser) else [tuple(L) for L in R]
    if not isinstance(R, LocalRealiser):
        for L in lists:
            check_items(host, L)
    after = _cover_rows(host, lists)
    rows = {}
    count = 0
    for x in host.elements():
        missing = host.requirement_mask(x) & ~after[x]
        if missing:
            rows[x] = missing
            count += popcount(missing)
    mult = multiplicities(host, lists)
    return VerificationReport(
        valid=count == 0,
        multiplicity=mult,
        max_multiplicity=max(mult.values(), default=0),
        list_count=len(lists),
        uncovered_count=count,
        _uncovered_rows=rows,
    )


def verify(R: LocalRealiser) -> VerificationReport:
    return verify_local_realiser(R.host, R)


# -- text format -----------------------------------------------------------


def format_realiser(R) -> str:
    lists = R.lists if isinstance(R, LocalRealiser) else R
    n = R.host.n if isinstance(R, LocalRealiser) else max((max(L) for L in lists if L), default=0)
    lines = [f"realiser {n} {len(lists)}"]
    lines += [" ".join(map(str, L)) for L in lists]
    return "\n".join(lines) + "\n"


def parse_realiser(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Parse ``realiser <n> <L>`` followed by L lines of ids; '#' lines are comments."""
    header = None
    lists = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if header is None:
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] != "realiser":
                raise ParseError("expected header 'realiser <n> <L>'", lineno)
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            continue
        if not line:
            continue
        try:
            items = tuple(int(t) for t in line.split())
        except ValueError:
            raise ParseError(f"non-integer id in {line!r}", lineno) from None
        for a in items:
            if not 1 <= a <= header[0]:
                raise ParseError(f"element {a} outside 1..{header[0]}", lineno)
        lists.append(items)
    if header is None:
        raise ParseError("missing 'realiser <n> <L>' header")
    n, count = header
    if len(lists) != count:
        raise ParseError(f"header announces {count} lists, found {len(lists)}")
    return n, lists
