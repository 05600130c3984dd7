import random

import pytest
from hypothesis import strategies as st

from ldim.order import make_poset
from ldim.realiser import LocalRealiser, verify_local_realiser

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Acceptance tests report (criterion, passed, detail) here."""

    def _record(name, passed, detail=""):
        ACCEPTANCE[name] = (passed, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{name}: {'PASS' if passed else 'FAIL'}  {detail}")


@st.composite
def posets(draw, min_n=1, max_n=6):
    """Random labelled poset: a random DAG on a hidden order, then relabelled."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(1, n + 1)))
    return make_poset(n, [(perm[a - 1], perm[b - 1]) for a, b in chosen])


def random_poset(rng: random.Random, n: int, density: float = 0.3):
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    rel = [
        (perm[a], perm[b])
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < density
    ]
    return make_poset(n, rel)


def random_topological(P, items, rng, extra=()):
    """Random linear extension of P restricted to items, honouring extra (x, y) constraints."""
    items = list(items)
    below = {a: {b for b in items if P.less(b, a)} for a in items}
    for x, y in extra:
        below[y].add(x)
    out, placed = [], set()
    while len(out) < len(items):
        ready = [a for a in items if a not in placed and below[a] <= placed]
        a = rng.choice(ready)
        out.append(a)
        placed.add(a)
    return out


def random_local_realiser(P, rng: random.Random) -> LocalRealiser:
    """A random valid local realiser of P with all lists of length >= 2."""
    lists = []
    if P.n >= 2:
        for _ in range(rng.randint(0, 2)):
            lists.append(random_topological(P, P.elements(), rng))
    while True:
        rep = verify_local_realiser(P, lists)
        if rep.valid:
            break
        x, y = rng.choice(sorted(rep.uncovered))
        others = [a for a in P.elements() if a not in (x, y) and rng.random() < 0.4]
        lists.append(random_topological(P, [x, y, *others], rng, extra=[(x, y)]))
    rng.shuffle(lists)
    return LocalRealiser(P, lists)
