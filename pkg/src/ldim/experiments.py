"""Random poset ensembles, entropy, closed-form bound tables and desk-scale checks.

All logarithms are base 2 unless a formula is stated with ``ln``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from math import ceil, comb, isclose, lgamma, log, log2, sqrt

from .codec import codeword_bit_cost, crespelle_encode, header_bits
from .errors import NotADistributionError, NotTwoLevelError, ParameterError
from .exact import exact_ldim_witness, exact_twodim
from .order import BasePoset, Poset, iter_bits, layer_masks, make_poset
from .rng import XorShift64Star, derive_seed

LOG2_12 = log2(12)


def entropy(p) -> float:
    """Shannon entropy in bits; zero-probability terms are skipped."""
    p = list(p)
    if not p or any(x < 0 for x in p) or not isclose(sum(p), 1.0, abs_tol=1e-9):
        raise NotADistributionError("probabilities must be nonnegative and sum to 1")
    return -sum(x * log2(x) for x in p if x != 0) + 0.0


def log2_comb(n: int, k: int) -> float:
    if not 0 <= k <= n:
        raise ParameterError(f"C({n}, {k}) is zero")
    if n <= 4096:
        return log2(comb(n, k))
    return (lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)) / log(2)


# -- ensembles ---------------------------------------------------------------


def sample_two_layer(n: int, seed: int) -> Poset:
    """Minima 1..floor(n/2), maxima above; each cross pair related with probability 1/2."""
    if n < 1:
        raise ParameterError("n must be positive")
    rng = XorShift64Star(seed)
    h = n // 2
    rel = [(a, b) for a in range(1, h + 1) for b in range(h + 1, n + 1) if rng.coin()]
    return make_poset(n, rel)


def two_layer_entropy(n: int) -> float:
    return float((n // 2) * (n - n // 2))


def sample_layer_model(n: int, ell: int, k: int, m: int, seed: int) -> Poset:
    """All ell-subsets of [n] (ids first, ascending bitmask) plus m tops, each above
    the ell-subsets of an independent uniform k-subset of [n]."""
    if not 0 <= ell < k <= n or m < 1:
        raise ParameterError(f"need 0 <= ell < k <= n and m >= 1, got {n, ell, k, m}")
    rng = XorShift64Star(seed)
    low = layer_masks(n, ell)
    na = len(low)
    rel = []
    for j in range(m):
        X = 0
        for i in rng.k_subset(n, k):
            X |= 1 << (i - 1)
        b = na + j + 1
        rel += [(a + 1, b) for a, am in enumerate(low) if am & ~X == 0]
    return make_poset(na + m, rel)


def layer_model_entropy(n: int, k: int, m: int) -> float:
    return m * log2_comb(n, k)


def default_m(n: int, ell: int) -> int:
    """floor(C(n,ell) * (log C(n,ell) - 1))."""
    c = comb(n, ell)
    m = int(c * (log2(c) - 1)) if c > 0 else 0
    if c < 3 or m < 1:
        raise ParameterError(f"C({n},{ell}) = {c} gives a nonpositive m")
    return m


@dataclass(frozen=True)
class Ensemble:
    kind: str
    params: dict
    seed: int

    def __post_init__(self):
        if self.kind not in ("two_layer", "layer_model"):
            raise ParameterError(f"unknown ensemble {self.kind!r}")

    def sample(self, index: int) -> Poset:
        s = derive_seed(self.seed, index)
        p = self.params
        if self.kind == "two_layer":
            return sample_two_layer(p["n"], s)
        return sample_layer_model(p["n"], p["ell"], p["k"], p["m"], s)

    def samples(self, count: int):
        return [self.sample(i) for i in range(count)]

    def entropy(self) -> float:
        p = self.params
        if self.kind == "two_layer":
            return two_layer_entropy(p["n"])
        return layer_model_entropy(p["n"], p["k"], p["m"])


def dedup_neighbourhoods(P: BasePoset, b_side=None) -> Poset:
    """Keep one top element per distinct down-set (the least id).

    ``b_side`` defaults to the non-minimal elements.  The result is relabelled
    1..n' in the original id order; labels hold the original ids.
    """
    if b_side is None:
        b_side = [a for a in P.elements() if P.down_mask(a)]
    B = set(b_side)
    for a in P.elements():
        if a in B:
            if P.up_mask(a) or any(b in B for b in iter_bits(P.down_mask(a))):
                raise NotTwoLevelError(f"top element {a} is not maximal over the bottom side")
        elif P.down_mask(a):
            raise NotTwoLevelError(f"bottom element {a} has something below it")
    seen = set()
    keep = []
    for a in P.elements():
        if a in B:
            d = P.down_mask(a)
            if d in seen:
                continue
            seen.add(d)
        keep.append(a)
    pos = {a: i + 1 for i, a in enumerate(keep)}
    rel = [(pos[x], pos[b]) for b in keep if b in B for x in iter_bits(P.down_mask(b))]
    return make_poset(len(keep), rel, [str(a) for a in keep])


# -- closed-form bounds ---------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    value: float | None
    applicable: bool
    asymptotic: bool = False
    note: str = ""


def _na(note: str) -> Bound:
    return Bound(None, False, note=note)


@dataclass(frozen=True)
class BoundReport:
    n: int
    ell: int
    k: int
    lower_lk: Bound
    lower_lk_proof: Bound
    upper_lk: Bound
    far_layers: Bound
    brightwell: Bound
    brightwell_k1: Bound
    kostochka: Bound
    dushnik_dim: Bound
    sperner_twodim: Bound
    avg_ldim_lower: Bound
    tdim_expected_lower: Bound
    alpha_leading: Bound
    lewis_souza_upper: Bound
    loglog_leading: Bound

    def bounds(self) -> dict[str, Bound]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("n", "ell", "k")}

    def to_dict(self) -> dict:
        return asdict(self)


def sperner_twodim(size: int) -> int:
    m = 0
    while comb(m, m // 2) < size:
        m += 1
    return m


def kostochka_bound(n: int) -> int:
    j, fact = 1, 1
    while 2 * fact < n:
        j += 1
        fact *= j
    return 2 * j


def ceil_log(n: int, t: int) -> int:
    e, p = 0, 1
    while p < n:
        p *= t
        e += 1
    return e


def lower_lk(n: int, ell: int, k: int, c: float = LOG2_12) -> float:
    lk = log2_comb(n, k)
    ll = log2_comb(n, ell)
    return lk / ll - lk / ll**2 * (log2(ll) + c)


def upper_lk(n: int, ell: int = 1) -> float:
    ln_ = log2(n)
    return n / ln_ + 2 * n / ln_**2 * (log2(ln_) + log2(ell)) + 3


def bound_table(n: int, ell: int, k: int, t: int = 2) -> BoundReport:
    if n < 2:
        raise ParameterError("bound table needs n >= 2")
    layered = 0 <= ell < k <= n
    b = {}

    if ell != k and 0 <= ell < n and 0 <= k < n and comb(n, ell) >= 2:
        b["lower_lk"] = Bound(lower_lk(n, ell, k), True, note="c = log 12")
        b["lower_lk_proof"] = Bound(
            lower_lk(n, ell, k, log2(6) + 1 / comb(n, ell)), True, note="c = log 6 + 1/C(n,ell)"
        )
    else:
        b["lower_lk"] = b["lower_lk_proof"] = _na("needs ell != k, both < n, C(n,ell) >= 2")

    if layered and ell >= 1 and ell < n / log2(n):
        b["upper_lk"] = Bound(upper_lk(n, ell), True)
    else:
        b["upper_lk"] = _na("needs 1 <= ell < k <= n and ell < n/log n")

    if layered:
        gap = k - ell
        b["far_layers"] = Bound(2 + max(ell, n - k), True, note=f"top gap {n - k}")
        b["brightwell"] = Bound((4 * gap**2 + 18 * gap) * ceil(log(n)), True, note=f"gap {gap}")
    else:
        b["far_layers"] = _na("needs ell < k <= n")
        b["brightwell"] = _na("needs ell < k <= n")

    if layered and k == ell + 1:
        b["brightwell_k1"] = Bound(6 * ceil_log(n, 3), True)
        b["kostochka"] = Bound(kostochka_bound(n), True)
    else:
        b["brightwell_k1"] = _na("adjacent layers only")
        b["kostochka"] = _na("adjacent layers only")

    if ell == 1 and k >= 2 * sqrt(n) and k <= n:
        b["dushnik_dim"] = Bound(n - sqrt(n), True, note="lower bound on dim, not ldim")
    else:
        b["dushnik_dim"] = _na("needs ell = 1 and k >= 2 sqrt(n)")

    b["sperner_twodim"] = Bound(sperner_twodim(n), True, note=f"{n}-element antichain")
    b["avg_ldim_lower"] = Bound(n / (4 * log2(3 * n)), True)
    b["tdim_expected_lower"] = Bound(n / (4 * log2(t)) - ceil_log(n, t) / n, True, note=f"t = {t}")

    if ell == 1 and 1 <= k <= n:
        alpha = log2(k) / log2(n)
        b["alpha_leading"] = Bound((1 - alpha) * n**alpha, True, True, note=f"alpha = {alpha:.4f}")
    else:
        b["alpha_leading"] = _na("needs ell = 1")

    if n >= 3:
        b["lewis_souza_upper"] = Bound(4 * log(2) * log2(n) ** 2 / log2(log2(n)), True, True)
    else:
        b["lewis_souza_upper"] = _na("needs n >= 3")

    if layered and ell >= 1:
        b["loglog_leading"] = Bound(log2(log2(n)), True, True)
    else:
        b["loglog_leading"] = _na("needs 1 <= ell < k")

    return BoundReport(n=n, ell=ell, k=k, **b)


# -- experiments -----------------------------------------------------------------


@dataclass
class ExperimentReport:
    kind: str
    params: dict
    seed: int | None
    metrics: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)


def _ldim_cached(P, cache, budget):
    key = P.key()
    if key not in cache:
        cache[key] = exact_ldim_witness(P, budget)
    return cache[key]


def avg_ldim_experiment(n: int, samples: int, seed: int, budget=None) -> ExperimentReport:
    ens = Ensemble("two_layer", {"n": n}, seed)
    cache: dict = {}
    vals = [_ldim_cached(P, cache, budget)[0] for P in ens.samples(samples)]
    mean = sum(vals) / len(vals)
    bound = n / (4 * log2(3 * n))
    return ExperimentReport(
        "avg_ldim",
        {"n": n, "samples": samples},
        seed,
        {"mean_ldim": mean, "lower_bound": bound, "holds": mean >= bound, "distinct_posets": len(cache)},
    )


def shannon_experiment(n: int, samples: int, seed: int, slack: float = 0.02, budget=None) -> ExperimentReport:
    """Mean Crespelle codeword cost (bits) against the ensemble entropy."""
    ens = Ensemble("two_layer", {"n": n}, seed)
    cache: dict = {}
    twodim_cache: dict = {}
    bits = []
    twodim_bits = []
    for P in ens.samples(samples):
        _, R = _ldim_cached(P, cache, budget)
        R = R.drop_trivial()
        w = crespelle_encode(R)
        if len(w) > R.max_multiplicity() * P.n:
            raise AssertionError("codeword longer than d*n")
        bits.append(codeword_bit_cost(w, P.n))
        key = P.key()
        if key not in twodim_cache:
            twodim_cache[key] = exact_twodim(P, budget)
        twodim_bits.append(header_bits(P.n) + twodim_cache[key] * P.n)
    H = ens.entropy()
    mean = sum(bits) / len(bits)
    mean2 = sum(twodim_bits) / len(twodim_bits)
    return ExperimentReport(
        "shannon_length",
        {"n": n, "samples": samples, "slack": slack},
        seed,
        {
            "entropy_bits": H,
            "mean_crespelle_bits": mean,
            "holds": mean >= (1 - slack) * H,
            "mean_twodim_code_bits": mean2,
            "twodim_holds": mean2 >= (1 - slack) * H,
        },
    )


def _unimodal(seq) -> bool:
    """Non-decreasing then non-increasing."""
    i = 0
    while i + 1 < len(seq) and seq[i + 1] >= seq[i]:
        i += 1
    while i + 1 < len(seq) and seq[i + 1] <= seq[i]:
        i += 1
    return i + 1 >= len(seq)


def unimodal_experiment(n: int) -> ExperimentReport:
    """Bounds on f_n(k) = ldim Q_n^(1,k) for k = 2..n-1."""
    rows = []
    for k in range(2, n):
        rep = bound_table(n, 1, k)
        ups = [b.value for b in (rep.upper_lk, rep.far_layers) if b.applicable]
        rows.append(
            {
                "k": k,
                "lower_lk": rep.lower_lk.value,
                "upper_lk": rep.upper_lk.value if rep.upper_lk.applicable else None,
                "far_layers": rep.far_layers.value,
                "best_upper": min(ups),
            }
        )
    lows = [r["lower_lk"] for r in rows]
    best = [r["best_upper"] for r in rows]
    mid = next((r for r in rows if r["k"] == n // 2), None)
    metrics = {
        "lower_unimodal": _unimodal(lows),
        "best_upper_unimodal": _unimodal(best),
        "argmax_lower": rows[lows.index(max(lows))]["k"] if rows else None,
    }
    if mid is not None and mid["upper_lk"] is not None:
        metrics["upper_at_half_exceeds_far_layers_top_gap_1"] = mid["upper_lk"] > 2 + max(1, 1)
    return ExperimentReport("unimodal", {"n": n}, None, metrics, rows)


def run_experiment(kind: str, params: dict, seed: int | None = None) -> ExperimentReport:
    budget = params.get("budget")
    if kind == "avg_ldim":
        return avg_ldim_experiment(params["n"], params.get("samples", 100), _need_seed(seed), budget)
    if kind == "shannon_length":
        return shannon_experiment(
            params["n"], params.get("samples", 100), _need_seed(seed), params.get("slack", 0.02), budget
        )
    if kind == "unimodal":
        return unimodal_experiment(params["n"])
    raise ParameterError(f"unknown experiment {kind!r}")


def _need_seed(seed):
    if seed is None:
        raise ParameterError("sampling experiments require an explicit seed")
    return seed
