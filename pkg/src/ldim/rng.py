"""xorshift64* generator, fixed so samples are bit-identical on every platform."""

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed; lets samples be drawn in any order or in parallel."""
    return splitmix64((seed & MASK64) ^ splitmix64(index & MASK64))


class XorShift64Star:
    def __init__(self, seed: int):
        # state must be nonzero; raw seeds are scrambled first so 0, 1, 2 ... differ
        state = splitmix64(seed & MASK64)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def coin(self) -> bool:
        return bool(self.next_u64() >> 63)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def k_subset(self, n: int, k: int) -> list[int]:
        """Uniform k-subset of 1..n by a partial Fisher-Yates shuffle, sorted."""
        items = list(range(1, n + 1))
        for i in range(k):
            j = i + self.below(n - i)
            items[i], items[j] = items[j], items[i]
        return sorted(items[:k])
