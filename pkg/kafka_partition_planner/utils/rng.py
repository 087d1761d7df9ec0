"""
SplitMix64 pseudo-random generator

以公開的 recurrence 常數定義，跨語言可重現；不依賴 random / numpy 的內部演算法。
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer (bijective on 64-bit words)"""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """64-bit SplitMix generator"""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def uniform_int(self, n: int) -> int:
        """
        Uniform integer in [1, n]

        以 rejection sampling 避免 modulo bias。

        Args:
            n: 上界 (>= 1)

        Returns:
            1..n 之間的整數
        """
        if n < 1:
            raise ValueError(f"uniform_int requires n >= 1, got {n}")
        limit = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return 1 + x % n


def derive_seed(master_seed: int, point_index: int, trial_index: int) -> int:
    """
    由 (master_seed, point, trial) 推導獨立的 per-trial seed

    每一層都經過 mix64，因此結果與執行順序、平行度無關。
    """
    z = mix64((master_seed & MASK64) + GOLDEN_GAMMA)
    z = mix64(z ^ ((point_index * GOLDEN_GAMMA) & MASK64))
    z = mix64(z + ((trial_index + 1) * MIX_MUL_1 & MASK64))
    return z
