"""SplitMix64 generator.

Initial conditions are drawn from this documented generator rather than
any host library's RNG so that every implementation of the scenario format
reproduces identical draws from the same 64-bit seed. Algorithm: the state
advances by the golden-gamma constant and the output is finalized with two
xor-shift-multiply rounds; uniform doubles take the top 53 bits.
"""

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit-state generator with uniform [0, 1) doubles."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def floats(self, count: int):
        return [self.next_float() for _ in range(count)]
