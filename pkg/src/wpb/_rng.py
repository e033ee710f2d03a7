"""SplitMix64 stream and seed derivation used by every randomized builder."""

import hashlib

_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def bit(self) -> int:
        # one output per bit, top bit taken
        return self.next64() >> 63


def derive_seed(seed: int, tag: str) -> int:
    h = hashlib.blake2b(f"{seed & _MASK64}:{tag}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")
