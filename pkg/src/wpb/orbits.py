"""Orbits of n-bit words under cyclic rotation (binary necklaces)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boolfn import constant_weight_words

INDEX_MAX_VARS = 16


def rotate(x: int, s: int, n: int) -> int:
    """Left s-cyclic shift: x_1 (the MSB) moves to the end."""
    s %= n
    mask = (1 << n) - 1
    return ((x << s) | (x >> (n - s))) & mask


@dataclass(frozen=True, order=True)
class Orbit:
    representative: int
    length: int
    n: int

    @property
    def weight(self) -> int:
        return self.representative.bit_count()

    def elements(self) -> list[int]:
        return [rotate(self.representative, s, self.n) for s in range(self.length)]


def orbit_of(x: int, n: int) -> Orbit:
    rep = x
    length = n
    y = x
    for s in range(1, n + 1):
        y = rotate(y, 1, n)
        if y == x:
            length = s
            break
        rep = min(rep, y)
    return Orbit(rep, length, n)


def shift_to(rep: int, x: int, n: int) -> int:
    """Least s >= 0 with rotate(rep, s) == x."""
    y = rep
    for s in range(n):
        if y == x:
            return s
        y = rotate(y, 1, n)
    raise ValueError(f"{x:#x} is not in the orbit of {rep:#x}")


def half_orbit(o: Orbit) -> list[int]:
    """Even-shift half of an orbit, starting at the representative."""
    if o.length % 2:
        raise ValueError(f"orbit of {o.representative:#x} has odd length {o.length}")
    return [rotate(o.representative, s, o.n) for s in range(0, o.length, 2)]


def representatives_by_weight(n: int, k: int) -> list[Orbit]:
    if not 0 <= k <= n:
        raise ValueError(f"weight {k} out of range 0..{n}")
    if n <= INDEX_MAX_VARS:
        return list(orbit_index(n).by_weight[k])
    out = []
    for x in constant_weight_words(n, k):
        o = orbit_of(x, n)
        if o.representative == x:
            out.append(o)
    return out


def _phi(m: int) -> int:
    result, p, r = m, 2, m
    while p * p <= r:
        if r % p == 0:
            while r % p == 0:
                r //= p
            result -= result // p
        p += 1
    if r > 1:
        result -= result // r
    return result


def orbit_count(n: int) -> int:
    """Number of rotation orbits of n-bit words, by the necklace formula."""
    if n < 1:
        raise ValueError("n must be positive")
    total = sum(_phi(d) * (1 << (n // d)) for d in range(1, n + 1) if n % d == 0)
    return total // n


class OrbitIndex:
    """Full lookup table vector -> (representative, shift) for n <= 16.

    ``shift[x]`` is the least s with rotate(rep[x], s) == x, and
    ``length[x]`` is the length of the orbit containing x.
    """

    def __init__(self, n: int):
        if not 1 <= n <= INDEX_MAX_VARS:
            raise ValueError(f"orbit index supports 1 <= n <= {INDEX_MAX_VARS}, got {n}")
        self.n = n
        size = 1 << n
        mask = size - 1
        x = np.arange(size, dtype=np.int64)
        rots = np.empty((n, size), dtype=np.int64)
        for s in range(n):
            rots[s] = ((x << s) | (x >> (n - s))) & mask
        rep = rots.min(axis=0)
        # first s with rotate(x, s) == rep; then rotate(rep, (n - s) % len) == x
        back = np.argmax(rots == rep, axis=0)
        length = np.full(size, n, dtype=np.int64)
        if n > 1:
            same = rots[1:] == x
            length = np.where(same.any(axis=0), np.argmax(same, axis=0) + 1, n)
        shift = (n - back) % length
        for arr in (rep, shift, length):
            arr.setflags(write=False)
        self.rep = rep
        self.shift = shift
        self.length = length

        reps = np.flatnonzero(rep == x)
        weights = np.array([int(r).bit_count() for r in reps])
        self.by_weight = tuple(
            tuple(Orbit(int(r), int(length[r]), n) for r in reps[weights == k])
            for k in range(n + 1)
        )
        self.representatives = reps
        self.representatives.setflags(write=False)

    def __len__(self):
        return len(self.representatives)

    def orbits(self) -> list[Orbit]:
        return [o for group in self.by_weight for o in group]

    def locate(self, x: int) -> tuple[int, int]:
        return int(self.rep[x]), int(self.shift[x])

    def nontrivial_representatives(self) -> np.ndarray:
        """Representatives other than 0 and 1...1, ascending."""
        r = self.representatives
        return r[(r != 0) & (r != (1 << self.n) - 1)]


@lru_cache(maxsize=None)
def orbit_index(n: int) -> OrbitIndex:
    return OrbitIndex(n)
