"""Truth-table Boolean functions, weight slices, ANF and the WPB predicate.

Vectors are integers with x_1 as the most significant bit, so the
lexicographic truth-table order is plain numeric order of the index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path

import numpy as np

MAX_VARS = 32

_POPCOUNT16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)
PARITY16 = (_POPCOUNT16 & 1).astype(np.uint8)
PARITY16.setflags(write=False)


def popcount_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    c = np.zeros(x.shape, dtype=np.int64)
    for _ in range(4):
        c += _POPCOUNT16[(x & np.uint64(0xFFFF)).astype(np.int64)]
        x = x >> np.uint64(16)
    return c


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"n must be in 1..{MAX_VARS}, got {n}")


class BooleanFunction:
    """Immutable n-variable Boolean function stored as a 0/1 truth table."""

    __slots__ = ("n", "table", "_hash")

    def __init__(self, n: int, table):
        _check_n(n)
        arr = np.array(table, dtype=np.uint8).ravel()
        if arr.size != 1 << n:
            raise ValueError(f"truth table must have {1 << n} entries, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        arr.setflags(write=False)
        self.n = n
        self.table = arr
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "BooleanFunction":
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFunction":
        return cls(n, [fn(t) & 1 for t in range(1 << n)])

    def __call__(self, t: int) -> int:
        return evaluate(self, t)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.table.tobytes()))
        return self._hash

    def __repr__(self):
        return f"BooleanFunction(n={self.n}, weight={int(self.table.sum())})"

    def __xor__(self, other):
        if isinstance(other, int):
            return BooleanFunction(self.n, self.table ^ (other & 1))
        if other.n != self.n:
            raise ValueError("variable counts differ")
        return BooleanFunction(self.n, self.table ^ other.table)

    def signs(self) -> np.ndarray:
        """(-1)^f as int64."""
        return 1 - 2 * self.table.astype(np.int64)


@dataclass(frozen=True)
class AnfPolynomial:
    """ANF coefficients; bit u is the coefficient of the monomial with support u."""

    n: int
    coefficients: np.ndarray

    def monomials(self) -> list[int]:
        return [int(u) for u in np.flatnonzero(self.coefficients)]


@dataclass(frozen=True)
class WeightSlice:
    n: int
    k: int
    members: np.ndarray

    def __len__(self):
        return len(self.members)


def evaluate(f: BooleanFunction, t: int) -> int:
    if not 0 <= t < 1 << f.n:
        raise IndexError(f"vector {t} out of range for n={f.n}")
    return int(f.table[t])


def constant_weight_words(n: int, k: int):
    """Yield all n-bit words of weight k in increasing order (Gosper's hack)."""
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


@lru_cache(maxsize=None)
def weight_slice(n: int, k: int) -> WeightSlice:
    if not 0 <= k <= n:
        raise ValueError(f"weight {k} out of range 0..{n}")
    members = np.fromiter(constant_weight_words(n, k), dtype=np.int64, count=comb(n, k))
    members.setflags(write=False)
    return WeightSlice(n, k, members)


def restricted_weight(f: BooleanFunction, k: int) -> int:
    return int(f.table[weight_slice(f.n, k).members].sum())


def unbalanced_weights(f: BooleanFunction) -> list[int]:
    """Weights 1..n-1 on which f is not balanced."""
    return [k for k in range(1, f.n) if 2 * restricted_weight(f, k) != comb(f.n, k)]


def is_wpb(f: BooleanFunction) -> bool:
    if not is_power_of_two(f.n):
        raise ValueError(f"WPB functions exist only for n a power of 2, got n={f.n}")
    if f.table[0] != 0 or f.table[-1] != 1:
        return False
    return not unbalanced_weights(f)


def _moebius(bits: np.ndarray, n: int) -> np.ndarray:
    a = bits.astype(np.uint8).copy()
    for i in range(n):
        a = a.reshape(-1, 2, 1 << i)
        a[:, 1, :] ^= a[:, 0, :]
    return a.reshape(-1)


def anf(f: BooleanFunction) -> AnfPolynomial:
    coeffs = _moebius(f.table, f.n)
    coeffs.setflags(write=False)
    return AnfPolynomial(f.n, coeffs)


def truth_table(p: AnfPolynomial) -> BooleanFunction:
    return BooleanFunction(p.n, _moebius(p.coefficients, p.n))


def degree(f: BooleanFunction) -> int:
    """Algebraic degree; -1 for the zero function."""
    nz = np.flatnonzero(anf(f).coefficients)
    if nz.size == 0:
        return -1
    return int(popcount_array(nz).max())


def inner_product(a: int, x: int) -> int:
    return (a & x).bit_count() & 1


def complement_input(f: BooleanFunction) -> BooleanFunction:
    # t XOR (2^n - 1) walks the table backwards
    return BooleanFunction(f.n, f.table[::-1])


# WPBF v1 file format

def to_hex(f: BooleanFunction) -> str:
    bits = f.table
    pad = (-bits.size) % 8
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    digits = np.packbits(bits).tobytes().hex()
    return digits[:max(1, (f.table.size + 3) // 4)]


def from_hex(n: int, digits: str) -> BooleanFunction:
    _check_n(n)
    digits = digits.strip()
    expected = max(1, ((1 << n) + 3) // 4)
    if len(digits) != expected:
        raise ValueError(f"expected {expected} hex digits for n={n}, got {len(digits)}")
    if digits != digits.lower():
        raise ValueError("hex digits must be lowercase")
    raw = bytes.fromhex(digits + ("0" if len(digits) % 2 else ""))
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: 1 << n]
    return BooleanFunction(n, bits)


def dumps(f: BooleanFunction) -> str:
    return f"WPBF v1 n={f.n}\n{to_hex(f)}\n"


def loads(text: str) -> BooleanFunction:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("WPBF file needs a header line and a hex line")
    header = lines[0].split()
    if len(header) != 3 or header[:2] != ["WPBF", "v1"] or not header[2].startswith("n="):
        raise ValueError(f"bad WPBF header: {lines[0]!r}")
    try:
        n = int(header[2][2:])
    except ValueError:
        raise ValueError(f"bad variable count in header: {lines[0]!r}") from None
    return from_hex(n, lines[1])


def save(f: BooleanFunction, path) -> None:
    Path(path).write_text(dumps(f))


def load(path) -> BooleanFunction:
    return loads(Path(path).read_text())
