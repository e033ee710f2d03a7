"""GF(2^n) arithmetic with a normal basis and the trace-form WPB functions.

Field elements are ints in the polynomial basis of the context's modulus.
Coordinate vectors use the package-wide MSB-first encoding, laid out over
the normal basis so that squaring an element rotates its coordinate word
left by one (bit b carries alpha^(2^(b+1))).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boolfn import BooleanFunction, popcount_array


def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(p: int) -> bool:
    d = p.bit_length() - 1
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


def _prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _gf2_rank(vectors) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@dataclass(frozen=True)
class CyclotomicCoset:
    leader: int
    size: int
    members: tuple[int, ...]


@lru_cache(maxsize=None)
def cyclotomic_cosets(n: int) -> tuple[CyclotomicCoset, ...]:
    """Cosets of 2 modulo 2^n - 1, leaders ascending."""
    N = (1 << n) - 1
    seen = set()
    out = []
    for j in range(N):
        if j in seen:
            continue
        members = [j]
        y = (2 * j) % N
        while y != j:
            members.append(y)
            y = (2 * y) % N
        seen.update(members)
        out.append(CyclotomicCoset(j, len(members), tuple(members)))
    return tuple(out)


class FieldContext:
    """GF(2^n) data: modulus, generator, normal element and coordinate maps."""

    def __init__(self, n: int, modulus: int, generator: int, normal: int):
        self.n = n
        self.modulus = modulus
        self.generator = generator
        self.normal = normal
        self.order = (1 << n) - 1

        N = self.order
        exp = np.zeros(N, dtype=np.int64)
        y = 1
        for i in range(N):
            exp[i] = y
            y = self.mul(y, generator)
        log = np.full(N + 1, -1, dtype=np.int64)
        log[exp] = np.arange(N)
        self.exp = exp
        self.log = log

        # coordinate bit b -> alpha^(2^((b+1) mod n))
        self.basis = tuple(self.pow(normal, 1 << ((b + 1) % n)) for b in range(n))
        coords = np.arange(1 << n, dtype=np.int64)
        elems = np.zeros(1 << n, dtype=np.int64)
        for b, e in enumerate(self.basis):
            elems ^= np.where((coords >> b) & 1 == 1, e, 0)
        to_coords = np.empty_like(elems)
        to_coords[elems] = coords
        self.coord_to_elem = elems
        self.elem_to_coord = to_coords
        for arr in (exp, log, elems, to_coords):
            arr.setflags(write=False)

        # Tr_1^n(z) = parity(z & trace_mask)
        tm = 0
        for b in range(n):
            if self.trace(1, n, 1 << b):
                tm |= 1 << b
        self.trace_mask = tm

    def __repr__(self):
        return (f"FieldContext(n={self.n}, modulus={self.modulus:#x}, "
                f"generator={self.generator:#x}, normal={self.normal:#x})")

    def mul(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 1)

    def in_subfield(self, x: int, k: int) -> bool:
        return self.pow(x, 1 << k) == x

    def trace(self, r: int, k: int, x: int) -> int:
        """Relative trace Tr_r^k(x) = x + x^(2^r) + ... + x^(2^(k-r))."""
        if r < 1 or k % r or self.n % k:
            raise ValueError(f"need r | k | n, got r={r}, k={k}, n={self.n}")
        if not self.in_subfield(x, k):
            raise ValueError(f"{x:#x} is not in GF(2^{k})")
        acc, y = 0, x
        for _ in range(k // r):
            acc ^= y
            y = self.pow(y, 1 << r)
        return acc

    def to_element(self, coords: int) -> int:
        return int(self.coord_to_elem[coords])

    def to_coords(self, x: int) -> int:
        return int(self.elem_to_coord[x])


def _subfield_trace_coefficient(ctx: FieldContext, o: int) -> int:
    """Smallest gamma with Tr_o^n(gamma) = 1, so Tr_1^o(y) = Tr_1^n(gamma*y) on GF(2^o)."""
    for g in range(1, 1 << ctx.n):
        if ctx.trace(o, ctx.n, g) == 1:
            return g
    raise AssertionError("relative trace is surjective")


@lru_cache(maxsize=None)
def build_context(n: int) -> FieldContext:
    if not 2 <= n <= 16:
        raise ValueError(f"field context supports 2 <= n <= 16, got {n}")
    modulus = next(p for p in range(1 << n, 1 << (n + 1)) if is_irreducible(p))
    N = (1 << n) - 1
    factors = _prime_factors(N)

    def mul(a, b):
        return poly_mod(clmul(a, b), modulus)

    def pw(a, e):
        r = 1
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    generator = next(g for g in range(2, 1 << n) if all(pw(g, N // q) != 1 for q in factors))
    for a in range(1, 1 << n):
        conj, y = [], a
        for _ in range(n):
            conj.append(y)
            y = mul(y, y)
        if _gf2_rank(conj) == n:
            normal = a
            break
    return FieldContext(n, modulus, generator, normal)


def f4_primitive(ctx: FieldContext, coset_size: int) -> int:
    """Element of order 3 (a primitive element of GF(4) inside GF(2^coset_size))."""
    if ctx.n % coset_size:
        raise ValueError(f"{coset_size} does not divide n={ctx.n}")
    if coset_size % 2:
        raise ValueError(f"GF(4) is not a subfield of GF(2^{coset_size})")
    return int(ctx.exp[ctx.order // 3])


@dataclass(frozen=True)
class TraceSpec:
    """Exponent choice i_j in {1, 2} per nonzero coset leader, ascending."""

    n: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        expected = len(cyclotomic_cosets(self.n)) - 1
        if len(self.exponents) != expected:
            raise ValueError(f"need {expected} exponents for n={self.n}, got {len(self.exponents)}")
        if any(e not in (1, 2) for e in self.exponents):
            raise ValueError("exponents must be 1 or 2")

    @classmethod
    def from_int(cls, n: int, bits: int) -> "TraceSpec":
        m = len(cyclotomic_cosets(n)) - 1
        if bits >> m:
            raise ValueError(f"spec has more than {m} bits")
        return cls(n, tuple(1 + ((bits >> i) & 1) for i in range(m)))

    def to_int(self) -> int:
        return sum((e - 1) << i for i, e in enumerate(self.exponents))


def eval_trace_form(ctx: FieldContext, spec: TraceSpec) -> BooleanFunction:
    """Truth table of sum_j Tr_1^{o(j)}(beta^{i_j} x^j) over coordinate vectors."""
    if spec.n != ctx.n:
        raise ValueError("spec and context disagree on n")
    N = ctx.order
    cosets = cyclotomic_cosets(ctx.n)[1:]
    gammas = {c.size: int(ctx.log[_subfield_trace_coefficient(ctx, c.size)])
              for c in cosets}
    log_beta = N // 3
    L = np.arange(N, dtype=np.int64)  # log of x over nonzero x
    acc = np.zeros(N, dtype=np.int64)
    for c, e in zip(cosets, spec.exponents):
        acc ^= ctx.exp[(gammas[c.size] + e * log_beta + c.leader * L) % N]
    values = np.zeros(1 << ctx.n, dtype=np.uint8)
    values[ctx.exp] = (popcount_array(acc & ctx.trace_mask) & 1).astype(np.uint8)
    return BooleanFunction(ctx.n, values[ctx.coord_to_elem])
