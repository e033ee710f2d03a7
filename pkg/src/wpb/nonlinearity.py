"""Weightwise nonlinearity: exact restricted Walsh sweeps, Krawtchouk values, bounds.

Two independent routes compute NL_k:

* the naive route correlates f with every one of the 2^n linear masks at
  once through a fast Walsh-Hadamard transform of the slice-restricted sign
  vector;
* the reduced route (family members only) evaluates correlations directly,
  mask by mask, over orbit representatives of weight 1..n/2, optionally via
  the Krawtchouk split over half-orbits.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, isqrt

import numpy as np

from .boolfn import PARITY16, BooleanFunction, popcount_array, weight_slice
from .family import is_family_member, sample, with_slice_bits
from .orbits import orbit_index, rotate

REDUCED_MAX_VARS = 16


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("WPB_THREADS", "1")))
    except ValueError:
        return 1


def fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: out[a] = sum_x v[x] (-1)^(a.x)."""
    a = np.array(v, dtype=np.int64)
    n = a.size.bit_length() - 1
    for i in range(n):
        a = a.reshape(-1, 2, 1 << i)
        lo = a[:, 0, :].copy()
        a[:, 0, :] += a[:, 1, :]
        a[:, 1, :] = lo - a[:, 1, :]
    return a.reshape(-1)


def restricted_walsh(f: BooleanFunction, E) -> np.ndarray:
    """sum_{x in E} (-1)^(f(x) + a.x) for every mask a."""
    E = np.unique(np.asarray(E, dtype=np.int64))
    v = np.zeros(1 << f.n, dtype=np.int64)
    v[E] = f.signs()[E]
    return fwht(v)


def nl_restricted(f: BooleanFunction, E) -> int:
    E = np.unique(np.asarray(E, dtype=np.int64))
    if E.size == 0:
        raise ValueError("restriction set is empty")
    peak = int(np.abs(restricted_walsh(f, E)).max())
    # |E| and every correlation share parity
    return (E.size - peak) // 2


def nl_k_naive(f: BooleanFunction, k: int) -> int:
    return nl_restricted(f, weight_slice(f.n, k).members)


# Krawtchouk polynomials

def krawtchouk(k: int, i: int, n: int) -> int:
    if not (0 <= k <= n and 0 <= i <= n):
        raise ValueError(f"need 0 <= k, i <= n, got k={k}, i={i}, n={n}")
    return sum((-1) ** j * comb(i, j) * comb(n - i, k - j) for j in range(k + 1))


def krawtchouk_recurrence(k: int, i: int, n: int) -> int:
    """Same value via (k+1) K_{k+1} = (n - 2i) K_k - (n - k + 1) K_{k-1}."""
    if not (0 <= k <= n and 0 <= i <= n):
        raise ValueError(f"need 0 <= k, i <= n, got k={k}, i={i}, n={n}")
    prev, cur = 1, n - 2 * i
    if k == 0:
        return prev
    for m in range(1, k):
        prev, cur = cur, ((n - 2 * i) * cur - (n - m + 1) * prev) // (m + 1)
    return cur


@dataclass(frozen=True)
class KrawtchoukTable:
    n: int
    values: np.ndarray  # values[k, i] = K_k(i, n)

    @classmethod
    def build(cls, n: int) -> "KrawtchoukTable":
        vals = np.array([[krawtchouk(k, i, n) for i in range(n + 1)] for k in range(n + 1)],
                        dtype=np.int64)
        vals.setflags(write=False)
        return cls(n, vals)

    def __call__(self, k: int, i: int) -> int:
        return int(self.values[k, i])


# reduced route

@lru_cache(maxsize=None)
def reduced_masks(n: int) -> np.ndarray:
    """Orbit representatives of weight 1..n/2."""
    idx = orbit_index(n)
    reps = [o.representative for k in range(1, n // 2 + 1) for o in idx.by_weight[k]]
    out = np.array(sorted(reps), dtype=np.int64)
    out.setflags(write=False)
    return out


def ones_half_orbits(f: BooleanFunction, k: int) -> np.ndarray:
    """Union over weight-k orbits of the half-orbit through the element valued 1."""
    n = f.n
    out = []
    for o in orbit_index(n).by_weight[k]:
        start = o.representative if f.table[o.representative] else rotate(o.representative, 1, n)
        out.extend(rotate(start, s, n) for s in range(0, o.length, 2))
    return np.array(sorted(out), dtype=np.int64)


def _parity_block(masks: np.ndarray, xs: np.ndarray) -> np.ndarray:
    return PARITY16[np.bitwise_and.outer(masks, xs)].astype(np.int32)


def _direct_chunk(masks, xs, signs, total):
    # sum_x s_x (-1)^(a.x) = total - 2 * sum_{a.x = 1} s_x
    return total - 2 * (_parity_block(masks, xs) @ signs)


def _krawtchouk_chunk(masks, ones, kvals):
    # K_k(w(a), n) - 2 * sum_{x in H} (-1)^(a.x)
    hits = _parity_block(masks, ones).sum(axis=1, dtype=np.int64)
    return kvals - 2 * (ones.size - 2 * hits)


def reduced_correlations(f: BooleanFunction, k: int, form: str = "direct",
                         threads: int | None = None, chunk: int = 256) -> np.ndarray:
    """Slice correlations at every mask in ``reduced_masks(n)``."""
    if f.n > REDUCED_MAX_VARS:
        raise ValueError(f"reduced sweep supports n <= {REDUCED_MAX_VARS}")
    n = f.n
    masks = reduced_masks(n)
    xs = weight_slice(n, k).members
    threads = threads or default_threads()
    parts = [masks[i:i + chunk] for i in range(0, masks.size, chunk)]
    if form == "direct":
        signs = f.signs()[xs].astype(np.int32)
        total = int(signs.sum())
        job = lambda m: _direct_chunk(m, xs, signs, total)  # noqa: E731
    elif form == "krawtchouk":
        ones = ones_half_orbits(f, k)
        ktab = KrawtchoukTable.build(n).values[k]
        job = lambda m: _krawtchouk_chunk(m, ones, ktab[popcount_array(m)])  # noqa: E731
    else:
        raise ValueError(f"unknown form {form!r}")
    if threads > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, parts))
    else:
        results = [job(m) for m in parts]
    return np.concatenate(results).astype(np.int64)


def nl_k_reduced(f: BooleanFunction, k: int, form: str = "direct",
                 threads: int | None = None) -> int:
    if not is_family_member(f):
        raise ValueError("reduced sweep requires f(rotate(x,1)) = f(x)+1 off the fixed points")
    if not 0 <= k <= f.n:
        raise ValueError(f"weight {k} out of range")
    size = comb(f.n, k)
    if k in (0, f.n):
        return 0
    peak = int(np.abs(reduced_correlations(f, k, form, threads)).max())
    return (size - peak) // 2


# bounds

def upper_bound(n: int, k: int) -> int:
    """floor(|E|/2 - sqrt(|E|)/2) for |E| = C(n, k), in integer arithmetic."""
    if not 0 <= k <= n:
        raise ValueError(f"weight {k} out of range")
    m = comb(n, k)
    r = isqrt(m)
    ceil_root = r if r * r == m else r + 1
    # floor((m - sqrt(m)) / 2) == floor((m - ceil(sqrt(m))) / 2) for integer m
    return (m - ceil_root) // 2


def recursive_lower_bounds(n: int, base: dict[int, int]) -> dict[int, int]:
    """Lower bounds for recursive-construction outputs from the n/2-variable bounds ``base``.

    Base values beyond weight n/4 are read through nl_k = nl_{n/2-k}.
    """
    if n < 8 or n & (n - 1):
        raise ValueError(f"n must be a power of 2 >= 8, got {n}")
    half = n // 2

    def sub(k):
        kk = half - k if k > half // 2 else k
        if kk in base:
            return base[kk]
        if k in base:
            return base[k]
        raise ValueError(f"missing base value for weight {k} (n={half})")

    out = {2: 5}
    for i in range(2, n // 4 + 1):
        c = comb(n // 4 - 1, i - 2)
        out[2 * i - 1] = n * c * sub(i)
        out[2 * i] = (n // 2) * c * (2 * sub(i) - 2 * c - 1) + n * c * sub(i + 1)
    for k in range(half + 1, n - 1):
        out[k] = out[n - k]
    return dict(sorted(out.items()))


def power2_lower_bounds(n: int) -> dict[int, int]:
    """Family-wide bounds at weights 2^i: 5 below n/2, 19 at n/2."""
    if n < 8 or n & (n - 1):
        raise ValueError(f"n must be a power of 2 >= 8, got {n}")
    l = n.bit_length() - 1
    return {1 << i: (19 if i == l - 1 else 5) for i in range(2, l)}


# Weight-2 subset used to show NL_2 >= 5 on the whole family: the first eight
# coordinates carry pairs at distance 1, 2, 3, 4.
_PROOF_PAIRS = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7),
                (0, 2), (1, 3), (2, 4), (3, 5), (4, 6), (5, 7),
                (0, 3), (1, 4), (2, 5), (3, 6), (4, 7),
                (0, 4), (1, 5), (2, 6), (3, 7)]


def weight2_proof_set(n: int) -> list[int]:
    """The 22 weight-2 vectors (coordinates 1..8 only) as integers for n >= 8."""
    if n < 8:
        raise ValueError("needs n >= 8")
    return [(1 << (n - 1 - i)) | (1 << (n - 1 - j)) for i, j in _PROOF_PAIRS]


def rotation_set_invariance_check(f: BooleanFunction, E, j: int) -> bool:
    E = [int(x) for x in E]
    if any(f.table[x] != f.table[rotate(x, j, f.n)] for x in E):
        raise ValueError("f is not invariant under the rotation on E")
    return nl_restricted(f, [rotate(x, j, f.n) for x in E]) == nl_restricted(f, E)


# profiles

@dataclass
class NlProfile:
    n: int
    nl: dict[int, int]
    upper: dict[int, int]
    lower: dict[int, int] = field(default_factory=dict)
    path: str = "naive"

    def within_bounds(self) -> bool:
        return all(self.lower.get(k, 0) <= v <= self.upper[k] for k, v in self.nl.items())

    def rows(self):
        for k in sorted(self.nl):
            yield k, self.nl[k], self.upper[k], self.lower.get(k)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "path": self.path,
            "rows": [{"k": k, "nl": v, "upper": u, "lower": lo} for k, v, u, lo in self.rows()],
            "within_bounds": self.within_bounds(),
        }


def profile(f: BooleanFunction, reduced: bool | None = None, ks=None,
            lower: dict[int, int] | None = None, threads: int | None = None) -> NlProfile:
    """NL_k for k in ``ks`` (default 1..n-1) with upper and optional lower bounds.

    ``reduced=None`` picks the orbit-reduced sweep for family members and the
    full sweep otherwise.
    """
    n = f.n
    ks = list(range(1, n)) if ks is None else sorted(ks)
    member = is_family_member(f)
    if reduced is None:
        reduced = member and n <= REDUCED_MAX_VARS
    if reduced and not member:
        raise ValueError("reduced path requires a family member")
    if reduced:
        nl = {k: nl_k_reduced(f, k, threads=threads) for k in ks}
    else:
        nl = {k: nl_k_naive(f, k) for k in ks}
    lower = {k: v for k, v in (lower or {}).items() if k in nl}
    return NlProfile(n, nl, {k: upper_bound(n, k) for k in ks}, lower,
                     "reduced" if reduced else "naive")


def naive_max_over_low_masks(f: BooleanFunction, k: int) -> tuple[int, int]:
    """(max |corr| over all masks, max |corr| over masks of weight <= n/2)."""
    w = np.abs(restricted_walsh(f, weight_slice(f.n, k).members))
    low = popcount_array(np.arange(1 << f.n)) <= f.n // 2
    return int(w.max()), int(w[low].max())


# per-slice exhaustion

def slice_nl_map(n: int, k: int, max_orbits: int = 16) -> dict[int, int]:
    """NL_k for every assignment of the weight-k orbit bits.

    Keys put bit i on the i-th weight-k representative (ascending). Other
    slices are left at a fixed member; they cannot change NL_k.
    """
    m = len(orbit_index(n).by_weight[k])
    if m > max_orbits:
        raise ValueError(f"{m} weight-{k} orbits: 2^{m} assignments is too many")
    _, base = sample(n, 0)
    E = weight_slice(n, k).members
    return {v: nl_restricted(with_slice_bits(base, k, v), E) for v in range(1 << m)}


def slice_nl_values(n: int, k: int) -> set[int]:
    return set(slice_nl_map(n, k).values())


def table1() -> dict[int, tuple[set[int], int]]:
    """Per weight 2..4 at n=8: attainable NL_k over the family, and the upper bound."""
    return {k: (slice_nl_values(8, k), upper_bound(8, k)) for k in (2, 3, 4)}


def table2(base: dict[int, int] | None = None) -> dict[int, tuple[int, int]]:
    """Per weight 2..8 at n=16: (recursive lower bound, upper bound)."""
    base = base or {2: 9, 3: 22, 4: 27}
    lows = recursive_lower_bounds(16, base)
    return {k: (lows[k], upper_bound(16, k)) for k in range(2, 9)}
