"""The WPB family f(rotate(x, 1)) = f(x) + 1, indexed by orbit-representative bits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import SplitMix64
from .boolfn import BooleanFunction, anf, complement_input, is_power_of_two
from .orbits import OrbitIndex, orbit_index, rotate


@dataclass(frozen=True)
class FamilyAssignment:
    """One bit per orbit other than {0} and {1...1}, keyed by representative ascending."""

    n: int
    bits: tuple[int, ...]

    @classmethod
    def from_int(cls, n: int, value: int) -> "FamilyAssignment":
        m = len(orbit_index(n).nontrivial_representatives())
        if value < 0 or value >> m:
            raise ValueError(f"assignment for n={n} has {m} bits")
        return cls(n, tuple((value >> i) & 1 for i in range(m)))

    @classmethod
    def from_hex(cls, n: int, digits: str) -> "FamilyAssignment":
        return cls.from_int(n, int(digits, 16))

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def to_hex(self) -> str:
        return format(self.to_int(), "x")

    def as_dict(self) -> dict[int, int]:
        reps = orbit_index(self.n).nontrivial_representatives()
        return {int(r): b for r, b in zip(reps, self.bits)}


def _table_from_rep_bits(idx: OrbitIndex, rep_bits: np.ndarray) -> np.ndarray:
    """Spread per-representative bits along orbits by alternation."""
    table = (rep_bits[idx.rep] ^ (idx.shift & 1)).astype(np.uint8)
    table[0] = 0
    table[-1] = 1
    return table


def build_from_assignment(idx: OrbitIndex, asg: FamilyAssignment) -> BooleanFunction:
    reps = idx.nontrivial_representatives()
    if asg.n != idx.n or len(asg.bits) != len(reps):
        raise ValueError(f"assignment has {len(asg.bits)} bits, index needs {len(reps)} for n={idx.n}")
    rep_bits = np.zeros(1 << idx.n, dtype=np.uint8)
    rep_bits[reps] = asg.bits
    return BooleanFunction(idx.n, _table_from_rep_bits(idx, rep_bits))


def read_assignment(f: BooleanFunction) -> FamilyAssignment:
    reps = orbit_index(f.n).nontrivial_representatives()
    return FamilyAssignment(f.n, tuple(int(b) for b in f.table[reps]))


def sample(n: int, seed: int) -> tuple[FamilyAssignment, BooleanFunction]:
    if not is_power_of_two(n) or n < 2:
        raise ValueError(f"n must be a power of 2, got {n}")
    idx = orbit_index(n)
    rng = SplitMix64(seed)
    asg = FamilyAssignment(n, tuple(rng.bit() for _ in idx.nontrivial_representatives()))
    return asg, build_from_assignment(idx, asg)


def is_family_member(f: BooleanFunction) -> bool:
    t = f.table
    if t[0] != 0 or t[-1] != 1:
        return False
    x = np.arange(1, (1 << f.n) - 1, dtype=np.int64)
    mask = (1 << f.n) - 1
    rx = ((x << 1) | (x >> (f.n - 1))) & mask
    return bool(np.all(t[rx] != t[x]))


def complement_twin(f: BooleanFunction) -> BooleanFunction:
    """g(x) = f(x + 1...1) + 1; stays in the family and has nl_k(g) = nl_{n-k}(f)."""
    return complement_input(f) ^ 1


def anf_structure_check(f: BooleanFunction) -> bool:
    """ANF form of the family: on every monomial orbit other than 1 and x_1...x_n,
    the nonzero coefficients are exactly the even-shift or the odd-shift half."""
    if f.table[0] != 0 or f.table[-1] != 1:
        raise ValueError("structure check needs f(0...0)=0 and f(1...1)=1")
    n = f.n
    coeffs = anf(f).coefficients
    full = (1 << n) - 1
    # the half-orbit sums already give f(1...1)=1, so no full monomial
    if coeffs[0] != 0 or coeffs[full] != 0:
        return False
    idx = orbit_index(n)
    for r in idx.nontrivial_representatives():
        length = int(idx.length[r])
        if length % 2:
            return False
        on = [coeffs[rotate(int(r), s, n)] for s in range(length)]
        even = on[0::2]
        odd = on[1::2]
        if not ((all(even) and not any(odd)) or (all(odd) and not any(even))):
            return False
    return True


def with_slice_bits(f: BooleanFunction, k: int, value: int) -> BooleanFunction:
    """Replace the weight-k representative bits of a family member.

    Bit i of ``value`` goes to the i-th weight-k representative (ascending).
    """
    idx = orbit_index(f.n)
    reps = [o.representative for o in idx.by_weight[k]]
    if value >> len(reps):
        raise ValueError(f"weight {k} has only {len(reps)} orbits")
    full = np.zeros(1 << f.n, dtype=np.uint8)
    full[idx.representatives] = f.table[idx.representatives]
    for i, r in enumerate(reps):
        full[r] = (value >> i) & 1
    return BooleanFunction(f.n, _table_from_rep_bits(idx, full))
