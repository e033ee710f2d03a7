"""Recursive construction: WPB family members built from n/2-variable ones.

Layout of the slice sets (x_1 leftmost, MSB), for weight k >= 3 and
y1 in Y_k (length n/4 - 1, weight ceil(k/2) - 2):

    k = 2i - 1:  R = (1, y1, 0^(n/4),       y2)  with wt(y2) = i
    k = 2i:      T = (1, y1, 0^(n/4),       y2)  with wt(y2) = i + 1
                 S = (1, y1, 0^(n/4 - 1), 1, y2)  with wt(y2) = i,
                     y2 != (y, 0^(n/4 - 1), 1, 1) for every y in Y_k, and
                     y2 != (1, y, 0^(n/4 - 1), 1) for every y in Y_k other than y1

The second S exclusion is needed for orbit disjointness: without it
(1, y1, 0, 1, 1, y, 0, 1) in S_y1 and its half-turn in S_y are one orbit.
The period-n/2 point (1, y1, 0, 1, 1, y1, 0, 1) stays in S_y1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._rng import SplitMix64, derive_seed
from .boolfn import BooleanFunction, constant_weight_words, is_power_of_two
from .family import FamilyAssignment, build_from_assignment, is_family_member, sample, with_slice_bits
from .nonlinearity import nl_k_naive
from .orbits import orbit_index, orbit_of

BUILD_MAX_VARS = 16

# f(0,1,1,1,0,0,0,0) != f(1,1,0,1,0,0,0,0) forces NL_3 >= 8 at n = 8
FORCED_PAIR = (0b01110000, 0b11010000)


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    seed: int = 0
    base8_mode: str = "random"  # "random" (constrained) or "best"
    shared_subfunction: bool = False

    def __post_init__(self):
        if not is_power_of_two(self.n) or self.n < 8:
            raise ValueError(f"n must be 2^l with l >= 3, got {self.n}")
        if self.base8_mode not in ("random", "best"):
            raise ValueError(f"unknown base mode {self.base8_mode!r}")

    def child(self, tag: str) -> "ConstructionParams":
        if self.shared_subfunction:
            tag = "g"
        return ConstructionParams(self.n // 2, derive_seed(self.seed, tag),
                                  self.base8_mode, self.shared_subfunction)


@dataclass
class SliceSets:
    """Construction sets for one weight. Entries are (x, y2) pairs."""

    n: int
    k: int
    Y: list[int]
    R: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    T: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    S: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    def vectors(self) -> list[int]:
        return [x for part in (self.R, self.T, self.S) for pairs in part.values() for x, _ in pairs]


def slice_sets(n: int, k: int) -> SliceSets:
    if not is_power_of_two(n) or n < 16:
        raise ValueError(f"slice sets need n = 2^l >= 16, got {n}")
    if not 3 <= k <= n - 1:
        raise ValueError(f"weight {k} outside 3..{n - 1}")
    q = n // 4
    half = n // 2
    i = (k + 1) // 2
    top = 1 << (n - 1)
    Y = list(constant_weight_words(q - 1, i - 2))
    sets = SliceSets(n, k, Y)
    if k % 2:
        for y1 in Y:
            head = top | (y1 << (3 * q))
            sets.R[y1] = [(head | y2, y2) for y2 in constant_weight_words(half, i)]
    else:
        tails = {(y << (q + 1)) | 0b11 for y in Y}
        for y1 in Y:
            excluded = tails | {(1 << (half - 1)) | (y << q) | 1 for y in Y if y != y1}
            head = top | (y1 << (3 * q))
            sets.T[y1] = [(head | y2, y2) for y2 in constant_weight_words(half, i + 1)]
            sets.S[y1] = [(head | (1 << half) | y2, y2)
                          for y2 in constant_weight_words(half, i) if y2 not in excluded]
    return sets


def check_distinct_orbits(sets, n: int | None = None) -> bool:
    """True iff no two listed vectors lie in the same rotation orbit."""
    if isinstance(sets, SliceSets):
        n, vectors = sets.n, sets.vectors()
    else:
        if n is None:
            raise ValueError("n is required for a plain vector list")
        vectors = list(sets)
    reps = [orbit_of(x, n).representative for x in vectors]
    return len(set(reps)) == len(reps)


def _forced_pair_holds(f: BooleanFunction) -> bool:
    a, b = FORCED_PAIR
    return f.table[a] != f.table[b]


def constrained_base8(seed: int) -> BooleanFunction:
    """Random 8-variable family member, second forced-pair orbit bit flipped if needed."""
    asg, f = sample(8, seed)
    if _forced_pair_holds(f):
        return f
    rep = orbit_of(FORCED_PAIR[1], 8).representative
    bits = asg.as_dict()
    bits[rep] ^= 1
    f = build_from_assignment(orbit_index(8), FamilyAssignment(8, tuple(bits.values())))
    assert _forced_pair_holds(f)
    return f


def best_base8() -> BooleanFunction:
    """Per-slice exhaustive optimum at n = 8; profile (0, 9, 22, 27, 22, 9, 0)."""
    idx = orbit_index(8)
    f = build_from_assignment(idx, FamilyAssignment.from_int(8, 0))
    for k in range(2, 7):
        m = len(idx.by_weight[k])
        best_v, best_nl = None, -1
        for v in range(1 << m):
            g = with_slice_bits(f, k, v)
            if k == 3 and not _forced_pair_holds(g):
                continue
            nl = nl_k_naive(g, k)
            if nl > best_nl:
                best_v, best_nl = v, nl
        f = with_slice_bits(f, k, best_v)
    return f


@dataclass
class ConstructionResult:
    function: BooleanFunction
    params: ConstructionParams
    # (tag, weight) -> n/2-variable subfunction used on that weight's sets
    subfunctions: dict[tuple[str, int], BooleanFunction] = field(default_factory=dict)
    # every 8-variable base reached by the recursion
    bases: list[BooleanFunction] = field(default_factory=list)


def build_detailed(params: ConstructionParams, _memo=None) -> ConstructionResult:
    n = params.n
    if n > BUILD_MAX_VARS:
        raise ValueError(f"construction supports n <= {BUILD_MAX_VARS}, got {n}")
    memo = {} if _memo is None else _memo
    if n == 8:
        f = best_base8() if params.base8_mode == "best" else constrained_base8(params.seed)
        return ConstructionResult(f, params, bases=[f])

    def sub(tag: str, k: int) -> ConstructionResult:
        p = params.child(f"{tag}:{k}")
        if p not in memo:
            memo[p] = build_detailed(p, memo)
        return memo[p]

    idx = orbit_index(n)
    forced: dict[int, int] = {}

    def install(x: int, value: int) -> None:
        rep, s = idx.locate(x)
        # two set members on one orbit would contradict the disjointness lemma
        assert rep not in forced, f"orbit of {x:#x} assigned twice"
        forced[rep] = value ^ (s & 1)

    subs: dict[tuple[str, int], BooleanFunction] = {}
    bases: list[BooleanFunction] = []

    def use(tag: str, k: int) -> BooleanFunction:
        r = sub(tag, k)
        subs[(tag, k)] = r.function
        bases.extend(b for b in r.bases if b not in bases)
        return r.function
    for k in range(3, n):
        sets = slice_sets(n, k)
        if not sets.Y:
            continue
        if k % 2:
            g = use("g", k)
            for pairs in sets.R.values():
                for x, y2 in pairs:
                    install(x, int(g.table[y2]))
        else:
            g1, g2 = use("g1", k), use("g2", k)
            for pairs in sets.T.values():
                for x, y2 in pairs:
                    install(x, int(g1.table[y2]))
            for pairs in sets.S.values():
                for x, z2 in pairs:
                    install(x, int(g2.table[z2]))

    rng = SplitMix64(params.seed)
    bits = tuple(forced[int(r)] if int(r) in forced else rng.bit()
                 for r in idx.nontrivial_representatives())
    f = build_from_assignment(idx, FamilyAssignment(n, bits))
    assert is_family_member(f)
    return ConstructionResult(f, params, subs, bases)


def build(params: ConstructionParams) -> BooleanFunction:
    return build_detailed(params).function
