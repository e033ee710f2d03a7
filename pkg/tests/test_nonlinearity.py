import random
from math import comb, sqrt, floor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpb.boolfn import BooleanFunction, inner_product, weight_slice
from wpb.construction import best_base8
from wpb.family import complement_twin, sample
from wpb.nonlinearity import (KrawtchoukTable, fwht, krawtchouk, krawtchouk_recurrence,
                              naive_max_over_low_masks, nl_k_naive, nl_k_reduced, nl_restricted,
                              power2_lower_bounds, profile, recursive_lower_bounds,
                              reduced_correlations, reduced_masks, rotation_set_invariance_check,
                              slice_nl_map, upper_bound, weight2_proof_set)
from wpb.orbits import orbit_index, rotate

from conftest import random_function


def brute_nl(f, E):
    """min over all affine l of #{x in E : f(x) != l(x)}, literally."""
    best = len(E)
    for a in range(1 << f.n):
        d = sum(int(f.table[x]) != inner_product(a, x) for x in E)
        best = min(best, d, len(E) - d)
    return best


def test_fwht_matches_definition():
    v = np.random.default_rng(0).integers(-3, 4, size=32)
    out = fwht(v)
    for a in range(32):
        assert out[a] == sum(v[x] * (-1) ** inner_product(a, x) for x in range(32))


@pytest.mark.parametrize("seed", range(3))
def test_nl_restricted_matches_brute(seed):
    f = random_function(6, seed)
    r = random.Random(seed)
    E = r.sample(range(64), 20)
    assert nl_restricted(f, E) == brute_nl(f, E)
    for k in range(7):
        assert nl_k_naive(f, k) == brute_nl(f, weight_slice(6, k).members.tolist())


def test_nl_restricted_examples():
    aff = BooleanFunction.from_callable(6, lambda t: inner_product(0b101101, t) ^ 1)
    assert nl_restricted(aff, [1, 5, 9, 33, 60]) == 0
    for seed in range(5):
        _, f = sample(8, seed)
        assert nl_restricted(f, weight_slice(8, 1).members) == 0
        assert nl_k_naive(f, 2) in (6, 9)
    with pytest.raises(ValueError):
        nl_restricted(aff, [])


@pytest.mark.parametrize("seed", range(10))
def test_reduced_matches_naive_n8(seed):
    _, f = sample(8, seed)
    for k in range(9):
        v = nl_k_naive(f, k)
        assert nl_k_reduced(f, k, "direct") == v
        assert nl_k_reduced(f, k, "krawtchouk") == v


def test_reduced_threads_agree():
    _, f = sample(16, 2)
    a = reduced_correlations(f, 5, threads=1)
    b = reduced_correlations(f, 5, threads=3, chunk=100)
    assert np.array_equal(a, b)


def test_reduced_requires_member():
    with pytest.raises(ValueError):
        nl_k_reduced(BooleanFunction.zero(8), 3)


@pytest.mark.parametrize("seed", range(4))
def test_mask_reduction_is_sound(seed):
    # the maximum over all 2^n masks is reached on masks of weight <= n/2 ...
    _, f = sample(8, seed)
    for k in range(1, 8):
        full, low = naive_max_over_low_masks(f, k)
        assert full == low
    # ... and rotating the mask leaves |correlation| unchanged for members
    E = weight_slice(8, 3).members
    sig = f.signs()[E]
    for a in range(256):
        c = int(sum(sig * (-1) ** np.array([inner_product(a, int(x)) for x in E])))
        c2 = int(sum(sig * (-1) ** np.array([inner_product(rotate(a, 1, 8), int(x)) for x in E])))
        assert abs(c) == abs(c2)


def test_reduced_masks():
    m = reduced_masks(8)
    assert all(1 <= bin(int(a)).count("1") <= 4 for a in m)
    assert len(m) == sum(len(orbit_index(8).by_weight[k]) for k in range(1, 5))


def test_zero_mask_correlation_vanishes():
    _, f = sample(8, 1)
    for k in range(1, 8):
        assert int(f.signs()[weight_slice(8, k).members].sum()) == 0


def test_krawtchouk_examples():
    for k in range(9):
        assert krawtchouk(k, 0, 8) == comb(8, k)
    assert krawtchouk(2, 1, 8) == 14
    t = KrawtchoukTable.build(10)
    for k in range(11):
        for i in range(11):
            assert t(k, i) == krawtchouk(k, i, 10) == krawtchouk_recurrence(k, i, 10)


def test_krawtchouk_slice_identity_n8():
    for k in range(9):
        E = weight_slice(8, k).members
        for a in range(256):
            s = sum((-1) ** inner_product(a, int(x)) for x in E)
            assert s == krawtchouk(k, bin(a).count("1"), 8)


def test_upper_bound_examples():
    assert [upper_bound(8, k) for k in (2, 3, 4)] == [11, 24, 30]
    assert upper_bound(16, 2) == 54 and upper_bound(16, 8) == 6378


@pytest.mark.parametrize("n", [4, 8, 12, 16, 20])
def test_upper_bound_matches_float_formula(n):
    for k in range(n + 1):
        m = comb(n, k)
        assert upper_bound(n, k) == floor(m / 2 - sqrt(m) / 2)


def test_recursive_lower_bounds_examples():
    lb = recursive_lower_bounds(16, {2: 9, 3: 22, 4: 27})
    assert {k: lb[k] for k in range(3, 9)} == {3: 144, 4: 472, 5: 1056, 6: 2184, 7: 1296, 8: 2184}
    assert lb[2] == 5
    with pytest.raises(ValueError):
        recursive_lower_bounds(16, {2: 9})


def test_power2_lower_bounds():
    assert power2_lower_bounds(8) == {4: 19}
    assert power2_lower_bounds(16) == {4: 5, 8: 19}


@pytest.mark.parametrize("n", [8, 16])
def test_weight2_proof_set_forces_nl5(n):
    E = weight2_proof_set(n)
    assert len(set(E)) == 22 and all(bin(x).count("1") == 2 for x in E)
    for seed in range(6):
        _, f = sample(n, seed)
        assert nl_restricted(f, E) >= 5


def test_rotation_set_invariance():
    # symmetric function
    f = BooleanFunction.from_callable(8, lambda t: bin(t).count("1") % 3 == 1)
    for j in range(8):
        assert rotation_set_invariance_check(f, [3, 77, 200, 14], j)
    r = random.Random(8)
    for trial in range(20):
        g = random_function(8, trial)
        j = r.randrange(1, 8)
        E = [x for x in r.sample(range(256), 40) if g.table[x] == g.table[rotate(x, j, 8)]][:20]
        if E:
            assert rotation_set_invariance_check(g, E, j)
    with pytest.raises(ValueError):
        rotation_set_invariance_check(BooleanFunction.from_callable(8, lambda t: t & 1), [1], 1)


def test_best_base8_profile():
    p = profile(best_base8())
    assert [p.nl[k] for k in range(1, 8)] == [0, 9, 22, 27, 22, 9, 0]
    assert p.within_bounds()
    assert p.to_dict()["schema"] == 1


def test_profile_paths_agree():
    _, f = sample(8, 13)
    assert profile(f, reduced=True).nl == profile(f, reduced=False).nl
    assert profile(f).path == "reduced"
    assert profile(random_function(8, 0)).path == "naive"


@pytest.mark.parametrize("seed", range(5))
def test_symmetry_of_profile(seed):
    _, f = sample(8, seed)
    g = complement_twin(f)
    for k in range(9):
        assert nl_k_naive(f, k) == nl_k_naive(g, 8 - k)


def test_slice_independence():
    _, f = sample(8, 7)
    before = profile(f).nl
    g = f
    from wpb.family import with_slice_bits
    g = with_slice_bits(f, 3, 0b0110011)
    after = profile(g).nl
    assert all(before[k] == after[k] for k in before if k != 3)


def test_slice_nl_map_guard():
    with pytest.raises(ValueError):
        slice_nl_map(16, 4)
