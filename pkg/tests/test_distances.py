"""Distance machinery tests; closed forms are always checked against direct
evaluation of d(x) = (x mod n)^2 + ((a*x^-1) mod n)^2."""
import math
import random

import pytest

from modhyp.distances import (
    MissingRoot,
    NoSquareRoot,
    NotApplicable,
    InfeasibleScale,
    branch_eval,
    classify_image,
    distance_profile,
    distance_value,
    divisor_pairs,
    gap_experiment,
    image_count_formula,
    intersection_direct,
    intersection_via_lattice,
    prime_distance_count,
    prime_power_image_report,
    sqrt_shift_data,
)
from modhyp.hyperbola import HyperbolaSpec
from modhyp.ntcore import PrimePower, legendre, primes_upto, sqrt_mod_prime


def test_distance_profile_examples():
    prof = distance_profile(HyperbolaSpec(1, 9))
    assert prof.distinct_count == 4
    assert sorted(prof.value_map) == [2, 29, 65, 128]
    assert distance_profile(HyperbolaSpec(4, 25)).distinct_count == 11
    assert distance_profile(HyperbolaSpec(2, 49)).distinct_count == 22


def test_distance_profile_structure():
    rng = random.Random(8)
    for n in (12, 27, 40, 121, 343):
        units = [a for a in range(1, n) if math.gcd(a, n) == 1]
        a = rng.choice(units)
        prof = distance_profile(HyperbolaSpec(a, n))
        assert prof.preimage_total == len(units)
        for u, xs in prof.value_map.items():
            for x in xs:
                assert distance_value(a, x, n) == u


def test_prime_distance_count():
    assert prime_distance_count(1, 5) == 3
    assert prime_distance_count(2, 5) == 2
    assert prime_distance_count(3, 7) == 3
    for p in primes_upto(101):
        if p == 2:
            continue
        for a in (1, 2, 3, 4, p - 1):
            if a % p == 0:
                continue
            want = prime_distance_count(a, p)
            got = distance_profile(HyperbolaSpec(a, p)).distinct_count
            assert want == got, (a, p)


def test_sqrt_shift_examples():
    d = sqrt_shift_data(1, 5)
    assert (d.root, d.root_shift, d.mirror_shift) == (1, 0, 3)
    d = sqrt_shift_data(4, 5)
    assert (d.root, d.root_shift, d.mirror_shift) == (2, 0, 3)
    assert (d.neg_root, d.neg_root_shift) == (1, 0)
    d = sqrt_shift_data(3, 5)
    assert d.root is None and d.neg_root is None


def test_sqrt_shift_defining_congruences():
    rng = random.Random(9)
    for p in [q for q in primes_upto(101) if q > 2]:
        for _ in range(5):
            a = rng.randrange(1, p * p)
            if a % p == 0:
                continue
            d = sqrt_shift_data(a, p)
            if d.root is not None:
                b, j = d.root, d.root_shift
                assert 0 < b < p / 2 and 0 <= j < p
                assert b * (b + j * p) % (p * p) == a % (p * p)
                assert d.mirror_shift == (p - j - 2 if j <= p - 2 else -1)
            if d.neg_root is not None:
                c, l = d.neg_root, d.neg_root_shift
                assert 0 < c < p / 2 and 0 <= l < p
                assert c * (p - c + l * p) % (p * p) == a % (p * p)


def test_branch_eval_examples():
    data = sqrt_shift_data(1, 5)
    assert branch_eval("root", 0, data) == 2
    assert distance_value(1, 1, 25) == 2
    assert branch_eval("root_wrap", 3, data) == 377
    assert distance_value(1, 16, 25) == 377
    with pytest.raises(MissingRoot):
        branch_eval("root", 0, sqrt_shift_data(3, 5))
    with pytest.raises(ValueError):
        branch_eval("bogus", 0, data)


def test_branch_consistency():
    # the four closed-form branches reproduce d along both progressions
    rng = random.Random(10)
    for p in [q for q in primes_upto(61) if q > 2]:
        residues = [a for a in range(1, p * p) if a % p != 0 and legendre(a, p) == 1]
        for a in {1, residues[rng.randrange(len(residues))], residues[-1]}:
            if legendre(a, p) != 1:
                continue
            data = sqrt_shift_data(a, p)
            b, j, k = data.root, data.root_shift, data.mirror_shift
            n = p * p
            for t in range(p):
                want = distance_value(a, b + t * p, n)
                got = branch_eval("root" if t <= j else "root_wrap", t, data)
                assert want == got, (a, p, t)
                want2 = distance_value(a, p - b + t * p, n)
                got2 = branch_eval("mirror" if t <= k else "mirror_wrap", t, data)
                assert want2 == got2, (a, p, t)


def test_classify_image_values():
    dec = classify_image(1, PrimePower(5, 2))
    assert (len(dec.b1_values), len(dec.b2_values), dec.generic_count) == (5, 5, 0)
    assert dec.intersection_count == 1
    assert dec.image_size == 10

    dec = classify_image(3, PrimePower(5, 2))
    assert not dec.b1_values and not dec.b2_values
    assert dec.image_size == 10  # phi(25)/2

    # (2/7) = +1 so the residue side is B1: 2p preimages, p+1 values here
    dec = classify_image(2, PrimePower(7, 2))
    assert dec.b1_preimage_count == 14
    assert len(dec.b1_values) == 8
    assert not dec.b2_values

    # (-3/7) = +1 gives the non-residue side: 2p preimages and exactly p values
    dec = classify_image(3, PrimePower(7, 2))
    assert dec.b2_preimage_count == 14
    assert len(dec.b2_values) == 7


def test_classification_partition_and_generic_preimages():
    # generic values have exactly two preimages; the classes are disjoint
    for p in (3, 5, 7, 11, 13):
        for a in (1, 2, 3):
            if a % p == 0:
                continue
            pp = PrimePower(p, 2)
            dec = classify_image(a, pp)
            assert len(dec.classification) == dec.image_size
            for u, tag in dec.classification.items():
                if tag == "A":
                    assert dec.preimage_counts[u] == 2, (a, p, u)
            if dec.b1_values:
                assert dec.b1_preimage_count == 2 * p
                assert legendre(a, p) == 1
            if dec.b2_values:
                assert dec.b2_preimage_count == 2 * p
                assert len(dec.b2_values) == p  # exact count at m = 2
                assert legendre(-a, p) == 1
            assert not dec.b1_values & dec.b2_values


def test_root_progression_image_sizes():
    # each root progression maps onto (p-1)/2 + 1 values at m = 2
    rng = random.Random(11)
    for p in [q for q in primes_upto(101) if q > 2]:
        choices = {1, 4}
        choices.update(rng.randrange(1, p * p) for _ in range(3))
        for a in choices:
            if a % p == 0 or legendre(a, p) != 1:
                continue
            b = sqrt_mod_prime(a, p)[0]
            n = p * p
            c1 = {distance_value(a, b + t * p, n) for t in range(p)}
            c2 = {distance_value(a, p - b + t * p, n) for t in range(p)}
            assert len(c1) == len(c2) == (p - 1) // 2 + 1, (a, p)


def test_negative_root_progressions_coincide():
    # when -a is a residue, d is injective on the progression and both
    # progressions give the same value set
    rng = random.Random(12)
    for p in [q for q in primes_upto(61) if q > 2]:
        for _ in range(4):
            a = rng.randrange(1, p * p)
            if a % p == 0 or legendre(-a, p) != 1:
                continue
            c = sqrt_mod_prime(-a, p)[0]
            n = p * p
            vals1 = [distance_value(a, c + t * p, n) for t in range(p)]
            vals2 = [distance_value(a, p - c + t * p, n) for t in range(p)]
            assert len(set(vals1)) == p  # injective
            assert set(vals1) == set(vals2)


def test_intersection_direct_examples():
    assert intersection_direct(1, 5) == 1
    assert intersection_direct(4, 5) == 0
    assert intersection_direct(1, 7) == 1
    with pytest.raises(NoSquareRoot):
        intersection_direct(3, 5)


def test_intersection_swap_root_invariance():
    # replacing the canonical root by its mirror swaps the progressions only
    rng = random.Random(13)
    for p in (5, 7, 11, 13, 29):
        for _ in range(6):
            a = rng.randrange(1, p * p)
            if a % p == 0 or legendre(a, p) != 1:
                continue
            b = sqrt_mod_prime(a, p)[0]
            n = p * p
            direct = intersection_direct(a, p)
            c1 = {distance_value(a, (p - b) + t * p, n) for t in range(p)}
            c2 = {distance_value(a, b + t * p, n) for t in range(p)}
            assert len(c1 & c2) == direct


def test_intersection_via_lattice_examples():
    lat = intersection_via_lattice(1, 5)
    assert lat.plain_wrap == () and len(lat.wrap_plain) == 1
    assert lat.pair_count == 1
    lat = intersection_via_lattice(4, 5)
    assert lat.pair_count == 0
    assert intersection_via_lattice(1, 7).pair_count == 1
    with pytest.raises(NoSquareRoot):
        intersection_via_lattice(3, 5)


def test_lattice_agrees_with_direct():
    for p in [q for q in primes_upto(31) if q > 2]:
        for a in range(1, p * p):
            if a % p == 0 or legendre(a, p) != 1:
                continue
            lat = intersection_via_lattice(a, p)
            assert lat.pair_count == intersection_direct(a, p), (a, p)
            if lat.divisor_pairs is not None:
                assert len(lat.divisor_pairs) == lat.pair_count


def test_divisor_pairs():
    assert divisor_pairs(1, 5) == [(-2, -1)]
    assert divisor_pairs(4, 5) == []
    pairs = divisor_pairs(9, 11)
    assert len(pairs) == 2 == intersection_direct(9, 11)
    with pytest.raises(NotApplicable):
        divisor_pairs(2, 7)  # root shift is 2
    with pytest.raises(NoSquareRoot):
        divisor_pairs(3, 5)


def test_image_count_formula_examples():
    assert image_count_formula(1, 5) == 10
    assert image_count_formula(4, 5) == 11
    assert image_count_formula(2, 5) == 10


def test_prime_power_image_report_cases():
    r = prime_power_image_report(2, PrimePower(3, 4))
    assert r.image_size == 27 and r.ok
    r = prime_power_image_report(3, PrimePower(7, 3))
    assert r.image_size == 147 and r.ok
    r = prime_power_image_report(1, PrimePower(3, 3))
    assert r.image_size == 10 and r.ok
    # denominator-4 variant only matches when both symbols are -1
    r = prime_power_image_report(1, PrimePower(5, 3))
    assert r.correction_half_ok and not r.correction_quarter_ok
    r = prime_power_image_report(2, PrimePower(5, 3))
    assert r.correction_half_ok and r.correction_quarter_ok


def test_gap_experiment():
    g1 = gap_experiment(1)
    assert (g1.a, g1.p, g1.pair_count, g1.cross_check) == (9, 11, 2, 2)
    assert g1.gap == 1
    assert g1.image_count == 54
    assert distance_profile(HyperbolaSpec(9, 121)).distinct_count == 54

    g2 = gap_experiment(2)
    assert (g2.a, g2.p, g2.pair_count) == (225, 227, 4)
    assert g2.ok

    with pytest.raises(InfeasibleScale):
        gap_experiment(20)
    with pytest.raises(InfeasibleScale):
        gap_experiment(4, bound=2**20)
