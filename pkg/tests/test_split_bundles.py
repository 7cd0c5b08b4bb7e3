import random
from fractions import Fraction

import pytest

from resloci.split_bundles import (
    BinaryForm,
    BinaryFormPair,
    SplitBundle,
    build_pair,
    cross_check,
    gcd_degree,
    is_resonant_gcd,
    lambda_stratum,
    random_binary_form,
    sample_stratum,
    stratum,
    stratum_cone_dimension,
    sylvester_resultant,
    theta_d,
)
from resloci.wedge import is_resonant

X0 = BinaryForm.make(1, [1, 0])
X1 = BinaryForm.make(1, [0, 1])


def test_gcd_coprime_linear():
    assert gcd_degree(X0, X1) == 0


def test_gcd_shared_linear_factor():
    assert gcd_degree(BinaryForm.make(2, [1, 0, 0]), BinaryForm.make(2, [0, 1, 0])) == 1


def test_gcd_zero_conventions():
    q = BinaryForm.make(3, [1, 2, 3, 4])
    assert gcd_degree(BinaryForm.zero(2), q) == 3
    assert gcd_degree(q, BinaryForm.zero(5)) == 3
    with pytest.raises(ValueError):
        gcd_degree(BinaryForm.zero(1), BinaryForm.zero(2))


def test_gcd_constructed_factor():
    rng = random.Random(8)
    for _ in range(50):
        d = rng.randint(1, 3)
        f = random_binary_form(rng, d)
        while True:
            g1 = random_binary_form(rng, rng.randint(0, 2))
            g2 = random_binary_form(rng, rng.randint(0, 2))
            if sylvester_resultant(g1, g2) != 0:
                break
        assert gcd_degree(f.multiply(g1), f.multiply(g2)) == d


def test_resultant_vanishes_iff_shared_root():
    assert sylvester_resultant(X0, X1) != 0
    assert sylvester_resultant(BinaryForm.make(2, [1, 0, 0]), BinaryForm.make(2, [0, 1, 0])) == 0
    rng = random.Random(13)
    for a, b in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        bundle = SplitBundle(a, b)
        for k in range(500):
            if k % 2 == 0:
                s = sample_stratum(bundle, rng.choice(range(1, a + 1)), rng)
            else:
                h1 = random_binary_form(rng, a)
                h2 = random_binary_form(rng, b)
                s = BinaryFormPair(a, b, h1, h2)
            if s.h1.is_zero() or s.h2.is_zero():
                continue
            vanishes = sylvester_resultant(s.h1, s.h2) == 0
            assert vanishes == is_resonant_gcd(s)


def test_is_resonant_gcd_examples():
    assert is_resonant_gcd(BinaryFormPair(1, 1, X0, X0))
    assert not is_resonant_gcd(BinaryFormPair(1, 1, X0, X1))
    h2 = BinaryForm.make(2, [1, 1, 1])
    assert is_resonant_gcd(BinaryFormPair(1, 2, BinaryForm.zero(1), h2))


def test_stratum_values():
    x0sq = BinaryForm.make(2, [1, 0, 0])
    assert stratum(BinaryFormPair(2, 2, x0sq, x0sq)) == 2
    s = BinaryFormPair(2, 3, X0.multiply(X0), X0.multiply(BinaryForm.make(2, [0, 0, 1])))
    assert stratum(s) == 1
    assert stratum(BinaryFormPair(2, 3, BinaryForm.zero(2), random_binary_form(random.Random(1), 3))) == 3
    assert stratum(BinaryFormPair(2, 3, x0sq, BinaryForm.zero(3))) == 2
    assert stratum(BinaryFormPair(1, 1, X0, X1)) == 0


def test_lambda_stratum_diagonal_line():
    s1 = BinaryFormPair(1, 1, X0, X0)
    s2 = BinaryFormPair(1, 1, X1, X1)
    assert lambda_stratum(s1, s2) == 1


def test_lambda_stratum_saturated_conic_plane():
    x0sq = BinaryForm.make(2, [1, 0, 0])
    x0x1 = BinaryForm.make(2, [0, 1, 0])
    s1 = BinaryFormPair(2, 2, x0sq, x0sq)
    s2 = BinaryFormPair(2, 2, x0x1, x0x1)
    assert lambda_stratum(s1, s2) == 2


def test_lambda_stratum_refusals():
    s1 = BinaryFormPair(1, 1, X0, BinaryForm.zero(1))
    s2 = BinaryFormPair(1, 1, BinaryForm.zero(1), X1)
    with pytest.raises(ValueError):
        lambda_stratum(s1, s2)  # rank two
    with pytest.raises(ValueError):
        lambda_stratum(s1, s1)  # dependent


def test_build_pair_dimensions():
    p = build_pair(SplitBundle(1, 1))
    assert (p.n, p.dim_kperp) == (4, 3)
    p = build_pair(SplitBundle(2, 2))
    assert (p.n, p.dim_kperp) == (6, 10)
    p = build_pair(SplitBundle(1, 2))
    assert (p.n, p.dim_kperp) == (5, 6)


def test_theta_d_stratum():
    bundle = SplitBundle(2, 3)
    s = theta_d(bundle, 1, X0, X1, BinaryForm.make(2, [1, 0, 0]))
    assert s.h1.coeffs == (0, 1, 0) and stratum(s) == 1
    # shared factor between cofactors raises the stratum
    s2 = theta_d(bundle, 1, X0, X1, X1.multiply(X1))
    assert stratum(s2) > 1


def test_theta_b_unique_embedding():
    bundle = SplitBundle(2, 3)
    f = random_binary_form(random.Random(3), 3)
    s = theta_d(bundle, 3, f, None, BinaryForm.make(0, [1]))
    assert s.h1.is_zero() and stratum(s) == 3
    with pytest.raises(ValueError):
        theta_d(bundle, 3, f, X0, BinaryForm.make(0, [1]))


def test_sample_stratum_exact_degrees():
    rng = random.Random(5)
    bundle = SplitBundle(2, 3)
    for d in (1, 2, 3):
        for _ in range(20):
            s = sample_stratum(bundle, d, rng)
            assert stratum(s) == d
    with pytest.raises(ValueError):
        sample_stratum(bundle, 5, rng)
    with pytest.raises(ValueError):
        sample_stratum(SplitBundle(2, 4), 3, rng)


def test_stratum_chain_closure():
    rng = random.Random(19)
    bundle = SplitBundle(3, 4)
    for d in (1, 2, 3):
        for _ in range(20):
            s = sample_stratum(bundle, d, rng)
            assert gcd_degree(s.h1, s.h2) >= d


def test_strata_partition():
    rng = random.Random(29)
    bundle = SplitBundle(2, 4)
    allowed = {1, 2, 4}
    for _ in range(200):
        h1 = BinaryForm(2, tuple(Fraction(rng.randint(-5, 5)) for _ in range(3)))
        h2 = BinaryForm(4, tuple(Fraction(rng.randint(-5, 5)) for _ in range(5)))
        if h1.is_zero() and h2.is_zero():
            continue
        s = BinaryFormPair(2, 4, h1, h2)
        if is_resonant_gcd(s):
            assert stratum(s) in allowed
        else:
            assert stratum(s) == 0


def test_cone_dimension_examples():
    rng = random.Random(37)
    assert stratum_cone_dimension(SplitBundle(2, 3), 1, rng) == 6
    assert stratum_cone_dimension(SplitBundle(1, 1), 1, rng) == 3
    assert stratum_cone_dimension(SplitBundle(2, 2), 2, rng) == 4


def test_cross_check_small():
    rng = random.Random(43)
    for a, b in [(1, 1), (2, 2)]:
        rep = cross_check(SplitBundle(a, b), 100, rng)
        assert rep.all_agree
        assert rep.witness_consistent == rep.witness_checked


def test_lambda_stratum_components_both_occur():
    # both closure components of the (1,2) section show up: saturated
    # degree-one embeddings and the unique larger summand
    rng = random.Random(47)
    bundle = SplitBundle(1, 2)
    seen = set()
    for _ in range(50):
        d = rng.choice([1, 2])
        if d == 1:
            while True:
                g1 = random_binary_form(rng, 0)
                g2 = random_binary_form(rng, 1)
                if sylvester_resultant(g1, g2) != 0:
                    break
            s1 = theta_d(bundle, 1, X0, g1, g2)
            s2 = theta_d(bundle, 1, X1, g1, g2)
        else:
            q1 = random_binary_form(rng, 2)
            q2 = random_binary_form(rng, 2)
            s1 = BinaryFormPair(1, 2, BinaryForm.zero(1), q1)
            s2 = BinaryFormPair(1, 2, BinaryForm.zero(1), q2)
        try:
            seen.add(lambda_stratum(s1, s2))
        except ValueError:
            continue
    assert seen == {1, 2}


def test_witness_is_rank_one_mate():
    rng = random.Random(53)
    bundle = SplitBundle(2, 2)
    pair = build_pair(bundle)
    for _ in range(20):
        s = sample_stratum(bundle, rng.choice([1, 2]), rng)
        res, witness = is_resonant(s.coefficient_vector(), pair)
        assert res
        w1 = BinaryForm(2, tuple(witness[:3]))
        w2 = BinaryForm(2, tuple(witness[3:]))
        cross = s.h1.multiply(w2)
        other = w1.multiply(s.h2)
        assert all(x == y for x, y in zip(cross.coeffs, other.coeffs))
