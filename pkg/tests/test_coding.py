import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import optimize, stats

import markovsim as ms
from markovsim import coding


def test_identity_round_trip():
    bits = np.array([1, 0, 1, 1], np.uint8)
    assert np.array_equal(ms.encode(ms.Identity(), bits), bits)
    assert np.array_equal(ms.decode(ms.Identity(), bits), bits)


def test_repetition_encode_decode():
    assert ms.encode(ms.Repetition(3), [1, 0, 1]).tolist() == [1, 1, 1, 0, 0, 0, 1, 1, 1]
    assert ms.decode(ms.Repetition(3), [1, 1, 0]).tolist() == [1]
    assert ms.decode(ms.Repetition(3), [0, 1, 0, 1, 1, 1]).tolist() == [0, 1]
    with pytest.raises(ValueError):
        ms.Repetition(4)
    with pytest.raises(ValueError):
        ms.decode(ms.Repetition(3), [1, 1])


def test_rlc_encode_is_matrix_product():
    code = ms.RandomLinear(4, Fraction(1, 2), 3)
    G = np.random.default_rng(3).integers(0, 2, (4, 8), dtype=np.uint8)
    for word in range(16):
        info = np.array([(word >> (3 - t)) & 1 for t in range(4)], np.uint8)
        assert np.array_equal(ms.encode(code, info), (info @ G) % 2)


def test_rlc_codeword_length():
    assert ms.RandomLinear(4, Fraction(1, 2), 0).nc == 8
    assert ms.RandomLinear(5, Fraction(1, 3), 0).nc == 15
    assert ms.RandomLinear(5, Fraction(2, 3), 0).nc == 8  # ceil(15/2)


def test_rlc_round_trip_exhaustive():
    code = ms.RandomLinear(4, Fraction(1, 2), 3)
    for word in range(16):
        info = np.array([(word >> (3 - t)) & 1 for t in range(4)], np.uint8)
        assert np.array_equal(ms.decode(code, ms.encode(code, info)), info)


def test_rlc_corrects_single_flips():
    # seed 7 gives the (8,4) code minimum distance 3
    code = ms.RandomLinear(4, Fraction(1, 2), 7)
    for word in range(16):
        info = np.array([(word >> (3 - t)) & 1 for t in range(4)], np.uint8)
        cw = ms.encode(code, info)
        for pos in range(8):
            dented = cw.copy()
            dented[pos] ^= 1
            assert np.array_equal(ms.decode(code, dented), info)


def test_rlc_tie_breaks_to_smallest_info_word():
    # seed 1 draws G = [[1, 1]] for k=1, nc=2: received 01 is distance 1
    # from both codewords, so the all-zero info word must win
    code = ms.RandomLinear(1, Fraction(1, 2), 1)
    assert ms.encode(code, [1]).tolist() == [1, 1]
    assert ms.decode(code, np.array([0, 1], np.uint8)).tolist() == [0]


def test_rlc_info_block_cap():
    ms.RandomLinear(coding.ML_SEARCH_CAP, Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        ms.RandomLinear(coding.ML_SEARCH_CAP + 1, Fraction(1, 2), 0)


def test_rlc_needs_seed_before_use():
    with pytest.raises(ValueError):
        ms.encode(ms.RandomLinear(4, Fraction(1, 2), None), [0, 0, 0, 0])


def test_payload_split_accounting():
    code = ms.RandomLinear(4, Fraction(1, 2), 3)
    assert ms.coding.payload_blocks(code, 10) == [4, 4, 4]
    assert ms.coding.coded_length(code, 10) == 24
    assert ms.coding.payload_blocks(ms.Repetition(3), 10) == [10]
    assert ms.coding.coded_length(ms.Repetition(3), 10) == 30
    assert ms.coding.payload_blocks(ms.Identity(), 0) == []


def test_payload_round_trip_all_families():
    rng = np.random.default_rng(4)
    for code in (ms.Identity(), ms.Repetition(3), ms.RandomLinear(4, Fraction(1, 2), 3)):
        for length in (0, 1, 3, 4, 5, 17):
            bits = rng.integers(0, 2, length).astype(np.uint8)
            coded = ms.encode_payload(code, bits)
            assert coded.size == ms.coding.coded_length(code, length)
            assert np.array_equal(ms.decode_payload(code, coded, length), bits)


def test_repetition_reliability_matches_binomial_and_is_monotone():
    rates = {}
    for r in (3, 5, 7):
        code = ms.Repetition(r)
        ch = ms.ChannelPair(0.1, 50 + r)
        led = ms.UsageLedger()
        bits = np.random.default_rng(1).integers(0, 2, 20_000).astype(np.uint8)
        out = ms.decode_payload(
            code, ch.transmit(ms.Direction.A_TO_B, ms.encode_payload(code, bits), led), bits.size
        )
        rates[r] = float(np.mean(out != bits))
        oracle = 1 - stats.binom.cdf(r // 2, r, 0.1)
        assert abs(rates[r] - oracle) < 3 * math.sqrt(oracle * (1 - oracle) / 20_000)
    assert rates[3] > rates[5] > rates[7]


def test_rlc_reliability_improves_with_block_length():
    # fixed rate 1/2, eps 0.08: longer random codes decode better
    def block_err(k, seed):
        rng = np.random.default_rng(seed)
        ch = ms.ChannelPair(0.08, seed)
        led = ms.UsageLedger()
        fails = 0
        trials = 3000
        for _ in range(trials):
            c = ms.RandomLinear(k, Fraction(1, 2), int(rng.integers(1 << 32)))
            info = rng.integers(0, 2, k).astype(np.uint8)
            out = ms.decode(c, ch.transmit(ms.Direction.A_TO_B, ms.encode(c, info), led))
            fails += not np.array_equal(out, info)
        return fails / trials

    p4 = block_err(4, 21)
    p12 = block_err(12, 22)
    sigma = math.sqrt(p4 * (1 - p4) / 3000 + p12 * (1 - p12) / 3000)
    assert p12 <= p4 + 3 * sigma


# ---------------------------------------------------------------------------
# exponents and bounds


def test_gallager_e0_values():
    assert ms.gallager_e0(0.0, 0.3) == 0.0
    assert ms.gallager_e0(1.0, 0.0) == 1.0
    want = 1 - 2 * math.log2(math.sqrt(0.05) + math.sqrt(0.95))
    assert ms.gallager_e0(1.0, 0.05) == pytest.approx(want, abs=1e-15)
    with pytest.raises(ValueError):
        ms.gallager_e0(1.5, 0.1)


def test_exponent_noiseless_is_one_minus_rate():
    assert ms.gallager_exponent(ms.ExponentQuery(0.0, 0.0)) == 1.0
    assert ms.gallager_exponent(ms.ExponentQuery(0.3, 0.0)) == pytest.approx(0.7)


def test_exponent_against_scipy_maximization():
    for eps in (0.01, 0.05, 0.1, 0.2, 0.3, 0.45):
        for rate in (0.0, 0.1, 0.3, 0.5, 0.7, 0.9):
            res = optimize.minimize_scalar(
                lambda rho: -(ms.gallager_e0(rho, eps) - rho * rate),
                bounds=(0, 1),
                method="bounded",
                options={"xatol": 1e-12},
            )
            want = max(0.0, -res.fun)
            got = ms.gallager_exponent(ms.ExponentQuery(rate, eps))
            assert got == pytest.approx(want, abs=1e-7)


def test_exponent_positive_below_capacity_zero_at_capacity():
    e1 = ms.gallager_exponent(ms.ExponentQuery(0.3, 0.05))
    e2 = ms.gallager_exponent(ms.ExponentQuery(0.5, 0.05))
    assert e1 > e2 > 0
    for eps in np.linspace(0.01, 0.49, 20):
        cap = ms.shannon_capacity(float(eps))
        assert abs(ms.gallager_exponent(ms.ExponentQuery(cap, float(eps)))) < 1e-6
        assert ms.gallager_exponent(ms.ExponentQuery(0.9 * cap, float(eps))) > 0


def test_exponent_query_validation():
    with pytest.raises(ValueError):
        ms.ExponentQuery(1.0, 0.1)
    with pytest.raises(ValueError):
        ms.ExponentQuery(0.5, 0.5)
    ms.ExponentQuery(0.0, 0.0)


def test_lemma1_bound_identities():
    # the bits-exponent base-2 form equals the nats form
    er = ms.gallager_exponent(ms.ExponentQuery(1 / 3, 0.05))
    got = ms.lemma1_bound(8, 64, Fraction(1, 3), 0.05)
    want = 8 * math.exp(-(64 / (1 / 3)) * er * math.log(2))
    assert got == pytest.approx(want, rel=1e-12)
    # single block, then linear in l below the clamp
    one = ms.lemma1_bound(1, 64, Fraction(1, 3), 0.05)
    assert ms.lemma1_bound(2, 64, Fraction(1, 3), 0.05) == pytest.approx(2 * one)


def test_lemma1_bound_monotone_in_block_length():
    vals = [ms.lemma1_bound(4, b, Fraction(1, 3), 0.1) for b in (8, 32, 128, 512)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert vals[-1] < 1e-12


def test_lemma1_bound_clamps_at_one():
    assert ms.lemma1_bound(10**9, 1, Fraction(1, 3), 0.05) == 1.0


def test_lemma1_bound_rejects_rates_at_capacity():
    with pytest.raises(ValueError):
        ms.lemma1_bound(1, 64, Fraction(1, 3), 0.4)  # 1/3 > 1 - h(0.4)
    with pytest.raises(ValueError):
        ms.lemma1_bound(1, 64, 1.0, 0.05)
    assert ms.lemma1_bound(1, 64, 1.0, 0.0) == 0.0  # noiseless carve-out


def test_union_bound_profile():
    assert ms.union_bound_profile([], Fraction(1, 3), 0.1) == 0.0
    assert ms.union_bound_profile([64, 64], Fraction(1, 3), 0.0) == 0.0
    same = ms.union_bound_profile([64] * 8, Fraction(1, 3), 0.05)
    assert same == pytest.approx(ms.lemma1_bound(8, 64, Fraction(1, 3), 0.05))
    mixed = ms.union_bound_profile([64, 128], Fraction(1, 3), 0.05)
    assert mixed == pytest.approx(
        ms.lemma1_bound(1, 64, Fraction(1, 3), 0.05)
        + ms.lemma1_bound(1, 128, Fraction(1, 3), 0.05)
    )


# ---------------------------------------------------------------------------
# spec strings


def test_parse_code_spec():
    assert ms.parse_code_spec("identity") == ms.Identity()
    assert ms.parse_code_spec("rep3") == ms.Repetition(3)
    assert ms.parse_code_spec("rep5") == ms.Repetition(5)
    code = ms.parse_code_spec("rlc:k=8,rate=1/2")
    assert code == ms.RandomLinear(8, Fraction(1, 2), None)
    assert ms.parse_code_spec("rlc:k=4,rate=0.25,seed=5") == ms.RandomLinear(
        4, Fraction(1, 4), 5
    )


@pytest.mark.parametrize(
    "text",
    ["rep4", "repx", "rlc:k=4", "rlc:rate=1/2", "rlc:k=4,rate=1/2,zz=3", "foo", "rlc:"],
)
def test_parse_code_spec_rejects(text):
    with pytest.raises(ValueError):
        ms.parse_code_spec(text)


def test_nominal_rate():
    assert ms.nominal_rate(ms.Identity()) == 1
    assert ms.nominal_rate(ms.Repetition(3)) == Fraction(1, 3)
    assert ms.nominal_rate(ms.RandomLinear(4, Fraction(2, 5), 0)) == Fraction(2, 5)
