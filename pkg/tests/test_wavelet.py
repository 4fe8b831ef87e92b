import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eegsig.wavelet import (band_map, db4_pair, dwt_level, dwt_multilevel,
                            idwt, pad_to_multiple, reconstruct_band,
                            reconstruct_subbands)


class TestFilterPair:
    def test_low_pass_sums_to_sqrt2(self):
        assert abs(db4_pair().low_pass.sum() - math.sqrt(2)) < 1e-10

    def test_unit_energy(self):
        pair = db4_pair()
        assert abs(np.dot(pair.low_pass, pair.low_pass) - 1) < 1e-10
        assert abs(np.dot(pair.high_pass, pair.high_pass) - 1) < 1e-10

    def test_even_shift_orthogonality(self):
        g = db4_pair().low_pass
        for m in (1, 2, 3):
            assert abs(np.dot(g[: 8 - 2 * m], g[2 * m :])) < 1e-10

    def test_high_pass_zero_dc(self):
        assert abs(db4_pair().high_pass.sum()) < 1e-10

    def test_mirror_relation(self):
        pair = db4_pair()
        for k in range(8):
            assert pair.high_pass[k] == pytest.approx(
                (-1) ** k * pair.low_pass[7 - k], abs=1e-15)


class TestSingleLevel:
    def test_zeros_stay_zero(self):
        a, d = dwt_level(np.zeros(16), db4_pair())
        assert np.max(np.abs(a)) == 0 and np.max(np.abs(d)) == 0

    def test_constant_signal(self):
        c = 3.25
        a, d = dwt_level(np.full(16, c), db4_pair())
        np.testing.assert_allclose(a, c * math.sqrt(2), atol=1e-10)
        assert np.max(np.abs(d)) < 1e-10

    def test_energy_conservation(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(64)
        a, d = dwt_level(x, db4_pair())
        total = np.sum(a ** 2) + np.sum(d ** 2)
        assert abs(total - np.sum(x ** 2)) / np.sum(x ** 2) < 1e-9

    def test_matches_direct_summation(self):
        # brute-force evaluation of the periodic analysis sums
        rng = np.random.default_rng(1)
        x = rng.standard_normal(32)
        pair = db4_pair()
        a, d = dwt_level(x, pair)
        n = len(x)
        for out, taps in ((a, pair.low_pass), (d, pair.high_pass)):
            for m in range(n // 2):
                direct = sum(taps[j] * x[(2 * m - j) % n] for j in range(8))
                assert out[m] == pytest.approx(direct, abs=1e-12)

    def test_rejects_odd_or_short_input(self):
        with pytest.raises(ValueError):
            dwt_level(np.zeros(15), db4_pair())
        with pytest.raises(ValueError):
            dwt_level(np.zeros(4), db4_pair())


class TestMultilevel:
    @pytest.mark.parametrize("n,levels", [(32, 1), (32, 3), (256, 1), (256, 3),
                                          (256, 5), (2528, 5)])
    def test_perfect_reconstruction(self, n, levels):
        rng = np.random.default_rng(n + levels)
        x = rng.standard_normal(n)
        d = dwt_multilevel(x, levels)
        assert np.max(np.abs(idwt(d) - x)) < 1e-8

    def test_impulse_round_trip(self):
        x = np.zeros(32)
        x[11] = 1.0
        d = dwt_multilevel(x, 2)
        assert np.max(np.abs(idwt(d) - x)) < 1e-9

    def test_one_level_equals_dwt_level(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(64)
        d = dwt_multilevel(x, 1)
        a, det = dwt_level(x, db4_pair())
        np.testing.assert_array_equal(d.approximation, a)
        np.testing.assert_array_equal(d.detail(1), det)

    def test_divisibility_enforced_and_padding_fixes_it(self):
        x = np.arange(2500, dtype=float)
        with pytest.raises(ValueError):
            dwt_multilevel(x, 5)
        padded, offset = pad_to_multiple(x, 32)
        assert len(padded) == 2528
        np.testing.assert_array_equal(padded[offset:offset + 2500], x)
        d = dwt_multilevel(padded, 5)
        assert len(d.approximation) == 79

    def test_all_zero_coefficients_give_zero_signal(self):
        d = dwt_multilevel(np.zeros(64), 3)
        assert np.max(np.abs(idwt(d))) == 0.0

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1), st.floats(-2, 2), st.floats(-2, 2))
    def test_linearity(self, seed, alpha, beta):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(64)
        y = rng.standard_normal(64)
        da = dwt_multilevel(alpha * x + beta * y, 3)
        dx = dwt_multilevel(x, 3)
        dy = dwt_multilevel(y, 3)
        combined = alpha * dx.approximation + beta * dy.approximation
        assert np.max(np.abs(da.approximation - combined)) < 1e-9 * max(
            1.0, np.max(np.abs(combined)))
        for j in (1, 2, 3):
            combined = alpha * dx.detail(j) + beta * dy.detail(j)
            assert np.max(np.abs(da.detail(j) - combined)) < 1e-9 * max(
                1.0, np.max(np.abs(combined)))


class TestBandMap:
    def test_reference_mapping_at_250hz(self):
        bands = {b.name: b for b in band_map(250.0, 5)}
        assert bands["delta"].subbands == ("A5",)
        assert bands["theta"].subbands == ("D5",)
        assert bands["alpha"].subbands == ("D4",)
        assert bands["beta"].subbands == ("D3",)
        assert bands["gamma"].subbands == ("D2",)
        assert bands["delta"].dyadic_high_hz == pytest.approx(3.90625)
        assert bands["gamma"].dyadic_low_hz == pytest.approx(31.25)

    def test_alpha_nominal_range(self):
        bands = {b.name: b for b in band_map(250.0, 5)}
        assert (bands["alpha"].nominal_low_hz, bands["alpha"].nominal_high_hz) == (8, 13)

    def test_single_level_cannot_separate(self):
        with pytest.raises(ValueError):
            band_map(250.0, 1)

    def test_mismatched_rate_rejected(self):
        # at 32 Hz the five bands cannot all line up with dyadic edges
        with pytest.raises(ValueError):
            band_map(32.0, 5)


class TestBandReconstruction:
    def test_band_partition_sums_to_original(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(2528)
        d = dwt_multilevel(x, 5, sample_rate_hz=250.0)
        total = np.zeros(2528)
        for band in band_map(250.0, 5):
            total += reconstruct_band(d, band)
        total += reconstruct_subbands(d, {"D1"})
        assert np.max(np.abs(total - x)) < 1e-8

    def test_pure_alpha_tone_lands_in_alpha(self):
        fs = 250.0
        t = np.arange(2500) / fs
        x = np.sin(2 * np.pi * 10 * t)
        padded, off = pad_to_multiple(x, 32)
        d = dwt_multilevel(padded, 5, sample_rate_hz=fs)
        bands = {b.name: b for b in band_map(fs, 5)}
        total = np.sum(x ** 2)
        alpha = reconstruct_band(d, bands["alpha"])[off:off + 2500]
        delta = reconstruct_band(d, bands["delta"])[off:off + 2500]
        assert np.sum(alpha ** 2) / total >= 0.80
        assert np.sum(delta ** 2) / total <= 0.05

    def test_slow_tone_survives_approximation_only(self):
        fs = 250.0
        t = np.arange(2500) / fs
        x = np.sin(2 * np.pi * 1 * t)
        padded, off = pad_to_multiple(x, 32)
        d = dwt_multilevel(padded, 5, sample_rate_hz=fs)
        rec = reconstruct_subbands(d, {"A5"})[off:off + 2500]
        assert np.sum(rec ** 2) / np.sum(x ** 2) > 0.90

    def test_zero_input_zero_band(self):
        d = dwt_multilevel(np.zeros(2528), 5, sample_rate_hz=250.0)
        band = band_map(250.0, 5)[2]
        assert np.max(np.abs(reconstruct_band(d, band))) == 0.0
