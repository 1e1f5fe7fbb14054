import math

import numpy as np
import pytest

from caralab import (
    BoundConstants,
    preimage_moduli,
    verify_final_chain,
    verify_lower_bound_sweep,
    verify_one_over_e_products,
    verify_two_pi_limit,
    verify_upper_bound_sweep,
)
from caralab.sweeps import _suffix_threshold, lower_bound_quotient, tau


class TestBoundConstants:
    def test_values_for_R4(self):
        c = BoundConstants.for_radius(4.0)
        assert c.K_of_R == pytest.approx(6.0 * math.log(4.0), abs=1e-12)
        assert c.tau_limit == pytest.approx(-3.0 * math.log(4.0), abs=1e-12)

    @pytest.mark.parametrize("R", [1.5, 2.0, math.e, 10.0])
    def test_algebraic_identities(self, R):
        c = BoundConstants.for_radius(R)
        s = math.sqrt(R)
        assert c.K_of_R == pytest.approx(2.0 * (s + 1.0) / (s - 1.0) * math.log(R), abs=1e-12)
        assert c.tau_limit == pytest.approx(-(s + 1.0) * math.log(R), abs=1e-12)

    def test_rejects_degenerate_radius(self):
        with pytest.raises(ValueError):
            BoundConstants.for_radius(1.0)


class TestSuffixThreshold:
    def test_all_pass_gives_start(self):
        assert _suffix_threshold(np.array([True, True, True]), 5) == 5

    def test_last_violation_plus_one(self):
        assert _suffix_threshold(np.array([True, False, True, True]), 2) == 4

    def test_open_range_gives_none(self):
        assert _suffix_threshold(np.array([True, True, False]), 2) is None


class TestUpperBoundSweep:
    def test_threshold_is_four(self):
        res = verify_upper_bound_sweep(1000)
        assert res.passed
        assert res.threshold_found == 4
        assert res.worst_margin >= 0.0

    def test_threshold_matches_scalar_oracle(self):
        # Independent scalar re-derivation of the same suffix threshold.
        def holds(m):
            x = abs(
                (1 - complex(math.cos(math.pi / 2 - math.pi / m), math.sin(math.pi / 2 - math.pi / m)))
                / (1 + complex(math.cos(math.pi / 2 - math.pi / m), math.sin(math.pi / 2 - math.pi / m)))
            )
            return x <= 1 - 2 / (m + 1) + 1e-12 and (m + 1) * (1 - x * x) >= 4 - 1e-12

        flags = [holds(m) for m in range(2, 201)]
        oracle = next(
            p for p in range(2, 201) if all(flags[p - 2 :])
        )
        assert verify_upper_bound_sweep(200).threshold_found == oracle

    def test_minimality_is_reported(self):
        res = verify_upper_bound_sweep(1000)
        assert "threshold minimal" in res.notes

    def test_rejects_tiny_range(self):
        with pytest.raises(ValueError):
            verify_upper_bound_sweep(3)


class TestTwoPiLimit:
    def test_default_probe_passes(self):
        res = verify_two_pi_limit()
        assert res.passed
        assert "at m=1e4" in res.notes

    def test_ladder_samples_approach_two_pi(self):
        res = verify_two_pi_limit(100_000)
        devs = [abs(l - r) / r for _, l, r in res.samples[:3]]
        assert devs[0] > devs[1] > devs[2]

    def test_rejects_tiny_probe(self):
        with pytest.raises(ValueError):
            verify_two_pi_limit(5)


class TestLowerBoundSweep:
    @pytest.mark.parametrize(
        ("R", "expected_m2"), [(1.5, 3), (2.0, 3), (math.e, 3), (10.0, 4)]
    )
    def test_threshold_values(self, R, expected_m2):
        # The threshold also absorbs the tau floor, which kicks in later for
        # large R: tau(3) < -(3/2)(sqrt(R)+1) ln R once R is big enough.
        res = verify_lower_bound_sweep(R, 10_000)
        assert res.passed
        assert res.threshold_found == expected_m2
        assert res.worst_margin >= 0.0

    def test_quotient_positive_and_below_one(self):
        q = lower_bound_quotient(4.0, np.arange(3, 200))
        assert np.all(q > 0.0) and np.all(q < 1.0)

    def test_tau_limit_convergence(self):
        c = BoundConstants.for_radius(4.0)
        assert float(tau(4.0, 1e5)) == pytest.approx(c.tau_limit, rel=1e-2)
        assert float(tau(4.0, 1e8)) == pytest.approx(c.tau_limit, rel=1e-5)

    def test_rejects_tiny_range(self):
        with pytest.raises(ValueError):
            verify_lower_bound_sweep(4.0, 4)


class TestFinalChain:
    def test_R4_threshold_and_endpoint(self):
        res = verify_final_chain(4.0, 20)
        assert res.passed
        assert res.threshold_found == 4
        # e^{-K(4)} = 4^{-6} = 1/4096
        assert "e^-K=0.000244140625" in res.notes

    def test_right_endpoint_below_one_over_e(self):
        res = verify_final_chain(4.0, 12)
        for n, _, right in res.samples:
            assert right <= -1.0 + 1e-12  # log scale: (1-2^-n... ) <= 1/e

    def test_chain_links_match_direct_products(self):
        # Independent oracle: plain-float products over one small block.
        n = 5
        ms = np.arange(2 ** n, 2 ** (n + 1))
        mid_upper = float(np.prod(preimage_moduli(ms)))
        mid_lower = float(np.prod(lower_bound_quotient(4.0, ms)))
        K = BoundConstants.for_radius(4.0).K_of_R
        left = (1.0 - K / 2 ** n) ** (2 ** n)
        right = (1.0 - 2.0 / 2 ** (n + 1)) ** (2 ** n)
        assert left <= mid_lower <= mid_upper <= right

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            verify_final_chain(4.0, 0)
        with pytest.raises(ValueError):
            verify_final_chain(4.0, 25)


class TestOneOverEProducts:
    def test_threshold_is_one(self):
        res = verify_one_over_e_products(4.0, 12)
        assert res.passed
        assert res.threshold_found == 1
        assert res.worst_margin >= 0.0

    def test_block_products_match_direct_oracle(self):
        res = verify_one_over_e_products(4.0, 12)
        for n, prod, bound in res.samples:
            ms = np.arange(2 ** n, 2 ** (n + 1))
            assert prod == pytest.approx(float(np.prod(preimage_moduli(ms))), rel=1e-12)
            assert prod <= bound + 1e-12

    def test_first_block_vanishes_exactly(self):
        # The block n=1 contains m=2 and |x(2)| = 0.
        res = verify_one_over_e_products(4.0, 3)
        assert res.samples[0] == (1, 0.0, 1.0 / math.e)


class TestDeterminismAndSerialization:
    def test_repeated_sweeps_are_identical(self):
        a = verify_lower_bound_sweep(4.0, 5000).to_dict()
        b = verify_lower_bound_sweep(4.0, 5000).to_dict()
        assert a == b

    def test_to_dict_shape(self):
        d = verify_upper_bound_sweep(100).to_dict()
        assert set(d) == {
            "parameter_name",
            "range",
            "threshold_found",
            "worst_margin",
            "passed",
            "samples",
            "notes",
        }
        assert all(isinstance(row, list) and len(row) == 3 for row in d["samples"])
