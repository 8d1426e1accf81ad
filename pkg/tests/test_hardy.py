import math

import numpy as np
import pytest

from pwlab.geometry import Ball, GeometryError, unit_box
from pwlab.hardy import (
    adjusted_integrability_report,
    canonical_bump_l1,
    corner_family_ratio,
    corner_family_sweep,
    extremal_halfline_pair,
    halfline_ratio,
    random_halfline_pair,
    tent_ratio,
)


class TestTentRatio:
    def test_one_dimensional(self):
        assert abs(tent_ratio(1) - 2.0) < 0.02

    def test_two_dimensional(self):
        assert abs(tent_ratio(2) - 4.0) < 0.04

    def test_d_zero(self):
        # int |fhat| = 1 per axis, so the ratio collapses to 1/||f||_1 per axis
        assert abs(tent_ratio(1, d=0.0) - 1.0) < 0.01

    def test_divergent_d(self):
        with pytest.raises(GeometryError):
            tent_ratio(1, d=2.0)


class TestHalflineRatio:
    def test_random_pairs_below_pi(self, rng):
        for _ in range(25):
            g, h = random_halfline_pair(rng)
            assert halfline_ratio(g, h, freq_points=g.size) <= math.pi * 1.02

    def test_single_bump_pair(self):
        from pwlab.fourier import bump_profile
        xs = (np.arange(400) + 0.5) / 400
        g = bump_profile((xs - 0.5) / 0.1).astype(complex)
        val = halfline_ratio(g, g, freq_points=400)
        assert 0 < val < math.pi

    def test_scaling_invariance(self, rng):
        g, h = random_halfline_pair(rng)
        a = halfline_ratio(g, h, freq_points=g.size)
        b = halfline_ratio(3.7 * g, h, freq_points=g.size)
        assert abs(a - b) < 1e-9 * a

    def test_extremal_reaches_two(self):
        g, h = extremal_halfline_pair()
        val = halfline_ratio(g, h, freq_points=g.size, box_halfwidth=64.0,
                             max_doublings=7)
        assert 2.0 <= val <= math.pi * 1.02


class TestCornerFamily:
    def test_d_one_constant_in_t(self):
        # exact scaling: substituting the doubled ball makes the d=1 ratio
        # independent of t on the square
        r1 = corner_family_ratio(1.0, 1e-1)
        r2 = corner_family_ratio(1.0, 1e-3)
        assert abs(r1 - r2) < 1e-6 * r1

    def test_slopes(self):
        assert abs(corner_family_sweep(1.5).slope + 0.5) < 0.02
        assert abs(corner_family_sweep(0.5).slope - 0.5) < 0.02
        assert corner_family_sweep(1.0).max_over_min <= 1.0 + 1e-9

    def test_t_out_of_range(self):
        with pytest.raises(GeometryError):
            corner_family_ratio(1.0, 1.5)

    def test_monotone_in_d_at_fixed_t(self):
        # on the unit-volume square w <= 1, so w^{-d} grows pointwise with d
        t = 1e-2
        vals = [corner_family_ratio(d, t) for d in (0.5, 0.8, 1.0, 1.3)]
        assert np.all(np.diff(vals) > 0)

    def test_bump_l1_cached(self):
        a = canonical_bump_l1()
        b = canonical_bump_l1()
        assert a == b and a > 0


class TestIntegrabilityReport:
    def test_square_verdicts(self):
        rows = adjusted_integrability_report(unit_box(2), [1.0, 1.5])
        verdicts = {r.d: r.verdict for r in rows}
        assert verdicts[1.0] == "holds-evidence"
        assert verdicts[1.5] == "fails-evidence"

    def test_ball_verdicts(self, disc):
        rows = adjusted_integrability_report(disc, [0.5, 0.8])
        verdicts = {r.d: r.verdict for r in rows}
        assert verdicts[0.5] == "holds-evidence"
        assert verdicts[0.8] == "inconclusive"
