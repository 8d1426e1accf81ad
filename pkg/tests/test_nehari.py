import math

import numpy as np
import pytest

from pwlab.calibration import DEFAULT_CALIBRATION
from pwlab.fourier import synthesize_l1
from pwlab.geometry import GeometryError
from pwlab.nehari import (
    BumpFamily,
    NehariConfig,
    build_bumps,
    check_interaction_disjointness,
    denominator_term,
    eq5_ratio,
    modulated_sum_l1,
    pack_boundary_disc,
    reference_bump_l2sq,
    sweep_and_fit,
)

CAL = DEFAULT_CALIBRATION


class TestPacking:
    def test_half_gives_five(self):
        # chord at N=6 is exactly 1.0, which fails the strict inequality
        assert pack_boundary_disc(0.5).shape[0] == 5

    def test_small_eps_count(self):
        assert pack_boundary_disc(0.05).shape[0] == 62

    def test_asymptotic_pi_over_eps(self):
        for eps in (0.02, 0.01):
            N = pack_boundary_disc(eps).shape[0]
            assert abs(N - math.pi / eps) <= 2

    def test_min_distance_strict(self):
        for eps in (0.4, 0.2, 0.1, 0.05):
            y = pack_boundary_disc(eps)
            d = np.linalg.norm(y[:, None] - y[None, :], axis=2)
            np.fill_diagonal(d, np.inf)
            assert d.min() > 2 * eps

    def test_eps_range(self):
        with pytest.raises(GeometryError):
            pack_boundary_disc(1.0)


class TestBumpFamily:
    def build(self, eps=0.2, K=33) -> BumpFamily:
        return build_bumps(pack_boundary_disc(eps), eps, CAL.containment_c,
                           CAL.bump_c1, local_grid_points=K)

    def test_center_value_one(self):
        fam = self.build()
        for i in (0, fam.count // 2):
            assert fam.symbol(i)(fam.freq_centers[i][None, :])[0] == 1.0

    def test_supports_disjoint_and_inside(self):
        fam = self.build()
        R = fam.support_radius
        reach = np.linalg.norm(fam.freq_centers, axis=1) + R
        assert np.all(reach < 2.0)
        d = np.linalg.norm(fam.freq_centers[:, None] - fam.freq_centers[None, :], axis=2)
        np.fill_diagonal(d, np.inf)
        assert d.min() > 2 * R

    def test_grid_resolves_bumps(self):
        fam = self.build(K=33)
        h = fam.offsets_axes[0][1] - fam.offsets_axes[0][0]
        assert fam.r > 2 * h

    def test_interaction_regions_disjoint(self):
        fam = self.build(eps=0.3)
        check_interaction_disjointness(fam, samples_per_pair=2000, seed=0)

    def test_overlapping_interactions_detected(self):
        # two copies of the same boundary point give identical D regions
        y = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(GeometryError):
            build_bumps(y, 0.2, CAL.containment_c, CAL.bump_c1)

    def test_calibration_violation_detected(self):
        with pytest.raises(GeometryError):
            build_bumps(pack_boundary_disc(0.3), 0.3, containment_c := 0.0001,
                        2.0)  # huge C1 pushes supports past 2 Omega


class TestTwoScaleIntegral:
    def test_single_bump_matches_synthesize_l1(self):
        cfg = NehariConfig(p=6.0)
        fam = build_bumps(pack_boundary_disc(0.4), 0.4, CAL.containment_c,
                          CAL.bump_c1, cfg.local_grid_points)
        two_scale, _ = modulated_sum_l1(fam, which=np.array([0]), seed=3)
        direct, _ = synthesize_l1(fam.grid_function(0), box_halfwidth=8.0 / fam.support_radius,
                                  points_per_unit=0.25 / fam.support_radius)
        assert abs(two_scale - direct) < 0.02 * direct

    def test_seed_determinism(self):
        cfg = NehariConfig(p=6.0)
        fam = build_bumps(pack_boundary_disc(0.4), 0.4, CAL.containment_c,
                          CAL.bump_c1, cfg.local_grid_points)
        a = modulated_sum_l1(fam, seed=5)
        b = modulated_sum_l1(fam, seed=5)
        assert a == b


class TestRatioRow:
    def test_row_properties(self):
        cfg = NehariConfig(p=6.0)
        row = eq5_ratio(cfg, 0.3)
        assert row.N == 10
        assert row.min_pair_distance > 2 * 0.3
        assert row.a_max <= CAL.omega_c2 * 0.3 ** 3
        assert row.psi_l1_tail <= 0.01 * row.psi_l1
        assert row.ratio > 0 and np.isfinite(row.ratio)

    def test_numerator_exact_scaling(self):
        cfg = NehariConfig(p=6.0)
        row = eq5_ratio(cfg, 0.3, check_disjointness=False)
        r = CAL.bump_c1 * 0.3 ** 2
        assert abs(row.numerator - row.N * (2 * r) ** 2 * reference_bump_l2sq()) < 1e-12

    def test_triangle_inequality(self):
        cfg = NehariConfig(p=6.0)
        fam = build_bumps(pack_boundary_disc(0.3), 0.3, CAL.containment_c,
                          CAL.bump_c1, cfg.local_grid_points)
        single, _ = modulated_sum_l1(fam, which=np.array([0]), seed=cfg.seed)
        row = eq5_ratio(cfg, 0.3, check_disjointness=False)
        assert row.psi_l1 <= row.N * single * 1.001

    def test_denominator_bound_by_sup(self):
        # || phihat w^(1/p) ||_{p'}^p <= a_max * (int phihat^{p'})^{p/p'}
        cfg = NehariConfig(p=6.0)
        fam = build_bumps(pack_boundary_disc(0.3), 0.3, CAL.containment_c,
                          CAL.bump_c1, cfg.local_grid_points)
        from pwlab.nehari import bump_sup_omega, reference_bump_power_integral
        term = denominator_term(fam, 6.0)
        pc = 1.2
        v = fam.support_radius ** 2 * reference_bump_power_integral(pc)
        assert term <= bump_sup_omega(fam) * v ** (6.0 / pc) * (1 + 1e-9)

    def test_grid_self_consistency(self):
        # the N=1 single-bump ratio reproduces within 1% across resolutions
        vals = []
        for K in (69, 99):
            cfg = NehariConfig(p=6.0, local_grid_points=K)
            fam = build_bumps(pack_boundary_disc(0.4), 0.4, CAL.containment_c,
                              CAL.bump_c1, K)
            l1, _ = modulated_sum_l1(fam, which=np.array([0]), seed=cfg.seed,
                                     cells=cfg.envelope_cells,
                                     samples_per_cell=cfg.envelope_samples)
            term = denominator_term(fam, 6.0, cfg.denominator_pts)
            num = fam.support_radius ** 2 * reference_bump_l2sq()
            vals.append(num / (l1 * term ** (1 / 6.0)))
        assert abs(vals[0] - vals[1]) < 0.01 * max(vals)


class TestSweep:
    def test_eps_outside_regime_rejected(self):
        with pytest.raises(GeometryError):
            NehariConfig(p=6.0, epsilons=(0.5, 0.3))

    def test_too_few_rows(self):
        with pytest.raises(GeometryError):
            sweep_and_fit(NehariConfig(p=6.0, epsilons=(0.4, 0.3, 0.2)),
                          check_disjointness=False)

    def test_short_sweep_slopes(self):
        eps = (0.4, 0.3, 0.2, 0.15)
        r6 = sweep_and_fit(NehariConfig(p=6.0, epsilons=eps), check_disjointness=False)
        r2 = sweep_and_fit(NehariConfig(p=2.0, epsilons=eps), check_disjointness=False)
        # the supercritical sweep must sit strictly above the p=2 one
        assert r6.slope > r2.slope
        doc = r6.as_dict()
        assert len(doc["rows"]) == 4
        assert "calibration" in doc
