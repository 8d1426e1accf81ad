import math

import pytest

from pwlab.calibration import DEFAULT_CALIBRATION, calibrate, max_omega_over_bump_ratio
from pwlab.geometry import GeometryError, disc_containment_check


class TestFrozenBlock:
    def test_inner_radius_from_pyramid_formula(self):
        cal = DEFAULT_CALIBRATION
        assert abs(cal.bump_c1 - cal.containment_c / math.sqrt(2)) < 1e-15

    def test_ceiling_covers_sweep(self):
        cal = DEFAULT_CALIBRATION
        ratio = max_omega_over_bump_ratio(cal.containment_c, cal.bump_c1,
                                          (0.4, 0.3, 0.2, 0.15, 0.1, 0.07, 0.05))
        assert ratio <= cal.omega_c2

    def test_regime_boundary(self):
        # the containment degrades exactly at the lens-corner threshold
        cal = DEFAULT_CALIBRATION
        assert cal.containment_c < 1.0 / (4.0 + cal.eps0 ** 2) + 1e-3
        assert disc_containment_check(cal.containment_c, 0.35, 100_000, seed=2) == 0


class TestCalibrateRun:
    def test_deterministic_and_consistent(self):
        a = calibrate()
        b = calibrate()
        assert a == b
        assert 0 < a.containment_c < 0.26
        assert abs(a.bump_c1 - a.containment_c / math.sqrt(2)) < 1e-15
        assert a.eps0 > 0.3
        assert disc_containment_check(a.containment_c, 0.1, 10 ** 5, seed=99) == 0
