import math

import numpy as np
import pytest

from pwlab import hankel
from pwlab.fourier import bump_hat_batch
from pwlab.geometry import Ball, GeometryError, unit_box
from pwlab.hankel import (
    HankelMatrix,
    conjugate_exponent,
    hs_identity_check,
    load_singular_values,
    orthogonal_sum_check,
    russo_bound_check,
    schatten_norm,
    symbol_bound_check,
)


def centered_bump(center, radius):
    c = np.asarray(center, dtype=float)
    return lambda pts: bump_hat_batch(pts, center=c, radius=radius)


class TestSchattenNorm:
    def test_pythagoras(self):
        assert schatten_norm([3.0, 4.0], 2) == 5.0

    def test_identity_matrix(self):
        for p in (1, 2, 3, 7):
            assert abs(schatten_norm(np.ones(6), p) - 6 ** (1 / p)) < 1e-12

    def test_rank_one(self, rng):
        u = rng.normal(size=5)
        v = rng.normal(size=5)
        sv = np.linalg.svd(np.outer(u, v), compute_uv=False)
        expected = np.linalg.norm(u) * np.linalg.norm(v)
        for p in (1, 2, 4):
            assert abs(schatten_norm(sv[sv > 1e-12 * sv[0]], p) - expected) < 1e-9

    def test_monotone_in_p(self, rng):
        sv = np.sort(rng.uniform(0.1, 2, size=10))[::-1]
        vals = [schatten_norm(sv, p) for p in (1, 1.5, 2, 4, 16, math.inf)]
        assert np.all(np.diff(vals) <= 1e-12)

    def test_p_below_one_rejected(self):
        with pytest.raises(GeometryError):
            schatten_norm([1.0], 0.5)

    def test_conjugate(self):
        assert conjugate_exponent(2.0) == 2.0
        assert conjugate_exponent(1.0) == math.inf
        assert abs(conjugate_exponent(6.0) - 1.2) < 1e-15


class TestMatrixBuild:
    def test_symmetry(self, disc):
        H = HankelMatrix.build(disc, 0.2, centered_bump([0, 0], 0.8))
        assert np.allclose(H.matrix, H.matrix.T)

    def test_frobenius_matches_schatten_two(self, disc):
        H = HankelMatrix.build(disc, 0.12, centered_bump([0.2, 0.1], 0.7))
        frob2 = float(np.sum(np.abs(H.matrix) ** 2))
        assert abs(schatten_norm(H.singular_values, 2) ** 2 - frob2) <= 1e-8 * frob2

    def test_sv_dump_roundtrip(self, disc, tmp_path):
        H = HankelMatrix.build(disc, 0.25, centered_bump([0, 0], 0.8))
        path = tmp_path / "sv.bin"
        H.dump_singular_values(path)
        back = load_singular_values(path)
        assert np.array_equal(back, H.singular_values)

    def test_complex_symbol(self, disc):
        sym = lambda p: (1 + 0.5j) * bump_hat_batch(p, center=[0.1, 0.0], radius=0.6)
        H = HankelMatrix.build(disc, 0.2, sym)
        sv = H.singular_values
        assert np.all(sv >= 0) and np.all(np.diff(sv) <= 1e-14)


class TestHSIdentity:
    def test_base_accuracy_and_refinement(self, disc):
        sym = centered_bump([0, 0], 0.8)
        base = hs_identity_check(disc, sym, 0.05)
        half = hs_identity_check(disc, sym, 0.025)
        assert base.rel_err <= 0.02
        assert half.rel_err < base.rel_err

    def test_zero_symbol(self, disc):
        chk = hs_identity_check(disc, lambda p: np.zeros(len(p)), 0.2)
        assert chk.frobenius == 0.0 and chk.integral == 0.0

    def test_scaling_homogeneity(self, disc):
        sym = centered_bump([0.3, 0.0], 0.6)
        scaled = lambda p: 2.5 * sym(p)
        a = hs_identity_check(disc, sym, 0.1)
        b = hs_identity_check(disc, scaled, 0.1)
        assert abs(b.frobenius - 2.5 * a.frobenius) < 1e-9 * b.frobenius
        assert abs(b.integral - 2.5 * a.integral) < 1e-9 * b.integral

    def test_fft_path_equals_direct(self, disc):
        # the mask-autocorrelation Frobenius must equal the materialized matrix
        sym = centered_bump([0.2, -0.1], 0.7)
        spacing = 0.15
        H = HankelMatrix.build(disc, spacing, sym)
        direct = math.sqrt(float(np.sum(np.abs(H.matrix) ** 2)))
        chk = hs_identity_check(disc, sym, spacing)
        assert abs(chk.frobenius - direct) < 1e-10 * max(direct, 1.0)


class TestRussoBound:
    def test_random_symbols(self, disc, rng):
        for _ in range(5):
            c = rng.uniform(-0.5, 0.5, size=2)
            rad = rng.uniform(0.3, 0.8)
            for p in (3.0, 6.0):
                chk = russo_bound_check(disc, centered_bump(c, rad), 0.1, p)
                assert chk.holds
                assert chk.lhs <= chk.rhs_mixed * (1 + 1e-9)
                assert chk.rhs_mixed <= chk.rhs_continuum * (1 + 0.05)

    def test_constant_kernel_mixed_norm_is_one(self):
        sq = unit_box(2)
        H = HankelMatrix.build(sq, 0.05, lambda p: np.ones(len(p)))
        pc = conjugate_exponent(6.0)
        w = 0.05 ** 2
        inner = np.sum((np.abs(H.matrix) / w) ** pc, axis=0) * w
        mixed = float(np.sum(inner ** (6.0 / pc)) * w) ** (1 / 6.0)
        assert abs(mixed - 1.0) < 1e-12

    def test_zero_symbol(self, disc):
        chk = russo_bound_check(disc, lambda p: np.zeros(len(p)), 0.2, 4.0)
        assert chk.holds and chk.lhs == 0.0

    def test_p_at_most_two_rejected(self, disc):
        with pytest.raises(GeometryError):
            russo_bound_check(disc, centered_bump([0, 0], 0.5), 0.2, 2.0)


class TestOrthogonalSum:
    def test_antipodal_bumps_multiset(self, disc):
        r = 0.08
        c = np.array([0.9, 0.0])
        chk = orthogonal_sum_check(
            disc,
            [centered_bump(2 * c, 2 * r), centered_bump(-2 * c, 2 * r)],
            [Ball(2 * c, 2 * r), Ball(-2 * c, 2 * r)],
            spacing=0.03)
        assert chk.ok
        assert chk.max_rel_dev <= 1e-6

    def test_single_symbol_trivial(self, disc):
        r = 0.1
        c = np.array([0.8, 0.0])
        chk = orthogonal_sum_check(disc, [centered_bump(2 * c, 2 * r)],
                                   [Ball(2 * c, 2 * r)], spacing=0.04)
        assert chk.ok

    def test_overlapping_supports_rejected(self, disc):
        r = 0.1
        c = np.array([0.8, 0.0])
        with pytest.raises(GeometryError):
            orthogonal_sum_check(
                disc,
                [centered_bump(2 * c, 2 * r), centered_bump(2 * c, 2 * r)],
                [Ball(2 * c, 2 * r), Ball(2 * c, 2 * r)],
                spacing=0.04)


class TestSymbolBound:
    def test_bump_symbol(self, disc):
        # phihat >= 0 means sup|phi| = phi(0) = integral of phihat
        rad = 0.6
        sym = centered_bump([0.2, 0.1], rad)
        from pwlab.fourier import GridSpec, quad_integral
        spec = GridSpec(lower=[-2, -2], upper=[2, 2], npts=(400, 400))
        sup_phi = quad_integral(lambda p: sym(p).real if np.iscomplexobj(sym(p)) else sym(p), spec)
        sigma, sup, holds = symbol_bound_check(disc, sym, 0.08, sup_phi)
        assert holds
        assert sigma > 0

    def test_zero_symbol(self, disc):
        sigma, _, holds = symbol_bound_check(disc, lambda p: np.zeros(len(p)), 0.2, 0.0)
        assert holds and sigma == 0.0

    def test_scaling(self, disc):
        sym = centered_bump([0.0, 0.0], 0.5)
        s1, _, _ = symbol_bound_check(disc, sym, 0.1, 1.0)
        s2, _, _ = symbol_bound_check(disc, lambda p: 3.0 * sym(p), 0.1, 3.0)
        assert abs(s2 - 3 * s1) < 1e-9 * max(s2, 1.0)
