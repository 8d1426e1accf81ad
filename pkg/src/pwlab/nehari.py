"""The shrinking-bump counterexample machinery on the unit disc.

Boundary points are packed at mutual distance > 2 eps, bump symbols of radius
r = C1 eps^2 are planted at x_i = (1 - C eps^2) y_i, and the ratio

    sum_i ||phihat_i||_2^2  /  ( ||psi_N||_1 * (sum_i ||phihat_i w^(1/p)||_p'^p)^(1/p) )

is swept over eps.  Its growth in N for p above the critical exponent is the
finite-size echo of the failure of bounded-symbol extension; below it the
ratio decays.

Every discretized bump shares one local frequency grid translated to its
center 2 x_i, so the synthesized sum factors exactly as psi(t) = E(t) S(t)
with a common envelope E and the phase sum S(t) = sum_i e^{2 pi i <2 x_i, t>}.
The L1 norm is integrated by a two-scale rule: midpoint cells on the envelope
scale, seeded uniform samples inside each cell for the oscillatory |S|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import hankel
from .calibration import DEFAULT_CALIBRATION, CalibrationBlock
from .fourier import ConvergenceError, GridFunction, GridSpec, bump_profile
from .geometry import Ball, GeometryError
from .omega import disc_lens


@dataclass(frozen=True)
class NehariConfig:
    p: float
    epsilons: tuple = (0.4, 0.3, 0.2, 0.15, 0.1, 0.07, 0.05)
    calibration: CalibrationBlock = DEFAULT_CALIBRATION
    local_grid_points: int = 69
    support_pad: float = 1.05
    envelope_cells: int = 48
    envelope_samples: int = 32
    envelope_halfwidth: float = 8.0
    denominator_pts: int = 128
    seed: int = 7

    def __post_init__(self):
        if self.p < 1:
            raise GeometryError("Schatten exponent must satisfy p >= 1")
        bad = [e for e in self.epsilons if not (0 < e < self.calibration.eps0)]
        if bad:
            raise GeometryError(f"eps values {bad} outside the calibrated regime "
                                f"(eps0 = {self.calibration.eps0})")


def pack_boundary_disc(eps: float) -> np.ndarray:
    """Equally spaced unit vectors with neighbor chords strictly above 2 eps.

    Starts from floor(pi / arcsin(eps)) points and decrements until the chord
    2 sin(pi/N) clears 2 eps strictly.
    """
    if not (0 < eps < 1):
        raise GeometryError("packing needs eps in (0, 1)")
    N = int(math.floor(math.pi / math.asin(eps)))
    while N > 1 and 2.0 * math.sin(math.pi / N) <= 2.0 * eps:
        N -= 1
    angles = 2.0 * np.pi * np.arange(N) / N
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


@dataclass
class BumpFamily:
    """N translated copies of one local-grid bump, phihat_i(x) = phi((x-2x_i)/2r)."""

    eps: float
    r: float
    boundary_points: np.ndarray   # y_i on the unit circle
    centers: np.ndarray           # x_i = (1 - C eps^2) y_i
    freq_centers: np.ndarray      # 2 x_i
    offsets_axes: list            # local grid offsets, one 1-D array per axis
    values: np.ndarray            # bump samples on the offsets grid
    local_weight: float

    @property
    def count(self) -> int:
        return self.centers.shape[0]

    @property
    def support_radius(self) -> float:
        return 2.0 * self.r

    def supports(self) -> list[Ball]:
        return [Ball(c, self.support_radius) for c in self.freq_centers]

    def symbol(self, i: int):
        c, R = self.freq_centers[i], self.support_radius
        return lambda pts: bump_profile(np.linalg.norm(np.atleast_2d(pts) - c, axis=1) / R)

    def grid_function(self, i: int) -> GridFunction:
        half = self.offsets_axes[0][-1] + 0.5 * (self.offsets_axes[0][1] - self.offsets_axes[0][0])
        c = self.freq_centers[i]
        spec = GridSpec(lower=c - half, upper=c + half,
                        npts=(self.offsets_axes[0].size,) * c.size)
        return GridFunction(spec=spec, values=self.values.astype(complex),
                            side="frequency", support=Ball(c, self.support_radius))


def build_bumps(y_list: np.ndarray, eps: float, C: float, C1: float,
                local_grid_points: int = 33, support_pad: float = 1.05) -> BumpFamily:
    """Plant one bump per boundary point; raises if a support leaves 2 Omega
    or if two supports touch."""
    y = np.atleast_2d(np.asarray(y_list, dtype=float))
    r = C1 * eps * eps
    centers = (1.0 - C * eps * eps) * y
    freq_centers = 2.0 * centers
    R = 2.0 * r
    reach = np.linalg.norm(freq_centers, axis=1) + R
    if np.any(reach >= 2.0):
        raise GeometryError("bump support exits 2 Omega; calibration violated")
    if y.shape[0] > 1:
        diffs = freq_centers[:, None, :] - freq_centers[None, :, :]
        dist = np.linalg.norm(diffs, axis=2)
        np.fill_diagonal(dist, np.inf)
        if dist.min() <= 2.0 * R:
            raise GeometryError("bump supports overlap")
    K = local_grid_points
    half = support_pad * R
    h = 2.0 * half / K
    offsets = -half + (np.arange(K) + 0.5) * h
    grids = np.meshgrid(*([offsets] * y.shape[1]), indexing="ij")
    rho = np.sqrt(sum(g * g for g in grids)) / R
    values = bump_profile(rho)
    return BumpFamily(eps=eps, r=r, boundary_points=y, centers=centers,
                      freq_centers=freq_centers, offsets_axes=[offsets] * y.shape[1],
                      values=values, local_weight=h ** y.shape[1])


# ---------------------------------------------------------------------------
# two-scale L1 integration of the modulated bump sum
# ---------------------------------------------------------------------------

def _envelope_at(points: np.ndarray, family: BumpFamily) -> np.ndarray:
    """E(t) = sum_k v_k e^{2 pi i <xi_k, t>} * h^n at an (m, 2) array of t."""
    a1 = np.exp(2j * np.pi * np.outer(points[:, 0], family.offsets_axes[0]))
    a2 = np.exp(2j * np.pi * np.outer(points[:, 1], family.offsets_axes[1]))
    return np.einsum("pi,ij,pj->p", a1, family.values.astype(complex), a2,
                     optimize=True) * family.local_weight


def _phase_sum_at(points: np.ndarray, freq_centers: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * points @ freq_centers.T).sum(axis=1)


def modulated_sum_l1(family: BumpFamily, which: np.ndarray | None = None,
                     halfwidth_env: float = 8.0, cells: int = 48,
                     samples_per_cell: int = 16, seed: int = 7,
                     rel_tol: float = 0.005, max_doublings: int = 4) -> tuple[float, float]:
    """L1 norm of the synthesized psi = sum_i phi_i by stratified two-scale
    quadrature; returns (integral, tail estimate from the last doubling).

    The box halfwidth is measured in envelope units u = 2r t and doubled
    until the increment drops below rel_tol.  The discrete envelope is
    periodic with period K / pad in those units, so the box may never exceed
    the half period; a finer local grid buys more room.
    """
    centers = family.freq_centers if which is None else family.freq_centers[which]
    K = family.offsets_axes[0].size
    spacing_u = (family.offsets_axes[0][1] - family.offsets_axes[0][0]) / family.support_radius
    half_period = 0.5 / spacing_u
    if cells % 2:
        cells += 1
    rng = np.random.default_rng(seed)
    U = halfwidth_env
    total = 0.0
    for level in range(max_doublings + 1):
        if U > half_period * (1.0 + 1e-9):
            raise ConvergenceError(
                f"envelope box {U:.1f} exceeds the alias half period {half_period:.1f}; "
                f"increase local_grid_points (currently {K})")
        T = U / family.support_radius
        edges = np.linspace(-T, T, cells + 1)
        cell_w = edges[1] - edges[0]
        lo1, lo2 = np.meshgrid(edges[:-1], edges[:-1], indexing="ij")
        base = np.stack([lo1.ravel(), lo2.ravel()], axis=1)
        if level > 0:
            # only the shell outside the previous box; quarters align exactly
            inner = np.all((base >= -T / 2 - 1e-12 * T)
                           & (base + cell_w <= T / 2 + 1e-12 * T), axis=1)
            base = base[~inner]
        pts = (np.repeat(base, samples_per_cell, axis=0)
               + rng.uniform(0.0, cell_w, size=(base.shape[0] * samples_per_cell, 2)))
        vals = np.abs(_envelope_at(pts, family) * _phase_sum_at(pts, centers))
        piece = float(vals.mean() * base.shape[0] * cell_w ** 2)
        total += piece
        if level > 0 and piece < rel_tol * total:
            return total, piece
        U *= 2.0
    raise ConvergenceError(
        f"two-scale L1 did not settle within {max_doublings} doublings (last {total:.6g})")


# ---------------------------------------------------------------------------
# the Eq.-style ratio and the sweep
# ---------------------------------------------------------------------------

def reference_bump_l2sq() -> float:
    """||phi||_2^2 over the unit ball in the plane, 2 pi int_0^1 phi(s)^2 s ds."""
    val, _ = integrate.quad(lambda s: bump_profile(s) ** 2 * s, 0.0, 1.0,
                            epsabs=1e-13, epsrel=1e-12)
    return 2.0 * math.pi * val


def reference_bump_power_integral(power: float) -> float:
    """int_{B(0,1)} phi(|u|)^power du for the unit-scale bump."""
    val, _ = integrate.quad(lambda s: bump_profile(s) ** power * s, 0.0, 1.0,
                            epsabs=1e-13, epsrel=1e-12)
    return 2.0 * math.pi * val


def bump_sup_omega(family: BumpFamily) -> float:
    """Exact sup of the disc autocorrelation over a bump support: w is radial
    and decreasing, so the sup sits at the inner edge of the support ball."""
    smin = float(np.linalg.norm(family.freq_centers[0])) - family.support_radius
    return float(disc_lens(np.array([smin]))[0])


def denominator_term(family: BumpFamily, p: float, pts_per_axis: int = 128) -> float:
    """||phihat_1 w^(1/p)||_{p'}^p by midpoint quadrature on the local grid,
    with the closed-form disc autocorrelation as the weight."""
    pc = hankel.conjugate_exponent(p)
    K = pts_per_axis
    R = family.support_radius
    h = 2.0 / K
    u = -1.0 + (np.arange(K) + 0.5) * h
    g1, g2 = np.meshgrid(u, u, indexing="ij")
    rho = np.sqrt(g1 * g1 + g2 * g2)
    x = family.freq_centers[0][:, None, None] + R * np.stack([g1, g2])
    w = disc_lens(np.linalg.norm(x, axis=0))
    integrand = bump_profile(rho) ** pc * w ** (pc / p)
    inner = float(np.sum(integrand) * (R * h) ** 2)
    return inner ** (p / pc)


def sample_interaction_lens(family: BumpFamily, i: int, count: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Uniform points of D_i = {z : |z| < 1, |z - 2x_i| < 1 + 2r}.

    The lens is boxed exactly from the two-circle geometry (radial extent
    [s - R, 1], angular extent the circle crossing), so rejection stays
    cheap however small the bumps get."""
    s = float(np.linalg.norm(family.freq_centers[i]))
    R = 1.0 + family.support_radius
    cos_cross = np.clip((1.0 + s * s - R * R) / (2.0 * s), -1.0, 1.0)
    half_width = math.sqrt(max(1.0 - cos_cross * cos_cross, 0.0))
    x_lo, x_hi = s - R, 1.0
    e = family.freq_centers[i] / s
    perp = np.array([-e[1], e[0]])
    out = []
    need = count
    while need > 0:
        m = 4 * need
        xs = rng.uniform(x_lo, x_hi, size=m)
        ys = rng.uniform(-half_width, half_width, size=m)
        z = xs[:, None] * e + ys[:, None] * perp
        keep = (np.linalg.norm(z, axis=1) < 1.0) \
            & (np.linalg.norm(z - family.freq_centers[i], axis=1) < R)
        z = z[keep][:need]
        out.append(z)
        need -= z.shape[0]
    return np.concatenate(out)


def check_interaction_disjointness(family: BumpFamily, samples_per_pair: int = 10_000,
                                   seed: int = 0) -> None:
    """Sample each D_i = Omega cap (supp_i - Omega) and verify no point lands
    in any other D_j; membership is exact on the disc."""
    rng = np.random.default_rng(seed)
    reach = 1.0 + family.support_radius
    for i in range(family.count):
        pts = sample_interaction_lens(family, i, samples_per_pair, rng)
        d = np.linalg.norm(pts[:, None, :] - family.freq_centers[None, :, :], axis=2)
        hit = d < reach
        hit[:, i] = False
        if np.any(hit):
            j = int(np.argmax(hit.any(axis=0)))
            raise GeometryError(f"interaction regions {i} and {j} overlap on samples")


@dataclass
class SweepRow:
    eps: float
    N: int
    r: float
    numerator: float
    psi_l1: float
    psi_l1_tail: float
    schatten_proxy: float
    ratio: float
    a_max: float
    min_pair_distance: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("eps", "N", "r", "numerator", "psi_l1", "psi_l1_tail",
                 "schatten_proxy", "ratio", "a_max", "min_pair_distance")}


def eq5_ratio(config: NehariConfig, eps: float, check_disjointness: bool = True,
              max_tail_fraction: float = 0.01) -> SweepRow:
    """One row of the counterexample ratio at a given eps.

    The numerator uses the exact scaling ||phihat_i||_2^2 = (2r)^n ||phi||_2^2;
    the L1 norm comes from the two-scale integral of |E S|; the Schatten proxy
    is (N ||phihat_1 w^(1/p)||_{p'}^p)^(1/p) with all N terms equal by the
    rotational symmetry of the construction.
    """
    cal = config.calibration
    y = pack_boundary_disc(eps)
    family = build_bumps(y, eps, cal.containment_c, cal.bump_c1,
                         config.local_grid_points, config.support_pad)
    N = family.count
    if check_disjointness:
        check_interaction_disjointness(family, seed=config.seed)
    numerator = N * family.support_radius ** 2 * reference_bump_l2sq()
    psi_l1, tail = modulated_sum_l1(
        family, halfwidth_env=config.envelope_halfwidth, cells=config.envelope_cells,
        samples_per_cell=config.envelope_samples, seed=config.seed)
    if tail > max_tail_fraction * psi_l1:
        raise ConvergenceError("L1 tail estimate exceeds the error budget")
    term = denominator_term(family, config.p, config.denominator_pts)
    proxy = (N * term) ** (1.0 / config.p)
    a_max = bump_sup_omega(family)
    if a_max > cal.omega_c2 * eps ** 3:
        raise GeometryError("sup of w over a bump support exceeds the calibrated C2 eps^3")
    pc = hankel.conjugate_exponent(config.p)
    v_bump = family.support_radius ** 2 * reference_bump_power_integral(pc)
    bound_term = a_max * v_bump ** (config.p / pc)
    if term > bound_term * (1.0 + 1e-9):
        raise GeometryError("denominator term exceeds its analytic ceiling")
    dists = np.linalg.norm(y[:, None, :] - y[None, :, :], axis=2)
    np.fill_diagonal(dists, np.inf)
    ratio = numerator / (psi_l1 * proxy)
    return SweepRow(eps=eps, N=N, r=family.r, numerator=numerator, psi_l1=psi_l1,
                    psi_l1_tail=tail, schatten_proxy=proxy, ratio=ratio,
                    a_max=a_max, min_pair_distance=float(dists.min()))


@dataclass
class SweepReport:
    config: NehariConfig
    rows: list
    slope: float
    intercept: float
    orthogonality: hankel.OrthoCheck | None = None

    def as_dict(self) -> dict:
        doc = {
            "p": self.config.p,
            "epsilons": list(self.config.epsilons),
            "seed": self.config.seed,
            "calibration": self.config.calibration.as_dict(),
            "grid": {
                "local_grid_points": self.config.local_grid_points,
                "support_pad": self.config.support_pad,
                "envelope_cells": self.config.envelope_cells,
                "envelope_samples": self.config.envelope_samples,
                "envelope_halfwidth": self.config.envelope_halfwidth,
                "denominator_pts": self.config.denominator_pts,
            },
            "rows": [row.as_dict() for row in self.rows],
            "log_ratio_vs_log_N_slope": self.slope,
            "intercept": self.intercept,
        }
        if self.orthogonality is not None:
            doc["orthogonality_check"] = {
                "ok": self.orthogonality.ok,
                "max_rel_dev": self.orthogonality.max_rel_dev,
                "block_sizes": self.orthogonality.block_sizes,
            }
        return doc


def orthogonality_spot_check(config: NehariConfig, eps: float,
                             nodes_budget: int = 2200) -> hankel.OrthoCheck:
    """Delegate the orthogonal-sum law to the Hankel module for two antipodal
    bumps of the eps family, at a spacing sized to the node budget."""
    cal = config.calibration
    y = pack_boundary_disc(eps)
    family = build_bumps(y, eps, cal.containment_c, cal.bump_c1,
                         config.local_grid_points, config.support_pad)
    pick = np.array([0, family.count // 2])
    supports = [family.supports()[i] for i in pick]
    symbols = [family.symbol(i) for i in pick]
    body = Ball(np.zeros(2), 1.0)
    # interaction lenses sit inside B(y_i, eps); size the grid from their area
    lens_area = 2.0 * math.pi * eps * eps
    spacing = min(math.sqrt(lens_area / nodes_budget), family.r / 3.0)
    return hankel.orthogonal_sum_check(body, symbols, supports, spacing,
                                       seed=config.seed)


def sweep_and_fit(config: NehariConfig, check_disjointness: bool = True,
                  orthogonality_eps: float | None = None) -> SweepReport:
    """Run eq5_ratio over the eps list and fit log ratio against log N."""
    rows = []
    for eps in config.epsilons:
        rows.append(eq5_ratio(config, eps, check_disjointness=check_disjointness))
    if len(rows) < 4:
        raise GeometryError("need at least 4 sweep rows for a slope fit")
    logN = np.log([row.N for row in rows])
    logR = np.log([row.ratio for row in rows])
    slope, intercept = np.polyfit(logN, logR, 1)
    ortho = None
    if orthogonality_eps is not None:
        ortho = orthogonality_spot_check(config, orthogonality_eps)
    return SweepReport(config=config, rows=rows, slope=float(slope),
                       intercept=float(intercept), orthogonality=ortho)