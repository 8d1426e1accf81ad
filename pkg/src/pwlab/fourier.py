"""Midpoint tensor grids, smooth bump profiles, and Fourier synthesis.

Functions with compactly supported frequency data are synthesized as plain
trigonometric sums over midpoint grids; the spatial box for L1 norms grows by
doublings until the captured mass settles.  No windowing is needed because
every frequency function used here vanishes inside its grid box.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import czt

from .geometry import AffineImage, Ball, ConvexBody, GeometryError


class ConvergenceError(RuntimeError):
    """Raised when a truncation budget is exhausted before the tolerance."""


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Uniform midpoint grid on a box: nodes x_k = lower + (k + 1/2) h."""

    lower: np.ndarray
    upper: np.ndarray
    npts: tuple
    dim: int = field(init=False)

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        npts = tuple(int(m) for m in (self.npts if np.iterable(self.npts)
                                      else [self.npts] * lo.size))
        if lo.size != hi.size or len(npts) != lo.size:
            raise GeometryError("grid corner/count mismatch")
        if np.any(hi <= lo) or any(m < 1 for m in npts):
            raise GeometryError("grid box must be nondegenerate")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "npts", npts)
        object.__setattr__(self, "dim", lo.size)

    @property
    def spacing(self) -> np.ndarray:
        return (self.upper - self.lower) / np.array(self.npts, dtype=float)

    @property
    def weight(self) -> float:
        """Quadrature weight per node, prod of spacings."""
        return float(np.prod(self.spacing))

    def axis_nodes(self, i: int) -> np.ndarray:
        return self.lower[i] + (np.arange(self.npts[i]) + 0.5) * self.spacing[i]

    def nodes(self) -> np.ndarray:
        """All nodes as an (N, dim) array in row-major axis order."""
        grids = np.meshgrid(*[self.axis_nodes(i) for i in range(self.dim)],
                            indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)


@dataclass
class GridFunction:
    """Complex samples of a function on a GridSpec.

    side is 'frequency' or 'space'; frequency-side functions may declare the
    convex body supporting them, in which case values at nodes outside the
    body must vanish to 1e-14.
    """

    spec: GridSpec
    values: np.ndarray
    side: str = "frequency"
    support: ConvexBody | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != tuple(self.spec.npts):
            raise GeometryError(f"values shape {vals.shape} != grid {self.spec.npts}")
        if not np.all(np.isfinite(vals.view(float))):
            raise GeometryError("grid function has non-finite values")
        if self.side not in ("frequency", "space"):
            raise GeometryError("side must be 'frequency' or 'space'")
        self.values = vals
        if self.side == "frequency" and self.support is not None:
            outside = ~self.support.contains_batch(self.spec.nodes())
            if np.any(np.abs(vals.ravel()[outside]) > 1e-14):
                raise GeometryError("frequency data does not vanish outside its declared support")

    @classmethod
    def from_function(cls, spec: GridSpec, fn, side: str = "frequency",
                      support: ConvexBody | None = None) -> "GridFunction":
        vals = np.asarray(fn(spec.nodes()), dtype=complex).reshape(spec.npts)
        return cls(spec=spec, values=vals, side=side, support=support)

    def to_csv(self, path) -> None:
        """Debug dump: one row per node with coordinates, re, im."""
        nodes = self.spec.nodes()
        flat = self.values.ravel()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{i}" for i in range(self.spec.dim)] + ["re", "im"])
            for node, v in zip(nodes, flat):
                writer.writerow([repr(float(c)) for c in node] + [repr(v.real), repr(v.imag)])


# ---------------------------------------------------------------------------
# the canonical smooth bump
# ---------------------------------------------------------------------------

def smooth_step(u):
    """g(u)/(g(u)+g(1-u)) with g(s) = exp(-1/s) for s > 0: the standard
    C-infinity step, 0 for u <= 0 and 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    lowmask, highmask = u <= 0.0, u >= 1.0
    out[lowmask], out[highmask] = 0.0, 1.0
    mid = ~(lowmask | highmask)
    um = u[mid]
    with np.errstate(over="ignore"):
        g = np.exp(-1.0 / um)
        g1 = np.exp(-1.0 / (1.0 - um))
    out[mid] = g / (g + g1)
    return out


def bump_profile(rho):
    """Radial profile of the canonical bump: 1 on [0, 1/2], 0 on [1, inf),
    smooth-step transition in between; value 1/2 at rho = 3/4 by symmetry."""
    rho = np.abs(np.asarray(rho, dtype=float))
    return smooth_step(2.0 * (1.0 - rho))


def bump_hat(x) -> float:
    """The canonical frequency bump evaluated at a point of R^n."""
    x = np.asarray(x, dtype=float).reshape(-1)
    return float(bump_profile(np.linalg.norm(x)))


def bump_hat_batch(pts: np.ndarray, center=None, radius: float = 1.0) -> np.ndarray:
    """Vectorized bump supported on B(center, radius)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    c = np.zeros(pts.shape[1]) if center is None else np.asarray(center, dtype=float)
    return bump_profile(np.linalg.norm(pts - c, axis=1) / radius)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def quad_integral(fn, spec: GridSpec) -> float:
    """Midpoint-rule integral of a real integrand over the grid box.

    The sum runs through math.fsum, which is exact and therefore independent
    of summation order.
    """
    vals = np.asarray(fn(spec.nodes()), dtype=float).ravel()
    return math.fsum(vals) * spec.weight


# ---------------------------------------------------------------------------
# synthesis and L1 norms
# ---------------------------------------------------------------------------

def _axis_transform(F: np.ndarray, axis: int, xs: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Contract axis `axis` of F with the matrix exp(2 pi i t_j x_k).

    Both node sets are uniform, so the sum is a chirp z-transform; small
    contractions just build the matrix.
    """
    K, M = xs.size, ts.size
    if K * M <= 1 << 21:
        E = np.exp(2j * np.pi * np.outer(ts, xs))
        return np.moveaxis(np.tensordot(E, F, axes=(1, axis)), 0, axis)
    hx = xs[1] - xs[0] if K > 1 else 0.0
    dt = ts[1] - ts[0] if M > 1 else 0.0
    work = np.moveaxis(F, axis, 0)
    k = np.arange(K)
    pre = np.exp(2j * np.pi * ts[0] * (xs[0] + k * hx))
    work = work * pre.reshape((K,) + (1,) * (work.ndim - 1))
    # czt computes X[j] = sum_n x[n] a^{-n} w^{jn} along axis 0 here
    out = czt(work, m=M, w=np.exp(2j * np.pi * dt * hx), a=1.0, axis=0)
    post = np.exp(2j * np.pi * xs[0] * (ts - ts[0]))
    out = out * post.reshape((M,) + (1,) * (out.ndim - 1))
    return np.moveaxis(out, 0, axis)


def synthesize_on_grid(fhat: GridFunction, spatial: GridSpec) -> np.ndarray:
    """Evaluate f(t) = sum_k fhat(x_k) e^{+2 pi i <x_k, t>} h^n on a spatial grid.

    Separable: one uniform-node transform per axis, applied in turn.
    """
    if fhat.side != "frequency":
        raise GeometryError("synthesis needs frequency-side data")
    n = fhat.spec.dim
    if spatial.dim != n:
        raise GeometryError("spatial grid dimension mismatch")
    F = fhat.values * fhat.spec.weight
    for axis in range(n):
        F = _axis_transform(F, axis, fhat.spec.axis_nodes(axis),
                            spatial.axis_nodes(axis))
    return F


def synthesize_l1(fhat: GridFunction, box_halfwidth: float,
                  points_per_unit: float = 20.0, rel_tol: float = 0.005,
                  max_doublings: int = 4) -> tuple[float, float]:
    """L1 norm of the synthesized f over [-L, L]^n, L doubled until the
    increment falls below rel_tol of the accumulated mass.

    Returns (box integral, tail estimate); the tail estimate is the last
    increment.  Raises ConvergenceError if max_doublings is exhausted first.
    """
    n = fhat.spec.dim
    maxfreq = float(np.max(np.abs(np.concatenate([fhat.spec.lower, fhat.spec.upper]))))
    ppu = max(points_per_unit, 8.0 * max(maxfreq, 0.25))
    # the trig sum is periodic with period 1/spacing per axis; boxes beyond
    # the half period integrate alias copies instead of tails
    half_period = 0.5 / float(np.max(fhat.spec.spacing))
    L = float(box_halfwidth)
    prev = None
    for _ in range(max_doublings + 1):
        if L > half_period * (1.0 + 1e-9):
            raise ConvergenceError(
                f"spatial box {L:.3g} exceeds the alias half period {half_period:.3g}; "
                "refine the frequency grid")
        m = int(math.ceil(2 * L * ppu))
        spatial = GridSpec(lower=-L * np.ones(n), upper=L * np.ones(n), npts=(m,) * n)
        f = synthesize_on_grid(fhat, spatial)
        if not np.all(np.isfinite(f.real)) or not np.all(np.isfinite(f.imag)):
            raise ConvergenceError("synthesis produced non-finite values")
        total = float(np.sum(np.abs(f)) * spatial.weight)
        if prev is not None:
            increment = total - prev
            if increment < rel_tol * total:
                return total, max(increment, 0.0)
        prev = total
        L *= 2.0
    raise ConvergenceError(
        f"L1 box integral did not settle within {max_doublings} doublings "
        f"(last value {prev:.6g})")


def dilate_toward(fhat: GridFunction, z, r: float) -> GridFunction:
    """Frequency data of f_r, where fhat_r(x) = fhat((x - 2(1-r)z)/r).

    The grid maps affinely, so the samples are reused exactly; the spatial L1
    norm is invariant analytically.  Support contracts toward z: the new
    support is r * old + 2(1-r) z.
    """
    if not (0.0 < r < 1.0):
        raise GeometryError("dilation parameter must lie in (0, 1)")
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size != fhat.spec.dim:
        raise GeometryError("dilation center dimension mismatch")
    shift = 2.0 * (1.0 - r) * z
    spec = GridSpec(lower=r * fhat.spec.lower + shift,
                    upper=r * fhat.spec.upper + shift,
                    npts=fhat.spec.npts)
    support = fhat.support
    if isinstance(support, Ball):
        support = Ball(r * support.center + shift, r * support.radius)
    elif support is not None:
        support = AffineImage(base=support, matrix=r * np.eye(fhat.spec.dim),
                              shift=shift)
    return GridFunction(spec=spec, values=fhat.values.copy(), side="frequency",
                        support=support)
