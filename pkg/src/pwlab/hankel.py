"""Discretized Hankel operators with kernel phihat(x+y) on Omega x Omega.

The matrix A[i][j] = phihat(x_i + x_j) h^n over midpoint nodes strictly
inside Omega is the integral operator with piecewise-constant kernel, so its
singular values, Schatten norms and mixed norms discretize the continuum
quantities with the quadrature weight folded in once.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .fourier import GridSpec
from .geometry import Ball, ConvexBody, GeometryError
from .omega import OmegaEvaluator

SV_FLOOR_REL = 1e-12  # singular values below this times sigma_max count as zero


def schatten_norm(sv, p: float) -> float:
    """(sum sigma^p)^(1/p); p = inf gives the largest singular value."""
    if p < 1:
        raise GeometryError("Schatten exponent must satisfy p >= 1")
    sv = np.asarray(sv, dtype=float)
    if sv.size == 0:
        return 0.0
    if math.isinf(p):
        return float(sv.max())
    return float(np.sum(sv ** p) ** (1.0 / p))


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    return p / (p - 1.0)


def grid_nodes_inside(body: ConvexBody, spacing: float) -> tuple[np.ndarray, GridSpec]:
    """Midpoint nodes of the bounding-box grid that lie strictly inside Omega."""
    lo, hi = body.bounding_box()
    npts = tuple(int(math.ceil((hi[i] - lo[i]) / spacing)) for i in range(body.dim))
    spec = GridSpec(lower=lo, upper=lo + spacing * np.array(npts), npts=npts)
    nodes = spec.nodes()
    return nodes[body.contains_batch(nodes)], spec


def singular_values(A: np.ndarray) -> np.ndarray:
    """Nonincreasing singular values; real symmetric matrices go through a
    single Hermitian eigendecomposition, everything else through A^H A."""
    real = np.isrealobj(A) or np.allclose(A.imag, 0.0)
    if real and np.allclose(A, A.T):
        sv = np.abs(np.linalg.eigvalsh(np.real(A)))
    else:
        gram = A.conj().T @ A
        sv = np.sqrt(np.clip(np.linalg.eigvalsh(gram), 0.0, None))
    return np.sort(sv)[::-1]


@dataclass
class HankelMatrix:
    """Kernel matrix of a Hankel operator on PW(Omega), with cached spectrum."""

    body: ConvexBody
    nodes: np.ndarray
    spacing: float
    matrix: np.ndarray
    _sv: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def build(cls, body: ConvexBody, spacing: float, symbol,
              nodes: np.ndarray | None = None) -> "HankelMatrix":
        """Assemble A[i][j] = symbol(x_i + x_j) * spacing^dim.

        symbol is a callable mapping an (m, dim) array of frequency points to
        complex values; restricting `nodes` to a sub-cloud of the grid keeps
        only the rows/columns where the kernel can be nonzero.
        """
        if nodes is None:
            nodes, _ = grid_nodes_inside(body, spacing)
        m = nodes.shape[0]
        weight = spacing ** body.dim
        A = np.empty((m, m), dtype=complex)
        chunk = max(1, int(2e6 // max(m, 1)))
        for start in range(0, m, chunk):
            block = nodes[start:start + chunk, None, :] + nodes[None, :, :]
            vals = np.asarray(symbol(block.reshape(-1, body.dim)), dtype=complex)
            A[start:start + chunk] = vals.reshape(-1, m) * weight
        if np.allclose(A.imag, 0.0):
            A = A.real.astype(float)
        return cls(body=body, nodes=nodes, spacing=spacing, matrix=A)

    @property
    def singular_values(self) -> np.ndarray:
        if self._sv is None:
            self._sv = singular_values(self.matrix)
        return self._sv

    def significant_singular_values(self) -> np.ndarray:
        sv = self.singular_values
        if sv.size == 0 or sv[0] == 0.0:
            return sv[:0]
        return sv[sv > SV_FLOOR_REL * sv[0]]

    def schatten(self, p: float) -> float:
        return schatten_norm(self.singular_values, p)

    def dump_singular_values(self, path) -> None:
        """Binary dump: little-endian uint64 count, then float64 values."""
        sv = self.singular_values
        with open(path, "wb") as fh:
            fh.write(struct.pack("<Q", sv.size))
            fh.write(sv.astype("<f8").tobytes())


def load_singular_values(path) -> np.ndarray:
    with open(path, "rb") as fh:
        (count,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(8 * count), dtype="<f8")
    if data.size != count:
        raise GeometryError("truncated singular value dump")
    return data.copy()


# ---------------------------------------------------------------------------
# Hilbert-Schmidt identity
# ---------------------------------------------------------------------------

@dataclass
class HSCheck:
    frobenius: float
    integral: float
    rel_err: float


def hs_identity_check(body: ConvexBody, symbol, spacing: float,
                      integral_pts: int = 400) -> HSCheck:
    """Compare the discrete Frobenius norm with (int |phihat|^2 w)^(1/2).

    The Frobenius side never materializes the matrix: with x_i + x_j living
    on a shifted lattice, sum |A_ij|^2 equals h^{2n} sum_u |phihat(u)|^2 c(u)
    where c = mask * mask is the integer autocorrelation of the inside-node
    mask, computed by FFT and rounded back to integers.
    """
    lo, hi = body.bounding_box()
    n = body.dim
    npts = tuple(int(math.ceil((hi[i] - lo[i]) / spacing)) for i in range(n))
    spec = GridSpec(lower=lo, upper=lo + spacing * np.array(npts), npts=npts)
    nodes = spec.nodes()
    mask = body.contains_batch(nodes).reshape(spec.npts).astype(float)
    counts = np.rint(fftconvolve(mask, mask)).astype(np.int64)
    # node sums live at 2*lower + (k+l+1) h per axis, k+l = 0 .. 2K-2
    sum_axes = [2.0 * spec.lower[i] + (np.arange(2 * spec.npts[i] - 1) + 1.0) * spacing
                for i in range(n)]
    grids = np.meshgrid(*sum_axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    nz = counts.ravel() > 0
    vals = np.zeros(pts.shape[0])
    vals[nz] = np.abs(np.asarray(symbol(pts[nz]), dtype=complex)) ** 2
    frob = math.sqrt(float(np.sum(vals * counts.ravel())) * spacing ** (2 * n))

    ev = OmegaEvaluator(body)
    slo, shi = ev.support_box()
    ispec = GridSpec(lower=slo, upper=shi, npts=(integral_pts,) * n)
    ipts = ispec.nodes()
    w = ev.batch(ipts)
    f2 = np.abs(np.asarray(symbol(ipts), dtype=complex)) ** 2
    integral = math.sqrt(float(np.sum(f2 * w)) * ispec.weight)
    rel = abs(frob - integral) / integral if integral > 0 else float(frob > 0)
    return HSCheck(frobenius=frob, integral=integral, rel_err=rel)


# ---------------------------------------------------------------------------
# Russo's mixed-norm bound
# ---------------------------------------------------------------------------

@dataclass
class RussoCheck:
    lhs: float
    rhs_mixed: float
    rhs_continuum: float
    holds: bool


def russo_bound_check(body: ConvexBody, symbol, spacing: float, p: float,
                      integral_pts: int = 400, slack: float = 1e-9) -> RussoCheck:
    """Check ||H||_{S^p} <= ||kernel||_{p',p} <= ||phihat w^{1/p}||_{p'} discretely.

    The first inequality holds exactly for the discretized operator (the
    matrix is an integral operator with piecewise-constant kernel); the
    second is the continuum bound evaluated by quadrature with exact w.
    Requires p > 2.
    """
    if p <= 2:
        raise GeometryError("the mixed-norm bound needs p > 2")
    pc = conjugate_exponent(p)
    H = HankelMatrix.build(body, spacing, symbol)
    lhs = H.schatten(p)
    n = body.dim
    weight = spacing ** n
    kernel_abs = np.abs(H.matrix) / weight
    inner = np.sum(kernel_abs ** pc, axis=0) * weight        # over x, per y
    rhs_mixed = float(np.sum(inner ** (p / pc)) * weight) ** (1.0 / p)

    ev = OmegaEvaluator(body)
    slo, shi = ev.support_box()
    ispec = GridSpec(lower=slo, upper=shi, npts=(integral_pts,) * n)
    ipts = ispec.nodes()
    w = ev.batch(ipts)
    f = np.abs(np.asarray(symbol(ipts), dtype=complex))
    rhs_cont = float(np.sum(f ** pc * w ** (pc / p)) * ispec.weight) ** (1.0 / pc)
    holds = lhs <= min(rhs_mixed, rhs_cont) * (1.0 + slack)
    return RussoCheck(lhs=lhs, rhs_mixed=rhs_mixed, rhs_continuum=rhs_cont, holds=holds)


# ---------------------------------------------------------------------------
# orthogonal sums for symbols with disjoint interaction regions
# ---------------------------------------------------------------------------

def interaction_nodes(body: ConvexBody, support: Ball, nodes: np.ndarray) -> np.ndarray:
    """Nodes of Omega inside D = Omega cap (supp - Omega), the region where
    kernel rows can be nonzero.  Exact for ball bodies, conservative otherwise."""
    if isinstance(body, Ball):
        reach = body.radius + support.radius
        mask = np.linalg.norm(nodes - (support.center - body.center), axis=1) < reach
        return nodes[mask]
    return nodes


def sample_interaction_region(body: ConvexBody, support: Ball, count: int,
                              rng: np.random.Generator) -> np.ndarray:
    """Draw points of D = Omega cap (supp - Omega) by the Minkowski recipe:
    z = w - v with w in supp, v in Omega, accepted when z lands in Omega."""
    lo, hi = body.bounding_box()
    out = []
    need = count
    while need > 0:
        m = 4 * need
        dirs = rng.normal(size=(m, body.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = support.radius * rng.uniform(0.0, 1.0, size=m) ** (1.0 / body.dim)
        w = support.center + dirs * radii[:, None]
        v = rng.uniform(lo, hi, size=(m, body.dim))
        ok = body.contains_batch(v)
        z = w[ok] - v[ok]
        z = z[body.contains_batch(z)]
        out.append(z[:need])
        need -= min(need, z.shape[0])
    return np.concatenate(out)


def in_interaction_region(body: ConvexBody, support: Ball, pts: np.ndarray,
                          probes: np.ndarray | None = None) -> np.ndarray:
    """Membership of points in D = Omega cap (supp - Omega); exact for balls."""
    pts = np.atleast_2d(pts)
    inside = body.contains_batch(pts)
    if isinstance(body, Ball):
        reach = body.radius + support.radius
        near = np.linalg.norm(pts - (support.center - body.center), axis=1) < reach
        return inside & near
    if probes is None:
        raise GeometryError("need probe points of the support for non-ball bodies")
    hit = np.zeros(pts.shape[0], dtype=bool)
    for w in probes:
        hit |= body.contains_batch(w - pts)
    return inside & hit


@dataclass
class OrthoCheck:
    ok: bool
    max_rel_dev: float
    block_sizes: list


def check_disjoint_interactions(body: ConvexBody, supports: list[Ball],
                                samples_per_pair: int = 10_000, seed: int = 0) -> None:
    """Raise unless the D regions are pairwise disjoint on sampled points."""
    rng = np.random.default_rng(seed)
    for i in range(len(supports)):
        for j in range(len(supports)):
            if i == j:
                continue
            pts = sample_interaction_region(body, supports[i], samples_per_pair, rng)
            hits = in_interaction_region(body, supports[j], pts)
            if np.any(hits):
                raise GeometryError(
                    f"interaction regions {i} and {j} overlap "
                    f"({int(np.count_nonzero(hits))} of {samples_per_pair} sampled points)")


def orthogonal_sum_check(body: ConvexBody, symbols: list, supports: list[Ball],
                         spacing: float, rel_tol: float = 1e-6,
                         samples_per_pair: int = 10_000, seed: int = 0) -> OrthoCheck:
    """Singular values of H_{sum phi_i} must equal the sorted multiset union
    of the individual spectra when the interaction regions are disjoint.

    All operators are assembled on the same node cloud, restricted per symbol
    to its interaction region; entries below SV_FLOOR_REL * sigma_max are
    ignored in the comparison.
    """
    check_disjoint_interactions(body, supports, samples_per_pair, seed)
    nodes, _ = grid_nodes_inside(body, spacing)
    union_mask = np.zeros(nodes.shape[0], dtype=bool)
    block_nodes = []
    for supp in supports:
        if isinstance(body, Ball):
            reach = body.radius + supp.radius
            mask = np.linalg.norm(nodes - (supp.center - body.center), axis=1) < reach
        else:
            mask = np.ones(nodes.shape[0], dtype=bool)
        union_mask |= mask
        block_nodes.append(nodes[mask])

    def total_symbol(pts):
        return sum(np.asarray(s(pts), dtype=complex) for s in symbols)

    H_all = HankelMatrix.build(body, spacing, total_symbol, nodes=nodes[union_mask])
    sv_all = H_all.significant_singular_values()
    parts = []
    sizes = []
    for sym, bn in zip(symbols, block_nodes):
        Hi = HankelMatrix.build(body, spacing, sym, nodes=bn)
        parts.append(Hi.significant_singular_values())
        sizes.append(bn.shape[0])
    sv_union = np.sort(np.concatenate(parts))[::-1]
    k = min(sv_all.size, sv_union.size)
    pad = max(sv_all.size, sv_union.size)
    a = np.zeros(pad)
    b = np.zeros(pad)
    a[:sv_all.size] = sv_all
    b[:sv_union.size] = sv_union
    scale = max(a[0], b[0], np.finfo(float).tiny)
    dev = float(np.max(np.abs(a - b)) / scale)
    return OrthoCheck(ok=dev <= rel_tol, max_rel_dev=dev,
                      block_sizes=sizes + [int(np.count_nonzero(union_mask))])


# ---------------------------------------------------------------------------
# bounded-symbol estimate
# ---------------------------------------------------------------------------

def symbol_bound_check(body: ConvexBody, symbol, spacing: float,
                       spatial_sup: float, tol: float = 0.05) -> tuple[float, float, bool]:
    """sigma_max(A) <= (1 + tol) * sup|phi|: the discrete echo of the bound
    of operator norms by the symbol's sup norm.  spatial_sup is the sup of
    |phi| over a fine spatial grid, supplied by the caller."""
    H = HankelMatrix.build(body, spacing, symbol)
    sv = H.singular_values
    sigma = float(sv[0]) if sv.size else 0.0
    return sigma, spatial_sup, sigma <= (1.0 + tol) * spatial_sup