"""Convex body representations and low-dimensional polytope machinery.

Bodies are immutable tagged values (ball, H-polytope, V-polytope, product,
affine image) with a strict-inequality membership oracle.  Polytope
combinatorics (vertex/facet enumeration, hulls, volumes) are brute force and
restricted to dimension <= 3; everything here is desk scale by design.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

# Shared tolerances: vertex dedup and active-set tests are absolute 1e-9,
# near-singular facet systems are rejected below 1e-12.
DEDUP_TOL = 1e-9
FEAS_TOL = 1e-9
DET_TOL = 1e-12


class GeometryError(ValueError):
    """Raised for dimension mismatches, unbounded or degenerate polytopes."""


def _as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size != dim:
        raise GeometryError(f"expected vector of length {dim}, got {v.size}")
    return v


# ---------------------------------------------------------------------------
# body variants
# ---------------------------------------------------------------------------

class ConvexBody:
    """Base class; concrete bodies implement strict membership and a box."""

    dim: int

    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized strict membership for an (m, dim) array of points."""
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) corners of an axis-aligned box containing the body."""
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float
    dim: int = field(init=False)

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "dim", c.size)
        if self.radius <= 0:
            raise GeometryError("ball radius must be positive")

    def contains(self, x) -> bool:
        x = _as_vector(x, self.dim)
        return float(np.linalg.norm(x - self.center)) < self.radius

    def contains_batch(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.linalg.norm(pts - self.center, axis=1) < self.radius

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius


@dataclass(frozen=True)
class HPolytope(ConvexBody):
    """Intersection of halfspaces {x : <a_i, x> <= b_i}; membership is strict."""

    normals: np.ndarray   # (m, dim)
    offsets: np.ndarray   # (m,)
    dim: int = field(init=False)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.normals, dtype=float))
        b = np.asarray(self.offsets, dtype=float).reshape(-1)
        if a.shape[0] != b.size:
            raise GeometryError("normals/offsets length mismatch")
        object.__setattr__(self, "normals", a)
        object.__setattr__(self, "offsets", b)
        object.__setattr__(self, "dim", a.shape[1])

    def contains(self, x) -> bool:
        x = _as_vector(x, self.dim)
        return bool(np.all(self.normals @ x < self.offsets))

    def contains_batch(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.all(pts @ self.normals.T < self.offsets, axis=1)

    def bounding_box(self):
        verts = vertex_enumerate(self, check_bounded=False)
        return verts.min(axis=0), verts.max(axis=0)


@dataclass(frozen=True)
class VPolytope(ConvexBody):
    vertices: np.ndarray  # (k, dim)
    dim: int = field(init=False)

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "dim", v.shape[1])

    def _hform(self) -> HPolytope:
        return to_hpolytope(self)

    def contains(self, x) -> bool:
        return self._hform().contains(x)

    def contains_batch(self, pts):
        return self._hform().contains_batch(pts)

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


@dataclass(frozen=True)
class Product(ConvexBody):
    factors: tuple
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "dim", sum(f.dim for f in self.factors))

    def _split(self, pts):
        out, k = [], 0
        for f in self.factors:
            out.append(pts[:, k:k + f.dim])
            k += f.dim
        return out

    def contains(self, x) -> bool:
        x = _as_vector(x, self.dim)
        return bool(self.contains_batch(x[None, :])[0])

    def contains_batch(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        ok = np.ones(pts.shape[0], dtype=bool)
        for f, block in zip(self.factors, self._split(pts)):
            ok &= f.contains_batch(block)
        return ok

    def bounding_box(self):
        los, his = zip(*(f.bounding_box() for f in self.factors))
        return np.concatenate(los), np.concatenate(his)


@dataclass(frozen=True)
class AffineImage(ConvexBody):
    """Image A*base + shift for an invertible matrix A."""

    base: ConvexBody
    matrix: np.ndarray
    shift: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        s = np.asarray(self.shift, dtype=float).reshape(-1)
        if a.shape != (self.base.dim, self.base.dim) or s.size != self.base.dim:
            raise GeometryError("affine image shape mismatch")
        if abs(np.linalg.det(a)) < DET_TOL:
            raise GeometryError("affine image matrix must be invertible")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "shift", s)
        object.__setattr__(self, "dim", self.base.dim)

    def _pull(self, pts):
        inv = np.linalg.inv(self.matrix)
        return (pts - self.shift) @ inv.T

    def contains(self, x) -> bool:
        x = _as_vector(x, self.dim)
        return self.base.contains(self._pull(x[None, :])[0])

    def contains_batch(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.base.contains_batch(self._pull(pts))

    def bounding_box(self):
        lo, hi = self.base.bounding_box()
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        imgs = corners @ self.matrix.T + self.shift
        return imgs.min(axis=0), imgs.max(axis=0)


def membership(body: ConvexBody, x) -> bool:
    """Strict (open-set) membership; boundaries have measure zero anyway."""
    return body.contains(x)


# ---------------------------------------------------------------------------
# convenience constructors
# ---------------------------------------------------------------------------

def box(lower, upper) -> HPolytope:
    lower = np.asarray(lower, dtype=float).reshape(-1)
    upper = np.asarray(upper, dtype=float).reshape(-1)
    n = lower.size
    eye = np.eye(n)
    return HPolytope(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))


def unit_box(n: int) -> HPolytope:
    return box(np.zeros(n), np.ones(n))


def simplex_from_vertices(verts) -> VPolytope:
    return VPolytope(np.asarray(verts, dtype=float))


@dataclass(frozen=True)
class Pyramid:
    """The pyramid with square (or segment) base of half-width alpha and apex
    height beta: |x_i| < alpha - (alpha/beta) x_n for i < n, 0 < x_n < beta.

    Realized as an H-polytope with 2(n-1)+1 facets; the top cap x_n <= beta
    is implied by the slanted facets and is not listed.
    """

    alpha: float
    beta: float
    dim: int = 2

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise GeometryError("pyramid parameters must be positive")
        if self.dim < 2:
            raise GeometryError("pyramid needs dim >= 2")

    def hpolytope(self) -> HPolytope:
        n, slope = self.dim, self.alpha / self.beta
        rows, offs = [], []
        for i in range(n - 1):
            for sign in (1.0, -1.0):
                a = np.zeros(n)
                a[i] = sign
                a[n - 1] = slope
                rows.append(a)
                offs.append(self.alpha)
        base = np.zeros(n)
        base[n - 1] = -1.0
        rows.append(base)
        offs.append(0.0)
        return HPolytope(np.array(rows), np.array(offs))

    def expected_vertices(self) -> np.ndarray:
        corners = np.array(list(itertools.product(*[(-self.alpha, self.alpha)] * (self.dim - 1))))
        base = np.hstack([corners, np.zeros((corners.shape[0], 1))])
        apex = np.zeros((1, self.dim))
        apex[0, -1] = self.beta
        return np.vstack([base, apex])

    def inscribed_ball_radius(self, t: float) -> float:
        """Radius alpha*(beta-t)/sqrt(alpha^2+beta^2) of the axis ball at height t."""
        return self.alpha * (self.beta - t) / math.hypot(self.alpha, self.beta)


def pyramid_ball_check(alpha: float, beta: float, t: float, tol: float = 1e-12) -> bool:
    """Check B((0,..,0,t), alpha*(beta-t)/sqrt(alpha^2+beta^2)) fits in the pyramid.

    Exact test: the distance from the center to every facet hyperplane must be
    at least the stated radius (up to tol).  Valid for t in (beta/2, beta).
    """
    if not (beta / 2 < t < beta):
        raise GeometryError("t must lie in (beta/2, beta)")
    pyr = Pyramid(alpha, beta, dim=2)
    h = pyr.hpolytope()
    center = np.array([0.0, t])
    rho = pyr.inscribed_ball_radius(t)
    dists = (h.offsets - h.normals @ center) / np.linalg.norm(h.normals, axis=1)
    return bool(np.all(dists >= rho - tol))


# ---------------------------------------------------------------------------
# vertex / facet enumeration (dim <= 3, brute force)
# ---------------------------------------------------------------------------

def _dedupe_points(pts: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in out):
            out.append(p)
    return np.array(out) if out else np.zeros((0, pts.shape[1]))


def _is_bounded(h: HPolytope) -> bool:
    # bounded iff max <c, x> over the polyhedron is finite for c = +-e_i
    for i in range(h.dim):
        for sign in (1.0, -1.0):
            c = np.zeros(h.dim)
            c[i] = -sign  # linprog minimizes
            res = linprog(c, A_ub=h.normals, b_ub=h.offsets,
                          bounds=[(None, None)] * h.dim, method="highs")
            if res.status == 3:  # unbounded
                return False
            if not res.success:
                raise GeometryError(f"boundedness LP failed: {res.message}")
    return True


def vertex_enumerate(h: HPolytope, check_bounded: bool = True) -> np.ndarray:
    """All vertices of a bounded H-polytope, dim <= 3, brute force over facet
    subsets.  Each vertex solves dim active facet equations and satisfies all
    halfspaces within FEAS_TOL; duplicates merged at DEDUP_TOL."""
    n = h.dim
    if n > 3:
        raise GeometryError("vertex enumeration restricted to dim <= 3")
    if check_bounded and not _is_bounded(h):
        raise GeometryError("polytope is unbounded")
    A, b = h.normals, h.offsets
    m = A.shape[0]
    if m < n:
        raise GeometryError("too few halfspaces for a bounded polytope")
    combos = list(itertools.combinations(range(m), n))
    mats = A[np.array(combos)]                     # (ncomb, n, n)
    rhs = b[np.array(combos)]                      # (ncomb, n)
    dets = np.abs(np.linalg.det(mats))
    good = dets > DET_TOL * np.maximum(1.0, np.abs(mats).max(axis=(1, 2)) ** n)
    cands = np.linalg.solve(mats[good], rhs[good][..., None])[..., 0]
    scale = 1.0 + np.abs(b)
    feas = np.all(cands @ A.T <= b + FEAS_TOL * scale, axis=1)
    verts = _dedupe_points(cands[feas])
    if verts.shape[0] == 0:
        raise GeometryError("polytope has empty interior or is infeasible")
    if check_bounded and not np.all(np.isfinite(verts)):
        raise GeometryError("polytope is unbounded")
    if check_bounded and verts.shape[0] <= n:
        # fewer than dim+1 vertices cannot enclose volume
        raise GeometryError("polytope has empty interior")
    return verts


def _facet_key(a: np.ndarray, b: float) -> tuple:
    nrm = np.linalg.norm(a)
    return tuple(np.round(np.append(a / nrm, b / nrm), 9))


def to_hpolytope(v: VPolytope) -> HPolytope:
    """Brute-force convex hull of points in dim <= 3, returned as halfspaces."""
    pts = v.vertices
    n = v.dim
    if n > 3:
        raise GeometryError("hull restricted to dim <= 3")
    k = pts.shape[0]
    if k < n + 1:
        raise GeometryError("need at least dim+1 points for a full hull")
    centroid = pts.mean(axis=0)
    seen: dict[tuple, tuple[np.ndarray, float]] = {}
    for combo in itertools.combinations(range(k), n):
        sub = pts[list(combo)]
        if n == 1:
            a = np.array([1.0])
            bval = sub[0, 0]
        else:
            diffs = sub[1:] - sub[0]
            if n == 2:
                d = diffs[0]
                a = np.array([d[1], -d[0]])
            else:
                a = np.cross(diffs[0], diffs[1])
            if np.linalg.norm(a) < 1e-12:
                continue
            bval = float(a @ sub[0])
        # orient outward (away from centroid)
        if a @ centroid > bval:
            a, bval = -a, -bval
        vals = pts @ a
        scale = np.linalg.norm(a) * (1.0 + np.abs(bval) / max(np.linalg.norm(a), 1e-300))
        if np.all(vals <= bval + FEAS_TOL * max(scale, 1.0)):
            seen.setdefault(_facet_key(a, bval), (a, bval))
    if not seen:
        raise GeometryError("degenerate point set, no hull facets found")
    normals = np.array([a for a, _ in seen.values()])
    offsets = np.array([b for _, b in seen.values()])
    return HPolytope(normals, offsets)


def to_vpolytope(h: HPolytope) -> VPolytope:
    return VPolytope(vertex_enumerate(h))


def facet_vertex_incidence(h: HPolytope, verts: np.ndarray | None = None) -> list[list[int]]:
    """Indices of vertices lying on each facet hyperplane (within FEAS_TOL)."""
    if verts is None:
        verts = vertex_enumerate(h, check_bounded=False)
    out = []
    for a, b in zip(h.normals, h.offsets):
        scale = (1.0 + abs(b)) * max(np.linalg.norm(a), 1e-300)
        on = np.nonzero(np.abs(verts @ a - b) <= FEAS_TOL * scale)[0]
        out.append(list(on))
    return out


def polytope_volume(h: HPolytope, verts: np.ndarray | None = None) -> float:
    """Exact volume of a bounded H-polytope in dim <= 3.

    Facet polygons are angle-ordered and triangulated, then cones from the
    vertex centroid are summed; up to linear-algebra roundoff this is exact.
    """
    if verts is None:
        verts = vertex_enumerate(h, check_bounded=False)
    n = h.dim
    if verts.shape[0] <= n:
        return 0.0
    if n == 1:
        return float(verts.max() - verts.min())
    centroid = verts.mean(axis=0)
    if n == 2:
        ang = np.arctan2(verts[:, 1] - centroid[1], verts[:, 0] - centroid[0])
        ordered = verts[np.argsort(ang)]
        x, y = ordered[:, 0], ordered[:, 1]
        return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)
    # n == 3: fan tetrahedra over triangulated facets
    total = 0.0
    incidence = facet_vertex_incidence(h, verts)
    seen_planes = set()
    for (a, b), idx in zip(zip(h.normals, h.offsets), incidence):
        if len(idx) < 3:
            continue
        key = _facet_key(a, b)
        if key in seen_planes:
            continue
        seen_planes.add(key)
        face = verts[idx]
        fc = face.mean(axis=0)
        # orthonormal basis of the facet plane for angle ordering
        a_unit = a / np.linalg.norm(a)
        u = np.zeros(3)
        u[np.argmin(np.abs(a_unit))] = 1.0
        e1 = np.cross(a_unit, u)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(a_unit, e1)
        ang = np.arctan2((face - fc) @ e2, (face - fc) @ e1)
        face = face[np.argsort(ang)]
        kf = face.shape[0]
        for i in range(kf):
            p1, p2 = face[i], face[(i + 1) % kf]
            total += abs(np.linalg.det(np.stack([p1 - centroid, p2 - centroid, fc - centroid]))) / 6.0
    return float(total)


def intersect(h1: HPolytope, h2: HPolytope) -> HPolytope:
    return HPolytope(np.vstack([h1.normals, h2.normals]),
                     np.concatenate([h1.offsets, h2.offsets]))


def reflect_translate(h: HPolytope, x) -> HPolytope:
    """The polytope x - P, as halfspaces {-a . y <= b - a . x}."""
    x = _as_vector(x, h.dim)
    return HPolytope(-h.normals, h.offsets - h.normals @ x)


# ---------------------------------------------------------------------------
# polar duality and support cones
# ---------------------------------------------------------------------------

def _essential_vertices(pts: np.ndarray) -> np.ndarray:
    """Drop points lying in the convex hull of the others (LP feasibility)."""
    keep = []
    k = pts.shape[0]
    for i in range(k):
        others = np.delete(pts, i, axis=0)
        # is pts[i] a convex combination of the others?
        A_eq = np.vstack([others.T, np.ones(others.shape[0])])
        b_eq = np.append(pts[i], 1.0)
        res = linprog(np.zeros(others.shape[0]), A_eq=A_eq, b_eq=b_eq,
                      bounds=[(0, None)] * others.shape[0], method="highs")
        if not res.success:
            keep.append(i)
    return pts[keep]


def polar_dual(body: ConvexBody) -> ConvexBody:
    """Polar body {y : <y, x> < 1 on the body}; needs 0 interior, dim <= 3.

    H-polytopes map to V-polytopes with vertices a_i/b_i, V-polytopes to
    H-polytopes with halfspaces <v_j, x> <= 1, so (P*)* = P on irredundant
    representations.
    """
    if isinstance(body, HPolytope):
        verts = vertex_enumerate(body)  # validates boundedness
        keys = {_facet_key(a, b) for a, b in
                zip(body.normals, body.offsets)}
        if len(keys) < body.normals.shape[0]:
            raise GeometryError("duplicate halfspaces; normalize first")
        incidence = facet_vertex_incidence(body, verts)
        if np.any(body.offsets <= FEAS_TOL):
            raise GeometryError("origin not interior (some offset <= 0)")
        dual_pts = []
        for (a, b), idx in zip(zip(body.normals, body.offsets), incidence):
            if len(idx) >= body.dim:   # essential facet
                dual_pts.append(a / b)
        return VPolytope(np.array(dual_pts))
    if isinstance(body, VPolytope):
        verts = _essential_vertices(body.vertices)
        h = HPolytope(verts, np.ones(verts.shape[0]))
        if not h.contains(np.zeros(body.dim)):
            raise GeometryError("origin not interior to the polytope")
        return h
    raise GeometryError("polar dual implemented for polytopes only")


@dataclass(frozen=True)
class SupportCone:
    """Cone of feasible directions at a vertex, spanned by the generators
    y_j - x for the other vertices y_j."""

    apex: np.ndarray
    generators: np.ndarray

    def contains(self, direction) -> bool:
        d = np.asarray(direction, dtype=float).reshape(-1)
        G = self.generators.T  # (dim, k)
        res = linprog(np.zeros(G.shape[1]), A_eq=G, b_eq=d,
                      bounds=[(0, None)] * G.shape[1], method="highs")
        return bool(res.success)


def support_cone(body: ConvexBody, vertex) -> SupportCone:
    if isinstance(body, HPolytope):
        verts = vertex_enumerate(body)
    elif isinstance(body, VPolytope):
        verts = _essential_vertices(body.vertices)
    else:
        raise GeometryError("support cones are defined for polytopes")
    x = _as_vector(vertex, body.dim)
    dists = np.linalg.norm(verts - x, axis=1)
    hit = np.argmin(dists)
    if dists[hit] > DEDUP_TOL:
        raise GeometryError("input point is not a vertex of the polytope")
    gens = np.delete(verts, hit, axis=0) - verts[hit]
    return SupportCone(apex=verts[hit], generators=gens)


# ---------------------------------------------------------------------------
# inscribed balls
# ---------------------------------------------------------------------------

def chebyshev_ball(h: HPolytope) -> tuple[np.ndarray, float]:
    """Largest inscribed ball of a bounded H-polytope, by linear programming:
    maximize r subject to <a_i, c> + r|a_i| <= b_i."""
    n = h.dim
    norms = np.linalg.norm(h.normals, axis=1)
    A_ub = np.hstack([h.normals, norms[:, None]])
    c = np.zeros(n + 1)
    c[n] = -1.0
    res = linprog(c, A_ub=A_ub, b_ub=h.offsets,
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    if not res.success:
        raise GeometryError(f"chebyshev LP failed: {res.message}")
    center, radius = res.x[:n], float(res.x[n])
    if radius <= DET_TOL:
        raise GeometryError("polytope has empty interior")
    return center, radius


# ---------------------------------------------------------------------------
# boundary containment sampler (disc geometry)
# ---------------------------------------------------------------------------

def disc_containment_check(C: float, eps: float, samples: int, seed: int,
                           dim: int = 2) -> int:
    """Count sampled violations of the shrinking-disc containment

        (2 closure(B((1-C eps^2) x, C eps^2)) - B(0,1)) cap B(0,1)  subset  B(x, eps)

    at x = (1, 0, ..., 0).  The Minkowski combination on the left is the open
    ball B(2(1-C eps^2) x, 1 + 2C eps^2); points are drawn uniformly from it
    by rejection from its bounding box.  Returns the violation count.
    """
    if C <= 0 or not (0 < eps < 1):
        raise GeometryError("need C > 0 and eps in (0,1)")
    q = C * eps * eps
    x = np.zeros(dim)
    x[0] = 1.0
    center = 2.0 * (1.0 - q) * x
    radius = 1.0 + 2.0 * q
    rng = np.random.default_rng(seed)
    violations = 0
    remaining = samples
    while remaining > 0:
        batch = min(4 * remaining, 1_000_000)
        pts = rng.uniform(center - radius, center + radius, size=(batch, dim))
        inside = pts[np.linalg.norm(pts - center, axis=1) < radius]
        take = inside[:remaining]
        remaining -= take.shape[0]
        in_unit = np.linalg.norm(take, axis=1) < 1.0
        far = np.linalg.norm(take - x, axis=1) >= eps
        violations += int(np.count_nonzero(in_unit & far))
    return violations


# ---------------------------------------------------------------------------
# vertex certificates (perturbed-hull linear systems)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateSystem:
    """Solution of (I + Lambda - M^T Lambda) rho = e_target.

    lam is the diagonal of Lambda, mu the row-stochastic matrix M, rho the
    barycentric weights certifying that the target vertex lies in the hull of
    the perturbed vertices.
    """

    lam: np.ndarray
    mu: np.ndarray
    rho: np.ndarray
    target_index: int

    def residual(self) -> float:
        k = self.lam.size
        A = np.eye(k) + np.diag(self.lam) - self.mu.T @ np.diag(self.lam)
        e = np.zeros(k)
        e[self.target_index] = 1.0
        return float(np.linalg.norm(A @ self.rho - e))


def solve_certificate(lam, mu, target: int) -> CertificateSystem:
    """Solve the k x k certificate system for one target vertex.

    Preconditions: 0 <= lam_i < 1/k and mu row-stochastic with entries in
    (0, 1).  Under them the solution is positive and sums to one (strictly
    positive when all lam_i > 0); both facts are asserted after the solve.
    """
    lam = np.asarray(lam, dtype=float).reshape(-1)
    mu = np.atleast_2d(np.asarray(mu, dtype=float))
    k = lam.size
    if mu.shape != (k, k):
        raise GeometryError("mu must be k x k")
    if np.any(lam < 0):
        raise GeometryError("lambda entries must be nonnegative")
    if k * lam.max(initial=0.0) >= 1.0:
        raise GeometryError("precondition k * max(lambda) < 1 violated; system may be singular")
    if np.any(mu <= 0) or np.any(mu >= 1) or not np.allclose(mu.sum(axis=1), 1.0, atol=1e-12):
        raise GeometryError("mu must be row-stochastic with entries in (0,1)")
    if not 0 <= target < k:
        raise GeometryError("target index out of range")
    A = np.eye(k) + np.diag(lam) - mu.T @ np.diag(lam)
    e = np.zeros(k)
    e[target] = 1.0
    rho = np.linalg.solve(A, e)
    if abs(rho.sum() - 1.0) > 1e-10:
        raise GeometryError("certificate sum deviates from 1")
    positive = rho > 0 if lam.min() > 0 else rho >= -1e-15
    if not np.all(positive):
        raise GeometryError("certificate solution not positive")
    return CertificateSystem(lam=lam, mu=mu, rho=rho, target_index=target)


# ---------------------------------------------------------------------------
# polytope JSON schema
# ---------------------------------------------------------------------------

def body_to_json(body: ConvexBody) -> str:
    """Serialize a polytope to the {"dim", "halfspaces"|"vertices"} schema.
    Floats round-trip exactly (repr uses shortest form, <= 17 significant digits)."""
    if isinstance(body, HPolytope):
        doc = {"dim": body.dim,
               "halfspaces": [{"normal": list(a), "offset": float(b)}
                              for a, b in zip(body.normals, body.offsets)]}
    elif isinstance(body, VPolytope):
        doc = {"dim": body.dim, "vertices": [list(v) for v in body.vertices]}
    else:
        raise GeometryError("JSON schema covers polytopes only")
    return json.dumps(doc)


def body_from_json(text: str) -> ConvexBody:
    doc = json.loads(text)
    dim = int(doc["dim"])
    if "halfspaces" in doc:
        normals = np.array([hs["normal"] for hs in doc["halfspaces"]], dtype=float)
        offsets = np.array([hs["offset"] for hs in doc["halfspaces"]], dtype=float)
        h = HPolytope(normals, offsets)
        if h.dim != dim:
            raise GeometryError("dim field inconsistent with halfspaces")
        return h
    if "vertices" in doc:
        v = VPolytope(np.array(doc["vertices"], dtype=float))
        if v.dim != dim:
            raise GeometryError("dim field inconsistent with vertices")
        return v
    raise GeometryError("polytope JSON needs 'halfspaces' or 'vertices'")
