"""Linear fractional self-maps of the complex unit ball.

A map acts as ``phi(z) = (A z + B) / (<z, C> + d)`` on column vectors
``z`` in C^N, where ``<z, C> = sum_j z_j * conj(C_j)``.  Every map is
identified with its associated (N+1) x (N+1) matrix

    [ A      B ]
    [ C^*    d ]

acting projectively on (z, 1); composition of maps is the matrix product.
Maps are normalized at construction so the associated matrix has unit
Frobenius norm and ``d`` is real and positive, which makes equality of
maps testable and keeps iterate matrices well scaled.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DenominatorVanishes,
    DimensionMismatch,
    HasInteriorFixedPoint,
    MapFormatError,
    NoBoundaryFixedPoint,
    NoQualifyingBoundaryPoint,
    NotAFixedPoint,
    NumericalInconsistency,
    PointNotInterior,
)

__all__ = [
    "LinearFractionalMap",
    "FixedPoint",
    "FixedPointSet",
    "ValidationReport",
    "HalfPlaneMap",
    "evaluate",
    "compose",
    "jacobian",
    "fixed_points",
    "denjoy_wolff",
    "is_automorphism",
    "validate_self_map",
    "ball_automorphism_to_origin",
    "unitary_map",
    "identity_map",
    "inverse",
    "conjugated",
    "conjugate_to_halfplane",
    "cayley_matrix",
    "siegel_from_ball",
    "ball_from_siegel",
    "unitary_with_first_column",
    "map_to_json_dict",
    "map_from_json_dict",
    "proportional_residual",
]

# Default tolerances.  Boundary classification and unimodularity share the
# 1e-8 band; self-map validation is tighter because sphere maxima are exact
# for linear fractional maps.
TOL_BOUNDARY = 1e-8
TOL_VALIDATION = 1e-9
_EIG_CLUSTER_TOL = 1e-6
_MARGIN_TOL = 1e-12


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Hermitian inner product <u, v> = sum u_j conj(v_j)."""
    return complex(np.vdot(v, u))


class LinearFractionalMap:
    """Immutable linear fractional map of the unit ball of C^N.

    Parameters are coerced to complex arrays: ``a`` is N x N, ``b`` and
    ``c`` are length-N vectors, ``d`` a scalar.  The denominator
    ``<z, C> + d`` must be nonvanishing on the closed ball, which after
    normalization is exactly ``d > |C|``; constructors reject inputs that
    violate it.
    """

    __slots__ = ("n", "a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex).reshape(-1)
        c = np.asarray(c, dtype=complex).reshape(-1)
        d = complex(d)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MapFormatError("matrix block must be square, got shape %r" % (a.shape,))
        n = a.shape[0]
        if b.shape != (n,) or c.shape != (n,):
            raise MapFormatError("vector blocks must have length %d" % n)
        m = np.zeros((n + 1, n + 1), dtype=complex)
        m[:n, :n] = a
        m[:n, n] = b
        m[n, :n] = np.conj(c)
        m[n, n] = d
        norm = np.linalg.norm(m)
        if norm == 0.0:
            raise MapFormatError("all blocks are zero")
        if abs(d) > 0:
            m *= np.conj(d) / abs(d)
        m /= np.linalg.norm(m)
        dn = m[n, n].real
        if dn - np.linalg.norm(m[n, :n]) <= _MARGIN_TOL:
            raise DenominatorVanishes(
                "denominator vanishes on the closed ball (need d > |C| after normalization)"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "a", m[:n, :n])
        object.__setattr__(self, "b", m[:n, n])
        object.__setattr__(self, "c", np.conj(m[n, :n]))
        object.__setattr__(self, "d", float(dn))

    def __setattr__(self, name, value):
        raise AttributeError("LinearFractionalMap is immutable")

    @classmethod
    def from_matrix(cls, m) -> "LinearFractionalMap":
        """Build a map from an (N+1) x (N+1) associated matrix."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise MapFormatError("associated matrix must be square of size >= 2")
        n = m.shape[0] - 1
        return cls(m[:n, :n], m[:n, n], np.conj(m[n, :n]), m[n, n])

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n + 1, self.n + 1), dtype=complex)
        m[: self.n, : self.n] = self.a
        m[: self.n, self.n] = self.b
        m[self.n, : self.n] = np.conj(self.c)
        m[self.n, self.n] = self.d
        return m

    @property
    def denominator_margin(self) -> float:
        """min over the closed ball of |<z,C> + d|, equal to d - |C|."""
        return float(self.d - np.linalg.norm(self.c))

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __repr__(self):
        return "LinearFractionalMap(n=%d, d=%.6g, |C|=%.6g)" % (
            self.n,
            self.d,
            float(np.linalg.norm(self.c)),
        )


def identity_map(n: int) -> LinearFractionalMap:
    return LinearFractionalMap(np.eye(n), np.zeros(n), np.zeros(n), 1.0)


def unitary_map(u) -> LinearFractionalMap:
    """The rotation z -> U z for a unitary U."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if not np.allclose(u.conj().T @ u, np.eye(n), atol=1e-10):
        raise MapFormatError("matrix is not unitary")
    return LinearFractionalMap(u, np.zeros(n), np.zeros(n), 1.0)


def evaluate(f: LinearFractionalMap, z) -> np.ndarray:
    """Apply the map at a point of C^N (not restricted to the ball)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (f.n,):
        raise DimensionMismatch("point has dimension %d, map has %d" % (z.size, f.n))
    den = _inner(z, f.c) + f.d
    if abs(den) < 1e-13:
        raise DenominatorVanishes("denominator ~ 0 at the requested point")
    return (f.a @ z + f.b) / den


def _evaluate_many(f: LinearFractionalMap, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluate for an (m, N) array of points inside the domain."""
    den = pts @ np.conj(f.c) + f.d
    return (pts @ f.a.T + f.b) / den[:, None]


def compose(f: LinearFractionalMap, g: LinearFractionalMap) -> LinearFractionalMap:
    """The composition f o g, computed as the associated matrix product."""
    if f.n != g.n:
        raise DimensionMismatch("cannot compose maps of dimensions %d and %d" % (f.n, g.n))
    return LinearFractionalMap.from_matrix(f.matrix @ g.matrix)


def inverse(f: LinearFractionalMap) -> LinearFractionalMap:
    """Projective inverse (a ball self-map only when f is an automorphism)."""
    return LinearFractionalMap.from_matrix(np.linalg.inv(f.matrix))


def conjugated(f: LinearFractionalMap, s: LinearFractionalMap) -> LinearFractionalMap:
    """The conjugate s^(-1) o f o s."""
    if f.n != s.n:
        raise DimensionMismatch("conjugating map has the wrong dimension")
    sm = s.matrix
    return LinearFractionalMap.from_matrix(np.linalg.inv(sm) @ f.matrix @ sm)


def iterate_matrix(f: LinearFractionalMap, n_iter: int) -> np.ndarray:
    """Associated matrix of the n-th iterate, renormalized to unit norm."""
    m = f.matrix
    out = np.eye(f.n + 1, dtype=complex)
    k = n_iter
    while k:
        if k & 1:
            out = out @ m
            out /= np.linalg.norm(out)
        m = m @ m
        m /= np.linalg.norm(m)
        k >>= 1
    return out


def jacobian(f: LinearFractionalMap, z) -> np.ndarray:
    """Holomorphic Jacobian matrix (d phi_i / d z_j) at z."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (f.n,):
        raise DimensionMismatch("point has dimension %d, map has %d" % (z.size, f.n))
    den = _inner(z, f.c) + f.d
    if abs(den) < 1e-13:
        raise DenominatorVanishes("denominator ~ 0 at the requested point")
    num = f.a @ z + f.b
    return f.a / den - np.outer(num, np.conj(f.c)) / (den * den)


def proportional_residual(m1: np.ndarray, m2: np.ndarray) -> float:
    """Distance of m1 from the complex line spanned by m2, relative to |m1|.

    Zero exactly when the matrices are scalar multiples, i.e. when the two
    maps agree projectively.
    """
    m1 = np.asarray(m1, dtype=complex)
    m2 = np.asarray(m2, dtype=complex)
    t = np.vdot(m2, m1) / np.vdot(m2, m2)
    return float(np.linalg.norm(m1 - t * m2) / np.linalg.norm(m1))


# ---------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPoint:
    """An affine fixed point with its location class.

    ``dilation`` is the boundary dilation coefficient
    Re <dphi_tau(tau), tau>; it is populated for boundary points only and
    equals the Denjoy-Wolff alpha when the point is attracting.
    """

    location: np.ndarray
    kind: str  # "interior" | "boundary" | "exterior"
    dilation: float | None = None


@dataclass(frozen=True)
class FixedPointSet:
    """All fixed points of a map, with positive-dimensional sets flagged.

    ``points`` holds isolated affine fixed points.  When an eigenspace of
    the associated matrix yields a whole affine slice of fixed points that
    crosses the open ball, the slice is reported via ``slice_dim`` /
    ``slice_point`` (a minimum-norm representative) instead of being
    enumerated; ``whole_ball`` marks the identity-like case.  Projective
    fixed points with vanishing final coordinate are listed in
    ``at_infinity`` as unit direction vectors (diagnostic only).
    """

    points: tuple[FixedPoint, ...]
    at_infinity: tuple[np.ndarray, ...] = ()
    slice_dim: int | None = None
    slice_point: np.ndarray | None = None
    whole_ball: bool = False

    def interior_point(self) -> np.ndarray | None:
        """Some interior fixed point, if one exists (slice representative
        included); None otherwise."""
        if self.slice_point is not None and np.linalg.norm(self.slice_point) < 1.0 - TOL_BOUNDARY:
            return self.slice_point
        for p in self.points:
            if p.kind == "interior":
                return p.location
        return None

    def boundary_points(self) -> tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.kind == "boundary")


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.lexsort((values.imag, values.real))
    groups: list[list[complex]] = []
    for v in values[order]:
        for g in groups:
            if abs(v - g[0]) <= tol:
                g.append(v)
                break
        else:
            groups.append([v])
    return [np.asarray(g) for g in groups]


def _null_space(m: np.ndarray, tol: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > tol))
    return np.conj(vh[rank:]).T  # columns span the null space


def _boundary_dilation(f: LinearFractionalMap, tau: np.ndarray) -> float:
    jt = jacobian(f, tau) @ tau
    val = _inner(jt, tau)
    return float(val.real)


def fixed_points(
    f: LinearFractionalMap,
    cluster_tol: float = _EIG_CLUSTER_TOL,
    boundary_tol: float = TOL_BOUNDARY,
) -> FixedPointSet:
    """All fixed points of the map, read off the associated matrix.

    Fixed points are eigenvectors of the associated matrix: an eigenvector
    (v, t) with t != 0 gives the affine fixed point v / t, while t ~ 0 is a
    fixed point at infinity of the extended projective action.  Eigenvalues
    are clustered before the null-space computation so that defective
    (parabolic) blocks and numerically split multiple eigenvalues are
    handled as one group.
    """
    n = f.n
    m = f.matrix
    eigvals = np.linalg.eigvals(m)
    points: list[FixedPoint] = []
    at_inf: list[np.ndarray] = []
    slice_dim: int | None = None
    slice_point: np.ndarray | None = None
    whole_ball = False

    for group in _cluster(eigvals, cluster_tol):
        lam = complex(group.mean())
        spread = float(np.max(np.abs(group - lam))) if group.size > 1 else 0.0
        rank_tol = max(1e-9, 10.0 * spread)
        basis = _null_space(m - lam * np.eye(n + 1), rank_tol)
        if basis.shape[1] == 0:
            # overly tight rank tolerance; retry with the cluster width
            basis = _null_space(m - lam * np.eye(n + 1), 1e-7)
            if basis.shape[1] == 0:
                continue
        k = basis.shape[1]
        last = np.abs(basis[n, :])
        j = int(np.argmax(last))
        if last[j] < 1e-10:
            for i in range(k):
                v = basis[:n, i]
                at_inf.append(v / np.linalg.norm(v))
            continue
        v0 = basis[:, j] / basis[n, j]
        z0 = v0[:n]
        dirs = []
        for i in range(k):
            if i == j:
                continue
            w = basis[:, i] - basis[n, i] * v0
            wv = w[:n]
            nw = np.linalg.norm(wv)
            if nw > 1e-10:
                dirs.append(wv / nw)
        if not dirs:
            points.append(_classify_point(f, z0, boundary_tol))
            continue
        # affine slice of fixed points: z0 + span(dirs)
        w = np.stack(dirs, axis=1)
        coef, *_ = np.linalg.lstsq(w, -z0, rcond=None)
        p_star = z0 + w @ coef
        r = float(np.linalg.norm(p_star))
        if r < 1.0 - boundary_tol:
            slice_dim = len(dirs)
            slice_point = p_star
            whole_ball = len(dirs) == n
        else:
            # slice missing the open ball: report its nearest point
            points.append(_classify_point(f, p_star, boundary_tol))

    points.sort(key=lambda p: ({"interior": 0, "boundary": 1, "exterior": 2}[p.kind],)
                + tuple(x for xy in zip(p.location.real, p.location.imag) for x in xy))
    return FixedPointSet(
        points=tuple(points),
        at_infinity=tuple(at_inf),
        slice_dim=slice_dim,
        slice_point=slice_point,
        whole_ball=whole_ball,
    )


def _classify_point(f: LinearFractionalMap, z: np.ndarray, boundary_tol: float) -> FixedPoint:
    r = float(np.linalg.norm(z))
    if abs(r - 1.0) <= boundary_tol:
        tau = z / r
        return FixedPoint(location=tau, kind="boundary", dilation=_boundary_dilation(f, tau))
    kind = "interior" if r < 1.0 else "exterior"
    return FixedPoint(location=z, kind=kind, dilation=None)


def denjoy_wolff(f: LinearFractionalMap, tol: float = TOL_BOUNDARY) -> FixedPoint:
    """Attracting boundary fixed point of a map with no interior fixed point.

    The returned point is the unique boundary fixed point whose dilation
    lies in (0, 1]; dilation strictly below 1 is the hyperbolic case and
    dilation 1 the parabolic case.  When rounding leaves two candidates in
    the admissible band (a near-parabolic tie) both are reported in a
    warning and the smaller dilation wins deterministically.
    """
    fps = fixed_points(f, boundary_tol=tol)
    if fps.interior_point() is not None:
        raise HasInteriorFixedPoint("map fixes an interior point; no Denjoy-Wolff point")
    cands = [p for p in fps.boundary_points() if p.dilation is not None and p.dilation <= 1.0 + tol]
    if not cands:
        raise NoQualifyingBoundaryPoint("no boundary fixed point with dilation <= 1")
    cands.sort(key=lambda p: (p.dilation, tuple(p.location.real), tuple(p.location.imag)))
    if len(cands) > 1:
        warnings.warn(
            "near-parabolic tie: %d boundary fixed points have dilation <= 1 + tol (%s); "
            "returning the smallest dilation" % (len(cands), [round(p.dilation, 12) for p in cands]),
            RuntimeWarning,
            stacklevel=2,
        )
    best = cands[0]
    # cross-check the derivative-based dilation against the radial quotient
    r = 1.0 - 1e-6
    radial = (1.0 - float(np.linalg.norm(evaluate(f, r * best.location)))) / (1.0 - r)
    if abs(radial - best.dilation) > 1e-4:
        raise NumericalInconsistency(
            "radial quotient %.6g disagrees with dilation %.6g" % (radial, best.dilation)
        )
    return best


# ---------------------------------------------------------------------------
# automorphisms


def is_automorphism(f: LinearFractionalMap, tol: float = 1e-9) -> bool:
    """Whether the map is a ball automorphism.

    Automorphisms are exactly the maps whose associated matrix satisfies
    m* J m = lambda J with lambda > 0, where J = diag(I_N, -1) is the form
    whose negative cone projects onto the ball.
    """
    m = f.matrix
    n = f.n
    j = np.eye(n + 1)
    j[n, n] = -1.0
    k = m.conj().T @ j @ m
    lam = -k[n, n].real
    if lam <= 0:
        return False
    return float(np.linalg.norm(k - lam * j)) <= tol * float(np.linalg.norm(k))


def ball_automorphism_to_origin(a) -> LinearFractionalMap:
    """The involutive automorphism interchanging the interior point a and 0.

    For a = 0 the convention is z -> -z, the involution with the same
    structure.  The returned map satisfies phi(a) = 0, phi(0) = a and
    phi o phi = id projectively.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    n = a.size
    r2 = float(np.vdot(a, a).real)
    if r2 >= 1.0:
        raise PointNotInterior("automorphism center must lie in the open ball")
    if r2 == 0.0:
        return LinearFractionalMap(-np.eye(n), np.zeros(n), np.zeros(n), 1.0)
    proj = np.outer(a, np.conj(a)) / r2
    s = math.sqrt(1.0 - r2)
    block = -(proj + s * (np.eye(n) - proj))
    return LinearFractionalMap(block, a, -a, 1.0)


# ---------------------------------------------------------------------------
# self-map validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    max_modulus: float
    witness: np.ndarray
    samples: int
    tol: float
    denominator_margin: float


def _sphere_grid(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Deterministic-ish sphere sample: structured directions first, then
    seeded uniform points."""
    pts = []
    eye = np.eye(n, dtype=complex)
    for j in range(n):
        for phase in (1.0, -1.0, 1j, -1j):
            pts.append(phase * eye[j])
    for j in range(n):
        for k in range(j + 1, n):
            for pj in (1.0, 1j):
                for pk in (1.0, -1.0, 1j, -1j):
                    v = pj * eye[j] + pk * eye[k]
                    pts.append(v / np.linalg.norm(v))
    structured = np.array(pts) if pts else np.zeros((0, n), dtype=complex)
    m = max(count - structured.shape[0], 0)
    g = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return np.concatenate([structured, g], axis=0)


def _ascend_modulus(f: LinearFractionalMap, z: np.ndarray, steps: int = 80) -> np.ndarray:
    """Projected gradient ascent of |phi|^2 on the unit sphere."""
    z = z / np.linalg.norm(z)
    val = float(np.vdot(evaluate(f, z), evaluate(f, z)).real)
    t = 0.25
    for _ in range(steps):
        w = evaluate(f, z)
        grad = jacobian(f, z).conj().T @ w
        tang = grad - np.vdot(z, grad).real * z
        gn = np.linalg.norm(tang)
        if gn < 1e-14 or t < 1e-13:
            break
        cand = z + t * tang / gn
        cand /= np.linalg.norm(cand)
        cval = float(np.vdot(evaluate(f, cand), evaluate(f, cand)).real)
        if cval > val:
            z, val = cand, cval
            t *= 1.3
        else:
            t *= 0.5
    return z


def validate_self_map(
    f: LinearFractionalMap,
    n_samples: int = 10000,
    tol: float = TOL_VALIDATION,
    refine: bool = True,
) -> ValidationReport:
    """Check sup over the unit sphere of |phi| against 1 + tol.

    The supremum of the modulus over the closed ball is attained on the
    sphere; it is estimated on a structured-plus-seeded grid and sharpened
    by projected gradient ascent from the best grid points, which converges
    quickly for rational maps of this form.
    """
    if f.n == 1:
        ang = np.linspace(0.0, 2.0 * math.pi, n_samples, endpoint=False)
        grid = np.exp(1j * ang)[:, None]
    else:
        rng = np.random.default_rng(7)
        grid = _sphere_grid(f.n, n_samples, rng)
    vals = np.linalg.norm(_evaluate_many(f, grid), axis=1)
    order = np.argsort(vals)[::-1]
    best = grid[order[0]]
    best_val = float(vals[order[0]])
    if refine:
        for idx in order[:5]:
            cand = _ascend_modulus(f, grid[idx])
            cv = float(np.linalg.norm(evaluate(f, cand)))
            if cv > best_val:
                best, best_val = cand, cv
    return ValidationReport(
        ok=best_val <= 1.0 + tol,
        max_modulus=best_val,
        witness=best,
        samples=grid.shape[0],
        tol=tol,
        denominator_margin=f.denominator_margin,
    )


# ---------------------------------------------------------------------------
# half-plane model


def unitary_with_first_column(u: np.ndarray) -> np.ndarray:
    """A deterministic unitary whose first column is the given unit vector."""
    u = np.asarray(u, dtype=complex).reshape(-1)
    u = u / np.linalg.norm(u)
    n = u.size
    if n == 1:
        return u.reshape(1, 1)
    basis = np.concatenate([u[:, None], np.eye(n, dtype=complex)], axis=1)
    q, _ = np.linalg.qr(basis)
    q = q[:, :n].copy()
    q[:, 0] = u
    return q


def cayley_matrix(n: int) -> np.ndarray:
    """Projective matrix of the Cayley map from the ball onto the Siegel
    half-plane { (z, w) : Re z > |w|^2 }, sending e_1 to infinity."""
    s = np.eye(n + 1, dtype=complex)
    s[0, 0] = 1.0
    s[0, n] = 1.0
    s[n, 0] = -1.0
    s[n, n] = 1.0
    return s


def _cayley_inverse_matrix(n: int) -> np.ndarray:
    s = np.eye(n + 1, dtype=complex)
    s[0, 0] = 0.5
    s[0, n] = -0.5
    s[n, 0] = 0.5
    s[n, n] = 0.5
    return s


def siegel_from_ball(z) -> np.ndarray:
    """Cayley image ((1+z1)/(1-z1), w/(1-z1)) of a ball point (z1, w)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    den = 1.0 - z[0]
    out = np.empty_like(z)
    out[0] = (1.0 + z[0]) / den
    out[1:] = z[1:] / den
    return out


def ball_from_siegel(zw) -> np.ndarray:
    zw = np.asarray(zw, dtype=complex).reshape(-1)
    den = zw[0] + 1.0
    out = np.empty_like(zw)
    out[0] = (zw[0] - 1.0) / den
    out[1:] = 2.0 * zw[1:] / den
    return out


@dataclass(frozen=True)
class HalfPlaneMap:
    """Affine self-map of the Siegel half-plane in the scaling-normal form

        psi(z, w) = (1/alpha) * (z + <w, b> + c,  A w + d)

    obtained from a ball map with boundary fixed point tau by rotating tau
    to e_1 and conjugating with the Cayley map.  For non-elliptic ball maps
    alpha is the Denjoy-Wolff dilation in (0, 1]; the diagnostic pull-back
    of an elliptic map at a repelling boundary fixed point has alpha > 1.
    ``rotation`` is the unitary used to move tau, kept for round trips.
    """

    n: int
    alpha: float
    b: np.ndarray
    c: complex
    a_block: np.ndarray
    d: np.ndarray
    rotation: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        if self.alpha <= 0:
            raise NumericalInconsistency("half-plane scaling must be positive")
        if self.alpha <= 1.0 + 1e-12:
            # self-map constraints from the half-plane geometry
            if self.alpha * self.c.real < float(np.vdot(self.d, self.d).real) - 1e-9:
                raise NumericalInconsistency("half-plane constraint alpha Re c >= |d|^2 fails")
            a_norm = float(np.linalg.norm(self.a_block, 2)) if self.a_block.size else 0.0
            if a_norm > math.sqrt(self.alpha) + 1e-9:
                raise NumericalInconsistency("half-plane constraint |A| <= sqrt(alpha) fails")

    def evaluate(self, zw) -> np.ndarray:
        zw = np.asarray(zw, dtype=complex).reshape(-1)
        out = np.empty(self.n, dtype=complex)
        out[0] = zw[0] + _inner(zw[1:], self.b) + self.c
        out[1:] = self.a_block @ zw[1:] + self.d
        return out / self.alpha

    @property
    def matrix(self) -> np.ndarray:
        """Projective matrix acting on (z, w, 1) in half-plane coordinates."""
        n = self.n
        m = np.zeros((n + 1, n + 1), dtype=complex)
        m[0, 0] = 1.0 / self.alpha
        m[0, 1:n] = np.conj(self.b) / self.alpha
        m[0, n] = self.c / self.alpha
        m[1:n, 1:n] = self.a_block / self.alpha
        m[1:n, n] = self.d / self.alpha
        m[n, n] = 1.0
        return m

    def pulled_back_to_ball(self) -> LinearFractionalMap:
        """Invert the construction: the ball map this form came from."""
        n = self.n
        v = np.eye(n + 1, dtype=complex)
        v[:n, :n] = self.rotation
        m = v.conj().T @ _cayley_inverse_matrix(n) @ self.matrix @ cayley_matrix(n) @ v
        return LinearFractionalMap.from_matrix(m)


def conjugate_to_halfplane(
    f: LinearFractionalMap,
    tau: np.ndarray | None = None,
    tol: float = 1e-8,
) -> HalfPlaneMap:
    """Transport a map with boundary fixed point tau to the Siegel model.

    tau defaults to the Denjoy-Wolff point for maps without interior fixed
    points, else to a boundary fixed point of the map (elliptic diagnostic
    use).  The boundary point is rotated to e_1 and the map conjugated by
    the Cayley transform; the result is affine because the transported map
    fixes infinity, and the residual non-affine entries (which vanish in
    exact arithmetic) are checked against ``tol`` before being dropped.
    """
    n = f.n
    if tau is None:
        fps = fixed_points(f)
        if fps.interior_point() is None:
            tau = denjoy_wolff(f).location
        else:
            bps = fps.boundary_points()
            if not bps:
                raise NoBoundaryFixedPoint("map has no boundary fixed point")
            tau = bps[0].location
    tau = np.asarray(tau, dtype=complex).reshape(-1)
    tau = tau / np.linalg.norm(tau)
    if np.linalg.norm(evaluate(f, tau) - tau) > 1e-6:
        raise NotAFixedPoint("tau is not fixed by the map")
    rot = unitary_with_first_column(tau).conj().T  # rot @ tau = e_1
    v = np.eye(n + 1, dtype=complex)
    v[:n, :n] = rot
    m1 = v @ f.matrix @ v.conj().T
    mpsi = cayley_matrix(n) @ m1 @ _cayley_inverse_matrix(n)
    if abs(mpsi[n, n]) < 1e-12:
        raise NumericalInconsistency("degenerate Cayley conjugation")
    mpsi /= mpsi[n, n]
    stray = float(np.linalg.norm(mpsi[n, :n])) + float(np.linalg.norm(mpsi[1:n, 0]))
    if stray > tol:
        raise NumericalInconsistency(
            "transported map is not affine (residual %.3g); tau is not an exact fixed point" % stray
        )
    ahat = mpsi[0, 0]
    if abs(ahat.imag) > 1e-8 or ahat.real <= 0:
        raise NumericalInconsistency("leading half-plane coefficient %r is not real positive" % ahat)
    alpha = 1.0 / ahat.real
    return HalfPlaneMap(
        n=n,
        alpha=alpha,
        b=np.conj(mpsi[0, 1:n]) * alpha,
        c=complex(mpsi[0, n]) * alpha,
        a_block=mpsi[1:n, 1:n] * alpha,
        d=mpsi[1:n, n] * alpha,
        rotation=rot,
        tau=tau,
    )


# ---------------------------------------------------------------------------
# JSON form


def _c2pair(x: complex) -> list[float]:
    x = complex(x)
    return [float(x.real), float(x.imag)]


def map_to_json_dict(f: LinearFractionalMap) -> dict:
    """Normalized map as a JSON-ready dict with complex entries as [re, im]."""
    return {
        "N": f.n,
        "A": [[_c2pair(f.a[i, j]) for j in range(f.n)] for i in range(f.n)],
        "B": [_c2pair(x) for x in f.b],
        "C": [_c2pair(x) for x in f.c],
        "d": _c2pair(f.d),
    }


def _pair2c(v, where: str) -> complex:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise MapFormatError("%s: expected [re, im] pair, got %r" % (where, v))
    re, im = v
    if isinstance(re, bool) or isinstance(im, bool) or not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise MapFormatError("%s: entries must be numbers" % where)
    return complex(re, im)


def map_from_json_dict(obj: dict) -> LinearFractionalMap:
    """Parse the canonical map JSON object; raises MapFormatError with the
    offending field on malformed input."""
    if not isinstance(obj, dict):
        raise MapFormatError("map JSON must be an object")
    for key in ("N", "A", "B", "C", "d"):
        if key not in obj:
            raise MapFormatError("missing field %r" % key)
    n = obj["N"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MapFormatError("N must be a positive integer")
    a_rows = obj["A"]
    if not isinstance(a_rows, list) or len(a_rows) != n:
        raise MapFormatError("A must be an N x N array")
    a = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(a_rows):
        if not isinstance(row, list) or len(row) != n:
            raise MapFormatError("A row %d must have length %d" % (i, n))
        for j, v in enumerate(row):
            a[i, j] = _pair2c(v, "A[%d][%d]" % (i, j))
    for key in ("B", "C"):
        if not isinstance(obj[key], list) or len(obj[key]) != n:
            raise MapFormatError("%s must have length %d" % (key, n))
    b = np.array([_pair2c(v, "B[%d]" % i) for i, v in enumerate(obj["B"])])
    c = np.array([_pair2c(v, "C[%d]" % i) for i, v in enumerate(obj["C"])])
    d = _pair2c(obj["d"], "d")
    return LinearFractionalMap(a, b, c, d)
