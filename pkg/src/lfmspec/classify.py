"""Classification of ball self-maps by fixed-point geometry, and the two
normal-form constructions used by the spectral assembly.

The classes are decided by (i) existence of an interior fixed point,
(ii) the automorphism test, (iii) the unitary index p = number of
unimodular eigenvalues of the differential at an interior fixed point,
and (iv) the count of boundary fixed points.  Maps without interior
fixed points carry the Denjoy-Wolff dilation alpha; alpha = 1 is the
parabolic band and alpha < 1 the hyperbolic one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    GapEigenvalue,
    MultipleBoundaryFixedPoints,
    NoInteriorFixedPoint,
    NotAFixedPoint,
    NotHyperbolic,
    NumericalInconsistency,
    UnitaryIndexNonzero,
)
from .maps import (
    FixedPoint,
    FixedPointSet,
    HalfPlaneMap,
    LinearFractionalMap,
    ball_automorphism_to_origin,
    cayley_matrix,
    _cayley_inverse_matrix,
    conjugate_to_halfplane,
    conjugated,
    denjoy_wolff,
    evaluate,
    fixed_points,
    is_automorphism,
    jacobian,
    unitary_map,
    unitary_with_first_column,
)

__all__ = [
    "MapClass",
    "EllipticSpectralData",
    "EllipticP0Form",
    "HyperbolicNormalForm",
    "Classification",
    "unitary_index",
    "elliptic_spectral_data",
    "elliptic_p0_normal_form",
    "hyperbolic_normal_form",
    "classify",
    "classification_to_json_dict",
    "rotation_order",
]

TOL_UNIMODULAR = 1e-8
GAP_EDGE = 1e-6
PARABOLIC_BAND = 1e-8


class MapClass(str, enum.Enum):
    ELLIPTIC_AUTOMORPHISM = "elliptic_automorphism"
    ELLIPTIC_UNITARY_PART = "elliptic_unitary_part"
    ELLIPTIC_INTERIOR_ONLY = "elliptic_interior_only"
    ELLIPTIC_BOUNDARY_FIXED = "elliptic_boundary_fixed"
    PARABOLIC = "parabolic"
    HYPERBOLIC_ONE_FIXED = "hyperbolic_one_fixed"
    HYPERBOLIC_TWO_FIXED = "hyperbolic_two_fixed"
    OTHER_AUTOMORPHISM = "other_automorphism"


def _split_eigenvalues(
    eigvals: np.ndarray,
    tol_unimodular: float,
    gap_edge: float,
) -> tuple[list[complex], list[complex]]:
    unimodular: list[complex] = []
    contractive: list[complex] = []
    for lam in eigvals:
        r = abs(lam)
        if abs(r - 1.0) <= tol_unimodular:
            unimodular.append(complex(lam))
        elif r < 1.0 - gap_edge:
            contractive.append(complex(lam))
        elif r > 1.0 + tol_unimodular:
            raise NumericalInconsistency(
                "differential eigenvalue %r exceeds modulus 1 at an interior fixed point" % lam
            )
        else:
            raise GapEigenvalue(
                "eigenvalue modulus %.12g falls between the contractive bound %g and the "
                "unimodular band %g; tighten tolerances or reconsider the input" % (r, 1.0 - gap_edge, tol_unimodular)
            )
    return unimodular, contractive


@dataclass(frozen=True)
class EllipticSpectralData:
    """Differential eigenvalues at an interior fixed point, split by modulus."""

    fixed_point: np.ndarray
    eigenvalues: tuple[complex, ...]
    unimodular: tuple[complex, ...]
    contractive: tuple[complex, ...]

    @property
    def p(self) -> int:
        return len(self.unimodular)


def elliptic_spectral_data(
    f: LinearFractionalMap,
    z0: np.ndarray | None = None,
    tol_unimodular: float = TOL_UNIMODULAR,
    gap_edge: float = GAP_EDGE,
) -> EllipticSpectralData:
    """Eigenvalue data of dphi at the interior fixed point z0.

    Eigenvalues are sorted into a unimodular list (within ``tol_unimodular``
    of the circle) and a contractive list (modulus below ``1 - gap_edge``);
    anything in between raises GapEigenvalue rather than silently picking
    a side.
    """
    if z0 is None:
        z0 = fixed_points(f).interior_point()
        if z0 is None:
            raise NoInteriorFixedPoint("map has no interior fixed point")
    z0 = np.asarray(z0, dtype=complex).reshape(-1)
    if np.linalg.norm(evaluate(f, z0) - z0) > 1e-8:
        raise NotAFixedPoint("z0 is not fixed by the map")
    eigvals = np.linalg.eigvals(jacobian(f, z0))
    order = np.lexsort((eigvals.imag, eigvals.real, -np.abs(eigvals)))
    eigvals = eigvals[order]
    unimodular, contractive = _split_eigenvalues(eigvals, tol_unimodular, gap_edge)
    return EllipticSpectralData(
        fixed_point=z0,
        eigenvalues=tuple(complex(v) for v in eigvals),
        unimodular=tuple(unimodular),
        contractive=tuple(contractive),
    )


def unitary_index(f: LinearFractionalMap, z0: np.ndarray | None = None) -> int:
    """Number of unimodular eigenvalues of dphi at the interior fixed point."""
    return elliptic_spectral_data(f, z0).p


def rotation_order(lam: complex, max_denominator: int = 64, tol: float = 1e-9) -> int | None:
    """Order of a unimodular eigenvalue as a root of unity, or None.

    Returns the least q <= max_denominator with lam^q = 1 up to ``tol`` on
    the angle, via a continued-fraction approximation of arg(lam)/2pi.
    """
    theta = math.atan2(complex(lam).imag, complex(lam).real) / (2.0 * math.pi) % 1.0
    frac = Fraction(theta).limit_denominator(max_denominator)
    if abs(theta - float(frac)) <= tol:
        return frac.denominator
    return None


# ---------------------------------------------------------------------------
# zero-unitary-index normal form


@dataclass(frozen=True)
class EllipticP0Form:
    """Normal form for elliptic maps whose differential has no unimodular
    eigenvalue.

    After moving the fixed point to the origin and rotating, the map is
    conjugate (by sigma(z) = z / (1 - delta z_1)) to the linear map A1 on
    an ellipsoid-like domain: delta < 1 gives the ellipsoid with half-axis
    r = (1 - delta^2)^(-1/2), and delta = 1 the half-plane-like domain
    whose closure meets the sphere at the boundary fixed point e_1.
    """

    fixed_point: np.ndarray
    delta: float
    a1: np.ndarray
    domain: str  # "ellipsoid" | "halfplane_like"
    r: float | None
    to_origin: LinearFractionalMap
    rotation: np.ndarray
    conjugacy_residual: float


def elliptic_p0_normal_form(
    f: LinearFractionalMap,
    z0: np.ndarray | None = None,
    samples: int = 40,
) -> EllipticP0Form:
    """Construct the linear model of an elliptic map with unitary index 0.

    Steps: conjugate the fixed point to the origin by the standard
    involution, scale the associated matrix to denominator constant 1,
    solve (A* - I) V = C, and rotate V to |V| e_1.  The conjugacy
    sigma o phi = A1 o sigma is then verified on interior samples and the
    max residual recorded.
    """
    data = elliptic_spectral_data(f, z0)
    if data.p != 0:
        raise UnitaryIndexNonzero("normal form requires unitary index 0, got %d" % data.p)
    z0 = data.fixed_point
    aut = ball_automorphism_to_origin(z0)
    g = conjugated(f, aut)  # fixes the origin
    if np.linalg.norm(g.b) > 1e-9:
        raise NumericalInconsistency("conjugated map does not fix the origin")
    a = g.a / g.d
    cvec = g.c / g.d
    v = np.linalg.solve(a.conj().T - np.eye(f.n), cvec)
    delta = float(np.linalg.norm(v))
    if delta > 1.0 + 1e-8:
        raise NumericalInconsistency("|V| = %.12g exceeds 1; input is not a valid self-map" % delta)
    delta = min(delta, 1.0)
    if delta < 1e-12:
        u = np.eye(f.n, dtype=complex)
    else:
        u = unitary_with_first_column(v / delta)
    a1 = u.conj().T @ a @ u

    # residual of sigma o phi_tilde = A1 o sigma on interior samples
    rng = np.random.default_rng(11)
    pts = rng.standard_normal((samples, f.n)) + 1j * rng.standard_normal((samples, f.n))
    pts *= (rng.uniform(0.05, 0.9, size=samples) / np.linalg.norm(pts, axis=1))[:, None]
    g_tilde = conjugated(g, unitary_map(u))

    def sigma(z: np.ndarray) -> np.ndarray:
        return z / (1.0 - delta * z[0])

    resid = 0.0
    for z in pts:
        lhs = sigma(evaluate(g_tilde, z))
        rhs = a1 @ sigma(z)
        resid = max(resid, float(np.linalg.norm(lhs - rhs)))
    if resid > 1e-10:
        raise NumericalInconsistency("linear-model conjugacy residual %.3g too large" % resid)

    if delta < 1.0 - TOL_UNIMODULAR:
        domain, r = "ellipsoid", 1.0 / math.sqrt(1.0 - delta * delta)
    else:
        domain, r = "halfplane_like", None
    return EllipticP0Form(
        fixed_point=z0,
        delta=delta,
        a1=a1,
        domain=domain,
        r=r,
        to_origin=aut,
        rotation=u,
        conjugacy_residual=resid,
    )


# ---------------------------------------------------------------------------
# hyperbolic normal form


@dataclass(frozen=True)
class HyperbolicNormalForm:
    """Half-plane normal form of a hyperbolic non-automorphism.

    ``case`` is "one_fixed" (form (1/alpha)(z + c, A w + d) with c real
    positive, alpha c >= |d|^2) or "two_fixed" (c = d = 0; the contraction
    block is reported as a_prime = A / sqrt(alpha) of norm at most 1).
    ``k1``/``k2`` give the Heisenberg translation that removed the linear
    term b, and ``vertical_shift`` the pure-imaginary translation that made
    c real.  ``halfplane`` is the form before those two conjugations.
    """

    case: str
    alpha: float
    c: float
    d: np.ndarray
    a_block: np.ndarray
    a_prime: np.ndarray | None
    k1: np.ndarray
    k2: float
    vertical_shift: complex
    halfplane: HalfPlaneMap
    tau: np.ndarray

    @property
    def eigenvalues(self) -> tuple[complex, ...]:
        """Eigenvalues of the normalized contraction block (two-fixed case)."""
        if self.a_prime is None:
            return ()
        vals = np.linalg.eigvals(self.a_prime)
        order = np.lexsort((vals.imag, vals.real, -np.abs(vals)))
        return tuple(complex(v) for v in vals[order])

    def normal_matrix(self) -> np.ndarray:
        n = self.halfplane.n
        m = np.zeros((n + 1, n + 1), dtype=complex)
        m[0, 0] = 1.0 / self.alpha
        m[0, n] = self.c / self.alpha
        m[1:n, 1:n] = self.a_block / self.alpha
        m[1:n, n] = self.d / self.alpha
        m[n, n] = 1.0
        return m

    def _eta_matrix(self, inverse: bool = False) -> np.ndarray:
        n = self.halfplane.n
        m = np.eye(n + 1, dtype=complex)
        k1 = self.k1
        if inverse:
            m[0, 1:n] = -2.0 * np.conj(k1)
            m[0, n] = 2.0 * float(np.vdot(k1, k1).real) - self.k2
            m[1:n, n] = -k1
        else:
            m[0, 1:n] = 2.0 * np.conj(k1)
            m[0, n] = self.k2
            m[1:n, n] = k1
        return m

    def _nu_matrix(self, inverse: bool = False) -> np.ndarray:
        n = self.halfplane.n
        m = np.eye(n + 1, dtype=complex)
        m[0, n] = -self.vertical_shift if inverse else self.vertical_shift
        return m

    def reconstructed_ball_map(self) -> LinearFractionalMap:
        """Undo the whole conjugation chain; equals the original map."""
        n = self.halfplane.n
        m = self._eta_matrix() @ self._nu_matrix() @ self.normal_matrix() \
            @ self._nu_matrix(inverse=True) @ self._eta_matrix(inverse=True)
        v = np.eye(n + 1, dtype=complex)
        v[:n, :n] = self.halfplane.rotation
        m = v.conj().T @ _cayley_inverse_matrix(n) @ m @ cayley_matrix(n) @ v
        return LinearFractionalMap.from_matrix(m)


def hyperbolic_normal_form(f: LinearFractionalMap) -> HyperbolicNormalForm:
    """Reduce a hyperbolic map to its translation-free half-plane form.

    The Denjoy-Wolff point goes to infinity under the Cayley conjugation;
    a Heisenberg translation with parameter k1 solving b = 2 (A* - I) k1
    removes the mixed term, and a vertical translation removes the
    imaginary part of the constant.  Maps with two boundary fixed points
    come out with c = d = 0 and are reported through the normalized block
    A' = A / sqrt(alpha).
    """
    dw = denjoy_wolff(f)
    if dw.dilation >= 1.0 - PARABOLIC_BAND:
        raise NotHyperbolic("dilation %.12g is in the parabolic band" % dw.dilation)
    hp = conjugate_to_halfplane(f, dw.location)
    alpha = hp.alpha
    if abs(alpha - dw.dilation) > 1e-8:
        raise NumericalInconsistency(
            "half-plane scaling %.12g disagrees with the boundary dilation %.12g" % (alpha, dw.dilation)
        )
    n = f.n
    nm = n - 1  # dimension of the w block
    a = hp.a_block
    k1 = np.linalg.solve(a.conj().T - np.eye(nm), hp.b / 2.0) if nm else np.zeros(0, dtype=complex)
    k2 = float(np.vdot(k1, k1).real)

    mpsi = hp.matrix
    eta = np.eye(n + 1, dtype=complex)
    eta[0, 1:n] = 2.0 * np.conj(k1)
    eta[0, n] = k2
    eta[1:n, n] = k1
    eta_inv = np.eye(n + 1, dtype=complex)
    eta_inv[0, 1:n] = -2.0 * np.conj(k1)
    eta_inv[0, n] = k2  # 2|k1|^2 - k2 = k2 by the choice Im k2 = 0
    eta_inv[1:n, n] = -k1
    m1 = eta_inv @ mpsi @ eta
    if float(np.linalg.norm(m1[0, 1:n])) > 1e-9:
        raise NumericalInconsistency("Heisenberg conjugation failed to remove the mixed term")

    c1 = complex(m1[0, n]) * alpha
    shift = -1j * c1.imag / (1.0 - alpha)
    nu = np.eye(n + 1, dtype=complex)
    nu[0, n] = shift
    nu_inv = np.eye(n + 1, dtype=complex)
    nu_inv[0, n] = -shift
    m2 = nu_inv @ m1 @ nu
    c_final = complex(m2[0, n]) * alpha
    if abs(c_final.imag) > 1e-10:
        raise NumericalInconsistency("vertical translation left Im c = %.3g" % c_final.imag)
    d_final = m2[1:n, n] * alpha

    n_boundary = len(fixed_points(f).boundary_points())
    if n_boundary == 1:
        case = "one_fixed"
        a_prime = None
        if c_final.real <= 0:
            raise NumericalInconsistency("one-fixed form needs c > 0, got %.3g" % c_final.real)
    elif n_boundary == 2:
        case = "two_fixed"
        if abs(c_final) > 1e-8 or float(np.linalg.norm(d_final)) > 1e-6:
            raise NumericalInconsistency("two-fixed form should have c = d = 0")
        c_final = 0.0
        d_final = np.zeros(nm, dtype=complex)
        a_prime = a / math.sqrt(alpha)
        if a_prime.size and float(np.linalg.norm(a_prime, 2)) > 1.0 + 1e-8:
            raise NumericalInconsistency("normalized block exceeds norm 1")
    else:
        raise MultipleBoundaryFixedPoints(
            "hyperbolic map with %d boundary fixed points" % n_boundary
        )
    return HyperbolicNormalForm(
        case=case,
        alpha=alpha,
        c=float(c_final.real),
        d=d_final,
        a_block=a,
        a_prime=a_prime,
        k1=k1,
        k2=k2,
        vertical_shift=complex(shift),
        halfplane=hp,
        tau=dw.location,
    )


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    kind: MapClass
    n: int
    fixed_set: FixedPointSet
    interior_fixed_point: np.ndarray | None
    boundary_fixed_points: tuple[FixedPoint, ...]
    denjoy_wolff_point: FixedPoint | None
    alpha: float | None
    automorphism: bool
    spectral_data: EllipticSpectralData | None
    normal_form: EllipticP0Form | HyperbolicNormalForm | None

    @property
    def p(self) -> int | None:
        return self.spectral_data.p if self.spectral_data is not None else None


def classify(f: LinearFractionalMap) -> Classification:
    """Full case split for a valid self-map.

    Elliptic maps (interior fixed point, possibly through a fixed slice)
    split by the automorphism test, then by unitary index, then by the
    boundary fixed-point count; the remaining maps carry a Denjoy-Wolff
    dilation and split into automorphisms, the parabolic band, and the
    hyperbolic one- and two-fixed cases.  Normal forms are attached where
    the spectral theory consumes them.
    """
    fps = fixed_points(f)
    z0 = fps.interior_point()
    aut = is_automorphism(f)
    bps = fps.boundary_points()
    if z0 is not None:
        data = elliptic_spectral_data(f, z0)
        if aut:
            kind = MapClass.ELLIPTIC_AUTOMORPHISM
        elif data.p > 0:
            kind = MapClass.ELLIPTIC_UNITARY_PART
        elif not bps:
            kind = MapClass.ELLIPTIC_INTERIOR_ONLY
        elif len(bps) == 1:
            kind = MapClass.ELLIPTIC_BOUNDARY_FIXED
        else:
            raise MultipleBoundaryFixedPoints(
                "elliptic map with unitary index 0 cannot fix %d boundary points" % len(bps)
            )
        nf = None
        if kind in (MapClass.ELLIPTIC_INTERIOR_ONLY, MapClass.ELLIPTIC_BOUNDARY_FIXED):
            nf = elliptic_p0_normal_form(f, z0)
        return Classification(
            kind=kind,
            n=f.n,
            fixed_set=fps,
            interior_fixed_point=z0,
            boundary_fixed_points=bps,
            denjoy_wolff_point=None,
            alpha=None,
            automorphism=aut,
            spectral_data=data,
            normal_form=nf,
        )
    dw = denjoy_wolff(f)
    alpha = dw.dilation
    if alpha >= 1.0 - PARABOLIC_BAND:
        # parabolic band asserts dilation 1; drop the numerical dust
        alpha = 1.0
    if aut:
        kind = MapClass.OTHER_AUTOMORPHISM
        nf = None
    elif alpha == 1.0:
        kind = MapClass.PARABOLIC
        nf = None
    else:
        count = len(bps)
        if count == 1:
            kind = MapClass.HYPERBOLIC_ONE_FIXED
        elif count == 2:
            kind = MapClass.HYPERBOLIC_TWO_FIXED
        else:
            raise MultipleBoundaryFixedPoints("hyperbolic map fixing %d boundary points" % count)
        nf = hyperbolic_normal_form(f)
    return Classification(
        kind=kind,
        n=f.n,
        fixed_set=fps,
        interior_fixed_point=None,
        boundary_fixed_points=bps,
        denjoy_wolff_point=dw,
        alpha=alpha,
        automorphism=aut,
        spectral_data=None,
        normal_form=nf,
    )


# ---------------------------------------------------------------------------
# serialization


def _c2pair(x: complex) -> list[float]:
    x = complex(x)
    return [float(x.real), float(x.imag)]


def _vec(v: np.ndarray) -> list:
    return [_c2pair(x) for x in np.asarray(v, dtype=complex).reshape(-1)]


def _mat(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[_c2pair(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def _chain_steps(nf: EllipticP0Form | HyperbolicNormalForm | None, n: int) -> list[dict]:
    """Conjugation chain as labeled projective matrices, outermost first."""
    if nf is None:
        return []
    if isinstance(nf, EllipticP0Form):
        rot = np.eye(n + 1, dtype=complex)
        rot[:n, :n] = nf.rotation
        return [
            {"kind": "involution_to_origin", "matrix": _mat(nf.to_origin.matrix)},
            {"kind": "rotation", "matrix": _mat(rot)},
        ]
    rot = np.eye(n + 1, dtype=complex)
    rot[:n, :n] = nf.halfplane.rotation
    return [
        {"kind": "rotation_to_e1", "matrix": _mat(rot)},
        {"kind": "cayley", "matrix": _mat(cayley_matrix(n))},
        {"kind": "heisenberg_translation", "matrix": _mat(nf._eta_matrix(inverse=True))},
        {"kind": "vertical_translation", "matrix": _mat(nf._nu_matrix(inverse=True))},
        {"kind": "normal_form", "matrix": _mat(nf.normal_matrix())},
    ]


def classification_to_json_dict(cl: Classification) -> dict:
    out: dict = {"kind": cl.kind.value, "N": cl.n, "automorphism": cl.automorphism}
    out["interior_fixed_point"] = None if cl.interior_fixed_point is None else _vec(cl.interior_fixed_point)
    out["boundary_fixed_points"] = [
        {"location": _vec(p.location), "dilation": p.dilation} for p in cl.boundary_fixed_points
    ]
    if cl.fixed_set.slice_dim is not None:
        out["fixed_slice"] = {
            "dimension": cl.fixed_set.slice_dim,
            "whole_ball": cl.fixed_set.whole_ball,
            "representative": _vec(cl.fixed_set.slice_point),
        }
    out["at_infinity"] = [_vec(v) for v in cl.fixed_set.at_infinity]
    out["alpha"] = cl.alpha
    if cl.denjoy_wolff_point is not None:
        out["denjoy_wolff"] = _vec(cl.denjoy_wolff_point.location)
    if cl.spectral_data is not None:
        out["p"] = cl.spectral_data.p
        out["eigenvalues"] = _vec(np.array(cl.spectral_data.eigenvalues))
        out["unimodular_eigenvalues"] = _vec(np.array(cl.spectral_data.unimodular))
        out["contractive_eigenvalues"] = _vec(np.array(cl.spectral_data.contractive))
    nf = cl.normal_form
    if isinstance(nf, EllipticP0Form):
        out["normal_form"] = {
            "model": "linear_on_ellipsoid",
            "delta": nf.delta,
            "domain": nf.domain,
            "r": nf.r,
            "linear_part": _mat(nf.a1),
            "conjugacy_residual": nf.conjugacy_residual,
        }
    elif isinstance(nf, HyperbolicNormalForm):
        out["normal_form"] = {
            "model": "halfplane_affine",
            "case": nf.case,
            "alpha": nf.alpha,
            "c": nf.c,
            "d": _vec(nf.d),
            "a_block": _mat(nf.a_block),
        }
        if nf.a_prime is not None:
            out["normal_form"]["a_prime"] = _mat(nf.a_prime)
            out["normal_form"]["a_prime_eigenvalues"] = _vec(np.array(nf.eigenvalues))
    out["conjugation_chain"] = _chain_steps(nf, cl.n)
    return out
