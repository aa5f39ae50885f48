"""Truncated power series in several complex variables and the Galerkin
compression of a composition operator onto polynomials.

Everything here is a numerical cross-check for the exact spectra: finite
sections of the operator matrix, eigenfunction residuals, and the two
graded norms used in the norm-equivalence check.  Series are sparse
dictionaries keyed by exponent multi-indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    ParameterConstraintViolated,
    SizeCapExceeded,
    ZeroConstantTerm,
    ZeroFunction,
)
from .maps import LinearFractionalMap

__all__ = [
    "TruncatedSeries",
    "Compression",
    "basis_multi_indices",
    "monomial_norm_sq",
    "binomial_series",
    "map_power_series",
    "compose_series",
    "build_compression",
    "compression_spectrum",
    "compression_to_csv",
    "compression_matrix_to_csv",
    "compression_basis_json",
    "series_from_vector",
    "eigenfunction_residual",
    "hardy_norm_sq",
    "weighted_norm_sq",
    "sobolev_norm_sq",
    "norm_equivalence_interval",
]

# truncation degrees beyond which the compression matrix is refused
MAX_COMPRESSION_DEGREE = {1: 60, 2: 25, 3: 12}
MAX_BASIS_SIZE = 3000


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def basis_multi_indices(n: int, degree: int) -> list[tuple[int, ...]]:
    """Monomial exponents of total degree <= degree, graded, and within
    each degree in lexicographically descending order."""
    if n < 1 or degree < 0:
        raise ValueError("need n >= 1 and degree >= 0")
    out: list[tuple[int, ...]] = []
    for total in range(degree + 1):
        out.extend(_compositions(total, n))
    return out


def monomial_norm_sq(alpha: tuple[int, ...]) -> float:
    """Squared Hardy-space norm of z^alpha on the unit sphere of C^n,
    n = len(alpha): (n-1)! alpha! / (n-1+|alpha|)!."""
    n = len(alpha)
    if n < 1 or any(a < 0 for a in alpha):
        raise ValueError("alpha must be a nonempty tuple of nonnegative ints")
    k = sum(alpha)
    if n - 1 + k <= 200:
        num = math.factorial(n - 1)
        for a in alpha:
            num *= math.factorial(a)
        return float(Fraction(num, math.factorial(n - 1 + k)))
    logv = math.lgamma(n)
    for a in alpha:
        logv += math.lgamma(a + 1)
    logv -= math.lgamma(n + k)
    return math.exp(logv)


class TruncatedSeries:
    """Polynomial truncation of a power series in n complex variables.

    ``degree`` is the truncation order: arithmetic discards any term whose
    total degree exceeds it, and combining two series truncates at the
    smaller of the two orders (the information limit of the operands).
    """

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: dict[tuple[int, ...], complex] | None = None):
        if n < 1 or degree < 0:
            raise ValueError("need n >= 1 and degree >= 0")
        self.n = n
        self.degree = degree
        cleaned: dict[tuple[int, ...], complex] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError("bad multi-index %r" % (alpha,))
            if sum(alpha) > degree:
                continue
            c = complex(c)
            if c != 0:
                cleaned[alpha] = cleaned.get(alpha, 0.0 + 0.0j) + c
        self.coeffs = {a: c for a, c in cleaned.items() if c != 0}

    # -- constructors

    @classmethod
    def constant(cls, n: int, degree: int, value: complex) -> "TruncatedSeries":
        return cls(n, degree, {(0,) * n: complex(value)})

    @classmethod
    def coordinate(cls, n: int, degree: int, j: int) -> "TruncatedSeries":
        if not 0 <= j < n:
            raise ValueError("coordinate index out of range")
        alpha = tuple(1 if i == j else 0 for i in range(n))
        return cls(n, degree, {alpha: 1.0 + 0.0j})

    @classmethod
    def monomial(cls, n: int, degree: int, alpha: tuple[int, ...], coeff: complex = 1.0) -> "TruncatedSeries":
        return cls(n, degree, {tuple(alpha): complex(coeff)})

    # -- queries

    def coefficient(self, alpha: tuple[int, ...]) -> complex:
        return self.coeffs.get(tuple(alpha), 0.0 + 0.0j)

    def items(self):
        """Terms in graded, within-degree lex-descending order."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), tuple(-a for a in kv[0])))

    def homogeneous_part(self, k: int) -> dict[tuple[int, ...], complex]:
        return {a: c for a, c in self.coeffs.items() if sum(a) == k}

    def support_degree(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    def evaluate(self, z) -> complex:
        z = np.asarray(z, dtype=complex).reshape(-1)
        if z.shape[0] != self.n:
            raise DimensionMismatch("point has %d coordinates, series has %d variables" % (z.shape[0], self.n))
        total = 0.0 + 0.0j
        for alpha, c in self.coeffs.items():
            term = c
            for zj, aj in zip(z, alpha):
                if aj:
                    term *= zj ** aj
            total += term
        return complex(total)

    def truncated(self, new_degree: int) -> "TruncatedSeries":
        return TruncatedSeries(self.n, new_degree, self.coeffs)

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.n, self.degree, dict(self.coeffs))

    # -- arithmetic

    def _check_compatible(self, other: "TruncatedSeries") -> int:
        if self.n != other.n:
            raise DimensionMismatch("series in %d and %d variables" % (self.n, other.n))
        return min(self.degree, other.degree)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            deg = self._check_compatible(other)
            out = dict(self.coeffs)
            for a, c in other.coeffs.items():
                out[a] = out.get(a, 0.0 + 0.0j) + c
            return TruncatedSeries(self.n, deg, out)
        return self + TruncatedSeries.constant(self.n, self.degree, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.n, self.degree, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            deg = self._check_compatible(other)
            out: dict[tuple[int, ...], complex] = {}
            # iterate the sparser factor outside
            fa, fb = (self, other) if len(self.coeffs) <= len(other.coeffs) else (other, self)
            for a, ca in fa.coeffs.items():
                da = sum(a)
                for b, cb in fb.coeffs.items():
                    if da + sum(b) > deg:
                        continue
                    key = tuple(x + y for x, y in zip(a, b))
                    out[key] = out.get(key, 0.0 + 0.0j) + ca * cb
            return TruncatedSeries(self.n, deg, out)
        w = complex(other)
        return TruncatedSeries(self.n, self.degree, {a: c * w for a, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return "TruncatedSeries(n=%d, degree=%d, terms=%d)" % (self.n, self.degree, len(self.coeffs))


def binomial_series(exponent: complex, degree: int, n: int = 1, var: int = 0) -> TruncatedSeries:
    """(1 - z_var)^exponent through the given degree, as a series in n
    variables.  Coefficients follow c_{k+1} = c_k (k - exponent)/(k + 1)."""
    if not 0 <= var < n:
        raise ValueError("variable index out of range")
    s = complex(exponent)
    coeffs: dict[tuple[int, ...], complex] = {}
    c = 1.0 + 0.0j
    for k in range(degree + 1):
        alpha = tuple(k if i == var else 0 for i in range(n))
        coeffs[alpha] = c
        c = c * (k - s) / (k + 1)
    return TruncatedSeries(n, degree, coeffs)


# ---------------------------------------------------------------------------
# series of a map's monomial powers


def _numerator_series(f: LinearFractionalMap, degree: int) -> list[TruncatedSeries]:
    out = []
    for j in range(f.n):
        terms: dict[tuple[int, ...], complex] = {}
        if f.b[j] != 0:
            terms[(0,) * f.n] = complex(f.b[j])
        for i in range(f.n):
            if f.a[j, i] != 0:
                alpha = tuple(1 if t == i else 0 for t in range(f.n))
                terms[alpha] = complex(f.a[j, i])
        out.append(TruncatedSeries(f.n, degree, terms))
    return out


def _denominator_series(f: LinearFractionalMap, degree: int) -> TruncatedSeries:
    terms: dict[tuple[int, ...], complex] = {(0,) * f.n: complex(f.d)}
    for i in range(f.n):
        if f.c[i] != 0:
            alpha = tuple(1 if t == i else 0 for t in range(f.n))
            terms[alpha] = complex(np.conj(f.c[i]))
    return TruncatedSeries(f.n, degree, terms)


def _reciprocal_of_affine(den: TruncatedSeries) -> TruncatedSeries:
    """1/den for an affine den with nonzero constant term, truncated at
    den.degree.  Fixed-point iteration X <- 1/d0 - (u/d0) X gains one
    correct degree per step."""
    d0 = den.coefficient((0,) * den.n)
    if d0 == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    u = den - TruncatedSeries.constant(den.n, den.degree, d0)
    if u.support_degree() > 1:
        raise ValueError("reciprocal helper expects an affine denominator")
    inv_d0 = TruncatedSeries.constant(den.n, den.degree, 1.0 / d0)
    x = inv_d0.copy()
    if not u.coeffs:
        return x
    scaled = u * (1.0 / d0)
    for _ in range(den.degree):
        x = inv_d0 - scaled * x
    return x


class _MapPowerCache:
    """Shared cache of numerator products and reciprocal-denominator powers
    for all monomial powers of one map at one truncation degree."""

    def __init__(self, f: LinearFractionalMap, degree: int):
        self.f = f
        self.n = f.n
        self.degree = degree
        self.num = _numerator_series(f, degree)
        self.den_inv = _reciprocal_of_affine(_denominator_series(f, degree))
        self._den_inv_pows: list[TruncatedSeries] = [TruncatedSeries.constant(f.n, degree, 1.0)]
        self._num_prod: dict[tuple[int, ...], TruncatedSeries] = {
            (0,) * f.n: TruncatedSeries.constant(f.n, degree, 1.0)
        }
        self._full: dict[tuple[int, ...], TruncatedSeries] = {}

    def _den_inv_power(self, k: int) -> TruncatedSeries:
        while len(self._den_inv_pows) <= k:
            self._den_inv_pows.append(self._den_inv_pows[-1] * self.den_inv)
        return self._den_inv_pows[k]

    def _numerator_product(self, beta: tuple[int, ...]) -> TruncatedSeries:
        cached = self._num_prod.get(beta)
        if cached is not None:
            return cached
        # peel one factor off the first active coordinate; recursion depth
        # equals |beta|, so walk iteratively
        chain = []
        cur = beta
        while cur not in self._num_prod:
            j = next(i for i, b in enumerate(cur) if b > 0)
            chain.append((cur, j))
            cur = tuple(b - (1 if i == j else 0) for i, b in enumerate(cur))
        acc = self._num_prod[cur]
        for key, j in reversed(chain):
            acc = acc * self.num[j]
            self._num_prod[key] = acc
        return acc

    def power(self, beta: tuple[int, ...]) -> TruncatedSeries:
        """Series of (phi(z))^beta = (prod_j num_j^beta_j) / den^|beta|."""
        beta = tuple(int(b) for b in beta)
        if len(beta) != self.n or any(b < 0 for b in beta):
            raise ValueError("bad multi-index %r" % (beta,))
        cached = self._full.get(beta)
        if cached is None:
            cached = self._numerator_product(beta) * self._den_inv_power(sum(beta))
            self._full[beta] = cached
        return cached


def map_power_series(f: LinearFractionalMap, beta: tuple[int, ...], degree: int) -> TruncatedSeries:
    """Truncated series of the monomial (phi(z))^beta."""
    return _MapPowerCache(f, degree).power(tuple(beta))


def compose_series(
    series: TruncatedSeries,
    f: LinearFractionalMap,
    degree: int,
    cache: "_MapPowerCache | None" = None,
) -> TruncatedSeries:
    """Series of series(phi(z)) through the given degree.

    Every term of the input contributes, including terms above the output
    degree: a monomial phi^beta generally has components of all degrees,
    so truncating the input first would corrupt low-order coefficients.
    """
    if series.n != f.n:
        raise DimensionMismatch("series in %d variables, map on the %d-ball" % (series.n, f.n))
    if cache is None or cache.degree != degree:
        cache = _MapPowerCache(f, degree)
    out = TruncatedSeries.constant(f.n, degree, 0.0)
    for beta, c in series.items():
        out = out + cache.power(beta) * c
    return out


# ---------------------------------------------------------------------------
# Galerkin compression


@dataclass(frozen=True)
class Compression:
    """Matrix of the compressed composition operator on polynomials of
    degree <= degree, in the orthonormal monomial basis, grlex order."""

    matrix: np.ndarray
    basis: tuple[tuple[int, ...], ...]
    norms: np.ndarray
    n: int
    degree: int


def _check_compression_cap(n: int, degree: int) -> None:
    cap = MAX_COMPRESSION_DEGREE.get(n)
    if cap is not None and degree > cap:
        raise SizeCapExceeded(
            "degree %d exceeds the compression cap %d for %d variables" % (degree, cap, n)
        )
    size = math.comb(n + degree, n)
    if size > MAX_BASIS_SIZE:
        raise SizeCapExceeded("basis has %d monomials, cap is %d" % (size, MAX_BASIS_SIZE))


def build_compression(f: LinearFractionalMap, degree: int) -> Compression:
    """Assemble the matrix M[i, j] = <C_phi e_j, e_i> for the orthonormal
    monomial basis e_j = z^beta_j / ||z^beta_j||.

    When phi(0) = 0 the matrix is exactly block lower triangular in the
    graded order: phi^beta then has no components below degree |beta|.
    """
    _check_compression_cap(f.n, degree)
    basis = basis_multi_indices(f.n, degree)
    pos = {alpha: i for i, alpha in enumerate(basis)}
    norms = np.array([math.sqrt(monomial_norm_sq(alpha)) for alpha in basis])
    cache = _MapPowerCache(f, degree)
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, beta in enumerate(basis):
        p = cache.power(beta)
        for alpha, c in p.coeffs.items():
            i = pos[alpha]
            m[i, j] = c * norms[i] / norms[j]
    return Compression(matrix=m, basis=tuple(basis), norms=norms, n=f.n, degree=degree)


def compression_spectrum(
    f: LinearFractionalMap,
    degree: int,
    return_vectors: bool = False,
):
    """Eigenvalues of the compression, sorted by decreasing modulus (ties
    by real then imaginary part).  With return_vectors, also the matching
    eigenvector columns and the Compression itself."""
    comp = build_compression(f, degree)
    if return_vectors:
        eigs, vecs = np.linalg.eig(comp.matrix)
    else:
        eigs = np.linalg.eigvals(comp.matrix)
        vecs = None
    order = sorted(range(eigs.shape[0]), key=lambda i: (-abs(eigs[i]), eigs[i].real, eigs[i].imag))
    eigs = eigs[order]
    if return_vectors:
        return eigs, vecs[:, order], comp
    return eigs


def compression_to_csv(eigenvalues: np.ndarray) -> str:
    """Eigenvalue list as CSV text with a `re,im` header."""
    lines = ["re,im"]
    for lam in np.asarray(eigenvalues, dtype=complex).reshape(-1):
        lines.append("%s,%s" % (format(lam.real, ".17g"), format(lam.imag, ".17g")))
    return "\n".join(lines) + "\n"


def compression_matrix_to_csv(comp: Compression) -> str:
    """Nonzero matrix entries as CSV rows `row,col,re,im` in the grlex
    basis order (see compression_basis_json for the ordering)."""
    lines = ["row,col,re,im"]
    for i in range(comp.matrix.shape[0]):
        for j in range(comp.matrix.shape[1]):
            v = comp.matrix[i, j]
            if v != 0:
                lines.append(
                    "%d,%d,%s,%s" % (i, j, format(v.real, ".17g"), format(v.imag, ".17g"))
                )
    return "\n".join(lines) + "\n"


def compression_basis_json(comp: Compression) -> dict:
    """Header describing the basis ordering of the compression matrix."""
    return {
        "n": comp.n,
        "degree": comp.degree,
        "ordering": "graded by total degree, lexicographically descending within each degree",
        "basis": [list(alpha) for alpha in comp.basis],
        "norms": [float(x) for x in comp.norms],
    }


def series_from_vector(comp: Compression, vec: np.ndarray) -> TruncatedSeries:
    """Polynomial with coordinates vec in the orthonormal monomial basis."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if vec.shape[0] != len(comp.basis):
        raise DimensionMismatch("vector length %d, basis size %d" % (vec.shape[0], len(comp.basis)))
    coeffs = {
        alpha: vec[i] / comp.norms[i]
        for i, alpha in enumerate(comp.basis)
        if vec[i] != 0
    }
    return TruncatedSeries(comp.n, comp.degree, coeffs)


# ---------------------------------------------------------------------------
# norms and residuals


def hardy_norm_sq(series: TruncatedSeries) -> float:
    """Squared Hardy norm of the truncation: sum |a_alpha|^2 ||z^alpha||^2."""
    return float(sum(abs(c) ** 2 * monomial_norm_sq(a) for a, c in series.coeffs.items()))


def eigenfunction_residual(
    f: LinearFractionalMap,
    eigenvalue: complex,
    func: TruncatedSeries,
    degree: int,
) -> float:
    """Relative Hardy-norm residual ||F o phi - lambda F|| / ||F|| through
    the comparison degree.

    The composition uses every supplied term of F, so F may (and for
    boundary-singular eigenfunctions should) carry far more terms than the
    comparison degree; see compose_series.
    """
    if not func.coeffs:
        raise ZeroFunction("candidate eigenfunction is identically zero")
    comp = compose_series(func, f, degree)
    ftrunc = func.truncated(degree)
    denom = hardy_norm_sq(ftrunc)
    if denom == 0.0:
        raise ZeroFunction("candidate eigenfunction vanishes through the comparison degree")
    diff = comp - ftrunc * complex(eigenvalue)
    return math.sqrt(hardy_norm_sq(diff) / denom)


def weighted_norm_sq(series: TruncatedSeries, nu: float) -> float:
    """Graded norm sum_k (k+1)^(2 nu) ||f_k||^2 with f_k the degree-k
    homogeneous part in the Hardy norm."""
    total = 0.0
    for alpha, c in series.coeffs.items():
        k = sum(alpha)
        total += (k + 1.0) ** (2.0 * nu) * abs(c) ** 2 * monomial_norm_sq(alpha)
    return float(total)


def _radial_moment(c: float, k: int) -> float:
    """Gamma(c+1) k! / Gamma(c+k+2); 1 when c = -1 (boundary case)."""
    if c <= -1.0 + 1e-12:
        return 1.0
    return math.exp(math.lgamma(c + 1.0) + math.lgamma(k + 1.0) - math.lgamma(c + k + 2.0))


def sobolev_norm_sq(series: TruncatedSeries, s: float, nu: float) -> float:
    """Smoothness-weighted squared norm
    |f(0)|^2 + sum_{k>=1} k^(2s) R(c,k) ||f_k||^2 with c = 2s - 2 nu - 1.

    Requires c >= -1 so the radial weight is integrable."""
    c = 2.0 * s - 2.0 * nu - 1.0
    if c < -1.0 - 1e-12:
        raise ParameterConstraintViolated(
            "need 2 s - 2 nu - 1 >= -1 (got %.6g) for an integrable radial weight" % c
        )
    total = 0.0
    for alpha, coeff in series.coeffs.items():
        k = sum(alpha)
        if k == 0:
            total += abs(coeff) ** 2
        else:
            total += (float(k) ** (2.0 * s)) * _radial_moment(c, k) * abs(coeff) ** 2 * monomial_norm_sq(alpha)
    return float(total)


def norm_equivalence_interval(s: float, nu: float, k_max: int) -> tuple[float, float]:
    """[min, max] over degrees k <= k_max of the per-degree ratio of the
    weighted norm to the Sobolev norm.

    For any series supported in degrees <= k_max the ratio of the two
    squared norms lies in this interval (a weighted mediant of the
    per-degree ratios)."""
    c = 2.0 * s - 2.0 * nu - 1.0
    if c < -1.0 - 1e-12:
        raise ParameterConstraintViolated(
            "need 2 s - 2 nu - 1 >= -1 (got %.6g) for an integrable radial weight" % c
        )
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    ratios = [1.0]
    for k in range(1, k_max + 1):
        ratios.append((k + 1.0) ** (2.0 * nu) / (float(k) ** (2.0 * s) * _radial_moment(c, k)))
    return (min(ratios), max(ratios))
