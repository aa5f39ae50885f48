"""Spectral sets per map class, membership/discretization consistency, and
the essential radius estimator against closed forms."""

import math

import numpy as np
import pytest

import lfmspec as L
from lfmspec import LinearFractionalMap
from lfmspec.spectra import Annulus, Circle, ClosedDisk, Point, PointFamily, cloud_to_csv


def lfm_1d(a, b, c, d):
    return LinearFractionalMap([[a]], [b], [c], d)


def diag_map(*entries):
    n = len(entries)
    return LinearFractionalMap(np.diag(entries), np.zeros(n), np.zeros(n), 1)


def two_fixed_plant(a):
    hp = L.HalfPlaneMap(
        n=2,
        alpha=0.5,
        b=np.zeros(1),
        c=0.0,
        a_block=np.array([[a * math.sqrt(0.5)]]),
        d=np.zeros(1),
        rotation=np.eye(2, dtype=complex),
        tau=np.array([1.0, 0.0]),
    )
    return hp.pulled_back_to_ball()


# ---------------------------------------------------------------------------
# elliptic automorphisms


def test_irrational_rotation_full_circle():
    th = 2 * math.pi * (math.sqrt(2) - 1)
    s = L.spectrum(diag_map(np.exp(1j * th)))
    assert s.kind == L.MapClass.ELLIPTIC_AUTOMORPHISM
    assert [c for c in s.components if isinstance(c, Circle)] == [Circle(1.0)]
    assert s.contains(np.exp(0.123j))
    assert not s.contains(0.5)


def test_rational_rotation_finite_subgroup():
    s = L.spectrum(diag_map(1j))
    fam = [c for c in s.components if isinstance(c, PointFamily)]
    assert len(fam) == 1
    pts = sorted(fam[0].points, key=lambda z: (z.real, z.imag))
    assert len(pts) == 4
    for k in range(4):
        assert s.contains(1j ** k)
    assert not s.contains(np.exp(0.3j))


def test_rational_rotation_mixed_orders():
    # orders 4 and 6 on the two coordinates: subgroup generated has order 12
    s = L.spectrum(diag_map(1j, np.exp(1j * math.pi / 3)))
    fam = [c for c in s.components if isinstance(c, PointFamily)][0]
    assert len(fam.points) == 12
    assert s.contains(np.exp(1j * math.pi / 6))


# ---------------------------------------------------------------------------
# elliptic with unitary part


def test_unitary_part_irrational_circles():
    th = 2 * math.pi * (math.sqrt(2) - 1)
    f = diag_map(np.exp(1j * th), 0.5)
    s = L.spectrum(f)
    assert s.kind == L.MapClass.ELLIPTIC_UNITARY_PART
    circles = sorted(
        (c.radius for c in s.components if isinstance(c, Circle)), reverse=True
    )
    assert circles[:4] == pytest.approx([1.0, 0.5, 0.25, 0.125])
    assert any(isinstance(c, Point) and c.value == 0 for c in s.components)
    assert s.contains(np.exp(2.0j) * 0.25)
    assert not s.contains(0.7)


def test_unitary_part_rational_points():
    f = diag_map(1j, 0.5)
    s = L.spectrum(f)
    fams = [c for c in s.components if isinstance(c, PointFamily)]
    assert fams
    # i^k 2^{-m} for all k, m: check a few
    for val in (1.0, 1j * 0.5, -0.25, 0.5):
        assert s.contains(val)
    assert not s.contains(0.3)
    assert any(isinstance(c, Point) and c.value == 0 for c in s.components)


# ---------------------------------------------------------------------------
# elliptic, interior fixed point only


def test_interior_only_products():
    s = L.spectrum(diag_map(0.5, 1 / 3))
    assert s.kind == L.MapClass.ELLIPTIC_INTERIOR_ONLY
    for val in (1.0, 0.5, 1 / 3, 0.25, 1 / 6, 1 / 9, 0.5 ** 5 / 3 ** 2):
        assert s.contains(val), val
    assert s.contains(0.0)
    assert not s.contains(0.4)
    assert not s.contains(-0.5)
    assert s.spectral_radius == pytest.approx(1.0)


def test_interior_only_rotation_times_contraction():
    lam = 0.5 * np.exp(0.7j)
    s = L.spectrum(diag_map(lam))
    for k in range(1, 6):
        assert s.contains(lam ** k)
    assert s.contains(1.0)
    assert not s.contains(abs(lam))  # rotated off the real axis


# ---------------------------------------------------------------------------
# hyperbolic and boundary-fixed elliptic


def test_boundary_fixed_disk_and_one():
    s = L.spectrum(lfm_1d(1, 0, -1, 2))
    assert s.kind == L.MapClass.ELLIPTIC_BOUNDARY_FIXED
    disks = [c for c in s.components if isinstance(c, ClosedDisk)]
    assert len(disks) == 1
    assert disks[0].radius == pytest.approx(2 ** -0.5, abs=1e-12)
    assert s.contains(1.0)
    assert s.contains(0.3)
    assert s.contains(2 ** -0.5 * np.exp(1j))
    assert not s.contains(0.9)
    assert s.spectral_radius == pytest.approx(1.0)


def test_one_fixed_pure_disk():
    s = L.spectrum(lfm_1d(0.5, 0.5, 0, 1))
    assert s.kind == L.MapClass.HYPERBOLIC_ONE_FIXED
    assert s.components == (ClosedDisk(radius=pytest.approx(math.sqrt(2))),)
    assert s.contains(math.sqrt(2))
    assert s.contains(-1.2 + 0.4j)
    assert not s.contains(1.5)
    assert s.spectral_radius == pytest.approx(math.sqrt(2))


def test_two_fixed_annuli():
    s = L.spectrum(two_fixed_plant(0.6), tail_tol=1e-9)
    assert s.kind == L.MapClass.HYPERBOLIC_TWO_FIXED
    assert s.is_closure
    ann = [c for c in s.components if isinstance(c, Annulus)]
    radii = sorted(((a.r_inner, a.r_outer) for a in ann), reverse=True)
    # N = 2, alpha = 1/2: the base annulus is |alpha| <= |z| <= 1/|alpha|
    assert radii[0] == (pytest.approx(0.5), pytest.approx(2.0))
    assert radii[1] == (pytest.approx(0.3), pytest.approx(1.2))
    assert s.contains(2.0)
    assert s.contains(1.2)
    assert s.contains(0.0)
    assert not s.contains(2.01)
    assert s.spectral_radius == pytest.approx(2.0)


def test_two_fixed_complex_eigenvalue_same_annuli():
    a = 0.5 * np.exp(1j * math.pi / 3)
    s = L.spectrum(two_fixed_plant(a), tail_tol=1e-9)
    ann = [c for c in s.components if isinstance(c, Annulus)]
    outer = sorted((x.r_outer for x in ann), reverse=True)
    assert outer[0] == pytest.approx(2.0)
    assert outer[1] == pytest.approx(1.0)
    # membership only sees the modulus
    assert s.contains(0.5 * np.exp(2.2j))


# ---------------------------------------------------------------------------
# unsupported classes


def test_parabolic_raises_with_radius():
    f = lfm_1d(1, 1, -1, 3)
    with pytest.raises(L.UnsupportedParabolic) as exc:
        L.spectrum(f)
    assert exc.value.spectral_radius == pytest.approx(1.0)
    assert exc.value.kind == L.MapClass.PARABOLIC


def test_hyperbolic_automorphism_raises():
    f = lfm_1d(1, 0.5, 0.5, 1)
    with pytest.raises(L.UnsupportedAutomorphism) as exc:
        L.spectrum(f)
    assert exc.value.spectral_radius > 1.0


def test_spectral_radius_shortcut():
    assert L.spectral_radius(diag_map(0.5)) == pytest.approx(1.0)
    assert L.spectral_radius(lfm_1d(0.5, 0.5, 0, 1)) == pytest.approx(math.sqrt(2))
    assert L.spectral_radius(lfm_1d(1, 1, -1, 3)) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# structural invariants


SUPPORTED = [
    diag_map(np.exp(2j * math.pi * (math.sqrt(2) - 1))),
    diag_map(1j),
    diag_map(np.exp(2j * math.pi * (math.sqrt(2) - 1)), 0.5),
    diag_map(1j, 0.5),
    diag_map(0.5, 1 / 3),
    lfm_1d(1, 0, -1, 2),
    lfm_1d(0.5, 0.5, 0, 1),
    two_fixed_plant(0.6),
]


@pytest.mark.parametrize("f", SUPPORTED)
def test_radius_consistency(f):
    s = L.spectrum(f, tail_tol=1e-8)
    assert s.max_modulus() == pytest.approx(s.spectral_radius, abs=1e-9)


@pytest.mark.parametrize("f", SUPPORTED)
def test_discretization_points_are_members(f):
    s = L.spectrum(f, tail_tol=1e-8)
    values, index = s.discretize(32)
    assert len(values) == len(index)
    assert len(values) > 0
    for v in values:
        assert s.contains(v, tol=1e-9)


@pytest.mark.parametrize("f", SUPPORTED)
def test_json_payload_shape(f):
    s = L.spectrum(f, tail_tol=1e-8)
    d = s.to_json_dict()
    assert d["kind"] == str(s.kind)
    assert d["spectral_radius"] == pytest.approx(s.spectral_radius)
    for comp in d["components"]:
        assert comp["type"] in {"points", "circle", "disk", "annulus"}
        if comp["type"] == "annulus":
            assert set(comp) >= {"r_in", "r_out"}
        if comp["type"] == "points":
            assert all(len(v) == 2 for v in comp["values"])


def test_zero_point_present_when_family_accumulates():
    s = L.spectrum(diag_map(1j, 0.5))
    fams = [c for c in s.components if isinstance(c, PointFamily)]
    assert any(f.accumulates_at_zero for f in fams)
    assert any(isinstance(c, Point) and c.value == 0 for c in s.components)


def test_tail_tol_trims_family():
    tight = L.spectrum(diag_map(0.5, 1 / 3), tail_tol=1e-12)
    loose = L.spectrum(diag_map(0.5, 1 / 3), tail_tol=1e-3)
    n_tight = sum(len(c.points) for c in tight.components if isinstance(c, PointFamily))
    n_loose = sum(len(c.points) for c in loose.components if isinstance(c, PointFamily))
    assert n_loose < n_tight
    for c in loose.components:
        if isinstance(c, PointFamily):
            assert all(abs(p) >= 1e-3 for p in c.points)


def test_cloud_csv_format():
    s = L.spectrum(lfm_1d(1, 0, -1, 2))
    text = cloud_to_csv(s, resolution=16)
    lines = text.strip().split("\n")
    assert lines[0] == "re,im,component_index"
    row = lines[1].split(",")
    assert len(row) == 3
    complex(float(row[0]), float(row[1]))  # parses


# ---------------------------------------------------------------------------
# essential radius estimation


def test_estimator_one_fixed_disk_map():
    f = lfm_1d(1, 0, -1, 2)
    est = L.essential_radius_estimate(f, n_max=20)
    target = 2 ** -0.5
    assert abs(est.limit - target) / target < 0.05
    assert est.tau == pytest.approx([1.0])
    assert len(est.g_values) > 0


def test_estimator_matches_closed_form_n2():
    f = LinearFractionalMap(
        np.array([[0.5, 0], [0, 0.5]]), [0.5, 0], [0, 0], 1.0
    )
    cl = L.classify(f)
    closed = L.essential_radius_closed_form(cl)
    assert closed == pytest.approx(2.0)
    est = L.essential_radius_estimate(f, n_max=20)
    assert abs(est.limit - closed) / closed < 0.05


def test_estimator_elliptic_automorphism_is_one():
    # unitary rotation preserves every quotient: the limit must be 1
    est = L.essential_radius_estimate(
        diag_map(np.exp(0.7j)), tau=np.array([1.0]), n_max=10
    )
    assert est.limit == pytest.approx(1.0, abs=1e-6)


def test_estimator_requires_boundary_point():
    with pytest.raises(L.NoBoundaryFixedPoint):
        L.essential_radius_estimate(diag_map(0.5, 1 / 3), n_max=5)


def test_closed_form_only_for_disk_classes():
    assert L.essential_radius_closed_form(L.classify(diag_map(0.5))) is None
    cl = L.classify(lfm_1d(1, 0, -1, 2))
    assert L.essential_radius_closed_form(cl) == pytest.approx(2 ** -0.5)
