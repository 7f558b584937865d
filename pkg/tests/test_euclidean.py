import numpy as np
import pytest

from horofourier.euclidean import (EuclideanTestFunction,
                                   constcoeff_correspondence,
                                   euclid_exponential_type, euclid_forward,
                                   euclid_inverse, euclid_pw_seminorm,
                                   euclid_roundtrip_error,
                                   mode_factorization_check)
from horofourier.functions import offcenter_bump, radial_bump
from horofourier.geometry import H2, make_polar_grid
from horofourier.paley_wiener import StripGrid

F1 = EuclideanTestFunction(1.0)


def test_bump_profile_and_derivative():
    xs = np.array([-0.9, -0.3, 0.0, 0.55, 1.0, 1.7])
    t = xs / 1.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        want = np.where(np.abs(xs) < 1.0,
                        np.exp(-12.0 * t**2 / (1.0 - t**2)), 0.0)
    want = np.where(np.isfinite(want), want, 0.0)
    assert np.max(np.abs(F1.value(xs) - want)) < 1e-14
    # first derivative against central differences
    h = 1e-5
    mid = np.array([-0.4, 0.2, 0.6])
    fd = (F1.value(mid + h) - F1.value(mid - h)) / (2 * h)
    assert np.max(np.abs(F1.derivative(mid, 1) - fd)) < 1e-7
    with pytest.raises(ValueError):
        EuclideanTestFunction(-2.0)


def test_forward_at_zero_is_mass():
    got = euclid_forward(F1, 0.0)
    want = np.sum(F1.weights * F1.value(F1.nodes))
    assert abs(got - want) < 1e-14
    # even real function: transform is real and even
    xi = np.array([0.7, 2.2])
    vals = euclid_forward(F1, xi)
    assert np.max(np.abs(vals.imag)) < 1e-14
    assert np.allclose(euclid_forward(F1, -xi), vals)


def test_roundtrip():
    assert euclid_roundtrip_error(F1) < 1e-7
    shifted = EuclideanTestFunction(0.8, center=0.4)
    assert euclid_roundtrip_error(shifted) < 1e-6


def test_exponential_type_tracks_support():
    for R in (0.5, 1.0, 2.0):
        f = EuclideanTestFunction(R)
        t = euclid_exponential_type(lambda xi: euclid_forward(f, xi))
        assert t == pytest.approx(R, rel=2e-2)


def test_seminorm_and_wrong_radius_flag():
    phi_fn = lambda xi: euclid_forward(F1, xi)
    strip = StripGrid.default(1.0, H2)
    for n in (0, 2, 4):
        res = euclid_pw_seminorm(phi_fn, 1.0, n, strip)
        assert np.isfinite(res.value) and not res.diverged
    wrong = euclid_pw_seminorm(phi_fn, 0.5, 2, strip)
    assert wrong.diverged
    with pytest.raises(ValueError):
        euclid_pw_seminorm(phi_fn, -1.0, 2, strip)


def test_constant_coefficient_correspondence():
    assert constcoeff_correspondence([0.0, 0.0, 1.0], F1) < 1e-10
    assert constcoeff_correspondence([0.0, 1.0], F1) < 1e-10
    assert constcoeff_correspondence([2.0, 0.0, 3.0, 1.0], F1) < 1e-9


def test_inverse_grid_handling():
    xi = 0.05 * np.arange(-1200, 1201)
    phi = euclid_forward(F1, xi)
    rec = euclid_inverse(phi, xi, np.array([0.0, 0.3]))
    want = F1.value(np.array([0.0, 0.3]))
    assert np.max(np.abs(rec - want)) < 1e-7


def test_mode_factorization_bridge():
    f = offcenter_bump(1.2, 0.5, params=H2)
    g = make_polar_grid(1.2, 48, 96, H2)
    rep = mode_factorization_check(f, g, k_list=(4, 8))
    tails = [v for _, v in rep["tail_norms"]]
    assert tails[0] > tails[1]
    types = np.array([t for _, t in rep["per_mode_types"]])
    assert np.max(types) <= 1.1 * f.support_radius
    assert len(rep["modes_active"]) > 3


def test_mode_factorization_radial_activates_single_mode():
    f = radial_bump(1.0, H2)
    g = make_polar_grid(1.0, 48, 96, H2)
    rep = mode_factorization_check(f, g, k_list=(4, 8))
    assert rep["modes_active"] == [0]


def test_mode_factorization_needs_plane_model():
    from horofourier.geometry import H3
    f = radial_bump(1.0, H3)
    g = make_polar_grid(1.0, 16, 16, H3)
    with pytest.raises(ValueError):
        mode_factorization_check(f, g)
