import numpy as np
import pytest

from horofourier.functions import dressed_bump, radial_bump
from horofourier.geometry import H2, H3, bracket_matrix, make_polar_grid
from horofourier.operators import (InvariantOperator, SymbolVanishes,
                                   apply_physical, apply_spectral,
                                   diagram_defect, division_pw_check,
                                   fd_laplacian, solve, support_radius)
from horofourier.transform import PlancherelDensity, forward_transform

F_RAD = radial_bump(1.0, H2)
G_RAD = make_polar_grid(1.0, 64, 128, H2)
DENS_H2 = PlancherelDensity(H2)
D_LAP = InvariantOperator([0.0, 1.0], H2)
D_QUAD = InvariantOperator([-1.0, 3.0, 1.0], H2)


def test_symbol_formula():
    lam = np.array([0.0, 0.7, 2.0 + 0.3j])
    z = -(lam**2 + 0.25)
    assert np.allclose(D_LAP.symbol(lam), z)
    assert np.allclose(D_QUAD.symbol(lam), -1.0 + 3.0 * z + z**2)
    assert np.allclose(D_QUAD.poly(z), -1.0 + 3.0 * z + z**2)
    lam3 = np.array([1.1])
    assert np.allclose(InvariantOperator([0.0, 1.0], H3).symbol(lam3),
                       -(lam3**2 + 1.0))


def test_kernel_is_laplacian_eigenfunction():
    # e^((-i*lam + rho) A(x,b)) has eigenvalue -(lam^2 + rho^2)
    b = np.array([0.0, 1.0])
    lam = 1.4

    def kernel(pts):
        A = bracket_matrix(np.atleast_2d(pts), b[None, :])[:, 0]
        return np.exp((-1j * lam + 0.5) * A)

    pts = np.array([[0.2, 0.1], [-0.3, 0.25]])
    lap = fd_laplacian(kernel, pts, H2)
    want = -(lam**2 + 0.25) * kernel(pts)
    assert np.max(np.abs(lap - want)) < 1e-6 * np.max(np.abs(want))


def test_apply_physical_uses_exact_derivatives():
    pts = G_RAD.points[::513]
    got = apply_physical(D_QUAD, F_RAD, pts)
    want = (F_RAD.power_laplacian_batch(pts, 2)
            + 3.0 * F_RAD.laplacian_batch(pts)
            - F_RAD.value_batch(pts))
    assert np.allclose(got, want, rtol=0, atol=1e-12)
    # plain callables fall back to finite differences with a warning
    with pytest.warns(RuntimeWarning):
        fd = apply_physical(D_LAP, F_RAD.value_batch, pts[:2])
    assert np.max(np.abs(fd - F_RAD.laplacian_batch(pts[:2]))) < 1e-5


def test_apply_spectral_multiplies_by_symbol():
    phi = forward_transform(F_RAD, G_RAD)
    psi = apply_spectral(D_QUAD, phi)
    b = G_RAD.angular_nodes[4]
    for lam in (0.5, 1.8):
        want = D_QUAD.symbol(lam) * phi.eval(lam, b)
        assert abs(psi.eval(lam, b) - want) < 1e-12 * max(1.0, abs(want))


def test_diagram_commutes():
    assert diagram_defect(D_LAP, F_RAD, G_RAD) < 1e-10
    assert diagram_defect(D_QUAD, F_RAD, G_RAD) < 1e-9
    ident = InvariantOperator([1.0], H2)
    assert diagram_defect(ident, F_RAD, G_RAD) < 1e-14
    f = dressed_bump(1.2, H2, components=[(2, 0, 0.7)])
    g = make_polar_grid(1.2, 64, 128, H2)
    assert diagram_defect(D_QUAD, f, g) < 1e-9


def test_diagram_rejects_undersized_grid():
    small = make_polar_grid(0.5, 32, 64, H2)
    with pytest.raises(ValueError):
        diagram_defect(D_LAP, F_RAD, small)


def test_support_radius_thresholding():
    vals = F_RAD.samples_on(G_RAD)
    r, contained = support_radius(vals, G_RAD, return_flag=True)
    assert contained
    # the profile drops below the relative threshold inside the ball
    assert 0.7 < r < 1.0
    deep = support_radius(vals, G_RAD, tol=1e-300)
    assert deep >= r
    assert support_radius(np.zeros(G_RAD.npts), G_RAD) == 0.0
    edge = np.ones(G_RAD.npts)
    r2, flag2 = support_radius(edge, G_RAD, return_flag=True)
    assert r2 == G_RAD.support_radius and not flag2


def test_solve_laplacian():
    res = solve(D_LAP, F_RAD, G_RAD, DENS_H2)
    assert res.residual < 1e-6
    assert res.symbol_min == pytest.approx(0.25)
    # the inverse operator is nonlocal: u spreads to the whole ball
    assert not res.out_support_contained
    assert res.support_radius_out == pytest.approx(G_RAD.support_radius)
    assert res.u_values.shape == (G_RAD.npts,)
    # u_eval agrees with the tabulated solution
    probe = G_RAD.points[::1111]
    assert np.max(np.abs(res.u_eval(probe) - res.u_values[::1111])) < 1e-10
    d = res.to_json_dict()
    assert set(d) >= {"residual", "symbol_min", "support_radius_in",
                      "support_radius_out"}


def test_solve_rejects_vanishing_symbol():
    with pytest.raises(SymbolVanishes):
        solve(InvariantOperator([0.25, 1.0], H2), F_RAD, G_RAD, DENS_H2)


def test_division_keeps_type_and_seminorms():
    rep = division_pw_check(F_RAD, D_LAP, G_RAD, n_max=2)
    assert rep.exponential_type <= 1.0 + 0.05
    for n, v in rep.seminorms.items():
        assert np.isfinite(v)
    assert not rep.flags["diverged"]
