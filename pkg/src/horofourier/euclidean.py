"""One-dimensional Euclidean Fourier baseline and the mode-factorization bridge.

The 1-D transform serves two purposes: an oracle whose inversion constant
1/(2*pi) is known analytically, and the lambda-leg of the tensor-product
description of the hyperbolic transform, realized here by checking that each
boundary mode profile of a hyperbolic transform passes the same scalar
growth tests.
"""

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .paley_wiener import SeminormResult, StripGrid, fit_growth_rate
from .transform import (_max_modes, boundary_mode_decompose,
                        forward_transform, project_modes)

__all__ = [
    "EuclideanTestFunction",
    "euclid_forward",
    "euclid_inverse",
    "euclid_pw_seminorm",
    "euclid_exponential_type",
    "constcoeff_correspondence",
    "mode_factorization_check",
]

_QUAD_NODES = 384


class EuclideanTestFunction:
    """Smooth bump on the line, supported in [center-R, center+R]."""

    def __init__(self, R, sharpness=12.0, center=0.0):
        if R <= 0:
            raise ValueError("support radius must be positive")
        self.R = float(R)
        self.sharpness = float(sharpness)
        self.center = float(center)
        self.support_radius = self.R + abs(self.center)
        self._deriv_cache = {}
        xg, wg = np.polynomial.legendre.leggauss(_QUAD_NODES)
        self.nodes = self.center + self.R * xg
        self.weights = self.R * wg

    def _derivative_callable(self, order):
        if order in self._deriv_cache:
            return self._deriv_cache[order]
        x = sp.symbols("x", real=True)
        t = (x - sp.Float(self.center)) / sp.Float(self.R)
        expr = sp.exp(-sp.Float(self.sharpness) * t**2 / (1 - t**2))
        expr = sp.diff(expr, x, order)
        fn = sp.lambdify(x, expr, modules="numpy")

        def evaluate(xs):
            xs = np.asarray(xs, dtype=float)
            inside = np.abs(xs - self.center) < self.R
            safe = np.where(inside, xs, self.center)
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                vals = np.asarray(fn(safe), dtype=float)
            vals = np.where(np.isfinite(vals), vals, 0.0)
            return np.where(inside, vals, 0.0)

        self._deriv_cache[order] = evaluate
        return evaluate

    def value(self, xs):
        return self._derivative_callable(0)(xs)

    def derivative(self, xs, order=1):
        return self._derivative_callable(order)(xs)

    @property
    def suggested_xi_max(self):
        return 60.0 / self.R


def _quad_transform(values, nodes, weights, xi):
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    phase = np.exp(-1j * np.outer(xi, nodes))
    return phase @ (weights * values)


def euclid_forward(f, xi):
    """Integral of f(x) e^{-i x xi} dx; xi may be complex, scalar or array."""
    out = _quad_transform(f.value(f.nodes), f.nodes, f.weights, xi)
    return complex(out[0]) if np.isscalar(xi) else out


def euclid_inverse(phi_values, xi_grid, xs):
    """Trapezoid inversion (1/2pi) int e^{i x xi} phi(xi) dxi on a symmetric grid."""
    xi_grid = np.asarray(xi_grid, dtype=float)
    w = np.full(xi_grid.shape, xi_grid[1] - xi_grid[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    phase = np.exp(1j * np.outer(np.atleast_1d(xs), xi_grid))
    out = (phase @ (w * np.asarray(phi_values))) / (2.0 * np.pi)
    return np.real(out)


def euclid_roundtrip_error(f, xi_max=None, xi_step=0.05):
    """Relative sup error of inverse(forward(f)) on the quadrature nodes."""
    if xi_max is None:
        xi_max = f.suggested_xi_max
    n = int(round(xi_max / xi_step))
    xi = xi_step * np.arange(-n, n + 1)
    phi = euclid_forward(f, xi)
    rec = euclid_inverse(phi, xi, f.nodes)
    ref = f.value(f.nodes)
    return float(np.max(np.abs(rec - ref)) / np.max(np.abs(ref)))


def euclid_pw_seminorm(phi_fn, R, N, strip, probe_divergence=True):
    """Scalar version of the strip seminorm for an entire function phi_fn."""
    if R <= 0 or N < 0:
        raise ValueError("R must be positive and N nonnegative")
    best = 0.0
    edge_best = 0.0
    re = strip.re_nodes
    edge_mask = np.abs(re) >= 0.95 * strip.lambda_max
    for sigma in strip.im_nodes:
        vals = np.abs(phi_fn(re + 1j * sigma))
        maximand = np.exp(-R * abs(sigma)) * (1.0 + np.hypot(re, sigma)) ** N * vals
        best = max(best, float(maximand.max()))
        if edge_mask.any():
            edge_best = max(edge_best, float(maximand[edge_mask].max()))
    boundary = edge_best > 0.5 * best if best > 0 else False
    diverged = False
    type_est = float("nan")
    if probe_divergence:
        type_est = euclid_exponential_type(phi_fn)
        diverged = (type_est - R) > max(0.1 * R, 0.05)
    return SeminormResult(best, bool(diverged or boundary), bool(boundary), type_est)


def euclid_exponential_type(phi_fn):
    return max(fit_growth_rate(lambda s: np.abs(phi_fn(1j * s))), 0.0)


def constcoeff_correspondence(coeffs, f, xi_samples=None):
    """Defect of F(p(-i d/dx) f) against p(xi) * Ff at sampled real xi."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if xi_samples is None:
        xi_samples = np.array([0.4, 1.1, 2.3, 3.7, 5.2, 8.1]) / min(f.R, 1.5)
    xi = np.asarray(xi_samples, dtype=float)
    pd_vals = np.zeros(f.nodes.shape, dtype=complex)
    for j, c in enumerate(coeffs):
        if c != 0.0:
            pd_vals += c * (-1j) ** j * f.derivative(f.nodes, j)
    lhs = _quad_transform(pd_vals, f.nodes, f.weights, xi)
    rhs = np.polynomial.polynomial.polyval(xi, coeffs) * euclid_forward(f, xi)
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1e-300)
    return float(np.max(np.abs(lhs - rhs)) / scale)


# modes kept beyond the largest reported cutoff so its tail stays honest
_TAIL_HEADROOM = 16


def max_checkable_mode(grid):
    """Largest tail cutoff the factorization check can resolve on this grid."""
    return _max_modes(grid) - _TAIL_HEADROOM


def mode_factorization_check(f, grid, k_list=(4, 8, 16, 32), seminorm_order=2,
                             active_floor=1e-9):
    """Per-mode growth checks and tail decay for a transform on the hyperbolic plane.

    Each boundary mode profile is treated as a scalar entire function: its
    exponential type must not exceed the declared support radius, and the
    strip seminorm of the tail beyond K must shrink as K grows.
    """
    if grid.params.dimension != 2:
        raise ValueError("mode factorization check runs on the hyperbolic plane")
    k_max = int(max(k_list)) + _TAIL_HEADROOM
    phi = forward_transform(f, grid)
    decomp = boundary_mode_decompose(phi, k_max)
    norms = decomp.mode_norms()
    peak = float(norms.max())
    active = [k for k, v in zip(decomp.labels, norms) if v > active_floor * peak]

    R = f.support_radius
    strip = StripGrid.default(R, grid.params, scale=30.0, step_scale=0.5, im_count=2)
    ks = np.array(decomp.labels)
    tail_norms = []
    row_coeffs = []
    for sigma in strip.im_nodes:
        row = phi.eval_row(float(sigma), strip.re_nodes[0], strip.re_step,
                           strip.re_nodes.size)
        _, coeffs = project_modes(row, grid, k_max)
        row_coeffs.append((sigma, coeffs))
    for K in k_list:
        outside = np.abs(ks) > K
        best = 0.0
        for sigma, coeffs in row_coeffs:
            tail = np.sqrt(np.sum(np.abs(coeffs[:, outside]) ** 2, axis=1))
            weight = (np.exp(-R * abs(sigma))
                      * (1.0 + np.hypot(strip.re_nodes, sigma)) ** seminorm_order)
            best = max(best, float(np.max(weight * tail)))
        tail_norms.append([int(K), best])

    # shared sigma ladder for all per-mode type fits
    s1 = np.linspace(2.0, 6.0, 9)
    agg = np.max(np.abs(phi.eval_batch(1j * s1)), axis=1)
    X = np.stack([np.ones_like(s1), s1, np.sqrt(s1)], axis=1)
    coef, *_ = np.linalg.lstsq(X, np.log(np.maximum(agg, 1e-300)), rcond=None)
    r0 = float(np.clip(coef[1], 0.05, 12.0))
    s2 = np.linspace(60.0 / r0, 300.0 / r0, 13)
    rows2 = phi.eval_batch(1j * s2)
    _, coeffs2 = project_modes(rows2, grid, k_max)
    basis = np.stack([np.ones_like(s2), s2, np.sqrt(s2), np.log(s2)], axis=1)
    per_mode_types = []
    for idx, k in enumerate(decomp.labels):
        if norms[idx] <= active_floor * peak:
            continue
        logs = np.log(np.maximum(np.abs(coeffs2[:, idx]), 1e-300))
        c, *_ = np.linalg.lstsq(basis, logs, rcond=None)
        per_mode_types.append([int(k), float(c[1])])

    return {
        "modes_active": [int(k) for k in active],
        "tail_norms": tail_norms,
        "per_mode_types": per_mode_types,
    }
