"""Compactly supported smooth test functions with exact derivative evaluators.

The canonical radial profile is exp(-a*t^2/(1-t^2)) with t = r/R, normalized
to 1 at the center.  The sharpness a (default 12) concentrates the profile so
its spectral tail decays fast enough for the round-trip tolerances; see the
README for the measured truncation law.

Angular dressing multiplies the profile by tanh(r/2)^k times a boundary
harmonic, which is smooth at the origin because tanh(r/2)^k * Y_k is a
polynomial in the Euclidean ball coordinates.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from scipy.special import sph_harm_y

from .geometry import H2, ModelParams, distance_to_origin

__all__ = ["TestFunction", "radial_bump", "dressed_bump", "offcenter_bump", "make_family"]

_SHARPNESS_DEFAULT = 12.0
# empirical truncation law: spectral tails fall below ~1e-9 once
# lambda_max * local_radius reaches 60 at the default sharpness
_LAMBDA_RADIUS_PRODUCT = 60.0

_R_CLAMP = 1e-7  # keeps 1/sinh(r) factors finite; relative error O(r^2)


def _angular_eigenvalue(k, dimension):
    return float(k * k) if dimension == 2 else float(k * (k + 1))


def _real_sphere_harmonic(l, m, polar, azimuth):
    """Real spherical harmonic, orthonormal for the probability measure on S^2."""
    if m == 0:
        y = sph_harm_y(l, 0, polar, azimuth).real
    elif m > 0:
        y = math.sqrt(2.0) * ((-1) ** m) * sph_harm_y(l, m, polar, azimuth).real
    else:
        y = math.sqrt(2.0) * ((-1) ** m) * sph_harm_y(l, -m, polar, azimuth).imag
    return math.sqrt(4.0 * np.pi) * y


@dataclass(frozen=True)
class Component:
    k: int
    m: int
    amplitude: float


class TestFunction:
    """Smooth function supported in the closed ball of the declared radius."""

    __test__ = False  # not a pytest case despite the Test* name

    def __init__(self, params, local_radius, sharpness=_SHARPNESS_DEFAULT,
                 center=None, components=None, fn_id="f"):
        self.params = params
        self.local_radius = float(local_radius)
        self.sharpness = float(sharpness)
        self.fn_id = fn_id
        if center is None:
            center = np.zeros(params.dimension)
        self.center = np.asarray(center, dtype=float)
        self.center_distance = distance_to_origin(self.center) if np.any(self.center) else 0.0
        if components is None:
            components = [Component(0, 0, 1.0)]
        self.components = [Component(int(c[0]), int(c[1]), float(c[2]))
                           if not isinstance(c, Component) else c for c in components]
        if self.center_distance > 0 and any(c.k != 0 for c in self.components):
            raise ValueError("angular dressing requires a centered function")
        for c in self.components:
            if c.k < 0:
                raise ValueError("angular index must be nonnegative")
            if params.dimension == 3 and abs(c.m) > c.k:
                raise ValueError("harmonic order exceeds degree")
        if self.local_radius <= 0:
            raise ValueError("support radius must be positive")
        self.support_radius = self.local_radius + self.center_distance
        self._radial_cache = {}

    # -- exact radial machinery ------------------------------------------------

    def _radial_callable(self, k, power):
        """(L_k)^power applied to tanh(r/2)^k * profile, as a vectorized callable."""
        key = (k, power)
        if key in self._radial_cache:
            return self._radial_cache[key]
        r = sp.symbols("r", positive=True)
        t = r / sp.Float(self.local_radius)
        expr = sp.tanh(r / 2) ** k * sp.exp(-sp.Float(self.sharpness) * t**2 / (1 - t**2))
        n = self.params.dimension
        kang = _angular_eigenvalue(k, n)
        for _ in range(power):
            expr = (sp.diff(expr, r, 2)
                    + (n - 1) * sp.coth(r) * sp.diff(expr, r)
                    - kang / sp.sinh(r) ** 2 * expr)
        fn = sp.lambdify(r, expr, modules="numpy")

        def evaluate(rv):
            rv = np.asarray(rv, dtype=float)
            inside = rv < self.local_radius
            rc = np.clip(np.where(inside, rv, 0.5 * self.local_radius), _R_CLAMP, None)
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                vals = np.asarray(fn(rc), dtype=float)
            vals = np.where(np.isfinite(vals), vals, 0.0)
            return np.where(inside, vals, 0.0)

        self._radial_cache[key] = evaluate
        return evaluate

    # -- geometry about the center ----------------------------------------------

    def _polar_about_center(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.center_distance > 0:
            c = self.center
            diff = pts - c[None, :]
            num = 2.0 * np.sum(diff * diff, axis=1)
            den = (1.0 - np.sum(pts * pts, axis=1)) * (1.0 - np.dot(c, c))
            return np.arccosh(1.0 + num / den), pts
        sq = np.sqrt(np.sum(pts * pts, axis=1))
        sq = np.minimum(sq, 1.0 - 1e-15)
        return np.log1p(2.0 * sq / (1.0 - sq)), pts

    def _angular_factor(self, comp, pts):
        if comp.k == 0:
            return np.ones(pts.shape[0])
        if self.params.dimension == 2:
            theta = np.arctan2(pts[:, 1], pts[:, 0])
            return np.cos(comp.k * theta) if comp.m == 0 else np.sin(comp.k * theta)
        rad = np.linalg.norm(pts, axis=1)
        rad = np.where(rad == 0.0, 1.0, rad)
        unit = pts / rad[:, None]
        polar = np.arccos(np.clip(unit[:, 2], -1.0, 1.0))
        azim = np.arctan2(unit[:, 1], unit[:, 0])
        return _real_sphere_harmonic(comp.k, comp.m, polar, azim)

    # -- public evaluators -------------------------------------------------------

    def _apply_power(self, points, power):
        r, pts = self._polar_about_center(points)
        out = np.zeros(pts.shape[0])
        for comp in self.components:
            radial = self._radial_callable(comp.k, power)(r)
            out += comp.amplitude * radial * self._angular_factor(comp, pts)
        return out

    def value_batch(self, points):
        return self._apply_power(points, 0)

    def laplacian_batch(self, points):
        return self._apply_power(points, 1)

    def power_laplacian_batch(self, points, power):
        return self._apply_power(points, power)

    def value(self, x):
        return float(self.value_batch(_as_coords(x))[0])

    def laplacian_value(self, x):
        return float(self.laplacian_batch(_as_coords(x))[0])

    @property
    def is_radial(self):
        return (self.center_distance == 0.0
                and all(c.k == 0 for c in self.components))

    @property
    def suggested_lambda_max(self):
        return _LAMBDA_RADIUS_PRODUCT / self.local_radius

    def samples_on(self, grid):
        return self.value_batch(grid.points)

    # -- standard sup seminorms ----------------------------------------------------

    def sup_seminorm(self, order, step=0.01):
        """max over |alpha| <= order of sup |partial^alpha f|, by central differences."""
        pts = self._seminorm_points()
        best = 0.0
        for alpha in _multi_indices(self.params.dimension, order):
            best = max(best, np.max(np.abs(self._fd_derivative(pts, alpha, step))))
        return float(best)

    def _seminorm_points(self):
        # interior sample cloud; stencil shifts must stay inside the unit ball
        n = self.params.dimension
        fracs = np.linspace(0.05, 0.92, 14)
        radii = np.tanh(0.5 * fracs * self.local_radius)
        if n == 2:
            ang = 2.0 * np.pi * np.arange(12) / 12
            dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        else:
            pol = np.linspace(0.3, np.pi - 0.3, 6)
            az = 2.0 * np.pi * np.arange(8) / 8
            dirs = np.stack([
                np.outer(np.sin(pol), np.cos(az)).ravel(),
                np.outer(np.sin(pol), np.sin(az)).ravel(),
                np.outer(np.cos(pol), np.ones(8)).ravel(),
            ], axis=1)
        local = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, n)
        if self.center_distance > 0:
            # crude recentering: shift the cloud toward the Euclidean center
            local = local * (1.0 - np.linalg.norm(self.center)) + self.center[None, :]
        return local

    def _fd_derivative(self, pts, alpha, h):
        n = self.params.dimension
        offsets = [np.arange(d + 1) - d / 2.0 for d in alpha]
        coeffs = [np.array([(-1) ** j * math.comb(d, j) for j in range(d + 1)])
                  for d in alpha]
        total = np.zeros(pts.shape[0])
        grids = np.meshgrid(*[np.arange(d + 1) for d in alpha], indexing="ij")
        flat = [g.ravel() for g in grids]
        for idx in range(flat[0].size):
            shift = np.zeros(n)
            c = 1.0
            for axis in range(n):
                j = flat[axis][idx]
                shift[axis] = offsets[axis][j] * h
                c *= coeffs[axis][j]
            total += c * self.value_batch(pts + shift[None, :])
        return total / h ** int(sum(alpha))


def _as_coords(x):
    arr = np.asarray(getattr(x, "coords", x), dtype=float)
    return arr[None, :]


def _multi_indices(dimension, order):
    out = []
    if dimension == 2:
        for a in range(order + 1):
            for b in range(order + 1 - a):
                out.append((a, b))
    else:
        for a in range(order + 1):
            for b in range(order + 1 - a):
                for c in range(order + 1 - a - b):
                    out.append((a, b, c))
    return out


# -- constructors -------------------------------------------------------------------


def radial_bump(R, params=H2, sharpness=_SHARPNESS_DEFAULT, fn_id="bump"):
    return TestFunction(params, R, sharpness=sharpness, fn_id=fn_id)


def dressed_bump(R, params=H2, components=((1, 0, 1.0),), sharpness=_SHARPNESS_DEFAULT,
                 include_radial=True, fn_id="dressed"):
    comps = [Component(0, 0, 1.0)] if include_radial else []
    comps += [Component(*c) for c in components]
    return TestFunction(params, R, sharpness=sharpness, components=comps, fn_id=fn_id)


def offcenter_bump(R_total, offset, direction=None, params=H2,
                   sharpness=_SHARPNESS_DEFAULT, fn_id="offcenter"):
    """Radial bump about a center at hyperbolic distance offset from the origin."""
    if not 0 < offset < R_total:
        raise ValueError("offset must lie strictly between 0 and the total radius")
    if direction is None:
        direction = np.zeros(params.dimension)
        direction[0] = 1.0
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    center = np.tanh(0.5 * offset) * direction
    return TestFunction(params, R_total - offset, sharpness=sharpness,
                        center=center, fn_id=fn_id)


def make_family(seed, count, params=H2, radius_range=(0.5, 2.0), kinds="mixed",
                max_mode=3):
    """Deterministic family of test functions for the property suites."""
    rng = np.random.default_rng(seed)
    lo, hi = radius_range
    family = []
    for i in range(count):
        R = float(rng.uniform(lo, hi))
        if kinds == "mixed":
            kind = ("radial", "dressed", "offcenter")[int(rng.integers(0, 3))]
        else:
            kind = kinds
        fid = f"{kind}{i:02d}"
        if kind == "radial":
            family.append(radial_bump(R, params, fn_id=fid))
        elif kind == "dressed":
            k = int(rng.integers(1, max_mode + 1))
            m = int(rng.integers(0, 2)) if params.dimension == 2 else int(
                rng.integers(-k, k + 1))
            amp = float(rng.uniform(0.4, 1.0))
            family.append(dressed_bump(R, params, components=[(k, m, amp)], fn_id=fid))
        else:
            offset = float(rng.uniform(0.15, 0.3)) * R
            direction = rng.normal(size=params.dimension)
            family.append(offcenter_bump(R, offset, direction, params, fn_id=fid))
    return family
