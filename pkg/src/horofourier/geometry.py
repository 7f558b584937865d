"""Ball-model geometry of hyperbolic 2- and 3-space.

Curvature is normalized to -1, so the half-sum parameter is rho = (n-1)/2.
The boundary sphere carries the probability measure; the volume element in
geodesic polar coordinates is omega_{n-1} * sinh(r)^(n-1) dr with omega the
true sphere area (2*pi for n=2, 4*pi for n=3).
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "Point",
    "BoundaryPoint",
    "PolarGrid",
    "H2",
    "H3",
    "model_from_name",
    "distance",
    "distance_to_origin",
    "horocycle_bracket",
    "bracket_matrix",
    "volume_density",
    "geodesic_point",
    "make_polar_grid",
]


@dataclass(frozen=True)
class ModelParams:
    dimension: int

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")

    @property
    def rho(self):
        return (self.dimension - 1) / 2.0

    @property
    def sphere_area(self):
        return 2.0 * np.pi if self.dimension == 2 else 4.0 * np.pi


H2 = ModelParams(2)
H3 = ModelParams(3)


def model_from_name(name):
    table = {"h2": H2, "h3": H3}
    key = str(name).strip().lower()
    if key not in table:
        raise ValueError("model must be 'h2' or 'h3'")
    return table[key]


def _coords(x):
    if isinstance(x, Point):
        return x.coords
    return np.asarray(x, dtype=float)


def _direction(b):
    if isinstance(b, BoundaryPoint):
        return b.direction
    return np.asarray(b, dtype=float)


@dataclass(frozen=True)
class Point:
    coords: np.ndarray

    def __init__(self, coords):
        c = np.atleast_1d(np.asarray(coords, dtype=float))
        if c.ndim != 1 or c.size not in (2, 3):
            raise ValueError("Point needs 2 or 3 coordinates")
        if np.dot(c, c) >= 1.0:
            raise ValueError("Point must lie strictly inside the unit ball")
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class BoundaryPoint:
    direction: np.ndarray

    def __init__(self, direction):
        d = np.atleast_1d(np.asarray(direction, dtype=float))
        if d.ndim != 1 or d.size not in (2, 3):
            raise ValueError("BoundaryPoint needs 2 or 3 coordinates")
        norm = np.linalg.norm(d)
        if abs(norm - 1.0) > 1e-14:
            if norm == 0.0:
                raise ValueError("BoundaryPoint direction cannot be zero")
            d = d / norm
        object.__setattr__(self, "direction", d)


def distance(x, y):
    """Hyperbolic distance arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)))."""
    xc, yc = _coords(x), _coords(y)
    dx = xc - yc
    num = 2.0 * np.dot(dx, dx)
    den = (1.0 - np.dot(xc, xc)) * (1.0 - np.dot(yc, yc))
    return float(np.arccosh(1.0 + num / den))


def distance_to_origin(x):
    xc = _coords(x)
    r = np.sqrt(np.dot(xc, xc))
    return float(np.log1p(2.0 * r / (1.0 - r)))  # 2*artanh(r)


def horocycle_bracket(x, b):
    """Signed horocycle bracket A(x, b) = log((1-|x|^2) / |x-b|^2)."""
    xc, bd = _coords(x), _direction(b)
    diff = xc - bd
    return float(np.log((1.0 - np.dot(xc, xc)) / np.dot(diff, diff)))


def bracket_matrix(points, directions):
    """A(x_i, b_j) for a batch of ball points against boundary directions."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    sq = np.sum(pts * pts, axis=1)
    # |x - b|^2 = |x|^2 - 2 x.b + 1
    d2 = sq[:, None] - 2.0 * (pts @ dirs.T) + 1.0
    return np.log((1.0 - sq)[:, None] / d2)


def volume_density(r, params):
    """Polar volume density omega_{n-1} * sinh(r)^(n-1)."""
    r = np.asarray(r, dtype=float)
    return params.sphere_area * np.sinh(r) ** (params.dimension - 1)


def geodesic_point(t, direction):
    """Ball coordinates of the point at hyperbolic distance t along direction."""
    d = _direction(direction)
    return np.tanh(0.5 * t) * d


def _boundary_grid(angular_count, params):
    if params.dimension == 2:
        thetas = 2.0 * np.pi * np.arange(angular_count) / angular_count
        dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
        weights = np.full(angular_count, 1.0 / angular_count)
        return dirs, weights, thetas, None
    # product rule on S^2: Gauss-Legendre in cos(polar) x uniform azimuth
    npol = angular_count // 2
    naz = angular_count
    cosn, cosw = np.polynomial.legendre.leggauss(npol)
    phis = 2.0 * np.pi * np.arange(naz) / naz
    sinn = np.sqrt(1.0 - cosn**2)
    dirs = np.stack(
        [
            np.outer(sinn, np.cos(phis)).ravel(),
            np.outer(sinn, np.sin(phis)).ravel(),
            np.outer(cosn, np.ones(naz)).ravel(),
        ],
        axis=1,
    )
    weights = np.repeat(cosw * 0.5, naz) / naz
    return dirs, weights, phis, (npol, naz)


@dataclass(frozen=True)
class PolarGrid:
    support_radius: float
    params: ModelParams
    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_nodes: np.ndarray
    angular_weights: np.ndarray
    thetas: np.ndarray | None = None
    sphere_shape: tuple | None = None
    points: np.ndarray = field(default=None)
    point_weights: np.ndarray = field(default=None)

    @property
    def npts(self):
        return self.points.shape[0]

    @property
    def nboundary(self):
        return self.angular_nodes.shape[0]

    def integrate(self, values):
        """Integrate grid samples against the invariant measure."""
        return float(np.dot(self.point_weights, np.asarray(values, dtype=float)))


def make_polar_grid(R, radial_count, angular_count, params=H2):
    """Gauss-Legendre radial x uniform boundary quadrature on the R-ball."""
    if R <= 0:
        raise ValueError("support radius must be positive")
    if radial_count < 4 or angular_count < 4:
        raise ValueError("node counts must be at least 4")
    xg, wg = np.polynomial.legendre.leggauss(radial_count)
    radial_nodes = 0.5 * R * (xg + 1.0)
    radial_weights = 0.5 * R * wg
    dirs, aw, thetas, sphere_shape = _boundary_grid(angular_count, params)
    ball_radii = np.tanh(0.5 * radial_nodes)
    points = (ball_radii[:, None, None] * dirs[None, :, :]).reshape(-1, params.dimension)
    shell = radial_weights * volume_density(radial_nodes, params)
    point_weights = (shell[:, None] * aw[None, :]).ravel()
    return PolarGrid(
        support_radius=float(R),
        params=params,
        radial_nodes=radial_nodes,
        radial_weights=radial_weights,
        angular_nodes=dirs,
        angular_weights=aw,
        thetas=thetas if params.dimension == 2 else None,
        sphere_shape=sphere_shape,
        points=points,
        point_weights=point_weights,
    )
