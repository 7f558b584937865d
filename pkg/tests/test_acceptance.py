"""Acceptance suite: one check per shipped guarantee.

Each test prints a single PASS/FAIL line with the measured numbers; running
pytest -v therefore yields one status line per criterion.
"""

import time
from functools import lru_cache

import numpy as np

from horofourier.euclidean import (EuclideanTestFunction,
                                   constcoeff_correspondence,
                                   euclid_exponential_type, euclid_forward,
                                   euclid_pw_seminorm, euclid_roundtrip_error,
                                   mode_factorization_check)
from horofourier.functions import make_family, offcenter_bump, radial_bump
from horofourier.geometry import H2, make_polar_grid
from horofourier.operators import (InvariantOperator, SymbolVanishes,
                                   apply_physical, diagram_defect,
                                   division_pw_check, solve, support_radius)
from horofourier.paley_wiener import (StripGrid, continuity_constant,
                                      exponential_type, seminorm, weyl_defect)
from horofourier.transform import (PlancherelDensity, boundary_mode_decompose,
                                   forward_transform, helgason_inverse)

DENS = PlancherelDensity(H2)
D_LAP = InvariantOperator([0.0, 1.0], H2)
D_QUAD = InvariantOperator([-1.0, 3.0, 1.0], H2)
D_IDENT = InvariantOperator([1.0], H2)


def _emit(num, ok, detail):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@lru_cache(maxsize=None)
def _family():
    return tuple(make_family(7, 10, H2))


@lru_cache(maxsize=None)
def _grid_for(R):
    return make_polar_grid(R, 64, 128, H2)


@lru_cache(maxsize=None)
def _phi_for(idx):
    f = _family()[idx]
    return forward_transform(f, _grid_for(f.support_radius))


def test_criterion_01_roundtrip_family():
    # 10 seeded bumps, sup error <= 1e-5 each, under 120 s single-threaded
    t0 = time.perf_counter()
    worst = 0.0
    for f in _family():
        grid = make_polar_grid(f.support_radius, 64, 128, H2)
        phi = forward_transform(f, grid, lambda_step=0.05)
        rec = helgason_inverse(phi, DENS, grid.points)
        err = float(np.max(np.abs(rec - f.value_batch(grid.points))))
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed <= 120.0
    _emit(1, ok, f"worst sup error {worst:.3e} (<=1e-5), runtime {elapsed:.1f}s (<=120s)")


def test_criterion_02_operator_diagram():
    worst_lap = worst_quad = worst_id = 0.0
    for idx, f in enumerate(_family()):
        grid = _grid_for(f.support_radius)
        worst_lap = max(worst_lap, diagram_defect(D_LAP, f, grid))
        worst_quad = max(worst_quad, diagram_defect(D_QUAD, f, grid))
        worst_id = max(worst_id, diagram_defect(D_IDENT, f, grid))
    ok = worst_lap <= 1e-6 and worst_quad <= 1e-6 and worst_id <= 1e-14
    _emit(2, ok, f"defects: laplacian {worst_lap:.3e}, quadratic {worst_quad:.3e} "
          f"(<=1e-6), identity {worst_id:.3e} (<=1e-14)")


def test_criterion_03_support_type_duality():
    type_errs, changes, half_flags = [], [], []
    for R in (0.5, 1.0, 2.0):
        f = radial_bump(R, H2)
        grid = _grid_for(R)
        phi = forward_transform(f, grid)
        t = exponential_type(phi)
        type_errs.append(abs(t - R) / R)
        strip = StripGrid.default(R, H2)
        fine = strip.refined()
        worst_change = 0.0
        for n in range(7):
            a = seminorm(phi, R, n, strip, probe_divergence=False).value
            b = seminorm(phi, R, n, fine, probe_divergence=False).value
            if not (np.isfinite(a) and np.isfinite(b) and a > 0):
                worst_change = np.inf
                break
            worst_change = max(worst_change, abs(b - a) / a)
        changes.append(worst_change)
        half_flags.append(seminorm(phi, R / 2, 2, strip).diverged)
    ok = (max(type_errs) <= 0.10 and max(changes) <= 0.01 and all(half_flags))
    _emit(3, ok, f"type rel errors {[f'{e:.2%}' for e in type_errs]} (<=10%), "
          f"seminorm doubling change {max(changes):.2e} (<=1%), "
          f"half-radius divergence flags {half_flags}")


def test_criterion_04_reflection_symmetry():
    worst = 0.0
    for idx in range(len(_family())):
        worst = max(worst, weyl_defect(_phi_for(idx)))
    counter = _phi_for(0).multiplied(lambda lam: 1.0 + 0.8 * lam)
    counter_defect = weyl_defect(counter)
    ok = worst <= 1e-8 and counter_defect > 0.1
    _emit(4, ok, f"family worst defect {worst:.3e} (<=1e-8), "
          f"asymmetric counterexample {counter_defect:.3f} (>0.1)")


def test_criterion_05_continuity_bound():
    from horofourier.functions import dressed_bump
    fam = [
        radial_bump(1.0, H2, fn_id="c0"),
        dressed_bump(1.0, H2, components=[(1, 0, 0.6)], fn_id="c1"),
        dressed_bump(1.0, H2, components=[(2, 0, 0.5)], fn_id="c2"),
        dressed_bump(1.0, H2, components=[(1, 1, 0.4)], fn_id="c3"),
        dressed_bump(1.0, H2, components=[(3, 0, 0.3)], fn_id="c4"),
    ]
    grid = _grid_for(1.0)
    spreads = []
    for n in (1, 2, 3):
        best, ratios = continuity_constant(fam, n, grid, return_details=True)
        arr = np.asarray(ratios)
        if not (np.isfinite(best) and np.all(np.isfinite(arr))):
            spreads.append(np.inf)
            continue
        mean = float(arr.mean())
        spreads.append(float(np.max(np.abs(arr - mean)) / mean))
    ok = max(spreads) <= 0.20
    _emit(5, ok, f"ratio spreads by order {[f'{s:.2%}' for s in spreads]} (<=20%)")


def test_criterion_06_division_stability():
    worst_excess = -np.inf
    all_finite = True
    for g in make_family(23, 5, H2):
        grid = _grid_for(g.support_radius)
        base_type = exponential_type(forward_transform(g, grid))
        rep = division_pw_check(g, D_LAP, grid)
        worst_excess = max(worst_excess, rep.exponential_type - base_type)
        all_finite &= all(np.isfinite(v) for v in rep.seminorms.values())
    ok = worst_excess <= 0.05 and all_finite
    _emit(6, ok, f"worst type excess after division {worst_excess:+.4f} (<=+0.05), "
          f"seminorms N<=4 finite: {all_finite}")


def test_criterion_07_support_monotonicity():
    # deep relative threshold: differentiation multiplies the outermost
    # profile tail by a large smooth factor, which a shallow threshold
    # misreads as support growth
    tol = 1e-100
    rng = np.random.default_rng(11)
    worst_cells = -np.inf
    for f in make_family(11, 10, H2):
        deg = int(rng.integers(1, 3))
        coeffs = rng.uniform(-2.0, 2.0, size=deg + 1)
        coeffs[-1] += np.sign(coeffs[-1]) or 1.0
        D = InvariantOperator(coeffs, H2)
        grid = _grid_for(f.support_radius)
        fv = f.samples_on(grid)
        dfv = apply_physical(D, f, grid.points)
        r_in = support_radius(fv, grid, tol=tol)
        r_out = support_radius(dfv, grid, tol=tol)
        nodes = grid.radial_nodes
        idx = int(np.searchsorted(nodes, r_in))
        cell = float(np.diff(nodes)[min(idx, nodes.size - 2)])
        worst_cells = max(worst_cells, (r_out - r_in) / cell)
    ok = worst_cells <= 1.0
    _emit(7, ok, f"worst support growth {worst_cells:+.2f} radial cells (<=1)")


def test_criterion_08_spectral_solver():
    residuals = []
    for R in (1.0, 2.0):
        g = radial_bump(R, H2)
        res = solve(D_LAP, g, _grid_for(R), DENS)
        residuals.append(res.residual)
    raised = False
    try:
        solve(InvariantOperator([0.25, 1.0], H2), radial_bump(1.0, H2),
              _grid_for(1.0), DENS)
    except SymbolVanishes:
        raised = True
    ok = max(residuals) <= 1e-4 and raised
    _emit(8, ok, f"solve residuals {[f'{r:.2e}' for r in residuals]} (<=1e-4), "
          f"vanishing symbol raised: {raised}")


def test_criterion_09_mode_factorization():
    f = offcenter_bump(1.5, 0.9, params=H2)
    grid = _grid_for(1.5)
    rep = mode_factorization_check(f, grid, k_list=(4, 8, 16, 32))
    types = np.array([t for _, t in rep["per_mode_types"]])
    tails = [v for _, v in rep["tail_norms"]]
    types_ok = float(np.max(types)) <= 1.1 * f.support_radius
    tails_ok = all(b < a for a, b in zip(tails, tails[1:]))
    f0 = radial_bump(1.0, H2)
    dec = boundary_mode_decompose(forward_transform(f0, _grid_for(1.0)), k_max=8)
    norms = dec.mode_norms()
    k0 = dec.labels.index(0)
    radial_ok = float(np.max(np.delete(norms, k0))) <= 1e-10 * norms[k0]
    ok = types_ok and tails_ok and radial_ok
    _emit(9, ok, f"max per-mode type {np.max(types):.3f} (<= {1.1 * f.support_radius:.2f}), "
          f"tail norms {[f'{t:.3e}' for t in tails]} strictly decreasing: {tails_ok}, "
          f"radial single-mode: {radial_ok}")


def test_criterion_10_euclidean_baseline():
    f = EuclideanTestFunction(1.0)
    rt = euclid_roundtrip_error(f)
    ccd = constcoeff_correspondence([0.0, 0.0, 1.0], f)
    type_errs = []
    for R in (0.5, 1.0, 2.0):
        g = EuclideanTestFunction(R)
        t = euclid_exponential_type(lambda xi: euclid_forward(g, xi))
        type_errs.append(abs(t - R) / R)
    strip = StripGrid.default(1.0, H2)
    wrong = euclid_pw_seminorm(lambda xi: euclid_forward(f, xi), 0.5, 2, strip)
    ok = (rt <= 1e-8 and ccd <= 1e-8 and max(type_errs) <= 0.10 and wrong.diverged)
    _emit(10, ok, f"roundtrip {rt:.2e} (<=1e-8), constcoeff {ccd:.2e} (<=1e-8), "
          f"type rel errors {[f'{e:.2%}' for e in type_errs]} (<=10%), "
          f"wrong-radius flag: {wrong.diverged}")
