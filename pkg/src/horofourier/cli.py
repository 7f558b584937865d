"""Command-line driver: run the experiment suites and emit reports.

Exit codes: 0 pass, 1 tolerance breach, 2 invalid configuration, 3 symbol
vanishes on the real spectrum.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from .config import ConfigError, RunConfig
from .euclidean import (EuclideanTestFunction, constcoeff_correspondence,
                        euclid_exponential_type, euclid_forward,
                        euclid_pw_seminorm, euclid_roundtrip_error,
                        max_checkable_mode, mode_factorization_check)
from .functions import dressed_bump, make_family, radial_bump
from .geometry import make_polar_grid
from .operators import (InvariantOperator, SymbolVanishes, diagram_defect,
                        solve)
from .paley_wiener import StripGrid, build_pw_report
from .transform import (PlancherelDensity, forward_transform,
                        helgason_inverse)

__all__ = ["main"]


def _write_atomic(path, data):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(report, rows, columns, name, cfg, args):
    if args.format == "json":
        payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
        filename = f"{name}.json"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        payload = buf.getvalue()
        filename = f"{name}.csv"
    if args.out:
        _write_atomic(os.path.join(args.out, filename), payload)
    else:
        sys.stdout.write(payload)


def _family_grid(cfg, f):
    R = max(f.support_radius, 1e-6)
    return make_polar_grid(R, cfg.radial_count, cfg.angular_count, cfg.params)


def cmd_roundtrip(cfg, args):
    family = make_family(cfg.seed, cfg.count, cfg.params, kinds="mixed")
    density = PlancherelDensity(cfg.params)
    tol = cfg.tolerances["roundtrip"]
    rows, report, worst = [], [], 0.0
    for f in family:
        grid = _family_grid(cfg, f)
        phi = forward_transform(f, grid, cfg.lambda_max, cfg.lambda_step)
        rec = helgason_inverse(phi, density, grid.points)
        ref = f.value_batch(grid.points)
        scale = float(np.max(np.abs(ref)))
        sup_err = float(np.max(np.abs(rec - ref)) / scale)
        l2_err = float(np.sqrt(grid.integrate((rec - ref) ** 2)
                               / grid.integrate(ref**2)))
        worst = max(worst, sup_err)
        rows.append([f.fn_id, f"{f.support_radius:.6f}", f"{sup_err:.6e}",
                     f"{l2_err:.6e}"])
        report.append({"fn_id": f.fn_id, "R": f.support_radius,
                       "sup_err": sup_err, "l2_err": l2_err})
    _emit(report, rows, ["fn_id", "R", "sup_err", "l2_err"], "roundtrip", cfg, args)
    print(f"roundtrip: {len(family)} functions, worst sup error {worst:.3e} "
          f"(tolerance {tol:.1e})")
    return 0 if worst <= tol else 1


def _common_radius_family(cfg):
    rng = np.random.default_rng(cfg.seed)
    family = [radial_bump(cfg.radius, cfg.params, fn_id="radial00")]
    for i in range(1, max(cfg.count, 1)):
        k = int(rng.integers(1, 4))
        m = int(rng.integers(0, 2)) if cfg.params.dimension == 2 else 0
        amp = float(rng.uniform(0.4, 1.0))
        family.append(dressed_bump(cfg.radius, cfg.params,
                                   components=[(k, m, amp)], fn_id=f"dressed{i:02d}"))
    return family


def cmd_pw_report(cfg, args):
    family = _common_radius_family(cfg) if cfg.count else []
    rows, report = [], []
    breach = False
    if family:
        grid = make_polar_grid(cfg.radius, cfg.radial_count, cfg.angular_count,
                               cfg.params)
        strip = StripGrid.default(cfg.radius, cfg.params, S=cfg.strip)
        for f in family:
            phi = forward_transform(f, grid, cfg.lambda_max, cfg.lambda_step)
            pw = build_pw_report(phi, n_max=6, strip=strip)
            entry = pw.to_json_dict()
            entry["fn_id"] = f.fn_id
            report.append(entry)
            for N, value in sorted(pw.seminorms.items()):
                rows.append([f.fn_id, f"{cfg.radius:.6f}", N, f"{value:.6e}",
                             f"{pw.exponential_type:.6f}", f"{pw.weyl_defect:.6e}"])
            if abs(pw.exponential_type - cfg.radius) > cfg.tolerances[
                    "type_relative"] * cfg.radius:
                breach = True
            if pw.weyl_defect > cfg.tolerances["weyl"]:
                breach = True
    _emit(report, rows, ["fn_id", "R", "N", "seminorm", "exp_type", "weyl_defect"],
          "pw", cfg, args)
    print(f"pw-report: {len(family)} functions, breach={breach}")
    return 1 if breach else 0


def _parse_poly(spec):
    try:
        coeffs = [float(tok) for tok in spec.split(",")]
    except ValueError:
        raise ConfigError(f"bad polynomial spec: {spec!r}") from None
    if not coeffs:
        raise ConfigError("polynomial spec is empty")
    return coeffs


def cmd_diagram(cfg, args):
    coeffs = _parse_poly(args.poly)
    D = InvariantOperator(coeffs, cfg.params)
    f = dressed_bump(cfg.radius, cfg.params, components=[(1, 0, 0.7)],
                     fn_id="diagf")
    grid = make_polar_grid(cfg.radius, cfg.radial_count, cfg.angular_count,
                           cfg.params)
    defect = diagram_defect(D, f, grid)
    tol = (cfg.tolerances["diagram_identity"] if D.degree == 0
           else cfg.tolerances["diagram"])
    report = {"poly": coeffs, "defect": defect, "tolerance": tol}
    _emit(report, [["poly", " ".join(str(c) for c in coeffs)],
                   ["defect", f"{defect:.6e}"]],
          ["field", "value"], "diagram", cfg, args)
    print(f"diagram: defect {defect:.3e} (tolerance {tol:.1e})")
    return 0 if defect <= tol else 1


def cmd_solve(cfg, args):
    coeffs = _parse_poly(args.poly)
    D = InvariantOperator(coeffs, cfg.params)
    R = args.rhs_radius if args.rhs_radius is not None else cfg.radius
    if args.rhs_mode > 0:
        g = dressed_bump(R, cfg.params, components=[(args.rhs_mode, 0, 1.0)],
                         include_radial=False, fn_id="rhs")
    else:
        g = radial_bump(R, cfg.params, fn_id="rhs")
    grid = make_polar_grid(R, cfg.radial_count, cfg.angular_count, cfg.params)
    density = PlancherelDensity(cfg.params)
    result = solve(D, g, grid, density, lambda_max=cfg.lambda_max,
                   lambda_step=cfg.lambda_step)
    report = result.to_json_dict()
    _emit(report, [[k, f"{v:.6e}"] for k, v in sorted(report.items())],
          ["field", "value"], "solve", cfg, args)
    tol = cfg.tolerances["solve_residual"]
    print(f"solve: residual {result.residual:.3e} (tolerance {tol:.1e})")
    return 0 if result.residual <= tol else 1


def cmd_euclid(cfg, args):
    f = EuclideanTestFunction(cfg.radius, sharpness=cfg.sharpness)
    rt = euclid_roundtrip_error(f)
    etype = euclid_exponential_type(lambda z: euclid_forward(f, z))
    cc = constcoeff_correspondence([0.0, 0.0, 1.0], f)
    strip = StripGrid.build(45.0 / f.R, 1.0, 0.25 / f.R)
    sem = euclid_pw_seminorm(lambda z: euclid_forward(f, z), f.R, 3, strip)
    from .functions import offcenter_bump
    from .geometry import H2
    bridge = offcenter_bump(1.5, 0.9, params=H2, fn_id="bridge")
    grid = make_polar_grid(bridge.support_radius, cfg.radial_count,
                           cfg.angular_count, H2)
    cap = max_checkable_mode(grid)
    k_list = tuple(k for k in (4, 8, 16, 32) if k <= cap)
    if len(k_list) < 2:
        raise ConfigError(
            "angular_count too small for the mode factorization check")
    modes = mode_factorization_check(bridge, grid, k_list=k_list)
    report = {
        "roundtrip_sup_err": rt,
        "exponential_type": etype,
        "constcoeff_defect_xi2": cc,
        "seminorm_N3": sem.value,
        "mode_factorization": modes,
    }
    rows = [["roundtrip_sup_err", f"{rt:.6e}"],
            ["exponential_type", f"{etype:.6f}"],
            ["constcoeff_defect_xi2", f"{cc:.6e}"],
            ["seminorm_N3", f"{sem.value:.6e}"]]
    _emit(report, rows, ["field", "value"], "euclid", cfg, args)
    tails = [v for _, v in modes["tail_norms"]]
    breach = (rt > cfg.tolerances["euclid_roundtrip"]
              or cc > cfg.tolerances["constcoeff"]
              or abs(etype - f.R) > cfg.tolerances["type_relative"] * f.R
              or any(t2 >= t1 for t1, t2 in zip(tails, tails[1:])))
    print(f"euclid: roundtrip {rt:.3e}, type {etype:.4f}, constcoeff {cc:.3e}")
    return 1 if breach else 0


_COMMANDS = {
    "roundtrip": cmd_roundtrip,
    "pw-report": cmd_pw_report,
    "diagram": cmd_diagram,
    "solve": cmd_solve,
    "euclid": cmd_euclid,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="horofourier",
        description="Harmonic-analysis experiment suites on hyperbolic space")
    parser.add_argument("--config", help="key = value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--model")
        p.add_argument("--radius", type=float)
        p.add_argument("--radial", type=int, dest="radial_count")
        p.add_argument("--angular", type=int, dest="angular_count")
        p.add_argument("--lambda-max", type=float, dest="lambda_max")
        p.add_argument("--lambda-step", type=float, dest="lambda_step")
        p.add_argument("--strip", type=float, dest="strip_halfwidth")
        p.add_argument("--modes", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--count", type=int)
        p.add_argument("--out",
                       help="output directory; the report file is written "
                            "inside with a fixed name per suite")
        p.add_argument("--format", choices=["csv", "json"], default="json")
        if name in ("diagram", "solve"):
            p.add_argument("--poly", required=True,
                           help="ascending comma-separated coefficients c0,c1,...")
        if name == "solve":
            p.add_argument("--rhs-radius", type=float, dest="rhs_radius")
            p.add_argument("--rhs-mode", type=int, dest="rhs_mode", default=0)
    return parser


_CONFIG_KEYS = ("model", "radius", "radial_count", "angular_count", "lambda_max",
                "lambda_step", "strip_halfwidth", "modes", "seed", "count")


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}") from None
        overrides = {k: getattr(args, k) for k in _CONFIG_KEYS
                     if getattr(args, k, None) is not None}
        cfg.apply(overrides)
        cfg.validate()
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except SymbolVanishes as e:
        print(f"symbol vanishes: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
