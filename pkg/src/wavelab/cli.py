"""wavelab command line interface.

Exit codes: 0 all gated certificates pass, 1 any certificate fails or a
run blows up, 2 configuration error.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import runner, spectral
from .analysis import fit_decay_series
from .config import ConfigError, load_config
from .fields import Grid, ScalarField
from .integrator import BlowUpError


def _add_run(sub):
    p = sub.add_parser("run", help="execute one configured run")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="override the CSV output path")
    p.add_argument("--snapshots", action="store_true",
                   help="keep field snapshots in memory (diagnostics)")


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="run a one-key parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--vary", required=True, metavar="key=v1,v2,...",
                   help="key in {cutoff_m, dt, N, alpha}")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: WAVELAB_WORKERS or 1)")


def _add_preset(sub):
    p = sub.add_parser("preset", help="emit or run a named preset")
    p.add_argument("name")
    p.add_argument("--emit", action="store_true",
                   help="print the config JSON instead of running")
    p.add_argument("--out", help="write the emitted config to a file")


def _add_prop21(sub):
    p = sub.add_parser("prop21", help="Riesz-weighted inequality checks")
    p.add_argument("--n", type=int, default=3, choices=(1, 2, 3))
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--part", type=int, default=1, choices=(1, 2))
    p.add_argument("--family", default="gaussian",
                   choices=("gaussian", "dipole"))
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--doublings", type=int, default=1,
                   help="domain-doubling levels per sample")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--csv", help="write the sample table to this path")


def _add_mconv(sub):
    p = sub.add_parser("mconv", help="cutoff-radius convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--ms", required=True, help="comma list, e.g. 2,4,8,12")
    p.add_argument("--csv", help="write the {m, sup_error} table here")


def _add_decay_fit(sub):
    p = sub.add_parser("decay-fit", help="log-log decay fit of a run CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--window", required=True, metavar="a,b")
    p.add_argument("--quantity", default="energy", choices=("energy", "l2"))


def make_parser():
    ap = argparse.ArgumentParser(prog="wavelab")
    sub = ap.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_sweep(sub)
    _add_preset(sub)
    _add_prop21(sub)
    _add_mconv(sub)
    _add_decay_fit(sub)
    return ap


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output:
        cfg = replace(cfg, output_path=args.output)
    result = runner.run(cfg, keep_snapshots=args.snapshots)
    print(runner.report_json(result.report))
    return 0 if result.passed else 1


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    key, _, raw = args.vary.partition("=")
    if not raw:
        raise ConfigError("--vary expects key=v1,v2,...")
    values = [float(v) for v in raw.split(",")]
    results = runner.sweep(cfg, key, values, workers=args.workers)
    ok = True
    for value, res in zip(values, results):
        ok &= res.passed
        print(json.dumps({"key": key, "value": value,
                          "passed": res.passed,
                          "csv": res.csv_path,
                          "residual_max": res.report["residual_max"]},
                         sort_keys=True))
    return 0 if ok else 1


def _cmd_preset(args) -> int:
    cfg = runner.preset(args.name)
    if args.emit or args.out:
        text = cfg.to_json()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return 0
    result = runner.run(cfg)
    print(runner.report_json(result.report))
    return 0 if result.passed else 1


def _gaussian_builder(width, center, amp):
    def build(grid):
        r2 = sum((c - ci) ** 2 for c, ci in zip(grid.coords(), center))
        return ScalarField(grid, amp * np.exp(-r2 / (2.0 * width**2)))
    return build


def _dipole_builder(width, offset):
    def build(grid):
        coords = grid.coords()
        r2p = sum((c - (offset if ax == 0 else 0.0)) ** 2
                  for ax, c in enumerate(coords))
        r2m = sum((c + (offset if ax == 0 else 0.0)) ** 2
                  for ax, c in enumerate(coords))
        vals = np.exp(-r2p / (2 * width**2)) - np.exp(-r2m / (2 * width**2))
        return ScalarField(grid, vals)
    return build


def _prop21_builders(args):
    rng = np.random.default_rng(args.seed)
    builders = []
    for _ in range(args.count):
        if args.family == "gaussian":
            width = rng.uniform(0.6, 2.5)
            center = rng.uniform(-2.0, 2.0, size=args.n)
            amp = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            builders.append(_gaussian_builder(width, center, amp))
        else:
            builders.append(_dipole_builder(rng.uniform(0.8, 1.6),
                                            rng.uniform(1.0, 2.0)))
    return builders


def _cmd_prop21(args) -> int:
    defaults = {1: (16.0, 512), 2: (16.0, 128), 3: (12.0, 48)}
    L0, N0 = defaults[args.n]
    L = args.L or L0
    N = args.N or N0
    check = spectral.check_part1 if args.part == 1 else spectral.check_part2
    rows = []
    for i, build in enumerate(_prop21_builders(args)):
        for level in range(max(1, args.doublings)):
            grid = Grid(dimension=args.n, mode="periodic",
                        half_extent=L * 2**level,
                        points_per_axis=N * 2**level)
            res = check(build(grid), args.theta, args.gamma)
            rows.append({"sample_id": i, "lhs": res.lhs, "rhs": res.rhs,
                         "ratio": res.ratio,
                         "resolution": grid.points_per_axis,
                         "L": grid.half_extent})
    c_emp = max(r["ratio"] for r in rows)
    print(json.dumps({"part": args.part, "theta": args.theta,
                      "gamma": args.gamma, "C_emp": c_emp,
                      "samples": len(rows)}, sort_keys=True))
    if args.csv:
        with open(args.csv, "w", newline="\n") as fh:
            fh.write("sample_id,lhs,rhs,ratio,resolution,L\n")
            for r in rows:
                fh.write(
                    f"{r['sample_id']},{r['lhs']:.17g},{r['rhs']:.17g},"
                    f"{r['ratio']:.17g},{r['resolution']},{r['L']:.17g}\n")
    return 0


def _cmd_mconv(args) -> int:
    cfg = load_config(args.config)
    ms = [float(v) for v in args.ms.split(",")]
    out = runner.cutoff_convergence(cfg, ms)
    print(json.dumps({"sup_ratios": out["sup_ratios"],
                      "uniformity": out["uniformity"],
                      "rows": out["rows"]}, sort_keys=True, default=float))
    if args.csv:
        runner.write_mconv_csv(out["rows"], args.csv)
    if out["uniformity"] is not None and not out["uniformity"]["passed"]:
        return 1
    return 0


def _cmd_decay_fit(args) -> int:
    data = np.genfromtxt(args.csv, delimiter=",", names=True)
    lo, _, hi = args.window.partition(",")
    window = (float(lo), float(hi))
    column = "energy" if args.quantity == "energy" else "l2_sq"
    fit = fit_decay_series(data["t"], data[column], window)
    ratio_col = "ratio_energy" if args.quantity == "energy" else "ratio_l2"
    mask = (data["t"] >= window[0]) & (data["t"] <= window[1])
    sup_ratio = float(np.max(data[ratio_col][mask], initial=0.0))
    print(json.dumps({"quantity": args.quantity, "window": list(window),
                      "slope": fit.slope, "intercept": fit.intercept,
                      "r2": fit.r_squared, "sup_ratio": sup_ratio},
                     sort_keys=True))
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "preset": _cmd_preset,
    "prop21": _cmd_prop21,
    "mconv": _cmd_mconv,
    "decay-fit": _cmd_decay_fit,
}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
