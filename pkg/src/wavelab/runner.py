"""Config-driven orchestration: build, run, certify, emit CSV."""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, functionals, integrator, kernels, spectral
from .coefficients import CutoffDamping, DampingCoefficient
from .config import ConfigError, DataSpec, ExperimentConfig, GridConfig, \
    DampingConfig
from .fields import Grid, ScalarField
from .initial_data import InitialData, SeedConstants, compute_norms, \
    make_bump, make_gaussian, make_mode, make_ricker, seed_constants, zero_field

CSV_COLUMNS = ("t", "energy", "l2_sq", "damping_cum", "damping_u_cum",
               "residual_2_5", "residual_2_13", "residual_2_16",
               "ratio_energy", "ratio_l2", "boundary")

DISSIPATION_SLACK = 1e-12
BOUNDARY_FACTOR = 1e-6
BLOWUP_FACTOR = 1e6


def build_grid(cfg: ExperimentConfig) -> Grid:
    g = cfg.grid
    try:
        return Grid(dimension=g.dimension, mode=g.mode, half_extent=g.L,
                    points_per_axis=g.N)
    except ValueError as exc:
        raise ConfigError(str(exc), path="grid") from exc


def build_base_damping(cfg: ExperimentConfig) -> DampingCoefficient:
    d = cfg.damping
    try:
        return DampingCoefficient(family=d.family, V0=d.V0, alpha=d.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc), path="damping") from exc


def build_run_damping(cfg: ExperimentConfig):
    base = build_base_damping(cfg)
    if cfg.damping.cutoff_m is None:
        return base
    try:
        return CutoffDamping(base=base, m=cfg.damping.cutoff_m)
    except ValueError as exc:
        raise ConfigError(str(exc), path="damping.cutoff_m") from exc


_BUILDERS = {
    "gaussian": lambda grid, p: make_gaussian(
        grid, amplitude=p.get("amplitude", 1.0), center=p.get("center", 0.0),
        width=p.get("width", 1.0)),
    "bump": lambda grid, p: make_bump(
        grid, radius=p["radius"], amplitude=p.get("amplitude", 1.0),
        center=p.get("center", 0.0)),
    "ricker": lambda grid, p: make_ricker(
        grid, amplitude=p.get("amplitude", 1.0), sigma=p.get("sigma", 1.0),
        center=p.get("center", 0.0)),
    "mode": lambda grid, p: make_mode(
        grid, index=p["index"], amplitude=p.get("amplitude", 1.0),
        phase=p.get("phase", 0.0)),
    "zero": lambda grid, p: zero_field(grid),
}


def build_field(spec: DataSpec, grid: Grid, path: str) -> ScalarField:
    p = dict(spec.params)
    if "center" in p and isinstance(p["center"], list):
        p["center"] = tuple(p["center"])
    try:
        return _BUILDERS[spec.family](grid, p)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc), path=path) from exc


@dataclass
class Prepared:
    grid: Grid
    base_damping: DampingCoefficient
    run_damping: object
    data: InitialData
    seeds: SeedConstants


def prepare(cfg: ExperimentConfig) -> Prepared:
    """Build and cross-validate every module input before running."""
    grid = build_grid(cfg)
    base = build_base_damping(cfg)
    run_damping = build_run_damping(cfg)
    if cfg.T < 0:
        raise ConfigError("T must be nonnegative", path="T")
    if cfg.dt <= 0:
        raise ConfigError("dt must be positive", path="dt")
    rep = integrator.cfl_check(grid, cfg.dt)
    if not rep.ok:
        raise ConfigError(
            f"dt={cfg.dt} violates the CFL bound dt_max={rep.dt_max:.6g}",
            path="dt")
    if cfg.record_every < 1:
        raise ConfigError("record_every must be >= 1", path="record_every")
    if cfg.record_every * cfg.dt > 0.1 * (1 + 1e-12):
        raise ConfigError(
            f"record spacing {cfg.record_every * cfg.dt:.4g} exceeds 0.1",
            path="record_every")
    u0 = build_field(cfg.u0, grid, "data.u0")
    u1 = build_field(cfg.u1, grid, "data.u1")
    try:
        data = compute_norms(u0, u1, base, gamma=0.0)
        c21 = cfg.C_prop21
        if c21 is None:
            c21 = spectral.default_prop21_constant(grid.dimension)
        seeds = seed_constants(data, V0=base.V0, eps=cfg.epsilon,
                               C_prop21=c21)
    except ValueError as exc:
        raise ConfigError(str(exc), path="data") from exc
    return Prepared(grid=grid, base_damping=base, run_damping=run_damping,
                    data=data, seeds=seeds)


@dataclass
class RunResult:
    config: ExperimentConfig
    history: functionals.RunHistory
    seeds: SeedConstants
    certificates: dict
    report: dict
    csv_path: str = None

    @property
    def passed(self) -> bool:
        return self.report["passed"]


def run(cfg: ExperimentConfig, keep_snapshots: bool = False,
        write_output: bool = True) -> RunResult:
    start = time.perf_counter()
    prep = prepare(cfg)
    state = integrator.init_state(prep.data, prep.run_damping, cfg.dt)
    recorder = functionals.Recorder(
        prep.grid, state.damping_values, seeds=prep.seeds,
        boundary_shell=cfg.boundary_shell,
        u0_values=prep.data.u0.values, u1_values=prep.data.u1.values)
    guard = None
    i00 = np.sqrt(prep.seeds.I00_sq)
    if i00 > 0:
        guard = BLOWUP_FACTOR * i00
    history = integrator.run_until(
        state, cfg.T, record_every=cfg.record_every, recorder=recorder,
        keep_snapshots=keep_snapshots, blowup_guard=guard)
    history.meta.update(config=cfg.to_dict(),
                        radial_measure="4*pi solid-angle factor included",
                        kernel_backend=kernels.BACKEND)
    certificates = _certify(cfg, prep, history)
    wall = time.perf_counter() - start
    report = _build_report(cfg, prep, history, certificates, wall)
    result = RunResult(config=cfg, history=history, seeds=prep.seeds,
                       certificates=certificates, report=report)
    if write_output and cfg.output_path:
        write_csv(history, cfg.output_path)
        result.csv_path = cfg.output_path
        with open(_report_path(cfg.output_path), "w") as fh:
            fh.write(report_json(report))
    return result


def _certify(cfg: ExperimentConfig, prep: Prepared,
             history: functionals.RunHistory) -> dict:
    certs = {}
    certs["dissipation"] = {
        "max_relative_increase": history.max_energy_increase,
        "slack": DISSIPATION_SLACK,
        "passed": bool(history.max_energy_increase <= DISSIPATION_SLACK),
        "gated": True,
    }
    boundary_max = float(np.max(history.column("boundary"), initial=0.0))
    if prep.grid.mode == "periodic":
        certs["boundary"] = {"max_abs": 0.0, "threshold": None,
                             "passed": True, "gated": False}
    else:
        scale = max(np.sqrt(prep.seeds.I00_sq), 1e-300)
        thr = BOUNDARY_FACTOR * scale
        certs["boundary"] = {"max_abs": boundary_max, "threshold": thr,
                             "passed": bool(boundary_max <= thr),
                             "gated": True}
    gate_bounds = prep.grid.mode == "radial3d"
    for quantity in ("energy", "l2"):
        cert = analysis.bound_certificate(history, quantity)
        certs[f"bound_{quantity}"] = {
            "sup_ratio": cert.sup_ratio, "t_at_sup": cert.t_at_sup,
            "passed": cert.passed, "gated": gate_bounds,
        }
    lemma = functionals.l2_damping_certificate(history)
    certs["l2_damping"] = {"sup_ratio": lemma.sup_ratio,
                           "t_at_sup": lemma.t_at_sup, "passed": None,
                           "gated": False}
    return certs


def _build_report(cfg, prep, history, certificates, wall) -> dict:
    gated = [c for c in certificates.values() if c.get("gated")]
    passed = all(c["passed"] for c in gated)
    fits = {}
    if cfg.T >= 20.0:
        for quantity in ("energy", "l2"):
            try:
                fit = analysis.fit_decay(history, quantity,
                                         (max(1.0, cfg.T / 10.0), cfg.T))
                fits[quantity] = {"slope": fit.slope, "r_squared": fit.r_squared,
                                  "window": [fit.t_lo, fit.t_hi]}
            except ValueError:
                fits[quantity] = None
    residual_max = {
        name: float(np.max(np.abs(history.column(name)), initial=0.0))
        for name in ("residual_2_5", "residual_2_13", "residual_2_16")
    }
    return {
        "config": cfg.to_dict(),
        "seed_constants": prep.seeds.as_dict(),
        "certificates": certificates,
        "decay_fits": fits,
        "residual_max": residual_max,
        "boundary_max": float(np.max(history.column("boundary"), initial=0.0)),
        "records": len(history.records),
        "kernel_backend": history.meta.get("kernel_backend"),
        "radial_measure": history.meta.get("radial_measure"),
        "passed": passed,
        "wall_time": wall,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=float)


def _report_path(csv_path: str) -> str:
    stem, _ = os.path.splitext(csv_path)
    return stem + ".report.json"


def write_csv(history: functionals.RunHistory, path) -> None:
    cols = [history.column(name) for name in CSV_COLUMNS]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _sweep_output_path(base_path, key, value):
    if base_path is None:
        return None
    stem, ext = os.path.splitext(base_path)
    return f"{stem}__{key}={value}{ext or '.csv'}"


def _sweep_member(args):
    cfg, keep_snapshots = args
    return run(cfg, keep_snapshots=keep_snapshots)


def sweep(cfg: ExperimentConfig, key: str, values, workers: int = None,
          keep_snapshots: bool = False) -> list:
    """Independent runs with cfg[key] replaced by each value, input order."""
    members = []
    for v in values:
        member = cfg.override(key, v)
        member = replace(member,
                         output_path=_sweep_output_path(cfg.output_path, key, v))
        members.append(member)
    if workers is None:
        workers = int(os.environ.get("WAVELAB_WORKERS", "1"))
    if workers > 1 and len(members) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_member,
                                    [(m, keep_snapshots) for m in members]))
    else:
        results = [run(m, keep_snapshots=keep_snapshots) for m in members]
    return results


def cutoff_convergence(cfg: ExperimentConfig, ms, workers: int = None) -> dict:
    """m-sweep against the uncut coefficient: sup-t L2 errors + uniformity."""
    ms = sorted(float(m) for m in ms)
    ref_cfg = replace(cfg.override("cutoff_m", None), output_path=None)
    reference = run(ref_cfg, keep_snapshots=True, write_output=False)
    histories = {}
    sup_ratios = {}
    for m in ms:
        member = replace(cfg.override("cutoff_m", m), output_path=None)
        res = run(member, keep_snapshots=True, write_output=False)
        histories[m] = res.history
        sup_ratios[m] = res.certificates["l2_damping"]["sup_ratio"]
    rows = analysis.m_convergence_study(histories, reference.history)
    uniformity = analysis.uniformity_check(sup_ratios) if len(ms) >= 3 else None
    return {
        "rows": rows,
        "sup_ratios": sup_ratios,
        "reference_sup_ratio":
            reference.certificates["l2_damping"]["sup_ratio"],
        "uniformity": uniformity,
    }


def write_mconv_csv(rows, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("m,sup_error\n")
        for row in rows:
            fh.write(f"{row['m']:.17g},{row['sup_error']:.17g}\n")


# -- presets ----------------------------------------------------------------

_SQRT3 = float(np.sqrt(3.0))


def _preset_oracle() -> ExperimentConfig:
    return ExperimentConfig(
        grid=GridConfig(dimension=1, mode="periodic", L=float(np.pi), N=256),
        dt=1e-3, T=5.0, record_every=1,
        damping=DampingConfig(family="constant", V0=2.0),
        u0=DataSpec("mode", {"index": 1, "amplitude": 1.0}),
        u1=DataSpec("zero"),
        rng_seed=20260810,
        output_path="oracle.csv",
    )


def _preset_theorem3d() -> ExperimentConfig:
    h = 40.0 / 1600.0
    return ExperimentConfig(
        grid=GridConfig(dimension=3, mode="radial3d", L=40.0, N=1601),
        dt=h / _SQRT3, T=100.0, record_every=6,
        damping=DampingConfig(family="polynomial", V0=1.0, alpha=1.0),
        u0=DataSpec("gaussian", {"amplitude": 1.0, "center": 0.0, "width": 1.0}),
        u1=DataSpec("gaussian", {"amplitude": 0.5, "center": 0.0, "width": 1.5}),
        rng_seed=20260810,
        output_path="theorem3d.csv",
    )


def _preset_expdamp() -> ExperimentConfig:
    h = 12.0 / 600.0
    return ExperimentConfig(
        grid=GridConfig(dimension=3, mode="radial3d", L=12.0, N=601),
        dt=h / _SQRT3, T=30.0, record_every=8,
        damping=DampingConfig(family="exponential", V0=1.0),
        u0=DataSpec("gaussian", {"amplitude": 1.0, "center": 0.0, "width": 1.0}),
        u1=DataSpec("zero"),
        rng_seed=20260810,
        output_path="expdamp.csv",
    )


def _preset_open2d() -> ExperimentConfig:
    # horizon short enough that the unit-speed front (data tail ~6) stays
    # clear of the Dirichlet boundary
    return ExperimentConfig(
        grid=GridConfig(dimension=2, mode="box_dirichlet", L=24.0, N=193),
        dt=0.08, T=16.0, record_every=1,
        damping=DampingConfig(family="constant", V0=1.0),
        u0=DataSpec("ricker", {"amplitude": 1.0, "sigma": 1.5}),
        u1=DataSpec("ricker", {"amplitude": 0.5, "sigma": 1.0}),
        rng_seed=20260810,
        output_path="open2d.csv",
    )


PRESETS = {
    "oracle": _preset_oracle,
    "theorem3d": _preset_theorem3d,
    "expdamp": _preset_expdamp,
    "open2d": _preset_open2d,
}


def preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} "
                          f"(expected one of {sorted(PRESETS)})")
    return PRESETS[name]()
