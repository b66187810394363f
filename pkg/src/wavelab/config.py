"""Experiment configuration: a strict JSON tree mapped onto dataclasses.

Unknown keys are errors, not warnings (a silently ignored typo in V0 or
alpha would invalidate every certificate downstream).  Diagnostics carry
the config path and, when the source text is available, the line number
of the offending key.
"""

import json
from dataclasses import asdict, dataclass, field, replace


class ConfigError(ValueError):
    def __init__(self, message, path=None, line=None):
        loc = ""
        if path:
            loc += f" at {path}"
        if line is not None:
            loc += f" (line {line})"
        super().__init__(f"config error{loc}: {message}")
        self.path = path
        self.line = line


_DATA_FAMILY_KEYS = {
    "gaussian": {"amplitude", "center", "width"},
    "bump": {"radius", "amplitude", "center"},
    "ricker": {"amplitude", "sigma", "center"},
    "mode": {"index", "amplitude", "phase"},
    "zero": set(),
}


@dataclass(frozen=True)
class GridConfig:
    dimension: int
    mode: str
    L: float
    N: int


@dataclass(frozen=True)
class DampingConfig:
    family: str
    V0: float
    alpha: float = 0.0
    cutoff_m: float = None


@dataclass(frozen=True)
class DataSpec:
    family: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    grid: GridConfig
    dt: float
    T: float
    damping: DampingConfig
    u0: DataSpec
    u1: DataSpec
    record_every: int = 1
    epsilon: float = None
    C_prop21: float = None
    output_path: str = None
    rng_seed: int = 0
    boundary_shell: float = 0.5

    def to_dict(self) -> dict:
        return {
            "grid": asdict(self.grid),
            "dt": self.dt,
            "T": self.T,
            "record_every": self.record_every,
            "damping": asdict(self.damping),
            "data": {
                "u0": {"family": self.u0.family, **self.u0.params},
                "u1": {"family": self.u1.family, **self.u1.params},
            },
            "epsilon": self.epsilon,
            "C_prop21": self.C_prop21,
            "output_path": self.output_path,
            "rng_seed": self.rng_seed,
            "boundary_shell": self.boundary_shell,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def override(self, key: str, value) -> "ExperimentConfig":
        """Apply a sweep override; key in {cutoff_m, dt, N, alpha}."""
        if key == "dt":
            return replace(self, dt=float(value))
        if key == "N":
            return replace(self, grid=replace(self.grid, N=int(value)))
        if key == "cutoff_m":
            m = None if value is None else float(value)
            return replace(self, damping=replace(self.damping, cutoff_m=m))
        if key == "alpha":
            return replace(self, damping=replace(self.damping, alpha=float(value)))
        raise ConfigError(f"unsupported sweep key {key!r} "
                          "(expected cutoff_m, dt, N, or alpha)")


class _Source:
    """Best-effort key -> line lookup in the raw config text."""

    def __init__(self, text=None):
        self.lines = text.splitlines() if text else []

    def line_of(self, key: str):
        needle = f'"{key}"'
        for i, line in enumerate(self.lines, start=1):
            if needle in line:
                return i
        return None


def _require(mapping, key, path, src, types=None):
    if key not in mapping:
        raise ConfigError(f"missing required key {key!r}", path=path,
                          line=src.line_of(path.split(".")[0]))
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        raise ConfigError(
            f"{key!r} has type {type(value).__name__}", path=f"{path}.{key}",
            line=src.line_of(key))
    return value


def _reject_unknown(mapping, allowed, path, src):
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", path=path,
                              line=src.line_of(key))


def _parse_data_spec(raw, path, src) -> DataSpec:
    if not isinstance(raw, dict):
        raise ConfigError("data spec must be an object", path=path,
                          line=src.line_of(path.split(".")[-1]))
    family = _require(raw, "family", path, src, str)
    if family not in _DATA_FAMILY_KEYS:
        raise ConfigError(
            f"unknown data family {family!r} "
            f"(expected one of {sorted(_DATA_FAMILY_KEYS)})",
            path=f"{path}.family", line=src.line_of("family"))
    _reject_unknown(raw, _DATA_FAMILY_KEYS[family] | {"family"}, path, src)
    params = {k: v for k, v in raw.items() if k != "family"}
    return DataSpec(family=family, params=params)


_TOP_KEYS = {"grid", "dt", "T", "record_every", "damping", "data", "epsilon",
             "C_prop21", "output_path", "rng_seed", "boundary_shell"}
_NUMBER = (int, float)


def config_from_dict(raw: dict, source_text: str = None) -> ExperimentConfig:
    src = _Source(source_text)
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    _reject_unknown(raw, _TOP_KEYS, "<top>", src)

    graw = _require(raw, "grid", "<top>", src, dict)
    _reject_unknown(graw, {"dimension", "mode", "L", "N"}, "grid", src)
    grid = GridConfig(
        dimension=int(_require(graw, "dimension", "grid", src, int)),
        mode=_require(graw, "mode", "grid", src, str),
        L=float(_require(graw, "L", "grid", src, _NUMBER)),
        N=int(_require(graw, "N", "grid", src, int)),
    )

    draw = _require(raw, "damping", "<top>", src, dict)
    _reject_unknown(draw, {"family", "V0", "alpha", "cutoff_m"}, "damping", src)
    cutoff = draw.get("cutoff_m")
    damping = DampingConfig(
        family=_require(draw, "family", "damping", src, str),
        V0=float(_require(draw, "V0", "damping", src, _NUMBER)),
        alpha=float(draw.get("alpha", 0.0)),
        cutoff_m=None if cutoff is None else float(cutoff),
    )

    data_raw = _require(raw, "data", "<top>", src, dict)
    _reject_unknown(data_raw, {"u0", "u1"}, "data", src)
    u0 = _parse_data_spec(_require(data_raw, "u0", "data", src), "data.u0", src)
    u1 = _parse_data_spec(_require(data_raw, "u1", "data", src), "data.u1", src)

    eps = raw.get("epsilon")
    c21 = raw.get("C_prop21")
    return ExperimentConfig(
        grid=grid,
        dt=float(_require(raw, "dt", "<top>", src, _NUMBER)),
        T=float(_require(raw, "T", "<top>", src, _NUMBER)),
        damping=damping,
        u0=u0,
        u1=u1,
        record_every=int(raw.get("record_every", 1)),
        epsilon=None if eps is None else float(eps),
        C_prop21=None if c21 is None else float(c21),
        output_path=raw.get("output_path"),
        rng_seed=int(raw.get("rng_seed", 0)),
        boundary_shell=float(raw.get("boundary_shell", 0.5)),
    )


def config_from_json(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return config_from_dict(raw, source_text=text)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_json(fh.read())
