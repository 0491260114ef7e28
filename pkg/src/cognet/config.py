"""Flat key = value configuration files and bundled sweep presets.

A config fully determines one sweep: the complete model parameter block,
the sweep kind, the swept axis with its grid, and optional runner settings.
Every model key must be present explicitly so a config is a self-contained
record of what was computed; the bundled presets under presets/ are full
files, not patches. Keys suffixed _dbm are converted from dBm to watts and
zeta_db from dB to linear on load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .model import SystemParams

__all__ = [
    "ConfigError",
    "SweepSpec",
    "SWEEP_KINDS",
    "load_config",
    "loads_config",
    "dump_config",
    "list_presets",
    "resolve_config_path",
]

SWEEP_KINDS = (
    "energy-coverage",
    "transmit-prob",
    "coverage",
    "coverage-rician",
    "throughput",
    "meta",
    "validate",
)

# model keys in canonical file order; the two unit-suffixed alternates stand
# in for their base key
_MODEL_KEYS = (
    "lambda1", "lambda2", "p1", "t_i", "t_e", "d", "alpha",
    "sigma2", "epsilon", "e_sat", "rho", "zeta",
)
_ALTERNATES = {"sigma2_dbm": "sigma2", "zeta_db": "zeta"}
_FLOAT_RUN_KEYS = ("disk_radius", "k_factor")
_INT_RUN_KEYS = ("replicates", "master_seed", "n_fading")
_SWEEPABLE = set(_MODEL_KEYS) | {"zeta_db", "x"}


class ConfigError(ValueError):
    """Bad configuration: unknown key, missing key, or invalid value."""


@dataclass(frozen=True)
class SweepSpec:
    """One named sweep: kind, swept axis, grid, and full parameter block.

    overrides holds the complete resolved model mapping (watts and linear
    units), so a spec alone reconstructs its SystemParams. options carries
    runner settings (replicates, master_seed, disk_radius, k_factor,
    n_fading) that are not model parameters. swept_param is None only for
    the validate kind.
    """

    name: str
    swept_param: str | None
    grid: tuple
    overrides: dict
    output_path: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in SWEEP_KINDS:
            raise ConfigError(f"unknown sweep kind {self.name!r}")
        if self.name == "validate":
            return
        if self.swept_param not in _SWEEPABLE:
            raise ConfigError(
                f"swept parameter {self.swept_param!r} is not sweepable"
            )
        if (self.swept_param == "x") != (self.name == "meta"):
            raise ConfigError(
                "the x axis is swept exactly by the meta kind"
            )
        if len(self.grid) == 0:
            raise ConfigError("sweep grid must be non-empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError("sweep grid must be strictly increasing")
        if self.swept_param == "x" and (
            self.grid[0] < 0.0 or self.grid[-1] > 1.0
        ):
            raise ConfigError("x grid must lie within [0, 1]")

    def params(self) -> SystemParams:
        try:
            return SystemParams(**self.overrides)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def point_params(self, value) -> SystemParams:
        """Parameters at one grid point of the swept axis."""
        base = self.params()
        if self.swept_param is None or self.swept_param == "x":
            return base
        if self.swept_param == "zeta_db":
            return base.replace(zeta=10.0 ** (value / 10.0))
        try:
            return base.replace(**{self.swept_param: float(value)})
        except ValueError as exc:
            raise ConfigError(
                f"{self.swept_param} = {value!r}: {exc}"
            ) from exc


def _parse_grid(text):
    """Comma list of numbers, or start:stop:count for a uniform grid."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range grids use start:stop:count")
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
        if count < 1:
            raise ValueError("grid count must be at least 1")
        return tuple(float(v) for v in np.linspace(start, stop, count))
    return tuple(float(v) for v in text.split(","))


def loads_config(text, origin="<config>") -> tuple[SystemParams, SweepSpec]:
    """Parse a config from a string; origin labels error messages."""
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{origin} line {lineno}: expected key = value"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not value:
            raise ConfigError(f"{origin} line {lineno}: empty value for {key}")
        if key in raw:
            raise ConfigError(f"{origin} line {lineno}: duplicate key {key}")
        raw[key] = value
        lines[key] = lineno

    def fail(key, reason):
        raise ConfigError(f"{origin} line {lines[key]}: {key}: {reason}")

    def take_float(key):
        try:
            return float(raw.pop(key))
        except ValueError:
            fail(key, "not a number")

    def take_int(key):
        value = raw.pop(key)
        try:
            return int(value)
        except ValueError:
            fail(key, "not an integer")

    model = {}
    for key in _MODEL_KEYS:
        alt = next((a for a, b in _ALTERNATES.items() if b == key), None)
        have = [k for k in (key, alt) if k is not None and k in raw]
        if len(have) == 2:
            raise ConfigError(
                f"{origin}: give {key} or {alt}, not both"
            )
        if not have:
            raise ConfigError(f"{origin}: missing required key {key}")
        source = have[0]
        value = take_float(source)
        if source == "sigma2_dbm":
            value = 10.0 ** ((value - 30.0) / 10.0)
        elif source == "zeta_db":
            value = 10.0 ** (value / 10.0)
        model[key] = value
    if "rate" in raw:
        model["rate"] = take_float("rate")

    if "sweep" not in raw:
        raise ConfigError(f"{origin}: missing required key sweep")
    kind = raw.pop("sweep")
    if kind not in SWEEP_KINDS:
        raise ConfigError(
            f"{origin}: unknown sweep kind {kind!r}; "
            f"expected one of {', '.join(SWEEP_KINDS)}"
        )

    swept = None
    grid = (0.0,)
    if kind != "validate":
        for key in ("sweep_param", "sweep_grid"):
            if key not in raw:
                raise ConfigError(f"{origin}: missing required key {key}")
        swept = raw.pop("sweep_param")
        grid_text = raw.pop("sweep_grid")
        try:
            grid = _parse_grid(grid_text)
        except ValueError as exc:
            fail_key = "sweep_grid"
            raise ConfigError(
                f"{origin} line {lines[fail_key]}: sweep_grid: {exc}"
            ) from exc
    else:
        raw.pop("sweep_param", None)
        raw.pop("sweep_grid", None)

    options = {}
    for key in _INT_RUN_KEYS:
        if key in raw:
            options[key] = take_int(key)
            if options[key] < 0 or (key != "master_seed"
                                    and options[key] < 1):
                fail(key, "out of range")
    for key in _FLOAT_RUN_KEYS:
        if key in raw:
            options[key] = take_float(key)
            if options[key] < 0:
                fail(key, "must be non-negative")
    output_path = raw.pop("output_path", None)

    if raw:
        key = min(raw, key=lambda k: lines[k])
        raise ConfigError(f"{origin} line {lines[key]}: unknown key {key}")

    try:
        params = SystemParams(**model)
    except ValueError as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    spec = SweepSpec(
        name=kind,
        swept_param=swept,
        grid=grid,
        overrides=dict(model),
        output_path=output_path,
        options=options,
    )
    return params, spec


def load_config(path) -> tuple[SystemParams, SweepSpec]:
    """Read and validate a config file; see loads_config."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_config(text, origin=str(path))


def dump_config(spec: SweepSpec) -> str:
    """Serialize a sweep spec; loads_config(dump_config(s)) round-trips.

    Emits base keys with repr precision (not the _dbm/_db forms) so the
    reload is bit-identical.
    """
    out = []
    for key in _MODEL_KEYS:
        out.append(f"{key} = {spec.overrides[key]!r}")
    if spec.overrides.get("rate") is not None:
        out.append(f"rate = {spec.overrides['rate']!r}")
    out.append(f"sweep = {spec.name}")
    if spec.name != "validate":
        out.append(f"sweep_param = {spec.swept_param}")
        out.append("sweep_grid = " + ",".join(repr(v) for v in spec.grid))
    for key in (*_INT_RUN_KEYS, *_FLOAT_RUN_KEYS):
        if key in spec.options:
            out.append(f"{key} = {spec.options[key]!r}")
    if spec.output_path:
        out.append(f"output_path = {spec.output_path}")
    return "\n".join(out) + "\n"


def list_presets():
    """Names of the bundled sweep presets."""
    root = resources.files("cognet").joinpath("presets")
    return sorted(
        entry.name[:-4]
        for entry in root.iterdir()
        if entry.name.endswith(".cfg")
    )


def resolve_config_path(name_or_path):
    """Map a preset name or a filesystem path to readable config text.

    Returns (text, origin). Filesystem paths win over preset names.
    """
    import os

    if os.path.exists(name_or_path):
        try:
            with open(name_or_path, encoding="utf-8") as fh:
                return fh.read(), str(name_or_path)
        except OSError as exc:
            raise ConfigError(
                f"cannot read {name_or_path}: {exc.strerror}"
            ) from exc
    preset = resources.files("cognet").joinpath(
        "presets", f"{name_or_path}.cfg"
    )
    if preset.is_file():
        return preset.read_text(encoding="utf-8"), f"preset:{name_or_path}"
    raise ConfigError(
        f"{name_or_path!r} is neither a config file nor a preset; "
        f"presets: {', '.join(list_presets())}"
    )
