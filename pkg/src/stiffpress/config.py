"""Run configuration: the ``key=value`` text format, defaults, presets and initial data."""

import math
import warnings
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .grid import Grid1D, build_grid
from .state import ModelParams


class MassAssumptionWarning(UserWarning):
    """Initial mean density is not below 1."""


FLOAT_KEYS = {
    "x_min", "x_max", "m", "K", "chi", "D", "t_final", "cfl", "dt_max_cap", "newton_tol",
    "init_M", "init_amp", "init_left", "init_right", "init_split",
}
INT_KEYS = {"n_cells", "newton_max_iter", "max_halvings"}
STR_KEYS = {"init", "output_dir", "solver", "init_path"}
LIST_KEYS = {"snapshot_times"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | STR_KEYS | LIST_KEYS

DEFAULTS = {
    "x_min": 0.0,
    "x_max": 1.0,
    "n_cells": 200,
    "m": 2.0,
    "K": 1.0,
    "chi": 1.0,
    "D": 1.0,
    "t_final": 1.0,
    "cfl": 0.5,
    "dt_max_cap": 1e-2,
    "newton_tol": 1e-11,
    "newton_max_iter": 50,
    "max_halvings": 20,
    "init": "cosine",
    "init_M": 0.5,
    "init_amp": 0.01,
    "init_left": 0.0,
    "init_right": 0.5,
    "init_split": 0.5,
    "init_path": "",
    "output_dir": "out",
    "solver": "pme",
}
INIT_KINDS = ("cosine", "step", "csv")
SOLVERS = ("pme", "hyperbolic")
PRESETS = ("fig1", "fig2")


@dataclass(frozen=True)
class RunConfig:
    grid: Grid1D
    params: ModelParams
    t_final: float
    snapshot_times: tuple
    init: str = "cosine"
    init_M: float = 0.5
    init_amp: float = 0.01
    init_left: float = 0.0
    init_right: float = 0.5
    init_split: float = 0.5
    init_path: str = ""
    output_dir: str = "out"
    solver: str = "pme"

    def initial_density(self):
        """Initial density at cell centres."""
        g = self.grid
        x = g.centers
        if self.init == "cosine":
            # M - amp cos(pi x) on [0, 1], rescaled to the domain
            return self.init_M - self.init_amp * np.cos(math.pi * (x - g.x_min) / g.length)
        if self.init == "step":
            return np.where(x < self.init_split, self.init_left, self.init_right).astype(float)
        if self.init == "csv":
            return read_density_csv(self.init_path, g)
        raise ConfigurationError(f"unknown initial profile {self.init!r}", key="init")

    def with_params(self, **changes):
        """Copy with model parameters replaced, validated again."""
        cfg = replace(self, params=self.params.with_(**changes))
        validate(cfg)
        return cfg

    def with_(self, **changes):
        cfg = replace(self, **changes)
        validate(cfg)
        return cfg

    def to_text(self):
        """Serialise back to the ``key=value`` format (round-trips through :func:`parse_config`)."""
        g, p = self.grid, self.params
        items = [
            ("x_min", g.x_min), ("x_max", g.x_max), ("n_cells", g.n_cells),
            ("m", p.m), ("K", p.K), ("chi", p.chi), ("D", p.D),
            ("t_final", self.t_final),
            ("snapshot_times", ",".join(_fmt(t) for t in self.snapshot_times)),
            ("cfl", p.cfl), ("dt_max_cap", p.dt_max_cap), ("newton_tol", p.newton_tol),
            ("newton_max_iter", p.newton_max_iter), ("max_halvings", p.max_halvings),
            ("init", self.init), ("init_M", self.init_M), ("init_amp", self.init_amp),
            ("init_left", self.init_left), ("init_right", self.init_right),
            ("init_split", self.init_split), ("init_path", self.init_path),
            ("output_dir", self.output_dir), ("solver", self.solver),
        ]
        return "".join(f"{k}={_fmt(v)}\n" for k, v in items)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _convert(key, raw):
    try:
        if key in FLOAT_KEYS:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        if key in INT_KEYS:
            return int(raw)
        if key in LIST_KEYS:
            parts = [t for t in raw.replace(" ", "").split(",") if t]
            values = tuple(float(t) for t in parts)
            if not all(math.isfinite(v) for v in values):
                raise ValueError
            return values
    except ValueError:
        raise ConfigurationError(f"malformed value {raw!r}", key=key) from None
    return raw.strip()


def parse_config(text, base_dir=None):
    """Parse a ``key=value`` document into a validated :class:`RunConfig`.

    Blank lines and ``#`` comments are ignored.  Omitted keys take the
    values in :data:`DEFAULTS`; ``snapshot_times`` defaults to
    ``0, t_final``.  A relative ``init_path`` is resolved against
    ``base_dir``.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigurationError("unknown key", key=key)
        values[key] = _convert(key, raw)

    merged = {**DEFAULTS, **values}
    if "snapshot_times" not in values:
        merged["snapshot_times"] = (0.0, merged["t_final"])
    if merged["init_path"] and base_dir is not None and not Path(merged["init_path"]).is_absolute():
        merged["init_path"] = str(Path(base_dir) / merged["init_path"])

    grid = build_grid(merged["x_min"], merged["x_max"], merged["n_cells"])
    params = ModelParams(**{k: merged[k] for k in (
        "m", "K", "chi", "D", "cfl", "dt_max_cap", "newton_tol", "newton_max_iter", "max_halvings")})
    cfg = RunConfig(
        grid=grid,
        params=params,
        t_final=merged["t_final"],
        snapshot_times=tuple(sorted(merged["snapshot_times"])),
        **{k: merged[k] for k in (
            "init", "init_M", "init_amp", "init_left", "init_right", "init_split",
            "init_path", "output_dir", "solver")},
    )
    validate(cfg)
    return cfg


def validate(cfg):
    if cfg.t_final < 0:
        raise ConfigurationError("must be >= 0", key="t_final")
    times = cfg.snapshot_times
    if any(t < 0 or t > cfg.t_final for t in times):
        raise ConfigurationError(f"times must lie in [0, t_final={cfg.t_final}]", key="snapshot_times")
    if list(times) != sorted(set(times)):
        raise ConfigurationError("times must be strictly increasing", key="snapshot_times")
    if cfg.init not in INIT_KINDS:
        raise ConfigurationError(f"expected one of {INIT_KINDS}", key="init")
    if cfg.solver not in SOLVERS:
        raise ConfigurationError(f"expected one of {SOLVERS}", key="solver")
    if cfg.init == "csv" and not cfg.init_path:
        raise ConfigurationError("init=csv needs init_path", key="init_path")
    u0 = cfg.initial_density()
    if not np.all(np.isfinite(u0)):
        raise ConfigurationError("initial density is not finite", key="init")
    K = cfg.params.K
    if u0.min() < 0 or u0.max() > K:
        raise ConfigurationError(
            f"initial density range [{u0.min():.6g}, {u0.max():.6g}] is not inside [0, K={K}]", key="init")
    if u0.mean() >= 1.0:
        warnings.warn(
            f"mean initial density {u0.mean():.6g} >= 1; the saturation estimates assume it is below 1",
            MassAssumptionWarning,
            stacklevel=3,
        )


def load_config(source):
    """Read a config from a file path, or from a built-in preset name (``fig1``, ``fig2``)."""
    path = Path(source)
    if path.is_file():
        return parse_config(path.read_text(), base_dir=path.parent)
    if source in PRESETS:
        return preset(source)
    raise ConfigurationError(f"no config file or preset named {source!r}")


def preset_text(name):
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; expected one of {PRESETS}")
    return resources.files("stiffpress.presets").joinpath(f"{name}.cfg").read_text()


def preset(name, **overrides):
    """Built-in preset, optionally with ``key=value`` overrides applied to the text."""
    text = preset_text(name)
    if overrides:
        text += "".join(f"{k}={_override(v)}\n" for k, v in overrides.items())
    return parse_config(text)


def _override(v):
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(float(t)) for t in v)
    return _fmt(v)


def read_density_csv(path, g):
    """Density column ``u`` of a CSV with a header row (e.g. a snapshot file)."""
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}", key="init_path") from None
    if data.dtype.names is None or "u" not in data.dtype.names:
        raise ConfigurationError(f"{path} has no 'u' column", key="init_path")
    u = np.atleast_1d(data["u"]).astype(float)
    if u.shape != (g.n_cells,):
        raise ConfigurationError(f"{path} has {u.size} rows, grid has {g.n_cells} cells", key="init_path")
    return u
