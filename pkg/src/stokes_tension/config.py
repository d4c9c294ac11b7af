"""Run configuration read from TOML files or built-in presets.

A config is a nested key/value document. Top-level keys are ``n_points``,
``mode``, ``seed`` and optionally ``preset``; sections are ``[curve]``,
``[force]``, ``[fields]``, ``[sweep]``, ``[verify]`` and ``[output]``. When a
preset is named, the file only needs to list the keys it overrides.
"""

from __future__ import annotations

import copy
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .curve import ClosedCurve, PerturbationSpec, build_curve, fourier_curve, perturbed_circle
from .errors import ConfigError, CurveError
from .oracles import table1_force
from .spectral import PeriodicGrid
from .tension import ForceDensity

PRESETS: dict[str, dict] = {
    "table1": {
        "n_points": 32,
        "mode": "mean_zero",
        "curve": {"type": "fourier", "x_cos": [0.0, 1.0], "y_sin": [0.0, 1.0]},
        "force": {"type": "table1"},
    },
    "example1": {
        "n_points": 128,
        "curve": {"type": "perturbed_circle", "g0": 0.0, "g_cos": [1.0], "epsilon": 0.02},
        "sweep": {"epsilons": [0.005, 0.01, 0.02, 0.04, 0.08, 0.16]},
    },
    "example2": {
        "n_points": 128,
        "curve": {"type": "perturbed_circle", "g0": 0.5, "g_cos": [0.0, 0.5], "epsilon": 0.02},
        "sweep": {"epsilons": [0.005, 0.01, 0.02, 0.04, 0.08, 0.16]},
    },
}

MODES = ("auto", "plain", "mean_zero")
FORMATS = ("csv", "json")
THREADS_ENV = "STOKES_TENSION_THREADS"


@dataclass
class RunConfig:
    n_points: int = 64
    mode: str = "auto"
    seed: int = 0
    curve: dict | None = None
    force: dict | None = None
    fields: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    workers: int = 1
    level: str = "quick"
    out_dir: Path = Path("out")
    formats: tuple = FORMATS
    preset: str | None = None
    source: str = ""  # raw text, for line lookups in error messages

    # -- builders ---------------------------------------------------------

    def build_curve(self, epsilon: float | None = None) -> ClosedCurve:
        spec = self._need("curve")
        kind = spec.get("type")
        try:
            if kind == "fourier":
                return fourier_curve(
                    self.n_points,
                    *(self._floats(spec, k) for k in ("x_cos", "x_sin", "y_cos", "y_sin")),
                )
            if kind == "perturbed_circle":
                g = self.perturbation()
                eps = g.epsilon if epsilon is None else epsilon
                return perturbed_circle(g.with_epsilon(eps), self.n_points)
            if kind == "samples":
                pts = self._table(spec, "points", "curve")
                return build_curve(pts)
        except CurveError as exc:
            raise ConfigError(self._where("curve", "type") + f"curve is not admissible: {exc}") from exc
        raise ConfigError(self._where("curve", "type") + f"unknown curve type {kind!r}")

    def perturbation(self) -> PerturbationSpec:
        spec = self._need("curve")
        if spec.get("type") != "perturbed_circle":
            raise ConfigError(self._where("curve", "type") + "a perturbed_circle curve is required here")
        try:
            return PerturbationSpec(
                float(spec.get("g0", 0.0)),
                self._floats(spec, "g_cos"),
                self._floats(spec, "g_sin"),
                float(spec.get("epsilon", 0.0)),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(self._where("curve", "g_cos") + str(exc)) from exc

    def build_force(self) -> np.ndarray:
        spec = self._need("force")
        kind = spec.get("type")
        if kind == "table1":
            return table1_force(PeriodicGrid(self.n_points))
        if kind == "frame_coeffs":
            coeffs = {k: self._floats(spec, k) for k in "abcd"}
            return ForceDensity.from_frame_coeffs(self.n_points, **coeffs).values.copy()
        if kind == "samples":
            return self._table(spec, "values", "force")
        raise ConfigError(self._where("force", "type") + f"unknown force type {kind!r}")

    # -- helpers ----------------------------------------------------------

    def _need(self, section):
        spec = getattr(self, section)
        if not spec:
            raise ConfigError(f"field '{section}': missing [{section}] section")
        if "type" not in spec:
            raise ConfigError(self._where(section, None) + "missing key 'type'")
        return spec

    def _floats(self, spec, key):
        vals = spec.get(key, [])
        if not isinstance(vals, list) or not all(isinstance(v, (int, float)) for v in vals):
            raise ConfigError(self._where(None, key) + "expected an array of numbers")
        return tuple(float(v) for v in vals)

    def _table(self, spec, key, section):
        try:
            arr = np.asarray(spec[key], dtype=float)
        except KeyError:
            raise ConfigError(self._where(section, None) + f"missing key '{key}'") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(self._where(section, key) + f"not a numeric table: {exc}") from exc
        if arr.shape != (self.n_points, 2):
            raise ConfigError(
                self._where(section, key) + f"expected shape ({self.n_points}, 2), got {arr.shape}"
            )
        return arr

    def _where(self, section, key) -> str:
        name = ".".join(p for p in (section, key) if p)
        line = _line_of(self.source, key if key else f"[{section}]")
        loc = f" (line {line})" if line else ""
        return f"field '{name}'{loc}: "


def _line_of(text: str, key: str) -> int | None:
    if not text or not key:
        return None
    if key.startswith("["):
        pat = re.compile(r"^\s*" + re.escape(key) + r"\s*$")
    else:
        pat = re.compile(r"^\s*" + re.escape(key) + r"\s*=")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            return i
    return None


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def parse_config(text: str, *, base_dir: Path | None = None) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    return config_from_dict(raw, source=text, base_dir=base_dir)


def config_from_dict(raw: dict, *, source: str = "", base_dir: Path | None = None) -> RunConfig:
    preset = raw.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"field 'preset' (line {_line_of(source, 'preset')}): unknown preset {preset!r}")
        raw = _merge(PRESETS[preset], {k: v for k, v in raw.items() if k != "preset"})
    cfg = RunConfig(source=source, preset=preset)

    def where(key):
        line = _line_of(source, key)
        return f"field '{key}'" + (f" (line {line})" if line else "") + ": "

    n = raw.get("n_points", cfg.n_points)
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(where("n_points") + "must be an integer")
    cfg.n_points = n
    check_n_points(n, where("n_points"))

    cfg.mode = raw.get("mode", cfg.mode)
    if cfg.mode not in MODES:
        raise ConfigError(where("mode") + f"must be one of {MODES}")
    cfg.seed = raw.get("seed", 0)
    if not isinstance(cfg.seed, int):
        raise ConfigError(where("seed") + "must be an integer")

    for name in ("curve", "force"):
        sec = raw.get(name)
        if sec is not None and not isinstance(sec, dict):
            raise ConfigError(where(name) + "must be a table")
        setattr(cfg, name, sec)

    fields = raw.get("fields", {})
    cfg.fields = list(fields.get("points", [])) if isinstance(fields, dict) else []

    sweep = raw.get("sweep", {})
    if "epsilons" in sweep:
        eps = sweep["epsilons"]
        if not isinstance(eps, list) or not all(isinstance(e, (int, float)) for e in eps):
            raise ConfigError(where("epsilons") + "must be an array of numbers")
        cfg.epsilons = [float(e) for e in eps]
    cfg.workers = int(sweep.get("workers", os.environ.get(THREADS_ENV, 1)))

    cfg.level = raw.get("verify", {}).get("level", "quick")
    if cfg.level not in ("quick", "full"):
        raise ConfigError(where("level") + "must be 'quick' or 'full'")

    out = raw.get("output", {})
    out_dir = Path(out.get("dir", "out"))
    if base_dir is not None and not out_dir.is_absolute():
        out_dir = base_dir / out_dir
    cfg.out_dir = out_dir
    cfg.formats = parse_formats(out.get("formats", list(FORMATS)))
    return cfg


def check_n_points(n: int, where: str = "field 'n_points': ") -> None:
    if n < 8 or n % 2:
        raise ConfigError(where + f"must be even and at least 8, got {n}")


def parse_formats(value) -> tuple:
    items = value.split(",") if isinstance(value, str) else list(value)
    items = tuple(s.strip() for s in items if s.strip())
    bad = [s for s in items if s not in FORMATS]
    if bad or not items:
        raise ConfigError(f"field 'formats': expected a subset of {FORMATS}, got {list(items)}")
    return items


def load_config(path: str | os.PathLike) -> RunConfig:
    """Read a TOML config; a bare preset name (``table1``, ...) is accepted in place of a path."""
    p = Path(path)
    if not p.exists():
        if str(path) in PRESETS:
            return config_from_dict({"preset": str(path)})
        raise ConfigError(f"config file not found: {path}")
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
