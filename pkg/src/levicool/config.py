"""Line-oriented configuration format.

Example::

    # two silica spheres, reference geometry
    [particle]
    r0 = 70 nm

    [geometry]
    theta = pi/4
    D_over_lambda = 2.65

    [cavity]
    kappa_over_w1x = 0.2

    [sweep]
    variable = detuning
    start = 0.5
    stop = 1.2
    steps = 71

Keys may also be written with a dotted section prefix (``sweep.steps = 71``).
Blank lines and ``#`` comments are ignored.  Several ``[sweep]`` blocks form
a Cartesian product grid.  An empty file gives the reference configuration.

Values are plain numbers in SI units or carry a unit suffix: lengths
``nm um mm cm m``, powers ``mW W``, frequencies ``Hz kHz MHz`` (converted to
angular rad/s).  Angles accept ``pi`` expressions such as ``3pi/2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, LevicoolError
from .model import DEFAULT_RATIOS, omega_1x
from .params import PhysicalParameters

MAX_GRID_POINTS = 1_000_000

_UNITS = {
    "length": {"nm": 1e-9, "um": 1e-6, "mm": 1e-3, "cm": 1e-2, "m": 1.0},
    "power": {"mW": 1e-3, "W": 1.0},
    "frequency": {"Hz": 2 * math.pi, "kHz": 2e3 * math.pi, "MHz": 2e6 * math.pi},
}

# key -> (attribute, dimension)
_SCHEMA = {
    "particle": {
        "r0": ("r0", "length"),
        "rho": ("rho", None),
        "eps_r": ("eps_r", None),
    },
    "tweezer": {
        "lambda": ("lambda_tw", "length"),
        "P1": ("P_tw1", "power"),
        "P2": ("P_tw2", "power"),
        "W_t": ("W_t", "length"),
        "A_x": ("A_x", None),
        "A_y": ("A_y", None),
    },
    "cavity": {
        "length": ("L_cav", "length"),
        "waist": ("w_cav", "length"),
        "kappa": ("kappa", "frequency"),
        "kappa_over_w1x": ("kappa_ratio", None),
        "detuning": ("Delta_tilde", "frequency"),
        "detuning_over_w1x": ("detuning_ratio", None),
    },
    "geometry": {
        "theta": ("theta", "angle"),
        "D": ("D", "length"),
        "D_over_lambda": ("D_ratio", None),
        "x10": ("x10", "length"),
        "x20": ("x20", "length"),
        "y10": ("y10", "length"),
        "y20": ("y20", "length"),
    },
    "bath": {
        "n_th": ("n_th", None),
        "gamma": ("gamma", "frequency"),
        "gamma_over_w1x": ("gamma_ratio", None),
    },
    "tolerances": {
        "tol_coupling": ("tol_coupling", None),
        "tol_degeneracy": ("tol_degeneracy", None),
    },
    "options": {
        "as_printed": ("as_printed", "bool"),
        "threads": ("threads", "int"),
    },
    "output": {
        "path": ("out", "path"),
    },
}

SWEEP_VARIABLES = {
    # name -> (dimension of start/stop, description)
    "theta": ("angle", "polarization angle (rad)"),
    "D": ("D", "separation in units of the tweezer wavelength"),
    "power2": ("power", "power of tweezer 2 (W)"),
    "detuning": (None, "effective detuning over the x1 frequency"),
    "kappa": (None, "cavity linewidth over the x1 frequency"),
}
_SWEEP_KEYS = ("variable", "start", "stop", "steps")

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PI_RE = re.compile(rf"^\s*({_NUMBER}|[+-])?\s*\*?\s*pi\s*(?:/\s*({_NUMBER}))?\s*$")
_VALUE_RE = re.compile(rf"^\s*({_NUMBER})\s*([A-Za-z]*)\s*$")

_PAIRS = (("kappa", "kappa_ratio"), ("Delta_tilde", "detuning_ratio"),
          ("gamma", "gamma_ratio"), ("D", "D_ratio"))


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SimulationConfig:
    """Parsed configuration.

    ``physical`` holds keyword arguments for :class:`PhysicalParameters`;
    rates given relative to the x1 frequency live in ``ratios``.
    """

    physical: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=lambda: dict(DEFAULT_RATIOS))
    D_over_lambda: Optional[float] = 2.65
    sweeps: tuple = ()
    tol_coupling: float = 1e-8
    tol_degeneracy: float = 5e-3
    as_printed: bool = False
    threads: int = 1
    out: Optional[str] = None

    def parameters(self, **changes) -> PhysicalParameters:
        """Resolve one parameter set.

        ``changes`` may contain physical fields or the sweep variables
        ``theta``, ``D`` (units of wavelength), ``power2``, ``detuning`` and
        ``kappa`` (ratios).
        """
        phys = dict(self.physical)
        ratios = dict(self.ratios)
        D_ratio = self.D_over_lambda
        for key, value in changes.items():
            if key == "power2":
                phys["P_tw2"] = value
            elif key == "D":
                D_ratio = value
                phys.pop("D", None)
            elif key in ("detuning", "kappa"):
                ratios[key] = value
                phys.pop("Delta_tilde" if key == "detuning" else "kappa", None)
            else:
                phys[key] = value
        if D_ratio is not None and "D" not in phys:
            phys["D"] = D_ratio * phys.get("lambda_tw", 1064e-9)
        try:
            base = PhysicalParameters(**{k: v for k, v in phys.items()
                                         if k not in ("kappa", "Delta_tilde", "gamma")})
            need = [k for k, attr in (("detuning", "Delta_tilde"), ("kappa", "kappa"),
                                      ("gamma", "gamma")) if attr not in phys]
            resolved = {}
            if need:
                w = omega_1x(base)
                attr = {"detuning": "Delta_tilde", "kappa": "kappa", "gamma": "gamma"}
                for k in need:
                    resolved[attr[k]] = ratios[k] * w
            for k in ("kappa", "Delta_tilde", "gamma"):
                if k in phys:
                    resolved[k] = phys[k]
            return base.replace(**resolved)
        except LevicoolError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def grid(self):
        """Cartesian product of all sweep blocks as a list of dicts."""
        if not self.sweeps:
            return [{}]
        axes = [s.values() for s in self.sweeps]
        names = [s.variable for s in self.sweeps]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = [m.ravel() for m in mesh]
        return [dict(zip(names, (float(f[i]) for f in flat))) for i in range(flat[0].size)]


def parse_angle(text: str) -> float:
    """Angle in radians from a number or a ``pi`` expression."""
    m = _PI_RE.match(text)
    if m:
        sign_only = {None: 1.0, "+": 1.0, "-": -1.0}
        coef = sign_only[m.group(1)] if m.group(1) in sign_only else float(m.group(1))
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0:
            raise ValueError("division by zero")
        return coef * math.pi / den
    m = _VALUE_RE.match(text)
    if m and m.group(2) in ("", "rad"):
        return float(m.group(1))
    if m and m.group(2) == "deg":
        return math.radians(float(m.group(1)))
    raise ValueError(f"malformed angle {text!r}")


def _convert(text: str, dim, key: str):
    text = text.strip()
    if dim == "bool":
        low = text.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"{key}: expected a boolean, got {text!r}")
    if dim == "path":
        if not text:
            raise ValueError(f"{key}: empty path")
        return text
    if dim == "angle":
        return parse_angle(text)
    if dim == "int":
        try:
            return int(text)
        except ValueError:
            raise ValueError(f"{key}: expected an integer, got {text!r}") from None
    m = _VALUE_RE.match(text)
    if not m:
        raise ValueError(f"{key}: malformed number {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if not math.isfinite(value):
        raise ValueError(f"{key}: value must be finite")
    if not unit:
        return value
    table = _UNITS.get(dim) if dim in _UNITS else None
    if table is None or unit not in table:
        expected = "no unit" if table is None else "one of " + ", ".join(table)
        raise ValueError(f"{key}: unit {unit!r} not valid here ({expected})")
    return value * table[unit]


def parse_config(text: str) -> SimulationConfig:
    """Parse configuration text; see the module docstring for the grammar."""
    section = None
    values = {}
    sweeps, current = [], None
    seen = {}

    def close_sweep(lineno):
        nonlocal current
        if current is None:
            return
        missing = [k for k in _SWEEP_KEYS if k not in current]
        if missing:
            raise ConfigError(f"sweep block missing {', '.join(missing)}", current["_line"])
        sweeps.append(_make_sweep(current))
        current = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", lineno)
            name = line[1:-1].strip()
            if name not in _SCHEMA and name != "sweep":
                raise ConfigError(f"unknown section [{name}]", lineno)
            close_sweep(lineno)
            section = name
            if name == "sweep":
                current = {"_line": lineno}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        sec = section
        if "." in key:
            sec, key = key.split(".", 1)
            if sec == "sweep" and (current is None or key in current):
                close_sweep(lineno)
                current = {"_line": lineno}
        if sec is None:
            raise ConfigError(f"key {key!r} outside of any section", lineno)
        if sec == "sweep":
            if key not in _SWEEP_KEYS:
                raise ConfigError(f"unknown sweep key {key!r}", lineno)
            if key in current:
                raise ConfigError(f"duplicate sweep key {key!r}", lineno)
            current[key] = (value, lineno)
            continue
        schema = _SCHEMA.get(sec)
        if schema is None:
            raise ConfigError(f"unknown section {sec!r}", lineno)
        if key not in schema:
            raise ConfigError(f"unknown key {sec}.{key}", lineno)
        attr, dim = schema[key]
        if attr in seen:
            raise ConfigError(f"duplicate key {sec}.{key} (first on line {seen[attr]})", lineno)
        try:
            values[attr] = _convert(value, dim, f"{sec}.{key}")
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
        seen[attr] = lineno
    close_sweep(None)

    for a, b in _PAIRS:
        if a in values and b in values:
            raise ConfigError(f"both {a} and its ratio form given", max(seen[a], seen[b]))

    ratios = dict(DEFAULT_RATIOS)
    for key, attr in (("kappa", "kappa_ratio"), ("detuning", "detuning_ratio"), ("gamma", "gamma_ratio")):
        if attr in values:
            ratios[key] = values.pop(attr)
    D_ratio = values.pop("D_ratio", None)
    if D_ratio is None and "D" not in values:
        D_ratio = 2.65
    kwargs = {}
    for name in ("tol_coupling", "tol_degeneracy", "as_printed", "threads", "out"):
        if name in values:
            kwargs[name] = values.pop(name)
    for name in ("tol_coupling", "tol_degeneracy"):
        if name in kwargs and not 0 < kwargs[name] < 1:
            raise ConfigError(f"{name} must lie in (0, 1)", seen[name])
    if "threads" in kwargs and kwargs["threads"] < 1:
        raise ConfigError("threads must be at least 1", seen["threads"])
    if "theta" in values:
        values["theta"] = values["theta"] % (2 * math.pi)

    total = 1
    for s in sweeps:
        total *= s.steps
    if total > MAX_GRID_POINTS:
        raise ConfigError(f"sweep grid has {total} points, above the cap of {MAX_GRID_POINTS}")
    names = [s.variable for s in sweeps]
    if len(set(names)) != len(names):
        raise ConfigError("the same variable is swept twice")

    cfg = SimulationConfig(physical=values, ratios=ratios, D_over_lambda=D_ratio,
                           sweeps=tuple(sweeps), **kwargs)
    # validate the base point now so errors surface at parse time
    try:
        cfg.parameters()
    except ConfigError:
        raise
    except LevicoolError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc
    return cfg


def _make_sweep(block) -> SweepSpec:
    var, line = block["variable"]
    if var not in SWEEP_VARIABLES:
        raise ConfigError(
            f"unknown sweep variable {var!r} (choose from {', '.join(SWEEP_VARIABLES)})", line)
    dim = SWEEP_VARIABLES[var][0]
    out = {}
    for key in ("start", "stop"):
        text, ln = block[key]
        try:
            if dim == "angle":
                out[key] = parse_angle(text)
            elif dim == "D":
                out[key] = _convert(text, None, f"sweep.{key}")
            else:
                out[key] = _convert(text, dim, f"sweep.{key}")
        except ValueError as exc:
            raise ConfigError(str(exc), ln) from None
    text, ln = block["steps"]
    try:
        steps = int(text)
    except ValueError:
        raise ConfigError(f"sweep.steps must be an integer, got {text!r}", ln) from None
    if steps < 1:
        raise ConfigError("sweep.steps must be at least 1", ln)
    if out["start"] > out["stop"]:
        raise ConfigError("sweep.start must not exceed sweep.stop", block["_line"])
    return SweepSpec(var, out["start"], out["stop"], steps)


def load_config(path) -> SimulationConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path} is not valid UTF-8") from exc
    return parse_config(text)
