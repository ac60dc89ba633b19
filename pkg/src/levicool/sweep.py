"""Grid sweeps over the configuration and deterministic CSV output."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import SWEEP_VARIABLES, SimulationConfig
from .cooling import phonon_numbers, solve_lyapunov
from .darkmodes import build_arrowhead, detect_dark_modes
from .errors import LevicoolError, SweepError
from .linearized import linearize
from .model import build_couplings
from .params import MODE_LABELS

N_LABELS = tuple(f"n_{m}" for m in MODE_LABELS)
G_LABELS = tuple(f"G_{m}" for m in MODE_LABELS)


@dataclass
class SweepRow:
    """One evaluated grid point.

    Coupling magnitudes and the spectral abscissa are in units of the x1
    frequency of the point.  Failed points keep whatever was computed before
    the failure and carry the error code in ``error``.
    """

    index: int
    values: dict
    n_bar: np.ndarray = field(default_factory=lambda: np.full(6, np.nan))
    abscissa: float = math.nan
    dark_count: float = math.nan
    G_abs: np.ndarray = field(default_factory=lambda: np.full(6, np.nan))
    error: str = ""

    @property
    def ok(self):
        return not self.error


def evaluate_point(cfg: SimulationConfig, index: int, values: dict, mode: str = "cool") -> SweepRow:
    """Evaluate one grid point; never raises for physics failures.

    ``mode`` is ``"cool"`` (full pipeline), ``"couplings"`` (coupling
    magnitudes only) or ``"darkmodes"`` (couplings, steady state and dark
    modes, no covariance).
    """
    row = SweepRow(index=index, values=dict(values))
    try:
        p = cfg.parameters(**values)
        cp = build_couplings(p)
        w = cp.model.omega_1x
        row.G_abs = np.abs(cp.g.G) / w
        if mode == "couplings":
            return row
        sysm = linearize(cp.g, as_printed=cfg.as_printed)
        row.abscissa = sysm.spectral_abscissa / w
        rep = detect_dark_modes(build_arrowhead(cp.model, cp.g, sysm.steady_state),
                                cfg.tol_coupling, cfg.tol_degeneracy)
        row.dark_count = rep.dark_count
        if mode == "darkmodes":
            return row
        if not sysm.stable:
            row.error = "UNSTABLE"
            return row
        cov = solve_lyapunov(sysm.A, sysm.Q, check=False)
        row.n_bar = phonon_numbers(cov)
    except LevicoolError as exc:
        row.error = exc.code
    except (ArithmeticError, ValueError, np.linalg.LinAlgError):
        row.error = "NUMERICAL"
    return row


def resolve_threads(requested: int | None = None) -> int:
    """Thread count; the ``LEVICOOL_THREADS`` environment variable wins."""
    env = os.environ.get("LEVICOOL_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"LEVICOOL_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return max(1, int(requested or 1))


def run_sweep(cfg: SimulationConfig, mode: str = "cool", threads: int | None = None,
              strict: bool = True) -> list[SweepRow]:
    """Evaluate every grid point of ``cfg``; rows come back in grid order.

    Raises
    ------
    SweepError
        When ``strict`` and more than half of the points failed.  The rows
        are attached to the exception.
    """
    grid = cfg.grid()
    n = resolve_threads(threads if threads is not None else cfg.threads)
    if n == 1 or len(grid) == 1:
        rows = [evaluate_point(cfg, i, v, mode) for i, v in enumerate(grid)]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(lambda iv: evaluate_point(cfg, iv[0], iv[1], mode), enumerate(grid)))
    failed = sum(1 for r in rows if not r.ok)
    if strict and failed * 2 > len(rows):
        raise SweepError(f"{failed} of {len(rows)} sweep points failed", rows)
    return rows


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def columns(rows: list[SweepRow], mode: str = "cool") -> list[str]:
    names = list(rows[0].values) if rows else []
    cols = ["index"] + names
    if mode == "couplings":
        return cols + list(G_LABELS) + ["error"]
    if mode == "darkmodes":
        return cols + ["abscissa", "dark_count"] + list(G_LABELS) + ["error"]
    return cols + list(N_LABELS) + ["abscissa", "dark_count"] + list(G_LABELS) + ["error"]


def row_cells(row: SweepRow, mode: str = "cool") -> list[str]:
    cells = [str(row.index)] + [_fmt(v) for v in row.values.values()]
    dark = "nan" if isinstance(row.dark_count, float) and math.isnan(row.dark_count) else str(int(row.dark_count))
    g = [_fmt(v) for v in row.G_abs]
    if mode == "couplings":
        return cells + g + [row.error]
    if mode == "darkmodes":
        return cells + [_fmt(row.abscissa), dark] + g + [row.error]
    return cells + [_fmt(v) for v in row.n_bar] + [_fmt(row.abscissa), dark] + g + [row.error]


def emit_csv(rows: list[SweepRow], path, mode: str = "cool", metadata: dict | None = None) -> str:
    """Write rows as CSV (header, 17 significant digits, ``\\n`` line ends).

    Metadata goes to ``<path>.meta.json`` so the data file itself is
    byte-identical across reruns.  ``path`` may be ``"-"`` for the returned
    text only.  Returns the CSV text.
    """
    if not rows:
        raise ValueError("no rows to write")
    lines = [",".join(columns(rows, mode))]
    lines += [",".join(row_cells(r, mode)) for r in rows]
    text = "\n".join(lines) + "\n"
    if path is not None and str(path) != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        meta = dict(metadata or {})
        meta.setdefault("rows", len(rows))
        meta.setdefault("failed", sum(1 for r in rows if not r.ok))
        meta.setdefault("columns", columns(rows, mode))
        with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    return text


def sweep_metadata(cfg: SimulationConfig, mode: str) -> dict:
    from . import __version__

    return {
        "levicool_version": __version__,
        "mode": mode,
        "sweeps": [
            {"variable": s.variable, "start": s.start, "stop": s.stop, "steps": s.steps,
             "meaning": SWEEP_VARIABLES[s.variable][1]}
            for s in cfg.sweeps
        ],
        "physical": {k: (v.tolist() if hasattr(v, "tolist") else v) for k, v in cfg.physical.items()},
        "ratios_to_omega_1x": cfg.ratios,
        "D_over_lambda": cfg.D_over_lambda,
        "as_printed": cfg.as_printed,
        "tol_coupling": cfg.tol_coupling,
        "tol_degeneracy": cfg.tol_degeneracy,
        "waists": "calibrated" if "W_t" not in cfg.physical else "given",
        "units": "couplings and abscissa in units of the effective x1 frequency",
    }
