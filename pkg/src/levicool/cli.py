"""Command-line interface.

``levicool {couplings|steady-state|cool|darkmodes|sweep} --config FILE``

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 sweep finished with some failed points.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from .config import SweepSpec, load_config, parse_angle
from .cooling import cool as run_cool
from .darkmodes import build_arrowhead, detect_dark_modes
from .errors import ConfigError, LevicoolError, SweepError
from .linearized import linearize
from .model import build_couplings
from .params import MODE_LABELS
from .sweep import emit_csv, evaluate_point, resolve_threads, run_sweep, sweep_metadata

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_PARTIAL = 0, 2, 3, 4

DEFAULT_SWEEPS = {
    "theta": SweepSpec("theta", 0.0, 2 * math.pi, 201),
    "D": SweepSpec("D", 1.0, 4.0, 501),
}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="configuration file")
    common.add_argument("--out", help="output file (CSV for tables)")
    common.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
    common.add_argument("--as-printed", action="store_true",
                        help="use the literal published drift matrix")

    ap = argparse.ArgumentParser(prog="levicool", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("couplings", parents=[common], help="coupling magnitudes vs theta or D")
    c.add_argument("--sweep", choices=("theta", "D"), default="theta")
    sub.add_parser("steady-state", parents=[common], help="semiclassical steady state")
    k = sub.add_parser("cool", parents=[common], help="final phonon numbers at one point")
    k.add_argument("--theta", help="polarization angle (rad, pi expressions allowed)")
    k.add_argument("--detuning", type=float, help="detuning over the x1 frequency")
    k.add_argument("--kappa", type=float, help="linewidth over the x1 frequency")
    d = sub.add_parser("darkmodes", parents=[common], help="dark-mode analysis")
    d.add_argument("--power2", type=float, help="power of tweezer 2 (W)")
    sub.add_parser("sweep", parents=[common], help="run the configured sweep")
    return ap


def _report(items, out=None):
    text = "\n".join(f"{k} = {v}" for k, v in items) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _fmt_complex(z):
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _cmd_couplings(cfg, args):
    spec = next((s for s in cfg.sweeps if s.variable == args.sweep), DEFAULT_SWEEPS[args.sweep])
    cfg = replace(cfg, sweeps=(spec,))
    return _table(cfg, args, "couplings")


def _table(cfg, args, mode):
    meta = sweep_metadata(cfg, mode)
    try:
        rows = run_sweep(cfg, mode=mode, threads=args.threads)
        code = EXIT_PARTIAL if any(not r.ok for r in rows) else EXIT_OK
    except SweepError as exc:
        rows, code = exc.rows, EXIT_NUMERICAL
        print(f"error: {exc}", file=sys.stderr)
    text = emit_csv(rows, args.out, mode=mode, metadata=meta)
    if not args.out:
        sys.stdout.write(text)
    return code


def _cmd_steady_state(cfg, args):
    cp = build_couplings(cfg.parameters())
    sysm = linearize(cp.g, as_printed=cfg.as_printed)
    ss = sysm.steady_state
    w = cp.model.omega_1x
    items = [("a_ss", _fmt_complex(ss.a_ss)), ("abs_a_ss", f"{abs(ss.a_ss):.12g}")]
    items += [(f"q_{m}", f"{q:.12g}") for m, q in zip(MODE_LABELS, ss.mu_ss)]
    items += [
        ("residual", f"{ss.relative_residual:.3e}"),
        ("iterations", ss.iterations),
        ("Delta_prime_over_w1x", f"{ss.Delta_prime / w:.12g}"),
        ("stable", sysm.stable),
        ("abscissa_over_w1x", f"{sysm.spectral_abscissa / w:.12g}"),
    ]
    _report(items, args.out)
    return EXIT_OK


def _cmd_cool(cfg, args):
    changes = {}
    if args.theta is not None:
        try:
            changes["theta"] = parse_angle(args.theta) % (2 * math.pi)
        except ValueError as exc:
            raise ConfigError(f"--theta: {exc}") from None
    if args.detuning is not None:
        changes["detuning"] = args.detuning
    if args.kappa is not None:
        changes["kappa"] = args.kappa
    p = cfg.parameters(**changes)
    res = run_cool(p, as_printed=cfg.as_printed)
    w = res.metadata["omega_1x"]
    if args.out:
        row = evaluate_point(cfg, 0, {"theta": p.theta, "detuning": p.Delta_tilde / w,
                                      "kappa": p.kappa / w}, "cool")
        emit_csv([row], args.out, "cool", metadata=sweep_metadata(cfg, "cool"))
    items = [("theta", f"{p.theta:.12g}"), ("detuning_over_w1x", f"{p.Delta_tilde / w:.12g}"),
             ("kappa_over_w1x", f"{p.kappa / w:.12g}")]
    items += [(f"n_{m}", f"{n:.6e}") for m, n in zip(MODE_LABELS, res.n_bar)]
    items += [("abscissa_over_w1x", f"{res.spectral_abscissa / w:.6e}"),
              ("lyapunov_residual", f"{res.V.relative_residual:.3e}")]
    sys.stdout.write("\n".join(f"{k} = {v}" for k, v in items) + "\n")
    return EXIT_OK


def _cmd_darkmodes(cfg, args):
    if args.power2 is None and any(s.variable == "power2" for s in cfg.sweeps):
        spec = next(s for s in cfg.sweeps if s.variable == "power2")
        return _table(replace(cfg, sweeps=(spec,)), args, "darkmodes")
    changes = {} if args.power2 is None else {"power2": args.power2}
    cp = build_couplings(cfg.parameters(**changes))
    sysm = linearize(cp.g, as_printed=cfg.as_printed)
    rep = detect_dark_modes(build_arrowhead(cp.model, cp.g, sysm.steady_state),
                            cfg.tol_coupling, cfg.tol_degeneracy)
    w = cp.model.omega_1x
    items = [("P_tw2", f"{cp.params.P_tw2:.12g}")]
    items += [(f"omega_{s + 1}_over_w1x", f"{f:.9f}") for s, f in enumerate(rep.normal_freqs / w)]
    items += [(f"abs_C_AB_{s + 1}_over_w1x", f"{c:.6e}") for s, c in enumerate(np.abs(rep.C_AB) / w)]
    items += [("dark_count", rep.dark_count)]
    items += [(f"dark_{s + 1}", mech) for s, mech in sorted(rep.mechanisms.items())]
    _report(items, args.out)
    return EXIT_OK


def _cmd_sweep(cfg, args):
    if not cfg.sweeps:
        raise ConfigError("configuration has no [sweep] block")
    return _table(cfg, args, "cool")


COMMANDS = {
    "couplings": _cmd_couplings,
    "steady-state": _cmd_steady_state,
    "cool": _cmd_cool,
    "darkmodes": _cmd_darkmodes,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.as_printed:
            cfg = replace(cfg, as_printed=True)
        if args.out is None and cfg.out and args.command in ("sweep", "couplings"):
            args.out = cfg.out
        try:
            args.threads = resolve_threads(args.threads if args.threads is not None else cfg.threads)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LevicoolError as exc:
        print(f"numerical error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
