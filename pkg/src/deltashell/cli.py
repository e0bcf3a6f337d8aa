"""Command-line front end.

    deltashell [global flags] spectrum|scan|splitting|threshold|calibrate [flags]

JSON goes to stdout or ``--out``; CSV curves go to ``--csv`` (splitting)
or to stdout/``--out`` (scan).  Every result carries a run manifest, and
a CSV written to a file gets a ``<file>.manifest.json`` sidecar.  Exit
codes: 0 ok, 2 bad input, 3 domain precondition, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, kernels
from .boundary import threshold_det, threshold_kernel_dim
from .calibrate import (
    PRESETS,
    CalibrationInput,
    classify_alignment,
    confinement_scale,
    coupling_from_interface,
    get_preset,
    reference_energy,
)
from .errors import ConfigError, DeltaShellError, DomainError, NumericalError, SWaveThresholdForbidden
from .model import ShellConfig, make_config
from .secular import matching_matrix, secular_F
from .solver import ScanPlan, enumerate_spectrum, splitting_curve

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    """Bad command-line input (exit 2)."""


# -- formatting --------------------------------------------------------------------


def _num(x: float | None) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cell(x: float | None) -> str:
    # repr gives the shortest string that round-trips (at most 17 digits)
    v = _num(x)
    return "" if v is None else repr(v)


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path: str | None, text: str, stream) -> None:
    if path is None:
        stream.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- inputs --------------------------------------------------------------------------


def load_config(spec: str | None, stdin=None) -> tuple[ShellConfig, Any]:
    """Config from a file path, ``-`` (stdin) or an inline JSON object."""
    if spec is None:
        raise UsageError("--config is required")
    if spec == "-":
        text, source = (stdin or sys.stdin).read(), "-"
    elif spec.lstrip().startswith("{"):
        text, source = spec, None
    else:
        try:
            text, source = Path(spec).read_text(encoding="utf-8"), spec
        except OSError as exc:
            raise UsageError(f"cannot read config {spec!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or "radii" not in data or "alphas" not in data:
        raise UsageError('config must be an object with "radii" and "alphas"')
    try:
        cfg = make_config([float(r) for r in data["radii"]], [float(a) for a in data["alphas"]])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise UsageError(f"radii and alphas must be arrays of numbers ({exc})") from None
    return cfg, (source if source is not None else cfg.to_dict())


def _plan(args) -> ScanPlan:
    kw = {}
    for flag, key in (("kappa_min", "kappa_min"), ("kappa_max", "kappa_max"), ("grid", "grid_points"),
                      ("ell_max", "ell_max"), ("tol", "tol")):
        v = getattr(args, flag, None)
        if v is not None:
            kw[key] = v
    return ScanPlan(**kw)


def _plan_dict(plan: ScanPlan) -> dict:
    return {
        "kappa_min": plan.kappa_min,
        "kappa_max": plan.kappa_max,
        "grid_points": plan.grid_points,
        "ell_max": plan.ell_max,
        "tol": plan.tol,
    }


def manifest(args, command: str, inputs: dict, plan: dict | None, outputs: list[str]) -> dict:
    m = {
        "tool": "deltashell",
        "version": __version__,
        "command": command,
        "backend": kernels.BACKEND,
        "input": inputs,
        "plan": plan,
        "threads": args.threads,
        "outputs": outputs,
    }
    if args.timing:
        m["wall_time_s"] = round(time.perf_counter() - args._t0, 6)
    return m


def _outputs(*paths) -> list[str]:
    return [p for p in paths if p is not None]


# -- commands ----------------------------------------------------------------------


def cmd_spectrum(args, out, err) -> int:
    if args.preset:
        p = get_preset(args.preset)
        cfg, src = p.config(), {"preset": args.preset}
        e0 = reference_energy(p.outer.mass_ratio, p.outer.l0)
    else:
        cfg, conf = load_config(args.config, args._stdin)
        src, e0 = {"config": conf}, None
    plan = _plan(args)
    spec = enumerate_spectrum(cfg, plan, verify=not args.no_verify, threads=args.threads)
    states = []
    for s in spec.states:
        row = {
            "ell": s.ell,
            "kappa": s.kappa.kappa,
            "energy": s.energy,
            "degeneracy": s.degeneracy,
            "residual": s.residual,
            "oracle_verified": s.oracle_verified,
        }
        if e0 is not None:
            row["energy_ev"] = s.energy * e0
        states.append(row)
    payload = {
        "states": states,
        "per_channel_counts": [[ell, c] for ell, c in spec.per_channel_counts],
        "ell_max_reached": spec.ell_max_reached,
        "double_root_candidates": [
            {"ell": ell, "kappa": c.kappa, "value": c.value,
             "residual_pair": None if c.residual_pair is None else [_num(v) for v in c.residual_pair]}
            for ell, c in spec.candidates
        ],
        "notes": list(spec.notes),
        "config": cfg.to_dict(),
    }
    if e0 is not None:
        payload["e0_ev"] = e0
    payload["manifest"] = manifest(args, "spectrum", src, _plan_dict(plan), _outputs(args.out))
    _write(args.out, dumps(payload), out)
    return EXIT_OK


def cmd_scan(args, out, err) -> int:
    cfg, conf = load_config(args.config, args._stdin)
    if args.ell < 0:
        raise UsageError("--ell must be nonnegative")
    plan = _plan(args)
    kmin, kmax = plan.kappa_min, plan.resolved_kappa_max(cfg)
    grid = np.geomspace(kmin, kmax, plan.grid_points)
    det = kernels.channel_det(cfg.radii, cfg.alphas, args.ell, grid)
    two_s = cfg.n_shells == 2 and args.ell == 0
    if two_s:
        r1, d = cfg.radii[0], cfg.radii[1] - cfg.radii[0]
        S = kernels.s_wave(r1, d, cfg.alphas[0], cfg.alphas[1], grid)
        header = ["kappa", "S", "F_d", "neg_det_M_over_kappa", "det"]
        rows = []
        for k, s, dv in zip(grid, S, det):
            fd = float(secular_F(k, cfg))
            try:
                mdet = -float(np.linalg.det(matching_matrix(k, cfg))) / k
            except OverflowError:
                mdet = None
            rows.append([_cell(k), _cell(s), _cell(fd), _cell(mdet), _cell(dv)])
    else:
        header = ["kappa", "det"]
        rows = [[_cell(k), _cell(dv)] for k, dv in zip(grid, det)]
    _write(args.out, _csv_text(header, rows), out)
    man = manifest(args, "scan", {"config": conf, "ell": args.ell}, _plan_dict(plan), _outputs(args.out))
    if args.out is not None:
        _write(args.out + ".manifest.json", dumps(man), out)
    else:
        err.write(dumps(man))
    return EXIT_OK


def _d_grid(args) -> list[float]:
    if args.d_points < 2 or not args.d_max > args.d_min > 0:
        raise UsageError("need 0 < --d-min < --d-max and --d-points >= 2")
    return [float(d) for d in np.linspace(args.d_min, args.d_max, args.d_points)]


def cmd_splitting(args, out, err) -> int:
    plan = _plan(args)
    ds = _d_grid(args)
    rep = splitting_curve(args.r1, args.alpha1, ds, plan)
    rows = [
        {
            "d": r.d,
            "kappa_plus": r.kappa_plus,
            "kappa_minus": r.kappa_minus,
            "gap": r.gap,
            "predicted_gap": r.predicted_gap,
            "ratio": r.ratio,
        }
        for r in rep.rows
    ]
    payload = {
        "kappa0": rep.kappa0,
        "alpha2_tuned": rep.alpha2_tuned,
        "c_const": rep.c_const,
        "fitted_exponent": rep.fitted_exponent,
        "fitted_intercept": rep.fitted_intercept,
        "d_cutoff": rep.d_cutoff,
        "rows": rows,
        "manifest": manifest(
            args, "splitting",
            {"r1": args.r1, "alpha1": args.alpha1, "d_grid": ds},
            _plan_dict(plan), _outputs(args.out, args.csv),
        ),
    }
    _write(args.out, dumps(payload), out)
    if args.csv:
        text = _csv_text(
            ["d", "gap", "predicted_gap", "ratio"],
            [[_cell(r.d), _cell(r.gap), _cell(r.predicted_gap), _cell(r.ratio)] for r in rep.rows],
        )
        _write(args.csv, text, out)
        _write(args.csv + ".manifest.json", dumps(payload["manifest"]), out)
    return EXIT_OK


def cmd_threshold(args, out, err) -> int:
    cfg, conf = load_config(args.config, args._stdin)
    if args.ell < 0:
        raise UsageError("--ell must be nonnegative")
    inputs = {"config": conf, "ell": args.ell}
    if args.ell == 0:
        payload = {
            "reason": "s-wave has no zero-energy eigenstate",
            "error": SWaveThresholdForbidden.code,
            "manifest": manifest(args, "threshold", inputs, None, _outputs(args.out)),
        }
        _write(args.out, dumps(payload), out)
        return EXIT_DOMAIN
    det = threshold_det(cfg, args.ell)
    kdim = threshold_kernel_dim(cfg, args.ell, args.sv_tol)
    payload = {
        "ell": args.ell,
        "det": det,
        "kernel_dim": kdim,
        "multiplicity": (2 * args.ell + 1) * kdim,
        "manifest": manifest(args, "threshold", inputs, None, _outputs(args.out)),
    }
    _write(args.out, dumps(payload), out)
    return EXIT_OK


def cmd_calibrate(args, out, err) -> int:
    flags = (args.delta_v_ev, args.width_nm, args.mass_ratio)
    if args.preset:
        if any(v is not None for v in flags):
            raise UsageError("use either --preset or the interface flags, not both")
        p = get_preset(args.preset)
        inp, alpha1, radii_nm = p.outer, p.alpha1, list(p.radii_nm)
        src: dict = {"preset": args.preset}
    else:
        if any(v is None for v in flags):
            raise UsageError("--delta-v-ev, --width-nm and --mass-ratio are all required without --preset")
        try:
            inp = CalibrationInput(args.delta_v_ev, args.width_nm, args.mass_ratio, args.l0_nm)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        alpha1, radii_nm = args.alpha1, args.radii_nm
        src = {
            "delta_v_ev": inp.delta_v, "width_nm": inp.width, "mass_ratio": inp.mass_ratio,
            "l0_nm": inp.l0, "alpha1": alpha1, "radii_nm": radii_nm,
        }
    e0 = reference_energy(inp.mass_ratio, inp.l0)
    a_outer = coupling_from_interface(inp)
    alphas = [a_outer] if alpha1 is None else [alpha1, a_outer]
    label = classify_alignment(*alphas).value if len(alphas) == 2 else "Other"
    dim_cfg = None
    ground = None
    if radii_nm is not None:
        if len(radii_nm) != len(alphas):
            raise UsageError(f"--radii-nm needs {len(alphas)} values")
        cfg = make_config([r / inp.l0 for r in radii_nm], alphas)
        dim_cfg = cfg.to_dict()
        spec = enumerate_spectrum(cfg, _plan(args), threads=args.threads)
        if spec.states:
            g = spec.states[0]
            ground = {
                "ell": g.ell,
                "kappa": g.kappa.kappa,
                "energy_ev": g.energy * e0,
                "confinement_scale_ev": confinement_scale(g.kappa.kappa, e0),
            }
    payload = {
        "E0_eV": e0,
        "alphas": alphas,
        "classification": label,
        "dimensionless_config": dim_cfg,
        "ground_state": ground,
        "note": "order-of-magnitude calibration; couplings are effective, not fitted",
        "manifest": manifest(args, "calibrate", src, None, _outputs(args.out)),
    }
    _write(args.out, dumps(payload), out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--config", metavar="PATH|-", help="JSON config file, '-' for stdin, or inline JSON", **d)
    p.add_argument("--out", metavar="PATH", help="write the result here instead of stdout", **d)
    p.add_argument("--ell-max", type=int, help="highest channel scanned (default 32)", **d)
    p.add_argument("--kappa-min", type=float, help="smallest kappa on the grid (default 1e-6)", **d)
    p.add_argument("--kappa-max", type=float, help="largest kappa (default from the coupling bound)", **d)
    p.add_argument("--grid", type=int, help="grid points (default 2000)", **d)
    p.add_argument("--tol", type=float, help="root tolerance on kappa (default 1e-12)", **d)
    p.add_argument("--threads", type=int, help="worker threads for channel sweeps", **d)
    p.add_argument("--timing", action="store_true", help="record wall time in the manifest", **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltashell", description="Bound states of concentric delta-shell interactions.")
    parser.add_argument("--version", action="version", version=f"deltashell {__version__}")
    _add_globals(parser, suppress=False)
    parser.set_defaults(threads=1, timing=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)

    p = sub.add_parser("spectrum", parents=[common], help="all bound states, channel by channel")
    p.add_argument("--preset", choices=sorted(PRESETS), help="use a calibrated quantum-dot preset")
    p.add_argument("--no-verify", action="store_true", help="skip the transfer-matrix cross-check")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scan", parents=[common], help="tabulate the channel function as CSV")
    p.add_argument("--ell", type=int, default=0)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("splitting", parents=[common], help="tunneling gap of the tuned two-shell pair")
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--d-min", type=float, default=6.0)
    p.add_argument("--d-max", type=float, default=12.0)
    p.add_argument("--d-points", type=int, default=7)
    p.add_argument("--csv", metavar="PATH", help="also write d, gap, predicted_gap, ratio as CSV")
    p.set_defaults(func=cmd_splitting)

    p = sub.add_parser("threshold", parents=[common], help="zero-energy test for channel ell >= 1")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--sv-tol", type=float, default=1e-10, help="singular values below this count as zero")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("calibrate", parents=[common], help="physical interface data to couplings")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--delta-v-ev", type=float, help="band offset in eV (signed)")
    p.add_argument("--width-nm", type=float, help="interface width in nm")
    p.add_argument("--mass-ratio", type=float, help="effective mass m*/m0")
    p.add_argument("--l0-nm", type=float, default=1.0, help="reference length in nm (default 1)")
    p.add_argument("--alpha1", type=float, help="inner coupling, to classify the alignment")
    p.add_argument("--radii-nm", type=float, nargs="+", help="shell radii in nm, to solve the dimensionless problem")
    p.set_defaults(func=cmd_calibrate)
    return parser


def _error(args, exc: Exception, code: str | None = None) -> dict:
    if isinstance(exc, DeltaShellError):
        return exc.to_dict()
    return {"error": code or type(exc).__name__, "message": str(exc)}


def main(argv: list[str] | None = None, stdout=None, stderr=None, stdin=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INPUT
    args._t0 = time.perf_counter()
    args._stdin = stdin
    if args.threads is None or args.threads < 1:
        args.threads = 1
    try:
        return args.func(args, out, err)
    except (UsageError, ConfigError) as exc:
        out.write(dumps(_error(args, exc, "UsageError")))
        return EXIT_INPUT
    except DomainError as exc:
        out.write(dumps(_error(args, exc)))
        return EXIT_DOMAIN
    except NumericalError as exc:
        payload = _error(args, exc)
        if getattr(exc, "d_cutoff", None) is not None:
            payload["d_cutoff"] = exc.d_cutoff
        out.write(dumps(payload))
        return EXIT_NUMERIC
    except ValueError as exc:
        out.write(dumps(_error(args, exc, "UsageError")))
        return EXIT_INPUT
    except OverflowError as exc:
        out.write(dumps(_error(args, exc, "Overflow")))
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
