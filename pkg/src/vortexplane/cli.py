"""Command line front end.

Subcommands wrap the library into reproducible experiments: admissibility
reports, trajectory runs with event summaries, phase portraits, shooting,
both fixed-point solvers, and the full acceptance suite.  Identical
invocations produce byte-identical CSV, JSON, and SVG outputs.

Exit codes: 0 success, 1 a report ran but failed, 2 usage or parameter
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import verify
from .admissibility import full_report
from .analysis import (RingSpec, e_region_entry, ring_entry,
                       scan_for_bracket, shoot_for_origin)
from .errors import (HypothesisViolationError, NumericalError,
                     ParameterDomainError)
from .fixedpoint import (banach_solve, beta_from_psi, picard_residual,
                         picard_solve, select_contraction_constants)
from .integrator import (IntegrationConfig, Termination, Trajectory,
                         integrate)
from .portrait import build_portrait_svg
from .vorticity import VorticityModel, make_model

SCHEMA_VERSION = 1

# config-file key -> (argparse dest, converter); flags override the file
_CONFIG_FIELDS = {
    "model": ("model", str),
    "c2": ("c2", float),
    "alpha": ("alpha", float),
    "a": ("a", str),
    "rmax": ("rmax", float),
    "ring": ("ring", str),
    "tol_rel": ("tol_rel", float),
    "tol_abs": ("tol_abs", float),
    "out": ("out", str),
    "seed": ("seed", int),
    "psiT": ("psi_t", float),
    "betaT": ("beta_t", float),
    "T": ("T", float),
}

_FLAG_FOR_DEST = {
    "model": "--model", "c2": "--c2", "alpha": "--alpha", "a": "--a",
    "rmax": "--rmax", "ring": "--ring", "tol_rel": "--tol-rel",
    "tol_abs": "--tol-abs", "out": "--out", "seed": "--seed",
    "psi_t": "--psiT", "beta_t": "--betaT", "T": "--T",
}


# ------------------------------------------------------------- plumbing

def _as_float(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParameterDomainError(f"{name} must be a number, got {text!r}")


def _parse_float_list(text: str, name: str) -> List[float]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise ParameterDomainError(f"{name} must list at least one value")
    return [_as_float(piece.strip(), name) for piece in items]


def _parse_pair(text: str, name: str) -> Tuple[float, float]:
    pieces = text.split(":")
    if len(pieces) != 2:
        raise ParameterDomainError(f"{name} must look like lo:hi, got {text!r}")
    return _as_float(pieces[0], name), _as_float(pieces[1], name)


def _load_config(path: str) -> Dict[str, str]:
    if not os.path.exists(path):
        raise ParameterDomainError(f"config file not found: {path}")
    data: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterDomainError(
                    f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            data[key.strip().replace("-", "_")] = value.strip()
    return data


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    """Fill namespace slots from the config file for flags absent in argv."""
    if not getattr(args, "config", None):
        return
    loaded = _load_config(args.config)
    for key, value in loaded.items():
        if key not in _CONFIG_FIELDS:
            raise ParameterDomainError(f"unknown config key {key!r}")
        dest, convert = _CONFIG_FIELDS[key]
        flag = _FLAG_FOR_DEST[dest]
        explicit = any(tok == flag or tok.startswith(flag + "=")
                       for tok in argv)
        if explicit:
            continue
        try:
            setattr(args, dest, convert(value))
        except ValueError:
            raise ParameterDomainError(
                f"config key {key!r}: cannot parse {value!r}")


def _ensure_out(args: argparse.Namespace) -> str:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_text(out_dir: str, name: str, text: str) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _write_json(out_dir: str, name: str, payload: dict) -> str:
    return _write_text(out_dir, name,
                       json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _resolve_model(args: argparse.Namespace) -> VorticityModel:
    return make_model(args.model, c2=args.c2, alpha=args.alpha)


def _model_tag(model: VorticityModel) -> str:
    return model.model_id


def _ring_from_args(args: argparse.Namespace,
                    model: VorticityModel) -> Optional[RingSpec]:
    if not getattr(args, "ring", None):
        return None
    eps, delta = _parse_pair(args.ring, "--ring")
    return RingSpec.for_model(model, epsilon=eps, delta=delta)


def _tolerances(args: argparse.Namespace,
                rel_default: float) -> Tuple[float, float]:
    rel = args.tol_rel if args.tol_rel is not None else rel_default
    abs_ = args.tol_abs if args.tol_abs is not None else 1e-12
    return rel, abs_


def _constant_trajectory(model: VorticityModel, a: float,
                         r_max: float) -> Trajectory:
    rs = np.array([0.0, r_max])
    level = model.F(a)
    return Trajectory(
        model=model, r=rs, psi=np.array([a, a]), beta=np.zeros(2),
        radius=np.array([a, a]), theta=np.zeros(2),
        E=np.array([level, level]), dissipation=np.zeros(1),
        termination=Termination.REACHED_RMAX, events=[],
        min_radius=a, min_radius_r=0.0)


# ------------------------------------------------------------- commands

def cmd_check(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    a_values = tuple(_parse_float_list(args.a, "--a"))
    report = full_report(model, a_values=a_values, seed=args.seed)
    out = _ensure_out(args)
    path = _write_json(out, f"check_{_model_tag(model)}.json",
                       report.to_json_dict())
    for check in report.checks:
        if check.passed is None:
            verdict = "skip"
        else:
            verdict = "pass" if check.passed else "FAIL"
        print(f"{verdict:4s}  {check.name}")
    print(f"overall: {'pass' if report.overall else 'FAIL'}")
    print(f"wrote {path}")
    return 0 if report.overall else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    a = _as_float(args.a, "--a")
    if a < 1.0:
        raise ParameterDomainError(f"start value a must be >= 1, got {a!r}")
    ring = _ring_from_args(args, model)
    rel, abs_ = _tolerances(args, 1e-10)
    if model.f(a) == 0.0:
        traj = _constant_trajectory(model, a, args.rmax)
    else:
        config = IntegrationConfig(r_max=args.rmax, rel_tol=rel, abs_tol=abs_)
        traj = integrate(model, a, config)

    entry = None
    if float(traj.E[0]) > 0.0:
        entry = e_region_entry(traj)
    capture = None
    capture_note = None
    if ring is not None:
        try:
            capture = ring_entry(traj, ring)
        except HypothesisViolationError as exc:
            capture_note = str(exc)

    out = _ensure_out(args)
    tag = f"{_model_tag(model)}_a{a:g}"
    csv_path = os.path.join(out, f"trajectory_{tag}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        traj.to_csv(fh)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model.model_id,
        "a": a,
        "r_max": args.rmax,
        "rel_tol": rel,
        "abs_tol": abs_,
        "samples": int(len(traj.r)),
        "termination": traj.termination.value,
        "min_radius": float(traj.min_radius),
        "min_radius_r": float(traj.min_radius_r),
        "energy_entry": None if entry is None else {
            "r_cross": float(entry.r_cross), "psi": float(entry.psi),
            "beta": float(entry.beta), "side": entry.side,
            "transversal": bool(entry.transversal),
            "energy_after": float(entry.energy_after)},
        "ring": None if ring is None else {
            "epsilon": ring.epsilon, "delta": ring.delta,
            "c": ring.c, "nu": ring.nu},
        "ring_entry": None if capture is None else {
            "r_entry": float(capture.r_entry),
            "min_radius_after": float(capture.min_radius_after),
            "min_radius_r": float(capture.min_radius_r)},
        "ring_note": capture_note,
        "stepper_events": [
            {"name": ev.name, "r": float(ev.r), "psi": float(ev.psi),
             "beta": float(ev.beta)} for ev in traj.events],
    }
    json_path = _write_json(out, f"events_{tag}.json", payload)
    print(f"model={model.model_id} a={a:g} r_max={args.rmax:g} "
          f"samples={len(traj.r)}")
    print(f"termination={traj.termination.value}")
    print("r_entry=" + ("none" if capture is None
                        else f"{capture.r_entry:.6f}"))
    print("r_cross=" + ("none" if entry is None
                        else f"{entry.r_cross:.6f}"))
    print(f"min_radius={traj.min_radius:.6g} at r={traj.min_radius_r:.6g}")
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    return 0


def cmd_portrait(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    a_values = _parse_float_list(args.a, "--a")
    ring = _ring_from_args(args, model)
    rel, abs_ = _tolerances(args, 1e-10)
    trajectories = []
    for a in a_values:
        if a < 1.0:
            raise ParameterDomainError(
                f"start value a must be >= 1, got {a!r}")
        if model.f(a) == 0.0:
            trajectories.append(_constant_trajectory(model, a, args.rmax))
        else:
            config = IntegrationConfig(r_max=args.rmax, rel_tol=rel,
                                       abs_tol=abs_)
            trajectories.append(integrate(model, a, config))
    svg = build_portrait_svg(model, trajectories, ring=ring,
                             clip_radius=args.clip)
    out = _ensure_out(args)
    path = _write_text(out, f"portrait_{_model_tag(model)}.svg", svg)
    print(f"wrote {path} ({len(svg.encode('utf-8'))} bytes, "
          f"{len(trajectories)} orbits)")
    return 0


def cmd_shoot(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    a_lo, a_hi = _parse_pair(args.a, "--a")
    if a_lo < 1.0 or a_hi <= a_lo:
        raise ParameterDomainError(
            f"--a must give 1 <= lo < hi, got {args.a!r}")
    rel, _ = _tolerances(args, 1e-9)
    lo, hi, history = scan_for_bracket(model, a_start=a_lo, a_stop=a_hi,
                                       step=1.0, rel_tol=rel)
    result = shoot_for_origin(model, lo, hi, tol=1e-6, rel_tol=rel)
    out = _ensure_out(args)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model.model_id,
        "scanned": [{"a": rec.a, "outcome": rec.outcome,
                     "min_radius": rec.min_radius} for rec in history],
        "bracket": [lo, hi],
        "a_star": result.a_star,
        "origin_hit": bool(result.origin_hit),
        "min_radius_achieved": result.min_radius_achieved,
        "bisection_evaluations": len(result.history),
    }
    path = _write_json(out, f"shoot_{_model_tag(model)}.json", payload)
    print(f"bracket=({lo:g}, {hi:g}) a_star={result.a_star!r}")
    print(f"min_radius_achieved={result.min_radius_achieved!r}")
    print(f"wrote {path}")
    return 0


def cmd_picard(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    a = _as_float(args.a, "--a")
    if a < 1.0:
        raise ParameterDomainError(f"start value a must be >= 1, got {a!r}")
    grid = picard_solve(model, a, r_end=1.0, n=1 << 17, tol=1e-13)
    residual = picard_residual(model, grid)
    slope = beta_from_psi(model, grid)
    out = _ensure_out(args)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model.model_id,
        "a": a,
        "r_end": 1.0,
        "n": 1 << 17,
        "psi_end": float(grid.values[-1]),
        "beta_end": float(slope.values[-1]),
        "residual": residual,
    }
    path = _write_json(out, f"picard_{_model_tag(model)}.json", payload)
    print(f"psi({grid.r[-1]:g}) = {float(grid.values[-1])!r}")
    print(f"beta({grid.r[-1]:g}) = {float(slope.values[-1])!r}")
    print(f"residual = {residual!r}")
    print(f"wrote {path}")
    return 0


def cmd_banach(args: argparse.Namespace) -> int:
    model = _resolve_model(args)
    constants = select_contraction_constants(
        T=args.T, L=min(model.ledger.L, 2.5))
    psi, beta, factor = banach_solve(model, args.T, args.psi_t, args.beta_t,
                                     constants=constants)
    dev_from_anchor = float(np.max(np.abs(psi.values - args.psi_t)))
    out = _ensure_out(args)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model.model_id,
        "T": args.T,
        "psi_T": args.psi_t,
        "beta_T": args.beta_t,
        "interval": [float(psi.r[0]), float(psi.r[-1])],
        "lam_star": constants.lam_star,
        "lam_mid": constants.lam_mid,
        "k": constants.k,
        "zeta": constants.zeta,
        "observed_factor": factor,
        "psi_low": float(psi.values[0]),
        "beta_low": float(beta.values[0]),
        "max_dev_from_anchor_value": dev_from_anchor,
    }
    path = _write_json(out, f"banach_{_model_tag(model)}.json", payload)
    print(f"interval=[{psi.r[0]:.6f}, {psi.r[-1]:g}] "
          f"zeta={constants.zeta:.6f} factor={factor:.6f}")
    if args.beta_t == 0.0 and model.f(args.psi_t) == 0.0:
        print(f"constant solution, max deviation {dev_from_anchor!r}")
    print(f"psi({psi.r[0]:.6f}) = {float(psi.values[0])!r}")
    print(f"wrote {path}")
    return 0


def cmd_verify_paper(args: argparse.Namespace) -> int:
    results = verify.run_all()
    out = _ensure_out(args)
    path = _write_text(out, "verify_report.json",
                       verify.render_report(results))
    for line in verify.matrix_lines(results):
        print(line)
    print(f"wrote {path}")
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="constantin",
                        choices=("constantin", "example", "powerlaw"),
                        help="vorticity model id")
    common.add_argument("--c2", type=float, default=None,
                        help="modulation amplitude for the example model")
    common.add_argument("--alpha", type=float, default=None,
                        help="exponent for the power-law model")
    common.add_argument("--tol-rel", type=float, default=None,
                        dest="tol_rel", help="relative step tolerance")
    common.add_argument("--tol-abs", type=float, default=None,
                        dest="tol_abs", help="absolute step tolerance")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--config", default=None,
                        help="key=value config file; flags take precedence")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for sampling sequences")

    parser = argparse.ArgumentParser(
        prog="vortexplane",
        description="phase-plane toolkit for radial vorticity profiles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="run the admissibility report")
    p.add_argument("--a", default="1,10,100",
                   help="comma-separated start values")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", parents=[common],
                       help="integrate one orbit and summarize events")
    p.add_argument("--a", default="10", help="start value psi(0)")
    p.add_argument("--rmax", type=float, default=100.0)
    p.add_argument("--ring", default=None,
                   help="capture ring widths as eps:delta")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("portrait", parents=[common],
                       help="render an SVG phase portrait")
    p.add_argument("--a", default="5,10",
                   help="comma-separated start values")
    p.add_argument("--rmax", type=float, default=100.0)
    p.add_argument("--ring", default=None,
                   help="capture ring widths as eps:delta")
    p.add_argument("--clip", type=float, default=None,
                   help="clip the frame to |psi|, |beta| <= clip")
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("shoot", parents=[common],
                       help="bisect start values toward the origin orbit")
    p.add_argument("--a", default="2:20", help="scan range as lo:hi")
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("picard", parents=[common],
                       help="short-range fixed point on [0, 1]")
    p.add_argument("--a", default="2", help="start value psi(0)")
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("banach", parents=[common],
                       help="backward fixed point on [sqrt(T^2-1), T]")
    p.add_argument("--psiT", type=float, default=1.0, dest="psi_t")
    p.add_argument("--betaT", type=float, default=0.0, dest="beta_t")
    p.add_argument("--T", type=float, default=6.0, dest="T")
    p.set_defaults(func=cmd_banach)

    p = sub.add_parser("verify-paper", parents=[common],
                       help="run the full acceptance suite")
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except ParameterDomainError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
