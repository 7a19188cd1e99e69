"""Command-line front end.

Subcommands
    jm-threshold   critical visibility of a direction set (preset or file)
    lhv-curve      CSV of the certificate boundaries over theta
    bell-check     locality verdict for a noisy-singlet behavior
    reproduce      run the full claims registry, emit a JSON report

Exit codes: 0 success, 1 claim failure (or a certified "no"), 2 usage
error, 3 internal solver error.

Directions files are plain text: one unit vector per line as three
whitespace-separated reals, '#' starts a comment.  Vectors are normalized
on load; a warning is printed if the norm deviates from 1 by more than
1e-6.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bell import BellError, chsh_behavior, chsh_value, is_local
from .jointmeas import (DIRECTIONS_12, JointMeasurabilityError, eta_threshold,
                        jm_check)
from .lhv import (DecompositionError, MU_LHV, combined_threshold, lhv_curve,
                  sdp_eta_max)
from .lp import LpError
from .quantum import QuantumError, X_DIR, Y_DIR, Z_DIR, noisy_povm
from .sdp import SdpError

PRESETS = {
    "pauli2": (X_DIR, Z_DIR),
    "pauli3": (X_DIR, Y_DIR, Z_DIR),
    "fib12": DIRECTIONS_12,
}

_USAGE_ERRORS = (QuantumError, BellError, ValueError)
_SOLVER_ERRORS = (SdpError, LpError, DecompositionError,
                  JointMeasurabilityError, np.linalg.LinAlgError)


class UsageError(Exception):
    """Bad input from the command line or an input file."""


def read_directions(path: str) -> list:
    """Parse a directions file; normalizes rows and reports bad lines."""
    vectors = []
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read directions file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) != 3:
            raise UsageError(
                f"{path}:{lineno}: expected three reals, got {len(parts)} fields")
        try:
            v = np.array([float(p) for p in parts])
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
        norm = float(np.linalg.norm(v))
        if norm < 1e-12:
            raise UsageError(f"{path}:{lineno}: zero vector")
        if abs(norm - 1.0) > 1e-6:
            print(f"warning: {path}:{lineno}: norm {norm:.9f} != 1, normalizing",
                  file=sys.stderr)
        vectors.append(v / norm)
    if not vectors:
        raise UsageError(f"{path}: no directions found")
    return vectors


def cmd_jm_threshold(args) -> int:
    if (args.preset is None) == (args.directions is None):
        raise UsageError("give exactly one of --preset or --directions")
    dirs = PRESETS[args.preset] if args.preset else read_directions(args.directions)
    star = eta_threshold(dirs)
    print(f"eta* = {star:.6f}")
    if args.witness:
        report = jm_check([noisy_povm(d, 1.0) for d in dirs])
        if report.jointly_measurable:
            print("witness: parent POVM for the projective set "
                  f"(robustness t* = {report.robustness:.6f})")
        else:
            cert = report.infeasibility_certificate
            print("witness: dual certificate against the projective set")
            print(f"  robustness upper bound = {cert['robustness_upper_bound']:.9f}")
            print(f"  dual feasibility min eigenvalue = "
                  f"{cert['dual_feasibility_min_eig']:.3e}")
            print(f"  valid = {cert['valid']}")
    return 0


def cmd_lhv_curve(args) -> int:
    curve = lhv_curve(mu=args.mu, grid_size=args.grid, include_sdp=True)
    lines = ["theta,eta_condition9,eta_analytic_decomp,eta_sdp"]
    for p in curve:
        lines.append(f"{p.theta:.12g},{p.eta_condition9:.12g},"
                     f"{p.eta_analytic_decomp:.12g},{p.eta_sdp:.12g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return 0


def cmd_bell_check(args) -> int:
    behavior = chsh_behavior(args.eta, theta=args.theta)
    s_value = chsh_value(behavior)
    report = is_local(behavior)
    print(f"verdict: {'local' if report.local else 'nonlocal'}")
    print(f"chsh = {s_value:.6f} (local bound 2)")
    if report.local:
        w = report.membership.weights
        print(f"witness: convex weights over {int(np.count_nonzero(w > 1e-12))} "
              f"deterministic strategies, reconstruction residual "
              f"{report.membership.residual:.3e}")
    else:
        print(f"witness: Bell functional with deterministic bound "
              f"{report.local_bound:.9f}, behavior value {report.value:.9f}, "
              f"violation {report.violation:.9f}")
    return 0 if report.local == (s_value <= 2.0 + 1e-9) else 1


def _claims_registry(grid: int):
    """Claim id, reference value, tolerance, and how to compute it."""
    sq2 = 1.0 / np.sqrt(2.0)
    return [
        ("eta_star_analytic", 0.503, 2e-3,
         lambda: combined_threshold(branch="analytic", grid_size=grid)[0]),
        ("eta_star_sdp", 0.515, 3e-3,
         lambda: combined_threshold(branch="sdp", grid_size=grid)[0]),
        ("jm_threshold_pauli2", sq2, 1e-4,
         lambda: eta_threshold(PRESETS["pauli2"])),
        ("jm_threshold_pauli3", 1.0 / np.sqrt(3.0), 1e-4,
         lambda: eta_threshold(PRESETS["pauli3"])),
        ("eta_star_directions12", 0.5134, 1e-3,
         lambda: eta_threshold(DIRECTIONS_12)),
        ("directions12_compatible_at_half", 1.0, 0.0,
         lambda: float(jm_check([noisy_povm(d, 0.5) for d in DIRECTIONS_12])
                       .jointly_measurable)),
        ("werner_split_at_pi4", 0.66, 1e-4,
         lambda: sdp_eta_max(np.pi / 4, MU_LHV)[0]),
        ("chsh_maximal", 2.0 * np.sqrt(2.0), 1e-6,
         lambda: chsh_value(chsh_behavior(1.0))),
        ("chsh_local_at_half", 1.0, 0.0,
         lambda: float(is_local(chsh_behavior(0.5)).local)),
        ("chsh_nonlocal_above_sq2", 1.0, 0.0,
         lambda: float(not is_local(chsh_behavior(sq2 + 1e-3)).local)),
    ]


def cmd_reproduce(args) -> int:
    claims = []
    all_pass = True
    for claim_id, reference, tol, compute in _claims_registry(args.grid):
        entry = {"id": claim_id, "reference_value": float(reference),
                 "tolerance": float(tol)}
        try:
            value = float(compute())
            entry["computed_value"] = value
            entry["pass"] = bool(abs(value - reference) <= tol)
        except _SOLVER_ERRORS + _USAGE_ERRORS as exc:  # surface, don't crash
            entry["computed_value"] = None
            entry["error"] = f"{type(exc).__name__}: {exc}"
            entry["pass"] = False
        all_pass = all_pass and entry["pass"]
        claims.append(entry)
        print(f"  {claim_id}: {'pass' if entry['pass'] else 'FAIL'}",
              file=sys.stderr)
    report = {"tool": "lhvcert", "version": __version__,
              "config": {"mu": MU_LHV, "grid": args.grid},
              "claims": claims, "all_pass": all_pass}
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lhvcert",
        description="certify joint measurability and local-model existence "
                    "for noisy qubit measurements")
    sub = parser.add_subparsers(dest="command", required=True)

    jm = sub.add_parser("jm-threshold",
                        help="critical visibility of a direction set")
    jm.add_argument("--preset", choices=sorted(PRESETS))
    jm.add_argument("--directions", metavar="FILE",
                    help="text file, one unit vector per line")
    jm.add_argument("--witness", action="store_true",
                    help="also print the (in)compatibility certificate")
    jm.set_defaults(func=cmd_jm_threshold)

    lc = sub.add_parser("lhv-curve",
                        help="CSV of certificate boundaries over theta")
    lc.add_argument("--mu", type=float, default=MU_LHV)
    lc.add_argument("--grid", type=int, default=256)
    lc.add_argument("--output", metavar="FILE", help="default: stdout")
    lc.set_defaults(func=cmd_lhv_curve)

    bc = sub.add_parser("bell-check",
                        help="locality of the noisy behavior at CHSH settings")
    bc.add_argument("--eta", type=float, required=True)
    bc.add_argument("--theta", type=float, default=np.pi / 4)
    bc.set_defaults(func=cmd_bell_check)

    rp = sub.add_parser("reproduce", help="run the claims registry")
    rp.add_argument("--grid", type=int, default=256)
    rp.add_argument("--output", metavar="FILE", help="default: stdout")
    rp.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
