"""Acceptance gate: the headline numbers and property suites, with pinned
tolerances.  Each test prints a single pass/fail line for the final report.
"""

import numpy as np
import pytest

from lhvcert.bell import build_behavior, chsh_behavior, chsh_value, is_local
from lhvcert.jointmeas import (DIRECTIONS_12, busch_pair_criterion,
                               eta_threshold, jm_check)
from lhvcert.lhv import (MU_LHV, analytic_decomposition, analytic_eta_bound,
                         combined_threshold, ppt_check, sdp_eta_max)
from lhvcert.quantum import (X_DIR, Y_DIR, Z_DIR, check_equivalence,
                             noisy_povm, rho_theta_eta, schmidt_state, werner)


def report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def random_direction(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def test_01_analytic_combined_threshold():
    star, _ = combined_threshold(branch="analytic", grid_size=256)
    report("analytic combined threshold", abs(star - 0.503) <= 2e-3,
           f"eta* = {star:.6f}, expected 0.503 +- 0.002")


def test_02_sdp_combined_threshold():
    star, _ = combined_threshold(branch="sdp", grid_size=256)
    report("SDP combined threshold", abs(star - 0.515) <= 3e-3,
           f"eta* = {star:.6f}, expected 0.515 +- 0.003")


def test_03_joint_measurability_benchmarks():
    pair = eta_threshold((X_DIR, Z_DIR))
    triple = eta_threshold((X_DIR, Y_DIR, Z_DIR))
    ok = (abs(pair - 1 / np.sqrt(2)) <= 1e-4
          and abs(triple - 1 / np.sqrt(3)) <= 1e-4)
    report("joint-measurability benchmarks", ok,
           f"pair = {pair:.6f} (1/sqrt2), triple = {triple:.6f} (1/sqrt3)")


def test_04_incompatibility_locality_gap():
    star = eta_threshold(DIRECTIONS_12)
    probe = 0.515
    verdict = jm_check([noisy_povm(d, probe) for d in DIRECTIONS_12])
    cert_ok = (not verdict.jointly_measurable
               and verdict.infeasibility_certificate["valid"])
    # the same visibility on the maximally entangled state still admits the
    # certified Werner split (boundary 0.66), so the statistics are local
    local_ok = probe < analytic_eta_bound(np.pi / 4)
    analytic_decomposition(np.pi / 4, probe)  # raises if the split fails
    ok = 0.5 < star < probe and cert_ok and local_ok
    report("incompatibility-locality gap", ok,
           f"12-direction eta* = {star:.6f} in (0.5, 0.515); at eta = 0.515 "
           f"incompatible (certified) with a valid local-model split")


def test_05_noise_shift_equivalence():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        worst = max(worst, check_equivalence(
            rng.uniform(0.0, np.pi / 4), rng.uniform(0.0, 1.0),
            random_direction(rng), random_direction(rng)))
    report("noise-shift equivalence", worst < 1e-12,
           f"worst discrepancy over 1000 draws = {worst:.3e} < 1e-12")


def test_06_diagonal_residual_theorem():
    rng = np.random.default_rng(103)
    worst = 0.0
    n = 0
    while n < 500:
        theta = rng.uniform(0.0, np.pi / 4)
        eta = rng.uniform(0.0, 1.0)
        alpha = eta * np.sin(2 * theta) / MU_LHV
        if alpha > 1.0:
            continue
        sigma = rho_theta_eta(theta, eta).matrix - alpha * werner(MU_LHV).matrix
        off = sigma - np.diag(np.diag(sigma))
        worst = max(worst, float(np.max(np.abs(off))))
        n += 1
    report("diagonal residual theorem", worst < 1e-12,
           f"worst off-diagonal mass over 500 draws = {worst:.3e} < 1e-12")


def test_07_werner_identifications():
    ident = max(float(np.max(np.abs(rho_theta_eta(np.pi / 4, eta).matrix
                                    - werner(eta).matrix)))
                for eta in np.linspace(0.0, 1.0, 11))
    lo, hi = 0.0, 1.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if ppt_check(werner(mid)):
            lo = mid
        else:
            hi = mid
    split = sdp_eta_max(np.pi / 4, MU_LHV)[0]
    ok = ident <= 1e-12 and abs(lo - 1 / 3) <= 1e-6 and abs(split - 0.66) <= 1e-4
    report("Werner identifications", ok,
           f"entrywise match {ident:.1e}, PPT boundary {lo:.8f} (1/3), "
           f"split at pi/4 = {split:.6f} (0.66)")


def test_08_bell_layer_soundness():
    rng = np.random.default_rng(107)
    chsh_dev = max(abs(chsh_value(chsh_behavior(eta)) - 2 * np.sqrt(2) * eta)
                   for eta in np.linspace(0.0, 1.0, 9))
    crit = 1 / np.sqrt(2)
    flip_ok = (is_local(chsh_behavior(crit - 1e-4)).local
               and not is_local(chsh_behavior(crit + 1e-4)).local)
    # sampled scenarios up to 6x6 settings with eta = 0.515 on Alice's side
    state = schmidt_state(np.pi / 4)
    all_local = True
    for nx, ny in ((2, 2), (3, 3), (4, 2), (5, 4), (6, 6)):
        alice = [noisy_povm(random_direction(rng), 0.515) for _ in range(nx)]
        bob = [noisy_povm(random_direction(rng), 1.0) for _ in range(ny)]
        all_local = all_local and is_local(build_behavior(state, alice, bob)).local
    ok = chsh_dev <= 1e-8 and flip_ok and all_local
    report("Bell layer soundness", ok,
           f"CHSH deviation {chsh_dev:.1e}, verdict flips at 1/sqrt2, "
           f"eta = 0.515 scenarios up to 6x6 all local")


def test_09_solver_self_certification():
    rng = np.random.default_rng(109)
    agree = 0
    trials = 500
    for _ in range(trials):
        d1, d2 = random_direction(rng), random_direction(rng)
        if abs(abs(d1 @ d2) - 1.0) < 1e-6:
            trials -= 1
            continue
        star = 2.0 / (np.linalg.norm(d1 + d2) + np.linalg.norm(d1 - d2))
        eta = min(1.0, star * rng.uniform(0.8, 1.2))
        if abs(eta - star) < 1e-6:
            trials -= 1
            continue
        verdict = jm_check([noisy_povm(d1, eta), noisy_povm(d2, eta)])
        # the SDP answer carries a certificate re-checked outside the solver
        if verdict.jointly_measurable:
            verdict.joint_observable.check(
                [noisy_povm(d1, eta), noisy_povm(d2, eta)])
        else:
            assert verdict.infeasibility_certificate["valid"]
        agree += (verdict.jointly_measurable
                  == busch_pair_criterion(d1, d2, eta))
    report("solver self-certification", agree == trials,
           f"jm_check vs pair oracle agreement {agree}/{trials}, all "
           f"certificates re-verified")
