"""Locate the visibility window where measurements stop being compatible.

Walks the standard direction sets (two and three orthogonal axes, then the
pinned 12-direction set) and prints their critical visibilities together
with certificate summaries on both sides of each threshold.
"""

import numpy as np

from lhvcert import (DIRECTIONS_12, X_DIR, Y_DIR, Z_DIR, eta_threshold,
                     jm_check, noisy_povm)

SETS = [
    ("two orthogonal axes", (X_DIR, Z_DIR)),
    ("three orthogonal axes", (X_DIR, Y_DIR, Z_DIR)),
    ("pinned 12-direction set", DIRECTIONS_12),
]

print("critical visibilities")
print("---------------------")
stars = {}
for name, dirs in SETS:
    star = eta_threshold(dirs)
    stars[name] = star
    print(f"{name:28s} eta* = {star:.6f}")

print()
print("certificates straddling the 12-direction threshold")
print("--------------------------------------------------")
star = stars["pinned 12-direction set"]
for eta in (star - 0.01, star + 0.01):
    verdict = jm_check([noisy_povm(d, eta) for d in DIRECTIONS_12])
    if verdict.jointly_measurable:
        print(f"eta = {eta:.4f}: compatible; parent POVM with "
              f"{len(verdict.joint_observable.effects)} outcomes passed re-check")
    else:
        cert = verdict.infeasibility_certificate
        print(f"eta = {eta:.4f}: incompatible; dual bound "
              f"{cert['robustness_upper_bound']:.6f} < 1, "
              f"certificate valid = {cert['valid']}")

print()
print("the window (0.5, {:.4f}) is where this set is incompatible while the".format(star))
print("noisy singlet statistics still admit a local model (see local_model_boundary.py)")
