"""Trace the local-model boundary of the noisy entangled-state family.

For each Schmidt angle theta the state rho(theta, eta) is certified local
when either the analytic sufficient condition holds or the state splits
into a known-local Werner component plus a separable residual.  The two
boundaries run in opposite directions, and the visibility covered at every
angle is set by their crossing.
"""

import numpy as np

from lhvcert import combined_threshold

print("analytic branch (closed-form split)")
star_a, curve_a = combined_threshold(branch="analytic", grid_size=128)
print(f"  combined threshold eta* = {star_a:.6f}")

print("SDP branch (optimal split)")
star_s, curve_s = combined_threshold(branch="sdp", grid_size=128)
print(f"  combined threshold eta* = {star_s:.6f}")

print()
print("theta      condition   analytic-split   sdp-split")
print("-" * 52)
for p in curve_s[::16] + [curve_s[-1]]:
    print(f"{p.theta:8.5f}   {p.eta_condition9:9.6f}   {p.eta_analytic_decomp:14.6f}"
          f"   {p.eta_sdp:9.6f}")

print()
print("the SDP split improves the crossing from "
      f"{star_a:.4f} to {star_s:.4f}; every visibility below the crossing is")
print("covered by an explicitly checked local-model certificate at every angle")
