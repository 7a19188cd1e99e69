"""Scan CHSH and exact local-polytope membership against visibility.

At the CHSH-optimal settings on the maximally entangled state the best
CHSH combination equals 2 sqrt(2) eta, so the verdict must flip exactly at
eta = 1/sqrt(2).  The LP membership test agrees, and on the local side it
returns explicit convex weights over deterministic strategies.
"""

import numpy as np

from lhvcert import chsh_behavior, chsh_value, is_local

print("eta       chsh      2sqrt2*eta   verdict")
print("-" * 44)
for eta in np.linspace(0.0, 1.0, 11):
    behavior = chsh_behavior(eta)
    s = chsh_value(behavior)
    verdict = is_local(behavior)
    print(f"{eta:5.2f}   {s:8.6f}   {2 * np.sqrt(2) * eta:8.6f}   "
          f"{'local' if verdict.local else 'NONLOCAL'}")

crit = 1 / np.sqrt(2)
below = is_local(chsh_behavior(crit - 1e-4))
above = is_local(chsh_behavior(crit + 1e-4))
print()
print(f"flip point: local at {crit - 1e-4:.6f} -> {below.local}, "
      f"nonlocal at {crit + 1e-4:.6f} -> {not above.local}")
w = below.membership.weights
print(f"local witness uses {int(np.count_nonzero(w > 1e-12))} deterministic "
      f"strategies, residual {below.membership.residual:.2e}")
print(f"nonlocal witness violates its Bell functional by {above.violation:.6f}")
