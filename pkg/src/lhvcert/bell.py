"""Bell-scenario layer: behaviors, the local polytope, and CHSH.

A behavior is the table p(ab|xy) obtained by measuring a shared two-qubit
state with one dichotomic POVM per setting on each side.  Locality is
decided exactly: the behavior is a convex combination of deterministic
strategies (a = f(x), b = g(y)) iff an LP finds hull weights, and a failed
membership yields a Bell functional separating the behavior from the local
polytope, re-checked directly against every deterministic vertex.

CHSH handling is kept separate and analytic (correlators and the local
bound 2), so the two routes cross-validate each other on 2x2 scenarios.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lp import HullMembership, solve_lp
from .quantum import (DensityMatrix, Povm, QuantumError, born_probability,
                      noisy_povm, schmidt_state)

# 2^(nx+ny) deterministic strategies; keep the vertex list small enough for
# the dense simplex (6 settings per side -> 4096 vertices).
MAX_SETTINGS = 6

OUTCOMES = (+1, -1)

CHSH_LOCAL_BOUND = 2.0
CHSH_QUANTUM_BOUND = 2.0 * np.sqrt(2.0)


class BellError(ValueError):
    """Raised on malformed scenarios or failed certificate checks."""


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table p[x, y, a, b], outcomes ordered (+1, -1)."""

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 4 or p.shape[2:] != (2, 2):
            raise BellError(f"behavior table must have shape (nx, ny, 2, 2), got {p.shape}")
        if p.min() < -1e-12:
            raise BellError(f"negative probability {p.min():.3e}")
        norms = p.sum(axis=(2, 3))
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise BellError("probabilities do not sum to 1 for every setting pair")
        object.__setattr__(self, "probabilities", p)

    @property
    def settings(self) -> tuple:
        return self.probabilities.shape[0], self.probabilities.shape[1]

    def correlator(self, x: int, y: int) -> float:
        """E(x, y) = sum_ab a b p(ab|xy) with outcomes +-1."""
        p = self.probabilities[x, y]
        return float(p[0, 0] - p[0, 1] - p[1, 0] + p[1, 1])

    def flat(self) -> np.ndarray:
        return self.probabilities.reshape(-1)


@dataclass
class LocalityReport:
    local: bool
    membership: HullMembership = field(repr=False)
    bell_functional: np.ndarray | None = None   # coefficients on p(ab|xy)
    local_bound: float | None = None
    value: float | None = None                  # functional on the behavior

    @property
    def violation(self) -> float:
        if self.local:
            return 0.0
        return float(self.value - self.local_bound)


def build_behavior(state: DensityMatrix, alice_povms, bob_povms) -> Behavior:
    """Behavior of measuring `state` with the given per-side POVM lists."""
    alice = list(alice_povms)
    bob = list(bob_povms)
    for m in alice + bob:
        if not isinstance(m, Povm) or m.dim != 2 or len(m.effects) != 2:
            raise BellError("measurements must be dichotomic qubit POVMs")
    p = np.empty((len(alice), len(bob), 2, 2))
    for x, y, a, b in itertools.product(range(len(alice)), range(len(bob)),
                                        range(2), range(2)):
        p[x, y, a, b] = born_probability(state, alice[x].effects[a], bob[y].effects[b])
    return Behavior(probabilities=np.clip(p, 0.0, None))


def deterministic_behaviors(nx: int, ny: int) -> np.ndarray:
    """All local deterministic strategies as flattened behavior vectors."""
    if not (1 <= nx <= MAX_SETTINGS and 1 <= ny <= MAX_SETTINGS):
        raise BellError(f"settings per side must be between 1 and {MAX_SETTINGS}")
    rows = []
    for fa in itertools.product(range(2), repeat=nx):
        for fb in itertools.product(range(2), repeat=ny):
            p = np.zeros((nx, ny, 2, 2))
            for x in range(nx):
                for y in range(ny):
                    p[x, y, fa[x], fb[y]] = 1.0
            rows.append(p.reshape(-1))
    return np.array(rows)


def is_local(behavior: Behavior) -> LocalityReport:
    """Exact local-polytope membership of a behavior.

    Local: the report carries convex weights over deterministic strategies.
    Nonlocal: it carries a Bell functional whose value on the behavior
    exceeds its maximum over all deterministic strategies; the gap is
    re-checked here by direct enumeration, independent of the LP pivoting.
    """
    nx, ny = behavior.settings
    vertices = deterministic_behaviors(nx, ny)
    membership = solve_lp(vertices, behavior.flat())
    if membership.inside:
        return LocalityReport(local=True, membership=membership)
    f = membership.functional
    bound = float((vertices @ f).max())
    value = float(f @ behavior.flat())
    if value <= bound:
        raise BellError(
            "separating functional failed its re-check "
            f"(value {value:.6e} <= deterministic bound {bound:.6e})")
    return LocalityReport(local=False, membership=membership,
                          bell_functional=f, local_bound=bound, value=value)


def chsh_value(behavior: Behavior) -> float:
    """Best CHSH combination of the four correlators of a 2x2 behavior.

    Maximizes s00 E00 + s01 E01 + s10 E10 + s11 E11 over the eight sign
    patterns with s00*s01*s10*s11 = -1; every such pattern has local bound 2.
    """
    if behavior.settings != (2, 2):
        raise BellError(f"CHSH needs 2 settings per side, got {behavior.settings}")
    e = np.array([[behavior.correlator(x, y) for y in range(2)] for x in range(2)])
    best = -np.inf
    for signs in itertools.product((+1.0, -1.0), repeat=4):
        if signs[0] * signs[1] * signs[2] * signs[3] != -1.0:
            continue
        best = max(best, float(np.tensordot(np.array(signs).reshape(2, 2), e, axes=2)))
    return best


def chsh_settings() -> tuple:
    """CHSH-optimal Bloch directions: Alice z, x; Bob (z +- x)/sqrt(2)."""
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    s = 1.0 / np.sqrt(2.0)
    return [z, x], [s * (z + x), s * (z - x)]


def chsh_behavior(eta: float, theta: float = np.pi / 4) -> Behavior:
    """Behavior of the noisy family at the CHSH-optimal settings.

    Noise sits on Alice's side only (Bob stays projective).  At
    theta = pi/4 (maximally entangled state) the best CHSH value is
    2 sqrt(2) eta: nonlocal for eta > 1/sqrt(2), and the LP certifies
    locality of this particular behavior below that point.
    """
    if not 0.0 <= eta <= 1.0:
        raise QuantumError(f"visibility eta must lie in [0, 1], got {eta}")
    alice_dirs, bob_dirs = chsh_settings()
    alice = [noisy_povm(d, eta) for d in alice_dirs]
    bob = [noisy_povm(d, 1.0) for d in bob_dirs]
    return build_behavior(schmidt_state(theta), alice, bob)
