"""Constructors and evaluators for the concrete quantum objects of the study.

Noisy dichotomic qubit POVMs M_{+-|x} = (1 +- eta x.sigma)/2, rank-1
projectors, Schmidt-form pure states cos(t)|00> + sin(t)|11>, the noisy
state family rho(theta, eta), Werner states, Born-rule probabilities and
the measurement<->state equivalence identity.

Outcome labels are fixed to {+1, -1}. Bob's general dichotomic POVMs are not
represented separately: any such POVM is a projective qubit measurement
followed by classical post-processing, so all Bob-side measurements here are
projectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    LinalgError,
    check_hermitian,
    herm_eigenvalues,
    min_eigenvalue,
    partial_trace,
    tensor,
)

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

X_DIR = (1.0, 0.0, 0.0)
Y_DIR = (0.0, 1.0, 0.0)
Z_DIR = (0.0, 0.0, 1.0)

PSD_TOL = 1e-10


class QuantumError(ValueError):
    """Raised on invalid quantum-object parameters or malformed operators."""


def bloch_vector(direction) -> np.ndarray:
    """Validate and return a unit Bloch vector as a length-3 float array."""
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise QuantumError(f"Bloch vector must have 3 components, got shape {d.shape}")
    norm2 = float(d @ d)
    if abs(norm2 - 1.0) > 1e-10:
        raise QuantumError(f"Bloch vector must be unit length, |d|^2 = {norm2!r}")
    return d


def bloch_operator(direction) -> np.ndarray:
    """d . sigma for a unit Bloch vector d."""
    d = bloch_vector(direction)
    return d[0] * SIGMA_X + d[1] * SIGMA_Y + d[2] * SIGMA_Z


@dataclass(frozen=True)
class Povm:
    """A qubit measurement: PSD effects summing to the identity."""

    effects: tuple
    outcome_labels: tuple = (+1, -1)

    def __post_init__(self):
        effects = tuple(check_hermitian(e) for e in self.effects)
        object.__setattr__(self, "effects", effects)
        if len(effects) != len(self.outcome_labels):
            raise QuantumError("one outcome label per effect required")
        for e in effects:
            if min_eigenvalue(e) < -PSD_TOL:
                raise QuantumError("POVM effect is not positive semidefinite")
        total = sum(effects)
        if np.max(np.abs(total - np.eye(effects[0].shape[0]))) > PSD_TOL:
            raise QuantumError("POVM effects do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def effect(self, outcome) -> np.ndarray:
        return self.effects[self.outcome_labels.index(outcome)]


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace PSD Hermitian matrix; dim-4 states carry a 2x2 bipartition."""

    matrix: np.ndarray
    bipartite: bool = field(default=False)

    def __post_init__(self):
        m = check_hermitian(self.matrix)
        object.__setattr__(self, "matrix", m)
        if abs(np.trace(m).real - 1.0) > 1e-10:
            raise QuantumError(f"density matrix must have unit trace, got {np.trace(m).real!r}")
        if min_eigenvalue(m) < -PSD_TOL:
            raise QuantumError("density matrix is not positive semidefinite")
        if self.bipartite and m.shape[0] != 4:
            raise QuantumError("bipartite flag requires a 4-dimensional state")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise QuantumError(f"eta must lie in [0, 1], got {eta}")
    return eta


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= np.pi / 4 + 1e-15:
        raise QuantumError(f"theta must lie in [0, pi/4], got {theta}")
    return min(theta, np.pi / 4)


def noisy_povm(direction, eta: float) -> Povm:
    """The noisy dichotomic POVM with effects (1 +- eta d.sigma)/2."""
    eta = _check_eta(eta)
    op = bloch_operator(direction)
    return Povm(effects=(0.5 * (I2 + eta * op), 0.5 * (I2 - eta * op)))


def projector(direction, outcome: int = +1) -> np.ndarray:
    """Rank-1 projector (1 + outcome * d.sigma)/2 with outcome in {+1, -1}."""
    if outcome not in (+1, -1):
        raise QuantumError(f"outcome must be +1 or -1, got {outcome}")
    return 0.5 * (I2 + outcome * bloch_operator(direction))


def schmidt_ket(theta: float) -> np.ndarray:
    theta = _check_theta(theta)
    ket = np.zeros(4, dtype=complex)
    ket[0] = np.cos(theta)
    ket[3] = np.sin(theta)
    return ket


def schmidt_state(theta: float) -> DensityMatrix:
    """Pure state cos(theta)|00> + sin(theta)|11> as a density matrix."""
    ket = schmidt_ket(theta)
    return DensityMatrix(np.outer(ket, ket.conj()), bipartite=True)


def rho_theta_eta(theta: float, eta: float) -> DensityMatrix:
    """eta |phi_theta><phi_theta| + (1 - eta) (1/2) x rho_B."""
    eta = _check_eta(eta)
    phi = schmidt_state(theta).matrix
    rho_b = partial_trace(phi, "A")
    return DensityMatrix(eta * phi + (1.0 - eta) * tensor(I2 / 2, rho_b), bipartite=True)


def werner(mu: float) -> DensityMatrix:
    """Werner state mu |phi+><phi+| + (1 - mu) 1/4, mu in [0, 1]."""
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise QuantumError(f"mu must lie in [0, 1], got {mu}")
    phi_plus = schmidt_state(np.pi / 4).matrix
    return DensityMatrix(mu * phi_plus + (1.0 - mu) * np.eye(4) / 4, bipartite=True)


def _check_effect(e: np.ndarray) -> np.ndarray:
    e = check_hermitian(e)
    if e.shape != (2, 2):
        raise LinalgError(f"expected a 2x2 effect, got shape {e.shape}")
    evs = herm_eigenvalues(e)
    if evs[0] < -PSD_TOL or evs[-1] > 1.0 + PSD_TOL:
        raise QuantumError("effect must satisfy 0 <= E <= 1")
    return e


def born_probability(state: DensityMatrix, effect_a: np.ndarray, effect_b: np.ndarray) -> float:
    """tr(rho (E_a x E_b)) for a bipartite two-qubit state."""
    if state.dim != 4:
        raise LinalgError("born_probability requires a 4-dimensional bipartite state")
    val = np.trace(state.matrix @ tensor(_check_effect(effect_a), _check_effect(effect_b)))
    if abs(val.imag) > 1e-12:
        raise QuantumError(f"Born probability has imaginary residue {val.imag:.3e}")
    return float(val.real)


def check_equivalence(theta: float, eta: float, x_dir, y_dir) -> float:
    """Max discrepancy of the noisy-measurement vs noisy-state identity.

    Compares tr(|phi><phi| M^eta_{a|x} x Pi_{b|y}) against
    tr(rho(theta,eta) Pi_{a|x} x Pi_{b|y}) over all outcome pairs; the two
    are equal for every parameter choice, so the return value is a numerical
    residue (< 1e-12).
    """
    phi = schmidt_state(theta)
    rho = rho_theta_eta(theta, eta)
    povm_x = noisy_povm(x_dir, eta)
    worst = 0.0
    for a in (+1, -1):
        for b in (+1, -1):
            pi_b = projector(y_dir, b)
            lhs = born_probability(phi, povm_x.effect(a), pi_b)
            rhs = born_probability(rho, projector(x_dir, a), pi_b)
            worst = max(worst, abs(lhs - rhs))
    return worst
