"""Local-hidden-variable certification for the noisy state family.

Three certificates for rho(theta, eta) = eta |phi_theta><phi_theta| +
(1-eta) (1/2 x rho_B):

 (a) the analytic sufficient condition
     cos^2(2 theta) >= (2 eta - 1) / ((2 - eta) eta^3);
 (b) the explicit convex split rho = alpha * werner(mu) + sigma with
     alpha = eta sin(2 theta) / mu, whose residual sigma is diagonal and a
     valid separable state exactly when
     eta <= mu / ((1 + mu) cot(theta) - mu);
 (c) the optimal split found by SDP: maximize eta subject to sigma >= 0,
     sigma^PT >= 0, tr sigma + alpha = 1, alpha >= 0.

Combining (a) with (b) or (c) over all theta yields a theta-independent
visibility eta* below which every state in the family is local: about 0.503
for the analytic split and about 0.515 for the SDP split (mu = 0.66).

The Werner weight mu defaults to MU_LHV = 0.66, the largest two-digit
visibility at which the Werner state is known to admit a projective LHV
model; it is consumed here as a certified constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import LinalgError, herm_eigenvalues, partial_transpose
from .quantum import DensityMatrix, QuantumError, rho_theta_eta, schmidt_state, werner
from .sdp import SdpError, SdpProblem, solve, verify_solution

MU_LHV = 0.66

_OFFDIAG_TOL = 1e-12
_WITNESS_TOL = 1e-9
_PSD_TOL = 1e-8


class DecompositionError(ValueError):
    """Refusal: the requested convex split does not exist at these parameters."""


@dataclass
class DecompositionWitness:
    """rho(theta,eta) = alpha * werner(mu) + sigma, sigma unnormalized (trace 1-alpha)."""

    alpha: float
    mu: float
    sigma: np.ndarray
    theta: float
    eta: float

    def check(self) -> float:
        """Independent validity re-check; returns worst violation, raises if invalid."""
        if not -_WITNESS_TOL <= self.alpha <= 1.0 + _WITNESS_TOL:
            raise DecompositionError(f"alpha = {self.alpha} outside [0, 1]")
        rho = rho_theta_eta(self.theta, self.eta).matrix
        recon = self.alpha * werner(self.mu).matrix + self.sigma
        worst = float(np.max(np.abs(rho - recon)))
        if worst > _WITNESS_TOL:
            raise DecompositionError(f"decomposition residual {worst:.3e} > {_WITNESS_TOL}")
        lo = float(herm_eigenvalues(self.sigma)[0])
        lo_pt = float(herm_eigenvalues(partial_transpose(self.sigma, "B"))[0])
        if lo < -_PSD_TOL or lo_pt < -_PSD_TOL:
            raise DecompositionError(
                f"residual not separable: min eig {lo:.3e}, PT min eig {lo_pt:.3e}")
        tr_gap = abs(float(np.trace(self.sigma).real) + self.alpha - 1.0)
        if tr_gap > _WITNESS_TOL:
            raise DecompositionError(f"tr(sigma) + alpha deviates from 1 by {tr_gap:.3e}")
        return max(worst, -lo, -lo_pt, tr_gap)


@dataclass
class LhvCurvePoint:
    theta: float
    eta_condition9: float
    eta_analytic_decomp: float
    eta_sdp: float | None = None


def _check_params(theta, eta=None, mu=None):
    theta = float(theta)
    if not 0.0 <= theta <= np.pi / 4 + 1e-15:
        raise QuantumError(f"theta must lie in [0, pi/4], got {theta}")
    if eta is not None and not 0.0 <= float(eta) <= 1.0:
        raise QuantumError(f"eta must lie in [0, 1], got {eta}")
    if mu is not None and not 0.0 < float(mu) < 1.0:
        raise QuantumError(f"mu must lie in (0, 1), got {mu}")
    return theta


def condition9(theta: float, eta: float) -> bool:
    """Analytic sufficient LHV condition for rho(theta, eta).

    eta = 0 is defined True (the identity measurement is trivially local;
    the rational form is singular there and bypassed).
    """
    theta = _check_params(theta, eta=eta)
    eta = float(eta)
    if eta == 0.0:
        return True
    rhs = (2.0 * eta - 1.0) / ((2.0 - eta) * eta ** 3)
    return np.cos(2.0 * theta) ** 2 >= rhs


def condition9_boundary(theta: float, tol: float = 1e-12) -> float:
    """Largest eta satisfying the analytic condition at fixed theta.

    Bisection on [1/2, 1]: the rational side is 0 at eta = 1/2, reaches 1 at
    eta = 1, and increases monotonically in between.
    """
    theta = _check_params(theta)
    target = np.cos(2.0 * theta) ** 2
    lo, hi = 0.5, 1.0
    if (2.0 - hi) * hi ** 3 * target >= (2.0 * hi - 1.0):
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (2.0 * mid - 1.0) / ((2.0 - mid) * mid ** 3) <= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def analytic_eta_bound(theta: float, mu: float = MU_LHV) -> float:
    """Closed-form acceptance boundary of the diagonal-residual split."""
    theta = _check_params(theta, mu=mu)
    if theta == 0.0:
        return 0.0  # cot diverges; boundary -> 0 by continuity
    mu = float(mu)
    return mu / ((1.0 + mu) / np.tan(theta) - mu)


def analytic_decomposition(theta: float, eta: float, mu: float = MU_LHV) -> DecompositionWitness:
    """Diagonal-residual split with alpha = eta sin(2 theta) / mu.

    Returns a checked witness, or raises DecompositionError when alpha > 1,
    the residual is not diagonal, or a diagonal entry is negative.
    """
    theta = _check_params(theta, eta=eta, mu=mu)
    eta, mu = float(eta), float(mu)
    alpha = eta * np.sin(2.0 * theta) / mu
    if alpha > 1.0 + 1e-12:
        raise DecompositionError(
            f"alpha = {alpha:.6f} > 1: split undefined at theta={theta}, eta={eta}, mu={mu}")
    sigma = rho_theta_eta(theta, eta).matrix - alpha * werner(mu).matrix
    off = sigma - np.diag(np.diag(sigma))
    off_mass = float(np.max(np.abs(off)))
    if off_mass > _OFFDIAG_TOL:
        raise DecompositionError(f"residual has off-diagonal mass {off_mass:.3e}")
    diag = np.diag(sigma).real
    if diag.min() < -1e-12:
        raise DecompositionError(
            f"residual diagonal entry {diag.min():.3e} < 0: state outside the analytic region")
    witness = DecompositionWitness(alpha=min(alpha, 1.0), mu=mu, sigma=sigma,
                                   theta=theta, eta=eta)
    witness.check()
    return witness


def sdp_eta_max(theta: float, mu: float = MU_LHV) -> tuple:
    """Maximal eta admitting a separable-residual split, found by SDP.

    The split rho(theta, eta) = alpha * werner(mu) + sigma determines sigma
    affinely in (alpha, eta), so the search is the two-variable matrix
    inequality

        maximize eta   s.t.   F0 + alpha*Fa + eta*Fe >= 0,

    with F0 = diag(rho0, rho0^PT, 0), Fa = diag(-W, -W^PT, 1) and
    Fe = diag(S, S^PT, 0), where rho0 = rho(theta, 0), S = d rho / d eta and
    the scalar block enforces alpha >= 0.  The solver is fed the conjugate
    problem  minimize <F0, Y>  s.t.  <Fa, Y> = 0, <Fe, Y> = -1, Y >= 0;
    its dual vector is exactly (alpha, eta) and its primal Y certifies the
    upper bound (any feasible Y gives <F0, Y> >= eta for every valid split).

    Returns (eta, witness); the witness is independently re-checked.
    """
    theta = _check_params(theta, mu=mu)
    mu = float(mu)
    if theta == 0.0:
        # product state: sigma = rho itself is PPT for every eta, so eta = 1
        witness = DecompositionWitness(alpha=0.0, mu=mu,
                                       sigma=rho_theta_eta(0.0, 1.0).matrix,
                                       theta=0.0, eta=1.0)
        witness.check()
        return 1.0, witness

    phi = schmidt_state(theta).matrix
    rho0 = rho_theta_eta(theta, 0.0).matrix        # eta-independent part
    slope = phi - rho0                              # d rho / d eta
    w_mu = werner(mu).matrix
    pt = lambda h: partial_transpose(h, "B")

    # blocks: 0 = Y acting on sigma, 1 = on sigma^PT, 2 = alpha slack
    problem = SdpProblem(
        block_dims=[4, 4, 1],
        objective=[rho0, pt(rho0), None],
        constraints=[
            ({0: -w_mu, 1: -pt(w_mu), 2: np.array([[1.0]])}, 0.0),
            ({0: slope, 1: pt(slope)}, -1.0),
        ],
        sense="minimize")

    def feasible_start(eps: float):
        # Y1 = a*I - b*S satisfies <S, Y1> = -1 with b = 1/||S||_F^2 (the
        # identity part drops out because S is traceless); a keeps Y1 PD.
        sq = float(np.trace(slope @ slope).real)
        b = 1.0 / sq
        evals = herm_eigenvalues(slope)
        a = 2.0 * b * max(abs(float(evals[0])), abs(float(evals[-1])))
        y1 = a * np.eye(4, dtype=complex) - b * slope
        y2 = eps * np.eye(4, dtype=complex)
        y3 = float(np.trace(w_mu @ y1).real + np.trace(pt(w_mu) @ y2).real)
        if y3 <= 0.0:
            return None
        return [y1, y2, np.array([[y3]])]

    # nearly-product states (tiny theta) make the instance badly conditioned
    # and sensitive to the starting point, so try a short ladder of starts
    sol = None
    for start in (None, 1e-2, 1e-4, 1.0):
        start = start if start is None else feasible_start(start)
        try:
            cand = solve(problem, initial_primal=start)
        except (SdpError, np.linalg.LinAlgError):
            continue
        sol = cand
        if sol.status == "optimal":
            break
    if sol is None or sol.status != "optimal":
        detail = ("no run converged" if sol is None else
                  f"status {sol.status}, gap {sol.duality_gap:.2e}, "
                  f"residual {sol.constraint_residual:.2e}")
        raise DecompositionError(
            f"separability SDP failed at theta={theta}: {detail}")
    report = verify_solution(problem, sol)
    if not report["certified"]:
        raise DecompositionError(f"separability SDP answer failed re-check: {report}")
    alpha, eta = (float(v) for v in sol.dual_vector)
    sigma = rho0 + eta * slope - alpha * w_mu
    witness = DecompositionWitness(alpha=max(0.0, alpha), mu=mu, sigma=sigma,
                                   theta=theta, eta=eta)
    witness.check()
    return eta, witness


def ppt_check(state: DensityMatrix) -> bool:
    """Positive partial transpose; decides separability exactly in 2x2."""
    if state.dim != 4:
        raise LinalgError("ppt_check decides separability only for two-qubit states")
    return float(herm_eigenvalues(partial_transpose(state.matrix, "B"))[0]) >= -1e-10


# Smallest positive theta at which the separability SDP stays reliably
# conditioned in float64 (nearly-product states below it may diverge).
_SDP_THETA_FLOOR = 1e-3


def lhv_curve(mu: float = MU_LHV, grid_size: int = 256, include_sdp: bool = True):
    """Certificate boundaries on a uniform theta grid over [0, pi/4]."""
    if grid_size < 50:
        raise ValueError("grid_size must be >= 50")
    if include_sdp and np.pi / 4 / (grid_size - 1) < _SDP_THETA_FLOOR:
        raise ValueError(
            f"grid_size {grid_size} puts grid points below theta = "
            f"{_SDP_THETA_FLOOR}, where the separability SDP is not certified; "
            f"use at most {int(np.pi / 4 / _SDP_THETA_FLOOR) + 1} points")
    points = []
    for theta in np.linspace(0.0, np.pi / 4, grid_size):
        eta9 = condition9_boundary(theta)
        eta_a = analytic_eta_bound(theta, mu)
        eta_s = sdp_eta_max(theta, mu)[0] if include_sdp else None
        points.append(LhvCurvePoint(theta=float(theta), eta_condition9=eta9,
                                    eta_analytic_decomp=eta_a, eta_sdp=eta_s))
    return points


def combined_threshold(mu: float = MU_LHV, grid_size: int = 256,
                       branch: str = "sdp") -> tuple:
    """Largest eta covered at every theta by condition (a) plus one split.

    branch "analytic" uses the closed-form split boundary, branch "sdp" the
    SDP optimum. Both pair it with the analytic condition (a), which covers
    small theta; the split covers theta near pi/4. The two boundaries are
    monotone in opposite directions, so the combined threshold
    min over theta of max(boundary_a(theta), boundary_split(theta)) sits at
    their crossing, which is refined by bisection in theta to 1e-4 in eta.

    Returns (eta_star, curve).
    """
    if branch not in ("sdp", "analytic"):
        raise ValueError(f"branch must be 'sdp' or 'analytic', got {branch!r}")
    curve = lhv_curve(mu, grid_size, include_sdp=(branch == "sdp"))

    def split_bound(theta):
        if branch == "sdp":
            return sdp_eta_max(theta, mu)[0]
        return analytic_eta_bound(theta, mu)

    covers = []
    for p in curve:
        split = p.eta_sdp if branch == "sdp" else p.eta_analytic_decomp
        covers.append(max(p.eta_condition9, split))
    covers = np.asarray(covers)
    k = int(np.argmin(covers))

    # refine around the crossing: condition (a) decreases with theta, the
    # split bound increases (theta > 0), so bisect on their difference
    thetas = [p.theta for p in curve]
    lo = thetas[max(0, k - 1)]
    hi = thetas[min(len(thetas) - 1, k + 1)]
    lo = max(lo, 1e-6)
    f_lo = condition9_boundary(lo) - split_bound(lo)
    f_hi = condition9_boundary(hi) - split_bound(hi)
    eta_star = float(covers[k])
    if f_lo > 0 > f_hi:
        while True:
            mid = 0.5 * (lo + hi)
            c9 = condition9_boundary(mid)
            sp = split_bound(mid)
            if abs(c9 - sp) < 1e-5 or hi - lo < 1e-9:
                eta_star = min(eta_star, max(c9, sp))
                break
            if c9 > sp:
                lo = mid
            else:
                hi = mid
    return eta_star, curve
