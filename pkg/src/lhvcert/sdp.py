"""Self-contained semidefinite solver for small dense problems.

Primal form:  optimize  sum_k <C_k, X_k>
              s.t.      sum_k <A_ik, X_k> = b_i   (i = 1..m)
                        X_k >= 0  (complex Hermitian PSD blocks)

The solver is an infeasible-start primal-dual interior-point method with
Nesterov-Todd scaling, run on the standard real-symmetric embedding
H -> [[Re H, -Im H], [Im H, Re H]] (eigenvalues doubled in multiplicity).
All per-block work is vectorized over groups of equal-size blocks, so
problems with thousands of tiny blocks (e.g. 2^N joint-observable blocks)
stay cheap.

Feasibility problems ("does a PSD X with A(X) = b exist?") are decided by a
phase-1 reformulation maximizing the minimum block eigenvalue; a negative
optimum yields a Farkas-type dual certificate (y with A*(y) >= 0 and
b.y < 0) that is re-checked independently of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import check_hermitian, herm_eigenvalues

# Contract tolerances: a solution is reported optimal only if it meets these.
GAP_TOL = 1e-7
RES_TOL = 1e-8
PSD_SLACK = 1e-8

# Internal targets (tighter, so the contract holds with margin).
_TARGET_GAP = 1e-9
_TARGET_RES = 1e-9
_MAX_ITER = 500
_STEP_FRACTION = 0.98


class SdpError(ValueError):
    """Raised on malformed or numerically unusable SDP input."""


# ----------------------------------------------------------------------
# Complex <-> real embedding
# ----------------------------------------------------------------------

def embed_hermitian(h: np.ndarray) -> np.ndarray:
    """Real symmetric image [[Re H, -Im H], [Im H, Re H]] of a Hermitian H."""
    h = np.asarray(h, dtype=complex)
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def extract_hermitian(s: np.ndarray) -> np.ndarray:
    """Inverse of embed_hermitian (exact round trip on embedded images)."""
    d = s.shape[0] // 2
    re = 0.5 * (s[:d, :d] + s[d:, d:])
    im = 0.5 * (s[d:, :d] - s[:d, d:])
    return re + 1j * im


# ----------------------------------------------------------------------
# Problem / solution containers
# ----------------------------------------------------------------------

@dataclass
class SdpProblem:
    """Block-diagonal Hermitian SDP with affine equality constraints.

    constraints: list of (coeffs, rhs) where coeffs maps block index ->
    Hermitian matrix A_ik; blocks absent from the dict do not enter the
    constraint. Objective matrices may be None (zero).
    """

    block_dims: list
    objective: list
    constraints: list
    sense: str = "maximize"  # maximize | minimize | feasibility

    def __post_init__(self):
        if self.sense not in ("maximize", "minimize", "feasibility"):
            raise SdpError(f"unknown sense {self.sense!r}")
        if any(d < 1 for d in self.block_dims):
            raise SdpError("block dimensions must be >= 1")
        if self.objective is None:
            self.objective = [None] * len(self.block_dims)
        for k, c in enumerate(self.objective):
            if c is not None:
                c = check_hermitian(c)
                if c.shape[0] != self.block_dims[k]:
                    raise SdpError(f"objective block {k} has wrong dimension")
                self.objective[k] = c
        for i, (coeffs, rhs) in enumerate(self.constraints):
            for k, a in coeffs.items():
                a = check_hermitian(a)
                if a.shape[0] != self.block_dims[k]:
                    raise SdpError(f"constraint {i} block {k} has wrong dimension")
                coeffs[k] = a
            if abs(complex(rhs).imag) > 1e-14:
                raise SdpError(f"constraint {i} right-hand side must be real")


@dataclass
class SdpSolution:
    status: str  # optimal | infeasible | max_iterations
    primal_blocks: list
    dual_vector: np.ndarray
    objective_value: float
    duality_gap: float
    constraint_residual: float
    iterations: int = 0
    certificate_margin: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


# ----------------------------------------------------------------------
# Internal real-embedded workspace, blocks grouped by size
# ----------------------------------------------------------------------

class _Workspace:
    def __init__(self, dims, C_list, A_rows, b, row_scale=None):
        self.m = len(b)
        self.b = np.asarray(b, dtype=float)
        self.row_scale = np.ones(self.m) if row_scale is None else np.asarray(row_scale)
        self.b = self.b / self.row_scale
        self.dims = list(dims)
        # group block indices by (embedded) size
        groups = {}
        for k, d in enumerate(dims):
            groups.setdefault(2 * d, []).append(k)
        self.groups = []  # (size, block indices, A (m,n,s,s), C (n,s,s))
        for s, idx in sorted(groups.items()):
            n = len(idx)
            A = np.zeros((self.m, n, s, s))
            C = np.zeros((n, s, s))
            for j, k in enumerate(idx):
                if C_list[k] is not None:
                    C[j] = embed_hermitian(C_list[k])
                for i, coeffs in enumerate(A_rows):
                    a = coeffs.get(k)
                    if a is not None:
                        A[i, j] = embed_hermitian(a) / self.row_scale[i]
            self.groups.append((s, idx, A, C))
        self.total_dim = sum(2 * d for d in dims)

    def apply_A(self, X):
        """A(X): m-vector of <A_i, X> over all groups."""
        out = np.zeros(self.m)
        for (s, idx, A, _), Xg in zip(self.groups, X):
            out += A.reshape(self.m, -1) @ Xg.reshape(-1)
        return out

    def apply_At(self, y):
        """A*(y): per-group stacked blocks."""
        return [np.einsum("i,ibpq->bpq", y, A) for (_, _, A, _) in self.groups]

    def inner_C(self, X):
        return sum(np.vdot(C, Xg).real for (_, _, _, C), Xg in zip(self.groups, X))

    def C_blocks(self):
        return [C for (_, _, _, C) in self.groups]

    def identity(self, scale=1.0):
        return [scale * np.broadcast_to(np.eye(s), (len(idx), s, s)).copy()
                for (s, idx, _, _) in self.groups]

    def pack(self, blocks):
        """Embed a list of complex Hermitian blocks into grouped stacks."""
        out = []
        for (s, idx, _, _) in self.groups:
            Xg = np.zeros((len(idx), s, s))
            for j, k in enumerate(idx):
                Xg[j] = embed_hermitian(blocks[k])
            out.append(Xg)
        return out


def _sym(X):
    return [0.5 * (Xg + Xg.transpose(0, 2, 1)) for Xg in X]


def _inner(X, Y):
    return sum(np.vdot(Xg, Yg).real for Xg, Yg in zip(X, Y))


def _sqrt_and_isqrt(M):
    """Batched symmetric square root and inverse square root."""
    w, V = np.linalg.eigh(M)
    w = np.clip(w, 1e-300, None)
    sq = np.einsum("bpq,bq,brq->bpr", V, np.sqrt(w), V)
    isq = np.einsum("bpq,bq,brq->bpr", V, 1.0 / np.sqrt(w), V)
    return sq, isq


def _nt_scaling(X, Z):
    """Per-group NT scaling W with W Z W = X, plus Z^{-1}."""
    Ws, Zinvs = [], []
    for Xg, Zg in zip(X, Z):
        Xs, _ = _sqrt_and_isqrt(Xg)
        M = Xs @ Zg @ Xs
        _, Misq = _sqrt_and_isqrt(M)
        W = Xs @ Misq @ Xs
        Ws.append(0.5 * (W + W.transpose(0, 2, 1)))
        w, V = np.linalg.eigh(Zg)
        Zinvs.append(np.einsum("bpq,bq,brq->bpr", V, 1.0 / w, V))
    return Ws, Zinvs


def _max_step(X, dX):
    """Largest alpha with X + alpha dX >= 0 (per-group batched).

    Returns 0 when the current iterate is numerically on the cone boundary
    (Cholesky failure); the caller treats that as a stall.
    """
    alpha = np.inf
    for Xg, dXg in zip(X, dX):
        try:
            L = np.linalg.cholesky(Xg)
        except np.linalg.LinAlgError:
            return 0.0
        Y = np.linalg.solve(L, dXg)
        B = np.linalg.solve(L, Y.transpose(0, 2, 1))
        lam = np.linalg.eigvalsh(0.5 * (B + B.transpose(0, 2, 1)))[:, 0]
        lo = lam.min()
        if lo < 0:
            alpha = min(alpha, -1.0 / lo)
    return alpha


def _solve_ipm(ws: _Workspace, verbose=False, X0=None):
    """Core NT predictor-corrector loop; maximization sense."""
    m = len(ws.b)
    scale = 1.0 + np.abs(ws.b).max(initial=0.0)
    X = X0 if X0 is not None else ws.identity(scale)
    Z = ws.identity(scale)
    y = np.zeros(m)
    bnorm = 1.0 + np.linalg.norm(ws.b, np.inf)
    C = ws.C_blocks()
    cnorm = 1.0 + max(np.abs(Cg).max(initial=0.0) for Cg in C)

    status = "max_iterations"
    it = 0
    best = None  # best iterate meeting the contract tolerances
    best_score = np.inf
    for it in range(1, _MAX_ITER + 1):
        rp = ws.b - ws.apply_A(X)
        AtY = ws.apply_At(y)
        Rd = [At - Cg - Zg for At, Cg, Zg in zip(AtY, C, Z)]
        gap = _inner(X, Z)
        if not np.isfinite(gap) or not np.isfinite(rp).all():
            break  # diverged numerically; fall back to the best iterate
        mu = gap / ws.total_dim
        rp_norm = np.linalg.norm(rp, np.inf) / bnorm
        rd_norm = max(np.abs(R).max(initial=0.0) for R in Rd) / cnorm
        obj = ws.inner_C(X)
        rel_gap = gap / (1.0 + abs(obj))
        score = max(rel_gap / GAP_TOL, rp_norm / RES_TOL, rd_norm / RES_TOL)
        if score <= 1.0 and score < best_score:
            best = ([Xg.copy() for Xg in X], y.copy(),
                    [Zg.copy() for Zg in Z], obj, gap, rp.copy())
            best_score = score
        if rel_gap <= _TARGET_GAP and rp_norm <= _TARGET_RES and rd_norm <= _TARGET_RES:
            status = "optimal"
            break
        # Past the achievable floor, rounding error only degrades the
        # iterate; stop once an acceptable point exists and progress turns.
        if best is not None and score > 10.0 * max(best_score, 1e-3):
            break
        if verbose:
            print(f"  it {it:3d}  mu {mu:9.2e}  rp {rp_norm:9.2e}  rd {rd_norm:9.2e}  obj {obj:+.9f}")

        W, Zinv = _nt_scaling(X, Z)

        # Schur complement M_ij = sum_blocks <A_i, W A_j W>
        M = np.zeros((m, m))
        for (s, idx, A, _), Wg in zip(ws.groups, W):
            WAW = np.matmul(np.matmul(Wg[None], A), Wg[None])
            M += A.reshape(m, -1) @ WAW.reshape(m, -1).T
        M = 0.5 * (M + M.T)
        Mfac = None
        for jitter in (1e-13, 1e-10, 1e-7):
            try:
                Mfac = np.linalg.cholesky(M + jitter * np.trace(M) / m * np.eye(m))
                break
            except np.linalg.LinAlgError:
                continue
        if Mfac is None:
            if it == 1:
                raise SdpError(
                    "constraint system is rank-deficient or numerically singular "
                    "(Schur complement not positive definite at the initial point)")
            break  # extreme ill-conditioning near the boundary: stop here

        def newton(Rc):
            # rhs = A(Rc) - A(W Rd W) - rp
            awrw = np.zeros(m)
            for (s, idx, A, _), Wg, Rdg in zip(ws.groups, W, Rd):
                WRW = np.matmul(np.matmul(Wg, Rdg), Wg)
                awrw += A.reshape(m, -1) @ WRW.reshape(-1)
            rhs = ws.apply_A(Rc) - awrw - rp
            dy = np.linalg.solve(Mfac.T, np.linalg.solve(Mfac, rhs))
            # one step of iterative refinement: the Schur system gets very
            # ill-conditioned near the boundary and the raw solve is noisy
            r2 = rhs - M @ dy
            dy += np.linalg.solve(Mfac.T, np.linalg.solve(Mfac, r2))
            AtDy = ws.apply_At(dy)
            dZ = [R + At for R, At in zip(Rd, AtDy)]
            dX = [Rcg - np.matmul(np.matmul(Wg, dZg), Wg)
                  for Rcg, Wg, dZg in zip(Rc, W, dZ)]
            return _sym(dX), dy, _sym(dZ)

        # predictor (affine scaling)
        Rc_aff = [-Xg for Xg in X]
        dX_a, dy_a, dZ_a = newton(Rc_aff)
        ap = min(1.0, _STEP_FRACTION * _max_step(X, dX_a))
        ad = min(1.0, _STEP_FRACTION * _max_step(Z, dZ_a))
        gap_aff = _inner([Xg + ap * d for Xg, d in zip(X, dX_a)],
                         [Zg + ad * d for Zg, d in zip(Z, dZ_a)])
        sigma = min(1.0, max(0.0, (gap_aff / gap)) ** 3)

        # corrector (centering)
        Rc = [sigma * mu * Zi - Xg for Zi, Xg in zip(Zinv, X)]
        dX, dy, dZ = newton(Rc)
        ap = min(1.0, _STEP_FRACTION * _max_step(X, dX))
        ad = min(1.0, _STEP_FRACTION * _max_step(Z, dZ))
        if ap < 1e-10 and ad < 1e-10:
            break  # stalled
        X = _sym([Xg + ap * d for Xg, d in zip(X, dX)])
        y = y + ad * dy
        Z = _sym([Zg + ad * d for Zg, d in zip(Z, dZ)])

    if status != "optimal" and best is not None:
        X, y, Z, obj, gap, rp = best
        status = "optimal"
    rp = ws.b - ws.apply_A(X)
    gap = _inner(X, Z)
    obj = ws.inner_C(X)
    rel_gap = gap / (1.0 + abs(obj))
    rp_norm = np.linalg.norm(rp, np.inf) / bnorm
    if status != "optimal" and rel_gap <= GAP_TOL and rp_norm <= RES_TOL:
        status = "optimal"
    return status, X, y, Z, obj, gap, rp, it


def _scatter_blocks(ws: _Workspace, X, n_blocks):
    """Ungroup and un-embed the per-group stacks into per-block Hermitians."""
    out = [None] * n_blocks
    for (s, idx, _, _), Xg in zip(ws.groups, X):
        for j, k in enumerate(idx):
            out[k] = extract_hermitian(Xg[j])
    return out


# ----------------------------------------------------------------------
# Public entry points
# ----------------------------------------------------------------------

def solve(problem: SdpProblem, verbose: bool = False,
          initial_primal=None) -> SdpSolution:
    """Solve a block SDP; see module docstring for the convention.

    initial_primal, when given, must be a list of strictly positive definite
    Hermitian blocks satisfying the equality constraints; starting there
    keeps the primal residual at zero, which helps badly scaled problems.

    For sense="feasibility" the objective is ignored and the answer is
    status "optimal" (a feasible point, returned in primal_blocks) or
    "infeasible" (a Farkas certificate in dual_vector).
    """
    if problem.sense == "feasibility":
        return _solve_feasibility(problem, verbose=verbose)

    sign = -1.0 if problem.sense == "minimize" else 1.0
    C_list = [None if c is None else sign * c for c in problem.objective]
    A_rows = [coeffs for coeffs, _ in problem.constraints]
    b = [float(np.real(rhs)) for _, rhs in problem.constraints]
    # row equilibration: badly mixed constraint scales stall the iteration
    row_scale = np.array([
        max((np.abs(a).max() for a in coeffs.values()), default=1.0)
        for coeffs in A_rows])
    row_scale = np.where(row_scale > 1e-12, row_scale, 1.0)
    # embedding doubles real inner products: <embed(A), embed(X)> = 2 <A, X>
    ws = _Workspace(problem.block_dims, C_list, A_rows, [2.0 * v for v in b],
                    row_scale=row_scale)
    X0 = ws.pack(initial_primal) if initial_primal is not None else None
    status, X, y, Z, obj, gap, rp, iters = _solve_ipm(ws, verbose=verbose, X0=X0)
    blocks = _scatter_blocks(ws, X, len(problem.block_dims))
    return SdpSolution(
        status=status,
        primal_blocks=blocks,
        dual_vector=y / row_scale,
        objective_value=sign * obj / 2.0,
        duality_gap=gap / 2.0,
        constraint_residual=float(np.abs(rp * row_scale).max(initial=0.0)) / 2.0,
        iterations=iters,
    )


def _solve_feasibility(problem: SdpProblem, verbose: bool = False) -> SdpSolution:
    """Phase-1: maximize the minimum block eigenvalue s over X = Y + s*1.

    Strictly positive optimum -> feasible point; negative optimum -> the
    dual vector is a Farkas certificate (A*(y) >= 0, b.y < 0).
    """
    n = len(problem.block_dims)
    shift = 1.0 + max((abs(float(np.real(r))) for _, r in problem.constraints), default=0.0)
    dims = list(problem.block_dims) + [1]
    objective = [None] * n + [np.array([[1.0]])]
    t_id = np.array([[1.0]])
    constraints = []
    a0 = []
    for coeffs, rhs in problem.constraints:
        trace_coeff = sum(np.trace(a).real for a in coeffs.values())
        a0.append(trace_coeff)
        new_coeffs = dict(coeffs)
        if trace_coeff != 0.0:
            new_coeffs[n] = trace_coeff * t_id
        constraints.append((new_coeffs, float(np.real(rhs)) + shift * trace_coeff))
    phase1 = SdpProblem(block_dims=dims, objective=objective,
                        constraints=constraints, sense="maximize")
    sol = solve(phase1, verbose=verbose)
    if sol.status == "max_iterations":
        return sol
    s_star = float(sol.primal_blocks[n][0, 0].real) - shift

    if s_star > 0.0:
        blocks = [sol.primal_blocks[k] + s_star * np.eye(problem.block_dims[k])
                  for k in range(n)]
        return SdpSolution(
            status="optimal", primal_blocks=blocks, dual_vector=sol.dual_vector,
            objective_value=s_star, duality_gap=sol.duality_gap,
            constraint_residual=sol.constraint_residual, iterations=sol.iterations,
            certificate_margin=s_star)

    # Farkas certificate: verify independently of the solver.
    y = sol.dual_vector / 2.0  # undo the embedding doubling of b
    b = np.array([float(np.real(r)) for _, r in problem.constraints])
    by = float(b @ y)
    aty_mineig = _adjoint_min_eig(problem, y)
    return SdpSolution(
        status="infeasible", primal_blocks=[], dual_vector=y,
        objective_value=s_star, duality_gap=sol.duality_gap,
        constraint_residual=sol.constraint_residual, iterations=sol.iterations,
        certificate_margin=-by if (by < 0 and aty_mineig > -PSD_SLACK) else 0.0)


def _adjoint_min_eig(problem: SdpProblem, y) -> float:
    """min over blocks of lambda_min(sum_i y_i A_i), independent recheck path."""
    lo = np.inf
    for k, d in enumerate(problem.block_dims):
        acc = np.zeros((d, d), dtype=complex)
        for yi, (coeffs, _) in zip(y, problem.constraints):
            a = coeffs.get(k)
            if a is not None:
                acc = acc + yi * a
        lo = min(lo, float(herm_eigenvalues(acc)[0]))
    return lo


def verify_solution(problem: SdpProblem, sol: SdpSolution) -> dict:
    """Re-check a returned answer by direct eigenvalue/constraint evaluation.

    Uses only herm_eigenvalues and plain arithmetic (no solver internals).
    """
    report = {"status": sol.status}
    if sol.status == "infeasible":
        b = np.array([float(np.real(r)) for _, r in problem.constraints])
        report["farkas_by"] = float(b @ sol.dual_vector)
        report["farkas_adjoint_min_eig"] = _adjoint_min_eig(problem, sol.dual_vector)
        report["certified"] = (report["farkas_by"] < 0
                               and report["farkas_adjoint_min_eig"] >= -PSD_SLACK)
        return report
    min_eig = min(float(herm_eigenvalues(blk)[0]) for blk in sol.primal_blocks)
    resid = 0.0
    for coeffs, rhs in problem.constraints:
        val = sum(np.trace(a @ sol.primal_blocks[k]).real for k, a in coeffs.items())
        resid = max(resid, abs(val - float(np.real(rhs))))
    report["primal_min_eig"] = min_eig
    report["constraint_residual"] = resid
    report["certified"] = min_eig >= -PSD_SLACK and resid <= 10 * RES_TOL * (
        1.0 + max((abs(float(np.real(r))) for _, r in problem.constraints), default=0.0))
    return report


def dump_problem(problem: SdpProblem) -> str:
    """Plain-text dump (dimensions, objective and constraint triplets).

    Intended for cross-checking against external solvers; line format is
    documented in the README and is not bit-critical.
    """
    lines = [f"blocks {' '.join(str(d) for d in problem.block_dims)}",
             f"sense {problem.sense}"]
    for k, c in enumerate(problem.objective):
        if c is None:
            continue
        for (i, j), v in np.ndenumerate(c):
            if v != 0 and i <= j:
                lines.append(f"obj {k} {i} {j} {v.real:.17g} {v.imag:.17g}")
    for ci, (coeffs, rhs) in enumerate(problem.constraints):
        lines.append(f"con {ci} rhs {float(np.real(rhs)):.17g}")
        for k, a in sorted(coeffs.items()):
            for (i, j), v in np.ndenumerate(a):
                if v != 0 and i <= j:
                    lines.append(f"con {ci} {k} {i} {j} {v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"
