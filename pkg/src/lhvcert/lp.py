"""Dense phase-1 simplex for convex-hull membership.

Decides whether a target vector lies in the convex hull of a finite vertex
list. Inside: returns convex weights reproducing the target. Outside:
returns a separating linear functional f with f.target > max_v f.v plus the
margin, read off the phase-1 dual vector. The certificate is checked
against all vertices directly, independent of the pivoting path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9


class LpError(ValueError):
    """Raised on degenerate input or a failed simplex run."""


@dataclass
class HullMembership:
    inside: bool
    weights: np.ndarray | None = None       # convex weights over vertices
    functional: np.ndarray | None = None    # separating functional (outside)
    margin: float = 0.0
    residual: float = 0.0                   # max-norm reconstruction error


def solve_lp(vertices, target) -> HullMembership:
    """Convex-hull membership of `target` w.r.t. rows of `vertices`."""
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise LpError("vertex list must be a nonempty 2-d array")
    t = np.asarray(target, dtype=float)
    if t.shape != (V.shape[1],):
        raise LpError(f"target length {t.shape} does not match vertex length {V.shape[1]}")

    n, d = V.shape
    # phase-1: min sum(s) s.t. [V^T; 1^T] w + diag(sign) s = [t; 1], w,s >= 0
    A = np.vstack([V.T, np.ones(n)])
    b = np.concatenate([t, [1.0]])
    m = d + 1
    signs = np.where(b >= 0, 1.0, -1.0)
    A = A * signs[:, None]
    b = b * signs

    scale = 1.0 + np.abs(b).max()
    w, obj, y = _phase1_simplex(A, b)
    if obj <= FEAS_TOL * scale:
        resid = float(np.abs(V.T @ w - t).max())
        w = np.clip(w, 0.0, None)
        s = w.sum()
        if s > 0:
            w = w / s
        return HullMembership(inside=True, weights=w, residual=resid)

    # dual y: y.A_j <= 0 for all vertex columns, y.b = obj > 0
    y = y * signs  # undo row sign flips
    f, f0 = y[:d], y[d]
    vals = V @ f + f0
    margin = float(f @ t + f0 - vals.max())
    return HullMembership(inside=False, functional=f, margin=margin)


def _phase1_simplex(A, b):
    """Revised simplex on min 1.s, [A | I][x; s] = b, x,s >= 0 (b >= 0).

    Returns (x, optimal objective, dual vector y).
    """
    m, n = A.shape
    cols = np.hstack([A, np.eye(m)])
    c = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    max_pivots = 50 * (n + m)
    bland = False

    for it in range(max_pivots):
        B = cols[:, basis]
        try:
            xb = np.linalg.solve(B, b)
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError:
            raise LpError("singular simplex basis")
        reduced = c - y @ cols
        if bland:
            candidates = np.flatnonzero(reduced < -1e-11)
            if candidates.size == 0:
                break
            enter = int(candidates[0])
        else:
            enter = int(np.argmin(reduced))
            if reduced[enter] >= -1e-11:
                break
        direction = np.linalg.solve(B, cols[:, enter])
        pos = direction > 1e-11
        if not np.any(pos):
            raise LpError("phase-1 LP unbounded (inconsistent state)")
        ratios = np.full(m, np.inf)
        ratios[pos] = xb[pos] / direction[pos]
        leave = int(np.argmin(ratios))
        if ratios[leave] <= 1e-13 and it > 5 * (n + m):
            bland = True  # long degenerate run: switch to anti-cycling rule
        basis[leave] = enter
    else:
        raise LpError("simplex iteration limit exceeded")

    B = cols[:, basis]
    xb = np.linalg.solve(B, b)
    y = np.linalg.solve(B.T, c[basis])
    x = np.zeros(n + m)
    x[basis] = xb
    return x[:n], float(c[basis] @ xb), y
