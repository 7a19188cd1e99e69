"""Dense complex linear algebra for small matrices.

Everything here operates on plain numpy arrays (complex128). Matrices are
small (dim <= ~64 on the state side, 2 on the effect side), so robustness is
preferred over asymptotic speed throughout.

Bipartite 4-dimensional operators use the fixed product basis order
{|00>, |01>, |10>, |11>}; every module in the package shares it.
"""

from __future__ import annotations

import numpy as np

HERM_TOL = 1e-12


class LinalgError(ValueError):
    """Raised on malformed linear-algebra input (wrong shape, non-Hermitian...)."""


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m.T)


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m))) <= tol


def check_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Validate Hermiticity to `tol` per entry and return the symmetrized matrix.

    Inputs within tolerance are mapped to (m + m^dag)/2 so downstream
    eigensolves see an exactly Hermitian matrix.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - dagger(m)))
    if dev > tol:
        raise LinalgError(f"matrix is not Hermitian: max |m - m^dag| = {dev:.3e} > {tol:.1e}")
    return 0.5 * (m + dagger(m))


def herm_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(check_hermitian(m))


def herm_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    return np.linalg.eigh(check_hermitian(m))


def min_eigenvalue(m: np.ndarray) -> float:
    return float(herm_eigenvalues(m)[0])


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, block convention (i*rb+k, j*cb+l) = a[i,j] b[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _check_two_qubit(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise LinalgError(f"expected a 4x4 bipartite operator, got shape {m.shape}")
    return m


def partial_trace(m: np.ndarray, subsystem: str) -> np.ndarray:
    """Trace out one qubit of a 4x4 operator; subsystem in {'A', 'B'}."""
    m = _check_two_qubit(m).reshape(2, 2, 2, 2)
    if subsystem == "A":
        return np.einsum("ijil->jl", m)
    if subsystem == "B":
        return np.einsum("ijkj->ik", m)
    raise LinalgError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(m: np.ndarray, subsystem: str = "B") -> np.ndarray:
    """Transpose one qubit of a 4x4 operator; an involution, preserves Hermiticity."""
    m = _check_two_qubit(m).reshape(2, 2, 2, 2)
    if subsystem == "B":
        out = m.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        out = m.transpose(2, 1, 0, 3)
    else:
        raise LinalgError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return out.reshape(4, 4)
