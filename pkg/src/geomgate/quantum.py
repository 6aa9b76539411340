"""Dense complex linear-algebra helpers shared by every module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. The
largest space handled here is the 9-level two-atom space, so everything
stays dense.
"""

from __future__ import annotations

import numpy as np

TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULIS = (I2, SX, SY, SZ)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators (or kets)."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def unitarity_defect(u: np.ndarray) -> float:
    """Max-norm of ``u^dag u - I``."""
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(adjoint(u) @ u - np.eye(u.shape[0]))))


def hermiticity_defect(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - adjoint(a))))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return psi / norm


def projector(psi) -> np.ndarray:
    """Density matrix ``|psi><psi|`` of a (normalized) state vector."""
    psi = normalize(psi)
    return np.outer(psi, psi.conj())


def check_density(rho: np.ndarray, tol: float = TOL) -> None:
    """Raise ``ValueError`` if ``rho`` is not a valid density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if hermiticity_defect(rho) > 1e-12 + tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh((rho + adjoint(rho)) / 2).min() < -tol:
        raise ValueError("density matrix has negative eigenvalues")


def operator_schmidt_weight(u: np.ndarray, dims: tuple[int, int] = (2, 2)) -> float:
    """Weight outside the leading operator-Schmidt term of a bipartite operator.

    Zero exactly when ``u`` factorizes as ``a (x) b``; positive otherwise.
    """
    da, db = dims
    r = np.asarray(u).reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)
    s = np.linalg.svd(r, compute_uv=False) ** 2
    return float(1.0 - s[0] / s.sum())
