"""
Dense small complex-matrix kernel.

All energies are ordinary frequencies in GHz and durations in ns, so a constant
Hamiltonian H held for tau produces U = exp(-i 2 pi H tau). Every other module
builds on the helpers here.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg as la
from numpy.typing import ArrayLike, NDArray

ComplexMatrix = NDArray[np.complex128]

HERMITIAN_TOL = 1e-10

SIGMA_X: ComplexMatrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y: ComplexMatrix = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z: ComplexMatrix = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2: ComplexMatrix = np.eye(2, dtype=np.complex128)


class EigenDecomposition(NamedTuple):
    """Ascending real eigenvalues and orthonormal eigenvector columns."""
    eigenvalues: NDArray[np.float64]
    eigenvectors: ComplexMatrix


def as_matrix(m: ArrayLike) -> ComplexMatrix:
    """Coerce to a square complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"Expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def dagger(m: ArrayLike) -> ComplexMatrix:
    return as_matrix(m).conj().T


def hermiticity_error(m: ArrayLike) -> float:
    """max |M[i][j] - conj(M[j][i])|"""
    arr = as_matrix(m)
    return float(np.max(np.abs(arr - arr.conj().T)))


def require_hermitian(m: ArrayLike, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    arr = as_matrix(m)
    err = hermiticity_error(arr)
    if err >= tol:
        raise ValueError(f"Matrix is not Hermitian: max |M - M^dagger| = {err:.3e} (tolerance {tol:.1e})")
    return arr


def herm_eig(m: ArrayLike) -> EigenDecomposition:
    """
    Hermitian eigendecomposition with ascending eigenvalues.

    Eigenvectors inside a degenerate cluster are an arbitrary orthonormal basis
    of that cluster; callers must not depend on the choice.
    """
    arr = require_hermitian(m)
    # Symmetrize away the sub-tolerance anti-Hermitian residue before LAPACK.
    arr = 0.5 * (arr + arr.conj().T)
    values, vectors = la.eigh(arr)
    return EigenDecomposition(np.asarray(values, dtype=np.float64), np.asarray(vectors, dtype=np.complex128))


def expm_unitary(h: ArrayLike, tau: float) -> ComplexMatrix:
    """U = exp(-i 2 pi H tau), assembled from the eigendecomposition of H."""
    if tau < 0:
        raise ValueError(f"Duration must be non-negative, got {tau}")
    values, vectors = herm_eig(h)
    phases = np.exp(-2j * np.pi * values * tau)
    return (vectors * phases) @ vectors.conj().T


def kron(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def trace(m: ArrayLike) -> complex:
    return complex(np.trace(as_matrix(m)))


def frobenius(m: ArrayLike) -> float:
    return float(np.linalg.norm(as_matrix(m), ord="fro"))


def commutator(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    a_m, b_m = as_matrix(a), as_matrix(b)
    return a_m @ b_m - b_m @ a_m


def conjugate_by(u: ArrayLike, rho: ArrayLike) -> ComplexMatrix:
    """U rho U^dagger"""
    u_m = as_matrix(u)
    return u_m @ as_matrix(rho) @ u_m.conj().T


def projector(vector: ArrayLike) -> ComplexMatrix:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def rotation(axis: str, angle: float) -> ComplexMatrix:
    """exp(-i angle sigma_axis / 2) on a qubit."""
    paulis = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
    try:
        sigma = paulis[axis.lower()]
    except KeyError:
        raise ValueError(f"Unknown rotation axis '{axis}'; expected one of x, y, z") from None
    return np.cos(angle / 2) * IDENTITY_2 - 1j * np.sin(angle / 2) * sigma
