"""Small dense linear-algebra helpers used throughout the package."""

from __future__ import annotations

import numpy as np
import scipy.linalg


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def expm_hermitian(h: np.ndarray, factor: complex = 1.0) -> np.ndarray:
    """exp(factor * h) for Hermitian h, via eigendecomposition.

    Unitary to machine precision when factor is purely imaginary, which is
    how every finite-dimensional rotation in this package is generated.
    """
    w, v = np.linalg.eigh(h)
    return (v * np.exp(factor * w)) @ dag(v)


def unitarity_defect(u: np.ndarray) -> float:
    """Max-abs entry of u'u - I."""
    return max_abs(dag(u) @ u - np.eye(u.shape[0]))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase fix makes the distribution exactly Haar rather
    than merely column-orthonormal.
    """
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) ||rho - sigma||_1 for Hermitian matrices."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


def pure_state_fidelity(vec: np.ndarray, rho: np.ndarray) -> float:
    """<vec| rho |vec> for a unit vector and a density matrix."""
    return float(np.real(np.vdot(vec, rho @ vec)))


def orthonormal_completion(columns: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the given columns.

    The input columns must already be orthonormal; the result has
    dim - k columns where the input has k.
    """
    return scipy.linalg.null_space(dag(columns))
