"""Dense Hermitian-matrix primitives with one shared tolerance policy.

Every rank, support projector and minimum positive eigenvalue in this package
is derived from the same relative cutoff: an eigenvalue counts as zero when it
is <= rank_tol * (largest eigenvalue). Tying rank and minimum-positive-
eigenvalue extraction to a single cutoff keeps r and lambda_min consistent
with each other. Matrices are plain complex ndarrays; dimensions here stay
small (<= ~64), so everything is dense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, NotHermitianError

#: Relative eigenvalue cutoff below which spectra are treated as zero.
DEFAULT_RANK_TOL = 1e-10

#: Max-norm tolerance for ``m == m.conj().T`` checks.
DEFAULT_SYMM_TOL = 1e-10


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 matrix, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotHermitianError("matrix contains non-finite entries")
    return arr


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigendecomposition with eigenvalues sorted in descending order.

    ``eigenvectors[:, k]`` is the unit eigenvector paired with
    ``eigenvalues[k]``. Ties keep the (reversed) eigensolver order, which is
    deterministic for identical input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def retained_count(self, rank_tol: float = DEFAULT_RANK_TOL) -> int:
        """Number of eigenvalues strictly above ``rank_tol * max(eigenvalues)``."""
        lam_max = float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0
        if lam_max <= 0.0:
            return 0
        return int(np.sum(self.eigenvalues > rank_tol * lam_max))

    def min_positive(self, rank_tol: float = DEFAULT_RANK_TOL) -> float:
        """Smallest eigenvalue above the rank cutoff."""
        k = self.retained_count(rank_tol)
        if k == 0:
            raise ValueError("spectrum has no eigenvalue above the rank cutoff")
        return float(self.eigenvalues[k - 1])

    def support_projector(self, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        k = self.retained_count(rank_tol)
        v = self.eigenvectors[:, :k]
        return v @ v.conj().T

    def pinv_sqrt(self, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        """Inverse square root on the support, zero on the kernel."""
        k = self.retained_count(rank_tol)
        v = self.eigenvectors[:, :k]
        inv_sqrt = 1.0 / np.sqrt(self.eigenvalues[:k])
        return (v * inv_sqrt) @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def hermitian_eig(m, symm_tol: float = DEFAULT_SYMM_TOL) -> HermitianSpectrum:
    """Eigendecompose a Hermitian matrix, eigenvalues descending.

    Raises NotHermitianError when ``max|m - m^dagger|`` exceeds ``symm_tol``
    and NonConvergenceError when the underlying solver fails. The matrix is
    symmetrized before the solve so that sub-tolerance asymmetry cannot leak
    into the output.
    """
    arr = as_complex_matrix(m)
    if arr.size and np.max(np.abs(arr - arr.conj().T)) > symm_tol:
        raise NotHermitianError(
            f"matrix deviates from Hermitian symmetry by more than {symm_tol:g}"
        )
    try:
        evals, evecs = np.linalg.eigh((arr + arr.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError(f"eigensolver did not converge: {exc}") from exc
    return HermitianSpectrum(evals[::-1].copy(), evecs[:, ::-1].copy())


def numerical_rank(m, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Count of eigenvalues strictly above ``rank_tol * lambda_max``; 0 for the zero matrix."""
    return hermitian_eig(m).retained_count(rank_tol)


def support_projector(m, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors above the rank cutoff."""
    return hermitian_eig(m).support_projector(rank_tol)


def pinv_sqrt(m, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Pseudo-inverse square root: R with R m R = support_projector(m)."""
    return hermitian_eig(m).pinv_sqrt(rank_tol)


def min_positive_eigenvalue(m, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """Smallest eigenvalue of a PSD matrix above the rank cutoff."""
    return hermitian_eig(m).min_positive(rank_tol)
