"""
Saab transform over 24-D octant descriptors.

Row 0 is the constant DC kernel 1/sqrt(24). The remaining 23 AC kernels are the
eigenvectors, by descending eigenvalue, of the second-moment matrix of the
DC-removed descriptors restricted to the subspace orthogonal to DC. No mean is
subtracted and no bias is added: the transform is one orthonormal matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.linalg import null_space

from descriptor.octant import DESCRIPTOR_DIM
from errors import DegenerateTrainingError, InvalidInputError
from logging_config import get_logger

logger = get_logger(__name__)

RANK_TOL = 1e-10
SIGN_TOL = 1e-12


def dc_kernel(dim: int = DESCRIPTOR_DIM) -> np.ndarray:
    return np.full(dim, 1.0 / np.sqrt(dim))


@dataclass(frozen=True)
class SaabTransform:
    matrix: np.ndarray      # (24, 24), row 0 = DC
    energies: np.ndarray    # (24,), DC energy first

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SaabTransform):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix) and np.array_equal(self.energies, other.energies)


def _fix_sign(vectors: np.ndarray) -> np.ndarray:
    """Make the first component with |v| > SIGN_TOL positive, row by row."""
    out = vectors.copy()
    for row in out:
        nz = np.flatnonzero(np.abs(row) > SIGN_TOL)
        if nz.size and row[nz[0]] < 0:
            row *= -1.0
    return out


class SaabAccumulator:
    """Streaming second-moment accumulation so descriptors can arrive in batches."""

    def __init__(self, dim: int = DESCRIPTOR_DIM):
        self.dim = dim
        self.dc = dc_kernel(dim)
        self.moment = np.zeros((dim, dim))
        self.dc_energy = 0.0
        self.total_energy = 0.0
        self.count = 0

    def update(self, batch: npt.ArrayLike) -> "SaabAccumulator":
        x = np.asarray(batch, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.dim:
            raise InvalidInputError(f"Expected descriptors of width {self.dim}, got shape {x.shape}")
        dc_resp = x @ self.dc
        removed = x - dc_resp[:, None] * self.dc[None, :]
        self.moment += removed.T @ removed
        self.dc_energy += float(dc_resp @ dc_resp)
        self.total_energy += float(np.einsum("ij,ij->", x, x))
        self.count += x.shape[0]
        return self

    def finalize(self) -> SaabTransform:
        n_ac = self.dim - 1
        if self.count < self.dim:
            raise DegenerateTrainingError(
                f"Saab needs at least {self.dim} descriptors, got {self.count}", rank=None
            )
        second_moment = self.moment / self.count
        basis = null_space(self.dc[None, :])            # (24, 23), orthogonal to DC
        reduced = basis.T @ second_moment @ basis
        reduced = 0.5 * (reduced + reduced.T)
        evals, evecs = np.linalg.eigh(reduced)
        evals, evecs = evals[::-1], evecs[:, ::-1]

        # eigenvalues at rounding level of the raw energy are not rank
        top = float(evals[0]) if evals.size else 0.0
        floor = self.dim * np.finfo(np.float64).eps * self.total_energy / self.count
        tol = max(RANK_TOL * top, floor)
        rank = int(np.sum(evals > tol))
        if rank < n_ac:
            raise DegenerateTrainingError(
                f"DC-removed descriptors span rank {rank}, Saab needs {n_ac}", rank=rank
            )

        ac = _fix_sign((basis @ evecs).T)
        matrix = np.vstack([self.dc[None, :], ac])
        energies = np.concatenate([[self.dc_energy / self.count], np.clip(evals, 0.0, None)])
        logger.info(
            f"Saab fitted on {self.count} descriptors; DC energy {energies[0]:.4g}, "
            f"leading AC energy {energies[1]:.4g}"
        )
        return SaabTransform(matrix=matrix, energies=energies)


def fit_saab(descriptors: npt.ArrayLike) -> SaabTransform:
    return SaabAccumulator().update(descriptors).finalize()


def apply_saab(t: SaabTransform, d: npt.ArrayLike) -> np.ndarray:
    """Filter responses for one descriptor (24,) or a batch (M, 24)."""
    x = np.asarray(d, dtype=np.float64)
    if x.shape[-1] != t.dim:
        raise InvalidInputError(f"Descriptor width {x.shape[-1]} does not match transform width {t.dim}")
    return x @ t.matrix.T


def inverse_saab(t: SaabTransform, s: npt.ArrayLike) -> np.ndarray:
    return np.asarray(s, dtype=np.float64) @ t.matrix
