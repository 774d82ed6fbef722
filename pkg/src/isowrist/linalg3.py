"""Fixed-size 3-vector / 3x3-matrix helpers.

Vectors are numpy arrays of shape (3,), matrices of shape (3, 3). Nothing
here allocates beyond a handful of small arrays.
"""
from typing import NamedTuple

import numpy as np

from . import _kernels

DEFAULT_TOL = 1e-10


class NonSymmetric(ValueError):
    pass


class SymEig3(NamedTuple):
    values: np.ndarray   # descending
    vectors: np.ndarray  # columns are eigenvectors


def vec3(x, y, z):
    v = np.array([x, y, z], dtype=np.float64)
    if not np.isfinite(v).all():
        raise ValueError(f"non-finite vector {v}")
    return v


def as_mat3(A):
    A = np.asarray(A, dtype=np.float64)
    if A.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError("non-finite matrix entry")
    return A


def outer(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return a[:, None] * b[None, :]


def asymmetry(A):
    A = as_mat3(A)
    return float(np.abs(A - A.T).max())


def sym_eig(A, tol=DEFAULT_TOL):
    """Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi.

    Eigenvalues come back sorted largest first, with matching eigenvector
    columns. Raises NonSymmetric when max|A - A^T| exceeds ``tol``.
    """
    A = as_mat3(A)
    if asymmetry(A) > tol:
        raise NonSymmetric(f"asymmetry {asymmetry(A):.3e} exceeds {tol:.1e}")
    w, V = _kernels.jacobi_eig3(0.5 * (A + A.T))
    order = np.argsort(-w, kind="stable")
    return SymEig3(w[order], V[:, order])


def is_proper_orthogonal(A, tol=DEFAULT_TOL):
    A = as_mat3(A)
    return bool(np.linalg.norm(A.T @ A - np.eye(3)) <= tol and np.linalg.det(A) > 0)


def is_orthogonal(A, tol=DEFAULT_TOL):
    A = as_mat3(A)
    return bool(np.linalg.norm(A.T @ A - np.eye(3)) <= tol)


def normalize(v):
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def rotation_about(axis, angle):
    """Rodrigues rotation matrix for a rotation of ``angle`` radians about ``axis``."""
    k = normalize(axis)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)
