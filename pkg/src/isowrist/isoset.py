"""Point sets on the unit sphere and their isotropy.

A set {e_k} is isotropic when its second-moment tensor H = sum e_k e_k^T
is a multiple sigma^2 of the identity; then sigma^2 = n/3. Antipodal
exchanges and isometries (rotations, plane and line reflections) all
preserve this property, which is how new isotropic sets are derived from
a fundamental one.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _io
from .linalg3 import DEFAULT_TOL, is_orthogonal, outer, sym_eig

UNIT_TOL = 1e-12

SOLIDS = ("tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron")


class EmptySet(ValueError):
    pass


class NonUnitNormal(ValueError):
    pass


class NonUnitDirection(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered unit vectors, stored as a read-only (n, 3) array."""

    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64).reshape(-1, 3)
        if pts.shape[0] == 0:
            raise EmptySet("a point set needs at least one point")
        if not np.isfinite(pts).all():
            raise ValueError("non-finite coordinate in point set")
        err = np.abs(np.linalg.norm(pts, axis=1) - 1.0)
        if err.max() > UNIT_TOL:
            k = int(err.argmax())
            raise ValueError(f"point {k} has norm off unity by {err[k]:.3e}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, k):
        return self.points[k]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"PointSet(n={len(self)}, label={self.label!r})"

    def transformed(self, Q, label=None):
        return PointSet(self.points @ np.asarray(Q).T, self.label if label is None else label)

    def reordered(self, order, label=None):
        return PointSet(self.points[list(order)], self.label if label is None else label)

    def to_dict(self):
        return {"label": self.label, "points": [list(map(float, p)) for p in self.points]}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["points"], dtype=np.float64), d.get("label", ""))

    def to_json(self):
        return _io.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(_io.loads(text))


@dataclass(frozen=True, eq=False)
class IsotropyReport:
    H: np.ndarray
    eigenvalues: np.ndarray
    sigma: float
    sigma_squared: float
    condition_number: float
    isotropic: bool
    tolerance: float

    def to_dict(self):
        return {
            "H": [list(map(float, row)) for row in self.H],
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "sigma": self.sigma,
            "sigma_squared": self.sigma_squared,
            "condition_number": self.condition_number,
            "isotropic": self.isotropic,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True, eq=False)
class Isometry:
    kind: str  # "plane-reflection" | "line-reflection" | "rotation"
    matrix: np.ndarray
    axis: np.ndarray = field(default=None)  # plane normal or line direction, when meaningful

    def __post_init__(self):
        M = np.array(self.matrix, dtype=np.float64)
        if not is_orthogonal(M, 1e-12):
            raise ValueError("isometry matrix is not orthogonal")
        det = np.linalg.det(M)
        if self.kind == "plane-reflection" and det > 0:
            raise ValueError("plane reflection must have det -1")
        if self.kind in ("line-reflection", "rotation") and det < 0:
            raise ValueError(f"{self.kind} must have det +1")
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    def apply(self, S, label=None):
        return S.transformed(self.matrix, label)

    def __matmul__(self, other):
        M = self.matrix @ other.matrix
        return Isometry("rotation" if np.linalg.det(M) > 0 else "plane-reflection", M)


def second_moment(S):
    """H = sum_k e_k e_k^T."""
    if len(S) == 0:
        raise EmptySet("empty point set")
    P = S.points
    H = np.zeros((3, 3))
    for e in P:
        H += outer(e, e)
    return H


def isotropy_report(H, tol=DEFAULT_TOL):
    """Certificate for a Gram/second-moment matrix H (shared with the wrist module).

    Singular values of the underlying axis matrix are sqrt(eig(H)), so the
    reported condition number is sqrt(lam_max / lam_min). ``isotropic``
    requires lam_max / lam_min - 1 <= tol.
    """
    lam = sym_eig(H, tol=max(tol, 1e-12)).values
    trace = float(np.trace(H))
    sigma2 = trace / 3.0
    lmax, lmin = float(lam[0]), float(lam[-1])
    if lmin <= tol:
        cond = float("inf")
        iso = False
    else:
        ratio = lmax / lmin
        cond = float(np.sqrt(ratio))
        iso = bool(ratio - 1.0 <= tol)
    return IsotropyReport(
        H=np.array(H, dtype=np.float64),
        eigenvalues=lam,
        sigma=float(np.sqrt(max(sigma2, 0.0))),
        sigma_squared=sigma2,
        condition_number=cond,
        isotropic=iso,
        tolerance=float(tol),
    )


def certify_isotropy(S, tol=DEFAULT_TOL):
    return isotropy_report(second_moment(S), tol)


def _unit_rows(a):
    a = np.asarray(a, dtype=np.float64)
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def _tetrahedron():
    r2, r6 = np.sqrt(2.0), np.sqrt(6.0)
    return np.array([
        [1.0, 0.0, 0.0],
        [-1 / 3, -2 * r2 / 3, 0.0],
        [-1 / 3, r2 / 3, r6 / 3],
        [-1 / 3, r2 / 3, -r6 / 3],
    ])


def _cyclic(rows):
    out = []
    for r in rows:
        a, b, c = r
        out += [(a, b, c), (c, a, b), (b, c, a)]
    return out


def platonic(solid):
    """Vertices of a Platonic solid inscribed in the unit sphere.

    The tetrahedron has one vertex on +x and one in the x-y plane; the
    other solids use the usual axis-aligned inscriptions.
    """
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    if solid == "tetrahedron":
        pts = _tetrahedron()
    elif solid == "cube":
        pts = _unit_rows(list(product((1.0, -1.0), repeat=3)))
    elif solid == "octahedron":
        pts = np.vstack([np.eye(3), -np.eye(3)])
    elif solid == "icosahedron":
        pts = _unit_rows(_cyclic([(0.0, sa, sb * phi) for sa in (1, -1) for sb in (1, -1)]))
    elif solid == "dodecahedron":
        cube = list(product((1.0, -1.0), repeat=3))
        rest = _cyclic([(0.0, sa / phi, sb * phi) for sa in (1, -1) for sb in (1, -1)])
        pts = _unit_rows(cube + rest)
    else:
        raise ValueError(f"unknown solid {solid!r}; expected one of {', '.join(SOLIDS)}")
    return PointSet(pts, solid)


def antipodal_exchange(S, indices, label=None):
    """Replace the members at ``indices`` (0-based) by their antipodes."""
    P = S.points.copy()
    n = len(S)
    for k in indices:
        if not -n <= k < n:
            raise IndexOutOfRange(f"index {k} out of range for {n} points")
        P[k] = -P[k]
    return PointSet(P, S.label if label is None else label)


def _check_unit(v, exc, what, tol=DEFAULT_TOL):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > tol:
        raise exc(f"{what} must be a unit 3-vector, got {v}")
    return v


def plane_reflection(normal):
    n = _check_unit(normal, NonUnitNormal, "plane normal")
    return Isometry("plane-reflection", np.eye(3) - 2.0 * outer(n, n), n)


def reflect_plane(S, normal, label=None):
    return plane_reflection(normal).apply(S, label)


def reflect_line(e):
    """Reflection about the line through the origin along e: L = 2 e e^T - 1.

    It is a half-turn about e, so it comes back as a rotation.
    """
    e = _check_unit(e, NonUnitDirection, "line direction")
    return Isometry("rotation", 2.0 * outer(e, e) - np.eye(3), e)


def sets_equal(A, B, tol=DEFAULT_TOL):
    """Order-sensitive equality: same size and |a_k - b_k|_inf <= tol for each k."""
    if len(A) != len(B):
        return False
    return bool(np.abs(A.points - B.points).max() <= tol)


def sets_equal_unordered(A, B, tol=DEFAULT_TOL):
    """Multiset equality under the same per-point tolerance."""
    if len(A) != len(B):
        return False
    free = list(range(len(B)))
    for a in A.points:
        for j in free:
            if np.abs(a - B.points[j]).max() <= tol:
                free.remove(j)
                break
        else:
            return False
    return True


def tetrahedron():
    """The fundamental four-point set used throughout (e_1 on +x, e_2 in the x-y plane)."""
    return PointSet(_tetrahedron(), "tetrahedron")
