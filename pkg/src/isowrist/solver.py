"""Isotropy system for four unit axes and its 32 real roots.

With e_1 = (1, 0, 0), e_2 = (c, s, 0), e_3 = (x, y, z), e_4 = (u, v, w) the
condition sum e_k e_k^T = (4/3) 1 plus unit norms of e_2, e_3 gives eight
quadratics in eight unknowns. Eliminating down to u leaves
u (3u - 1)(3u + 1) = 0 with u != 0, after which every remaining unknown
is fixed up to sign:

    u = +-1/3,  z = +-sqrt(6) u,  v = +-sqrt(2) u,  s = +-2 sqrt(2)/3,
    w = +-(1/3) sqrt(6 (2 - 9 u^2)),

and x, y, c follow by back-substitution. The 2^5 sign branches give the
32 roots. :func:`oracle_solve` finds the same roots with no knowledge of
the elimination, by multistart damped Newton.
"""
from dataclasses import dataclass, field
from itertools import product
import math

import numpy as np

from . import _io, _kernels
from .isoset import PointSet, sets_equal

SIGMA2 = 4.0 / 3.0
BEZOUT = 256
BKK = 192
FIELDS = ("c", "s", "x", "y", "z", "u", "v", "w")
BRANCH_ORDER = ("u", "z", "v", "s", "w")
NONVANISHING = 0.1

# Reference numbering of the 32 roots: signs of (c, s, x, y, z, u, v, w).
# Rows 25-32 carry the z sign that makes x = -wu/z and y = -vw/z hold; with
# it, reflecting in the x-y / x-z planes permutes the ids consistently.
CATALOGUE = (
    "+---++++",  # 1
    "+---+---",  # 2
    "+----++-",  # 3
    "+------+",  # 4
    "+-+++++-",  # 5
    "+-+++--+",  # 6
    "+-++-+++",  # 7
    "+-++----",  # 8
    "++-+++-+",  # 9
    "++-++-+-",  # 10
    "++-+-+--",  # 11
    "++-+--++",  # 12
    "+++-++--",  # 13
    "+++-+-++",  # 14
    "+++--+-+",  # 15
    "+++---+-",  # 16
    "---+++-+",  # 17
    "---++-+-",  # 18
    "---+--++",  # 19
    "---+-+--",  # 20
    "--+-++--",  # 21
    "--+-+-++",  # 22
    "--+---+-",  # 23
    "--+--+-+",  # 24
    "-+---++-",  # 25
    "-+-----+",  # 26
    "-+--+---",  # 27
    "-+--++++",  # 28
    "-+++----",  # 29
    "-+++-+++",  # 30
    "-++++--+",  # 31
    "-++++++-",  # 32
)
_CATALOGUE_ID = {p: i + 1 for i, p in enumerate(CATALOGUE)}


class BranchInconsistent(RuntimeError):
    pass


class NoConvergence(RuntimeError):
    pass


class ResidualTooLarge(ValueError):
    pass


def equations(values):
    """Signed left-minus-right sides of the eight equations, in the order
    H_xx, H_yy, H_zz, H_xy, H_yz, H_xz, |e_2|^2, |e_3|^2."""
    return _kernels.system_numpy(np.asarray(values, dtype=np.float64).reshape(1, 8))[0]


def _sign_char(x):
    return "+" if x > 0 else "-"


def sign_string(values):
    return "".join(_sign_char(v) for v in values)


def branch_signs(values):
    """The five +- choices (u, z, v, s, w) in the closed-form branch formulas."""
    c, s, x, y, z, u, v, w = values
    su = math.copysign(1.0, u)
    return "".join(_sign_char(t) for t in (su, math.copysign(1.0, z) * su, math.copysign(1.0, v) * su, s, w))


@dataclass(frozen=True)
class SolutionRecord:
    c: float
    s: float
    x: float
    y: float
    z: float
    u: float
    v: float
    w: float
    id: int = 0
    signs: str = ""
    residual: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "residual", float(np.abs(equations(self.values)).max()))

    @property
    def values(self):
        return np.array([self.c, self.s, self.x, self.y, self.z, self.u, self.v, self.w])

    @classmethod
    def from_values(cls, values, id=0, signs=None):
        vals = [float(t) for t in values]
        return cls(*vals, id=id, signs=branch_signs(vals) if signs is None else signs)

    def to_dict(self):
        d = {"id": self.id}
        d.update({k: float(getattr(self, k)) for k in FIELDS})
        d["signs"] = self.signs
        d["residual"] = self.residual
        return d


@dataclass
class SolutionSet:
    solutions: list
    bezout: int = BEZOUT
    bkk: int = BKK

    @property
    def actual(self):
        return len(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def by_id(self, sid):
        for r in self.solutions:
            if r.id == sid:
                return r
        raise KeyError(f"no solution with id {sid}")

    @property
    def ids(self):
        return [r.id for r in self.solutions]

    def array(self):
        return np.array([r.values for r in self.solutions]).reshape(-1, 8)

    def to_dict(self):
        return {"bezout": self.bezout, "bkk": self.bkk, "solutions": [r.to_dict() for r in self.solutions]}

    def to_json(self):
        return _io.dumps(self.to_dict())

    def to_csv(self):
        header = ["id", *FIELDS, "signs", "residual"]
        rows = [[r.id, *[float(getattr(r, k)) for k in FIELDS], r.signs, r.residual] for r in self.solutions]
        return _io.csv_text(header, rows)

    @classmethod
    def from_dict(cls, d):
        sols = [SolutionRecord(*[float(s[k]) for k in FIELDS], id=int(s["id"]), signs=s["signs"]) for s in d["solutions"]]
        return cls(sols, d.get("bezout", BEZOUT), d.get("bkk", BKK))


def residual(r):
    vals = r.values if isinstance(r, SolutionRecord) else np.asarray(r, dtype=np.float64)
    return float(np.abs(equations(vals)).max())


def monovariate(u):
    return u * (3.0 * u - 1.0) * (3.0 * u + 1.0)


def catalogue_id(values):
    """Reference id of a root from its sign pattern, 0 if the pattern is unknown."""
    return _CATALOGUE_ID.get(sign_string(values), 0)


def solve_branch(su, sz, sv, ss, sw):
    """Closed-form root for one choice of the five signs (each +1 or -1)."""
    u = su / 3.0
    z = sz * math.sqrt(6.0) * u
    v = sv * math.sqrt(2.0) * u
    s = ss * 2.0 * math.sqrt(2.0) / 3.0
    w = sw * math.sqrt(6.0 * (2.0 - 9.0 * u * u)) / 3.0
    # back-substitution divides by z and s z; both are fixed nonzero magnitudes
    if abs(z) < NONVANISHING or abs(s * z) < NONVANISHING**2:
        raise BranchInconsistent(f"vanishing divisor on branch {(su, sz, sv, ss, sw)}")
    x = -w * u / z
    y = -v * w / z
    c = u * (w * y - v * z) / (s * z)
    return (c, s, x, y, z, u, v, w)


def enumerate_closed_form(tol=1e-12):
    """All 32 roots from the sign branches, numbered by :data:`CATALOGUE`."""
    recs = []
    for choice in product((1.0, -1.0), repeat=5):
        vals = solve_branch(*choice)
        signs = "".join(_sign_char(t) for t in choice)
        rec = SolutionRecord(*vals, id=catalogue_id(vals), signs=signs)
        if rec.residual > tol:
            raise BranchInconsistent(f"branch {signs} has residual {rec.residual:.3e}")
        if not assert_nonvanishing(rec):
            raise BranchInconsistent(f"branch {signs} has a vanishing unknown")
        if abs(monovariate(rec.u)) > tol:
            raise BranchInconsistent(f"branch {signs}: u = {rec.u} is not a root of u(3u-1)(3u+1)")
        if rec.id == 0:
            raise BranchInconsistent(f"branch {signs} has no catalogue entry")
        recs.append(rec)
    recs.sort(key=lambda r: r.id)
    if len({r.id for r in recs}) != 32:
        raise BranchInconsistent("sign branches do not map one-to-one onto catalogue ids")
    return SolutionSet(recs)


def assert_nonvanishing(r, threshold=NONVANISHING):
    return bool(np.all(np.abs(r.values) >= threshold))


def branch_identity_residuals(r):
    c, s, x, y, z, u, v, w = r.values
    return {
        "z2=6u2": abs(z * z - 6 * u * u),
        "v2=2u2": abs(v * v - 2 * u * u),
        "s2=8/9": abs(s * s - 8 / 9),
        "w2=(2/3)(2-9u2)": abs(w * w - (2 / 3) * (2 - 9 * u * u)),
        # w and s in their pre-substitution forms
        "w=sqrt(12-9z2)/3": abs(abs(w) - math.sqrt(12 - 9 * z * z) / 3),
        "s=2sqrt(3z2-3v2)/(3z)": abs(abs(s) - 2 * math.sqrt(max(3 * z * z - 3 * v * v, 0.0)) / (3 * abs(z))),
        "v=sqrt(z2-4u2)": abs(abs(v) - math.sqrt(max(z * z - 4 * u * u, 0.0))),
        "e4 unit": abs(u * u + v * v + w * w - 1.0),
    }


def elimination_residuals(r):
    """Intermediate identities of the elimination, each expected to vanish."""
    c, s, x, y, z, u, v, w = r.values
    return {
        "x=-wu/z": abs(x + w * u / z),
        "y=-vw/z": abs(y + v * w / z),
        "c=u(wy-vz)/(sz)": abs(c - u * (w * y - v * z) / (s * z)),
        "a": abs(w**2 * u**2 + v**2 * w**2 + z**4 - z**2),
        "b": abs(3 * s**2 * z**2 + 3 * v**2 * w**2 + 3 * v**2 * z**2 - 4 * z**2),
        "c": abs(3 * u**2 * w**4 * v**2 + 6 * u**2 * w**2 * v**2 * z**2 + 3 * u**2 * v**2 * z**4
                 + 3 * w**2 * u**2 * s**2 * z**2 + 3 * u**2 * z**4 * s**2 - s**2 * z**4),
        "d": abs(u**2 * w**4 * v**2 + 2 * u**2 * w**2 * v**2 * z**2 + u**2 * v**2 * z**4
                 + s**4 * z**4 - s**2 * z**4),
        "e": abs(3 * z**2 + 3 * w**2 - 4),
    }


def cluster(points, radius):
    """Greedy clustering of rows in lexicographic order; returns lists of row indices."""
    if len(points) == 0:
        return []
    order = np.lexsort(points.T[::-1])
    groups = []
    reps = []
    for i in order:
        p = points[i]
        for g, rep in zip(groups, reps):
            if np.abs(p - rep).max() <= radius:
                g.append(i)
                break
        else:
            groups.append([i])
            reps.append(p)
    return groups


def oracle_solve(seed=1, starts=5000, backend=None, converge_tol=1e-10, radius=1e-6):
    """Distinct real roots found by damped Newton from uniform starts in [-1.2, 1.2]^8.

    ``backend`` is "numba", "numpy" or None (environment default).
    """
    if starts < 1000:
        raise ValueError(f"starts must be >= 1000, got {starts}")
    newton = {
        None: _kernels.newton_batch,
        "numba": _kernels.newton_batch_numba,
        "numpy": _kernels.newton_batch_numpy,
    }[backend]
    X0 = np.random.default_rng(seed).uniform(-1.2, 1.2, size=(starts, 8))
    X, res, ok = newton(X0, tol=converge_tol)
    if not ok.any():
        raise NoConvergence(f"none of {starts} starts converged")
    roots = X[ok]
    # a few undamped-ish steps to push converged roots to rounding level
    roots, _, _ = newton(roots, max_iter=4, tol=1e-300, polish=0)
    groups = cluster(roots, radius)
    recs = []
    for g in groups:
        members = roots[g]
        rr = np.abs(_kernels.system_numpy(members)).max(axis=1)
        best = members[int(np.argmin(rr))]
        recs.append(SolutionRecord.from_values(best, id=catalogue_id(best)))
    recs.sort(key=lambda r: (r.id, tuple(r.values)))
    return SolutionSet(recs)


def match_solution_sets(a, b, tol=1e-8):
    """Pair records of ``a`` with records of ``b`` within ``tol`` (max-norm).

    Returns (all_matched, pairs) where pairs is a list of (index_a, index_b)
    and all_matched is True only for a perfect one-to-one matching.
    """
    A, B = a.array(), b.array()
    pairs = []
    used = set()
    for i, p in enumerate(A):
        hits = [j for j in range(len(B)) if np.abs(B[j] - p).max() <= tol]
        if len(hits) == 1 and hits[0] not in used:
            pairs.append((i, hits[0]))
            used.add(hits[0])
    ok = len(A) == len(B) == len(pairs)
    return ok, pairs


def record_to_pointset(r, tol=1e-10):
    if r.residual > tol:
        raise ResidualTooLarge(f"residual {r.residual:.3e} exceeds {tol:.1e}")
    P = np.array([[1.0, 0.0, 0.0], [r.c, r.s, 0.0], [r.x, r.y, r.z], [r.u, r.v, r.w]])
    # the system holds exactly only in exact arithmetic; renormalize rows
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    return PointSet(P, f"solution {r.id}" if r.id else "solution")


def pointset_to_record(S, tol=1e-10):
    """Inverse of :func:`record_to_pointset` for sets in the normalized frame."""
    P = S.points
    if len(S) != 4 or np.abs(P[0] - [1, 0, 0]).max() > tol or abs(P[1, 2]) > tol:
        raise ValueError("point set is not in the frame e_1 = +x, e_2 in the x-y plane")
    vals = (P[1, 0], P[1, 1], *P[2], *P[3])
    return SolutionRecord.from_values(vals, id=catalogue_id(vals))


def identify(S, solutions, tol=1e-10):
    """Id of the solution whose point set equals ``S`` in order, else None."""
    for r in solutions:
        if sets_equal(record_to_pointset(r), S, tol):
            return r.id
    return None
