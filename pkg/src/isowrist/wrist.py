"""Serial spherical wrists built from axis sets.

The Jacobian of an n-revolute spherical wrist stacks the unit axis
directions e_k as rows. The wrist is isotropic at a posture when
J^T J = sum e_k e_k^T is a multiple of the identity; since that sum does
not depend on the order of the axes, every ordering of an isotropic set
is an isotropic wrist. Different orderings can still be different
mechanisms, which is what the DH extraction and deduplication sort out.
"""
from dataclasses import dataclass, field
from itertools import permutations
import math

import numpy as np

from . import _io
from .isoset import PointSet, isotropy_report, antipodal_exchange, plane_reflection, reflect_line
from .linalg3 import DEFAULT_TOL
from .solver import identify, record_to_pointset

ANGLE_TOL = 0.01  # degrees
ALPHA_ACUTE = math.degrees(math.acos(1.0 / 3.0))    # 70.53
ALPHA_OBTUSE = math.degrees(math.acos(-1.0 / 3.0))  # 109.47


class LengthMismatch(ValueError):
    pass


class WrongCardinality(ValueError):
    pass


class ParallelAxes(ValueError):
    pass


class TooFewJoints(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WristJacobian:
    rows: np.ndarray  # (n, 3), row k is e_k

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def matrix(self):
        return self.rows


@dataclass(frozen=True)
class TwistRates:
    joint_rates: tuple
    angular_velocity: tuple


@dataclass
class WristArchitecture:
    """Twist angles alpha_1..alpha_3 and the posture angles theta_2, theta_3, in degrees.

    theta_1 and theta_4 do not affect isotropy and are not stored; neither
    is alpha_4, which depends on the choice of end-effector frame.
    """

    alpha: tuple
    theta2: float
    theta3: float
    sources: list = field(default_factory=list)  # [(solution_id, chain)], chain 1-based
    reversal_class: int = None  # index of the class of the reversed chain, if computed

    def canonical(self):
        t2, t3 = self.theta2, self.theta3
        if t2 < -ANGLE_TOL or (abs(t2) <= ANGLE_TOL and t3 < -ANGLE_TOL):
            t2, t3 = -t2, -t3
        return WristArchitecture(tuple(self.alpha), _clean(t2), _clean(t3), list(self.sources), self.reversal_class)

    def key(self):
        return (*self.alpha, self.theta2, self.theta3)

    def equivalent(self, other, tol=ANGLE_TOL):
        if max(abs(a - b) for a, b in zip(self.alpha, other.alpha)) > tol:
            return False
        direct = abs(self.theta2 - other.theta2) <= tol and abs(self.theta3 - other.theta3) <= tol
        flipped = abs(self.theta2 + other.theta2) <= tol and abs(self.theta3 + other.theta3) <= tol
        return direct or flipped

    def is_isotropic_4r_shape(self, tol=ANGLE_TOL):
        ok_alpha = all(min(abs(a - ALPHA_ACUTE), abs(a - ALPHA_OBTUSE)) <= tol for a in self.alpha)
        ok_theta = all(min(abs(abs(t) - 60.0), abs(abs(t) - 120.0)) <= tol for t in (self.theta2, self.theta3))
        return ok_alpha and ok_theta

    def to_dict(self):
        d = {
            "alpha_deg": [float(a) for a in self.alpha],
            "theta2_deg": float(self.theta2),
            "theta3_deg": float(self.theta3),
            "sources": [{"solution_id": sid, "chain": list(chain)} for sid, chain in self.sources],
        }
        if self.reversal_class is not None:
            d["reversal_class"] = self.reversal_class
        return d


def _clean(t):
    # avoid "-0" and +-180 ambiguity in printed angles
    if abs(t) < 1e-12:
        return 0.0
    if abs(abs(t) - 180.0) < 1e-9:
        return 180.0
    return t


def jacobian(S):
    """Row-stacked axis matrix. Empty sets cannot occur: PointSet rejects them."""
    return WristJacobian(np.array(S.points))


def angular_velocity(J, rates):
    """omega = sum_k rate_k e_k, i.e. J^T times the joint-rate vector."""
    rates = np.asarray(rates, dtype=np.float64).ravel()
    if rates.shape[0] != J.n:
        raise LengthMismatch(f"{rates.shape[0]} rates for {J.n} joints")
    return rates @ J.rows


def twist_rates(J, rates):
    return TwistRates(tuple(map(float, rates)), tuple(map(float, angular_velocity(J, rates))))


def wrist_isotropy(J, tol=DEFAULT_TOL):
    if J.n < 3:
        raise TooFewJoints(f"a spherical wrist needs at least 3 joints, got {J.n}")
    return isotropy_report(J.rows.T @ J.rows, tol)


def chain_orders(n=4, fix_first=True):
    """Axis orderings (0-based), first axis kept in place when ``fix_first``."""
    if fix_first:
        return [(0, *p) for p in permutations(range(1, n))]
    return list(permutations(range(n)))


def enumerate_chains(S, fix_first=True):
    """The 3! orderings of P_2..P_4 behind P_1 (4! when ``fix_first`` is False)."""
    if len(S) != 4:
        raise WrongCardinality(f"expected 4 axes, got {len(S)}")
    out = []
    for order in chain_orders(4, fix_first):
        tag = "-".join(str(k + 1) for k in order)
        out.append(S.reordered(order, label=f"{S.label} chain {tag}".strip()))
    return out


def _unit(v):
    return v / np.linalg.norm(v)


def dh_extract(chain, source=None):
    """Twist angles between consecutive axes and dihedral angles at axes 2 and 3.

    theta_i is the angle about e_i, right-hand rule, from the plane of
    (e_{i-1}, e_i) to the plane of (e_i, e_{i+1}).
    """
    E = chain.points
    if len(E) != 4:
        raise WrongCardinality(f"expected 4 axes, got {len(E)}")
    for i in range(3):
        if abs(E[i] @ E[i + 1]) >= 1.0 - 1e-9:
            raise ParallelAxes(f"axes {i + 1} and {i + 2} are parallel")
    alpha = tuple(math.degrees(math.acos(max(-1.0, min(1.0, float(E[i] @ E[i + 1]))))) for i in range(3))
    theta = []
    for i in (1, 2):
        na = _unit(np.cross(E[i - 1], E[i]))
        nb = _unit(np.cross(E[i], E[i + 1]))
        theta.append(math.degrees(math.atan2(float(np.cross(na, nb) @ E[i]), float(na @ nb))))
    return WristArchitecture(alpha, theta[0], theta[1], [source] if source else [])


def dedupe_architectures(candidates, tol=ANGLE_TOL):
    """One canonical representative per equivalence class, sorted by (alpha, theta).

    Two wrists are the same when their twist angles agree and their
    (theta_2, theta_3) agree directly or after flipping both signs.
    Chain reversal is not an equivalence.
    """
    classes = []
    for cand in sorted((c.canonical() for c in candidates), key=lambda a: a.key()):
        for cl in classes:
            if cl.equivalent(cand, tol):
                cl.sources.extend(s for s in cand.sources if s not in cl.sources)
                break
        else:
            classes.append(cand)
    return sorted(classes, key=lambda a: a.key())


def find_class(arch, classes, tol=ANGLE_TOL):
    for k, cl in enumerate(classes):
        if cl.equivalent(arch, tol):
            return k
    return None


def candidates_from(solutions, ids=None):
    recs = [r for r in solutions if ids is None or r.id in ids]
    out = []
    for r in recs:
        S = record_to_pointset(r)
        for order, chain in zip(chain_orders(), enumerate_chains(S)):
            out.append(dh_extract(chain, (r.id, tuple(k + 1 for k in order))))
    return out


def classify(solutions, ids=None, tol=ANGLE_TOL):
    """Full pipeline: solutions -> 6 chains each -> DH -> distinct architectures.

    Each class also records which class its reversed chain falls into.
    """
    classes = dedupe_architectures(candidates_from(solutions, ids), tol)
    by_id = {r.id: r for r in solutions}
    for cl in classes:
        sid, chain = cl.sources[0]
        S = record_to_pointset(by_id[sid])
        rev = S.reordered([k - 1 for k in reversed(chain)])
        cl.reversal_class = find_class(dh_extract(rev).canonical(), classes, tol)
    return classes


# exchanges of P_2, P_3, P_4 in the conventional column order
EXCHANGES = ((2,), (3,), (4,), (2, 3), (2, 4), (3, 4), (2, 3, 4))

REFLECTION_PLANES = {
    "x-y": np.array([0.0, 0.0, 1.0]),
    "x-z": np.array([0.0, 1.0, 0.0]),
}


def antipodal_map(solutions, base_id=18, tol=1e-10):
    """Solution id reached by each antipodal exchange of set ``base_id``."""
    base = record_to_pointset(solutions.by_id(base_id))
    out = {}
    for ex in EXCHANGES:
        S = antipodal_exchange(base, [k - 1 for k in ex])
        out["P" + "P".join(map(str, ex))] = identify(S, solutions, tol)
    return out


def reflection_map(solutions, ids, tol=1e-10):
    """Images of each set under the x-y, x-z and combined plane reflections.

    The combined entry uses the half-turn about x, which equals the two
    reflections composed.
    """
    half_turn = reflect_line(np.array([1.0, 0.0, 0.0]))
    rows = {"x-y": [], "x-z": [], "x-z and x-y": []}
    for sid in ids:
        S = record_to_pointset(solutions.by_id(sid))
        for plane, n in REFLECTION_PLANES.items():
            rows[plane].append(identify(plane_reflection(n).apply(S), solutions, tol))
        rows["x-z and x-y"].append(identify(half_turn.apply(S), solutions, tol))
    return rows


def architectures_csv(classes):
    """Rows of (class, i, alpha_i, theta_i); free or undefined entries as text."""
    rows = []
    for k, a in enumerate(classes, start=1):
        rows.append([k, 1, float(a.alpha[0]), "theta_1"])
        rows.append([k, 2, float(a.alpha[1]), float(a.theta2)])
        rows.append([k, 3, float(a.alpha[2]), float(a.theta3)])
        rows.append([k, 4, "*", "theta_4"])
    return _io.csv_text(["class", "i", "alpha_deg", "theta_deg"], rows)
