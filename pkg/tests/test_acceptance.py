"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the pytest terminal summary
and printed with -s) before asserting. Run alone with

    pytest tests/test_acceptance.py -v
"""
import json
import math
import time

import numpy as np
import pytest

from isowrist.cli import main
from isowrist.isoset import (
    SOLIDS,
    antipodal_exchange,
    certify_isotropy,
    plane_reflection,
    platonic,
    reflect_line,
    second_moment,
    PointSet,
    sets_equal,
    tetrahedron,
)
from isowrist.linalg3 import is_proper_orthogonal
from isowrist.solver import enumerate_closed_form, identify, oracle_solve, match_solution_sets, record_to_pointset
from isowrist.wrist import ALPHA_ACUTE, ALPHA_OBTUSE, classify, jacobian, reflection_map, wrist_isotropy

from conftest import ACCEPTANCE_RESULTS, EQ2A, random_rotation, random_unit_vectors

HEADER_SETS = (18, 10, 23, 17, 16, 24, 9, 15)


def record(n, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    return ok


def test_criterion_1_solution_count(tmp_path):
    out = tmp_path / "solve.json"
    t0 = time.perf_counter()
    code = main(["solve", "--format", "json", "--output", str(out)])
    dt = time.perf_counter() - t0
    doc = json.loads(out.read_text())
    sols = enumerate_closed_form()
    worst = max(r.residual for r in sols)
    ok = code == 0 and len(doc["solutions"]) == 32 and sols.actual == 32 and worst <= 1e-12 and dt < 1.0
    assert record(1, "32 solutions, residual <= 1e-12, < 1 s", ok,
                  f"n={len(doc['solutions'])}, max residual {worst:.1e}, {dt:.3f} s")


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_criterion_2_oracle_concordance(tmp_path, seed):
    out = tmp_path / "verify.json"
    t0 = time.perf_counter()
    code = main(["verify", "--seed", str(seed), "--starts", "5000", "--output", str(out)])
    dt = time.perf_counter() - t0
    doc = json.loads(out.read_text())
    found = oracle_solve(seed, 5000)
    matched, pairs = match_solution_sets(found, enumerate_closed_form(), tol=1e-8)
    ok = (code == 0 and doc["oracle"] == 32 and doc["all_matched"] and found.actual == 32
          and matched and len(pairs) == 32 and dt < 30.0
          and (doc["bezout"], doc["bkk"]) == (256, 192))
    assert record(2, f"oracle seed {seed}: 32 roots matched at 1e-8, < 30 s", ok,
                  f"{found.actual} roots, {len(pairs)} matched, {dt:.2f} s")


def test_criterion_3_coordinate_magnitudes():
    r2, r6 = math.sqrt(2), math.sqrt(6)
    want = np.array([1 / 3, 2 * r2 / 3, 1 / 3, r2 / 3, r6 / 3, 1 / 3, r2 / 3, r6 / 3])
    sols = enumerate_closed_form()
    err = max(np.abs(np.abs(r.values) - want).max() for r in sols)
    res = max(r.residual for r in sols)
    ok = err <= 1e-13 and res <= 1e-12
    assert record(3, "coordinate magnitudes within 1e-13", ok, f"max deviation {err:.1e}")


def test_criterion_4_fundamental_set():
    S18 = record_to_pointset(enumerate_closed_form().by_id(18))
    err = float(np.abs(S18.points - EQ2A).max())
    ok = sets_equal(S18, PointSet(EQ2A), 1e-12)
    assert record(4, "solution 18 is the fundamental tetrahedron (ordered, 1e-12)", ok, f"max deviation {err:.1e}")


def test_criterion_5_antipodal_map():
    sols = enumerate_closed_form()
    base = record_to_pointset(sols.by_id(18))
    exchanges = [(2,), (3,), (4,), (2, 3), (2, 4), (3, 4), (2, 3, 4)]
    expected = [10, 23, 17, 16, 24, 9, 15]
    got = [identify(antipodal_exchange(base, [k - 1 for k in ex]), sols, 1e-10) for ex in exchanges]
    ok = got == expected
    assert record(5, "antipodal exchanges of #18 -> 10, 23, 17, 16, 24, 9, 15", ok,
                  f"computed {got}")


def test_criterion_6_reflection_map():
    sols = enumerate_closed_form()
    rmap = reflection_map(sols, HEADER_SETS, 1e-10)
    want_xy = [19, 12, 22, 20, 14, 21, 11, 13]
    want_xz = [27, 2, 29, 28, 8, 30, 1, 7]
    L = reflect_line(np.array([1.0, 0.0, 0.0]))
    xy, xz = plane_reflection(np.array([0.0, 0.0, 1.0])), plane_reflection(np.array([0.0, 1.0, 0.0]))
    comp_err = 0.0
    for sid in HEADER_SETS:
        S = record_to_pointset(sols.by_id(sid))
        both = xy.apply(xz.apply(S))
        comp_err = max(comp_err, float(np.abs(both.points - L.apply(S).points).max()))
    ok = rmap["x-y"] == want_xy and rmap["x-z"] == want_xz and comp_err <= 1e-14
    assert record(6, "x-y / x-z reflection maps; composition = half-turn about x (1e-14)", ok,
                  f"x-y {rmap['x-y']}, x-z {rmap['x-z']}, composition error {comp_err:.1e}")


def test_criterion_7_classification():
    sols = enumerate_closed_form()
    t0 = time.perf_counter()
    classes = classify(sols)
    dt = time.perf_counter() - t0
    alpha_ok = all(min(abs(a - ALPHA_ACUTE), abs(a - ALPHA_OBTUSE)) <= 0.01 for c in classes for a in c.alpha)
    alpha_ok &= abs(ALPHA_ACUTE - 70.53) <= 0.01 and abs(ALPHA_OBTUSE - 109.47) <= 0.01
    theta_ok = all(min(abs(abs(t) - 60), abs(abs(t) - 120)) <= 0.01 for c in classes for t in (c.theta2, c.theta3))
    ok = len(classes) == 8 and alpha_ok and theta_ok and dt < 1.0
    assert record(7, "8 architectures, alpha in {70.53, 109.47}, |theta| in {60, 120}, < 1 s", ok,
                  f"{len(classes)} classes, {dt:.3f} s")


def test_criterion_8_isotropy_certificates():
    sols = enumerate_closed_form()
    worst_sigma = worst_cond = 0.0
    for r in sols:
        rep = wrist_isotropy(jacobian(record_to_pointset(r)))
        worst_sigma = max(worst_sigma, abs(rep.sigma - math.sqrt(4 / 3)))
        worst_cond = max(worst_cond, abs(rep.condition_number - 1.0))
    sigma2 = {"tetrahedron": 4 / 3, "cube": 8 / 3, "octahedron": 2.0, "dodecahedron": 20 / 3, "icosahedron": 4.0}
    plat_err = 0.0
    plat_ok = True
    for solid, s2 in sigma2.items():
        rep = certify_isotropy(platonic(solid), 1e-10)
        plat_ok &= rep.isotropic
        plat_err = max(plat_err, abs(rep.sigma_squared - s2), float(np.abs(rep.eigenvalues - s2).max()))
    ok = worst_sigma <= 1e-9 and worst_cond <= 1e-9 and plat_ok and plat_err <= 1e-10
    assert record(8, "sigma = sqrt(4/3), cond = 1 (1e-9); Platonic sigma^2 = n/3 (1e-10)", ok,
                  f"sigma err {worst_sigma:.1e}, cond err {worst_cond:.1e}, Platonic err {plat_err:.1e}")


def test_criterion_9_property_suites():
    rng = np.random.default_rng(2024)
    sols = enumerate_closed_form()
    sets = [record_to_pointset(r) for r in sols] + [platonic(s) for s in SOLIDS]

    iso_err = 0.0
    iso_ok = True
    for S in sets:
        sigma = certify_isotropy(S).sigma
        for _ in range(100):
            rep = certify_isotropy(S.transformed(random_rotation(rng)))
            iso_ok &= rep.isotropic
            iso_err = max(iso_err, abs(rep.sigma - sigma))
    iso_ok &= iso_err <= 1e-12

    T = tetrahedron()
    H = second_moment(T)
    anti_err = max(float(np.abs(second_moment(antipodal_exchange(T, [k for k in range(4) if m >> k & 1])) - H).max())
                   for m in range(16))
    anti_ok = anti_err <= 1e-14

    line_ok = True
    line_err = 0.0
    for e in random_unit_vectors(rng, 100):
        L = reflect_line(e).matrix
        line_err = max(line_err, float(np.abs(L @ L - np.eye(3)).max()))
        line_ok &= is_proper_orthogonal(L, 1e-12) and np.linalg.det(L) > 0
    line_ok &= line_err <= 1e-14

    trace_err = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 50))
        S = PointSet(random_unit_vectors(rng, n))
        trace_err = max(trace_err, abs(np.trace(second_moment(S)) - n))
    trace_ok = trace_err <= 1e-12

    ok = iso_ok and anti_ok and line_ok and trace_ok
    assert record(9, "isometry / antipodal / line-reflection / trace property suites", ok,
                  f"isometry {iso_err:.1e}, antipodal {anti_err:.1e}, involution {line_err:.1e}, trace {trace_err:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
