"""Command-line front end.

    isowrist platonic <solid>
    isowrist solve
    isowrist verify [--seed N] [--starts N]
    isowrist classify
    isowrist export-sphere <id>

Artifacts go to stdout or ``--output``; a short human summary goes to
stderr. Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
import argparse
from dataclasses import dataclass
import sys

import numpy as np

from . import _io
from .isoset import SOLIDS, certify_isotropy, platonic
from .solver import BKK, BEZOUT, enumerate_closed_form, match_solution_sets, oracle_solve, record_to_pointset
from .wrist import antipodal_map, architectures_csv, classify, reflection_map

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_STARTS = 1000
ARC_SEGMENTS = 16
HEADER_SETS = (18, 10, 23, 17, 16, 24, 9, 15)


@dataclass
class RunConfig:
    command: str
    tolerance: float = 1e-10
    oracle_seed: int = 1
    oracle_starts: int = 5000
    output: str = None
    format: str = "json"


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def _starts(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < MIN_STARTS:
        raise argparse.ArgumentTypeError(f"--starts must be >= {MIN_STARTS}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=_positive_float, default=1e-10)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="write the artifact here instead of stdout")

    p = argparse.ArgumentParser(prog="isowrist", description="Isotropic 4R spherical wrists.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("platonic", parents=[common], help="vertex set of a Platonic solid and its isotropy")
    sp.add_argument("solid", choices=SOLIDS)

    sub.add_parser("solve", parents=[common], help="the 32 closed-form roots")

    sp = sub.add_parser("verify", parents=[common], help="cross-check the closed form with multistart Newton")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--starts", type=_starts, default=5000)

    sub.add_parser("classify", parents=[common], help="distinct wrist architectures and symmetry maps")

    sp = sub.add_parser("export-sphere", parents=[common], help="axis endpoints and arcs as v/l text")
    sp.add_argument("solution_id", type=int)
    return p


def _emit(text, cfg):
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg):
    print(msg, file=sys.stderr)


def cmd_platonic(cfg, solid):
    S = platonic(solid)
    rep = certify_isotropy(S, cfg.tolerance)
    if cfg.format == "csv":
        text = _io.csv_text(["label", "k", "x", "y", "z"], [[S.label, k + 1, *map(float, p)] for k, p in enumerate(S.points)])
    else:
        text = _io.dumps({"pointset": S.to_dict(), "report": rep.to_dict()})
    _emit(text, cfg)
    _note(f"{solid}: n = {len(S)}, sigma^2 = {rep.sigma_squared:.12g}, isotropic = {rep.isotropic}")
    return EXIT_OK if rep.isotropic else EXIT_FAIL


def cmd_solve(cfg):
    sols = enumerate_closed_form()
    _emit(sols.to_csv() if cfg.format == "csv" else sols.to_json(), cfg)
    worst = max(r.residual for r in sols)
    ok = sols.actual == 32 and worst <= cfg.tolerance
    _note(f"{sols.actual} solutions, max residual {worst:.3e} (tolerance {cfg.tolerance:.1e})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg):
    closed = enumerate_closed_form()
    found = oracle_solve(cfg.oracle_seed, cfg.oracle_starts)
    matched, pairs = match_solution_sets(found, closed, tol=1e-8)
    report = {
        "bezout": BEZOUT,
        "bkk": BKK,
        "closed_form": closed.actual,
        "oracle": found.actual,
        "matched": len(pairs),
        "all_matched": matched,
        "seed": cfg.oracle_seed,
        "starts": cfg.oracle_starts,
    }
    if cfg.format == "csv":
        text = _io.csv_text(list(report), [list(report.values())])
    else:
        text = _io.dumps(report)
    _emit(text, cfg)
    verdict = "all matched" if matched else "MISMATCH"
    rel = "==" if found.actual == closed.actual else "!="
    _note(f"Bezout {BEZOUT}, BKK {BKK}, actual: {found.actual} {rel} {closed.actual}, {verdict}")
    return EXIT_OK if matched else EXIT_FAIL


def cmd_classify(cfg):
    sols = enumerate_closed_form()
    classes = classify(sols)
    if cfg.format == "csv":
        text = architectures_csv(classes)
    else:
        text = _io.dumps({
            "architectures": [a.to_dict() for a in classes],
            "antipodal_map": {"base": 18, **antipodal_map(sols, 18, cfg.tolerance)},
            "reflection_map": {"sets": list(HEADER_SETS), **reflection_map(sols, HEADER_SETS, cfg.tolerance)},
        })
    _emit(text, cfg)
    for k, a in enumerate(classes, start=1):
        al = ", ".join(f"{x:.12g}" for x in a.alpha)
        _note(f"{k}: alpha = ({al}), theta2 = {a.theta2:.12g}, theta3 = {a.theta3:.12g}")
    return EXIT_OK if len(classes) == 8 else EXIT_FAIL


def sphere_geometry(S, segments=ARC_SEGMENTS):
    """Axis endpoints plus great-circle arcs between consecutive axes.

    Returns (vertices, segments) with 1-based segment indices; the first
    len(S) vertices are the axis endpoints.
    """
    verts = [np.array(p) for p in S.points]
    segs = []
    for a in range(len(S) - 1):
        p, q = S.points[a], S.points[a + 1]
        omega = np.arccos(np.clip(p @ q, -1.0, 1.0))
        prev = a + 1
        for k in range(1, segments):
            t = k / segments
            r = (np.sin((1 - t) * omega) * p + np.sin(t * omega) * q) / np.sin(omega)
            verts.append(r / np.linalg.norm(r))
            segs.append((prev, len(verts)))
            prev = len(verts)
        segs.append((prev, a + 2))
    return verts, segs


def cmd_export_sphere(cfg, sid):
    sols = enumerate_closed_form()
    S = record_to_pointset(sols.by_id(sid))
    verts, segs = sphere_geometry(S)
    lines = [f"# solution {sid}: {len(S)} axis endpoints, arcs between consecutive axes"]
    lines += ["v " + " ".join(_io.fmt_float(c) for c in v) for v in verts]
    lines += [f"l {i} {j}" for i, j in segs]
    _emit("\n".join(lines) + "\n", cfg)
    _note(f"solution {sid}: {len(verts)} vertices, {len(segs)} segments")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        tolerance=args.tolerance,
        oracle_seed=getattr(args, "seed", 1),
        oracle_starts=getattr(args, "starts", 5000),
        output=args.output,
        format=args.format,
    )
    if args.command == "platonic":
        return cmd_platonic(cfg, args.solid)
    if args.command == "solve":
        return cmd_solve(cfg)
    if args.command == "verify":
        return cmd_verify(cfg)
    if args.command == "classify":
        return cmd_classify(cfg)
    if args.command == "export-sphere":
        if not 1 <= args.solution_id <= 32:
            parser.error(f"unknown solution id {args.solution_id}; expected 1..32")
        return cmd_export_sphere(cfg, args.solution_id)
    parser.error(f"unknown command {args.command}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
