"""Command line entry point: ``cubicflow {classify,integrate,predict,verify,sweep}``.

Exit codes: 0 success / span completed, 1 identity failure, 2 bad input,
3 blow-up detected, 4 step-size underflow, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import algebra as alg
from . import checks
from .algebra import CubicCoeffs, CubicKind, PhasePoint
from .dynamics import IntegratorConfig, Termination, classify_initial, integrate, write_csv

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_USAGE = 2
EXIT_BLOWUP = 3
EXIT_UNDERFLOW = 4
EXIT_IO = 5


def _cubic(text: str) -> CubicCoeffs:
    try:
        if text.lstrip().startswith("{"):
            return CubicCoeffs.from_json(text)
        return CubicCoeffs.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _point(text: str) -> PhasePoint:
    try:
        return PhasePoint.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _span(text: str) -> tuple[float, float]:
    try:
        t0, t1 = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected T0,T1, got {text!r}") from None
    return t0, t1


def _grid(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("expected p0,p1,np,q0,q1,nq")
    try:
        p0, p1, q0, q1 = (Fraction(parts[i].strip()) for i in (0, 1, 3, 4))
        n_p, n_q = int(parts[2]), int(parts[5])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if n_p < 1 or n_q < 1:
        raise argparse.ArgumentTypeError("grid counts must be positive")
    return (p0, p1, n_p), (q0, q1, n_q)


def _axis(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _add_integrator_flags(p: argparse.ArgumentParser) -> None:
    span = p.add_mutually_exclusive_group()
    span.add_argument("--t", type=float, help="integrate over [-T, T]")
    span.add_argument("--t-span", type=_span, help="integrate over [T0, T1] (must contain 0)")
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--blowup-norm", type=float, default=1e8)
    p.add_argument("--max-step", type=float, default=math.inf)


def _config(args) -> IntegratorConfig:
    if args.t_span is not None:
        t_span = args.t_span
    elif args.t is not None:
        t_span = (-abs(args.t), abs(args.t))
    else:
        t_span = (-10.0, 10.0)
    return IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_step=args.max_step,
                            blowup_norm=args.blowup_norm, t_span=t_span)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubicflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="completeness class of a cubic")
    p.add_argument("--cubic", type=_cubic, required=True, help="a,b,c,d as n or n/m, or JSON")

    p = sub.add_parser("integrate", help="integrate one integral curve")
    p.add_argument("--cubic", type=_cubic, required=True)
    p.add_argument("--z0", type=_point, required=True)
    p.add_argument("--out", default="trajectory.csv", help="CSV output path")
    _add_integrator_flags(p)

    p = sub.add_parser("predict", help="initial-point report with predicted pole times")
    p.add_argument("--cubic", type=_cubic, required=True)
    p.add_argument("--z0", type=_point, required=True)

    p = sub.add_parser("verify", help="randomized exact identity checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)

    p = sub.add_parser("sweep", help="blow-up times over a grid of initial points")
    p.add_argument("--cubic", type=_cubic, required=True)
    p.add_argument("--grid", type=_grid, required=True, help="p0,p1,np,q0,q1,nq")
    p.add_argument("--out", default="sweep.jsonl", help="JSON-lines output path")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_integrator_flags(p)
    return parser


def _emit(payload) -> None:
    print(json.dumps(payload))


def classify_payload(c: CubicCoeffs) -> dict:
    cls = alg.classify(c)
    out = {"class": cls.kind.value}
    if cls.kind is CubicKind.MONOMIAL_COMPLETE:
        out["w"] = [str(x) for x in cls.weight]
    out["delta_disc"] = str(cls.delta_discriminant)
    return out


def _termination_json(term: Termination) -> dict:
    return {"termination": term.kind.value, "t_end": term.t_end, "t_est": term.t_est}


def cmd_classify(args) -> int:
    _emit(classify_payload(args.cubic))
    return EXIT_OK


def cmd_predict(args) -> int:
    report = classify_initial(args.cubic, args.z0)
    _emit({"cubic": args.cubic.to_json(), "z0": [str(x) for x in args.z0], **report.to_json()})
    return EXIT_OK


def cmd_integrate(args) -> int:
    cfg = _config(args)
    report = classify_initial(args.cubic, args.z0)
    traj = integrate(args.cubic, args.z0, cfg)
    try:
        write_csv(traj, args.out)
    except OSError as exc:
        print(f"cubicflow: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit({
        "cubic": args.cubic.to_json(),
        "z0": [str(x) for x in args.z0],
        **report.to_json(),
        "backward": _termination_json(traj.backward),
        "forward": _termination_json(traj.forward),
        "samples": len(traj),
        "csv": str(args.out),
    })
    kinds = {t.kind.value for t in traj.terminations}
    if traj.blew_up:
        return EXIT_BLOWUP
    if "StepUnderflow" in kinds:
        return EXIT_UNDERFLOW
    return EXIT_OK


def cmd_verify(args) -> int:
    tally = checks.run_suite(args.seed, args.count)
    failures = sum(v["fail"] for v in tally.values())
    _emit({"seed": args.seed, "count": args.count, "identities": tally, "failures": failures})
    return EXIT_OK if failures == 0 else EXIT_IDENTITY_FAILURE


def _relative_gap(measured, predicted):
    if measured is None or predicted is None:
        return None
    return abs(measured - predicted) / abs(predicted)


def sweep_point(c: CubicCoeffs, z0: PhasePoint, cfg: IntegratorConfig) -> dict:
    """One JSON-lines record of ``cubicflow sweep``."""
    report = classify_initial(c, z0)
    line = {
        "z0": [str(x) for x in z0],
        "class": report.initial_class.value,
        "psi0": report.psi0,
        "F0": report.F0,
        "g3": report.g3,
    }
    traj = integrate(c, z0, cfg)
    measured = {
        "forward": traj.forward.t_est if traj.forward.blowup else None,
        "backward": traj.backward.t_est if traj.backward.blowup else None,
    }
    predicted = {"forward": report.predicted_pole_forward, "backward": report.predicted_pole_backward}
    gaps = [g for g in (_relative_gap(measured[k], predicted[k]) for k in measured) if g is not None]
    line.update({
        "blowup": traj.blew_up,
        "t_est_forward": measured["forward"],
        "t_est_backward": measured["backward"],
        "predicted_forward": predicted["forward"],
        "predicted_backward": predicted["backward"],
        "relative_gap": max(gaps) if gaps else None,
    })
    return line


def _sweep_task(task):
    return json.dumps(sweep_point(*task))


def cmd_sweep(args) -> int:
    cfg = _config(args)
    (p0, p1, n_p), (q0, q1, n_q) = args.grid
    tasks = [(args.cubic, PhasePoint(p, q), cfg)
             for p in _axis(p0, p1, n_p) for q in _axis(q0, q1, n_q)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(_sweep_task, tasks, chunksize=4))
    else:
        lines = [_sweep_task(t) for t in tasks]
    try:
        with open(args.out, "w") as fh:
            fh.writelines(line + "\n" for line in lines)
    except OSError as exc:
        print(f"cubicflow: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    _emit({"points": len(lines), "out": str(args.out)})
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "integrate": cmd_integrate,
    "predict": cmd_predict,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"cubicflow: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
