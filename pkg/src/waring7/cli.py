"""Command line interface.

Exit codes: 0 on success (or a passing verification), 1 when a
decomposition fails or a check does not pass, 2 on malformed input.
The environment variable ``WARING7_TOL`` overrides the verification
tolerance; ``--tol`` overrides both.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import serialize
from .decompose import decompose_seven, verify
from .errors import PreconditionError, TangentConic, Waring7Error
from .experiments import (
    GeneratorSpec,
    Kind,
    experiment_special_cases,
    generate,
    incidence_check,
    probe_frames,
    random_frame,
)
from .poly import DUAL, HomogeneousForm
from .tolerances import DEFAULT


class InputError(Exception):
    pass


def _tolerances(args):
    tol = DEFAULT
    env = os.environ.get("WARING7_TOL")
    if env:
        try:
            tol = tol.with_verify(float(env))
        except ValueError:
            raise InputError(f"WARING7_TOL is not a number: {env!r}")
    if getattr(args, "tol", None) is not None:
        tol = tol.with_verify(args.tol)
    return tol


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}")


def _load_quartic(path):
    try:
        f = serialize.form_from_json(_load_json(path))
    except (PreconditionError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")
    if f.side != "primal" or f.nvars != 3 or f.degree != 4:
        raise InputError(f"{path}: expected a primal ternary quartic (nvars 3, degree 4)")
    return f


def _emit(obj, args, out=None):
    text = serialize.dumps(obj, pretty=getattr(args, "pretty", False))
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_decompose(args):
    tol = _tolerances(args)
    f = _load_quartic(args.form)
    if args.frame:
        try:
            frame = serialize.frame_from_json(_load_json(args.frame))
        except (PreconditionError, KeyError, TypeError, ValueError, Waring7Error) as exc:
            raise InputError(f"{args.frame}: {exc}")
    else:
        frame = random_frame(np.random.default_rng(args.seed), tol)
    res = decompose_seven(f, frame, tol)
    if not res.ok:
        print(serialize.dumps(dict(res.failure.to_json(), frame=frame.to_json())), file=sys.stderr)
        return 1
    payload = serialize.decomposition_to_json(res.decomposition)
    payload["frame"] = frame.to_json()
    _emit(payload, args, args.out)
    return 0


def cmd_verify(args):
    tol = _tolerances(args)
    f = _load_quartic(args.form)
    try:
        dec = serialize.decomposition_from_json(_load_json(args.decomposition))
    except (PreconditionError, ValueError) as exc:
        raise InputError(f"{args.decomposition}: {exc}")
    if dec.degree != 4 or any(t.direction.nvars != 3 for t in dec.terms):
        raise InputError("decomposition must have degree 4 in 3 variables")
    r = verify(f, dec)
    passed = r <= tol.verify
    _emit({"residual": r, "tolerance": tol.verify, "passed": passed, "terms": len(dec)}, args)
    return 0 if passed else 1


def cmd_probe(args):
    tol = _tolerances(args)
    f = _load_quartic(args.form)
    if args.trials < 1:
        raise InputError("--trials must be positive")
    _emit(probe_frames(f, args.trials, args.seed, tol), args)
    return 0


def cmd_experiments(args):
    tol = _tolerances(args)
    if args.frames < 1:
        raise InputError("--frames must be positive")
    report = experiment_special_cases(args.seed, args.frames, tol)
    _emit(report, args)
    for name, case in report["cases"].items():
        chk = case["check"]
        if chk is not None:
            status = "PASS" if chk["passed"] else "FAIL"
            print(f"[{status}] {name}: {chk['claim']} ({chk['observed']})", file=sys.stderr)
    if args.check and not report["passed"]:
        return 1
    return 0


def cmd_generate(args):
    params = {}
    if args.params:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise InputError(f"--params: {exc}")
    try:
        f = generate(GeneratorSpec(Kind(args.kind), args.seed, params), _tolerances(args))
    except TangentConic as exc:
        print(json.dumps({"error": "TangentConic", "detail": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, KeyError, TypeError, PreconditionError) as exc:
        raise InputError(str(exc))
    _emit(serialize.form_to_json(f), args, args.out)
    return 0


def cmd_incidence(args):
    tol = _tolerances(args)
    f = _load_quartic(args.form)
    raw = _load_json(args.lines)
    try:
        lines = [HomogeneousForm.linear(DUAL, [serialize.complex_from_json(c) for c in row])
                 for row in (raw["lines"] if isinstance(raw, dict) else raw)]
    except (KeyError, TypeError, PreconditionError) as exc:
        raise InputError(f"{args.lines}: {exc}")
    if any(line.nvars != 3 for line in lines):
        raise InputError("special lines need three coefficients")
    rep = probe_frames(f, args.trials, args.seed, tol)
    out = []
    for rec, res in zip(rep.trials, rep.results):
        entry = {"trial": rec["trial"], "success": res.ok, "reason": rec["reason"]}
        if res.ok:
            entry["incidence"] = incidence_check(res.decomposition, lines, args.incidence_tol).to_json()
        out.append(entry)
    _emit({"lines": [serialize.complex_to_json(c) for line in lines for c in line.coeffs],
           "trials": out}, args)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="waring7", description="Length-seven Waring decompositions of ternary quartics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=None, help="verification tolerance")
        sp.add_argument("--pretty", action="store_true", help="indent JSON output")

    sp = sub.add_parser("decompose", help="decompose a quartic as seven fourth powers")
    sp.add_argument("form")
    sp.add_argument("--frame")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify", help="residual of a decomposition against a form")
    sp.add_argument("form")
    sp.add_argument("decomposition")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("probe", help="try many random frames")
    sp.add_argument("form")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("experiments", help="run the special-case suite")
    sp.add_argument("--check", action="store_true", help="exit 1 if any check fails")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--frames", type=int, default=20)
    common(sp)
    sp.set_defaults(func=cmd_experiments)

    sp = sub.add_parser("generate", help="emit a generated quartic")
    sp.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--params", help="JSON object with generator parameters")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("incidence", help="check decompositions against special lines")
    sp.add_argument("form")
    sp.add_argument("--lines", required=True, help="JSON list of dual lines [[re,im] x3]")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--incidence-tol", type=float, default=1e-9)
    common(sp)
    sp.set_defaults(func=cmd_incidence)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": "malformed input", "detail": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
