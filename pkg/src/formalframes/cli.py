"""Command-line front end.

Subcommands operate on small JSON documents (files or stdin) and print
JSON to stdout (or ``--output``); diagnostics go to stderr only.  Exit
codes: 0 success, 1 a checked property failed, 2 malformed input, 3 a
numerical singularity (non-invertible data).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bundle import FrameCoords
from .charts import SmoothMapSpec, transition_jet
from .forms import RealizabilityDisagreement, realizability_check, schwarzian
from .jetgroup import JetGroupElement, jet_compose, jet_inverse, kappa_project
from .tensors import ShapeMismatchError, SingularityError, symmetrize_array
from .verify import VerifyConfig, run_suites

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_SINGULAR = 3


def _dump(doc, args) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, separators=(",", ": "))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(args) -> dict:
    try:
        if args.input:
            with open(args.input) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise ShapeMismatchError(f"cannot read input document: {exc}") from exc


def _random_frame(rng, n, r, classical):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    arrays = [q * rng.uniform(0.5, 2.0)]
    for k in range(2, r + 1):
        arr = rng.uniform(-1, 1, (n,) * (k + 1))
        arrays.append(symmetrize_array(arr) if classical else arr)
    return FrameCoords.from_arrays(rng.uniform(-1, 1, n), arrays)


# ---------------------------------------------------------------------------
# subcommands


def cmd_torsion(args) -> int:
    """Realizability verdicts: torsion vanishing vs tensor symmetry."""
    if args.input:
        # single-frame mode: the document is one frame in natural coordinates
        frame = FrameCoords.from_json(_load(args))
        res = realizability_check(frame, tol=args.atol)
        _dump({
            "realizable": res["realizable"],
            "max_torsion": res["max_torsion"],
            "max_asymmetry": res["max_asymmetry"],
        }, args)
        return EXIT_OK
    # sampling mode: alternate symmetric and generic random frames
    trials = args.trials or 50
    rng = np.random.default_rng([args.seed, 0])
    verdicts = []
    for i in range(trials):
        frame = _random_frame(rng, args.n, args.r, classical=i % 2 == 0)
        res = realizability_check(frame, tol=args.atol)
        verdicts.append({
            "trial": i,
            "realizable": res["realizable"],
            "max_torsion": res["max_torsion"],
            "max_asymmetry": res["max_asymmetry"],
        })
    _dump({
        "config": {"seed": args.seed, "trials": trials, "n": args.n, "r": args.r,
                   "atol": args.atol},
        "verdicts": verdicts,
    }, args)
    return EXIT_OK


def cmd_compose(args) -> int:
    doc = _load(args)
    a = JetGroupElement.from_json(doc["a"])
    b = JetGroupElement.from_json(doc["b"])
    _dump(jet_compose(a, b).to_json(), args)
    return EXIT_OK


def cmd_invert(args) -> int:
    a = JetGroupElement.from_json(_load(args))
    _dump(jet_inverse(a).to_json(), args)
    return EXIT_OK


def cmd_kappa(args) -> int:
    a = JetGroupElement.from_json(_load(args))
    _dump(kappa_project(a).to_json(), args)
    return EXIT_OK


def cmd_schwarzian(args) -> int:
    """Schwarzian derivative of a 1-d map at the given points."""
    doc = _load(args)
    spec = SmoothMapSpec.from_json(doc["map"])
    if spec.m_in != 1 or spec.m_out != 1:
        raise ShapeMismatchError("schwarzian needs a 1-dimensional map")
    values = []
    for x in doc.get("points", [0.0]):
        T = transition_jet(spec, [float(x)], 3)
        values.append({
            "point": float(x),
            "schwarzian": schwarzian([t.reshape(()) for t in T.arrays]),
        })
    _dump({"values": values}, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = VerifyConfig(
        seed=args.seed,
        trials=args.trials or 50,
        max_n=args.n,
        max_r=args.r,
        atol=args.atol,
        rtol=args.rtol,
    )
    report = run_suites(cfg)
    _dump(report, args)
    for suite in report["suites"]:
        status = "pass" if suite["passed"] else "FAIL"
        print(f"[{status}] {suite['suite']}: worst residual "
              f"{suite['worst_residual']:.3e}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_PROPERTY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formalframes",
        description="numerical toolkit for higher-order frames and jet groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "torsion": (cmd_torsion, "realizability verdicts for frames"),
        "compose": (cmd_compose, "product of two jet group elements"),
        "invert": (cmd_invert, "inverse of a jet group element"),
        "kappa": (cmd_kappa, "symmetrizing projection of a group element"),
        "schwarzian": (cmd_schwarzian, "Schwarzian derivative of a 1-d map"),
        "verify": (cmd_verify, "run all seeded verification suites"),
    }
    for name, (fn, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--n", type=int, default=2, help="base dimension")
        p.add_argument("--r", type=int, default=3, help="jet order")
        p.add_argument("--atol", type=float, default=1e-8)
        p.add_argument("--rtol", type=float, default=1e-8)
        p.add_argument("--input", default=None, metavar="FILE")
        p.add_argument("--output", default=None, metavar="FILE")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RealizabilityDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ShapeMismatchError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
