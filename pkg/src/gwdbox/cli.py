"""Command-line interface.

One-shot verbs (``iou``, ``gwd``, ``loss``, ``convert``) take box literals
``x,y,w,h,theta_deg[,oc|le]`` and print a single line; experiment verbs
(``sweep``, ``boundary``, ``descent``) read a config file and write CSV
(and SVG) files into an output directory; ``selftest`` runs the built-in
invariant suite. Angles on the command line are degrees.

Exit codes: 0 on success, 1 on a computation error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import BoundarySpec, load_experiments
from .gaussian import box_to_gaussian, gwd_squared
from .geometry import Convention, convert_convention, format_box_literal, parse_box_literal, rotated_iou
from .harness import DescentSpec, Diverged, SweepSpec, run_boundary_cases, run_descent, run_sweep
from .losses import Form, LossConfig, Transform, gwd_loss
from .report import emit_csv, emit_svg
from .selftest import run_selftest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwdbox",
        description="Rotated-box geometry, Gaussian Wasserstein distances, and behavior studies.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("iou", help="exact IoU of two boxes")
    p.add_argument("box1")
    p.add_argument("box2")

    p = sub.add_parser("gwd", help="squared Gaussian Wasserstein distance of two boxes")
    p.add_argument("box1")
    p.add_argument("box2")

    p = sub.add_parser("loss", help="Gaussian Wasserstein loss of a prediction against a target")
    p.add_argument("box1")
    p.add_argument("box2")
    p.add_argument("--transform", choices=[t.value for t in Transform], default="sqrt")
    p.add_argument("--tau", type=float, default=2.0)
    p.add_argument("--form", choices=[f.value for f in Form], default="fitted")

    p = sub.add_parser("convert", help="re-express a box under the other angle convention")
    p.add_argument("box")
    p.add_argument("--to", required=True, choices=[c.value for c in Convention])

    for verb, text in (("sweep", "run the sweep sections of a config file"),
                       ("boundary", "run the boundary-case sections of a config file"),
                       ("descent", "run the descent sections of a config file")):
        p = sub.add_parser(verb, help=text)
        p.add_argument("config")
        p.add_argument("--out", required=True, help="output directory")

    sub.add_parser("selftest", help="run the built-in invariant suite")
    return parser


def _run_experiments(args, verb: str) -> int:
    wanted = {"sweep": SweepSpec, "boundary": BoundarySpec, "descent": DescentSpec}[verb]
    selected = [e for e in load_experiments(args.config) if isinstance(e.spec, wanted)]
    if not selected:
        print(f"no {verb} sections in {args.config}", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    for exp in selected:
        if verb == "sweep":
            table = run_sweep(exp.spec)
        elif verb == "boundary":
            table = run_boundary_cases(exp.spec.taus, exp.spec.transform)
        else:
            table = run_descent(exp.spec).to_table()
        csv_path = os.path.join(args.out, f"{exp.name}.csv")
        emit_csv(table, csv_path)
        print(f"wrote {csv_path}")
        if verb != "boundary":
            svg_path = os.path.join(args.out, f"{exp.name}.svg")
            emit_svg(table, svg_path, title=exp.name)
            print(f"wrote {svg_path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "iou":
            b1, b2 = parse_box_literal(args.box1), parse_box_literal(args.box2)
            print(f"{rotated_iou(b1, b2):.6f}")
        elif args.verb == "gwd":
            b1, b2 = parse_box_literal(args.box1), parse_box_literal(args.box2)
            print(f"{gwd_squared(box_to_gaussian(b1), box_to_gaussian(b2)):.6f}")
        elif args.verb == "loss":
            b1, b2 = parse_box_literal(args.box1), parse_box_literal(args.box2)
            cfg = LossConfig(Transform(args.transform), args.tau, Form(args.form))
            print(f"{gwd_loss(b1, b2, cfg):.6f}")
        elif args.verb == "convert":
            box = parse_box_literal(args.box)
            print(format_box_literal(convert_convention(box, Convention(args.to))))
        elif args.verb == "selftest":
            return 0 if run_selftest() else 1
        else:
            return _run_experiments(args, args.verb)
    except (ValueError, Diverged, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
