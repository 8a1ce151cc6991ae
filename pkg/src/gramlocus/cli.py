"""Command-line interface.

Subcommands wire the library together: validate a space file, evaluate
and test locus membership, solve along rays, emit bound certificates as
JSON lines, materialize transported spaces, trace curves to SVG/CSV/PNG,
and run the built-in reference suite (verify-paper).

Exit codes: 0 success, 1 verification failure, 2 usage or file errors.
Human-readable numbers print at 6 significant digits; JSON and CSV carry
full precision.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, certify, io, refcases
from .errors import LocusError
from .locus import eval_g, is_member, solve_on_ray
from .trace import Window, emit_csv, emit_svg, render_png, trace_locus


def _fmt6(v: float) -> str:
    return f"{v:.6g}"


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in text.replace(",", " ").split()])
    except ValueError:
        raise SystemExit(f"error: could not parse coordinates from {text!r}") from None


def _load(loader, path):
    try:
        return loader(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        raise SystemExit(2) from None
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad file {path}: {exc}", file=sys.stderr)
        raise SystemExit(2) from None


def cmd_validate(args) -> int:
    try:
        space = io.load_space(args.space)
    except OSError as exc:
        print(f"error: cannot read {args.space}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except LocusError as exc:
        print(f"invalid: {args.space}: {exc}")
        return 1
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad file {args.space}: {exc}", file=sys.stderr)
        return 2
    print(f"valid: dim {space.dim}, symmetric positive-definite Gram")
    return 0


def cmd_eval(args) -> int:
    space = _load(io.load_space, args.space)
    spec = _load(io.load_locus, args.locus)
    point = _parse_point(args.point)
    value = eval_g(space, spec, point)
    if args.json:
        print(json.dumps({"g": value, "c": spec.c, "residual": value - spec.c}))
    else:
        print(_fmt6(value))
    return 0


def cmd_member(args) -> int:
    space = _load(io.load_space, args.space)
    spec = _load(io.load_locus, args.locus)
    point = _parse_point(args.point)
    member = is_member(space, spec, point, args.tol)
    print("true" if member else "false")
    return 0 if member else 1


def cmd_solve(args) -> int:
    space = _load(io.load_space, args.space)
    spec = _load(io.load_locus, args.locus)
    origin = _parse_point(args.origin)
    direction = _parse_point(args.direction)
    t_min, t_max = args.range
    roots = solve_on_ray(
        space, spec, origin, direction, t_min, t_max, args.tol, samples=args.samples
    )
    if args.json:
        points = [(origin + t * direction).tolist() for t in roots]
        print(json.dumps({"t": roots, "points": points}))
    else:
        if not roots:
            print("no crossings in range")
        for t in roots:
            pt = origin + t * direction
            coords = " ".join(_fmt6(v) for v in pt)
            print(f"t={_fmt6(t)}  point=({coords})")
    return 0


def _certificate_lines(space, spec, certs) -> list[str]:
    lines = []
    for cert in certs:
        entry = cert.to_dict()
        if cert.fired:
            entry["audit"] = certify.audit_certificate(
                space, spec, cert.composite_point, cert.composite_foci, cert
            )
            if cert.suspect_direction:
                entry["audit_flipped"] = certify.audit_certificate(
                    space, spec, cert.composite_point, cert.composite_foci, cert.flipped()
                )
        else:
            entry["audit"] = None
        entry["direct_value"] = certify.composite_value(
            space, spec, cert.composite_point, cert.composite_foci
        )
        lines.append(json.dumps(entry))
    return lines


def cmd_certify(args) -> int:
    space = _load(io.load_space, args.space)
    spec = _load(io.load_locus, args.locus)
    mode = args.mode
    try:
        if mode == "add":
            certs = certify.certify_add_vector(
                space, spec, _parse_point(args.z), _parse_point(args.y), args.member_tol
            )
        elif mode == "members":
            certs = certify.certify_add_members(
                space, spec, _parse_point(args.v[0]), _parse_point(args.w), args.member_tol
            )
        elif mode == "combo":
            certs = certify.certify_linear_combo(
                space,
                spec,
                _parse_point(args.v[0]),
                _parse_point(args.w),
                args.gamma,
                args.beta,
                args.member_tol,
            )
        else:
            vs = [_parse_point(t) for t in args.v]
            certs = certify.certify_multi_combo(space, spec, vs, args.betas, args.member_tol)
    except LocusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in _certificate_lines(space, spec, certs):
        print(line)
    return 0


def cmd_transport(args) -> int:
    oracle = _load(io.load_oracle, args.oracle)
    spec = _load(io.load_locus, args.locus)
    from .transport import transport_locus

    space, out_spec = transport_locus(oracle, spec.foci, spec.alphas, spec.c)
    payload = {"space": io.space_to_dict(space), "locus": io.locus_to_dict(out_spec)}
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_trace(args) -> int:
    if not (args.svg or args.csv or args.png):
        print("error: trace needs at least one of --svg/--csv/--png", file=sys.stderr)
        return 2
    space = _load(io.load_space, args.space)
    spec = _load(io.load_locus, args.locus)
    x_min, x_max, y_min, y_max = args.window
    window = Window(x_min, x_max, y_min, y_max, args.res[0], args.res[1])
    try:
        polylines = trace_locus(space, spec, window)
    except LocusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not polylines:
        print("note: locus does not intersect the window")
    else:
        total = sum(len(pl.points) for pl in polylines)
        print(f"{len(polylines)} polyline(s), {total} vertices")
    if args.svg:
        emit_svg(polylines, window, args.svg)
        print(f"wrote {args.svg}")
    if args.csv:
        emit_csv(polylines, args.csv)
        print(f"wrote {args.csv}")
    if args.png:
        render_png(polylines, window, args.png, foci=spec.foci)
        print(f"wrote {args.png}")
    return 0


def cmd_verify_paper(args) -> int:
    rows = refcases.run_all()
    width = max(len(r.name) for r in rows)
    failures = 0
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"[{status}] c{r.criterion}  {r.name:<{width}}  {r.observed}  (want {r.expected})")
    print(f"{len(rows) - failures}/{len(rows)} checks passed")
    if args.report_dir:
        written = refcases.write_report(args.report_dir)
        print(f"report written to {args.report_dir}: {', '.join(written)}")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramlocus",
        description="Loci of norm combinations in inner product spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for randomized subcommands (default 0)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a space file defines an inner product")
    p.add_argument("space")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate the locus function at a point")
    p.add_argument("space")
    p.add_argument("locus")
    p.add_argument("--point", required=True, help="coordinates, comma or space separated")
    p.add_argument("--json", action="store_true", help="full-precision JSON output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("member", help="test locus membership (exit 1 when not a member)")
    p.add_argument("space")
    p.add_argument("locus")
    p.add_argument("--point", required=True)
    p.add_argument("--tol", type=float, default=1e-6, help="absolute tolerance (default 1e-6)")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("solve", help="find locus crossings along a ray")
    p.add_argument("space")
    p.add_argument("locus")
    p.add_argument("--origin", required=True)
    p.add_argument("--direction", required=True)
    p.add_argument("--range", type=float, nargs=2, required=True, metavar=("TMIN", "TMAX"))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="emit bound certificates as JSON lines")
    p.add_argument("mode", choices=["add", "members", "combo", "multi"])
    p.add_argument("space")
    p.add_argument("locus")
    p.add_argument("--z", help="member point (add)")
    p.add_argument("--y", help="added vector (add)")
    p.add_argument(
        "--v",
        action="append",
        default=[],
        help="member point; repeat for multi (members/combo/multi)",
    )
    p.add_argument("--w", help="second member point (members/combo)")
    p.add_argument("--gamma", type=float, help="coefficient of v (combo)")
    p.add_argument("--beta", type=float, help="coefficient of w (combo)")
    p.add_argument(
        "--betas",
        type=float,
        nargs="+",
        help="positive coefficients, one per --v (multi)",
    )
    p.add_argument(
        "--member-tol",
        type=float,
        default=certify.DEFAULT_MEMBER_TOL,
        help="membership gate for theorem hypotheses (default %(default)g)",
    )
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("transport", help="materialize a Gram space from an oracle")
    p.add_argument("oracle")
    p.add_argument("locus")
    p.add_argument("--out", help="write the space+locus JSON here instead of stdout")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("trace", help="trace the locus curve over a window")
    p.add_argument("space")
    p.add_argument("locus")
    p.add_argument(
        "--window",
        type=float,
        nargs=4,
        required=True,
        metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
    )
    p.add_argument("--res", type=int, nargs=2, default=[512, 512], metavar=("NX", "NY"))
    p.add_argument("--svg", help="write an SVG path file")
    p.add_argument("--csv", help="write vertex rows as CSV")
    p.add_argument("--png", help="render a PNG figure")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser(
        "verify-paper", help="run the built-in reference suite and print a pass/fail table"
    )
    p.add_argument("--report-dir", help="also render reproduction figures and report.csv here")
    p.set_defaults(func=cmd_verify_paper)

    return parser


def _validate_certify_args(parser: argparse.ArgumentParser, args) -> None:
    if args.command != "certify":
        return
    need = {
        "add": ["z", "y"],
        "members": ["v", "w"],
        "combo": ["v", "w", "gamma", "beta"],
        "multi": ["v", "betas"],
    }[args.mode]
    for name in need:
        value = getattr(args, name)
        if value is None or (isinstance(value, list) and not value):
            parser.error(f"certify {args.mode} requires --{name.replace('_', '-')}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate_certify_args(parser, args)
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except LocusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
