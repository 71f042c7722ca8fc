"""Command-line entry point.

Exit codes: 0 success, 1 verification or computation failure, 2 usage error
(argparse's convention). All JSON output is deterministic for a fixed seed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import highprec
from .derivation import (
    InvalidPath,
    build_pipeline_diagrams,
    cyclic_normal_form,
    derive_via_diagrams,
    diagram_dot,
    diagram_json,
    ksl_cyclic,
    ksl_window,
    sandwich_equivalence_check,
)
from .flow import CornerHit, derive_geometric, trace_from_edge, trajectory_json
from .geometry import round_sig
from .render import render_guide_svg, render_surface_svg
from .shear import (
    build_vertex_guide,
    decompose_cylinders,
    identity_sum,
    telescoping_identity,
    verify_reassembly,
)
from .surface import build_surface, index_for_letter, surface_json
from .torus import torus_derive_geometric, torus_derive_rule, torus_trace


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2), out)


def _parse_theta(args) -> float:
    if getattr(args, "slope", None) is not None:
        txt = args.slope
        if "/" in txt:
            p, q = txt.split("/", 1)
            return math.atan2(float(p), float(q))
        return math.atan(float(txt))
    return args.theta


# ---- subcommands -------------------------------------------------------------


def _cmd_surface(args) -> int:
    s = build_surface(args.n)
    _emit_json(surface_json(s), args.out)
    return 0


def _cmd_trace(args) -> int:
    s = build_surface(args.n)
    k = index_for_letter(args.edge)
    try:
        traj = trace_from_edge(s, k, args.t, args.theta, max_crossings=args.crossings, delta=args.delta)
    except CornerHit as e:
        _emit_json({"error": "corner-hit", "detail": str(e)}, args.out)
        return 1
    _emit_json(trajectory_json(traj), args.out)
    return 0


def _cmd_derive(args) -> int:
    word = args.seq
    if args.method == "ksl":
        derived = ksl_cyclic(word) if args.cyclic else ksl_window(word)
    else:
        s = build_surface(args.n)
        pipeline = build_pipeline_diagrams(s, samples=args.samples, seed=args.seed)
        try:
            derived = derive_via_diagrams(pipeline, word, cyclic=args.cyclic)
        except InvalidPath as e:
            _emit_json({"error": "invalid-path", "detail": str(e)}, args.out)
            return 1
    if args.cyclic:
        derived = cyclic_normal_form(derived)
    if args.format == "json":
        _emit_json(
            {
                "input": word,
                "topology": "cyclic" if args.cyclic else "window",
                "method": args.method,
                "derived": derived,
                "status": "empty" if derived == "" else "ok",
            },
            args.out,
        )
    else:
        _emit(derived, args.out)
    return 0


def _cmd_derive_geometric(args) -> int:
    s = build_surface(args.n)
    k = index_for_letter(args.edge)
    try:
        traj = trace_from_edge(s, k, args.t, args.theta, max_crossings=args.crossings, delta=args.delta)
        result = derive_geometric(s, traj)
    except CornerHit as e:
        _emit_json({"error": "corner-hit", "detail": str(e)}, args.out)
        return 1
    derived = result.letters
    if result.cyclic:
        derived = cyclic_normal_form(derived)
    _emit_json(
        {
            "derived": derived,
            "cyclic": result.cyclic,
            "theta_normalized": round_sig(result.normalized_theta),
            "rotation_steps": result.rotation_steps,
            "trace": trajectory_json(traj),
        },
        args.out,
    )
    return 0


def _cmd_diagram(args) -> int:
    s = build_surface(args.n)
    if args.stage == "arrows":
        from .derivation import build_arrows_diagram

        diagram = build_arrows_diagram(s, tol=args.tol)
    else:
        pipeline = build_pipeline_diagrams(s, tol=args.tol, samples=args.samples, seed=args.seed)
        diagram = pipeline.stage(args.stage)
    if args.format == "dot":
        _emit(diagram_dot(diagram), args.out)
    else:
        _emit_json(diagram_json(diagram), args.out)
    return 0


def _cmd_guide(args) -> int:
    guide = build_vertex_guide(args.n)
    points = [
        {
            "polygon": p.polygon,
            "side": p.side,
            "level": p.level,
            "x": round_sig(p.x),
            "y": round_sig(p.y),
        }
        for p in guide.points
    ]
    _emit_json({"n": args.n, "points": points}, args.out)
    return 0


def _check_moduli(args) -> dict:
    s = build_surface(args.n)
    ref = float(highprec.shear_coefficient(args.n))
    devs = [abs(c.modulus - ref) for c in decompose_cylinders(s)]
    return {"pass": max(devs) <= args.tol, "max_dev": round_sig(max(devs), 3)}


def _check_reassembly(args) -> dict:
    rep = verify_reassembly(args.n, tol=max(args.tol, 1e-8))
    return {
        "pass": rep.passed and rep.y_preserved,
        "max_residual": round_sig(rep.max_residual, 3),
        "worst_vertex": list(rep.worst),
        "y_bit_identical": rep.y_preserved,
    }


def _check_identities(args) -> dict:
    import random

    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(1000):
        theta = rng.uniform(0.01, math.pi - 0.01)
        k = rng.randrange(1, 13)
        lhs, rhs = telescoping_identity(theta, k)
        worst = max(worst, abs(lhs - rhs))
        lhs, rhs = identity_sum(theta, k)
        worst = max(worst, abs(lhs - rhs))
    return {"pass": worst < 1e-10, "max_dev": round_sig(worst, 3)}


def _check_equivalence(args) -> dict:
    s = build_surface(args.n)
    pipeline = build_pipeline_diagrams(s, samples=args.samples, seed=args.seed)
    rep = sandwich_equivalence_check(pipeline, max_cycle_len=8, windows=200, seed=args.seed)
    return {
        "pass": rep.passed,
        "cycles_checked": rep.cycles_checked,
        "windows_checked": rep.windows_checked,
        "failures": rep.failures[:5],
    }


def _check_torus(args) -> dict:
    import random

    rng = random.Random(args.seed)
    checked = failures = 0
    while checked < 200:
        theta = rng.uniform(0.02, math.pi / 4 - 0.02)
        start = (rng.random(), rng.random())
        try:
            traj = torus_trace(start, theta, max_crossings=rng.randrange(8, 40))
            geo = torus_derive_geometric(traj)
        except CornerHit:
            continue
        checked += 1
        if traj.periodic:
            ok = cyclic_normal_form(geo) == cyclic_normal_form(torus_derive_rule(traj.period_word, cyclic=True))
        else:
            rule = torus_derive_rule(traj.letters)
            rp, gp = rule.split("A"), geo.split("A")
            ok = (
                len(rp) == len(gp)
                and [len(x) for x in rp[1:-1]] == [len(x) for x in gp[1:-1]]
                and len(gp[0]) in (len(rp[0]), len(rp[0]) - 1)
                and len(gp[-1]) in (len(rp[-1]), len(rp[-1]) - 1)
            )
        if not ok:
            failures += 1
    return {"pass": failures == 0, "orbits_checked": checked, "failures": failures}


_CHECKS = {
    "moduli": _check_moduli,
    "reassembly": _check_reassembly,
    "identities": _check_identities,
    "equivalence": _check_equivalence,
    "torus": _check_torus,
}


def _cmd_verify(args) -> int:
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    for name in names:
        if name not in _CHECKS:
            raise ValueError(f"unknown check {name!r}; available: {', '.join(sorted(_CHECKS))}")
    # independent checks fan out concurrently and join in a fixed order
    with ThreadPoolExecutor(max_workers=max(1, len(names))) as pool:
        futures = {name: pool.submit(_CHECKS[name], args) for name in names}
        results = {name: futures[name].result() for name in names}
    report = {
        "n": args.n,
        "tol": args.tol,
        "seed": args.seed,
        "precision_digits": highprec.oracle_digits(),
        "checks": results,
    }
    _emit_json(report, args.out)
    return 0 if all(r["pass"] for r in results.values()) else 1


def _cmd_torus(args) -> int:
    if args.action == "derive" and args.seq is not None:
        derived = torus_derive_rule(args.seq, cyclic=args.cyclic)
        if args.cyclic:
            derived = cyclic_normal_form(derived)
        _emit_json(
            {
                "input": args.seq,
                "topology": "cyclic" if args.cyclic else "window",
                "method": "rule",
                "derived": derived,
                "status": "empty" if derived == "" else "ok",
            },
            args.out,
        )
        return 0
    theta = _parse_theta(args)
    start = tuple(float(v) for v in args.start.split(","))
    try:
        traj = torus_trace(start, theta, max_crossings=args.crossings)
    except CornerHit as e:
        _emit_json({"error": "corner-hit", "detail": str(e)}, args.out)
        return 1
    if args.action == "trace":
        letters = traj.period_word if traj.periodic else traj.letters
        _emit_json(
            {
                "start": [round_sig(start[0]), round_sig(start[1])],
                "theta": round_sig(theta),
                "letters": list(letters),
                "periodic": traj.periodic,
                "period": traj.period,
            },
            args.out,
        )
        return 0
    try:
        derived = torus_derive_geometric(traj)
    except CornerHit as e:
        _emit_json({"error": "corner-hit", "detail": str(e)}, args.out)
        return 1
    if traj.periodic:
        derived = cyclic_normal_form(derived)
    _emit_json(
        {
            "input": traj.period_word if traj.periodic else traj.letters,
            "topology": "cyclic" if traj.periodic else "window",
            "method": "geometric",
            "derived": derived,
            "status": "empty" if derived == "" else "ok",
        },
        args.out,
    )
    return 0


def _cmd_render(args) -> int:
    s = build_surface(args.n)
    if args.what == "guide":
        svg = render_guide_svg(build_vertex_guide(args.n))
    else:
        traj = None
        if args.theta is not None:
            k = index_for_letter(args.edge)
            try:
                traj = trace_from_edge(s, k, args.t, args.theta, max_crossings=args.crossings, delta=args.delta)
            except CornerHit as e:
                _emit_json({"error": "corner-hit", "detail": str(e)}, args.out)
                return 1
        guide = build_vertex_guide(args.n) if args.guide else None
        svg = render_surface_svg(
            s, trajectory=traj, guide=guide, show_aux=args.aux, show_primed=args.primed
        )
    _emit(svg, args.out)
    return 0


# ---- parser -------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, n_default: int = 5) -> None:
    p.add_argument("--n", type=int, default=n_default, help="number of polygon sides (odd, >= 5)")
    p.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    p.add_argument("--delta", type=float, default=1e-12, help="corner-hit tolerance")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--samples", type=int, default=80, help="sample count for sampled checks")
    p.add_argument("--out", type=str, default=None, help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oddgon", description="Double odd n-gon surfaces, flows, and derivation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("surface", help="emit the surface geometry as JSON")
    _add_common(p)
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("trace", help="trace a trajectory from an edge point")
    _add_common(p)
    p.add_argument("--edge", type=str, required=True, help="edge: S2, B, or 2")
    p.add_argument("--t", type=float, required=True, help="parameter along the upper representative, in (0,1)")
    p.add_argument("--theta", type=float, required=True, help="direction in radians")
    p.add_argument("--crossings", type=int, default=200)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("derive", help="derive a letter sequence")
    _add_common(p)
    p.add_argument("--seq", type=str, required=True)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--method", choices=("ksl", "diagram"), default="ksl")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("derive-geometric", help="derive by tracing primed-edge crossings")
    _add_common(p)
    p.add_argument("--edge", type=str, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--crossings", type=int, default=100)
    p.set_defaults(func=_cmd_derive_geometric)

    p = sub.add_parser("diagram", help="emit a transition diagram")
    _add_common(p)
    p.add_argument("--stage", choices=("arrows", "augmented", "dual", "primed"), default="arrows")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=_cmd_diagram)

    p = sub.add_parser("guide", help="emit the vertex guide point set")
    _add_common(p)
    p.set_defaults(func=_cmd_guide)

    p = sub.add_parser("verify", help="run numeric verification checks")
    _add_common(p)
    p.add_argument(
        "--checks",
        type=str,
        default="moduli,reassembly",
        help=f"comma-separated subset of: {', '.join(sorted(_CHECKS))}",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("torus", help="square-torus baseline")
    _add_common(p)
    p.add_argument("action", choices=("trace", "derive"))
    p.add_argument("--seq", type=str, default=None, help="apply the torus rule to this word")
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--slope", type=str, default=None, help="direction as p/q or a float slope")
    p.add_argument("--theta", type=float, default=None, help="direction in radians")
    p.add_argument("--start", type=str, default="0.23,0.61")
    p.add_argument("--crossings", type=int, default=100)
    p.set_defaults(func=_cmd_torus)

    p = sub.add_parser("render", help="render an SVG figure")
    _add_common(p)
    p.add_argument("--what", choices=("surface", "guide"), default="surface")
    p.add_argument("--edge", type=str, default="S2")
    p.add_argument("--t", type=float, default=0.55)
    p.add_argument("--theta", type=float, default=None, help="trace and draw a trajectory at this direction")
    p.add_argument("--crossings", type=int, default=60)
    p.add_argument("--guide", action="store_true", help="overlay guide dots")
    p.add_argument("--aux", action="store_true", help="draw auxiliary diagonals")
    p.add_argument("--primed", action="store_true", help="draw primed-edge pieces")
    p.set_defaults(func=_cmd_render)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "torus":
            if args.action == "trace" and args.seq is not None:
                raise ValueError("torus trace takes --slope/--theta, not --seq")
            if args.seq is None and args.slope is None and args.theta is None:
                raise ValueError("torus needs --seq, --slope, or --theta")
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
