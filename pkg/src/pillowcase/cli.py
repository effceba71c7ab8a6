"""Command-line interface: image sweeps, homology queries, splice search.

Exit codes: 0 success; 1 a splice search that ran but found nothing;
2 malformed input (bad model/job/arguments); 3 contract violations such as
a gluing determinant different from -1.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .families import builtin_model, MODEL_NAMES
from .geometry import GluingMatrix, essential_class
from .gluer import search_nonabelian_rep, splice
from .homology import (enumerate_standard_tuples, filling_homology,
                       glue_homology, seifert_h1, standard_form_reduce)
from .presentations import KnotExteriorModel
from .render import image_to_csv, image_to_svg
from .solver import (SolverConfig, corner_diagnostics, extract_essential_curve,
                     lift_to_cut_open, sample_pillowcase_image)

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_BAD_INPUT = 2
EXIT_CONTRACT = 3


class InputError(Exception):
    pass


class ContractError(Exception):
    pass


def load_model(ref: str) -> KnotExteriorModel:
    if ref.endswith(".json") or "/" in ref:
        path = Path(ref)
        if not path.exists():
            raise InputError(f"model file not found: {ref}")
        try:
            return KnotExteriorModel.from_json(path.read_text())
        except (ValueError, json.JSONDecodeError) as exc:
            raise InputError(f"invalid model JSON {ref}: {exc}") from exc
    try:
        return builtin_model(ref)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_gluing(spec, model1: KnotExteriorModel | None = None,
                 model2: KnotExteriorModel | None = None) -> GluingMatrix:
    """Parse swap | fiber-swap | skew | skew:p | a,b,p,c | mapping."""
    if isinstance(spec, dict):
        try:
            entries = {k: int(spec[k]) for k in ("a", "b", "p", "c")}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"gluing mapping needs integer a,b,p,c: {spec}") from exc
        try:
            return GluingMatrix(**entries)
        except ValueError as exc:
            raise ContractError(str(exc)) from exc
    if spec == "swap":
        return GluingMatrix.swap()
    if spec in ("skew", "sigma"):
        return GluingMatrix.skew(2)
    if spec.startswith("skew:") or spec.startswith("sigma:"):
        try:
            p = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad skew gluing {spec!r}") from exc
        try:
            return GluingMatrix.skew(p)
        except ValueError as exc:
            raise ContractError(str(exc)) from exc
    if spec == "fiber-swap":
        if model1 is None or model2 is None:
            raise InputError("fiber-swap needs both models")
        if model1.fiber_slope is None or model2.fiber_slope is None:
            raise InputError("fiber-swap needs models with fiber slopes")
        f1, e1 = model1.fiber_slope
        f2, e2 = model2.fiber_slope
        if abs(e1) != 1:
            raise InputError("side-1 fiber slope is not dual to the meridian")
        # mu1 = fiber2 and fiber1 = mu2
        a, b = f2, e2
        p, c = (1 - f1 * f2) * e1, -f1 * e2 * e1
        try:
            return GluingMatrix(a=a, b=b, p=p, c=c)
        except ValueError as exc:
            raise ContractError(str(exc)) from exc
    try:
        a, b, p, c = (int(v) for v in str(spec).split(","))
    except ValueError as exc:
        raise InputError(f"cannot parse gluing {spec!r}") from exc
    try:
        return GluingMatrix(a=a, b=b, p=p, c=c)
    except ValueError as exc:
        raise ContractError(str(exc)) from exc


def _config_from_args(args) -> SolverConfig:
    base = SolverConfig.from_json(args.config) if getattr(args, "config", None) \
        else SolverConfig()
    updates = {}
    env_threads = os.environ.get("PILLOWCASE_THREADS")
    if env_threads:
        try:
            updates["threads"] = int(env_threads)
        except ValueError as exc:
            raise InputError(f"bad PILLOWCASE_THREADS value {env_threads!r}") from exc
    for name in ("tol", "restarts", "seed", "resolution", "threads"):
        val = getattr(args, name, None)
        if val is not None:
            updates[name] = val
    if getattr(args, "deterministic", False):
        updates["deterministic"] = True
    return SolverConfig(**{**base.__dict__, **updates})


def _emit(data: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# image command

def cmd_image(args) -> int:
    model = load_model(args.model)
    config = _config_from_args(args)
    img = sample_pillowcase_image(model, config.resolution, config)
    curve = extract_essential_curve(img)
    lift = lift_to_cut_open(img)
    corners = corner_diagnostics(img)
    summary = {
        "model": model.name,
        "resolution": img.resolution,
        "arcs": len(img.arcs),
        "points": len(img.points),
        "isolated_points": len(img.isolated),
        "essential_curve": essential_class(curve) if curve is not None else None,
        "lifts_to_cut_open": lift.ok,
        "corner_witnesses": [rec.point.as_tuple() for rec in corners],
        "seed": config.seed,
    }
    if args.out_svg:
        Path(args.out_svg).write_text(image_to_svg(img))
        summary["svg"] = args.out_svg
    if args.out_csv:
        Path(args.out_csv).write_text(image_to_csv(img))
        summary["csv"] = args.out_csv
    lines = [
        f"model {model.name}: {len(img.arcs)} arcs, {len(img.points)} witness points "
        f"({len(img.isolated)} isolated) at resolution {img.resolution}",
        "essential curve: " + (
            f"found, class {summary['essential_curve']}" if curve is not None
            else "none"),
        "cut-open lift: " + ("ok" if lift.ok else
                             f"fails at {len(lift.violations)} witnesses"),
        "corner diagnostics: " + (
            ", ".join(str(rec.point) for rec in corners) if corners else "clear"),
    ]
    _emit(summary, args.json, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# homology commands

def cmd_homology(args) -> int:
    sub = args.homology_command
    if sub == "glue":
        m1 = load_model(args.model1)
        m2 = load_model(args.model2)
        g = parse_gluing(args.gluing, m1, m2)
        group = glue_homology(m1, m2, g)
        _emit({"invariant_factors": list(group.torsion), "rank": group.rank,
               "group": str(group)},
              args.json, f"H1 = {group}  ({group.pretty_factors()})")
        return EXIT_OK
    if sub == "fill":
        model = load_model(args.model)
        if math.gcd(args.p, args.q) != 1:
            raise InputError(f"slope ({args.p}, {args.q}) is not primitive")
        group = filling_homology(model, (args.p, args.q))
        _emit({"invariant_factors": list(group.torsion), "rank": group.rank,
               "group": str(group)},
              args.json, f"H1 = {group}  ({group.pretty_factors()})")
        return EXIT_OK
    if sub == "seifert":
        vals = args.values
        data = [(vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])]
        try:
            res = seifert_h1(data)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _emit({"invariant_factors": list(res.group.torsion),
               "rank": res.group.rank, "order": res.order_formula},
              args.json,
              f"H1 = {res.group}  order formula {res.order_formula}"
              + ("  (b1 > 0)" if res.positive_rank else ""))
        return EXIT_OK
    if sub == "standard-form":
        try:
            res = standard_form_reduce(args.a, args.b, args.c, args.p,
                                       allow_reversal=args.allow_reversal)
        except ValueError as exc:
            if "determinant" in str(exc) or "prime" in str(exc):
                raise ContractError(str(exc)) from exc
            raise InputError(str(exc)) from exc
        _emit({"a": res.a, "b": res.b, "c": res.c, "p": res.p,
               "twist_moves": [list(m) for m in res.twist_moves],
               "orientation_reversed": res.orientation_reversed},
              args.json,
              f"(a, b, c) = ({res.a}, {res.b}, {res.c})  moves "
              f"{list(res.twist_moves)}"
              + ("  orientation reversed" if res.orientation_reversed else ""))
        return EXIT_OK
    if sub == "tuples":
        try:
            tuples = enumerate_standard_tuples(args.p)
        except ValueError as exc:
            raise ContractError(str(exc)) from exc
        _emit({"p": args.p, "tuples": [list(t) for t in tuples]},
              args.json,
              "\n".join(f"(a, b, c) = ({a}, {b}, {c})" for a, b, c in tuples))
        return EXIT_OK
    raise InputError(f"unknown homology subcommand {sub!r}")


# ---------------------------------------------------------------------------
# splice command

def cmd_splice(args) -> int:
    path = Path(args.job)
    if not path.exists():
        raise InputError(f"job file not found: {args.job}")
    try:
        job = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid job JSON: {exc}") from exc
    try:
        m1 = load_model(job["model1"])
        m2 = load_model(job["model2"])
    except KeyError as exc:
        raise InputError(f"job is missing {exc}") from exc
    try:
        g = parse_gluing(job.get("gluing", "swap"), m1, m2)
    except ContractError as exc:
        # a malformed gluing makes the whole job malformed
        raise InputError(str(exc)) from exc
    config_fields = {k: job[k] for k in
                     ("tol", "restarts", "seed", "resolution", "min_gap",
                      "threads", "deterministic") if k in job}
    env_threads = os.environ.get("PILLOWCASE_THREADS")
    if env_threads:
        try:
            config_fields["threads"] = int(env_threads)
        except ValueError as exc:
            raise InputError(f"bad PILLOWCASE_THREADS value {env_threads!r}") from exc
    if args.threads is not None:
        config_fields["threads"] = args.threads
    if args.deterministic:
        config_fields["deterministic"] = True
    config = SolverConfig(**{**SolverConfig().__dict__, **config_fields})
    spliced = splice(m1, m2, g)
    result = search_nonabelian_rep(spliced, config)
    payload = {
        "model1": m1.name,
        "model2": m2.name,
        "gluing": {"a": g.a, "b": g.b, "p": g.p, "c": g.c},
        "resolution": config.resolution,
        "seed": config.seed,
        "found": result.found,
    }
    if result.found:
        payload["representation"] = [
            [q.w, q.x, q.y, q.z] for q in result.representation.images]
        payload["boundary_point"] = list(result.boundary_point.as_tuple())
        payload["residual"] = result.residual
        payload["gap"] = result.gap
        payload["gap_side1"] = result.gap_side1
        payload["gap_side2"] = result.gap_side2
    else:
        payload["diagnostics"] = {
            "candidates_tried": len(result.diagnostics),
            "details": [d for d in result.diagnostics],
        }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if args.svg:
        img1 = sample_pillowcase_image(m1, config.resolution, config)
        img2 = sample_pillowcase_image(m2, config.resolution, config)
        from .geometry import induced_boundary_transform
        from .render import mark_points, polylines_to_svg
        curves = list(img1.arcs) + list(
            img2.transform_arcs(lambda v: induced_boundary_transform(g, v)))
        svg = polylines_to_svg(curves, title=f"{m1.name} glued to {m2.name}")
        if result.found:
            svg = mark_points(svg, [result.boundary_point])
        Path(args.svg).write_text(svg)
    return EXIT_OK if result.found else EXIT_NOT_FOUND


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pillowcase",
        description="SU(2) pillowcase images, splice search, and homology calculus")
    sub = parser.add_subparsers(dest="command", required=True)

    p_img = sub.add_parser("image", help="sweep a model into the pillowcase")
    p_img.add_argument("model", help=f"model name ({', '.join(MODEL_NAMES)}, "
                                     "torus:p,q) or JSON path")
    p_img.add_argument("--resolution", type=int, default=None)
    p_img.add_argument("--restarts", type=int, default=None)
    p_img.add_argument("--tol", type=float, default=None)
    p_img.add_argument("--seed", type=int, default=None)
    p_img.add_argument("--threads", type=int, default=None)
    p_img.add_argument("--config", default=None, help="solver config JSON file")
    p_img.add_argument("--out-svg", default=None)
    p_img.add_argument("--out-csv", default=None)
    p_img.add_argument("--json", action="store_true")
    p_img.set_defaults(func=cmd_image)

    p_hom = sub.add_parser("homology", help="exact integer homology queries")
    hom_sub = p_hom.add_subparsers(dest="homology_command", required=True)

    p_glue = hom_sub.add_parser("glue", help="H1 of a glued pair of exteriors")
    p_glue.add_argument("model1")
    p_glue.add_argument("model2")
    p_glue.add_argument("--gluing", required=True,
                        help="swap | fiber-swap | skew[:p] | a,b,p,c")
    p_glue.add_argument("--json", action="store_true")

    p_fill = hom_sub.add_parser("fill", help="H1 of a Dehn filling")
    p_fill.add_argument("model")
    p_fill.add_argument("p", type=int)
    p_fill.add_argument("q", type=int)
    p_fill.add_argument("--json", action="store_true")

    p_sfs = hom_sub.add_parser("seifert", help="H1 of a 3-fiber Seifert space")
    p_sfs.add_argument("values", type=int, nargs=6,
                       metavar=("N"), help="a1 b1 a2 b2 a3 b3")
    p_sfs.add_argument("--json", action="store_true")

    p_std = hom_sub.add_parser("standard-form", help="normalize a gluing tuple")
    p_std.add_argument("a", type=int)
    p_std.add_argument("b", type=int)
    p_std.add_argument("c", type=int)
    p_std.add_argument("p", type=int)
    p_std.add_argument("--allow-reversal", action="store_true")
    p_std.add_argument("--json", action="store_true")

    p_tup = hom_sub.add_parser("tuples", help="standard tuples for a prime")
    p_tup.add_argument("p", type=int)
    p_tup.add_argument("--json", action="store_true")

    p_hom.set_defaults(func=cmd_homology)

    p_spl = sub.add_parser("splice", help="search a splice for representations")
    p_spl.add_argument("job", help="job spec JSON file")
    p_spl.add_argument("--out", default=None, help="write result JSON here")
    p_spl.add_argument("--svg", default=None, help="write combined image SVG")
    p_spl.add_argument("--threads", type=int, default=None)
    p_spl.add_argument("--deterministic", action="store_true")
    p_spl.set_defaults(func=cmd_splice)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
