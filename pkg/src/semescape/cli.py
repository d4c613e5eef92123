"""Command-line interface.

Subcommands: ``render`` (escape raster to an image), ``verify`` (run catalog
scenarios), ``orbit`` (classify one orbit, optionally dumping a CSV trace),
``components`` (label a saved raster), and ``conjugate`` (conjugate a saved
semigroup by an affine map).  Exit status is 0 when every requested scenario
passes, 1 otherwise, and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import InvalidConfig, UnknownScenario
from .escape import Budget, classify_orbit, compute_grid, orbit_points, raster_from_json
from .maps import map_from_dict
from .postsingular import orbit_csv_lines
from .render import render
from .scenarios import PASS, SCENARIOS, run_scenarios
from .topology import boundary_csv_lines, boundary, component_report, connected_components
from .words import semigroup_from_dict, semigroup_to_dict
from .conjugacy import conjugate_semigroup
from .maps import Affine


def _load_json_arg(text: str) -> dict:
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return json.loads(text)


def _parse_window(text: str):
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise ValueError("window must be re_min,re_max,im_min,im_max")
    return tuple(parts)


def _parse_size(text: str):
    w, _, h = text.partition("x")
    return int(w), int(h)


def _parse_point(text: str) -> complex:
    re, _, im = text.partition(",")
    return complex(float(re), float(im) if im else 0.0)


def _parse_affine(text: str) -> Affine:
    alpha, _, beta = text.partition(",")
    return Affine(complex(alpha), complex(beta) if beta else 0j)


def _cmd_render(args) -> int:
    m = map_from_dict(_load_json_arg(args.map))
    w, h = _parse_size(args.size)
    budget = Budget(max_iter=args.max_iter)
    raster = compute_grid(m, _parse_window(args.window), w, h, budget=budget)
    render(raster, palette=args.palette, path=args.out)
    print(args.out)
    return 0


def _cmd_verify(args) -> int:
    ids = None if args.scenario == "all" else [args.scenario]
    config = _load_json_arg(args.config) if args.config else None
    reports = run_scenarios(ids, config=config, out_dir=args.out_dir, jobs=args.jobs)
    all_pass = True
    for rep in reports:
        all_pass &= rep.verdict == PASS
        keyvals = " ".join(f"{k}={v:.6g}" for k, v in sorted(rep.metrics.items()))
        print(f"{rep.scenario_id}: {rep.verdict} ({keyvals})")
    return 0 if all_pass else 1


def _cmd_orbit(args) -> int:
    m = map_from_dict(_load_json_arg(args.map))
    z = _parse_point(args.z)
    budget = Budget(max_iter=args.iters, r_escape=args.r_escape, r_bound=args.r_bound)
    record = classify_orbit(m, z, budget)
    out = {"status": record.status, "step": record.step, "max_modulus": record.max_modulus}
    print(json.dumps(out))
    if args.csv:
        pts = orbit_points(m, z, args.iters)
        with open(args.csv, "w") as fh:
            fh.write("\n".join(orbit_csv_lines(pts)) + "\n")
    return 0


def _cmd_components(args) -> int:
    with open(args.raster) as fh:
        raster = raster_from_json(fh.read())
    cs = connected_components(raster, connectivity=args.connectivity)
    print(json.dumps(component_report(cs), indent=2))
    if args.boundary_csv:
        with open(args.boundary_csv, "w") as fh:
            fh.write("\n".join(boundary_csv_lines(boundary(raster))) + "\n")
    return 0


def _cmd_conjugate(args) -> int:
    g = semigroup_from_dict(_load_json_arg(args.semigroup))
    phi = _parse_affine(args.phi)
    print(json.dumps(semigroup_to_dict(conjugate_semigroup(g, phi)), indent=2))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semescape",
        description="Escape-set analysis for semigroups of entire maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="rasterise a map's escape classification to an image")
    p.add_argument("--map", required=True, help="map JSON (inline or a file path)")
    p.add_argument("--window", required=True, help="re_min,re_max,im_min,im_max")
    p.add_argument("--size", required=True, help="WxH in pixels")
    p.add_argument("--out", required=True, help="output image path (.png or .ppm)")
    p.add_argument("--palette", default="inferno")
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("verify", help="run verification scenarios")
    p.add_argument("scenario", help=f"scenario id or 'all'; ids: {', '.join(sorted(SCENARIOS))}")
    p.add_argument("--config", help="JSON config overrides (inline or a file path)")
    p.add_argument("--out-dir", help="directory for reports and figures")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("orbit", help="classify one orbit")
    p.add_argument("--map", required=True)
    p.add_argument("--z", required=True, help="re,im")
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--r-escape", type=float, default=1e50)
    p.add_argument("--r-bound", type=float, default=1e3)
    p.add_argument("--csv", help="write the orbit trace (step,re,im,modulus)")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("components", help="label a saved raster's escaping components")
    p.add_argument("--raster", required=True, help="raster JSON file")
    p.add_argument("--connectivity", type=int, default=8, choices=(4, 8))
    p.add_argument("--boundary-csv", help="write the two-sided pixel boundary as CSV")
    p.set_defaults(func=_cmd_components)

    p = sub.add_parser("conjugate", help="conjugate a semigroup by an affine map")
    p.add_argument("--semigroup", required=True, help="semigroup JSON (inline or a file path)")
    p.add_argument("--phi", required=True, help="alpha,beta")
    p.set_defaults(func=_cmd_conjugate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UnknownScenario, InvalidConfig, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
