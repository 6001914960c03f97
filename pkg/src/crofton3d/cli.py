"""Command-line front end.

Every command prints JSON lines. ``verify`` lines carry the run manifest (the
reproducibility key) next to the report; the worker count is deliberately left
out of it because results do not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .convex_body import Ball, builtin, load_polytope_json, planar_polygon, quermassintegrals
from .errors import Crofton3dError, PointInsideBody
from .mc import McConfig
from .measures import (
    VerifierReport,
    constant_width_bounds,
    crofton_baselines,
    lemma1_consistency,
    lower_bound_positivity_root,
    sphere_constant_pair,
    sphere_constant_triple,
    verify_herglotz,
    verify_planar_crofton,
    verify_thm1,
    verify_thm2,
    verify_thm3,
    verify_thm4,
)
from .measures.lines_planes import PAIR_MEAN, TRIPLE_MEAN
from .setfun import alpha_closed
from .solid_angle import solid_angle_of
from .sphere import SphericalCap

VERIFIERS = ("thm1", "thm2", "thm3", "thm4", "herglotz", "baselines", "lemma1", "planar", "constants", "width")
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass(frozen=True)
class RunManifest:
    command: str
    body: dict
    seed: int
    samples: int
    r_trunc: float | None
    tolerances: dict = field(default_factory=dict)
    output: str | None = None


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True)


def parse_count(text: str) -> int:
    """Accepts ``1000000``, ``1e6`` or ``10**6``."""
    try:
        if "**" in text:
            base, exp = text.split("**")
            value = int(base) ** int(exp)
        else:
            value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"not a positive integer: {text!r}")
    return int(value)


def _file_digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_body(args):
    """Returns ``(body, descriptor)``; raises ``json.JSONDecodeError`` on malformed files."""
    if args.body:
        return load_polytope_json(args.body), {"file": args.body, "sha256": _file_digest(args.body)}
    desc = {"builtin": args.builtin}
    if args.builtin == "ball":
        desc["r"] = args.r
    return builtin(args.builtin, args.r), desc


def load_polygon(path: str | None):
    if path is None:
        return planar_polygon([[0, 0], [1, 0], [1, 1], [0, 1]]), {"polygon": "unit_square"}
    data = json.loads(Path(path).read_text())
    points = data["points"] if isinstance(data, dict) else data
    return planar_polygon(np.asarray(points, dtype=float)), {"polygon": path, "sha256": _file_digest(path)}


# -- commands ------------------------------------------------------------------------


def cmd_body(args) -> int:
    body, _ = load_body(args)
    print(dumps(quermassintegrals(body).as_dict()))
    return 0


def cmd_solid_angle(args) -> int:
    body, desc = load_body(args)
    region = solid_angle_of(body, np.asarray(args.point, dtype=float))
    record = {"body": desc, "point": list(args.point), "area": region.area, "perimeter": region.perimeter,
              "alpha": alpha_closed(region)}
    if isinstance(region, SphericalCap):
        record.update(kind="cap", axis=region.axis, radius=region.radius)
    else:
        record.update(kind="polygon", vertices=region.vertices)
    print(dumps(record))
    return 0


def constants_reports(cfg: McConfig) -> list[VerifierReport]:
    return [
        VerifierReport("pair_mean", sphere_constant_pair(cfg), PAIR_MEAN, 0.0),
        VerifierReport("triple_mean", sphere_constant_triple(cfg), TRIPLE_MEAN, 0.0),
    ]


def width_reports(a: float = 2.0) -> list[VerifierReport]:
    """Formula-level checks of the constant-width bounds at the ball (``c = 1``)."""
    b = constant_width_bounds(a, 1.0)
    ball_l2 = 4 / 3 * np.pi**3 * a**3
    return [
        VerifierReport("width_slice_l2_ball", b.slice_l2_upper, ball_l2, 1e-12,
                       details={"open_equality_question": b.open_equality_question}),
        VerifierReport("width_remark_lower", b.remark_lower, 0.0, 0.0),
        VerifierReport("width_remark_upper", b.remark_upper, 0.0, 0.0),
        VerifierReport("width_positivity_root", lower_bound_positivity_root(), 0.657, 0.0,
                       details={"abs_tol": 1e-3},
                       passed=abs(lower_bound_positivity_root() - 0.657) < 1e-3),
    ]


def run_verifier(name: str, args, cfg: McConfig) -> list[VerifierReport]:
    tol = {} if args.rel_tol is None else {"rel_tol": args.rel_tol}
    if name == "constants":
        return constants_reports(cfg)
    if name == "width":
        return width_reports()
    if name == "planar":
        polygon, _ = load_polygon(args.polygon)
        return [verify_planar_crofton(polygon, cfg, args.rtrunc, **tol)]
    body, _ = load_body(args)
    if name == "baselines":
        return crofton_baselines(body, cfg, **tol)
    if name == "lemma1":
        return [lemma1_consistency(body, cfg, args.rtrunc, **tol)]
    if name == "thm2":
        return [verify_thm2(body, cfg, args.inner, args.rtrunc, **tol)]
    if name == "thm4":
        extra = {} if args.rel_tol is None else {"equality_tol": args.rel_tol}
        return [verify_thm4(body, cfg, args.rtrunc, args.method, **extra)]
    fn = {"thm1": verify_thm1, "thm3": verify_thm3, "herglotz": verify_herglotz}[name]
    return [fn(body, cfg, args.rtrunc, args.method, **tol)]


def manifest_for(args) -> RunManifest:
    if args.name in ("constants", "width"):
        desc = {}
    elif args.name == "planar":
        desc = load_polygon(args.polygon)[1]
    else:
        desc = load_body(args)[1]
    tolerances = {} if args.rel_tol is None else {"rel_tol": args.rel_tol}
    command = f"verify {args.name}"
    if args.name == "thm2":
        tolerances["inner"] = args.inner
    if args.name in ("thm1", "thm3", "thm4", "herglotz"):
        tolerances["method"] = args.method
    return RunManifest(command, desc, args.seed, args.samples, args.rtrunc, tolerances, args.json)


def write_csv(path: str, reports: list[VerifierReport]):
    cols = ["name", "lhs", "rhs", "difference", "sigma", "residual_sigma", "rel_error", "rel_tol", "passed"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in reports:
            d = r.to_dict()
            w.writerow([d["name"], d["lhs"]["value"], d["rhs"]["value"]] + [d[c] for c in cols[3:]])


def cmd_verify(args) -> int:
    cfg = McConfig.make(args.samples, seed=args.seed, workers=args.threads)
    manifest = asdict(manifest_for(args))
    reports = run_verifier(args.name, args, cfg)
    lines = [dumps({"manifest": manifest, "report": r.to_dict()}) for r in reports]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(text)
    if args.csv:
        write_csv(args.csv, reports)
    return 0 if all(r.passed for r in reports) else EXIT_FAIL


# -- argument parsing ------------------------------------------------------------------


def _add_body_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--builtin", choices=["ball", "cube", "tetrahedron"], default="cube")
    g.add_argument("--body", metavar="PATH", help='JSON file {"points": [[x, y, z], ...]}')
    p.add_argument("--r", type=float, default=1.0, help="ball radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crofton3d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("body", help="print the quermassintegrals V, F, M")
    _add_body_args(p)
    p.set_defaults(func=cmd_body)

    p = sub.add_parser("solid-angle", help="solid angle of the body seen from an exterior point")
    _add_body_args(p)
    p.add_argument("--point", type=float, nargs=3, required=True, metavar=("X", "Y", "Z"))
    p.set_defaults(func=cmd_solid_angle)

    p = sub.add_parser("verify", help="run a verifier and print JSON-lines reports")
    p.add_argument("name", choices=VERIFIERS)
    _add_body_args(p)
    p.add_argument("--polygon", metavar="PATH", help="2D polygon JSON for 'planar' (default: unit square)")
    p.add_argument("--samples", type=parse_count, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--rtrunc", type=float, default=None, help="truncation radius (default 20 circumradii)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--inner", type=parse_count, default=1000, help="inner triples per point for thm2")
    p.add_argument("--method", choices=["auto", "mc", "quadrature"], default="auto")
    p.add_argument("--rel-tol", type=float, default=None, help="override the relative tolerance")
    p.add_argument("--json", metavar="PATH", help="also write the JSON lines here")
    p.add_argument("--csv", metavar="PATH", help="write a CSV summary here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as e:
        print(f"error: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}", file=sys.stderr)
    except PointInsideBody as e:
        print(f"error: point is inside the body: {e}", file=sys.stderr)
    except (Crofton3dError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
