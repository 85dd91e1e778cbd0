"""Command-line front end.

Usage::

    helixsub frenet "cos(t),sin(t),t" --t-range 0 6.283185307179586 --order 3
    helixsub helix-space --surface cylinder
    helixsub verify 3.1 --surface cone --curve u_circle --direction e3
    helixsub trace --surface cylinder --kind geodesic --start 0 0 --velocity 1 1 --length 10
    helixsub catalog list

Exit codes: 0 success, 2 bad input or parse error, 3 degenerate Frenet
frame, 4 rank loss, umbilic or domain exit while tracing, 5 premises not
met (or not applicable), 6 conclusion failed with premises met.

JSON output is ``{tool_version, config_echo, result}`` with every float
printed to 17 significant digits. CSV uses ``#`` comment lines. Output
depends only on the arguments, so repeated runs are byte-identical.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .catalog import catalog_get, catalog_rows, parse_curve, parse_immersion
from .curves import ParamCurve, frenet, reparametrize_unit_speed
from .errors import (
    DegenerateFrame,
    ExpressionError,
    FlowError,
    GeometryError,
    LeftDomain,
    RankDeficient,
    UmbilicEncountered,
)
from .expr import compile_components, parse_expressions
from .flows import integrate_curvature_line, integrate_geodesic
from .helix import decompose_direction, estimate_helix_space, grid_samples, helix_angle_of
from .manifold import point_frame, unit_normal
from .numerics import DEFAULT_TOLERANCES
from .theorems import VERIFIERS, Verdict

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_TRACE = 4
EXIT_PREMISE = 5
EXIT_FALSIFIED = 6


class UsageError(Exception):
    pass


# serialization


def _float_text(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return "%.17g" % x


def dumps(obj, indent=0):
    """JSON text with floats at 17 significant digits and NaN as null."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in seq) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _envelope(args, result):
    return dumps({"tool_version": __version__, "config_echo": _config_echo(args), "result": result}) + "\n"


def _config_echo(args):
    skip = {"func", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _csv_row(values):
    return ",".join(v if isinstance(v, str) else _float_text(v).replace("null", "nan") for v in values)


# argument helpers


def _key_values(pairs, what):
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"{what} must look like name=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"{what} {key!r} needs a number, got {value!r}") from None
    return out


def _tolerances(args):
    overrides = _key_values(getattr(args, "tol", None), "--tol")
    known = DEFAULT_TOLERANCES.as_dict()
    unknown = sorted(set(overrides) - set(known))
    if unknown:
        raise UsageError(f"unknown tolerance(s) {unknown}; known: {', '.join(sorted(known))}")
    return DEFAULT_TOLERANCES.with_overrides(**overrides)


def parse_direction(text, n, warn=None):
    """``"e3"`` or ``"(0, 0, 1)"``; normalized, with a warning when far from unit length."""
    text = text.strip()
    if text.startswith("e") and text[1:].isdigit():
        k = int(text[1:])
        if not 1 <= k <= n:
            raise UsageError(f"direction {text} out of range for R^{n}")
        return np.eye(n)[k - 1]
    try:
        d = np.array([float(x) for x in text.strip("()[] ").split(",")])
    except ValueError:
        raise UsageError(f"cannot read direction {text!r}") from None
    if d.shape != (n,):
        raise UsageError(f"direction needs {n} components, got {d.size}")
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise UsageError("direction must be nonzero")
    if abs(norm - 1.0) > 1e-6 and warn is not None:
        warn(f"warning: direction has norm {norm:.6g}; normalized")
    return d / norm


def _surface(args):
    """``(patch, sample_box, entry)`` from exactly one of --surface or --immersion."""
    if bool(args.surface) == bool(args.immersion):
        raise UsageError("give exactly one of --surface NAME or --immersion TEXT")
    params = _key_values(args.param, "--param")
    if args.surface:
        entry = catalog_get(args.surface, params)
        return entry.patch, entry.sample_box, entry
    if not args.dims:
        raise UsageError("--immersion needs --dims M N")
    m, n = args.dims
    domain = [tuple(b) for b in args.domain] if args.domain else None
    if domain is not None and len(domain) != m:
        raise UsageError(f"--domain given {len(domain)} times, need {m}")
    patch = parse_immersion(args.immersion, m, n, params=params, domain=domain)
    return patch, patch.domain, None


def _add_surface_args(p):
    p.add_argument("--surface", help="catalog entry name")
    p.add_argument("--immersion", help="comma-separated components in u1..um")
    p.add_argument("--dims", nargs=2, type=int, metavar=("M", "N"), help="dimensions for --immersion")
    p.add_argument("--domain", nargs=2, type=float, action="append", metavar=("LO", "HI"), help="one per chart axis")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="surface parameter")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override")
    p.add_argument("--output", help="write to this file instead of stdout")


# commands


def cmd_frenet(args, out, err):
    params = _key_values(args.param, "--param")
    if ":" in args.curve:
        name, curve_name = args.curve.split(":", 1)
        entry = catalog_get(name)
        c = entry.curve(curve_name, **params).ambient()
        if args.t_range:
            c = type(c)(map=c.map, t_range=tuple(args.t_range), fd_step=c.fd_step, name=c.name)
    else:
        if not args.t_range:
            raise UsageError("expression curves need --t-range A B")
        c = parse_curve(args.curve, args.t_range, params=params)
    tolerances = _tolerances(args)
    unit = reparametrize_unit_speed(c)
    lo, hi = unit.t_range
    ts = lo + (np.arange(args.samples) + 0.5) * (hi - lo) / args.samples
    k = args.order
    dim = len(c(c.t_range[0]))
    header = ["t"] + [f"V{i}_{j}" for i in range(1, k + 1) for j in range(1, dim + 1)] + [f"k{i}" for i in range(1, k)]
    buf = io.StringIO()
    buf.write("# t is arclength from the start of the range\n")
    buf.write(",".join(header) + "\n")
    min_rank = k
    for t in ts:
        fa = frenet(unit, t, max_order=k, tolerances=tolerances)
        min_rank = min(min_rank, fa.rank)
        frame = np.full((k, dim), np.nan)
        frame[: fa.rank] = fa.frame[:k]
        curv = np.full(k - 1, np.nan)
        curv[: len(fa.curvatures)] = fa.curvatures[: k - 1]
        buf.write(_csv_row([t, *frame.ravel(), *curv]) + "\n")
    if min_rank < k:
        buf.write(f"# frame rank {min_rank} below requested order {k}\n")
    out(buf.getvalue())
    if min_rank < k:
        raise DegenerateFrame(f"Frenet frame has rank {min_rank} < {k}; missing columns are nan", rank=min_rank)
    return EXIT_OK


def cmd_helix_space(args, out, err):
    patch, box, _ = _surface(args)
    tolerances = _tolerances(args)
    tol = args.helix_tol if args.helix_tol is not None else tolerances.helix_space
    samples = grid_samples(box, args.samples)
    space = estimate_helix_space(patch, samples, tol, tolerances, seed=args.seed)
    basis = space.basis.basis
    angles = [helix_angle_of(space, patch, basis[:, j], tolerances) for j in range(space.dim)]
    result = {
        "dim": space.dim,
        "basis": [basis[:, j].tolist() for j in range(space.dim)],
        "residual": space.residual,
        "samples": space.sample_count,
        "angles": [{"angle": a.angle, "stddev": a.stddev} for a in angles],
    }
    out(_envelope(args, result))
    return EXIT_OK


def _param_curve(args, patch, entry):
    params = _key_values(args.curve_param, "--curve-param")
    if args.curve and args.chart_curve:
        raise UsageError("give only one of --curve and --chart-curve")
    if args.curve:
        if entry is None:
            raise UsageError("--curve names a catalog curve; use --chart-curve with --immersion")
        return entry.curve(args.curve, **params)
    if not args.chart_curve or not args.t_range:
        raise UsageError("need --curve NAME, or --chart-curve TEXT with --t-range A B")
    asts = parse_expressions(args.chart_curve, ["t"], params, n=patch.param_dim)
    f = compile_components(asts, params)
    return ParamCurve(patch=patch, u_of_t=lambda t: f([t]), t_range=tuple(args.t_range), name=args.chart_curve)


def cmd_verify(args, out, err):
    patch, box, entry = _surface(args)
    tolerances = _tolerances(args)
    pc = _param_curve(args, patch, entry)
    if args.t_range and args.curve:
        pc = ParamCurve(
            patch=pc.patch, u_of_t=pc.u_of_t, t_range=tuple(args.t_range), du=pc.du, ddu=pc.ddu, name=pc.name
        )
    d = parse_direction(args.direction, patch.ambient_dim, warn=err)
    lo, hi = pc.t_range
    ts = lo + (np.arange(args.samples) + 0.5) * (hi - lo) / args.samples
    surface_samples = grid_samples(box, 64)
    report = VERIFIERS[args.theorem](patch, pc, d, sample_ts=ts, tolerances=tolerances, surface_samples=surface_samples)
    out(_envelope(args, report.to_dict()))
    return {
        Verdict.VERIFIED: EXIT_OK,
        Verdict.PREMISE_FAILED: EXIT_PREMISE,
        Verdict.NOT_APPLICABLE: EXIT_PREMISE,
        Verdict.FALSIFIED: EXIT_FALSIFIED,
    }[report.verdict]


def _normal_field(args, patch, tolerances, err):
    if args.normal_direction:
        d = parse_direction(args.normal_direction, patch.ambient_dim, warn=err)
        return lambda u: decompose_direction(point_frame(patch, u, tolerances), d, tolerances).xi
    if patch.codimension != 1:
        raise UsageError("curvature lines in codimension > 1 need --normal-direction")
    return lambda u: unit_normal(patch, u)


def _trace_csv(patch, result, final_comment):
    m, n = patch.param_dim, patch.ambient_dim
    buf = io.StringIO()
    buf.write(",".join(["t"] + [f"u{i}" for i in range(1, m + 1)] + [f"x{i}" for i in range(1, n + 1)]) + "\n")
    if result is not None:
        for t, u in zip(result.ts, result.us):
            buf.write(_csv_row([t, *u, *patch(u)]) + "\n")
    buf.write(final_comment + "\n")
    return buf.getvalue()


def cmd_trace(args, out, err):
    patch, _, _ = _surface(args)
    tolerances = _tolerances(args)
    u0 = np.array(args.start, dtype=float)
    if u0.shape != (patch.param_dim,):
        raise UsageError(f"--start needs {patch.param_dim} values")
    try:
        if args.kind == "geodesic":
            if args.velocity is None or len(args.velocity) != patch.param_dim:
                raise UsageError(f"geodesics need --velocity with {patch.param_dim} values")
            v0 = np.array(args.velocity, dtype=float)
            speed = float(np.linalg.norm(point_frame(patch, u0, tolerances).jacobian @ v0))
            if speed == 0.0:
                raise UsageError("initial velocity must be nonzero")
            if abs(speed - 1.0) > 1e-8:
                err(f"warning: velocity rescaled from ambient speed {speed:.6g} to 1")
            result = integrate_geodesic(patch, u0, v0 / speed, args.length, args.step, tolerances)
        else:
            field_ = _normal_field(args, patch, tolerances, err)
            result = integrate_curvature_line(patch, u0, field_, args.eig, args.length, args.step, tolerances)
    except FlowError as exc:
        partial = exc.result
        where = "" if exc.u is None else " at u=" + _csv_row(np.atleast_1d(exc.u)).replace(",", " ")
        out(_trace_csv(patch, partial, f"# stopped: {type(exc).__name__}{where}"))
        raise
    out(_trace_csv(patch, result, f"# max_defect={_float_text(result.max_defect)}"))
    return EXIT_OK


def cmd_catalog_list(args, out, err):
    rows = catalog_rows()
    lines = [f"{'name':<15} {'m':>2} {'n':>2} {'helix_dim':>9}  parameters  curves"]
    for r in rows:
        params = ", ".join(f"{k}={v:g}" for k, v in r["parameters"].items()) or "-"
        lines.append(f"{r['name']:<15} {r['m']:>2} {r['n']:>2} {r['helix_dim']:>9}  {params}  {', '.join(r['curves'])}")
    out("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="helixsub", description="Helix directions and curve geometry on immersed patches.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frenet", help="Frenet frame and curvatures along a curve (CSV)")
    p.add_argument("curve", help='expression list in t, e.g. "cos(t),sin(t),t", or ENTRY:CURVE from the catalog')
    p.add_argument("--t-range", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="curve parameter")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE")
    p.add_argument("--output")
    p.set_defaults(func=cmd_frenet)

    p = sub.add_parser("helix-space", help="estimate the space of helix directions (JSON)")
    _add_surface_args(p)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--helix-tol", type=float, default=None, help="tolerance on projector variation")
    p.add_argument("--seed", type=int, default=0, help="seed for the random search starts")
    p.set_defaults(func=cmd_helix_space)

    p = sub.add_parser("verify", help="check one implication on a surface, curve and direction (JSON)")
    p.add_argument("theorem", choices=sorted(VERIFIERS))
    _add_surface_args(p)
    p.add_argument("--curve", help="catalog curve name on the surface")
    p.add_argument("--curve-param", action="append", metavar="NAME=VALUE")
    p.add_argument("--chart-curve", help="chart coordinates as expressions in t")
    p.add_argument("--t-range", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("--direction", required=True, help='"e3" or "(0, 0, 1)"')
    p.add_argument("--samples", type=int, default=32)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="trace a geodesic or line of curvature (CSV)")
    _add_surface_args(p)
    p.add_argument("--kind", choices=("geodesic", "curvline"), required=True)
    p.add_argument("--start", nargs="+", type=float, required=True)
    p.add_argument("--velocity", nargs="+", type=float)
    p.add_argument("--eig", type=int, default=0, help="principal index, ascending order")
    p.add_argument("--normal-direction", help="use the normal component of this direction as normal field")
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--step", type=float, default=1e-2)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("catalog", help="catalog commands")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    c = csub.add_parser("list", help="list entries, parameters and helix dimensions")
    c.set_defaults(func=cmd_catalog_list)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    chunks = []
    out = chunks.append

    def err(msg):
        sys.stderr.write(msg + "\n")

    code = EXIT_OK
    try:
        code = args.func(args, out, err)
    except (ExpressionError, UsageError, GeometryError, ValueError) as exc:
        code = _error_code(exc)
        err(f"error: {type(exc).__name__}: {exc}")
    text = "".join(chunks)
    target = getattr(args, "output", None)
    if target:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _error_code(exc):
    if isinstance(exc, DegenerateFrame):
        return EXIT_DEGENERATE
    if isinstance(exc, (RankDeficient, UmbilicEncountered, LeftDomain)):
        if isinstance(exc, RankDeficient) and exc.u is not None:
            sys.stderr.write(f"offending sample point: {np.asarray(exc.u).tolist()}\n")
        return EXIT_TRACE
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
