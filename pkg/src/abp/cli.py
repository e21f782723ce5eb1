"""Command-line surface.

Every subcommand is a thin adapter over the library; numeric output is
serialized with Python's shortest-roundtrip float repr via json.  Errors go
to stderr as single-line JSON {"error": ..., "detail": ...}; exit code 2
marks a validation error, 3 a numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import annulus, harmonic, mcmullen, model, schemes
from .divisors import Annulus, Divisor
from .errors import NumericsError, ValidationError
from .numerics import Tolerance

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _parse_complex(text):
    text = text.strip()
    if text.startswith("["):
        re_, im = json.loads(text)
        return complex(re_, im)
    if "," in text:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    return complex(text.replace("i", "j"))


def _load_points(text):
    """Inline JSON array of [re, im] pairs, or a path to a file holding one."""
    text = text.strip()
    if not text.startswith("["):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read()
    return tuple(complex(a, b) for a, b in json.loads(text))


def _load_json_arg(text):
    text = text.strip()
    if not text.startswith("{") and not text.startswith("["):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _parse_d(text):
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def _emit(payload):
    if isinstance(payload, str):
        sys.stdout.write(payload + ("\n" if not payload.endswith("\n") else ""))
    else:
        sys.stdout.write(json.dumps(payload) + "\n")


def _tolerance(args):
    abs_tol = getattr(args, "tol", None)
    if abs_tol is None:
        return Tolerance()
    return Tolerance(abs_tol=abs_tol)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_check(args):
    report = annulus.existence_check(args.r, args.delta, _load_points(args.zeros))
    _emit({"ok": report.ok, "residual": report.log_residual,
           "product_modulus": report.product_modulus, "target": report.target})


def _cmd_correct(args):
    div = annulus.radial_correct(args.r, args.delta, _load_points(args.zeros))
    _emit(div.to_json())


def _cmd_build(args):
    m = annulus.build(args.r, args.delta, _load_points(args.zeros), args.tol)
    text = m.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _emit({"written": args.out, "N": m.trunc_n, "tail_bound": m.tail_bound})
    else:
        _emit(text)


def _load_map(path):
    with open(path, "r", encoding="utf-8") as fh:
        return annulus.AnnulusProperMap.from_json(fh.read())


def _cmd_eval(args):
    m = _load_map(args.map)
    value = annulus.evaluate(m, _parse_complex(args.z))
    _emit({"value": [value.real, value.imag]})


def _cmd_verify(args):
    m = _load_map(args.map)
    report = annulus.verify(m, samples=args.samples, seed=args.seed)
    _emit(report.to_dict())


def _cmd_fiber(args):
    m = _load_map(args.map)
    div = annulus.fiber(m, _parse_complex(args.w), _tolerance(args))
    _emit(div.to_json())


def _cmd_model_coords(args):
    mc = model.to_model_coordinates(args.r, _load_points(args.zeros),
                                    delta=args.delta)
    _emit(mc.to_dict())


def _cmd_model_roundtrip(args):
    pts = _load_points(args.zeros)
    zeros = Divisor(pts, Annulus(args.r))
    mc = model.to_model_coordinates(args.r, zeros, delta=args.delta)
    r_back, back = model.from_model_coordinates(mc, args.delta)
    dev = max(abs(a - b) for a, b in zip(zeros.points, back.points))
    _emit({"coords": mc.to_dict(), "r_back": r_back,
           "zeros_back": back.to_json(), "max_deviation": dev})


def _cmd_model_mobius(args):
    x, y, z = model.mobius_band_point(args.u, args.v)
    _emit({"point": [x, y, z]})


def _cmd_harmonic(args):
    dom = harmonic.CircleDomain.from_json(_load_json_arg(args.domain))
    measure = harmonic.solve_harmonic_measure(dom, args.k, args.tol)
    out = {"k": args.k, "residual": measure.residual,
           "condition_number": measure.condition_number,
           "terms": measure.m_terms}
    if args.z is not None:
        probe = _parse_complex(args.z)
        out["value"] = float(measure(probe))
    _emit(out)


def _cmd_abel(args):
    dom = harmonic.CircleDomain.from_json(_load_json_arg(args.domain))
    zeros = _load_points(args.zeros)
    if args.adjust:
        div = harmonic.abel_adjust(dom, zeros, args.tol)
        _emit(div.to_json())
    else:
        report = harmonic.abel_condition(dom, zeros, args.tol)
        _emit(report.to_dict())


def _cmd_scheme_enumerate(args):
    sigma = None if args.sigma == "auto" else args.sigma
    rows = schemes.scheme_table_rows(args.total, args.n, sigma)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=[
        "d", "n", "total", "deg_rho", "homeo", "s0", "bound", "aut_l",
        "dihedral", "torus_cover"])
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue().rstrip("\n"))


def _cmd_scheme_degree(args):
    _emit(str(schemes.covering_degree(_parse_d(args.d))))


def _cmd_scheme_homeo(args):
    _emit(json.dumps(schemes.is_rho_homeomorphism(_parse_d(args.d))))


def _cmd_scheme_marks(args):
    counts = schemes.marking_counts(_parse_d(args.d), args.sigma,
                                    tuple(args.chi))
    _emit({"s": list(counts.s), "s_inf": counts.s_inf})


def _cmd_scheme_fiberbound(args):
    s0, bound = schemes.p2_fiber_bound(_parse_d(args.d), args.sigma)
    _emit({"s0": s0, "bound": bound})


def _cmd_scheme_aut(args):
    ab = schemes.aut_bound(_parse_d(args.d), args.sigma)
    _emit({"cyclic_order_divisor": ab.cyclic_order_divisor,
           "dihedral_possible": ab.dihedral_possible})


def _cmd_scheme_torus(args):
    _emit(json.dumps(schemes.torus_cover_criterion(_parse_d(args.d), args.sigma)))


def _cmd_julia_classify(args):
    f = mcmullen.McMullenMap(args.m, args.ell, _parse_complex(args.c))
    report = mcmullen.classify_cantor_circle(f)
    out = report.to_dict()
    diag = mcmullen.grotzsch_check(report)
    out["grotzsch_margin"] = diag.margin
    _emit(out)


def _cmd_julia_render(args):
    f = mcmullen.McMullenMap(args.m, args.ell, _parse_complex(args.c))
    window = tuple(float(x) for x in args.window.split(","))
    image = mcmullen.render_julia(f, window, args.size, args.max_iter)
    with open(args.out, "wb") as fh:
        fh.write(image.to_ppm())
    _emit({"written": args.out, "width": image.width, "height": image.height})


def _cmd_julia_twist(args):
    value = mcmullen.twist_map(args.r, _parse_complex(args.z))
    _emit({"value": [value.real, value.imag]})


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="abp", allow_abbrev=False,
                                     description=__doc__)
    parser.add_argument("--config", default=None,
                        help="JSON file of default flag values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--zeros", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("correct", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--zeros", required=True)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("build", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--zeros", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("eval", allow_abbrev=False)
    p.add_argument("--map", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("verify", allow_abbrev=False)
    p.add_argument("--map", required=True)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("fiber", allow_abbrev=False)
    p.add_argument("--map", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_fiber)

    model_parser = sub.add_parser("model", allow_abbrev=False)
    model_sub = model_parser.add_subparsers(dest="subcommand", required=True)
    p = model_sub.add_parser("coords", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--zeros", required=True)
    p.add_argument("--delta", type=int, default=None)
    p.set_defaults(func=_cmd_model_coords)
    p = model_sub.add_parser("roundtrip", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--zeros", required=True)
    p.set_defaults(func=_cmd_model_roundtrip)
    p = model_sub.add_parser("mobius", allow_abbrev=False)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.set_defaults(func=_cmd_model_mobius)

    p = sub.add_parser("harmonic", allow_abbrev=False)
    p.add_argument("--domain", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--z", default=None)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_harmonic)

    p = sub.add_parser("abel", allow_abbrev=False)
    p.add_argument("--domain", required=True)
    p.add_argument("--zeros", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--adjust", action="store_true")
    p.set_defaults(func=_cmd_abel)

    scheme_parser = sub.add_parser("scheme", allow_abbrev=False)
    scheme_sub = scheme_parser.add_subparsers(dest="subcommand", required=True)
    p = scheme_sub.add_parser("enumerate", allow_abbrev=False)
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", choices=["auto", "I", "II", "III"], default="auto")
    p.set_defaults(func=_cmd_scheme_enumerate)
    p = scheme_sub.add_parser("degree", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.set_defaults(func=_cmd_scheme_degree)
    p = scheme_sub.add_parser("homeo", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.set_defaults(func=_cmd_scheme_homeo)
    p = scheme_sub.add_parser("marks", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.add_argument("--sigma", choices=["I", "II", "III"], required=True)
    p.add_argument("--chi", required=True, help="string of + and - symbols")
    p.set_defaults(func=_cmd_scheme_marks)
    p = scheme_sub.add_parser("fiberbound", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.add_argument("--sigma", choices=["I", "II", "III"], required=True)
    p.set_defaults(func=_cmd_scheme_fiberbound)
    p = scheme_sub.add_parser("aut", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.add_argument("--sigma", choices=["I", "II", "III"], required=True)
    p.set_defaults(func=_cmd_scheme_aut)
    p = scheme_sub.add_parser("torus", allow_abbrev=False)
    p.add_argument("--d", required=True)
    p.add_argument("--sigma", choices=["I", "II", "III"], required=True)
    p.set_defaults(func=_cmd_scheme_torus)

    julia_parser = sub.add_parser("julia", allow_abbrev=False)
    julia_sub = julia_parser.add_subparsers(dest="subcommand", required=True)
    p = julia_sub.add_parser("classify", allow_abbrev=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=_cmd_julia_classify)
    p = julia_sub.add_parser("render", allow_abbrev=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--window", default="-1.5,1.5,-1.5,1.5",
                   help="xmin,xmax,ymin,ymax")
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_julia_render)
    p = julia_sub.add_parser("twist", allow_abbrev=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=_cmd_julia_twist)

    return parser


def _apply_config(parser, args, argv):
    if not args.config:
        return args
    with open(args.config, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    explicit = {tok.split("=", 1)[0] for tok in argv if tok.startswith("--")}
    for key, value in config.items():
        flag = "--" + key.replace("_", "-")
        attr = key.replace("-", "_")
        if flag not in explicit and hasattr(args, attr):
            setattr(args, attr, value)
    return args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(parser, args, argv)
        args.func(args)
        return EXIT_OK
    except ValidationError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return EXIT_VALIDATION
    except NumericsError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
