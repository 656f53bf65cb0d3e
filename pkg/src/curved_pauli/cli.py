"""Command-line front end.

Subcommands: reduce, spectrum, check-poly, oracle, compare, verify.
Exit codes: 0 ok, 1 verify failure, 2 domain error, 3 solver error, 64 usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import checks, enu_core, fd_oracle, heun_poly
from .errors import CurvedPauliError, DomainError, NoAdmissibleBranch, SolverError
from .geometry import Channel, PhysParams
from .radial_model import Dimensionless, lam_bar, nonrelativistic_strain

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2, 3, 64
OUTPUT_DIR_ENV = "CURVED_PAULI_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _channel(args) -> Channel:
    if args.two_j is not None and args.j is not None:
        raise UsageError("give either --j or --two-j, not both")
    if args.two_j is not None:
        return Channel(args.two_j, args.parity)
    try:
        return Channel.parse(args.j or "1/2", args.parity)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _params(args) -> PhysParams:
    if args.kappa_ab2 is None:
        raise UsageError(f"--kappa-ab2 is required for '{args.command}'")
    return PhysParams.from_kappa_ab2(args.kappa_ab2, mass=args.mass, e2=args.e2)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv(header: list[str], rows: list[list], complex_cols: tuple[str, ...] = ()) -> str:
    """CSV with real parts; a ``<col>_im`` column is added only if some imaginary part is nonzero."""
    extra = []
    for col in complex_cols:
        i = header.index(col)
        if any(r[i] is not None and complex(r[i]).imag != 0 for r in rows):
            extra.append(i)
    out_header = list(header) + [header[i] + "_im" for i in extra]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(out_header)
    for r in rows:
        cells = []
        for i, v in enumerate(r):
            if header[i] in complex_cols and v is not None:
                v = complex(v).real
            cells.append(_fmt(v))
        cells += [_fmt(complex(r[i]).imag) if r[i] is not None else "" for i in extra]
        w.writerow(cells)
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(args.output)
    if not path.is_absolute() and path.parent == Path(".") and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_reduce(args) -> int:
    params = _params(args)
    channel = _channel(args)
    lb = lam_bar(params)
    if args.eps_bar is not None:
        d = Dimensionless(args.eps_bar, lb, channel.signed_nu_bar)
        red = enu_core.reduce(d, alternate=args.alternate, hyperbolic=params.kappa < 0)
        root_choice = "principal"
    elif args.n is not None:
        label, sign = enu_core.admissible_branches(channel.signed_nu_bar)[0]
        lev = enu_core.solve_level(lb, channel.signed_nu_bar, args.n, label, sign)
        d, red, root_choice = lev.dimensionless, lev.reduction, lev.root_choice
    else:
        raise UsageError("reduce needs --eps-bar or --n")
    hp = enu_core.heun_params(red, d)
    br = red.branch
    eps = d.eps_bar * params.kappa / (2 * params.mass)
    doc = {
        "eps_bar": _cplx(d.eps_bar), "lam_bar": _cplx(d.lam_bar), "nu_bar": d.nu_bar,
        "label": br.label, "sign": br.sign, "root_choice": root_choice,
        "a": _cplx(br.a), "b": _cplx(br.b), "c": _cplx(br.c), "g0": _cplx(br.g0), "g1": _cplx(br.g1),
        "A": _cplx(red.A), "B": _cplx(red.B), "C": _cplx(red.C),
        "gamma": _cplx(hp.gamma), "delta": _cplx(hp.delta), "epsH": _cplx(hp.epsH),
        "alpha": _cplx(hp.alpha), "beta": _cplx(hp.beta), "q": _cplx(hp.q),
        "alpha_beta": _cplx(hp.alpha_beta),
        "pi": [_cplx(x) for x in red.pi.coeffs], "tau": [_cplx(x) for x in red.tau.coeffs],
        "h": [_cplx(x) for x in red.h.coeffs],
        "nonrelativistic_strained": nonrelativistic_strain(params, abs(eps)),
    }
    _emit(args, _dump(doc))
    return EXIT_OK


SPECTRUM_HEADER = ["n", "N", "n_principal", "accepted", "eps_over_ry", "det_n", "poly_exists"]


def cmd_spectrum(args) -> int:
    params = _params(args)
    channel = _channel(args)
    if params.kappa == 0:
        print("error: the candidate spectrum needs kappa != 0; use the 'oracle' command for flat space",
              file=sys.stderr)
        return EXIT_DOMAIN
    lines = heun_poly.attach_existence(enu_core.spectrum(params, channel, args.n_max), params, channel)
    if args.format == "json":
        doc = [{
            "n": ln.n, "N": ln.N, "n_principal": ln.n_principal, "accepted": ln.accepted, "reason": ln.reason,
            "eps_over_ry": ln.eps_over_ry, "det_n": _cplx(ln.determinant), "poly_exists": ln.polynomial_exists,
            "label": ln.label, "sign": ln.sign, "A": _cplx(ln.A), "root_choice": ln.root_choice,
        } for ln in lines]
        _emit(args, _dump(doc))
    else:
        rows = [[ln.n, ln.N, ln.n_principal, "true" if ln.accepted else ln.reason, ln.eps_over_ry,
                 ln.determinant, ln.polynomial_exists] for ln in lines]
        _emit(args, _csv(SPECTRUM_HEADER, rows, ("det_n",)))
    return EXIT_OK


def cmd_check_poly(args) -> int:
    params = _params(args)
    channel = _channel(args)
    res = heun_poly.existence_check(params, channel, args.n)
    doc = {
        "n": res.n, "determinant": _cplx(res.determinant), "exists": res.exists, "threshold": res.threshold,
        "null_vector": None if res.null_vector is None else [_cplx(x) for x in res.null_vector],
        "residual": res.residual, "nu_bar": channel.nu_bar,
        "delta1_closed_form": heun_poly.delta1_closed_form(channel.nu_bar) if res.n == 1 else None,
        "diagonal_record": res.system.record(),
    }
    if args.discrepancy:
        doc["discrepancy"] = heun_poly.diagonal_discrepancy_record()
    _emit(args, _dump(doc))
    return EXIT_OK


def _oracle_report(args, params, channel):
    return fd_oracle.converged_levels(params, channel, k=args.levels, h=args.h, r_max=args.r_max,
                                      refinements=args.refinements, n_target=args.levels + 1)


def cmd_oracle(args) -> int:
    params = _params(args)
    channel = _channel(args)
    rep = _oracle_report(args, params, channel)
    if args.format == "json":
        doc = {"grids": rep.grids, "raw": rep.raw, "richardson": rep.richardson_estimate,
               "err_est": rep.error_estimate, "observed_order": rep.observed_order}
        _emit(args, _dump(doc))
        return EXIT_OK
    rows = [[lv.index, lv.eps_over_ry, rep.grid_h, r, e]
            for lv, r, e in zip(rep.levels, rep.richardson_estimate, rep.error_estimate)]
    _emit(args, _csv(["level", "eps_over_ry", "h", "richardson", "err_est"], rows))
    return EXIT_OK


COMPARE_HEADER = ["level", "n_principal", "oracle_eps_over_ry", "err_est", "closed_form_eps_over_ry", "enu_candidate",
                  "schrodinger_eps_over_ry", "dev_closed_form", "dev_schrodinger", "geometric_shift"]


def cmd_compare(args) -> int:
    params = _params(args)
    channel = _channel(args)
    rep = _oracle_report(args, params, channel)
    lines = None
    if params.kappa != 0:
        n_max = 2 * (fd_oracle.orbital_l(channel) + args.levels + 1)
        lines = enu_core.spectrum(params, channel, n_max)
    table = fd_oracle.compare(rep, params, channel, lines)
    rows = [[r.level, r.n_principal, r.oracle, r.err_est, r.closed_form, r.enu_candidate, r.schrodinger,
             r.dev_closed_form, r.dev_schrodinger, r.geometric_shift] for r in table]
    if args.format == "json":
        _emit(args, _dump([dict(zip(COMPARE_HEADER, r)) for r in rows]))
    else:
        _emit(args, _csv(COMPARE_HEADER, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="curved-pauli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--kappa-ab2", type=float, help="dimensionless curvature kappa * a_B^2")
        p.add_argument("--j", help='total angular momentum as a literal, e.g. "1/2"')
        p.add_argument("--two-j", type=int, help="2j as an odd integer")
        p.add_argument("--parity", type=int, choices=(1, -1), default=1)
        p.add_argument("--mass", type=float, default=1.0)
        p.add_argument("--e2", type=float, default=1.0)
        p.add_argument("--output", "-o", help=f"output path (relative names go to ${OUTPUT_DIR_ENV} if set)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def grid(p):
        p.add_argument("--h", type=float, default=0.04, help="coarsest grid spacing")
        p.add_argument("--r-max", type=float, default=None)
        p.add_argument("--levels", type=int, default=3)
        p.add_argument("--refinements", type=int, default=2)

    p = sub.add_parser("reduce", help="square completion, gauge data and Heun parameters")
    common(p)
    p.add_argument("--eps-bar", type=_parse_complex)
    p.add_argument("--n", type=int, help="use the quantized eps_bar for polynomial degree n")
    p.add_argument("--alternate", action="store_true", help="label 2 with upper signs")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("spectrum", help="candidate spectrum with determinant obstruction")
    common(p)
    p.add_argument("--n-max", type=int, default=5)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check-poly", help="polynomial-existence determinant for degree n")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--discrepancy", action="store_true", help="include the diagonal-form derivation record")
    p.set_defaults(func=cmd_check_poly)

    p = sub.add_parser("oracle", help="finite-difference levels with Richardson extrapolation")
    common(p)
    grid(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="oracle levels against the closed forms")
    common(p)
    grid(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the property suites")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoAdmissibleBranch as exc:
        print(f"error: {exc}", file=sys.stderr)
        for diag in exc.diagnostics:
            print(f"  {diag}", file=sys.stderr)
        return EXIT_DOMAIN
    except SolverError as exc:
        print(f"solver error: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, CurvedPauliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
