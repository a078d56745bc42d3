"""Command-line front end.

Every command prints one canonical JSON document (see :func:`tecalc.io.dumps`)
to standard output or to ``--out``.  Failures print a JSON error object to
standard error.  Exit codes: 0 success, 1 error object, 2 usage error, 3 a
verification ran but reported a failure.
"""
from __future__ import annotations

import argparse
import sys

from .connection import PoleOrderError, check_polarization
from .io import (FIELDS, ConnectionSpec, connection_to_json, dumps, matrix_to_json,
                 read_connection, series_to_json)
from .levelt import IrrationalSpectrum, block_diagonalize
from .normalform import (Inconsistent, NonUnique, NonzeroSubleading, NoSolution, NotSemisimple,
                         ResidueNotScalar, flatten_scalar_block, isomorphism_solver,
                         rmatrix_from_grading, semisimplify)
from .quantum import (PRESETS, MuPropertyFailed, UnknownPreset, eigenframe_data,
                      quantum_structure, teleman_rmatrix)
from .scalars import ParseError, decimal_display, format_scalar
from .series import MatrixSeries, NotAUnit

__all__ = ["main", "build_parser", "UsageError"]

DISPLAY_NOTE = "decimal rendering for display only; exact values above are authoritative"

_KNOWN_ERRORS = (ParseError, UnknownPreset, IrrationalSpectrum, NoSolution, NonUnique,
                 NotSemisimple, ResidueNotScalar, NonzeroSubleading, Inconsistent,
                 MuPropertyFailed, NotAUnit, PoleOrderError)


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonnegative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be at least 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tecalc", description="Exact computations with formal connections "
                "and chain-level Hochschild identities.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(sp, order_default=None):
        sp.add_argument("--order", type=_positive, default=order_default,
                        help="truncation order N (default: the input's order)")
        sp.add_argument("--out", help="write the report to this file instead of stdout")
        sp.add_argument("--decimal", action="store_true",
                        help="append a labelled decimal rendering (display only)")

    sp = sub.add_parser("preset", help="emit the connection spec of a quantum preset")
    sp.add_argument("name", help=f"one of {', '.join(sorted(PRESETS))}")
    common(sp, 8)

    for name, hlp in [("decompose", "eigenvalue block decomposition"),
                      ("flatten", "flatten a block with scalar residue"),
                      ("semisimplify", "gauge to a direct sum of rank-one structures"),
                      ("check-polarization", "covariant constancy of the pairing")]:
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("spec", nargs="?", default="-",
                        help="connection spec file (default: standard input)")
        sp.add_argument("--preset", help="use a quantum preset instead of a file")
        if name in ("decompose", "semisimplify"):
            sp.add_argument("--field", choices=FIELDS, help="working field for eigenvalues")
        common(sp)

    sp = sub.add_parser("rmatrix", help="R-matrix of a semisimple quantum preset")
    sp.add_argument("--preset", required=True)
    sp.add_argument("--convention", choices=("teleman", "grading"), default="teleman",
                    help="teleman: [c1*, R_(i+1)] + (mu + i) R_i = 0; "
                         "grading: [xi, R_(k+1)] = R_k (mu - k) (the inverse series)")
    common(sp, 6)

    sp = sub.add_parser("solve-isomorphism", help="R-matrix intertwining two connections")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--lookahead", type=_nonnegative, default=2)
    sp.add_argument("--allow-nonunique", action="store_true",
                    help="report a particular solution even if the kernel survives")
    common(sp)

    sp = sub.add_parser("verify-identities", help="run the Hochschild identity suite")
    sp.add_argument("--algebra", required=True, help="A-infinity spec file")
    sp.add_argument("--trials", type=_positive, default=100)
    sp.add_argument("--maxlen", type=_nonnegative, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    return p


# ---------------------------------------------------------------------- helpers
def _load(args) -> ConnectionSpec:
    if getattr(args, "preset", None):
        if args.order is None:
            args.order = 8
        # one spare order: flattening to order N reads A_(N+1)
        return ConnectionSpec(quantum_structure(args.preset, args.order + 1).E, "Q")
    return read_connection(args.spec)


def _order(args, spec: ConnectionSpec) -> int:
    return spec.structure.order if args.order is None else min(args.order, spec.structure.order)


def _decimal_series(S: MatrixSeries) -> list:
    return [[[decimal_display(x) for x in row] for row in m.rows] for m in S.coeffs]


def _display(args, report: dict, **series) -> dict:
    if getattr(args, "decimal", False):
        report["display"] = {"note": DISPLAY_NOTE,
                             **{k: _decimal_series(v) for k, v in series.items()}}
    return report


# ---------------------------------------------------------------------- commands
def cmd_preset(args) -> tuple[dict, int]:
    Q = quantum_structure(args.name, args.order)
    return connection_to_json(Q.E, "Q"), 0


def cmd_decompose(args) -> tuple[dict, int]:
    spec = _load(args)
    N = _order(args, spec)
    field = args.field or spec.field
    dec = block_diagonalize(spec.structure, N, field)
    blocks = []
    for (w, sub), blk in zip(dec.block_structures(), dec.eigen.blocks):
        blocks.append({"eigenvalue": format_scalar(w), "multiplicity": blk.multiplicity,
                       "indices": list(blk.indices),
                       "connection": connection_to_json(sub, field)})
    report = {"command": "decompose", "order": N, "field": field,
              "basis_change": matrix_to_json(dec.eigen.C),
              "gauge": series_to_json(dec.P.P), "blocks": blocks}
    return _display(args, report, gauge=dec.P.P), 0


def cmd_flatten(args) -> tuple[dict, int]:
    spec = _load(args)
    N = _order(args, spec)
    res = flatten_scalar_block(spec.structure, N)
    report = {"command": "flatten", "order": res.Q.P.order, "weight": format_scalar(res.w),
              "certificate": res.certificate, "gauge": series_to_json(res.Q.P)}
    return _display(args, report, gauge=res.Q.P), 0


def cmd_semisimplify(args) -> tuple[dict, int]:
    spec = _load(args)
    N = _order(args, spec)
    field = args.field or spec.field
    iso = semisimplify(spec.structure, N, field)
    report = {"command": "semisimplify", "order": iso.gauge.P.order, "field": field,
              "weights": [format_scalar(w) for w in iso.weights],
              "certificate": iso.certificate, "gauge": series_to_json(iso.gauge.P)}
    return _display(args, report, gauge=iso.gauge.P), 0


def cmd_rmatrix(args) -> tuple[dict, int]:
    N = args.order
    Q = quantum_structure(args.preset, N + 1)
    C, xi, mu = eigenframe_data(Q)
    if args.convention == "teleman":
        R = teleman_rmatrix(Q, N).P
    else:
        R = rmatrix_from_grading(xi, mu, N).P
    report = {"command": "rmatrix", "preset": args.preset, "convention": args.convention,
              "order": N, "eigenbasis": matrix_to_json(C),
              "eigenvalues": [format_scalar(xi[i, i]) for i in range(xi.nrows)],
              "R": series_to_json(R)}
    return _display(args, report, R=R), 0


def cmd_solve_isomorphism(args) -> tuple[dict, int]:
    src = read_connection(args.source)
    dst = read_connection(args.target)
    N = min(src.structure.order, dst.structure.order)
    if args.order is not None:
        N = min(N, args.order)
    res = isomorphism_solver(src.structure, dst.structure, N, args.lookahead,
                             allow_nonunique=args.allow_nonunique)
    report = {"command": "solve-isomorphism", "order": N, "lookahead": res.lookahead,
              "effective_lookahead": res.effective_lookahead,
              "kernel_dimension": res.kernel_dimension, "unique": res.kernel_dimension == 0,
              "R": series_to_json(res.R.P)}
    return _display(args, report, R=res.R.P), 0


def cmd_check_polarization(args) -> tuple[dict, int]:
    spec = _load(args)
    if spec.structure.polarization is None:
        raise ParseError("the connection carries no pairing", args.spec)
    rep = check_polarization(spec.structure, args.order)
    report = {"command": "check-polarization", "passed": rep.passed,
              "order_checked": rep.order_checked}
    if not rep.passed:
        report["first_failure"] = rep.first_failure
        report["residual"] = matrix_to_json(rep.residual)
    return report, 0 if rep.passed else 3


def cmd_verify_identities(args) -> tuple[dict, int]:
    from .hochschild.harness import run_identity_suite
    from .hochschild.spec_io import read_algebra
    alg = read_algebra(args.algebra)
    rep = run_identity_suite(alg, trials=args.trials, maxlen=args.maxlen, seed=args.seed)
    report = {"command": "verify-identities", "trials": args.trials, "maxlen": args.maxlen,
              "seed": args.seed, **rep.to_dict()}
    return report, 0 if rep.passed else 3


COMMANDS = {
    "preset": cmd_preset,
    "decompose": cmd_decompose,
    "flatten": cmd_flatten,
    "semisimplify": cmd_semisimplify,
    "rmatrix": cmd_rmatrix,
    "solve-isomorphism": cmd_solve_isomorphism,
    "check-polarization": cmd_check_polarization,
    "verify-identities": cmd_verify_identities,
}


def _error(exc: BaseException, kind: str | None = None) -> dict:
    if isinstance(exc, NonUnique):
        return {"error": "NonUnique", "message": str(exc), "dimension": exc.dimension}
    if isinstance(exc, UnknownPreset):
        message = exc.args[0] if exc.args else str(exc)
    else:
        message = str(exc)
    out = {"error": kind or type(exc).__name__, "message": message}
    loc = getattr(exc, "location", None)
    if loc:
        out["location"] = loc
    return out


def run(argv: list[str] | None = None) -> tuple[str, str, int]:
    """Execute a command; returns ``(stdout text, stderr text, exit status)``."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return "", dumps(_error(exc, "UsageError")), 2
    try:
        report, status = COMMANDS[args.command](args)
    except _KNOWN_ERRORS as exc:
        return "", dumps(_error(exc)), 1
    except OSError as exc:
        return "", dumps({"error": "FileError", "message": exc.strerror or str(exc),
                          "location": exc.filename or ""}), 1
    text = dumps(report)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return "", "", status
    return text, "", status


def main(argv: list[str] | None = None) -> int:
    out, err, status = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
