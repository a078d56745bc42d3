"""Connection spec files and the canonical JSON layout shared by every report.

A connection spec is a JSON object::

    {
      "rank": 2,
      "order": 1,
      "field": "Q",
      "label": "s2",
      "coefficients": [
        [["0", "2"], ["2", "0"]],
        [["-1/2", "0"], ["0", "1/2"]]
      ],
      "pairing": {"matrix": [["0", "1"], ["1", "0"]], "extension": "sesquilinear"},
      "grading": {"mu": [["-1/2", "0"], ["0", "1/2"]], "weight": "0"}
    }

``coefficients[i]`` is the matrix multiplying ``u^(i-2)``.  An optional
``lowest_power`` (default ``-2``) shifts that start; poles of order above two
are rejected.  Scalars are exact strings.  :func:`dumps` always produces the
same bytes for the same value, so ``serialize(parse(text)) == text`` for any
file written by this module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .connection import EStructure, GradingData, PoleOrderError, Polarization
from .linalg import Matrix
from .scalars import GaussianRational, ParseError, format_scalar, parse_scalar
from .series import MatrixSeries

__all__ = [
    "FIELDS",
    "ConnectionSpec",
    "dumps",
    "load_json",
    "parse_connection",
    "serialize_connection",
    "connection_to_json",
    "read_connection",
    "matrix_to_json",
    "series_to_json",
]

FIELDS = ("Q", "Q(i)")
_EXTENSIONS = {"sesquilinear": True, "u-linear": False}
_CONNECTION_KEYS = {"rank", "order", "field", "label", "lowest_power", "coefficients",
                    "pairing", "grading"}


def _is_flat(value) -> bool:
    return not isinstance(value, (list, dict))


def _render(value, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, list):
        if all(_is_flat(v) for v in value):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in value) + "]"
        items = [pad + _render(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(value) -> str:
    """Canonical text: two-space indentation, flat lists on one line, trailing newline."""
    return _render(value, 0) + "\n"


def load_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{source}:{exc.lineno}:{exc.colno}") from None


def matrix_to_json(M: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in M.rows]


def series_to_json(S: MatrixSeries) -> list:
    return [matrix_to_json(m) for m in S.coeffs]


@dataclass(frozen=True)
class ConnectionSpec:
    """A parsed connection file: the structure plus the declared ground field."""

    structure: EStructure
    field: str = "Q"

    @property
    def label(self) -> str:
        return self.structure.label


def _expect(cond: bool, message: str, loc: str):
    if not cond:
        raise ParseError(message, loc)


def _int(value, loc: str, minimum: int | None = None) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), "expected an integer", loc)
    if minimum is not None:
        _expect(value >= minimum, f"must be at least {minimum}", loc)
    return value


def _scalar(value, field: str, loc: str):
    x = parse_scalar(value, loc)
    if field == "Q" and isinstance(x, GaussianRational):
        raise ParseError(f"Gaussian scalar {value!r} in a file declared over Q", loc)
    return x


def _matrix(value, n: int, field: str, loc: str) -> Matrix:
    _expect(isinstance(value, list) and len(value) == n, f"expected {n} rows", loc)
    rows = []
    for i, row in enumerate(value):
        _expect(isinstance(row, list) and len(row) == n, f"expected {n} entries", f"{loc}[{i}]")
        rows.append([_scalar(x, field, f"{loc}[{i}][{j}]") for j, x in enumerate(row)])
    return Matrix(rows)


def parse_connection(data, source: str = "<input>") -> ConnectionSpec:
    """Validate a decoded connection spec and build the structure."""
    loc = source
    _expect(isinstance(data, dict), "a connection spec must be a JSON object", loc)
    unknown = sorted(set(data) - _CONNECTION_KEYS)
    _expect(not unknown, f"unknown keys {unknown}", loc)
    for key in ("rank", "order", "field", "coefficients"):
        _expect(key in data, f"missing key {key!r}", loc)
    n = _int(data["rank"], f"{loc}.rank", 1)
    order = _int(data["order"], f"{loc}.order", 0)
    field = data["field"]
    _expect(field in FIELDS, f"field must be one of {list(FIELDS)}", f"{loc}.field")
    label = data.get("label", "")
    _expect(isinstance(label, str), "label must be a string", f"{loc}.label")
    low = _int(data.get("lowest_power", -2), f"{loc}.lowest_power")
    coeffs = data["coefficients"]
    cloc = f"{loc}.coefficients"
    _expect(isinstance(coeffs, list), "expected a list of matrices", cloc)
    _expect(len(coeffs) == order + 1, f"expected order + 1 = {order + 1} matrices, got {len(coeffs)}",
            cloc)
    mats = [_matrix(m, n, field, f"{cloc}[{k}]") for k, m in enumerate(coeffs)]

    pol = None
    if data.get("pairing") is not None:
        ploc = f"{loc}.pairing"
        p = data["pairing"]
        _expect(isinstance(p, dict) and set(p) <= {"matrix", "extension"} and "matrix" in p,
                "pairing must be an object with 'matrix' and optional 'extension'", ploc)
        ext = p.get("extension", "sesquilinear")
        _expect(ext in _EXTENSIONS, f"extension must be one of {sorted(_EXTENSIONS)}",
                f"{ploc}.extension")
        G = _matrix(p["matrix"], n, field, f"{ploc}.matrix")
        try:
            pol = Polarization(G, _EXTENSIONS[ext])
        except ValueError as exc:
            raise ParseError(str(exc), ploc) from None

    grading = None
    if data.get("grading") is not None:
        gloc = f"{loc}.grading"
        g = data["grading"]
        _expect(isinstance(g, dict) and set(g) <= {"mu", "weight"} and "mu" in g,
                "grading must be an object with 'mu' and optional 'weight'", gloc)
        mu = _matrix(g["mu"], n, field, f"{gloc}.mu")
        weight = _scalar(g.get("weight", "0"), field, f"{gloc}.weight")
        grading = GradingData(mu, weight)

    try:
        E = EStructure.from_laurent(mats, low, polarization=pol, grading=grading, label=label)
    except PoleOrderError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), loc) from None
    return ConnectionSpec(E, field)


def serialize_connection(spec: ConnectionSpec | EStructure, field: str | None = None) -> str:
    """Canonical text for a connection; the inverse of :func:`parse_connection`."""
    return dumps(connection_to_json(spec, field))


def connection_to_json(spec: ConnectionSpec | EStructure, field: str | None = None) -> dict:
    if isinstance(spec, EStructure):
        spec = ConnectionSpec(spec, field or _field_of(spec))
    E = spec.structure
    out: dict = {"rank": E.rank, "order": E.order, "field": spec.field}
    if E.label:
        out["label"] = E.label
    out["coefficients"] = series_to_json(E.A)
    if E.polarization is not None:
        ext = "sesquilinear" if E.polarization.sesquilinear else "u-linear"
        out["pairing"] = {"matrix": matrix_to_json(E.polarization.G), "extension": ext}
    if E.grading is not None:
        out["grading"] = {"mu": matrix_to_json(E.grading.mu),
                          "weight": format_scalar(E.grading.weight)}
    return out


def _field_of(E: EStructure) -> str:
    mats = list(E.A.coeffs)
    if E.polarization is not None:
        mats.append(E.polarization.G)
    if E.grading is not None:
        mats.append(E.grading.mu)
    gauss = any(isinstance(x, GaussianRational) for m in mats for x in m.entries())
    return "Q(i)" if gauss else "Q"


def read_connection(path: str) -> ConnectionSpec:
    """Parse a connection spec from a file path (``-`` reads standard input)."""
    import sys
    if path == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        source = path
    return parse_connection(load_json(text, source), source)
