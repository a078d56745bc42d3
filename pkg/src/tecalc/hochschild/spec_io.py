"""A-infinity spec files.

Layout (scalars are exact rational strings; a term is ``[coefficient, basis
name, power of t]``)::

    {
      "name": "exterior",
      "basis": ["e", "x"],
      "degrees": [0, 1],
      "t_parity": 0,
      "t_order": 1,
      "curvature": [["3", "e", 0]],
      "operations": {
        "2": [
          {"inputs": ["e", "x"], "output": [["1", "x", 0]]}
        ]
      },
      "pairing": {
        "dimension": 1,
        "entries": [{"inputs": ["e", "x"], "value": [["1", 0]]}]
      }
    }

The unit must be the first basis element.  ``curvature`` is ``m_0`` and is
omitted when zero; ``pairing`` is omitted when the algebra carries none.
Only ``t`` may appear in coefficients (the Laurent variables of the Euler
deformations are built in memory, never read from files).
"""
from __future__ import annotations

from fractions import Fraction

from ..io import dumps, load_json
from ..scalars import GaussianRational, ParseError, format_scalar, parse_scalar
from .algebra import AInftyAlgebra
from .ring import BaseRing

__all__ = ["parse_algebra", "serialize_algebra", "read_algebra", "algebra_to_json"]

_KEYS = {"name", "basis", "degrees", "t_parity", "t_order", "curvature", "operations",
         "pairing"}


def _expect(cond: bool, message: str, loc: str):
    if not cond:
        raise ParseError(message, loc)


def _int(value, loc: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), "expected an integer", loc)
    return value


def _rational(value, loc: str) -> Fraction:
    x = parse_scalar(value, loc)
    if isinstance(x, GaussianRational):
        raise ParseError("A-infinity coefficients must be rational", loc)
    return x


def _t_power(value, t_order: int, loc: str) -> int:
    k = _int(value, loc)
    _expect(0 <= k < t_order, f"t power must lie in [0, {t_order})", loc)
    return k


def _element(terms, index: dict, t_order: int, loc: str) -> dict:
    _expect(isinstance(terms, list), "expected a list of [coefficient, basis, t power] terms", loc)
    out: dict = {}
    for i, term in enumerate(terms):
        tl = f"{loc}[{i}]"
        _expect(isinstance(term, list) and len(term) == 3, "a term is [coefficient, basis, t power]", tl)
        c = _rational(term[0], f"{tl}[0]")
        _expect(term[1] in index, f"unknown basis element {term[1]!r}", f"{tl}[1]")
        key = ((_t_power(term[2], t_order, f"{tl}[2]"), 0, 0), index[term[1]])
        _expect(key not in out, "repeated term", tl)
        out[key] = c
    return out


def _word(names, index: dict, loc: str) -> tuple:
    _expect(isinstance(names, list), "inputs must be a list of basis names", loc)
    for j, nm in enumerate(names):
        _expect(nm in index, f"unknown basis element {nm!r}", f"{loc}[{j}]")
    return tuple(index[nm] for nm in names)


def parse_algebra(data, source: str = "<input>") -> AInftyAlgebra:
    loc = source
    _expect(isinstance(data, dict), "an algebra spec must be a JSON object", loc)
    unknown = sorted(set(data) - _KEYS)
    _expect(not unknown, f"unknown keys {unknown}", loc)
    for key in ("name", "basis", "degrees", "operations"):
        _expect(key in data, f"missing key {key!r}", loc)
    name = data["name"]
    _expect(isinstance(name, str), "name must be a string", f"{loc}.name")
    basis = data["basis"]
    _expect(isinstance(basis, list) and basis and all(isinstance(b, str) for b in basis),
            "basis must be a nonempty list of names", f"{loc}.basis")
    _expect(len(set(basis)) == len(basis), "basis names must be distinct", f"{loc}.basis")
    degrees = data["degrees"]
    _expect(isinstance(degrees, list) and len(degrees) == len(basis),
            "one degree per basis element", f"{loc}.degrees")
    degs = [_int(d, f"{loc}.degrees[{i}]") for i, d in enumerate(degrees)]
    t_parity = _int(data.get("t_parity", 0), f"{loc}.t_parity")
    t_order = _int(data.get("t_order", 1), f"{loc}.t_order")
    try:
        ring = BaseRing(t_parity, t_order)
    except ValueError as exc:
        raise ParseError(str(exc), f"{loc}.t_order") from None
    index = {b: i for i, b in enumerate(basis)}

    ops: dict = {}
    if data.get("curvature"):
        ops[0] = {(): _element(data["curvature"], index, t_order, f"{loc}.curvature")}
    oloc = f"{loc}.operations"
    _expect(isinstance(data["operations"], dict), "operations must map arities to tables", oloc)
    for k_text, table in data["operations"].items():
        kl = f"{oloc}.{k_text}"
        _expect(k_text.isdigit() and int(k_text) >= 1, "arity keys are positive integers", kl)
        k = int(k_text)
        _expect(isinstance(table, list), "a table is a list of entries", kl)
        tab: dict = {}
        for i, entry in enumerate(table):
            el = f"{kl}[{i}]"
            _expect(isinstance(entry, dict) and set(entry) == {"inputs", "output"},
                    "an entry is {inputs, output}", el)
            w = _word(entry["inputs"], index, f"{el}.inputs")
            _expect(len(w) == k, f"expected {k} inputs", f"{el}.inputs")
            _expect(w not in tab, "repeated input word", el)
            tab[w] = _element(entry["output"], index, t_order, f"{el}.output")
        ops[k] = tab

    pairing, dimension = None, 0
    if data.get("pairing") is not None:
        ploc = f"{loc}.pairing"
        p = data["pairing"]
        _expect(isinstance(p, dict) and set(p) == {"dimension", "entries"},
                "pairing is {dimension, entries}", ploc)
        dimension = _int(p["dimension"], f"{ploc}.dimension") & 1
        _expect(isinstance(p["entries"], list), "entries must be a list", f"{ploc}.entries")
        pairing = {}
        for i, entry in enumerate(p["entries"]):
            el = f"{ploc}.entries[{i}]"
            _expect(isinstance(entry, dict) and set(entry) == {"inputs", "value"},
                    "a pairing entry is {inputs, value}", el)
            w = _word(entry["inputs"], index, f"{el}.inputs")
            _expect(len(w) == 2, "pairing entries take two inputs", f"{el}.inputs")
            _expect(w not in pairing, "repeated pairing entry", el)
            vals = entry["value"]
            _expect(isinstance(vals, list), "value is a list of [coefficient, t power]", f"{el}.value")
            val = {}
            for j, term in enumerate(vals):
                tl = f"{el}.value[{j}]"
                _expect(isinstance(term, list) and len(term) == 2, "expected [coefficient, t power]", tl)
                val[(_t_power(term[1], t_order, f"{tl}[1]"), 0, 0)] = _rational(term[0], f"{tl}[0]")
            pairing[w] = val
    try:
        return AInftyAlgebra(name, tuple(basis), tuple(degs), ring, ops, pairing, dimension)
    except ValueError as exc:
        raise ParseError(str(exc), loc) from None


def _terms(alg: AInftyAlgebra, elem: dict) -> list:
    out = []
    for (mono, b), c in sorted(elem.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if mono[1] or mono[2]:
            raise ValueError("only t may appear in the coefficients of a spec file")
        out.append([format_scalar(c), alg.basis[b], mono[0]])
    return out


def algebra_to_json(alg: AInftyAlgebra) -> dict:
    if alg.ring.has_s or alg.ring.has_e:
        raise ValueError("algebras over the Euler-deformed rings have no spec-file form")
    out: dict = {"name": alg.name, "basis": list(alg.basis), "degrees": list(alg.degrees),
                 "t_parity": alg.ring.t_parity, "t_order": alg.ring.t_order}
    m0 = alg.curvature()
    if m0:
        out["curvature"] = _terms(alg, m0)
    ops = {}
    for k in sorted(alg.ops):
        if k == 0 or not alg.ops[k]:
            continue
        ops[str(k)] = [{"inputs": [alg.basis[b] for b in w], "output": _terms(alg, v)}
                       for w, v in sorted(alg.ops[k].items())]
    out["operations"] = ops
    if alg.pairing is not None:
        entries = []
        for w, v in sorted(alg.pairing.items()):
            if not v:
                continue
            entries.append({"inputs": [alg.basis[b] for b in w],
                            "value": [[format_scalar(c), m[0]] for m, c in sorted(v.items())]})
        out["pairing"] = {"dimension": alg.dimension, "entries": entries}
    return out


def serialize_algebra(alg: AInftyAlgebra) -> str:
    return dumps(algebra_to_json(alg))


def read_algebra(path: str) -> AInftyAlgebra:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_algebra(load_json(text, path), path)
