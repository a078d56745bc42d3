"""Rewrite the shipped fixtures from the library (run from the repository root).

Connection and algebra fixtures are produced by the serializers, so they are
in canonical form and round-trip byte for byte.  Files under ``errors/`` are
hand-shaped inputs that each trigger one error path of the CLI; ``cases.json``
lists the command line and the expected outcome for every one of them.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from tecalc.connection import EStructure, GradingData, Polarization, exponential_structure
from tecalc.hochschild.samples import matrix_algebra, sample_zoo
from tecalc.hochschild.spec_io import serialize_algebra
from tecalc.io import dumps, serialize_connection
from tecalc.levelt import block_diagonalize
from tecalc.linalg import Matrix
from tecalc.quantum import quadric_frame_matrices, quantum_structure
from tecalc.scalars import GaussianRational
from tecalc.series import MatrixSeries

ROOT = Path(__file__).resolve().parent


def algebra_filename(name: str) -> str:
    slug = name.replace("+", "_").replace("~", "_").replace("/", "over").replace("=", "eq")
    return re.sub(r"[^A-Za-z0-9_.-]", "", slug) + ".json"


def connections() -> dict[str, str]:
    out = {}
    for name in ("s2", "quadric-intersection-cp5", "point"):
        out[f"{name}.json"] = serialize_connection(quantum_structure(name, 8).E, "Q")

    E = exponential_structure(3, 8)
    E = EStructure(E.A, Polarization(Matrix([[1]])), label="exp-3")
    out["exp-3.json"] = serialize_connection(E, "Q")
    out["exp-minus-2.json"] = serialize_connection(
        EStructure(exponential_structure(-2, 4).A, label="exp-minus-2"), "Q")
    out["exp-2.json"] = serialize_connection(
        EStructure(exponential_structure(2, 4).A, label="exp-2"), "Q")

    s2 = quantum_structure("s2", 9).E
    w, block = block_diagonalize(s2, 9).block_structures()[1]
    out["s2-block-2.json"] = serialize_connection(
        EStructure(block.A, label=f"s2 block {w}"), "Q")

    bad = s2.truncate(8)
    A = list(bad.A.coeffs)
    A[1] = A[1].with_entry(0, 1, Fraction(1, 3))
    out["s2-perturbed.json"] = serialize_connection(
        EStructure(MatrixSeries(A), bad.polarization, bad.grading, "s2 perturbed at u^-1"), "Q")

    mats = quadric_frame_matrices()
    for tag, sub in (("jn", mats["N"]), ("jm", mats["M"])):
        S = MatrixSeries([mats["J"], sub], 11)
        out[f"quadric-{tag}.json"] = serialize_connection(
            EStructure(S, label=f"quadric frame (J, {tag[1].upper()})"), "Q")

    g = GaussianRational
    gauss = EStructure(MatrixSeries([Matrix([[0, -1], [1, 0]]),
                                     Matrix([[g(Fraction(3, 2), Fraction(1, 4)), 0], [0, g(0, 1)]])], 3),
                       grading=GradingData(Matrix([[0, 0], [0, 0]]), g(0, 0)), label="gaussian")
    out["gaussian.json"] = serialize_connection(gauss, "Q(i)")

    nil = EStructure(MatrixSeries([Matrix.zeros(2), Matrix([[0, 0], [0, 1]])], 4), label="nonunique")
    out["nonunique.json"] = serialize_connection(nil, "Q")
    return out


def algebras() -> dict[str, str]:
    out = {algebra_filename(a.name): serialize_algebra(a) for a in sample_zoo().values()}
    alg = matrix_algebra()
    ops = {k: dict(v) for k, v in alg.ops.items()}
    ops[2][(1, 2)] = {((0, 0, 0), 0): Fraction(1, 2)}   # E12 E21 should be (e + H)/2
    broken = alg.copy_with(ops=ops, name="matrix2-perturbed", pairing=None)
    out["matrix2-perturbed.json"] = serialize_algebra(broken)
    return out


ERROR_FILES = {
    "bad-fraction.json": '{"rank": 1, "order": 0, "field": "Q", "coefficients": [[["1/0"]]]}\n',
    "bad-json.json": '{"rank": 1, "order": 0,\n',
    "gaussian-over-q.json": '{"rank": 1, "order": 0, "field": "Q", "coefficients": [[["1+i"]]]}\n',
    "wrong-count.json": '{"rank": 1, "order": 2, "field": "Q", "coefficients": [[["1"]]]}\n',
    "pole-order-3.json": ('{"rank": 1, "order": 1, "field": "Q", "lowest_power": -3, '
                          '"coefficients": [[["1"]], [["0"]]]}\n'),
    "irrational.json": ('{"rank": 2, "order": 0, "field": "Q", '
                        '"coefficients": [[["0", "2"], ["1", "0"]]]}\n'),
    "nonzero-subleading.json": ('{"rank": 2, "order": 1, "field": "Q", '
                                '"coefficients": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]}\n'),
    "degenerate-pairing.json": ('{"rank": 1, "order": 0, "field": "Q", "coefficients": [[["1"]]], '
                                '"pairing": {"matrix": [["0"]]}}\n'),
    "no-pairing.json": '{"rank": 1, "order": 0, "field": "Q", "coefficients": [[["1"]]]}\n',
    "algebra-unknown-basis.json": ('{"name": "bad", "basis": ["e"], "degrees": [0], '
                                   '"operations": {"2": [{"inputs": ["e", "y"], '
                                   '"output": [["1", "e", 0]]}]}}\n'),
    "algebra-odd-unit.json": ('{"name": "bad", "basis": ["e"], "degrees": [1], '
                              '"operations": {}}\n'),
}

CASES = [
    ("malformed fraction", ["decompose", "fixtures/errors/bad-fraction.json"], "ParseError", 1),
    ("truncated JSON", ["decompose", "fixtures/errors/bad-json.json"], "ParseError", 1),
    ("Gaussian scalar over Q", ["decompose", "fixtures/errors/gaussian-over-q.json"], "ParseError", 1),
    ("coefficient count", ["flatten", "fixtures/errors/wrong-count.json"], "ParseError", 1),
    ("degenerate pairing", ["check-polarization", "fixtures/errors/degenerate-pairing.json"],
     "ParseError", 1),
    ("missing pairing", ["check-polarization", "fixtures/errors/no-pairing.json"], "ParseError", 1),
    ("pole of order three", ["decompose", "fixtures/errors/pole-order-3.json"], "PoleOrderError", 1),
    ("irrational spectrum", ["decompose", "fixtures/errors/irrational.json"], "IrrationalSpectrum", 1),
    ("flatten with non-scalar residue", ["flatten", "fixtures/connections/s2.json"],
     "ResidueNotScalar", 1),
    ("flatten with u^-1 term", ["flatten", "fixtures/errors/nonzero-subleading.json"],
     "NonzeroSubleading", 1),
    ("Jordan block", ["semisimplify", "fixtures/connections/quadric-intersection-cp5.json"],
     "NotSemisimple", 1),
    ("R-matrix of a non-semisimple preset", ["rmatrix", "--preset", "quadric-intersection-cp5"],
     "NotSemisimple", 1),
    ("unknown preset", ["preset", "cp7"], "UnknownPreset", 1),
    ("different residues", ["solve-isomorphism", "fixtures/connections/exp-minus-2.json",
                            "fixtures/connections/exp-2.json"], "NoSolution", 1),
    ("kernel survives lookahead", ["solve-isomorphism", "fixtures/connections/nonunique.json",
                                   "fixtures/connections/nonunique.json", "--order", "2"],
     "NonUnique", 1),
    ("algebra with unknown basis name", ["verify-identities", "--algebra",
                                         "fixtures/errors/algebra-unknown-basis.json"],
     "ParseError", 1),
    ("odd unit", ["verify-identities", "--algebra", "fixtures/errors/algebra-odd-unit.json"],
     "ParseError", 1),
    ("missing file", ["decompose", "fixtures/errors/does-not-exist.json"], "FileError", 1),
    ("unknown command", ["frobnicate"], "UsageError", 2),
    ("order must be positive", ["preset", "s2", "--order", "0"], "UsageError", 2),
    ("perturbed pairing check", ["check-polarization", "fixtures/connections/s2-perturbed.json"],
     None, 3),
    ("perturbed A-infinity product", ["verify-identities", "--algebra",
                                      "fixtures/algebras/matrix2-perturbed.json", "--trials", "4",
                                      "--maxlen", "2"], None, 3),
]


def main():
    for sub, files in (("connections", connections()), ("algebras", algebras()),
                       ("errors", ERROR_FILES)):
        d = ROOT / sub
        d.mkdir(exist_ok=True)
        for name, text in files.items():
            (d / name).write_text(text, encoding="utf-8")
    cases = [{"name": n, "argv": argv, "error": err, "exit": code} for n, argv, err, code in CASES]
    (ROOT / "errors" / "cases.json").write_text(dumps(cases), encoding="utf-8")


if __name__ == "__main__":
    main()
