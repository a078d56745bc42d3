"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the bare report, or
through pytest, where the lines are repeated in the terminal summary.
"""
from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial, prod
from pathlib import Path

from conftest import check_decomposition, random_levelt_structure
from tecalc.cli import run
from tecalc.connection import (EStructure, apply_connection, check_polarization,
                               exponential_structure)
from tecalc.hochschild import run_identity_suite, sample_zoo
from tecalc.hochschild.spec_io import parse_algebra, serialize_algebra
from tecalc.io import parse_connection, serialize_connection
from tecalc.levelt import hom_solver
from tecalc.linalg import Matrix
from tecalc.normalform import isomorphism_solver, rmatrix_from_grading
from tecalc.quantum import (eigenframe_data, flat_sections_ode, quadric_frame_matrices,
                            quantum_structure, teleman_rmatrix)
from tecalc.series import MatrixSeries

ROOT = Path(__file__).resolve().parents[1]
RESULTS: list[str] = []
F = Fraction


@contextmanager
def criterion(number: int, title: str, budget: float | None = None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f} s, budget {budget} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"FAIL criterion {number:2d}: {title} ({elapsed:.2f} s) -- {exc}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"PASS criterion {number:2d}: {title} ({elapsed:.2f} s)"
    RESULTS.append(line)
    print(line)


# ---------------------------------------------------------------- helpers
def s2_eigen_coordinates(w: int, N: int) -> list:
    Q = quantum_structure("s2", N + 3)
    C, _, _ = eigenframe_data(Q)
    seed = [1, 1] if w == 2 else [-1, 1]
    sec = flat_sections_ode(Q, w, seed, N).section
    Cinv = C.inverse()
    return [Cinv @ sec[k] for k in range(N + 1)]


def reference_alpha(n: int) -> Fraction:
    return F(prod(4 * j * j - 1 for j in range(n)), 16 ** n * factorial(n))


def reference_teleman(m: int) -> Matrix:
    """Reference closed form for R_m (m = n + 1 >= 1)."""
    n = m - 1
    c = F(prod(4 * j * j - 1 for j in range(n + 1)), 16 ** m * factorial(m))
    return Matrix([[(-1) ** m, (-1) ** n * 2 * m], [-2 * m, 1]]).scale(c)


def quadric_conditions(x: Matrix, i: int) -> dict:
    """The four reference consistency conditions on R_i, as residuals."""
    return {
        "x00": -i * x[0, 0] + F(9, 16) * x[0, 1] - F(3, 2) * x[0, 2],
        "x33": -i * x[3, 3] - F(9, 16) * x[3, 1] - F(3, 2) * x[3, 2],
        "x21": (F(3, 2) - i) * x[2, 1] + F(2, 3) * x[2, 0] - F(2, 3) * x[2, 3],
        "x11": (-(i + F(1, 2)) * x[2, 2] - F(1, 4) * x[2, 0] - F(1, 4) * x[2, 3]
                - ((i - F(1, 2)) * x[1, 1] - F(2, 3) * x[1, 0] + F(2, 3) * x[1, 3])),
    }


def quadric_next_order(x: Matrix, i: int) -> dict:
    """Reference formulas for entries of R_(i+1) in terms of R_i."""
    X = lambda a, b: x[a, b]  # noqa: E731
    cubic = 4 * i ** 3 + 16 * i * i + 22 * i + 9
    quad = 8 * i * i + 6 * i - 5
    return {
        (0, 1): F(1, 8) * (i - 1) * X(0, 1) - F(1, 12) * X(0, 0) + F(1, 12) * X(0, 3),
        (0, 2): (-F(1, 64) * (i - 1) * X(0, 1) + F(1, 8) * i * X(0, 2) + F(1, 24) * X(0, 0)
                 + F(1, 8) * X(0, 2) + F(1, 48) * X(0, 3)),
        (0, 3): F(1, 16) * i * X(0, 3) + F(9, 256) * X(0, 1) + F(3, 32) * X(0, 2),
        (1, 0): (-F(1, 64) * i * (8 * X(1, 0) - X(2, 0)) - F(1, 16) * X(1, 0)
                 + F(9, 128) * X(1, 1) - F(3, 16) * X(1, 2) - F(1, 128) * X(2, 0)
                 - F(9, 1024) * X(2, 1) + F(3, 128) * X(2, 2)),
        (1, 3): (F(1, 64) * i * (8 * X(1, 3) + X(2, 3)) + F(9, 128) * X(1, 1)
                 + F(3, 16) * X(1, 2) + F(1, 16) * X(1, 3) + F(9, 1024) * X(2, 1)
                 + F(3, 128) * X(2, 2) - F(1, 128) * X(2, 3)),
        (2, 0): -F(1, 8) * i * X(2, 0) + F(1, 16) * X(2, 0) + F(9, 128) * X(2, 1) - F(3, 16) * X(2, 2),
        (2, 3): F(1, 8) * i * X(2, 3) + F(9, 128) * X(2, 1) + F(3, 16) * X(2, 2) - F(1, 16) * X(2, 3),
        (3, 0): -F(1, 16) * i * X(3, 0) + F(9, 256) * X(3, 1) - F(3, 32) * X(3, 2),
        (3, 1): -F(1, 8) * i * X(3, 1) + F(1, 12) * X(3, 0) + F(1, 8) * X(3, 1) - F(1, 12) * X(3, 3),
        (3, 2): (-F(1, 64) * i * (X(3, 1) + 8 * X(3, 2)) - F(1, 48) * X(3, 0) + F(1, 64) * X(3, 1)
                 - F(1, 8) * X(3, 2) - F(1, 24) * X(3, 3)),
        (2, 1): -i * X(1, 1) + F(2, 3) * X(1, 0) + F(1, 2) * X(1, 1) - F(2, 3) * X(1, 3),
        (0, 0): (6 * (i - 1) * X(0, 1) - 12 * (i + 1) * X(0, 2) - 7 * X(0, 0) + X(0, 3)) / (64 * (i + 1)),
        (3, 3): ((6 * i * (X(3, 1) + 2 * X(3, 2)) - X(3, 0) - 6 * X(3, 1) + 12 * X(3, 2)
                  + 7 * X(3, 3)) / (64 * (i + 1))),
        (1, 1): ((192 * i * i * X(1, 2)
                  + 8 * i * (4 * X(1, 0) + 72 * X(1, 2) + 4 * X(1, 3) + X(2, 0) - X(2, 3))
                  + 64 * X(1, 0) + 384 * X(1, 2) + 64 * X(1, 3) - 4 * X(2, 0) - 9 * X(2, 1)
                  + 4 * X(2, 3)) / (384 * (i + 1))),
        (1, 2): ((8 * cubic * X(1, 0) - 18 * (4 * i * i + 8 * i + 5) * X(1, 1)
                  - 8 * cubic * X(1, 3) - quad * X(2, 0) - 6 * (4 * i + 5) * X(2, 2)
                  - quad * X(2, 3)) / (768 * (i + 2) ** 3)),
    }


def quadric_chained(x: Matrix, i: int) -> Fraction:
    """The chained condition obtained by substituting the x^1 formulas (see the ledger)."""
    return (-F(1, 4) * x[2, 2] + F(1, 24) * (1 - 2 * i) * (x[2, 0] + x[2, 3])
            + (F(1, 2) - i) * ((F(1, 2) - i) * x[1, 1] + F(2, 3) * x[1, 0] - F(2, 3) * x[1, 3]))


# ---------------------------------------------------------------- criteria
def test_criterion_01_s2_flat_section_recursions():
    with criterion(1, "S^2 flat-section recursions to n = 10", budget=1.0):
        up = s2_eigen_coordinates(2, 11)
        down = s2_eigen_coordinates(-2, 11)
        beta, alpha = [c[0, 0] for c in up], [c[1, 0] for c in up]
        delta, gamma = [c[0, 0] for c in down], [c[1, 0] for c in down]
        assert (alpha[1], beta[1]) == (F(-1, 16), F(1, 8))
        assert (delta[1], gamma[1]) == (F(1, 16), F(-1, 8))
        for n in range(11):
            assert alpha[n + 1] == alpha[n] * (4 * n * n - 1) / (16 * (n + 1)), n
            assert beta[n] == -2 * n * alpha[n], n
            assert gamma[n] == -2 * n * delta[n], n


def test_criterion_02_s2_closed_form():
    with criterion(2, "S^2 closed form for alpha_n, n <= 10"):
        alpha = [c[1, 0] for c in s2_eigen_coordinates(2, 10)]
        assert all(alpha[n] == reference_alpha(n) for n in range(11))


def test_criterion_03_teleman_rmatrix():
    with criterion(3, "S^2 Teleman R-matrix to order 6 (flat columns, transposed closed form)",
                   budget=1.0):
        Q = quantum_structure("s2", 8)
        C, xi, _ = eigenframe_data(Q)
        R = teleman_rmatrix(Q, 6).P
        frame = MatrixSeries.constant(C, 6) @ R
        assert apply_connection(Q.E.truncate(6), frame) == frame @ MatrixSeries.constant(xi, 6)
        assert R[0] == Matrix.identity(2)
        for m in range(1, 7):
            assert R[m] == reference_teleman(m).T, m


def test_criterion_04_quadric_pair():
    with criterion(4, "quadric pair: unique R, reference entries and conditions, i <= 8",
                   budget=5.0):
        mats = quadric_frame_matrices()
        E1 = EStructure(MatrixSeries([mats["J"], mats["N"]], 12))
        E2 = EStructure(MatrixSeries([mats["J"], mats["M"]], 12))
        res = isomorphism_solver(E1, E2, 9, lookahead=2)
        assert res.kernel_dimension == 0 and res.effective_lookahead == 2
        R = res.R.P
        assert R[0] == Matrix.identity(4)
        assert (R[1][0, 1], R[1][2, 1], R[1][1, 0]) == (F(-1, 12), F(1, 2), F(3, 32))
        for i in range(9):
            residuals = quadric_conditions(R[i], i)
            assert not any(residuals.values()), (i, residuals)
            for (a, b), value in quadric_next_order(R[i], i).items():
                assert R[i + 1][a, b] == value, (i, a, b)
            x, y = R[i], R[i + 1]
            assert y[2, 2] - y[1, 1] == -i * x[1, 2] - F(1, 4) * x[1, 0] - F(3, 2) * x[1, 2] \
                - F(1, 4) * x[1, 3]
            assert quadric_chained(x, i) == 0, i


def test_criterion_05_quadric_frame():
    with criterion(5, "quadric frame identities P^-1 c1 P = J, P^-1 mu P = M"):
        mats = quadric_frame_matrices()
        Q = quantum_structure("quadric-intersection-cp5", 2)
        Pinv = mats["P"].inverse()
        assert Pinv @ Q.c1 @ mats["P"] == mats["J"]
        assert Pinv @ Q.mu @ mats["P"] == mats["M"]


def test_criterion_06_levelt_suite():
    with criterion(6, "Levelt decomposition on 20 random structures (rank <= 5, order 8)"):
        rng = random.Random(6)
        for _ in range(20):
            check_decomposition(random_levelt_structure(rng, order=8), 8)


def test_criterion_07_rigidity():
    with criterion(7, "hom = {0} to order 8 for 20 pairs with disjoint spectra"):
        rng = random.Random(7)
        for _ in range(20):
            values = rng.sample(range(-4, 5), 4)
            E1 = random_levelt_structure(rng, 11, values[:2], max_rank=3)
            E2 = random_levelt_structure(rng, 11, values[2:], max_rank=3)
            space = hom_solver(E1, E2, 8)
            assert space.dimension == 0


def test_criterion_08_convention_duality():
    with criterion(8, "grading R times Teleman R = Id to order 6 on S^2"):
        Q = quantum_structure("s2", 8)
        _, xi, mu = eigenframe_data(Q)
        G = rmatrix_from_grading(xi, mu, 6).P
        T = teleman_rmatrix(Q, 6).P
        assert G @ T == MatrixSeries.identity(2, 6)


REQUIRED_IDENTITIES = [
    "b^2 = 0", "(b+uB)^2 = 0", "Cartan homotopy", "[b, L_phi] = L_[m,phi]",
    "[L_psi, L_phi] = L_[psi,phi]", "[Gamma, b] = b - L_m'", "[Gamma, B] = -B",
    "C^e: [Gr-, b+uB] = b+uB", "pairing descent", "cup/cap adjunction",
    "curved: b11(m') = b11-bar(m-bar') + 2w", "C^e: Euler vs canonical u-connection",
]


def test_criterion_09_hochschild_suite():
    with criterion(9, "Hochschild identity suite on the zoo, 100 trials, length <= 4",
                   budget=60.0):
        zoo = sample_zoo()
        assert {"field", "matrix2", "exterior", "clifford"} <= set(zoo)
        exercised = {name: 0 for name in REQUIRED_IDENTITIES}
        for alg in zoo.values():
            rep = run_identity_suite(alg, trials=100, maxlen=4)
            failed = [r.name for r in rep.results if r.failures]
            assert not failed, (alg.name, failed)
            assert rep.get("b^2 = 0").trials >= 100
            for name in REQUIRED_IDENTITIES:
                if rep.get(name).status == "PASS":
                    exercised[name] += 1
        missing = [name for name, count in exercised.items() if not count]
        assert not missing, missing


def test_criterion_10_polarization():
    with criterion(10, "polarization to order 8 on presets and exp(-w/u); perturbed control"):
        for name in ("s2", "quadric-intersection-cp5"):
            rep = check_polarization(quantum_structure(name, 8).E, 8)
            assert rep.passed and rep.order_checked == 8, name
        assert check_polarization(exponential_structure(F(-5, 3), 8), 8).passed
        for k in (1, 3):
            E = quantum_structure("quadric-intersection-cp5", 8).E
            A = list(E.A.coeffs)
            A[k] = A[k] + Matrix.identity(4).with_entry(0, 3, 1)
            rep = check_polarization(E.with_A(MatrixSeries(A)), 8)
            assert not rep.passed and rep.first_failure == k


def test_criterion_11_cli_determinism_and_round_trips():
    with criterion(11, "CLI determinism and byte-exact fixture round trips"):
        conns = sorted((ROOT / "fixtures" / "connections").glob("*.json"))
        algs = sorted((ROOT / "fixtures" / "algebras").glob("*.json"))
        assert conns and algs
        for path in conns:
            text = path.read_text(encoding="utf-8")
            assert serialize_connection(parse_connection(json.loads(text))) == text, path.name
        for path in algs:
            text = path.read_text(encoding="utf-8")
            assert serialize_algebra(parse_algebra(json.loads(text))) == text, path.name
        for name in ("s2", "quadric-intersection-cp5", "point"):
            out, _, status = run(["preset", name])
            assert status == 0
            assert out == (ROOT / "fixtures" / "connections" / f"{name}.json").read_text()
        argvs = [["decompose", str(ROOT / "fixtures/connections/quadric-intersection-cp5.json"),
                  "--order", "3"],
                 ["rmatrix", "--preset", "s2", "--order", "6", "--decimal"],
                 ["verify-identities", "--algebra", str(ROOT / "fixtures/algebras/clifford.json"),
                  "--trials", "3"]]
        for argv in argvs:
            assert run(argv) == run(argv)
        cmd = [sys.executable, "-m", "tecalc.cli", "rmatrix", "--preset", "s2", "--order", "4"]
        outs = {subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)}
        assert len(outs) == 1


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except BaseException:
            failed += 1
    sys.exit(1 if failed else 0)
