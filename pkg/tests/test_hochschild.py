from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from tecalc.connection import euler_te_extension
from tecalc.hochschild import (Chain, LengthOverflow, clifford_algebra, connes_B,
                               exterior_algebra, field_algebra, hochschild_b, length_gamma,
                               matrix_algebra, negative_opposite, opposite, parse_algebra,
                               random_chain, run_identity_suite, sample_zoo, serialize_algebra,
                               uncurved, verify_ainfty, verify_cyclic, verify_unit,
                               weakly_curved)
from tecalc.hochschild.harness import length_zero_connection
from tecalc.hochschild.spec_io import algebra_to_json
from tecalc.linalg import Matrix
from tecalc.scalars import ParseError

ZOO = sample_zoo()
E, E12, E21, H = range(4)


def perturbed_matrix_algebra():
    alg = matrix_algebra()
    ops = {k: dict(v) for k, v in alg.ops.items()}
    ops[2][(E12, E21)] = {((0, 0, 0), 0): Fraction(1, 2)}
    return alg.copy_with(ops=ops, name="matrix2-perturbed", pairing=None)


@pytest.mark.parametrize("name", sorted(ZOO))
def test_zoo_satisfies_ainfty_and_unit(name):
    alg = ZOO[name]
    assert verify_ainfty(alg).passed
    assert verify_unit(alg).passed


@pytest.mark.parametrize("name", sorted(n for n, a in ZOO.items() if a.pairing is not None))
def test_zoo_pairings_are_cyclic(name):
    assert verify_cyclic(ZOO[name]).passed


def test_perturbed_product_fails_with_witness():
    rep = verify_ainfty(perturbed_matrix_algebra())
    assert not rep.passed
    assert rep.witness is not None and rep.residual


def test_opposites_are_ainfty():
    for alg in (matrix_algebra(), exterior_algebra(), clifford_algebra(2)):
        assert verify_ainfty(opposite(alg)).passed
        assert verify_ainfty(negative_opposite(alg)).passed


def test_b_on_commutator():
    alg = matrix_algebra()
    x = hochschild_b(alg, Chain.word((E12, E21)))
    y = hochschild_b(alg, Chain.word((E21, E12)))
    # b(a[b]) is the graded commutator of a and b; E12 E21 - E21 E12 = H
    assert set(k[2] for k in x.terms) == {(H,)}
    assert x == -y and not x.is_zero()


def test_b_vanishes_on_length_zero_uncurved():
    alg = matrix_algebra()
    for j in range(4):
        assert hochschild_b(alg, Chain.word((j,))).is_zero()


def test_b_kills_commuting_pair():
    alg = matrix_algebra()
    assert hochschild_b(alg, Chain.word((H, H))).is_zero()


def test_connes_B_prepends_unit():
    alg = matrix_algebra()
    assert connes_B(alg, Chain.word((E,))).is_zero()
    out = connes_B(alg, Chain.word((E12, E21)))
    assert out and all(w[0] == E for (_, _, w) in out.terms)
    assert all(E not in w[1:] for (_, _, w) in out.terms)


def test_length_operator():
    alg = matrix_algebra()
    c = Chain.word((H, E12, E21))
    assert length_gamma(alg, c) == c.scale(-2)


def test_weak_curvature_drops_from_b():
    alg = weakly_curved(matrix_algebra(), 3)
    rng = random.Random(5)
    for _ in range(20):
        c = random_chain(alg, rng, maxlen=3)
        assert hochschild_b(alg, c) == hochschild_b(uncurved(alg), c)


def test_chain_rejects_unit_in_bar_slot():
    with pytest.raises(ValueError):
        Chain.word((E12, E))


def test_length_overflow_is_an_overflow_error():
    assert issubclass(LengthOverflow, OverflowError)


def test_length_zero_connection_matches_euler_extension():
    for alg in (exterior_algebra(), clifford_algebra(2), matrix_algebra(Fraction(-1, 2))):
        A0, A1 = length_zero_connection(alg)
        w, _ = alg.weak_curvature()
        E_ = euler_te_extension(Matrix.diag(alg.degrees), Matrix.scalar(alg.dim, w))
        assert E_.A[0] == A0 and E_.A[1] == A1


def test_identity_suite_small_run_passes():
    rep = run_identity_suite(matrix_algebra(), trials=6, maxlen=3, seed=1)
    assert rep.passed
    assert rep.get("b^2 = 0").trials == 6
    assert rep.get("pairing descent").status == "PASS"


def test_identity_suite_reports_skips():
    rep = run_identity_suite(field_algebra(), trials=2, maxlen=1)
    assert rep.get("GGM flatness [nabla_t, b+uB] = 0").status == "SKIP"
    assert rep.passed


def test_identity_suite_detects_perturbation():
    rep = run_identity_suite(perturbed_matrix_algebra(), trials=4, maxlen=2)
    assert not rep.passed
    assert rep.get("A-infinity relations").status == "FAIL"


def test_identity_suite_is_deterministic():
    a = run_identity_suite(ZOO["exterior"], trials=5, maxlen=3, seed=7).to_dict()
    b = run_identity_suite(ZOO["exterior"], trials=5, maxlen=3, seed=7).to_dict()
    assert a == b


@pytest.mark.parametrize("name", sorted(ZOO))
def test_algebra_spec_round_trip(name):
    alg = ZOO[name]
    text = serialize_algebra(alg)
    back = parse_algebra(json.loads(text))
    assert serialize_algebra(back) == text
    assert back.ops == alg.ops and back.degrees == alg.degrees


@pytest.mark.parametrize("patch, where", [
    ({"degrees": [0]}, "degrees"),
    ({"t_order": 0}, "t_order"),
    ({"basis": []}, "basis"),
    ({"surprise": 1}, ""),
])
def test_algebra_spec_errors(patch, where):
    data = algebra_to_json(matrix_algebra())
    data.update(patch)
    with pytest.raises(ParseError) as info:
        parse_algebra(data, "spec")
    assert where in (info.value.location or "")


def test_algebra_spec_bad_coefficient():
    data = algebra_to_json(exterior_algebra())
    key = next(iter(data["operations"]))
    data["operations"][key][0]["output"][0][0] = "1/0"
    with pytest.raises(ParseError):
        parse_algebra(data)
