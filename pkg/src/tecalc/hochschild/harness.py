"""Randomised exact checks of the chain-level operator identities.

Each identity is evaluated on random chains (and random cochains of both
parities where it involves one).  A failure keeps the first witness so a
report can show exactly which input broke which identity.

One sign differs from the commonly quoted form of the Cartan homotopy
formula: with the conventions used here the identity that holds for
cochains of either parity is

    [i{phi}, b + uB] = (-1)^{|phi|} (u L_phi + i{[m, phi]}),

where ``|phi|`` is the unshifted degree.  For odd ``|phi|'`` this is the
familiar statement; for even ``|phi|'`` both sides change sign together
with the bracket ``[phi, m]``.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..connection import euler_te_extension
from ..linalg import Matrix
from .algebra import (AInftyAlgebra, verify_ainfty, verify_cyclic, verify_euler_grading,
                      verify_unit)
from .chains import Chain, random_chain
from .cochains import (Cochain, cup, gerstenhaber, grading_cochain, m_prime,
                       random_cochain, structure_cochain)
from .operators import (B11, Op, b11, bracket, cap, connes_B, euler_u_connection,
                        hochschild_b, i_op, lie_derivative, op_B, op_b, op_b_plus_uB, op_gamma,
                        op_ggm, op_gr_minus, op_i, op_L, pairing, u_connection)
from .ring import bracket_derivations, d_dt
from .samples import (OddParityViolation, e_deformation, is_strict_morphism, negative,
                      negative_opposite, opposite, s_deformation, uncurved)

__all__ = ["IdentityResult", "SuiteReport", "run_identity_suite", "check_cartan",
           "length_zero_connection"]

_HALF = Fraction(1, 2)


@dataclass
class IdentityResult:
    name: str
    trials: int = 0
    failures: int = 0
    witness: str = ""
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0 and not self.skipped

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIP"
        return "PASS" if self.failures == 0 else "FAIL"


@dataclass
class SuiteReport:
    algebra: str
    results: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.failures == 0 for r in self.results)

    def get(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "passed": self.passed,
            "identities": [
                {"name": r.name, "status": r.status, "trials": r.trials,
                 "failures": r.failures,
                 **({"witness": r.witness} if r.witness else {}),
                 **({"reason": r.skipped} if r.skipped else {})}
                for r in self.results
            ],
        }


class _Recorder:
    def __init__(self, report: SuiteReport):
        self.report = report
        self.by_name: dict = {}

    def _res(self, name):
        res = self.by_name.get(name)
        if res is None:
            res = self.by_name[name] = IdentityResult(name)
            self.report.results.append(res)
        return res

    def check(self, name: str, ok: bool, witness: Callable[[], str] = lambda: ""):
        res = self._res(name)
        res.trials += 1
        if not ok:
            res.failures += 1
            if not res.witness:
                res.witness = witness()

    def skip(self, name: str, reason: str):
        res = self._res(name)
        if not res.trials:
            res.skipped = reason


def _diff(x: Chain, y: Chain) -> Chain:
    return x - y


def check_cartan(alg: AInftyAlgebra, phi: Cochain, chain: Chain) -> Chain:
    """Residual of the Cartan homotopy formula (zero when it holds)."""
    D = op_b_plus_uB(alg)
    lhs = bracket(op_i(alg, phi), D)(chain)
    m = structure_cochain(alg)
    rhs = lie_derivative(alg, phi, chain).shift(1) + i_op(alg, gerstenhaber(m, phi), chain)
    if phi.degree:
        rhs = -rhs
    return lhs - rhs


def _pair_diff(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def run_identity_suite(alg: AInftyAlgebra, trials: int = 100, maxlen: int = 4,
                       seed: int = 0, max_arity: int = 3,
                       euler: bool = True) -> SuiteReport:
    """Run every applicable identity ``trials`` times on ``alg``.

    ``maxlen`` bounds the word length of random chains.  Identities that need
    structure the algebra lacks (a pairing, a ``t`` direction, a non-zero
    curvature) are reported as skipped.
    """
    start = time.perf_counter()
    report = SuiteReport(alg.name)
    rec = _Recorder(report)
    rng = random.Random(seed)

    _structural_checks(alg, rec)

    b, B, D = op_b(alg), op_B(alg), op_b_plus_uB(alg)
    G = op_gamma(alg)
    m = structure_cochain(alg)
    L_mprime = op_L(alg, m_prime(alg))
    ggm = op_ggm(alg, d_dt(alg.ring)) if alg.ring.t_order > 1 else None
    w, rest = alg.weak_curvature()
    bar = uncurved(alg) if (w and not rest) else None

    for trial in range(trials):
        c = random_chain(alg, rng, maxlen=maxlen, terms=2, max_upower=1)
        p = trial % 2
        phi = random_cochain(alg, rng, p, max_arity=max_arity, name="phi")
        psi = random_cochain(alg, rng, rng.randint(0, 1), max_arity=max_arity, name="psi")
        show = lambda: c.render(alg)

        bc = b(c)
        rec.check("b^2 = 0", b(bc).is_zero(), show)
        rec.check("B^2 = 0", B(B(c)).is_zero(), show)
        rec.check("bB + Bb = 0", (b(B(c)) + B(bc)).is_zero(), show)
        rec.check("(b+uB)^2 = 0", D(D(c)).is_zero(), show)
        rec.check("L_m = b", lie_derivative(alg, m, c) == bc, show)
        rec.check("Cartan homotopy", check_cartan(alg, phi, c).is_zero(),
                  lambda: f"|phi|'={p} on {show()}")
        Lphi = op_L(alg, phi)
        mphi = gerstenhaber(m, phi)
        rec.check("[b, L_phi] = L_[m,phi]",
                  _diff(bracket(b, Lphi)(c), lie_derivative(alg, mphi, c)).is_zero(), show)
        rec.check("[B, L_phi] = 0", bracket(B, Lphi)(c).is_zero(), show)
        rec.check("[L_psi, L_phi] = L_[psi,phi]",
                  _diff(bracket(op_L(alg, psi), Lphi)(c),
                        lie_derivative(alg, gerstenhaber(psi, phi), c)).is_zero(), show)
        rec.check("[Gamma, b] = b - L_m'", _diff(bracket(G, b)(c), bc - L_mprime(c)).is_zero(),
                  show)
        rec.check("[Gamma, B] = -B", (bracket(G, B)(c) + B(c)).is_zero(), show)

        if alg.pairing is not None:
            # ([m, phi], a) + (-1)^{|phi|} (phi, b a) = 0
            lhs = pairing(alg, mphi, c)
            rhs = pairing(alg, phi, bc)
            if phi.degree:
                rhs = {k: -v for k, v in rhs.items()}
            rec.check("pairing descent", not _pair_diff(lhs, {k: -v for k, v in rhs.items()}),
                      show)
            rec.check("cup/cap adjunction",
                      not _pair_diff(pairing(alg, cup(phi, psi), c),
                                     pairing(alg, phi, cap(alg, psi, c))), show)
        else:
            rec.skip("pairing descent", "no cyclic pairing")
            rec.skip("cup/cap adjunction", "no cyclic pairing")

        if ggm is not None:
            rec.check("GGM flatness [nabla_t, b+uB] = 0",
                      bracket(ggm, D)(c).truncate_t(alg.ring.t_order - 1).is_zero(), show)
        else:
            rec.skip("GGM flatness [nabla_t, b+uB] = 0", "no t direction")

        if bar is not None:
            _curved_checks(alg, bar, w, c, rec, show)
        else:
            for name in _CURVED:
                rec.skip(name, "not weakly curved with w != 0")

        if not w and not rest:
            _nilpotency_check(alg, c, maxlen, rec, show)
        else:
            rec.skip("residue nilpotency", "curved")

    if euler:
        _euler_checks(alg, rec, rng, max(1, trials // 4), maxlen)
    report.seconds = time.perf_counter() - start
    return report


_CURVED = ("curved: b = b-bar", "curved: B = B-bar", "curved: b11(m') = b11-bar(m-bar') + 2w",
           "curved: B11(m') = B11-bar(m-bar')")


def _curved_checks(alg, bar, w, c, rec, show):
    rec.check(_CURVED[0], hochschild_b(alg, c) == hochschild_b(bar, c), show)
    rec.check(_CURVED[1], connes_B(alg, c) == connes_B(bar, c), show)
    rec.check(_CURVED[2],
              b11(alg, m_prime(alg), c) == b11(bar, m_prime(bar), c) + c.scale(2 * w), show)
    rec.check(_CURVED[3], B11(alg, m_prime(alg), c) == B11(bar, m_prime(bar), c), show)


def _nilpotency_check(alg, c, maxlen, rec, show):
    mp = m_prime(alg)
    x = c
    shrinking = True
    for _ in range(maxlen + 1):
        y = b11(alg, mp, x)
        if not y.is_zero() and y.max_length() >= x.max_length():
            shrinking = False
        x = y
    rec.check("residue nilpotency", shrinking and x.is_zero(), show)


def _structural_checks(alg: AInftyAlgebra, rec: _Recorder):
    rep = verify_ainfty(alg)
    rec.check("A-infinity relations", rep.passed, lambda: str(rep.witness))
    rep = verify_unit(alg)
    rec.check("strict unit", rep.passed, lambda: str(rep.witness))
    if alg.pairing is not None:
        rep = verify_cyclic(alg)
        rec.check("cyclic pairing", rep.passed, lambda: str(rep.witness))
    else:
        rec.skip("cyclic pairing", "no cyclic pairing")
    op = opposite(alg)
    rec.check("opposite is A-infinity", verify_ainfty(op).passed and verify_unit(op).passed)
    rec.check("opposite of opposite", opposite(op).ops == alg.ops)
    neg = negative(alg)
    # A^- uses the basis (-e, a_1, ...), so a -> -a fixes the first coordinate
    minus = Matrix.diag([1] + [-1] * (alg.dim - 1))
    rec.check("a -> -a is a morphism A -> A^-", is_strict_morphism(minus, alg, neg))
    no = negative_opposite(alg)
    rec.check("negative-opposite is A-infinity", verify_ainfty(no).passed and verify_unit(no).passed)


def _euler_checks(alg: AInftyAlgebra, rec: _Recorder, rng: random.Random, trials: int,
                  maxlen: int):
    variants = [("C^s", s_deformation)]
    variants.append(("C^e", e_deformation))
    for label, make in variants:
        try:
            ext = make(alg)
        except OddParityViolation as exc:
            for name in _euler_names(label):
                rec.skip(name, str(exc))
            continue
        rep = verify_euler_grading(ext)
        rec.check(f"{label}: Euler grading compatible", rep.passed, lambda: str(rep.witness))
        D = op_b_plus_uB(ext)
        grm = op_gr_minus(ext)
        ideg = op_i(ext, grading_cochain(ext))
        ggm = op_ggm(ext, d_dt(ext.ring)) if ext.ring.t_order > 1 else None
        if ggm is not None:
            vb = bracket_derivations(ext.grading.E, d_dt(ext.ring), 2)
            ggm_b = op_ggm(ext, vb)
        for _ in range(trials):
            c = random_chain(ext, rng, maxlen=min(maxlen, 3), terms=2, max_upower=1)
            show = lambda: c.render(ext)
            rec.check(f"{label}: [Gr-, b+uB] = b+uB", _diff(bracket(grm, D)(c), D(c)).is_zero(),
                      show)
            homotopy = _euler_homotopy(ideg, D, c)
            lhs = euler_u_connection(ext, c) - u_connection(ext, c)
            rec.check(f"{label}: Euler vs canonical u-connection", (lhs - homotopy).is_zero(), show)
            if ggm is not None:
                res = _diff(bracket(grm, ggm)(c), ggm_b(c)).truncate_t(ext.ring.t_order - 1)
                rec.check(f"{label}: [Gr-, nabla_t] = nabla_[2E,t]", res.is_zero(), show)
            else:
                rec.skip(f"{label}: [Gr-, nabla_t] = nabla_[2E,t]", "no t direction")
        if label == "C^e":
            _restriction_check(alg, ext, rec, rng, trials, maxlen)
            _length_zero_check(alg, rec)


def _euler_homotopy(ideg: Op, D: Op, c: Chain) -> Chain:
    # deg has shifted parity 0, so |deg| = 1 and the Cartan sign is -1:
    # the difference of the two u-connections is u^-2/2 (u L_deg + i{[m, deg]})
    return -bracket(ideg, D)(c).shift(-2).scale(_HALF)


def _length_zero_check(alg: AInftyAlgebra, rec: _Recorder):
    name = "C^e length-0 block = euler_te_extension"
    w, rest = alg.weak_curvature()
    blocks = length_zero_connection(alg) if not rest else None
    if blocks is None:
        rec.skip(name, "length-0 chains not preserved")
        return
    E = euler_te_extension(Matrix.diag(alg.degrees), Matrix.scalar(alg.dim, w))
    rec.check(name, E.A.coeffs[0] == blocks[0] and E.A.coeffs[1] == blocks[1],
              lambda: f"{blocks[0]!r} {blocks[1]!r}")


def _euler_names(label):
    names = [f"{label}: Euler grading compatible", f"{label}: [Gr-, b+uB] = b+uB",
             f"{label}: Euler vs canonical u-connection", f"{label}: [Gr-, nabla_t] = nabla_[2E,t]"]
    if label == "C^e":
        names += ["C^e at e=1 recovers the u-connection", "C^e length-0 block = euler_te_extension"]
    return names


def _restriction_check(alg, ext, rec, rng, trials, maxlen):
    name = "C^e at e=1 recovers the u-connection"
    ideg = op_i(ext, grading_cochain(ext))
    D = op_b_plus_uB(ext)
    for _ in range(trials):
        c = random_chain(alg, rng, maxlen=min(maxlen, 3), terms=2, max_upower=1)
        corrected = euler_u_connection(ext, c) - _euler_homotopy(ideg, D, c)
        rec.check(name, corrected.restrict("e") == u_connection(alg, c), lambda: c.render(alg))


def length_zero_connection(alg: AInftyAlgebra):
    """Matrices ``(A_0, A_1)`` of the Euler u-connection of ``C^e`` on length-0 chains at ``e = 1``.

    Column ``j`` holds the coefficients of ``u^2 nabla`` applied to the basis
    word ``a_j``; returns ``None`` when length-0 chains are not preserved.
    """
    ext = e_deformation(alg)
    n = alg.dim
    cols0, cols1 = [], []
    for j in range(n):
        out = euler_u_connection(ext, Chain.word((j,))).restrict("e")
        c0, c1 = [0] * n, [0] * n
        for (p, mono, word), v in out.terms.items():
            if len(word) != 1 or any(mono) or p not in (-2, -1):
                return None
            (c0 if p == -2 else c1)[word[0]] += v
        cols0.append(c0)
        cols1.append(c1)
    return Matrix.from_columns(cols0), Matrix.from_columns(cols1)
