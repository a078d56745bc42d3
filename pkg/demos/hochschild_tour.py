"""A short walk through the chain-level operators on 2x2 matrices.

Applies b and B to a hand-built Hochschild chain, then runs the
randomized identity suite on one sample algebra with a small trial count.
"""
from __future__ import annotations

import argparse

from tecalc.hochschild import (Chain, connes_B, hochschild_b, matrix_algebra,
                               run_identity_suite, sample_zoo)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--algebra", default="matrix2", choices=sorted(sample_zoo()))
    parser.add_argument("--trials", type=int, default=10)
    args = parser.parse_args()

    alg = matrix_algebra()
    E12, E21 = 1, 2
    c = Chain.word((E12, E21))
    print("chain       ", c.render(alg))
    print("b(chain)    ", hochschild_b(alg, c).render(alg), "  (the commutator E12 E21 - E21 E12)")
    print("B(chain)    ", connes_B(alg, c).render(alg))
    print("b(b(chain)) ", hochschild_b(alg, hochschild_b(alg, c)).render(alg))

    rep = run_identity_suite(sample_zoo()[args.algebra], trials=args.trials, maxlen=3)
    print(f"\nidentity suite on {rep.algebra} ({rep.seconds:.2f} s)")
    for r in rep.results:
        print(f"  {r.status:4}  {r.name}" + (f"  [{r.skipped}]" if r.skipped else ""))


if __name__ == "__main__":
    main()
