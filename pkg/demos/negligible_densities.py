"""Exact densities of the shape-constrained sets on big annuli of F(a, b)."""
from fractions import Fraction

from genfree import BarrierSpec, FreeGroup, density, enumerate_ball, region
from genfree.barriers import TPred, VPred, WPred, ZPred


def main():
    F2 = FreeGroup(2)
    ball = enumerate_ball(F2, 12)
    eps, rho, C = Fraction(1, 10), Fraction(95, 100), 1
    preds = {
        "W": WPred(F2, eps, F2.word("a"), C),
        "V": VPred(F2, 2 * eps, 1 - 2 * eps, BarrierSpec.minimal(F2, "a", 16 * C + 1, C)),
        "Z": ZPred(F2, eps, 1 - eps, C),
        "T": TPred(F2, eps, 1 - eps, C),
    }
    print("n   " + "  ".join(f"{k:>7}" for k in preds))
    for n in range(6, 13):
        reg = region(ball, "big_annulus", n, 0, rho)
        row = [density(p, reg).density for p in preds.values()]
        print(f"{n:<3} " + "  ".join(f"{d:7.4f}" for d in row))


if __name__ == "__main__":
    main()
