"""Certify that two long words generate a free subgroup of F(a, b).

Each word carries an a^20 block in the middle of its geodesic; those blocks
are the barriers that make every product path quasi-geodesic.
"""
from fractions import Fraction

from genfree import BarrierSpec, FreeGroup, NegligibleParams, certify_tuple


def main():
    F2 = FreeGroup(2)
    u1 = "b" * 50 + "a" * 20 + "b" * 50
    u2 = "a" + u1 + "a"
    params = NegligibleParams(eps=Fraction(1, 5), rho=Fraction(9, 10), C=1)
    cert = certify_tuple([u1, u2], params, L=3, ball=F2, spec=BarrierSpec((1,), 20, 1), D=17, tau=9)
    print("verdict:", cert.verdict)
    for w in cert.words:
        print(f"  {w.word:<16} admissible={w.admissible} lambda={w.lam}")

    print("(a, a^2):", certify_tuple(["a", "aa"], params, ball=F2).relation)


if __name__ == "__main__":
    main()
