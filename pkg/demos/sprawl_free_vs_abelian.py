"""Average pairwise distance e(n) in F(a, b) and Z^2.

In the free group e(n) climbs toward 2 like 2 - 3/(4n); on the square grid
it settles well below 2.
"""
from genfree import (FreeAbelianGroup, FreeGroup, convergence_fit, enumerate_ball,
                     f2_closed_form, sprawl_series)


def main():
    f2 = enumerate_ball(FreeGroup(2), 10)
    sphere = sprawl_series(f2, "annulus", range(1, 10))
    print("n  e_sphere(F2)  closed form")
    for n, ex in zip(sphere.ns, sphere.exact):
        print(f"{n:<2} {float(ex):.6f}      {float(f2_closed_form(n).e):.6f}")
    fit = convergence_fit(sphere)
    print(f"fit: {fit.verdict}, c = {fit.c:.6f}, residual = {fit.residual:.2e}")

    z2 = enumerate_ball(FreeAbelianGroup(2), 16)
    ball = sprawl_series(z2, "ball", range(2, 17))
    fit = convergence_fit(ball)
    print(f"Z^2 e_ball(16) = {ball.values[-1]:.4f}; fit: {fit.verdict} at {fit.plateau:.4f}")


if __name__ == "__main__":
    main()
