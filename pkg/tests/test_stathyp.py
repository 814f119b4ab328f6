from fractions import Fraction

import numpy as np
import pytest

from genfree import InputError, convergence_fit, e_annulus, e_ball, enumerate_ball, f2_closed_form
from genfree.enumeration import region
from genfree.stathyp import SprawlSeries, distance_sum, sprawl, sprawl_csv, sprawl_series


def test_small_oracles(f2_ball8):
    assert e_ball(1, f2_ball8).exact == Fraction(32, 25)
    assert e_annulus(1, 0, f2_ball8).exact == Fraction(3, 2)
    assert e_annulus(2, 0, f2_ball8).exact == Fraction(5, 3)
    assert e_ball(0, f2_ball8).value == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_sphere_matches_closed_form(f2_ball8, n):
    cf = f2_closed_form(n)
    assert e_annulus(n, 0, f2_ball8).exact == cf.e
    assert 2 - cf.e == cf.deviation


def test_sum_methods_agree(F2):
    b = enumerate_ball(F2, 5)
    for kind, n, d in (("ball", 4, 0), ("annulus", 3, 2), ("annulus", 5, 0)):
        reg = region(b, kind, n, d)
        s = distance_sum(reg, "structural")
        assert s == distance_sum(reg, "pairwise") == distance_sum(reg, "generic")


def test_abelian_sum_matches_generic(z2_ball10):
    reg = region(z2_ball10, "ball", 6)
    assert distance_sum(reg, "abelian") == distance_sum(reg, "generic")


def test_single_point_region(F2):
    b = enumerate_ball(F2, 0)
    assert sprawl(region(b, "ball", 0), 1).value == 0


def test_abelian_stays_below_two(z2_ball10):
    assert e_ball(10, z2_ball10).value < 1.9


def test_bounds_hold(f2_ball8, z2_ball10):
    for ball in (f2_ball8, z2_ball10):
        assert sprawl_series(ball, "ball", range(1, 8)).check_bounds()
        assert sprawl_series(ball, "annulus", range(2, 7), delta=1).check_bounds()


def test_sampled_is_unbiased(F2):
    b = enumerate_ball(F2, 6)
    exact = e_ball(6, b).value
    est = e_ball(6, b, mode="sampled", samples=4000, seed=3)
    assert est.mode == "sampled" and abs(est.value - exact) <= 3 * est.se
    again = e_ball(6, b, mode="sampled", samples=4000, seed=3)
    assert again.value == est.value


def test_cutoff_switches_to_sampling(surface):
    b = enumerate_ball(surface, 2)
    v = sprawl(region(b, "ball", 2), 2, cutoff=10, samples=200, seed=1)
    assert v.mode == "sampled"


def test_fit_constant_deviation():
    ns = list(range(2, 12))
    s = SprawlSeries("ball", 0, ns, [2 - 0.75 / n for n in ns], [0.0] * len(ns), "exact")
    fit = convergence_fit(s)
    assert fit.verdict == "inverse_n"
    assert fit.c == pytest.approx(0.75, abs=1e-8)


def test_fit_on_sphere_oracle(f2_ball8):
    s = sprawl_series(f2_ball8, "annulus", range(1, 9))
    fit = convergence_fit(s)
    assert fit.verdict == "inverse_n" and fit.c == pytest.approx(0.75, abs=1e-6)


def test_fit_plateau(z2_ball10):
    s = sprawl_series(z2_ball10, "ball", range(2, 11))
    fit = convergence_fit(s)
    assert fit.verdict == "plateau" and fit.plateau < 1.5


def test_fit_needs_points():
    with pytest.raises(InputError):
        convergence_fit([(1, 1.0), (2, 1.5), (3, 1.6)])


def test_invalid_arguments(f2_ball8):
    with pytest.raises(InputError):
        e_annulus(0, 0, f2_ball8)
    with pytest.raises(InputError):
        sprawl(region(f2_ball8, "ball", 2), 2, mode="bogus")
    with pytest.raises(InputError):
        f2_closed_form(0)


def test_csv_format(f2_ball8):
    b = sprawl_series(f2_ball8, "ball", [1, 2])
    a = sprawl_series(f2_ball8, "annulus", [1, 2])
    text = sprawl_csv(b, a)
    lines = text.strip().splitlines()
    assert lines[0] == "n,e_ball,e_annulus,se,mode"
    n, eb, ea, se, mode = lines[1].split(",")
    assert n == "1" and float(eb) == pytest.approx(1.28) and float(ea) == 1.5 and mode == "exact"
    assert sprawl_csv(b, None).splitlines()[1].split(",")[2] == ""
