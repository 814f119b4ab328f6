from fractions import Fraction

import pytest

from genfree import (
    AxisNeighborhood,
    GeodesicPath,
    InputError,
    VertexSet,
    axis,
    contraction_constant,
    enumerate_ball,
    entry_exit,
    geodesics,
    neighborhood,
    project,
    projection_diameter,
    qi_check,
    qi_constants,
    quasi_convexity_profile,
)
from genfree.geometry import hausdorff_distance, normal_form_path


def words(model, *ws):
    return [model.word(w) for w in ws]


def test_projection_examples(F2, Z2, f2_ball8):
    X = axis("a", f2_ball8)
    assert list(project(F2.word("aa"), X).words) == [F2.word("aa")]
    assert list(project(F2.word("aabbb"), X).words) == [F2.word("aa")]
    zx = VertexSet(Z2, [Z2.from_exponents((k, 0)) for k in range(-8, 9)])
    assert list(project(Z2.from_exponents((2, 5)), zx).words) == [Z2.from_exponents((2, 0))]
    with pytest.raises(InputError):
        project(F2.word("a"), VertexSet(F2, []))


def test_projection_ties_are_kept(F2, f2_ball8):
    X = VertexSet(F2, words(F2, "a", "A"))
    assert len(project((), X)) == 2


def test_projection_diameter_examples(F2, Z2, f2_ball8):
    X = axis("a", f2_ball8)
    assert projection_diameter(VertexSet(F2, words(F2, "bab")), X) == 0
    ball_b2 = VertexSet(F2, [F2.multiply(F2.word("bb"), w)
                             for w in enumerate_ball(F2, 1).words()])
    assert projection_diameter(ball_b2, X) == 0
    n = 3
    zx = VertexSet(Z2, [Z2.from_exponents((k, 0)) for k in range(-10, 11)])
    A = VertexSet(Z2, [Z2.from_exponents((k, n)) for k in range(-n, n + 1)])
    assert projection_diameter(A, zx) == 2 * n


def test_axis_examples(F2, Z2):
    b5 = enumerate_ball(F2, 5)
    assert set(axis("a", b5).words) == {F2.power((1,), k) for k in range(-5, 6)}
    b6 = enumerate_ball(F2, 6)
    assert len(axis("ab", b6)) == 7
    zb = enumerate_ball(Z2, 6)
    assert all(Z2.exponents(w)[0] == Z2.exponents(w)[1] for w in axis("ab", zb))
    with pytest.raises(InputError):
        axis((), b5)


def test_entry_exit_examples(F2, f2_ball8):
    X = axis("a", f2_ball8)
    g = normal_form_path(F2, F2.word("aaabbb"))
    assert entry_exit(g, X, 0) == ((), F2.word("aaa"))
    g2 = normal_form_path(F2, F2.word("aa"))
    assert entry_exit(g2, X, 0) == (g2.start, g2.end)
    far = normal_form_path(F2, F2.word("bb"), F2.word("bbbb"))
    assert entry_exit(far, X, 0) is None


def test_hausdorff(F2):
    b5 = enumerate_ball(F2, 5)
    A = axis("a", b5)
    assert hausdorff_distance(A, A) == 0
    N = neighborhood(A, 1, b5)
    assert hausdorff_distance(A, N) <= 1
    B = VertexSet(F2, [w for w in A.translate(F2.word("b")).words if len(w) <= 5])
    assert hausdorff_distance(A, B) == 6


def test_contraction_examples(F2, Z2, f2_ball8):
    b10 = enumerate_ball(F2, 10)
    res = contraction_constant(axis("a", b10), b10)
    assert res.kappa == 1
    z10 = enumerate_ball(Z2, 10)
    res = contraction_constant(VertexSet(Z2, [Z2.from_exponents((k, 0)) for k in range(-10, 11)]), z10)
    assert res.kappa is None and res.describe() == "none within radius"
    b3 = enumerate_ball(F2, 3)
    whole = contraction_constant(VertexSet(F2, b3.words()), b3)
    assert whole.kappa == 1
    assert res.csv().startswith("r,kappa")


def test_quasi_convexity(F2, f2_ball8):
    X = axis("a", f2_ball8)
    assert quasi_convexity_profile(X, 0, f2_ball8)[0] == 0
    assert quasi_convexity_profile(X, 1, f2_ball8)[0] == 1
    s, wit = quasi_convexity_profile(VertexSet(F2, [()]), 3, f2_ball8)
    assert s == 3 and isinstance(wit, GeodesicPath)


def test_geodesic_path_validation(F2):
    with pytest.raises(InputError):
        GeodesicPath(F2, words(F2, "1", "ab"))
    with pytest.raises(InputError):
        GeodesicPath(F2, words(F2, "1", "a", "1"))


def test_geodesics_in_abelian(Z2):
    paths, exh = geodesics(Z2, (), Z2.from_exponents((2, 2)))
    assert exh and len(paths) == 6


def test_qi_constants_examples(F2, Z2):
    g = normal_form_path(F2, F2.word("abab" * 3))
    q = qi_constants(g)
    assert q.lam == 1 and q.c == 0
    stair = [()]
    for _ in range(5):
        for letter in ((1,), (2,)):
            stair.append(Z2.multiply(stair[-1], letter))
    q = qi_constants(stair, model=Z2)
    assert q.lam == 1 and q.c == 0
    back = words(F2, "1", "a", "1")
    assert qi_constants(back, model=F2).lam == float("inf")
    hook = [Z2.from_exponents(v) for v in ((0, 0), (1, 0), (1, 1), (0, 1), (0, 2))]
    assert qi_constants(hook, model=Z2).lam == 3
    assert qi_check(hook, 3, 0, model=Z2) is None
    assert qi_check(hook, Fraction(5, 2), 0, model=Z2) == (0, 3)
    with pytest.raises(InputError):
        qi_constants(words(F2, "1", "ab"), model=F2)


def test_axis_neighborhood(F2):
    X = AxisNeighborhood(F2, F2.word("b"), "a", 1)
    assert X.contains(F2.word("baa")) and X.contains(F2.word("baab"))
    assert not X.contains(F2.word("baabb"))
    assert X.distance(F2.word("baabbb")) == 2
    assert X.project(F2.word("baabbb")) == [F2.word("baab")]
    Y = AxisNeighborhood(F2, F2.word("baaa"), "A", 1)
    assert X.same_set(Y)
    assert not X.same_set(AxisNeighborhood(F2, F2.word("bb"), "a", 1))
