from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from genfree import (
    AxisNeighborhood,
    BarrierSpec,
    ExperimentConfig,
    InputError,
    VertexSet,
    axis,
    contraction_constant,
    e_ball,
    enumerate_ball,
    in_T,
    in_V,
    in_W,
    in_Z,
    model_from_spec,
    project,
    projection_diameter,
)
from genfree.geometry import hausdorff_distance, normal_form_path
from genfree.words import invert as invert_word

Q = Fraction
SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
MODELS = {
    "free2": model_from_spec("free2"),
    "abelian2": model_from_spec("abelian2"),
    "raag": model_from_spec("raag3:0-1,1-2"),
    "surface": model_from_spec("surface2", max_radius=4),
}
BALL6 = {name: enumerate_ball(m, 6 if name != "surface" else 2) for name, m in MODELS.items()}


def raw_words(rank, max_size):
    letters = [s * (i + 1) for i in range(rank) for s in (1, -1)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(tuple)


@st.composite
def equal_pairs(draw, name):
    """(w, w') with w' = w after inserting cancelling pairs and relators."""
    m = MODELS[name]
    w = list(draw(raw_words(m.rank, 4 if name == "surface" else 8)))
    v = list(w)
    for _ in range(draw(st.integers(0, 3))):
        pos = draw(st.integers(0, len(v)))
        if name == "surface" and draw(st.booleans()):
            ins = list(draw(st.sampled_from(m.symmetrized)))
        else:
            x = draw(st.sampled_from([s * (i + 1) for i in range(m.rank) for s in (1, -1)]))
            ins = [x, -x]
        v[pos:pos] = ins
    return tuple(w), tuple(v)


@pytest.mark.parametrize("name", sorted(MODELS))
def test_canonical_normal_forms(name):
    @settings(max_examples=300, deadline=None)
    @given(equal_pairs(name))
    def check(pair):
        m = MODELS[name]
        assert m.normalize(pair[0]) == m.normalize(pair[1])

    check()


@pytest.mark.parametrize("name", ["free2", "abelian2", "raag"])
def test_commuting_generators_reorder(name):
    m = MODELS[name]
    if name == "free2":
        assert m.normalize((1, 2)) != m.normalize((2, 1))
    else:
        assert m.normalize((1, 2)) == m.normalize((2, 1))


@pytest.mark.parametrize("name", sorted(MODELS))
def test_metric_axioms(name):
    ball = BALL6[name]
    m = MODELS[name]
    idx = st.integers(0, len(ball) - 1)

    @settings(max_examples=300, deadline=None)
    @given(idx, idx, idx)
    def check(i, j, k):
        x, y, z = ball.word(i), ball.word(j), ball.word(k)
        dxy = m.distance(x, y)
        assert dxy == m.distance(y, x)
        assert (dxy == 0) == (x == y)
        try:
            assert dxy <= m.distance(x, z) + m.distance(z, y)
        except Exception as exc:
            if not isinstance(exc, AssertionError) and type(exc).__name__ == "RangeExceeded":
                return
            raise

    check()


F2 = MODELS["free2"]
F2_WORDS = raw_words(2, 12).map(F2.normalize)
E1, E2 = Q(1, 5), Q(4, 5)


@SETTINGS
@given(F2_WORDS, st.integers(0, 3))
def test_Z_inversion_symmetry(u, C):
    assert in_Z(u, E1, E2, C, F2) == in_Z(invert_word(u), E1, E2, C, F2)


@SETTINGS
@given(F2_WORDS, F2_WORDS, st.integers(0, 3))
def test_T_symmetry(u1, u2, C):
    assert in_T(u1, u2, E1, E2, C, F2) == in_T(u2, u1, E1, E2, C, F2)


@SETTINGS
@given(F2_WORDS, F2_WORDS, st.integers(0, 3))
def test_monotone_in_C(u1, u2, C):
    h = F2.word("a")
    assert in_W(u1, Q(1, 5), h, C, F2) <= in_W(u1, Q(1, 5), h, C + 1, F2)
    assert in_Z(u1, E1, E2, C, F2) <= in_Z(u1, E1, E2, C + 1, F2)
    assert in_T(u1, u2, E1, E2, C, F2) <= in_T(u1, u2, E1, E2, C + 1, F2)


@SETTINGS
@given(F2_WORDS, st.integers(1, 3), st.integers(0, 2))
def test_V_nonincreasing_in_nu(g, m, nu):
    low = in_V(g, Q(1, 5), Q(4, 5), BarrierSpec((1,), m, nu), F2)
    high = in_V(g, Q(1, 5), Q(4, 5), BarrierSpec((1,), m, nu + 1), F2)
    assert high <= low


# -- projections in the tree --------------------------------------------------------------

@pytest.fixture(scope="module")
def tree_setup():
    ball = enumerate_ball(F2, 8)
    kappa = contraction_constant(axis("a", ball), ball).kappa
    return ball, max(int(kappa), 1)


G_WORDS = raw_words(2, 5).map(F2.normalize)


@SETTINGS
@given(F2_WORDS, F2_WORDS, G_WORDS)
def test_far_geodesics_project_boundedly(tree_setup, x, y, g):
    _, C = tree_setup
    NC = AxisNeighborhood(F2, g, "a", C)
    ax = AxisNeighborhood(F2, g, "a", 0)
    gamma = normal_form_path(F2, x, y)
    if any(NC.contains(v) for v in gamma.vertices[1:-1]) or len(gamma) < 2:
        return
    pn = project(gamma, NC)
    pa = project(gamma, ax)
    assert hausdorff_distance(pn, pa) <= C
    assert projection_diameter(gamma, NC) <= 3 * C


@SETTINGS
@given(F2_WORDS, F2_WORDS, G_WORDS)
def test_endpoint_projection_controls_path_projection(tree_setup, x, y, g):
    _, C = tree_setup
    ax = AxisNeighborhood(F2, g, "a", 0)
    gamma = normal_form_path(F2, x, y)
    ends = projection_diameter(VertexSet(F2, [x, y]), ax)
    full = projection_diameter(gamma, ax)
    assert abs(ends - full) <= C


def test_entry_ball_separates(tree_setup):
    """Geodesics from o that avoid B(x, 4C) around the entry point x of another never meet X."""
    ball, C = tree_setup
    ball7 = enumerate_ball(F2, 7)
    words = ball7.words()
    for gw in ("b", "bb", "ba", "bAb", "abab", "BBa"):
        X = AxisNeighborhood(F2, gw, "a", C)
        inX = {w: X.contains(w) for w in words}
        # first vertex of the geodesic o -> w inside X, if any
        entry = {}
        for w in words:
            if inX[w] and (not w or entry.get(w[:-1]) is None):
                entry[w] = w
            else:
                entry[w] = entry.get(w[:-1]) if w else None
        meets = {}
        for w in words:
            meets[w] = inX[w] or (bool(w) and meets[w[:-1]])
        for x in {e for e in entry.values() if e is not None}:
            misses = {}
            for w in words:
                far = F2.distance(w, x) > 4 * C
                misses[w] = far and (not w or misses[w[:-1]])
            assert not any(misses[w] and meets[w] for w in words), (gw, x)


@SETTINGS
@given(F2_WORDS, G_WORDS, st.lists(F2_WORDS, min_size=1, max_size=5))
def test_projection_translate_equivariance(y, g, xs):
    X = VertexSet(F2, xs)
    left = project(F2.multiply(g, y), X.translate(g))
    right = project(y, X).translate(g)
    assert set(left) == set(right)


@SETTINGS
@given(F2_WORDS, G_WORDS)
def test_axis_neighborhood_translate_equivariance(y, g):
    X0 = AxisNeighborhood(F2, (), "a", 1)
    Xg = AxisNeighborhood(F2, g, "a", 1)
    left = set(Xg.project(F2.multiply(g, y)))
    right = {F2.multiply(g, p) for p in X0.project(y)}
    assert left == right


# -- sampling ------------------------------------------------------------------------------

def test_sampled_mean_of_estimates_is_unbiased():
    ball = enumerate_ball(F2, 6)
    exact = e_ball(6, ball).value
    est = [e_ball(6, ball, mode="sampled", samples=200, seed=s).value for s in range(100)]
    se = np.std(est, ddof=1) / np.sqrt(len(est))
    assert abs(np.mean(est) - exact) <= 3 * se


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=0, max_value=2))
def test_config_rejects_rho_outside_regime(rho):
    cfg = ExperimentConfig(rho=rho)
    if Q(8, 9) < rho < 1:
        cfg.validate()
    else:
        with pytest.raises(InputError, match="rho"):
            cfg.validate()
