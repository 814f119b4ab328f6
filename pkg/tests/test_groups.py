import pytest

from genfree import (
    RAAG,
    FreeAbelianGroup,
    FreeGroup,
    InputError,
    RangeExceeded,
    SmallCancellationGroup,
    enumerate_ball,
    load_model,
    model_from_spec,
    parse_presentation,
    surface_relator,
)
from genfree.groups import PresentationError
from genfree.words import Generator, format_word, parse_word


def test_parse_and_format_roundtrip():
    assert parse_word("aB") == (1, -2)
    assert parse_word("a10") == (1,) * 10
    assert parse_word("b-2") == (-2, -2)
    assert parse_word("a^-2") == (-1, -1)
    assert parse_word("1") == ()
    assert format_word((1, -2, -2)) == "aBB"
    assert format_word(()) == "1"


def test_generator_codes():
    g = Generator(1, -1)
    assert g.code == -2
    assert Generator.from_code(-2) == g


def test_free_normalize(F2):
    assert F2.word("aAb") == F2.word("b")
    assert F2.multiply(F2.word("a"), F2.word("A")) == ()
    assert F2.multiply(F2.word("ab"), F2.word("Ba")) == F2.word("aa")
    assert F2.word_length(F2.word("abaB")) == 4


def test_invalid_generator_rejected(F2):
    with pytest.raises(InputError):
        F2.normalize((3,))
    with pytest.raises(InputError):
        F2.normalize((0,))


def test_abelian(Z2):
    assert Z2.word("ba") == Z2.word("ab")
    assert Z2.exponents(Z2.multiply(Z2.word("a"), Z2.word("b"))) == (1, 1)
    x = Z2.from_exponents((2, -1))
    assert Z2.exponents(Z2.invert(x)) == (-2, 1)
    assert Z2.word_length(Z2.from_exponents((3, -2))) == 5


def test_invert_identity(F2):
    assert F2.invert(F2.word("ab")) == F2.word("BA")
    assert F2.invert(()) == ()


def test_raag_path_graph(path_raag):
    G = path_raag
    # edges mean commutation: b commutes with a and c, a and c do not commute
    assert G.word("ba") == G.word("ab")
    assert G.word("ca") == (3, 1)
    assert G.word("cb") == G.word("bc")
    G2 = RAAG(3, [(0, 2)])
    assert G2.word("ca") == G2.word("ac")


def test_raag_bfs_confirms_noncommuting(path_raag):
    ball = enumerate_ball(path_raag, 2)
    # ac and ca are distinct vertices of the Cayley graph
    assert ball.contains(path_raag.word("ac")) and ball.contains(path_raag.word("ca"))
    assert path_raag.word("ac") != path_raag.word("ca")
    assert path_raag.commutes(path_raag.word("a"), path_raag.word("b"))


def test_surface_relator_is_identity(surface):
    r = surface_relator(2)
    assert surface.word(r) == ()
    assert surface.word_length(surface.word(r)) == 0


def test_surface_sphere_sizes(surface):
    ball = enumerate_ball(surface, 4)
    assert ball.sphere_sizes() == [1, 8, 56, 392, 2736]


def test_small_cancellation_range(surface):
    with pytest.raises(RangeExceeded):
        surface.normalize(parse_word("a" * 9))


def test_small_cancellation_condition_checked():
    with pytest.raises(InputError):
        SmallCancellationGroup(2, ["abAB"])


def test_model_specs():
    assert isinstance(model_from_spec("free2"), FreeGroup)
    assert isinstance(model_from_spec("abelian3"), FreeAbelianGroup)
    assert isinstance(model_from_spec("free-abelian2"), FreeAbelianGroup)
    G = model_from_spec("raag3:0-1,1-2")
    assert isinstance(G, RAAG) and G.letters_commute(1, 2) and not G.letters_commute(1, 3)
    with pytest.raises(InputError):
        model_from_spec("banana7")


def test_presentation_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# RAAG on a path\nfamily=raag\nrank=3\nedges=a-b,b-c\n")
    G = load_model(str(p))
    assert isinstance(G, RAAG) and G.letters_commute(1, 2)
    G = parse_presentation("family=small-cancellation\nrank=4\nrelators=aBAbcDCd\nmax_radius=3\n")
    assert isinstance(G, SmallCancellationGroup)


def test_presentation_error_has_line_number():
    with pytest.raises(PresentationError) as exc:
        parse_presentation("family=raag\nrank=3\nedges=a-q\n")
    assert exc.value.line == 3
    with pytest.raises(PresentationError) as exc:
        parse_presentation("family=free\nrank two\n")
    assert exc.value.line == 2
