import pytest
from hypothesis import given, strategies as st

from psl2gen.errors import DomainError
from psl2gen.fpgroups.presentation import (
    LIBRARY,
    Presentation,
    library,
    load_presentation,
    parse_presentation,
    serialize_presentation,
)
from psl2gen.fpgroups.words import PresentationSyntaxError, Word, format_word, parse_word

letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(lambda ls: Word(tuple(ls)))


@given(words)
def test_format_parse_roundtrip(w):
    names = ["a", "b", "c"]
    assert parse_word(format_word(w, names), names) == w


@given(st.lists(words, max_size=5))
def test_presentation_roundtrip(ws):
    pres = Presentation(3, tuple(ws), ("a", "b", "c"))
    back = parse_presentation(serialize_presentation(pres))
    assert back == pres and back.names == pres.names


@given(words)
def test_reduction(w):
    r = w.reduced()
    assert all(r.letters[i][0] != r.letters[i + 1][0] or r.letters[i][1] == r.letters[i + 1][1]
               for i in range(len(r) - 1))
    assert (w * w.inverse()).reduced() == Word()
    c = w.cyclically_reduced()
    assert len(c) <= len(r)


def test_parse_forms():
    names = ["a", "b"]
    assert parse_word("a^2", names) == Word(((0, 1), (0, 1)))
    assert parse_word("(a b)^2 b'", names) == Word.of(1, 2, 1, 2, -2)
    assert parse_word("", names) == Word()


def test_syntax_error_columns():
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation("gens: a b\nrel: (a b^2\n")
    assert (e.value.line, e.value.column) == (2, 6)
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation("gens: a b\nrel: a c\n")
    assert (e.value.line, e.value.column) == (2, 8)
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("rel: a\n")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens: a\nrel: a^0\n")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens: a\nrel: a )\n")


def test_relator_generator_bound():
    with pytest.raises(DomainError):
        Presentation(1, (Word.of(2),))


def test_library_and_file(tmp_path):
    for name in LIBRARY:
        assert library(name).generator_count == 2
    f = tmp_path / "a4.txt"
    f.write_text("# A4\ngens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^3\n")
    assert load_presentation(f) == library("A4")
