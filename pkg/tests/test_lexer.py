import pytest
from hypothesis import given, strategies as st

from annc.core import AnnError
from annc.lexer import TokenKind, scan, tokenize

from helpers import offset_of


def kinds_and_text(source):
    return [(t.kind, t.text) for t in tokenize(source)[:-1]]


def test_simple_require():
    assert kinds_and_text("require public class;") == [
        (TokenKind.KEYWORD, "require"),
        (TokenKind.KEYWORD, "public"),
        (TokenKind.KEYWORD, "class"),
        (TokenKind.PUNCTUATION, ";"),
    ]


def test_float_literal():
    toks = kinds_and_text("float weight = 52.3;")
    assert (TokenKind.FLOAT_LITERAL, "52.3") in toks
    assert toks[0] == (TokenKind.KEYWORD, "float")
    assert toks[1] == (TokenKind.IDENTIFIER, "weight")


def test_annotation_refs():
    toks = kinds_and_text("at class: forbid @Id method and @EmbeddedId method;")
    refs = [text for kind, text in toks if kind is TokenKind.ANNOTATION_REF]
    assert refs == ["@Id", "@EmbeddedId"]


def test_comments_whitespace_and_crlf():
    toks = tokenize("annotation A { // note\r\n  int x = 1;\r\n}\r\n")
    assert [t.text for t in toks[:-1]] == ["annotation", "A", "{", "int", "x", "=", "1", ";", "}"]
    assert toks[3].span.line == 2 and toks[3].span.column == 3
    assert toks[-1].kind is TokenKind.EOF


def test_literals():
    toks = tokenize('"a\\"b\\\\c" true false 7')
    assert toks[0].kind is TokenKind.STRING_LITERAL
    assert toks[0].value == 'a"b\\c'
    assert [t.kind for t in toks[1:4]] == [TokenKind.BOOLEAN_LITERAL, TokenKind.BOOLEAN_LITERAL, TokenKind.INT_LITERAL]


@pytest.mark.parametrize(
    "source, code, line, column",
    [
        ("annotation A # {}", "ANN0101", 1, 14),
        ("int x = 52.3f;", "ANN0101", 1, 9),
        ('String s = "open', "ANN0102", 1, 12),
        ('String s = "a\nb";', "ANN0102", 1, 12),
        ('String s = "a\\n";', "ANN0103", 1, 14),
        ("require @ class;", "ANN0101", 1, 9),
    ],
)
def test_lexical_errors(source, code, line, column):
    with pytest.raises(AnnError) as info:
        tokenize(source, "x.ann")
    d = info.value.diagnostics[0]
    assert (d.code, d.span.line, d.span.column, d.span.file) == (code, line, column, "x.ann")


def test_lexer_reports_every_bad_character():
    _, diagnostics = scan("# annotation ? A")
    assert [d.span.column for d in diagnostics] == [1, 14]


@given(st.text(alphabet=st.sampled_from(list('ab @"\\;:{}=.-1234567890\n\r\t/#é_$')), max_size=60))
def test_tokens_and_diagnostics_stay_in_bounds(text):
    tokens, diagnostics = scan(text)
    for tok in tokens:
        assert text[tok.offset:tok.offset + len(tok.text)] == tok.text
        assert offset_of(text, tok.span) == tok.offset
    for d in diagnostics:
        start = offset_of(text, d.span)
        assert 0 <= start and start + d.span.length <= len(text)
