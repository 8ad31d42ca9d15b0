"""Hypothesis strategies for Ann trees."""
from hypothesis import strategies as st

from annc.core import (
    ACCESS_MODIFIERS,
    AnnotationDecl,
    AnnotationUnit,
    AttrType,
    AttributeDecl,
    Constraint,
    Literal,
    LiteralKind,
    Modifier,
    Polarity,
    Statement,
    TargetKind,
)
from annc.lexer import KEYWORDS

_first = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_"
identifiers = st.builds(
    lambda a, b: a + b, st.sampled_from(_first), st.text(alphabet=_first + "0123456789$", max_size=6)
).filter(lambda s: s not in KEYWORDS and s not in ("true", "false"))

modifier_sets = st.sets(st.sampled_from(list(Modifier))).filter(lambda ms: len(ms & ACCESS_MODIFIERS) <= 1)


@st.composite
def statements(draw, refs=None):
    ref = draw(st.none() | (st.sampled_from(refs) if refs else identifiers))
    return Statement(draw(st.sampled_from(list(TargetKind))), frozenset(draw(modifier_sets)), ref)


@st.composite
def constraints(draw, refs=None):
    polarity = draw(st.sampled_from(list(Polarity)))
    scope = draw(st.none() | st.sampled_from(list(TargetKind)))
    every = scope is not None and polarity is Polarity.REQUIRE and draw(st.booleans())
    stmts = draw(st.lists(statements(refs), min_size=1, max_size=4))
    return Constraint(polarity, tuple(stmts), scope, every)


literals = st.one_of(
    st.builds(lambda s: Literal(LiteralKind.STRING, s), st.text(alphabet=st.characters(blacklist_characters="\n\r", blacklist_categories=("Cs",)), max_size=8)),
    st.builds(lambda n: Literal(LiteralKind.INT, str(n)), st.integers(-10**6, 10**6)),
    st.builds(lambda a, b: Literal(LiteralKind.FLOAT, f"{a}.{b}"), st.integers(-999, 999), st.integers(0, 999)),
    st.builds(lambda b: Literal(LiteralKind.BOOLEAN, "true" if b else "false"), st.booleans()),
)

attributes = st.builds(AttributeDecl, identifiers, st.sampled_from(list(AttrType)), st.none() | literals)


@st.composite
def decls(draw, refs=None):
    return AnnotationDecl(
        draw(identifiers),
        draw(st.booleans()),
        tuple(draw(st.lists(attributes, max_size=3))),
        tuple(draw(st.lists(constraints(refs), max_size=5))),
    )


packages = st.just("") | st.lists(identifiers, min_size=1, max_size=3).map(".".join)

units = st.builds(AnnotationUnit, packages, st.lists(decls(), max_size=3).map(tuple))
