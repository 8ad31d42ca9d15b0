import pytest
from hypothesis import given, settings, strategies as st

from annc import parse_unit
from annc.core import AnnError, AttrType, LiteralKind, Modifier, Polarity, TargetKind
from annc.parser import parse_with_diagnostics

from conftest import ANN
from helpers import offset_of, span_text


def diagnostics(source):
    with pytest.raises(AnnError) as info:
        parse_unit(source, "t.ann")
    return info.value.diagnostics


def test_person_structure(person_unit):
    assert person_unit.package_name == "examples"
    (person,) = person_unit.declarations
    assert person.name == "Person" and not person.runtime
    assert [(a.name, a.attr_type, a.default_value.value) for a in person.attributes] == [
        ("name", AttrType.STRING, "Mary"),
        ("age", AttrType.INT, 21),
        ("weight", AttrType.FLOAT, 52.3),
    ]
    assert person.attributes[2].default_value.text == "52.3"
    req, forb = person.constraints
    assert req.polarity is Polarity.REQUIRE and req.scope is None
    assert [(s.modifiers, s.kind) for s in req.statements] == [({Modifier.PUBLIC}, TargetKind.CLASS)]
    assert forb.polarity is Polarity.FORBID and forb.scope is TargetKind.CLASS
    assert [(s.modifiers, s.kind) for s in forb.statements] == [({Modifier.FINAL}, TargetKind.FIELD)]


def test_empty_body():
    unit = parse_unit("annotation A {}")
    (decl,) = unit.declarations
    assert unit.package_name == ""
    assert decl.attributes == () and decl.constraints == ()


def test_jpa_structure(jpa_unit):
    assert [d.name for d in jpa_unit.declarations] == ["Entity", "Embeddable", "EmbeddedId", "Id", "IdClass"]
    assert all(d.runtime for d in jpa_unit.declarations)
    entity = jpa_unit.declarations[0]
    assert [(a.name, a.default_value.value) for a in entity.attributes] == [("name", "")]
    assert len(entity.constraints) == 7
    requires, forbids = entity.requires, entity.forbids
    assert [c.scope for c in requires] == [None, TargetKind.CLASS, TargetKind.CLASS]
    assert [c.scope for c in forbids] == [None, TargetKind.CLASS, TargetKind.CLASS, TargetKind.CLASS]
    pk = requires[2]
    assert [(s.annotation_ref, s.kind) for s in pk.statements] == [
        ("Id", TargetKind.METHOD),
        ("Id", TargetKind.FIELD),
        ("EmbeddedId", TargetKind.METHOD),
        ("EmbeddedId", TargetKind.FIELD),
    ]
    id_class = jpa_unit.declaration("IdClass")
    assert id_class.attributes[0].attr_type is AttrType.CLASS
    assert id_class.attributes[0].default_value is None


def test_require_all_and_combined_statement():
    unit = parse_unit("annotation A { at class: require all @B public static method or field; }")
    c = unit.declarations[0].constraints[0]
    assert c.all_quantifier
    s = c.statements[0]
    assert (s.annotation_ref, s.modifiers, s.kind) == ("B", {Modifier.PUBLIC, Modifier.STATIC}, TargetKind.METHOD)


def test_attributes_after_constraints_keep_order():
    unit = parse_unit("annotation A { int a; require class; String b = \"x\"; forbid final class; boolean c = true; }")
    decl = unit.declarations[0]
    assert [a.name for a in decl.attributes] == ["a", "b", "c"]
    assert [c.polarity for c in decl.constraints] == [Polarity.REQUIRE, Polarity.FORBID]


def test_negative_and_package_with_keyword_segment():
    unit = parse_unit("package com.example.annotation;\nannotation A { int lo = -3; float f = -0.5; }")
    assert unit.package_name == "com.example.annotation"
    assert [a.default_value.text for a in unit.declarations[0].attributes] == ["-3", "-0.5"]
    assert unit.declarations[0].attributes[0].default_value.kind is LiteralKind.INT


@pytest.mark.parametrize(
    "source, code",
    [
        ("annotation A { forbid all class; }", "ANN0111"),
        ("annotation A { require all class; }", "ANN0111"),
        ("annotation A { require ; }", "ANN0112"),
        ("annotation A { at field: forbid ; }", "ANN0112"),
        ("annotation A { require class or ; }", "ANN0112"),
        ("annotation A { forbid class or method; }", "ANN0110"),
        ("annotation A { require class and method; }", "ANN0110"),
        ("annotation A { require public; }", "ANN0110"),
        ("annotation { }", "ANN0110"),
        ("annotation A { long x; }", "ANN0110"),
        ("annotation A { require public private class; }", "ANN0113"),
        ("annotation A { require final final class; }", "ANN0113"),
        ("annotation A { require class; ", "ANN0110"),
        ("class A {}", "ANN0110"),
    ],
)
def test_syntax_errors(source, code):
    assert [d.code for d in diagnostics(source)] == [code]


def test_expected_set_in_message():
    (d,) = diagnostics("annotation A {\n  forbid class or method;\n}")
    assert "'and'" in d.message and "';'" in d.message and "'or'" in d.message
    assert (d.span.line, d.span.column) == (2, 16)


def test_recovery_reports_every_broken_member():
    source = "annotation A {\n  require ;\n  forbid all class;\n  int = 3;\n  require class;\n}\nannotation B { forbid class or field; }\n"
    unit, found = parse_with_diagnostics(source, "t.ann")
    assert [(d.code, d.span.line) for d in found] == [
        ("ANN0112", 2), ("ANN0111", 3), ("ANN0110", 4), ("ANN0110", 7)
    ]
    assert [d.name for d in unit.declarations] == ["A", "B"]
    assert len(unit.declarations[0].constraints) == 2


def test_unclosed_body_before_next_annotation():
    unit, found = parse_with_diagnostics("annotation A { require class;\nannotation B { }")
    assert [d.code for d in found] == ["ANN0110"]
    assert [d.name for d in unit.declarations] == ["A", "B"]


def test_spans_cover_their_source(person_unit):
    text = (ANN / "person.ann").read_text()
    decl = person_unit.declarations[0]
    assert span_text(text, decl.span).startswith("annotation Person {")
    assert span_text(text, decl.span).endswith("}")
    assert span_text(text, decl.attributes[2].span) == "float weight = 52.3;"
    assert span_text(text, decl.constraints[0].span) == "require public class;"
    assert span_text(text, decl.constraints[1].statements[0].span) == "final field"


def test_deterministic():
    text = (ANN / "jpa.ann").read_text()
    assert parse_with_diagnostics(text) == parse_with_diagnostics(text)


def test_polarity_connectives(jpa_unit):
    src = (ANN / "jpa.ann").read_text()
    for decl in jpa_unit.declarations:
        for c in decl.constraints:
            text = span_text(src, c.span)
            if c.polarity is Polarity.REQUIRE:
                assert " and " not in text
            else:
                assert " or " not in text


_pieces = st.sampled_from(
    ["annotation", "runtime", "A", "{", "}", ";", "require", "forbid", "at", "class", "field", ":",
     "all", "or", "and", "@B", "public", "final", "int", "x", "=", "3", "\"s\"", "-", "package", ".", "\n", "#"]
)


@settings(max_examples=300)
@given(st.lists(_pieces, max_size=30))
def test_diagnostics_point_inside_input(pieces):
    text = " ".join(pieces)
    _, found = parse_with_diagnostics(text)
    for d in found:
        start = offset_of(text, d.span)
        assert start + d.span.length <= len(text)
