import os
import re

import pytest

from annc import AnnError, parse_unit
from annc.codegen import (
    SERVICES_PATH,
    generate,
    render_annotation_declaration,
    render_processors,
    render_services,
    render_unit,
    write_files,
)

from conftest import ANN, FIXTURES, GOLDEN


def one(text):
    return parse_unit(text).declarations[0]


def files_by_name(unit):
    return {f.relative_path: f.content for f in render_unit(unit)}


@pytest.mark.parametrize("corpus", ["person", "jpa"])
def test_golden_output(corpus):
    unit = parse_unit((ANN / f"{corpus}.ann").read_text(), f"{corpus}.ann")
    root = GOLDEN / corpus
    rendered = files_by_name(unit)
    if os.environ.get("ANNC_UPDATE_GOLDEN"):
        for rel, content in rendered.items():
            path = root / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content)
    on_disk = {p.relative_to(root).as_posix(): p.read_text() for p in root.rglob("*.java")}
    assert rendered == on_disk


def test_person_declaration_matches_reference(person_unit):
    (decl,) = person_unit.declarations
    generated = render_annotation_declaration(decl, person_unit.package_name)
    assert generated.relative_path == "examples/Person.java"
    assert generated.content == (FIXTURES / "reference" / "Person.java").read_text()


def test_runtime_retention():
    content = render_annotation_declaration(one("runtime annotation E { require class; }")).content
    assert "import java.lang.annotation.Retention;" in content
    assert "@Retention(RetentionPolicy.RUNTIME)" in content
    assert "Retention" not in render_annotation_declaration(one("annotation E { require class; }")).content


def test_target_list_and_omission():
    content = render_annotation_declaration(one("annotation A { require field or method; }")).content
    assert "@Target({ElementType.FIELD, ElementType.METHOD})" in content
    # no constraints, every kind allowed: no @Target at all
    assert "@Target" not in render_annotation_declaration(one("annotation A {}")).content


def test_empty_declaration():
    content = render_annotation_declaration(one("annotation A {}")).content
    assert content.strip() == "public @interface A { }"


def test_attribute_types_and_defaults():
    decl = one('annotation A { String s = "a\\"b"; int n = -3; float f = 21; boolean b = true; Class c; }')
    content = render_annotation_declaration(decl).content
    assert 'String s() default "a\\"b";' in content
    assert "int n() default -3;" in content
    assert "float f() default 21f;" in content
    assert "boolean b() default true;" in content
    assert "Class<?> c();" in content


@pytest.mark.parametrize("text, expected", [
    ("annotation A {}", []),
    ("annotation A { require class; }", ["ARequireProcessor"]),
    ("annotation A { forbid final class; }", ["AForbidProcessor"]),
    ("annotation A { require class; at class: forbid static method; }", ["ARequireProcessor", "AForbidProcessor"]),
])
def test_processor_count(text, expected):
    names = [f.relative_path[:-len(".java")] for f in render_processors(one(text))]
    assert names == expected


def test_processor_structure(jpa_unit):
    for decl in jpa_unit.declarations:
        for f in render_processors(decl, jpa_unit.package_name):
            assert f.content.count("@SupportedAnnotationTypes(") == 1
            assert f'@SupportedAnnotationTypes("{decl.name}")' in f.content
            assert f"getElementsAnnotatedWith({decl.name}.class)" in f.content
            polarity = "require" if "Require" in f.relative_path else "forbid"
            owned = [c for c in decl.constraints if c.polarity.value == polarity]
            assert len(re.findall(r"// check: ", f.content)) == len(owned)


def test_manifest_size(jpa_unit, person_unit):
    # declarations + one processor per polarity present
    for unit in (jpa_unit, person_unit):
        expected = sum(1 + bool(d.requires) + bool(d.forbids) for d in unit.declarations)
        assert len(render_unit(unit)) == expected
    assert len(render_unit(jpa_unit)) == 12


def test_source_version_is_configurable():
    (f,) = render_processors(one("annotation A { require class; }"), source_version="RELEASE_11")
    assert "@SupportedSourceVersion(SourceVersion.RELEASE_11)" in f.content


def test_services_file(jpa_unit):
    services = render_services([jpa_unit])
    assert services.relative_path == SERVICES_PATH
    lines = services.content.splitlines()
    assert lines == ["EntityRequireProcessor", "EntityForbidProcessor", "EmbeddableRequireProcessor",
                     "EmbeddableForbidProcessor", "EmbeddedIdRequireProcessor", "IdRequireProcessor",
                     "IdClassRequireProcessor"]
    assert render_services([parse_unit("annotation A {}")]) is None


def test_write_and_collision(tmp_path, person_unit):
    written = [tmp_path / f.relative_path for f in generate(person_unit, tmp_path)]
    assert len(written) == 3 and all(os.path.isfile(p) for p in written)
    before = {p: open(p).read() for p in written}
    (tmp_path / "examples" / "Person.java").write_text("hand edited\n")
    with pytest.raises(AnnError) as info:
        generate(person_unit, tmp_path)
    assert {d.code for d in info.value.diagnostics} == {"ANN0401"}
    # nothing was rewritten, not even the non-colliding files
    assert (tmp_path / "examples" / "Person.java").read_text() == "hand edited\n"
    generate(person_unit, tmp_path, force=True)
    assert {p: open(p).read() for p in written} == before


def test_duplicate_paths_rejected(tmp_path):
    a = render_unit(parse_unit("annotation A {}"))
    with pytest.raises(AnnError) as info:
        write_files(a + a, tmp_path)
    assert info.value.diagnostics[0].code == "ANN0401"
    assert list(tmp_path.iterdir()) == []


def test_io_failure_is_reported(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(AnnError) as info:
        write_files(render_unit(parse_unit("package p; annotation A {}")), blocker)
    assert info.value.diagnostics[0].code == "ANN0402"


def test_no_temp_files_left(tmp_path, jpa_unit):
    generate(jpa_unit, tmp_path)
    assert not [p for p in tmp_path.rglob("*") if p.name.startswith(".annc-")]


def test_require_all_checks_every_disjunct():
    (f,) = render_processors(one("annotation A { at class: require all public method or public field; }"))
    assert f.content.count("for (Element e : related(elt, ") == 2
    both = "if (!(matches(e, ElementKind.METHOD, EnumSet.of(Modifier.PUBLIC), null) || matches(e, ElementKind.FIELD, EnumSet.of(Modifier.PUBLIC), null)))"
    assert f.content.count(both) == 2
