"""Java source generation: annotation declarations and annotation processors.

Each declaration yields ``<Name>.java`` plus ``<Name>RequireProcessor.java``
when it has requires and ``<Name>ForbidProcessor.java`` when it has forbids.
Processor check blocks follow the rules in :mod:`annc.checker`; each block is
preceded by a ``// check: <constraint>`` comment.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .core import (
    AnnError,
    AnnotationDecl,
    AnnotationUnit,
    AttrType,
    AttributeDecl,
    Constraint,
    Literal,
    LiteralKind,
    Polarity,
    SourceSpan,
    Statement,
    TargetKind,
    derive_target_kinds,
    error,
    java_element_types,
    sorted_modifiers,
    ALL_KINDS,
)
from .printer import escape_string, format_constraint

DEFAULT_SOURCE_VERSION = "RELEASE_8"
SERVICES_PATH = "META-INF/services/javax.annotation.processing.Processor"
INDENT = "    "

_ELEMENT_KIND = {
    TargetKind.CLASS: "ElementKind.CLASS",
    TargetKind.INTERFACE: "ElementKind.INTERFACE",
    TargetKind.ENUM: "ElementKind.ENUM",
    TargetKind.FIELD: "ElementKind.FIELD",
    TargetKind.METHOD: "ElementKind.METHOD",
    TargetKind.CONSTRUCTOR: "ElementKind.CONSTRUCTOR",
}


@dataclass(frozen=True)
class GeneratedFile:
    relative_path: str
    content: str


def _package_dir(package_name: str) -> str:
    return package_name.replace(".", "/") + "/" if package_name else ""


def _package_line(package_name: str) -> List[str]:
    return [f"package {package_name};", ""] if package_name else []


def _java_literal(attr: AttributeDecl) -> str:
    lit: Literal = attr.default_value
    if lit.kind is LiteralKind.STRING:
        return f'"{escape_string(lit.text)}"'
    if attr.attr_type is AttrType.FLOAT:
        return lit.text + "f"
    return lit.text


def _attribute_line(attr: AttributeDecl) -> str:
    jtype = "Class<?>" if attr.attr_type is AttrType.CLASS else attr.attr_type.value
    line = f"{jtype} {attr.name}()"
    if attr.default_value is not None:
        line += f" default {_java_literal(attr)}"
    return line + ";"


def render_annotation_declaration(decl: AnnotationDecl, package_name: str = "") -> GeneratedFile:
    kinds = derive_target_kinds(decl)
    element_types = [] if kinds == ALL_KINDS else java_element_types(kinds)

    imports = []
    if element_types:
        imports += ["java.lang.annotation.Target", "java.lang.annotation.ElementType"]
    if decl.runtime:
        imports += ["java.lang.annotation.Retention", "java.lang.annotation.RetentionPolicy"]

    lines = _package_line(package_name)
    if imports:
        lines += [f"import {i};" for i in imports] + [""]
    if len(element_types) == 1:
        lines.append(f"@Target(ElementType.{element_types[0]})")
    elif element_types:
        lines.append("@Target({" + ", ".join(f"ElementType.{t}" for t in element_types) + "})")
    if decl.runtime:
        lines.append("@Retention(RetentionPolicy.RUNTIME)")
    if decl.attributes:
        lines.append(f"public @interface {decl.name} {{")
        lines += [INDENT + _attribute_line(a) for a in decl.attributes]
        lines.append("}")
    else:
        lines.append(f"public @interface {decl.name} {{ }}")
    return GeneratedFile(f"{_package_dir(package_name)}{decl.name}.java", "\n".join(lines) + "\n")


# -- processors --------------------------------------------------------------

_PROCESSOR_IMPORTS = [
    "java.util.ArrayList",
    "java.util.EnumSet",
    "java.util.List",
    "java.util.Set",
    "javax.annotation.processing.AbstractProcessor",
    "javax.annotation.processing.RoundEnvironment",
    "javax.annotation.processing.SupportedAnnotationTypes",
    "javax.annotation.processing.SupportedSourceVersion",
    "javax.lang.model.SourceVersion",
    "javax.lang.model.element.AnnotationMirror",
    "javax.lang.model.element.Element",
    "javax.lang.model.element.ElementKind",
    "javax.lang.model.element.Modifier",
    "javax.lang.model.element.TypeElement",
    "javax.tools.Diagnostic.Kind",
]

_HELPERS = """\
    private static boolean isType(ElementKind kind)
    {
        return kind == ElementKind.CLASS || kind == ElementKind.INTERFACE
            || kind == ElementKind.ENUM || kind == ElementKind.ANNOTATION_TYPE;
    }

    private static boolean hasAnnotation(Element e, String name)
    {
        for (AnnotationMirror m : e.getAnnotationMirrors())
        {
            if (m.getAnnotationType().asElement().getSimpleName().contentEquals(name))
            {
                return true;
            }
        }
        return false;
    }

    // kind equal, modifiers included, annotation (simple name) present when given
    private static boolean matches(Element e, ElementKind kind, Set<Modifier> modifiers, String annotation)
    {
        if (e.getKind() != kind || !e.getModifiers().containsAll(modifiers))
        {
            return false;
        }
        return annotation == null || hasAnnotation(e, annotation);
    }

    // elements a scoped statement of the given kind is evaluated against
    private static List<Element> related(Element target, ElementKind kind)
    {
        List<Element> result = new ArrayList<Element>();
        if (isType(kind))
        {
            result.add(isType(target.getKind()) ? target : target.getEnclosingElement());
            return result;
        }
        Element owner = isType(target.getKind()) ? target : target.getEnclosingElement();
        for (Element member : owner.getEnclosedElements())
        {
            if (member.getKind() == kind)
            {
                result.add(member);
            }
        }
        return result;
    }

    private static boolean anyMatches(Element target, ElementKind kind, Set<Modifier> modifiers, String annotation)
    {
        for (Element e : related(target, kind))
        {
            if (matches(e, kind, modifiers, annotation))
            {
                return true;
            }
        }
        return false;
    }

    private void report(String message, Element elt)
    {
        this.processingEnv.getMessager().printMessage(Kind.ERROR, message, elt);
    }
"""


def _modifier_set(stmt: Statement) -> str:
    mods = sorted_modifiers(stmt.modifiers)
    if not mods:
        return "EnumSet.noneOf(Modifier.class)"
    return "EnumSet.of(" + ", ".join(f"Modifier.{m.value.upper()}" for m in mods) + ")"


def _args(stmt: Statement) -> str:
    ref = f'"{stmt.annotation_ref}"' if stmt.annotation_ref else "null"
    return f"{_ELEMENT_KIND[stmt.kind]}, {_modifier_set(stmt)}, {ref}"


def _java_string(text: str) -> str:
    return '"' + escape_string(text) + '"'


def _check_block(decl: AnnotationDecl, c: Constraint, indent: str) -> List[str]:
    text = format_constraint(c)
    message = _java_string(f"@{decl.name} violates: {text}")
    out = [f"{indent}// check: {text}"]
    body = indent
    if c.scope is not None:
        out += [f"{indent}if (elt.getKind() == {_ELEMENT_KIND[c.scope]})", f"{indent}{{"]
        body = indent + INDENT

    if c.scope is None:
        tests = [f"matches(elt, {_args(s)})" for s in c.statements]
        cond = " || ".join(tests) if c.is_require else " && ".join(tests)
        cond = f"!({cond})" if c.is_require else cond
        out += _if_report(body, cond, message)
    elif c.is_require and not c.all_quantifier:
        cond = " || ".join(f"anyMatches(elt, {_args(s)})" for s in c.statements)
        out += _if_report(body, f"!({cond})", message)
    elif c.is_require:
        out.append(f"{body}boolean satisfied = true;")
        # matches() checks the kind, so each element only meets disjuncts of its own kind
        cond = " || ".join(f"matches(e, {_args(s)})" for s in c.statements)
        for kind in dict.fromkeys(s.kind for s in c.statements):
            out += [
                f"{body}for (Element e : related(elt, {_ELEMENT_KIND[kind]}))",
                f"{body}{{",
                f"{body}{INDENT}if (!({cond}))",
                f"{body}{INDENT}{{",
                f"{body}{INDENT}{INDENT}satisfied = false;",
                f"{body}{INDENT}}}",
                f"{body}}}",
            ]
        out += _if_report(body, "!satisfied", message)
    else:
        cond = " && ".join(f"anyMatches(elt, {_args(s)})" for s in c.statements)
        out += _if_report(body, cond, message)

    if c.scope is not None:
        out.append(f"{indent}}}")
    return out


def _if_report(indent: str, cond: str, message: str) -> List[str]:
    return [
        f"{indent}if ({cond})",
        f"{indent}{{",
        f"{indent}{INDENT}report({message}, elt);",
        f"{indent}}}",
    ]


def _render_processor(decl: AnnotationDecl, polarity: Polarity, package_name: str, source_version: str) -> GeneratedFile:
    class_name = f"{decl.name}{polarity.value.capitalize()}Processor"
    constraints = [c for c in decl.constraints if c.polarity is polarity]
    lines = _package_line(package_name)
    lines += [f"import {i};" for i in _PROCESSOR_IMPORTS] + [""]
    lines += [
        f'@SupportedAnnotationTypes("{decl.name}")',
        f"@SupportedSourceVersion(SourceVersion.{source_version})",
        f"public class {class_name} extends AbstractProcessor",
        "{",
        f"{INDENT}@Override",
        f"{INDENT}public boolean process(Set<? extends TypeElement> annotations,",
        f"{INDENT}                       RoundEnvironment objects)",
        f"{INDENT}{{",
        f"{INDENT * 2}for (Element elt : objects.getElementsAnnotatedWith({decl.name}.class))",
        f"{INDENT * 2}{{",
    ]
    for i, c in enumerate(constraints):
        if i:
            lines.append("")
        lines += _check_block(decl, c, INDENT * 3)
    lines += [
        f"{INDENT * 2}}}",
        f"{INDENT * 2}return true;",
        f"{INDENT}}}",
        "",
    ]
    lines += _HELPERS.rstrip("\n").split("\n")
    lines.append("}")
    return GeneratedFile(f"{_package_dir(package_name)}{class_name}.java", "\n".join(lines) + "\n")


def render_processors(decl: AnnotationDecl, package_name: str = "",
                      source_version: str = DEFAULT_SOURCE_VERSION) -> List[GeneratedFile]:
    files = []
    for polarity in (Polarity.REQUIRE, Polarity.FORBID):
        if any(c.polarity is polarity for c in decl.constraints):
            files.append(_render_processor(decl, polarity, package_name, source_version))
    return files


def processor_class_names(unit: AnnotationUnit) -> List[str]:
    prefix = unit.package_name + "." if unit.package_name else ""
    names = []
    for decl in unit.declarations:
        for polarity in (Polarity.REQUIRE, Polarity.FORBID):
            if any(c.polarity is polarity for c in decl.constraints):
                names.append(f"{prefix}{decl.name}{polarity.value.capitalize()}Processor")
    return names


def render_services(units: Iterable[AnnotationUnit]) -> Optional[GeneratedFile]:
    names = [n for u in units for n in processor_class_names(u)]
    if not names:
        return None
    return GeneratedFile(SERVICES_PATH, "\n".join(names) + "\n")


def render_unit(unit: AnnotationUnit, source_version: str = DEFAULT_SOURCE_VERSION,
                services: bool = False) -> List[GeneratedFile]:
    files = []
    for decl in unit.declarations:
        files.append(render_annotation_declaration(decl, unit.package_name))
        files.extend(render_processors(decl, unit.package_name, source_version))
    if services:
        extra = render_services([unit])
        if extra is not None:
            files.append(extra)
    return files


# -- writing -----------------------------------------------------------------

def _io_error(path: str, exc: OSError) -> AnnError:
    return AnnError([error("ANN0402", f"cannot write {path}: {exc.strerror or exc}", SourceSpan(path, 1, 1))])


def write_files(files: Sequence[GeneratedFile], output_root, force: bool = False) -> List[str]:
    """Write ``files`` under ``output_root``; returns the written paths.

    Nothing is written when a target already exists (unless ``force``) or
    when two files map to the same path.  Each file is written to a
    temporary sibling and renamed into place.
    """
    root = os.fspath(output_root)
    targets = [os.path.join(root, *f.relative_path.split("/")) for f in files]

    problems = []
    seen = set()
    for f, target in zip(files, targets):
        if target in seen:
            problems.append(error("ANN0401", f"{f.relative_path} would be generated twice", SourceSpan(target, 1, 1)))
        seen.add(target)
        if os.path.isdir(target) or (os.path.exists(target) and not force):
            problems.append(
                error("ANN0401", f"{target} already exists (use --force to overwrite)", SourceSpan(target, 1, 1))
            )
    if problems:
        raise AnnError(problems)

    for f, target in zip(files, targets):
        directory = os.path.dirname(target) or "."
        try:
            os.makedirs(directory, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=".annc-", suffix=".tmp", dir=directory)
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as out:
                    out.write(f.content)
                os.replace(tmp, target)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            raise _io_error(target, exc) from exc
    return targets


def generate(unit: AnnotationUnit, output_root, force: bool = False,
             source_version: str = DEFAULT_SOURCE_VERSION, services: bool = False) -> List[GeneratedFile]:
    files = render_unit(unit, source_version, services)
    write_files(files, output_root, force)
    return files
