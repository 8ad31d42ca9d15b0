"""Canonical text form of Ann trees.

Used for round-trip tests, for diagnostic messages and for the tag comments
in generated processors, so the output format must stay stable.
"""
from __future__ import annotations

from .core import (
    AnnotationDecl,
    AnnotationUnit,
    AttributeDecl,
    Constraint,
    Literal,
    LiteralKind,
    Statement,
    sorted_modifiers,
)

INDENT = "    "


def escape_string(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def format_literal(literal: Literal) -> str:
    if literal.kind is LiteralKind.STRING:
        return f'"{escape_string(literal.text)}"'
    return literal.text


def format_statement(stmt: Statement) -> str:
    words = []
    if stmt.annotation_ref:
        words.append("@" + stmt.annotation_ref)
    words.extend(m.value for m in sorted_modifiers(stmt.modifiers))
    words.append(stmt.kind.value)
    return " ".join(words)


def format_constraint(constraint: Constraint) -> str:
    head = f"at {constraint.scope.value}: " if constraint.scope else ""
    head += constraint.polarity.value
    if constraint.all_quantifier:
        head += " all"
    joiner = " or " if constraint.is_require else " and "
    return f"{head} {joiner.join(format_statement(s) for s in constraint.statements)};"


def format_attribute(attr: AttributeDecl) -> str:
    text = f"{attr.attr_type.value} {attr.name}"
    if attr.default_value is not None:
        text += f" = {format_literal(attr.default_value)}"
    return text + ";"


def format_decl(decl: AnnotationDecl) -> str:
    head = ("runtime " if decl.runtime else "") + f"annotation {decl.name} {{"
    if not decl.attributes and not decl.constraints:
        return head + "}\n"
    lines = [head]
    lines.extend(INDENT + format_attribute(a) for a in decl.attributes)
    if decl.attributes and decl.constraints:
        lines.append("")
    lines.extend(INDENT + format_constraint(c) for c in decl.constraints)
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_unit(unit: AnnotationUnit) -> str:
    chunks = []
    if unit.package_name:
        chunks.append(f"package {unit.package_name};\n")
    chunks.extend(format_decl(d) for d in unit.declarations)
    return "\n".join(chunks)
