"""Evaluates Ann constraints against annotation placements in a Java program.

The rules, for an annotation placed on element ``e``:

* unscoped ``require S1 or ... or Sn``: ``e`` itself matches some ``Si``;
* unscoped ``forbid S1 and ... and Sn``: ``e`` does not match all ``Si`` at once;
* ``at K: ...`` only applies when ``e`` is of kind ``K`` and then talks about
  the elements related to ``e`` (see :func:`scope_elements`);
* scoped ``require``: some ``Si`` is matched by some related element of its kind;
* scoped ``require all``: for every kind mentioned, every related element of
  that kind matches one of the statements of that kind;
* scoped ``forbid``: violated when every ``Si`` is matched by some related
  element, each independently.

Generated processors implement the same rules in Java.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence

from .core import (
    AnnotationDecl,
    AnnotationUnit,
    Constraint,
    Diagnostic,
    Statement,
    TargetKind,
    derive_target_kinds,
    error,
    sort_diagnostics,
)
from .java import CompilationUnit, ElementRef, TypeDecl, annotated_elements
from .printer import format_constraint


@dataclass(frozen=True)
class PlacementReport:
    element: ElementRef
    annotation: str
    violations: tuple

    @property
    def accepted(self) -> bool:
        return not self.violations


def statement_matches(stmt: Statement, elem: ElementRef, program: Sequence[CompilationUnit] = ()) -> bool:
    return (
        elem.kind is stmt.kind
        and stmt.modifiers <= elem.modifiers
        and (stmt.annotation_ref is None or elem.has_annotation(stmt.annotation_ref))
    )


def _members_of(owner: TypeDecl, kind: TargetKind, unit) -> List[ElementRef]:
    return [ElementRef(m, owner, unit) for m in owner.members if m.kind is kind]


def scope_elements(target: ElementRef, stmt_kind: TargetKind, program: Sequence[CompilationUnit] = ()) -> List[ElementRef]:
    """Elements a scoped statement of kind ``stmt_kind`` is evaluated against."""
    if target.is_type:
        if stmt_kind.is_member:
            return _members_of(target.element, stmt_kind, target.unit)
        return [target]
    owner = target.enclosing
    if stmt_kind.is_type:
        return [ElementRef(owner, None, target.unit)]
    # siblings, the annotated member included
    return _members_of(owner, stmt_kind, target.unit)


def _where(refs: Iterable[ElementRef]) -> str:
    return ", ".join(f"{r.qualified_name} ({r.span})" for r in refs)


def _violation(code: str, decl: AnnotationDecl, constraint: Constraint, elem: ElementRef, detail: str) -> Diagnostic:
    return error(code, f"@{decl.name} violates: {format_constraint(constraint)} {detail}", elem.span)


def _check_constraint(decl: AnnotationDecl, c: Constraint, elem: ElementRef, program) -> List[Diagnostic]:
    if c.scope is None:
        if c.is_require:
            if not any(statement_matches(s, elem, program) for s in c.statements):
                return [_violation("ANN0310", decl, c, elem, f"({elem.kind.value} {elem.qualified_name} does not match)")]
        elif all(statement_matches(s, elem, program) for s in c.statements):
            return [_violation("ANN0311", decl, c, elem, f"({elem.kind.value} {elem.qualified_name} matches)")]
        return []

    if elem.kind is not c.scope:
        return []

    if c.is_require and not c.all_quantifier:
        for s in c.statements:
            if any(statement_matches(s, e, program) for e in scope_elements(elem, s.kind, program)):
                return []
        return [_violation("ANN0312", decl, c, elem, f"(no related element of {elem.qualified_name} matches)")]

    if c.is_require:
        # each related element answers to the disjuncts of its own kind; the
        # related type can come back for several type kinds, so dedupe
        offenders = {}
        for kind in dict.fromkeys(s.kind for s in c.statements):
            for e in scope_elements(elem, kind, program):
                if not any(statement_matches(s, e, program) for s in c.statements if s.kind is e.kind):
                    offenders[e] = None
        if offenders:
            return [_violation("ANN0313", decl, c, elem, f"(offending: {_where(offenders)})")]
        return []

    witnesses = []
    for s in c.statements:
        hits = [e for e in scope_elements(elem, s.kind, program) if statement_matches(s, e, program)]
        if not hits:
            return []
        witnesses.append(hits[0])
    return [_violation("ANN0314", decl, c, elem, f"(offending: {_where(dict.fromkeys(witnesses))})")]


def check_placement(decl: AnnotationDecl, elem: ElementRef, program: Sequence[CompilationUnit] = ()) -> PlacementReport:
    violations = []
    for c in decl.constraints:
        violations.extend(_check_constraint(decl, c, elem, program))
    return PlacementReport(elem, decl.name, tuple(violations))


def check_program(unit: AnnotationUnit, program: Sequence[CompilationUnit]) -> List[Diagnostic]:
    out: List[Diagnostic] = []
    for decl in unit.declarations:
        targets = derive_target_kinds(decl)
        unscoped = [s for c in decl.requires if c.scope is None for s in c.statements]
        for elem in annotated_elements(program, decl.name):
            out.extend(check_placement(decl, elem, program).violations)
            if elem.kind not in targets and not any(statement_matches(s, elem, program) for s in unscoped):
                allowed = ", ".join(sorted(k.value for k in targets))
                out.append(
                    error(
                        "ANN0315",
                        f"@{decl.name} is not allowed on {elem.kind.value} {elem.qualified_name} "
                        f"(allowed targets: {allowed})",
                        elem.span,
                    )
                )
    return sort_diagnostics(out)
