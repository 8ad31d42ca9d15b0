"""Semantic checks on a parsed unit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional

from .core import (
    AnnotationDecl,
    AnnotationUnit,
    AttrType,
    Constraint,
    Diagnostic,
    Edit,
    LiteralKind,
    QuickFix,
    SourceSpan,
    Statement,
    derive_target_kinds,
    error,
    sort_diagnostics,
    warning,
)
from .printer import format_constraint, format_literal

_COMPATIBLE = {
    AttrType.STRING: {LiteralKind.STRING},
    AttrType.INT: {LiteralKind.INT},
    AttrType.FLOAT: {LiteralKind.FLOAT, LiteralKind.INT},
    AttrType.BOOLEAN: {LiteralKind.BOOLEAN},
    AttrType.CLASS: set(),
}

INT_MIN, INT_MAX = -(2 ** 31), 2 ** 31 - 1


@dataclass(frozen=True)
class Contradiction:
    require: Constraint
    forbid: Constraint
    quick_fixes: tuple

    @property
    def require_span(self) -> SourceSpan:
        return self.require.span

    @property
    def forbid_span(self) -> SourceSpan:
        return self.forbid.span


def subsumes(general: Statement, specific: Statement) -> bool:
    """True when every element described by ``specific`` is also described by ``general``."""
    return (
        general.kind is specific.kind
        and general.modifiers <= specific.modifiers
        and (general.annotation_ref is None or general.annotation_ref == specific.annotation_ref)
    )


def _removal(constraint: Constraint) -> QuickFix:
    return QuickFix(f"Remove '{format_constraint(constraint)}'", Edit("remove_constraint", constraint.span))


def find_contradictions(decl: AnnotationDecl) -> List[Contradiction]:
    """Pairs (require, forbid) that can never hold together.

    Pairwise and conservative: only forbids with a single statement are
    considered, and only against requires at the same scope.  ``require all``
    is skipped because it holds vacuously when no related element exists.
    """
    found = []
    for req in decl.requires:
        if req.all_quantifier:
            continue
        for forb in decl.forbids:
            if forb.scope is not req.scope or len(forb.statements) != 1:
                continue
            banned = forb.statements[0]
            if all(subsumes(banned, s) for s in req.statements):
                found.append(Contradiction(req, forb, (_removal(req), _removal(forb))))
    return found


def _check_default(decl: AnnotationDecl, attr, out: List[Diagnostic]):
    lit = attr.default_value
    if lit is None:
        return
    if lit.kind not in _COMPATIBLE[attr.attr_type]:
        out.append(
            error(
                "ANN0203",
                f"default value of '{decl.name}.{attr.name}' is {format_literal(lit)} ({lit.kind.value}), "
                f"not assignable to {attr.attr_type.value}",
                attr.span,
            )
        )
    elif attr.attr_type is AttrType.INT and not INT_MIN <= lit.value <= INT_MAX:
        out.append(error("ANN0203", f"default value {lit.text} of '{decl.name}.{attr.name}' overflows int", attr.span))


def validate_decl(decl: AnnotationDecl, known: Iterable[str]) -> List[Diagnostic]:
    known = set(known)
    out: List[Diagnostic] = []

    seen = set()
    for attr in decl.attributes:
        if attr.name in seen:
            out.append(error("ANN0202", f"duplicate attribute '{attr.name}' in annotation {decl.name}", attr.span))
        seen.add(attr.name)
        _check_default(decl, attr, out)

    targets = derive_target_kinds(decl)
    for constraint in decl.constraints:
        for stmt in constraint.statements:
            if stmt.annotation_ref is not None and stmt.annotation_ref not in known:
                out.append(
                    warning(
                        "ANN0204",
                        f"unknown annotation '@{stmt.annotation_ref}' (not declared here nor allowed externally)",
                        stmt.span,
                    )
                )
        if constraint.scope is not None and constraint.scope not in targets:
            allowed = ", ".join(sorted(k.value for k in targets))
            out.append(
                warning(
                    "ANN0205",
                    f"'{format_constraint(constraint)}' can never apply: @{decl.name} only targets {allowed}",
                    constraint.span,
                    [_removal(constraint)],
                )
            )

    for c in find_contradictions(decl):
        out.append(
            error(
                "ANN0210",
                f"contradictory constraints in @{decl.name}: '{format_constraint(c.require)}' "
                f"cannot be satisfied together with '{format_constraint(c.forbid)}' "
                f"(line {c.forbid.span.line})",
                c.require.span,
                c.quick_fixes,
            )
        )
    return out


def validate_unit(unit: AnnotationUnit, allowlist: Optional[Iterable[str]] = None) -> List[Diagnostic]:
    """All semantic findings for ``unit``, sorted by position.  Never raises."""
    known = {d.name for d in unit.declarations} | set(allowlist or ())
    out: List[Diagnostic] = []
    seen = set()
    for decl in unit.declarations:
        if decl.name in seen:
            out.append(error("ANN0201", f"annotation '{decl.name}' is declared more than once", decl.span))
        seen.add(decl.name)
        out.extend(validate_decl(decl, known))
    return sort_diagnostics(out)
