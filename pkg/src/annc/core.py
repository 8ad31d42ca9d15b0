"""Shared model for Ann sources: declarations, constraints, statements and diagnostics.

All node types are frozen dataclasses.  Source spans are excluded from
equality, so ``==`` on two trees compares structure only; this is what the
printer round-trip relies on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple


class TargetKind(str, enum.Enum):
    CLASS = "class"
    INTERFACE = "interface"
    ENUM = "enum"
    FIELD = "field"
    METHOD = "method"
    CONSTRUCTOR = "constructor"

    @property
    def is_type(self) -> bool:
        return self in TYPE_KINDS

    @property
    def is_member(self) -> bool:
        return self in MEMBER_KINDS


TYPE_KINDS = frozenset({TargetKind.CLASS, TargetKind.INTERFACE, TargetKind.ENUM})
MEMBER_KINDS = frozenset({TargetKind.FIELD, TargetKind.METHOD, TargetKind.CONSTRUCTOR})
ALL_KINDS = TYPE_KINDS | MEMBER_KINDS


class Modifier(str, enum.Enum):
    PUBLIC = "public"
    PROTECTED = "protected"
    PRIVATE = "private"
    STATIC = "static"
    FINAL = "final"
    ABSTRACT = "abstract"


ACCESS_MODIFIERS = frozenset({Modifier.PUBLIC, Modifier.PROTECTED, Modifier.PRIVATE})

# Printing order, the one Java style guides recommend.
MODIFIER_ORDER = (
    Modifier.PUBLIC,
    Modifier.PROTECTED,
    Modifier.PRIVATE,
    Modifier.ABSTRACT,
    Modifier.STATIC,
    Modifier.FINAL,
)


def sorted_modifiers(modifiers: Iterable[Modifier]) -> List[Modifier]:
    present = set(modifiers)
    return [m for m in MODIFIER_ORDER if m in present]


class AttrType(str, enum.Enum):
    STRING = "String"
    INT = "int"
    FLOAT = "float"
    BOOLEAN = "boolean"
    CLASS = "Class"


class LiteralKind(str, enum.Enum):
    STRING = "string"
    INT = "int"
    FLOAT = "float"
    BOOLEAN = "boolean"


class Polarity(str, enum.Enum):
    REQUIRE = "require"
    FORBID = "forbid"


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"span position must be 1-based, got {self.line}:{self.column}")
        if self.length < 0:
            raise ValueError("span length must be non-negative")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


NO_SPAN = SourceSpan("<none>", 1, 1, 0)


@dataclass(frozen=True)
class Literal:
    """A default value.  ``text`` is the decoded value for strings and the
    source spelling (e.g. ``52.3``, ``-1``) for everything else."""

    kind: LiteralKind
    text: str

    @property
    def value(self):
        if self.kind is LiteralKind.STRING:
            return self.text
        if self.kind is LiteralKind.INT:
            return int(self.text)
        if self.kind is LiteralKind.FLOAT:
            return float(self.text)
        return self.text == "true"


@dataclass(frozen=True)
class Statement:
    kind: TargetKind
    modifiers: FrozenSet[Modifier] = frozenset()
    annotation_ref: Optional[str] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "modifiers", frozenset(self.modifiers))
        if len(self.modifiers & ACCESS_MODIFIERS) > 1:
            raise ValueError("a statement may carry at most one access modifier")


@dataclass(frozen=True)
class Constraint:
    polarity: Polarity
    statements: Tuple[Statement, ...]
    scope: Optional[TargetKind] = None
    all_quantifier: bool = False
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))
        if not self.statements:
            raise ValueError("a constraint needs at least one statement")
        if self.all_quantifier and (self.polarity is Polarity.FORBID or self.scope is None):
            raise ValueError("'all' is only allowed in a scoped require")

    @property
    def is_require(self) -> bool:
        return self.polarity is Polarity.REQUIRE

    @property
    def is_forbid(self) -> bool:
        return self.polarity is Polarity.FORBID


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    attr_type: AttrType
    default_value: Optional[Literal] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class AnnotationDecl:
    name: str
    runtime: bool = False
    attributes: Tuple[AttributeDecl, ...] = ()
    constraints: Tuple[Constraint, ...] = ()
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def requires(self) -> Tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.is_require)

    @property
    def forbids(self) -> Tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.is_forbid)


@dataclass(frozen=True)
class AnnotationUnit:
    package_name: str = ""
    declarations: Tuple[AnnotationDecl, ...] = ()
    source_name: str = field(default="<memory>", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "declarations", tuple(self.declarations))

    def declaration(self, name: str) -> Optional[AnnotationDecl]:
        for decl in self.declarations:
            if decl.name == name:
                return decl
        return None


@dataclass(frozen=True)
class Edit:
    """Machine-applicable edit: currently only removals of a source range."""

    action: str  # "remove_constraint" | "remove_statement"
    span: SourceSpan


@dataclass(frozen=True)
class QuickFix:
    label: str
    edit: Edit


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan
    quick_fixes: Tuple[QuickFix, ...] = ()

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self):
        return (self.span.file, self.span.line, self.span.column, self.code, self.message)

    def format(self) -> str:
        text = f"{self.span}: {self.severity.value}[{self.code}]: {self.message}"
        if self.quick_fixes:
            text += " (quick fixes: " + " | ".join(q.label for q in self.quick_fixes) + ")"
        return text

    def to_json(self) -> dict:
        return {
            "file": self.span.file,
            "line": self.span.line,
            "column": self.span.column,
            "length": self.span.length,
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "quick_fixes": [
                {
                    "label": q.label,
                    "edit": {
                        "action": q.edit.action,
                        "file": q.edit.span.file,
                        "line": q.edit.span.line,
                        "column": q.edit.span.column,
                        "length": q.edit.span.length,
                    },
                }
                for q in self.quick_fixes
            ],
        }


def error(code: str, message: str, span: SourceSpan, quick_fixes=()) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span, tuple(quick_fixes))


def warning(code: str, message: str, span: SourceSpan, quick_fixes=()) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span, tuple(quick_fixes))


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    return sorted(diagnostics, key=Diagnostic.sort_key)


class AnnError(Exception):
    """Raised by a pipeline stage that cannot produce a result.

    Carries every diagnostic found before giving up.
    """

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = sort_diagnostics(diagnostics)
        super().__init__("\n".join(d.format() for d in self.diagnostics))


def derive_target_kinds(decl: AnnotationDecl) -> FrozenSet[TargetKind]:
    """Kinds of element the annotation may sit on.

    The union of statement kinds over the unscoped requires; a declaration
    without any unscoped require is unrestricted.
    """
    unscoped = [c for c in decl.constraints if c.is_require and c.scope is None]
    if not unscoped:
        return ALL_KINDS
    return frozenset(s.kind for c in unscoped for s in c.statements)


_ELEMENT_TYPES = (
    ("TYPE", TYPE_KINDS),
    ("FIELD", {TargetKind.FIELD}),
    ("METHOD", {TargetKind.METHOD}),
    ("CONSTRUCTOR", {TargetKind.CONSTRUCTOR}),
)


def java_element_types(kinds: Iterable[TargetKind]) -> List[str]:
    kinds = set(kinds)
    return [name for name, covered in _ELEMENT_TYPES if kinds & covered]
