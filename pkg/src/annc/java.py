"""A structural model of Java sources: types, members, modifiers and annotation uses.

Only what constraint checking needs is parsed.  Method bodies, field
initializers, generic arguments and parameter lists are skipped or kept as
opaque text.  Anything the subset does not cover becomes an ANN0302
diagnostic rather than an exception.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .core import (
    AnnError,
    Diagnostic,
    Modifier,
    SourceSpan,
    TargetKind,
    error,
)


@dataclass(frozen=True)
class AnnotationUse:
    name: str
    args_text: Optional[str] = None
    span: SourceSpan = field(default=SourceSpan("<memory>", 1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class MemberDecl:
    kind: TargetKind
    name: str
    modifiers: FrozenSet[Modifier] = frozenset()
    annotations: Tuple[AnnotationUse, ...] = ()
    type_text: str = ""
    params_text: Optional[str] = None
    span: SourceSpan = field(default=SourceSpan("<memory>", 1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class TypeDecl:
    kind: TargetKind
    name: str
    modifiers: FrozenSet[Modifier] = frozenset()
    annotations: Tuple[AnnotationUse, ...] = ()
    members: Tuple[MemberDecl, ...] = ()
    nested_types: Tuple["TypeDecl", ...] = ()
    is_annotation_type: bool = False
    span: SourceSpan = field(default=SourceSpan("<memory>", 1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class CompilationUnit:
    package_name: str = ""
    types: Tuple[TypeDecl, ...] = ()
    imports: Tuple[str, ...] = ()
    source_name: str = field(default="<memory>", compare=False)


Element = Union[TypeDecl, MemberDecl]


class ElementRef:
    """A program element together with the type that declares it.

    Equality is element identity: two structurally equal classes in
    different files are different elements.
    """

    __slots__ = ("element", "enclosing", "unit")

    def __init__(self, element: Element, enclosing: Optional[TypeDecl] = None,
                 unit: Optional[CompilationUnit] = None):
        self.element = element
        self.enclosing = enclosing
        self.unit = unit

    def __eq__(self, other):
        return isinstance(other, ElementRef) and self.element is other.element

    def __hash__(self):
        return id(self.element)

    def __repr__(self):
        return f"ElementRef({self.kind.value} {self.qualified_name})"

    @property
    def kind(self) -> TargetKind:
        return self.element.kind

    @property
    def name(self) -> str:
        return self.element.name

    @property
    def modifiers(self) -> FrozenSet[Modifier]:
        return self.element.modifiers

    @property
    def span(self) -> SourceSpan:
        return self.element.span

    @property
    def is_type(self) -> bool:
        return isinstance(self.element, TypeDecl)

    @property
    def qualified_name(self) -> str:
        if self.enclosing is None:
            return self.name
        return f"{self.enclosing.name}.{self.name}"

    def annotation_names(self) -> FrozenSet[str]:
        return frozenset(a.name for a in self.element.annotations)

    def has_annotation(self, name: str) -> bool:
        return any(a.name == name for a in self.element.annotations)


# -- lexing ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<opencomment>/\*)
  | (?P<textblock>\"\"\".*?\"\"\")
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>\.?[0-9](?:[0-9a-zA-Z_.]|[eEpP][+-])*)
  | (?P<ident>[^\W\d]\w*|\$[\w$]*)
  | (?P<op>->|::|\.\.\.|[{}()\[\];,.@=<>?:+\-*/&|!~^%])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int
    line: int
    column: int

    def is_op(self, *texts: str) -> bool:
        return self.kind == "op" and self.text in texts

    def is_word(self, *texts: str) -> bool:
        return self.kind == "ident" and self.text in texts


def _lex(text: str, name: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup == "opencomment":
            kind = "comment" if m is not None else "character"
            raise _JavaSyntax(
                error(
                    "ANN0302",
                    "unterminated comment" if m is not None else f"unexpected character {text[pos]!r}",
                    SourceSpan(name, line, pos - line_start + 1, 1),
                )
            )
        kind = m.lastgroup
        piece = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, piece, pos, line, pos - line_start + 1))
        newlines = piece.count("\n")
        if newlines:
            line += newlines
            line_start = pos + piece.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", pos, line, pos - line_start + 1))
    return toks


# -- parsing -----------------------------------------------------------------

_MODIFIERS = {m.value: m for m in Modifier}
_IGNORED_MODIFIERS = {"native", "synchronized", "transient", "volatile", "strictfp", "default", "sealed"}
_TYPE_WORDS = {"class": TargetKind.CLASS, "interface": TargetKind.INTERFACE, "enum": TargetKind.ENUM}
_PAIRS = {"(": ")", "[": "]", "{": "}"}


class _JavaSyntax(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _JavaParser:
    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        self.toks = _lex(text, name)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, ahead: int = 1) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def bump(self) -> _Tok:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def span_from(self, first: _Tok) -> SourceSpan:
        last = self.toks[self.i - 1] if self.i > 0 else first
        end = max(last.offset + len(last.text), first.offset)
        return SourceSpan(self.name, first.line, first.column, end - first.offset)

    def fail(self, message: str, tok: Optional[_Tok] = None, code: str = "ANN0302"):
        tok = tok or self.tok
        raise _JavaSyntax(error(code, message, SourceSpan(self.name, tok.line, tok.column, len(tok.text))))

    def describe(self, tok: _Tok) -> str:
        return "end of file" if tok.kind == "eof" else repr(tok.text)

    def expect_op(self, text: str) -> _Tok:
        if self.tok.is_op(text):
            return self.bump()
        self.fail(f"expected '{text}' but found {self.describe(self.tok)}")

    def expect_ident(self, what: str) -> _Tok:
        if self.tok.kind == "ident":
            return self.bump()
        self.fail(f"expected {what} but found {self.describe(self.tok)}")

    def check_balance(self):
        stack: List[_Tok] = []
        for t in self.toks:
            if t.kind != "op":
                continue
            if t.text in _PAIRS:
                stack.append(t)
            elif t.text in _PAIRS.values():
                if not stack or _PAIRS[stack[-1].text] != t.text:
                    self.fail(f"unbalanced '{t.text}'", t, code="ANN0301")
                stack.pop()
        if stack:
            self.fail(f"'{stack[-1].text}' is never closed", stack[-1], code="ANN0301")

    def skip_balanced(self) -> str:
        """Consume a bracketed group starting at the current token; return its inner text."""
        open_tok = self.bump()
        close = _PAIRS[open_tok.text]
        depth = 1
        while depth:
            t = self.bump()
            if t.kind == "eof":
                self.fail(f"'{open_tok.text}' is never closed", open_tok, code="ANN0301")
            if t.kind == "op" and t.text in _PAIRS:
                depth += 1
            elif t.kind == "op" and t.text in _PAIRS.values():
                depth -= 1
        return self.text[open_tok.offset + 1:self.toks[self.i - 1].offset]

    def skip_angles(self):
        depth = 0
        while True:
            t = self.tok
            if t.is_op("<"):
                depth += 1
            elif t.is_op(">"):
                depth -= 1
            elif t.kind == "eof" or t.is_op("{", "}", ";", "(", ")"):
                self.fail(f"malformed type arguments near {self.describe(t)}")
            self.bump()
            if depth == 0:
                return

    def qualified_name(self) -> str:
        parts = [self.expect_ident("a name").text]
        while self.tok.is_op(".") and self.peek().kind == "ident":
            self.bump()
            parts.append(self.bump().text)
        return ".".join(parts)

    # -- units -----------------------------------------------------------

    def parse(self) -> CompilationUnit:
        self.check_balance()
        package = ""
        imports = []
        # package annotations (package-info.java) are accepted and dropped
        save = self.i
        self.annotations_and_modifiers()
        if self.tok.is_word("package"):
            self.bump()
            package = self.qualified_name()
            self.expect_op(";")
        else:
            self.i = save
        while self.tok.is_word("import"):
            self.bump()
            start = self.tok
            while not self.tok.is_op(";"):
                if self.tok.kind == "eof":
                    self.fail("unterminated import")
                self.bump()
            imports.append(self.text[start.offset:self.tok.offset].strip())
            self.bump()
        types = []
        while self.tok.kind != "eof":
            if self.tok.is_op(";"):
                self.bump()
                continue
            first = self.tok
            annotations, modifiers = self.annotations_and_modifiers()
            types.append(self.type_decl(first, annotations, modifiers))
        seen = set()
        for t in types:
            if t.name in seen:
                self.fail_at_span(f"duplicate top-level type '{t.name}'", t.span)
            seen.add(t.name)
        return CompilationUnit(package, tuple(types), tuple(imports), self.name)

    def fail_at_span(self, message: str, span: SourceSpan):
        raise _JavaSyntax(error("ANN0302", message, span))

    def annotations_and_modifiers(self) -> Tuple[List[AnnotationUse], set]:
        annotations: List[AnnotationUse] = []
        modifiers = set()
        while True:
            t = self.tok
            if t.is_op("@") and not self.peek().is_word("interface"):
                annotations.append(self.annotation_use())
            elif t.kind == "ident" and t.text in _MODIFIERS:
                modifiers.add(_MODIFIERS[self.bump().text])
            elif t.kind == "ident" and t.text in _IGNORED_MODIFIERS:
                if t.text == "default" and self.peek().is_op(":"):
                    self.fail("switch labels are outside the supported subset")
                self.bump()
            elif t.is_word("non") and self.peek().is_op("-") and self.peek(2).is_word("sealed"):
                self.i += 3
            else:
                return annotations, modifiers

    def annotation_use(self) -> AnnotationUse:
        first = self.bump()
        qualified = self.qualified_name()
        args = None
        if self.tok.is_op("("):
            args = self.skip_balanced()
        return AnnotationUse(qualified.rsplit(".", 1)[-1], args, self.span_from(first))

    def type_decl(self, first: _Tok, annotations, modifiers) -> TypeDecl:
        is_annotation_type = False
        t = self.tok
        if t.is_op("@") and self.peek().is_word("interface"):
            self.i += 2
            kind = TargetKind.INTERFACE
            is_annotation_type = True
        elif t.kind == "ident" and t.text in _TYPE_WORDS:
            self.bump()
            kind = _TYPE_WORDS[t.text]
        elif t.is_word("record"):
            self.fail("records are outside the supported subset")
        else:
            self.fail(f"expected a class, interface or enum declaration but found {self.describe(t)}")
        name = self.expect_ident("a type name").text
        while not self.tok.is_op("{"):
            if self.tok.kind == "eof" or self.tok.is_op(";", "}"):
                self.fail(f"expected '{{' to open {name} but found {self.describe(self.tok)}")
            if self.tok.is_op("("):
                self.skip_balanced()
            else:
                self.bump()
        self.bump()
        members: List[MemberDecl] = []
        nested: List[TypeDecl] = []
        if kind is TargetKind.ENUM:
            self.enum_constants()
        while not self.tok.is_op("}"):
            self.member(name, kind, members, nested)
        self.bump()
        return TypeDecl(
            kind, name, frozenset(modifiers), tuple(annotations), tuple(members), tuple(nested),
            is_annotation_type, self.span_from(first),
        )

    def enum_constants(self):
        while True:
            if self.tok.is_op(";"):
                self.bump()
                return
            if self.tok.is_op("}"):
                return
            self.annotations_and_modifiers()
            self.expect_ident("an enum constant")
            if self.tok.is_op("("):
                self.skip_balanced()
            if self.tok.is_op("{"):
                self.skip_balanced()
            if self.tok.is_op(","):
                self.bump()
            elif not self.tok.is_op(";", "}"):
                self.fail(f"expected ',' or ';' after enum constant but found {self.describe(self.tok)}")

    def member(self, type_name: str, type_kind: TargetKind, members: List[MemberDecl], nested: List[TypeDecl]):
        if self.tok.is_op(";"):
            self.bump()
            return
        first = self.tok
        annotations, modifiers = self.annotations_and_modifiers()
        t = self.tok
        if t.is_op("{"):
            self.skip_balanced()  # initializer block
            return
        if (t.kind == "ident" and t.text in _TYPE_WORDS) or (t.is_op("@") and self.peek().is_word("interface")):
            nested.append(self.type_decl(first, annotations, modifiers))
            return
        if t.is_word("record") and self.peek().kind == "ident":
            self.fail("records are outside the supported subset")
        if t.is_op("<"):
            self.skip_angles()
            t = self.tok
        if t.kind == "ident" and t.text == type_name and self.peek().is_op("("):
            self.bump()
            params = self.skip_balanced()
            self.method_tail(allow_abstract=False)
            if type_kind is TargetKind.CLASS:
                members.append(
                    MemberDecl(TargetKind.CONSTRUCTOR, type_name, frozenset(modifiers), tuple(annotations),
                               "", params, self.span_from(first))
                )
            return
        type_text = self.type_text()
        name_tok = self.expect_ident("a member name")
        if self.tok.is_op("("):
            params = self.skip_balanced()
            self.method_tail(allow_abstract=True)
            members.append(
                MemberDecl(TargetKind.METHOD, name_tok.text, frozenset(modifiers), tuple(annotations),
                           type_text, params, self.span_from(first))
            )
            return
        names = [name_tok.text]
        while True:
            while self.tok.is_op("["):
                self.skip_balanced()
            if self.tok.is_op("="):
                self.bump()
                self.skip_initializer()
            if self.tok.is_op(","):
                self.bump()
                names.append(self.expect_ident("a field name").text)
                continue
            if self.tok.is_op(";"):
                self.bump()
                break
            if self.tok.is_op("->"):
                self.fail("lambdas are outside the supported subset")
            self.fail(f"expected ';' after field '{names[-1]}' but found {self.describe(self.tok)}")
        span = self.span_from(first)
        for n in names:
            members.append(
                MemberDecl(TargetKind.FIELD, n, frozenset(modifiers), tuple(annotations), type_text, None, span)
            )

    def type_text(self) -> str:
        t = self.tok
        if t.is_op("->"):
            self.fail("lambdas are outside the supported subset")
        if t.kind != "ident":
            self.fail(f"expected a member declaration but found {self.describe(t)}")
        start = t.offset
        self.qualified_name()
        while True:
            if self.tok.is_op("<"):
                self.skip_angles()
                if self.tok.is_op(".") and self.peek().kind == "ident":
                    self.bump()
                    self.qualified_name()
                    continue
            elif self.tok.is_op("[") and self.peek().is_op("]"):
                self.i += 2
            elif self.tok.is_op("..."):
                self.bump()
            else:
                break
        end_tok = self.toks[self.i - 1]
        return self.text[start:end_tok.offset + len(end_tok.text)]

    def method_tail(self, allow_abstract: bool):
        while self.tok.is_op("[") and self.peek().is_op("]"):
            self.i += 2
        if self.tok.is_word("throws"):
            self.bump()
            while not self.tok.is_op("{", ";"):
                if self.tok.kind == "eof" or self.tok.is_op("}"):
                    self.fail(f"unexpected {self.describe(self.tok)} in throws clause")
                self.bump()
        if self.tok.is_word("default"):
            # annotation type element default value
            self.bump()
            self.skip_initializer()
        if self.tok.is_op("{"):
            self.skip_balanced()
        elif self.tok.is_op(";") and allow_abstract:
            self.bump()
        else:
            self.fail(f"expected a method body but found {self.describe(self.tok)}")

    def skip_initializer(self):
        while True:
            t = self.tok
            if t.kind == "eof" or t.is_op("}"):
                self.fail(f"unterminated initializer, found {self.describe(t)}")
            if t.is_op(";"):
                return
            if t.is_op(","):
                nxt, after = self.peek(), self.peek(2)
                # `, name =` / `, name;` starts another declarator; anything else
                # (e.g. `new HashMap<K, V>()`) is still the initializer
                if nxt.kind == "ident" and after.is_op("=", ",", ";", "["):
                    return
            if t.kind == "op" and t.text in _PAIRS:
                self.skip_balanced()
            else:
                self.bump()


def parse_java_source(text: str, source_name: str = "<memory>") -> CompilationUnit:
    try:
        return _JavaParser(text, source_name).parse()
    except _JavaSyntax as exc:
        raise AnnError([exc.diagnostic]) from None
    except RecursionError:
        raise AnnError([error("ANN0302", "declarations nested too deeply", SourceSpan(source_name, 1, 1))]) from None


def parse_java_file(path) -> CompilationUnit:
    with open(path, encoding="utf-8") as f:
        return parse_java_source(f.read(), str(path))


def _walk_type(t: TypeDecl, enclosing: Optional[TypeDecl], unit) -> Iterator[ElementRef]:
    yield ElementRef(t, enclosing, unit)
    children: List[ElementRef] = [ElementRef(m, t, unit) for m in t.members]
    children.sort(key=lambda r: (r.span.line, r.span.column))
    nested = sorted(t.nested_types, key=lambda n: (n.span.line, n.span.column))
    # merge members and nested types by position
    out: List[Tuple[Tuple[int, int], int, object]] = []
    for idx, ref in enumerate(children):
        out.append(((ref.span.line, ref.span.column), idx, ref))
    for idx, n in enumerate(nested):
        out.append(((n.span.line, n.span.column), len(children) + idx, n))
    for _, _, item in sorted(out, key=lambda x: (x[0], x[1])):
        if isinstance(item, ElementRef):
            yield item
        else:
            yield from _walk_type(item, t, unit)


def all_elements(units: Iterable[CompilationUnit]) -> List[ElementRef]:
    refs = []
    for unit in units:
        for t in unit.types:
            refs.extend(_walk_type(t, None, unit))
    return refs


def annotated_elements(units: Iterable[CompilationUnit], annotation_name: str) -> List[ElementRef]:
    return [r for r in all_elements(units) if r.has_annotation(annotation_name)]
