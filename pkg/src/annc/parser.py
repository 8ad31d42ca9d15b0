"""Recursive-descent parser for Ann.

Grammar::

    Unit       ::= ("package" DottedName ";")? Decl*
    Decl       ::= "runtime"? "annotation" Ident "{" (Attribute | Constraint)* "}"
    Attribute  ::= Type Ident ("=" Literal)? ";"
    Constraint ::= ("at" TargetKind ":")? Require | ("at" TargetKind ":")? Forbid
    Require    ::= "require" "all"? Statement ("or" Statement)* ";"
    Forbid     ::= "forbid" Statement ("and" Statement)* ";"
    Statement  ::= AnnotationRef? Modifier* TargetKind

``all`` is only legal in the scoped form of ``require``.  A syntax error
inside a declaration body skips to the next ``;`` so that one run reports
every broken member.
"""
from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

from .core import (
    AnnError,
    AnnotationDecl,
    AnnotationUnit,
    AttrType,
    AttributeDecl,
    Constraint,
    Diagnostic,
    Literal,
    LiteralKind,
    Modifier,
    ACCESS_MODIFIERS,
    Polarity,
    SourceSpan,
    Statement,
    TargetKind,
    error,
)
from .lexer import (
    MODIFIER_KEYWORDS,
    TARGET_KEYWORDS,
    TYPE_KEYWORDS,
    Token,
    TokenKind,
    scan,
)

CONSTRAINT_STARTS = ("require", "forbid", "at")
DECL_STARTS = ("annotation", "runtime")

_LITERAL_KINDS = {
    TokenKind.STRING_LITERAL: LiteralKind.STRING,
    TokenKind.INT_LITERAL: LiteralKind.INT,
    TokenKind.FLOAT_LITERAL: LiteralKind.FLOAT,
    TokenKind.BOOLEAN_LITERAL: LiteralKind.BOOLEAN,
}


class _Sync(Exception):
    """Unwinds to the nearest recovery point; the diagnostic is already recorded."""


def _quote(items: Iterable[str]) -> str:
    items = list(items)
    if len(items) == 1:
        return f"'{items[0]}'"
    return "one of " + ", ".join(f"'{i}'" for i in items)


class Parser:
    def __init__(self, tokens: List[Token], source_name: str):
        self.tokens = tokens
        self.source_name = source_name
        self.index = 0
        self.diagnostics: List[Diagnostic] = []

    # -- token helpers -------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    @property
    def previous(self) -> Token:
        return self.tokens[self.index - 1]

    def at(self, *words: str) -> bool:
        tok = self.current
        return tok.kind in (TokenKind.KEYWORD, TokenKind.PUNCTUATION) and tok.text in words

    def at_kind(self, kind: TokenKind) -> bool:
        return self.current.kind is kind

    def bump(self) -> Token:
        tok = self.current
        if tok.kind is not TokenKind.EOF:
            self.index += 1
        return tok

    def accept(self, word: str) -> Optional[Token]:
        if self.at(word):
            return self.bump()
        return None

    def fail(self, expected: Iterable[str], code: str = "ANN0110", hint: str = ""):
        tok = self.current
        message = f"expected {_quote(expected)} but found {tok.describe()}"
        if hint:
            message += f"; {hint}"
        self.report(code, message, tok.span)
        raise _Sync

    def report(self, code: str, message: str, span: SourceSpan):
        self.diagnostics.append(error(code, message, span))

    def expect(self, word: str) -> Token:
        if self.at(word):
            return self.bump()
        self.fail([word])

    def expect_identifier(self, what: str = "identifier") -> Token:
        if self.at_kind(TokenKind.IDENTIFIER):
            return self.bump()
        self.fail([what])

    def span_between(self, first: Token, last: Token) -> SourceSpan:
        return SourceSpan(self.source_name, first.span.line, first.span.column, last.end - first.offset)

    # -- recovery ------------------------------------------------------

    def skip_member(self):
        while not self.at_kind(TokenKind.EOF):
            if self.at("}") or self.at(*DECL_STARTS):
                return
            if self.bump().text == ";" and self.previous.kind is TokenKind.PUNCTUATION:
                return

    def skip_to_decl(self):
        while not self.at_kind(TokenKind.EOF) and not self.at(*DECL_STARTS):
            self.bump()

    # -- productions ---------------------------------------------------

    def parse_unit(self) -> AnnotationUnit:
        package = ""
        if self.at("package"):
            try:
                package = self.parse_package()
            except _Sync:
                self.skip_member()
        decls = []
        while not self.at_kind(TokenKind.EOF):
            if not self.at(*DECL_STARTS):
                try:
                    self.fail(["annotation", "runtime"])
                except _Sync:
                    self.bump()
                    self.skip_to_decl()
                continue
            try:
                decls.append(self.parse_decl())
            except _Sync:
                self.skip_to_decl()
        return AnnotationUnit(package, tuple(decls), self.source_name)

    def parse_package(self) -> str:
        self.expect("package")
        parts = [self.name_segment()]
        while self.accept("."):
            parts.append(self.name_segment())
        self.expect(";")
        return ".".join(parts)

    def name_segment(self) -> str:
        # Java package segments may coincide with Ann keywords ("annotation").
        if self.current.kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD, TokenKind.BOOLEAN_LITERAL):
            return self.bump().text
        self.fail(["identifier"])

    def parse_decl(self) -> AnnotationDecl:
        first = self.current
        runtime = self.accept("runtime") is not None
        self.expect("annotation")
        name = self.expect_identifier("annotation name").text
        self.expect("{")
        attributes: List[AttributeDecl] = []
        constraints: List[Constraint] = []
        last = self.previous
        while True:
            if self.at("}"):
                last = self.bump()
                break
            if self.at_kind(TokenKind.EOF) or self.at(*DECL_STARTS):
                self.report("ANN0110", f"expected '}}' to close annotation {name} but found {self.current.describe()}",
                            self.current.span)
                last = self.previous
                break
            try:
                if self.current.kind is TokenKind.KEYWORD and self.current.text in TYPE_KEYWORDS:
                    attributes.append(self.parse_attribute())
                elif self.at(*CONSTRAINT_STARTS):
                    constraints.append(self.parse_constraint())
                else:
                    self.fail(sorted(TYPE_KEYWORDS) + list(CONSTRAINT_STARTS) + ["}"])
            except _Sync:
                self.skip_member()
        return AnnotationDecl(name, runtime, tuple(attributes), tuple(constraints), self.span_between(first, last))

    def parse_attribute(self) -> AttributeDecl:
        first = self.bump()
        attr_type = AttrType(first.text)
        name = self.expect_identifier("attribute name").text
        default = None
        if self.accept("="):
            default = self.parse_literal()
        last = self.expect(";")
        return AttributeDecl(name, attr_type, default, self.span_between(first, last))

    def parse_literal(self) -> Literal:
        negative = self.accept("-") is not None
        tok = self.current
        kind = _LITERAL_KINDS.get(tok.kind)
        if kind is None or (negative and kind not in (LiteralKind.INT, LiteralKind.FLOAT)):
            self.fail(["number"] if negative else ["literal"])
        self.bump()
        text = tok.value if kind is LiteralKind.STRING else tok.text
        return Literal(kind, "-" + text if negative else text)

    def parse_constraint(self) -> Constraint:
        first = self.current
        scope = None
        if self.accept("at"):
            scope = self.parse_target_kind()
            self.expect(":")
        if self.at("require"):
            self.bump()
            polarity, joiner, other = Polarity.REQUIRE, "or", "and"
            all_quantifier = False
            all_tok = self.accept("all")
            if all_tok is not None:
                if scope is None:
                    self.report("ANN0111", "'all' is only allowed after 'at <target>:'", all_tok.span)
                else:
                    all_quantifier = True
        elif self.at("forbid"):
            self.bump()
            polarity, joiner, other = Polarity.FORBID, "and", "or"
            all_quantifier = False
            all_tok = self.accept("all")
            if all_tok is not None:
                self.report("ANN0111", "'all' cannot be used with 'forbid'", all_tok.span)
        else:
            self.fail(["require", "forbid"])
        statements = self.parse_statements(polarity.value, joiner, other)
        last = self.expect(";")
        return Constraint(polarity, tuple(statements), scope, all_quantifier, self.span_between(first, last))

    def parse_statements(self, keyword: str, joiner: str, other: str) -> List[Statement]:
        if self.at(";"):
            self.report("ANN0112", f"'{keyword}' needs at least one statement", self.current.span)
            raise _Sync
        statements = [self.parse_statement()]
        while self.accept(joiner):
            statements.append(self.parse_statement())
        if self.at(other):
            self.fail([joiner, ";"], hint=f"{keyword} statements are joined with '{joiner}'")
        return statements

    def parse_statement(self) -> Statement:
        first = self.current
        ref = None
        if self.at_kind(TokenKind.ANNOTATION_REF):
            ref = self.bump().text[1:]
        modifiers = set()
        while self.current.kind is TokenKind.KEYWORD and self.current.text in MODIFIER_KEYWORDS:
            tok = self.bump()
            mod = Modifier(tok.text)
            if mod in modifiers:
                self.report("ANN0113", f"modifier '{tok.text}' repeated", tok.span)
            elif mod in ACCESS_MODIFIERS and modifiers & ACCESS_MODIFIERS:
                self.report("ANN0113", f"conflicting access modifier '{tok.text}'", tok.span)
            else:
                modifiers.add(mod)
        if not (self.current.kind is TokenKind.KEYWORD and self.current.text in TARGET_KEYWORDS):
            if self.at(";") and first is self.current:
                self.report("ANN0112", "expected a statement", self.current.span)
                raise _Sync
            expected = sorted(TARGET_KEYWORDS)
            if ref is None and not modifiers:
                expected = ["@Annotation"] + sorted(MODIFIER_KEYWORDS) + expected
            self.fail(expected)
        kind = TargetKind(self.bump().text)
        return Statement(kind, frozenset(modifiers), ref, self.span_between(first, self.previous))

    def parse_target_kind(self) -> TargetKind:
        if self.current.kind is TokenKind.KEYWORD and self.current.text in TARGET_KEYWORDS:
            return TargetKind(self.bump().text)
        self.fail(sorted(TARGET_KEYWORDS))


def parse_with_diagnostics(text: str, source_name: str = "<memory>") -> Tuple[AnnotationUnit, List[Diagnostic]]:
    """Parse as far as possible.  The unit is only trustworthy when the list is empty."""
    tokens, diagnostics = scan(text, source_name)
    parser = Parser(tokens, source_name)
    unit = parser.parse_unit()
    return unit, diagnostics + parser.diagnostics


def parse_unit(text: str, source_name: str = "<memory>") -> AnnotationUnit:
    unit, diagnostics = parse_with_diagnostics(text, source_name)
    if diagnostics:
        raise AnnError(diagnostics)
    return unit


def parse_file(path) -> AnnotationUnit:
    with open(path, encoding="utf-8") as f:
        return parse_unit(f.read(), str(path))
