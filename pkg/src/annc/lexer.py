"""Tokenizer for ``.ann`` sources."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Tuple

from .core import AnnError, Diagnostic, SourceSpan, error


class TokenKind(str, enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    ANNOTATION_REF = "annotation_ref"
    INT_LITERAL = "int_literal"
    FLOAT_LITERAL = "float_literal"
    STRING_LITERAL = "string_literal"
    BOOLEAN_LITERAL = "boolean_literal"
    PUNCTUATION = "punctuation"
    EOF = "eof"


STRUCTURE_KEYWORDS = frozenset(
    {"package", "annotation", "runtime", "require", "forbid", "at", "all", "and", "or"}
)
TYPE_KEYWORDS = frozenset({"String", "int", "float", "boolean", "Class"})
TARGET_KEYWORDS = frozenset({"class", "interface", "enum", "field", "method", "constructor"})
MODIFIER_KEYWORDS = frozenset({"public", "protected", "private", "static", "final", "abstract"})
BOOLEAN_WORDS = frozenset({"true", "false"})
KEYWORDS = STRUCTURE_KEYWORDS | TYPE_KEYWORDS | TARGET_KEYWORDS | MODIFIER_KEYWORDS

PUNCTUATION = frozenset(";{}=:.-")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan
    offset: int
    value: str = ""
    """Decoded payload; differs from ``text`` only for string literals."""

    @property
    def end(self) -> int:
        return self.offset + len(self.text)

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of file"
        return repr(self.text)


def _is_digit(ch: str) -> bool:
    return ch != "" and ch in "0123456789"


def _is_ident_start(ch: str) -> bool:
    return ch != "" and (ch.isalpha() or ch in "_$")


def _is_ident_part(ch: str) -> bool:
    return ch != "" and (ch.isalnum() or ch in "_$")


class _Scanner:
    def __init__(self, text: str, source_name: str):
        self.text = text
        self.name = source_name
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: List[Token] = []
        self.diagnostics: List[Diagnostic] = []

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def span_from(self, line: int, col: int, start: int) -> SourceSpan:
        return SourceSpan(self.name, line, col, self.pos - start)

    def emit(self, kind: TokenKind, start: int, line: int, col: int, value: str = None):
        text = self.text[start:self.pos]
        self.tokens.append(
            Token(kind, text, self.span_from(line, col, start), start, text if value is None else value)
        )

    def run(self) -> Tuple[List[Token], List[Diagnostic]]:
        while self.pos < len(self.text):
            ch = self.peek()
            if ch in " \t\r\n\f\ufeff":
                self.advance()
            elif ch == "/" and self.peek(1) == "/":
                while self.pos < len(self.text) and self.peek() != "\n":
                    self.advance()
            else:
                self.scan_token()
        self.tokens.append(Token(TokenKind.EOF, "", SourceSpan(self.name, self.line, self.col, 0), self.pos))
        return self.tokens, self.diagnostics

    def scan_token(self):
        start, line, col = self.pos, self.line, self.col
        ch = self.peek()
        if _is_ident_start(ch):
            while _is_ident_part(self.peek()):
                self.advance()
            word = self.text[start:self.pos]
            if word in BOOLEAN_WORDS:
                kind = TokenKind.BOOLEAN_LITERAL
            elif word in KEYWORDS:
                kind = TokenKind.KEYWORD
            else:
                kind = TokenKind.IDENTIFIER
            self.emit(kind, start, line, col)
        elif ch == "@":
            self.advance()
            if not _is_ident_start(self.peek()):
                self.diagnostics.append(
                    error("ANN0101", "'@' must be followed by an annotation name", self.span_from(line, col, start))
                )
                return
            while _is_ident_part(self.peek()):
                self.advance()
            self.emit(TokenKind.ANNOTATION_REF, start, line, col)
        elif _is_digit(ch):
            self.scan_number(start, line, col)
        elif ch == '"':
            self.scan_string(start, line, col)
        elif ch in PUNCTUATION:
            self.advance()
            self.emit(TokenKind.PUNCTUATION, start, line, col)
        else:
            self.advance()
            self.diagnostics.append(
                error("ANN0101", f"unexpected character {ch!r}", self.span_from(line, col, start))
            )

    def scan_number(self, start, line, col):
        while _is_digit(self.peek()):
            self.advance()
        kind = TokenKind.INT_LITERAL
        if self.peek() == "." and _is_digit(self.peek(1)):
            self.advance()
            while _is_digit(self.peek()):
                self.advance()
            kind = TokenKind.FLOAT_LITERAL
        if _is_ident_part(self.peek()):
            # 52.3f, 1e5, 0x1F: none of these are Ann literals
            while _is_ident_part(self.peek()):
                self.advance()
            self.diagnostics.append(
                error(
                    "ANN0101",
                    f"malformed number {self.text[start:self.pos]!r} (suffixes and exponents are not allowed)",
                    self.span_from(line, col, start),
                )
            )
            return
        self.emit(kind, start, line, col)

    def scan_string(self, start, line, col):
        self.advance()
        chars = []
        while True:
            ch = self.peek()
            if ch == "" or ch == "\n":
                self.diagnostics.append(
                    error("ANN0102", "unterminated string literal", self.span_from(line, col, start))
                )
                return
            self.advance()
            if ch == '"':
                break
            if ch == "\\":
                nxt = self.peek()
                if nxt in ('"', "\\"):
                    self.advance()
                    chars.append(nxt)
                    continue
                esc_line, esc_col = self.line, self.col - 1
                self.diagnostics.append(
                    error(
                        "ANN0103",
                        "unsupported escape sequence (only \\\" and \\\\ are allowed)",
                        SourceSpan(self.name, esc_line, esc_col, 1 if nxt in ("", "\n") else 2),
                    )
                )
                continue
            chars.append(ch)
        self.emit(TokenKind.STRING_LITERAL, start, line, col, "".join(chars))


def scan(text: str, source_name: str = "<memory>") -> Tuple[List[Token], List[Diagnostic]]:
    """Tokenize without raising: bad characters are reported and skipped."""
    return _Scanner(text, source_name).run()


def tokenize(text: str, source_name: str = "<memory>") -> List[Token]:
    tokens, diagnostics = scan(text, source_name)
    if diagnostics:
        raise AnnError(diagnostics)
    return tokens
