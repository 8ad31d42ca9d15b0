"""Small utilities shared by the test modules."""


def offset_of(text, span):
    """Character offset of a 1-based line/column position; enforces bounds."""
    lines = text.split("\n")
    assert 1 <= span.line <= len(lines), span
    assert 1 <= span.column <= len(lines[span.line - 1]) + 1, span
    return sum(len(l) + 1 for l in lines[: span.line - 1]) + span.column - 1


def span_text(text, span):
    start = offset_of(text, span)
    assert start + span.length <= len(text), span
    return text[start:start + span.length]


def apply_removal(text, span):
    start = offset_of(text, span)
    return text[:start] + text[start + span.length:]
