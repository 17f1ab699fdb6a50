"""Line-oriented tokenizing shared by the text formats.

Every format in this package is whitespace tokenized, one statement per
line, with ``#`` starting a comment that runs to the end of the line.
Parse failures carry the 1-based line number so the CLI can report
``line N: message`` and exit with status 2.
"""

from __future__ import annotations

__all__ = ["FormatError", "iter_statements"]


DEFAULT_SEED = 1729


class FormatError(ValueError):
    """A malformed input file, pinned to the offending line."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        self.message = message
        super().__init__(f"line {lineno}: {message}")


def iter_statements(text):
    """Yield (lineno, tokens) for every non-empty statement in *text*."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = body.split()
        if tokens:
            yield lineno, tokens
