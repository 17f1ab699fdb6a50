from __future__ import annotations

import pytest

from stringtop.textio import DEFAULT_SEED, FormatError, iter_statements


def test_default_seed_is_fixed():
    assert DEFAULT_SEED == 1729


def test_format_error_carries_line_number():
    err = FormatError(7, "bad token")
    assert err.lineno == 7
    assert err.message == "bad token"
    assert str(err) == "line 7: bad token"
    assert isinstance(err, ValueError)


def test_iter_statements_tokenizes_by_line():
    text = "alpha 1 2\n\n  beta   x\t y\n"
    assert list(iter_statements(text)) == [
        (1, ["alpha", "1", "2"]),
        (3, ["beta", "x", "y"]),
    ]


def test_iter_statements_strips_comments():
    text = "# full comment\nkeep 1 # trailing\n#\n   # indented\nlast\n"
    assert list(iter_statements(text)) == [
        (2, ["keep", "1"]),
        (5, ["last"]),
    ]


def test_line_numbers_survive_blank_runs():
    text = "\n\n\nstmt\n"
    assert list(iter_statements(text)) == [(4, ["stmt"])]


def test_empty_text_yields_nothing():
    assert list(iter_statements("")) == []
