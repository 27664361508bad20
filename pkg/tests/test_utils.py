"""
Unit tests for disruptkit.

Test functions from module utils.
"""

import io
from fractions import Fraction

import pytest

from disruptkit import utils


@pytest.mark.parametrize('value, text', [
    (Fraction(4, 5), "0.800000000000"),
    (Fraction(-2, 5), "-0.400000000000"),
    (Fraction(1, 3), "0.333333333333"),
    (Fraction(2, 3), "0.666666666667"),
    (Fraction(5), "5.00000000000"),
    (0, "0.00000000000"),
    (Fraction(1, 12), "0.0833333333333"),
])
def test_format_decimal(value, text):
    """Test for format_decimal().

    Parameters
    ----------
    value : Fraction
        Value to write.
    text : str
        Expected text.
    """
    assert utils.format_decimal(value) == text


@pytest.mark.parametrize('value, text', [
    (Fraction(90), "90"),
    (Fraction(0), "0"),
    (Fraction(1, 2), "0.500000000000"),
    (None, ""),
])
def test_format_component(value, text):
    """Test for format_component()."""
    assert utils.format_component(value) == text


@pytest.mark.parametrize('year, valid', [
    (None, True),
    (2000, True),
    (1500, True),
    (2100, True),
    (1499, False),
    (2101, False),
    (True, False),
    ("2000", False),
    (2000.0, False),
])
def test_check_year(year, valid):
    """Test for check_year()."""
    assert utils.check_year(year) is valid


@pytest.mark.parametrize('paper_id, valid', [
    ("W123", True),
    ("10.1000/xyz", True),
    ("", False),
    (" W1", False),
    (12, False),
    (None, False),
])
def test_check_paper_id(paper_id, valid):
    """Test for check_paper_id()."""
    assert utils.check_paper_id(paper_id) is valid


def test_as_fraction():
    """Test for as_fraction()."""
    assert utils.as_fraction(0.5) == Fraction(1, 2)
    assert utils.as_fraction("0.5") == Fraction(1, 2)
    assert utils.as_fraction(0.1) == Fraction(1, 10)
    assert utils.as_fraction(3) == 3
    assert utils.as_fraction("1/3") == Fraction(1, 3)


def test_normalize_element():
    """Test for normalize_element()."""
    assert utils.normalize_element("  Citation Analysis ") == "citation analysis"


def test_read_id_list():
    """Test for read_id_list()."""
    stream = io.StringIO("# focal papers\nW2\n\n  W1 \nW2\n")
    assert utils.read_id_list(stream) == ["W2", "W1"]


class TestErrors():
    """Test class for the error types."""

    def test_graph_format_error(self):
        """GraphFormatError carries the source and line."""
        err = utils.GraphFormatError("malformed edge line", "edges.csv", 3)
        assert err.line == 3
        assert str(err) == "edges.csv, line 3: malformed edge line"
        assert isinstance(err, ValueError)

    def test_unknown_paper_error(self):
        """UnknownPaperError lists sorted unique ids."""
        err = utils.UnknownPaperError(["W9", "W1", "W9"])
        assert err.ids == ["W1", "W9"]
        assert str(err) == "unknown paper id(s): W1, W9"

    def test_unknown_paper_error_long(self):
        """Long id lists are cut in the message."""
        err = utils.UnknownPaperError([f"W{i:03d}" for i in range(25)])
        assert len(err.ids) == 25
        assert "(25 in total)" in str(err)

    def test_not_computable_error(self):
        """NotComputableError keeps its machine readable reason."""
        err = utils.NotComputableError("uncited", "W1 is not cited")
        assert err.reason == "uncited"
        assert str(err) == "uncited: W1 is not cited"

    def test_cache_errors(self):
        """Cache errors share a base class."""
        assert issubclass(utils.CacheVersionError, utils.CacheFormatError)
        assert issubclass(utils.CacheChecksumError, utils.CacheFormatError)
