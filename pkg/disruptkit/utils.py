"""Module for error types and various control functions."""

import decimal
import logging
from fractions import Fraction

logger = logging.getLogger(__name__)

# Number of significant digits used when scores are written out.
SIGNIFICANT_DIGITS = 12
# Plausible publication years, anything outside is data corruption.
YEAR_MIN = 1500
YEAR_MAX = 2100


class GraphFormatError(ValueError):
    """Raised when a node or edge source does not follow its format.

    Parameters
    ----------
    message : str
        What went wrong.
    source : str
        Name of the faulty source (file name or "<nodes>", "<edges>").
    line : int or None
        1-based line number of the faulty line, if any.
    """

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}"
            if line is not None:
                where += f", line {line}"
            where += ": "
        super().__init__(f"{where}{message}")


class CacheFormatError(ValueError):
    """Raised when a graph cache cannot be read back."""


class CacheVersionError(CacheFormatError):
    """Raised when a graph cache has unexpected magic bytes."""


class CacheChecksumError(CacheFormatError):
    """Raised when a graph cache is truncated or its checksum does not match."""


class UnknownPaperError(KeyError):
    """Raised when one or several paper ids are not in the graph.

    Parameters
    ----------
    ids : iterable of str
        The unknown ids. They are stored sorted in `self.ids`.
    """

    def __init__(self, ids):
        self.ids = sorted(set(ids))
        shown = ", ".join(self.ids[:20])
        if len(self.ids) > 20:
            shown += f", ... ({len(self.ids)} in total)"
        super().__init__(f"unknown paper id(s): {shown}")

    def __str__(self):
        return self.args[0]


class NotComputableError(ValueError):
    """Raised when an indicator is undefined for a network.

    This is never the same as a score of 0 or 1: batch code turns it into a
    flagged record with an absent value.

    Parameters
    ----------
    reason : str
        Machine readable flag, e.g. "empty_denominator" or
        "zero_reference_artifact".
    detail : str
        Optional human readable detail.
    """

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        message = reason if not detail else f"{reason}: {detail}"
        super().__init__(message)


class ConfigError(ValueError):
    """Raised when an indicator configuration is invalid or not applicable."""


def check_paper_id(paper_id):
    """Check that `paper_id` is a usable paper identifier.

    Parameters
    ----------
    paper_id : object
        The candidate identifier.

    Returns
    -------
    bool
        True if `paper_id` is a non-empty str without surrounding whitespace.
    """
    return (isinstance(paper_id, str) and paper_id != ""
            and paper_id == paper_id.strip())


def check_year(year):
    """Check that `year` is absent or a plausible publication year.

    Parameters
    ----------
    year : int or None

    Returns
    -------
    bool
        True if valid.
    """
    if year is None:
        return True
    # bool is an int subclass, but never a year.
    if isinstance(year, bool) or not isinstance(year, int):
        return False
    return YEAR_MIN <= year <= YEAR_MAX


def normalize_element(element):
    """Return the comparison form of a knowledge element (trimmed, lowercase)."""
    return element.strip().lower()


def as_fraction(value):
    """Convert an int, str or Fraction to a Fraction exactly.

    Floats are converted through their shortest decimal representation so
    that 0.5 and "0.5" give the same Fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def format_decimal(value, digits=SIGNIFICANT_DIGITS):
    """Format a rational as a fixed-point decimal with `digits` significant digits.

    Integers stay integers only through the caller: this function always
    writes the full number of significant digits, e.g. Fraction(4, 5) gives
    "0.800000000000".

    Parameters
    ----------
    value : Fraction or int
    digits : int
        Number of significant digits.

    Returns
    -------
    str
        The formatted value.
    """
    value = as_fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        number = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
        if number.is_zero():
            exponent = 0
        else:
            exponent = number.adjusted()
        places = max(0, digits - 1 - exponent)
        number = number.quantize(decimal.Decimal(1).scaleb(-places))
    return format(number, "f")


def format_component(value):
    """Format a score component: integers as integers, other rationals as decimals."""
    if value is None:
        return ""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return format_decimal(value)


def read_id_list(stream):
    """Read paper ids, one per line, from a text stream.

    Blank lines and lines starting with '#' are ignored; surrounding
    whitespace is stripped.

    Parameters
    ----------
    stream : readable text stream

    Returns
    -------
    list of str
        The ids in file order, duplicates removed.
    """
    seen = set()
    ids = []
    for line in stream:
        paper_id = line.strip()
        if not paper_id or paper_id.startswith("#"):
            continue
        if paper_id not in seen:
            seen.add(paper_id)
            ids.append(paper_id)
    return ids
