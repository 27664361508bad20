"""
Unit tests for disruptkit.

Test functions from module vectors.
"""

import pathlib
from fractions import Fraction

import pytest

from disruptkit import indicators
from disruptkit import vectors


DIR_DATA = "test_data"
PATH_ROOT_DATA = pathlib.Path(__file__).parent / DIR_DATA


class TestReadVectors():
    """Test class for read_vectors()."""

    def test_shipped(self):
        """Every shipped file is read, keyed by stem."""
        suites = vectors.read_vectors()
        assert set(suites) == {"nr_inconsistency", "disruption_consolidation",
                               "originality_network"}
        assert sum(len(content["cases"]) for content in suites.values()) == 12

    @pytest.mark.parametrize('filename', ["bad_vector.json", "broken_vector.json"])
    def test_bad_format(self, filename):
        """Test for files without cases or with invalid json.

        Parameters
        ----------
        filename : str
            Vector file in the test data directory.
        """
        path = PATH_ROOT_DATA / filename
        with pytest.raises(ValueError) as err:
            vectors.read_vectors([path])
        assert f"{path} is in a bad format." in str(err.value)


class TestVectorResult():
    """Test class for VectorResult."""

    def test_tolerance(self):
        """Half a unit of the last printed digit."""
        result = vectors.VectorResult("s", "c", "dep", Fraction(5, 6), Fraction(5, 6), "0.83")
        assert result.tolerance == Fraction(1, 200)
        assert result.passed

    @pytest.mark.parametrize('actual, printed', [
        (Fraction(5, 6), "0.84"),
        (Fraction(4, 5), "0.83"),
        (None, "0.83"),
    ])
    def test_failed(self, actual, printed):
        """Wrong exact value, wrong printed value or not computable.

        Parameters
        ----------
        actual : Fraction or None
            Computed value.
        printed : str
            Printed value of the case.
        """
        result = vectors.VectorResult("s", "c", "dep", Fraction(5, 6), actual, printed)
        assert not result.passed


def test_counts_network():
    """Counts networks realise N_F, N_B and N_R."""
    graph = vectors.case_graph({"counts": {"n_f": 3, "n_b": 2, "n_r": 4}})
    assert len(graph) == 1 + 1 + 3 + 2 + 4
    record = indicators.score_or_flag(graph, vectors.FOCAL, indicators.IndicatorConfig())
    assert record.components["n_f"] == 3
    assert record.components["n_b"] == 2
    assert record.components["n_r"] == 4


def test_run_vectors():
    """Every golden vector passes."""
    results = vectors.run_vectors()
    assert len(results) == 12
    failed = [(result.suite, result.case) for result in results if not result.passed]
    assert failed == []


def test_report():
    """One line per case, then the total."""
    text = vectors.report(vectors.run_vectors())
    lines = text.splitlines()
    assert len(lines) == 13
    assert all(line.startswith("PASS  ") for line in lines[:-1])
    assert lines[-1] == "12/12 golden vectors passed."
    assert "(printed 0.083)" in lines[0]
    assert "nr_inconsistency" in lines[4]
