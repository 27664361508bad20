"""
Module for the golden test vectors.

Vectors are json files shipped inside the package. Each one holds a
description and a list of cases; a case describes a small network (either
F/B/R counts or an explicit edge list around the focal paper "FP"), an
indicator configuration, the exact expected value and the value as it is
usually printed. A case passes when the computed value equals the expected
one exactly and lies within half a unit of the last printed digit.
"""

import dataclasses
import io
import json
import logging
import pathlib
from decimal import Decimal
from fractions import Fraction

from . import graph as graph_store
from . import indicators
from . import oracle
from . import utils

logger = logging.getLogger(__name__)

# Directory name of the json files
VECTOR_DIR = "vectors"
# Absolute path of the json files
PATH_VECTORS = pathlib.Path(__file__).parent / VECTOR_DIR
# Focal paper of every vector network.
FOCAL = "FP"
YEAR = 2000


@dataclasses.dataclass(frozen=True)
class VectorResult:
    """Outcome of one golden case."""

    suite: str
    case: str
    indicator: str
    expected: Fraction
    actual: object
    printed: str

    @property
    def tolerance(self):
        """Half a unit of the last printed digit."""
        exponent = Decimal(self.printed).as_tuple().exponent
        return Fraction(1, 2) * Fraction(10) ** exponent

    @property
    def passed(self):
        if self.actual is None:
            return False
        return (self.actual == self.expected
                and abs(self.actual - Fraction(self.printed)) <= self.tolerance)


def read_vectors(filenames=None):
    """Read golden vector files.

    Parameters
    ----------
    filenames : list of str
        Defaults to every json file shipped with the package.

    Returns
    -------
    dict
        Suite name (file stem) -> content.

    Raises
    ------
    ValueError
        When a file doesn't have a correct format.
    """
    if filenames is None:
        filenames = sorted(PATH_VECTORS.glob("*.json"))
    suites = {}
    for filename in filenames:
        path = pathlib.Path(filename)
        with open(path, encoding="utf-8") as json_file:
            try:
                content = json.load(json_file)
            except json.JSONDecodeError as e:
                raise ValueError(f"{path} is in a bad format.") from e
        cases = content.get("cases") if isinstance(content, dict) else None
        if not isinstance(cases, list) or not all(
                {"name", "network", "config", "expected", "printed"} <= set(case)
                for case in cases):
            raise ValueError(f"{path} is in a bad format.")
        suites[path.stem] = content
    return suites


def counts_network(n_f, n_b, n_r):
    """Build a raw corpus realising given N_F, N_B and N_R around "FP".

    FP cites one reference; F citers cite FP only, B citers cite FP and the
    reference, R papers cite the reference only.
    """
    edges = [(FOCAL, "REF")]
    edges += [(f"F{i:04d}", FOCAL) for i in range(n_f)]
    for i in range(n_b):
        edges += [(f"B{i:04d}", FOCAL), (f"B{i:04d}", "REF")]
    edges += [(f"X{i:04d}", "REF") for i in range(n_r)]
    return _with_years(edges)


def _with_years(edges):
    papers = {paper for edge in edges for paper in edge}
    return oracle.RawEdgeList(tuple(edges), {paper: YEAR for paper in sorted(papers)})


def case_graph(network):
    """Return the CitationGraph of a case network."""
    if "counts" in network:
        counts = network["counts"]
        raw = counts_network(counts["n_f"], counts["n_b"], counts["n_r"])
    else:
        raw = _with_years([tuple(edge) for edge in network["edges"]])
    nodes, edges = oracle.to_sources(raw)
    return graph_store.load_graph(io.StringIO(nodes), io.StringIO(edges))


def run_vectors(filenames=None):
    """Evaluate every golden case.

    Returns
    -------
    list of VectorResult
        In file then case order.
    """
    results = []
    for suite, content in read_vectors(filenames).items():
        for case in content["cases"]:
            config = indicators.IndicatorConfig(**case["config"])
            graph = case_graph(case["network"])
            record = indicators.score_or_flag(graph, FOCAL, config)
            result = VectorResult(suite, case["name"], config.label(),
                                  Fraction(case["expected"]), record.value, case["printed"])
            logger.debug("%s / %s: %s", suite, case["name"],
                         "PASS" if result.passed else "FAIL")
            results.append(result)
    return results


def report(results):
    """Return the text report of `run_vectors()` results, one line per case."""
    lines = []
    for result in results:
        actual = "NA" if result.actual is None else utils.format_decimal(result.actual)
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status}  {result.suite:<26s} {result.case:<18s} "
                     f"{result.indicator:<8s} {actual:>16s}  (printed {result.printed})")
    n_passed = sum(1 for result in results if result.passed)
    lines.append(f"{n_passed}/{len(results)} golden vectors passed.")
    return "\n".join(lines) + "\n"
