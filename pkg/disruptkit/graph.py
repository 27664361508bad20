"""Module holding the citation graph: its types, ingestion and basic queries.

A graph is built once from a node file (JSON lines) and an edge file
(CSV with header ``citing_id,cited_id``) and never modified afterwards.
Papers are stored sorted by id, so that every iteration over papers, cited
references or citing papers is in ascending id order.

Adjacency is kept as two scipy CSR matrices (citing -> cited and its
transpose). Per-paper neighbour tuples of integer indices are derived lazily
for the set operations of the focal network extraction.
"""

import dataclasses
import functools
import json
import logging
import re
import types
from fractions import Fraction
from typing import FrozenSet, Optional

import numpy as np
import pandas as pd
from scipy import sparse

from . import utils

logger = logging.getLogger(__name__)

# Year value used in the year array for papers without a year.
YEAR_MISSING = 0
# Header of the edge file.
EDGE_COLUMNS = ["citing_id", "cited_id"]
# Keys accepted in a node line.
NODE_KEYS = ("id", "year", "journal", "discipline", "elements")


@dataclasses.dataclass(frozen=True)
class Window:
    """Citation window.

    Parameters
    ----------
    mode : str
        "relative" (years after the focal publication), "absolute" (cutoff
        year) or "unbounded".
    value : int or None
        Window length for relative windows, cutoff year for absolute ones,
        None when unbounded.
    """

    mode: str = "unbounded"
    value: Optional[int] = None

    def __post_init__(self):
        if self.mode == "unbounded":
            if self.value is not None:
                raise ValueError("An unbounded window takes no value.")
        elif self.mode == "relative":
            if not isinstance(self.value, int) or self.value < 1:
                raise ValueError(f"Relative window must be >= 1, got {self.value}.")
        elif self.mode == "absolute":
            if not isinstance(self.value, int) or not utils.check_year(self.value):
                raise ValueError(f"Absolute window must be a year in "
                                 f"[{utils.YEAR_MIN}, {utils.YEAR_MAX}], got {self.value}.")
        else:
            raise ValueError(f"Unknown window mode '{self.mode}'.")

    @classmethod
    def relative(cls, years):
        """Return a relative window of `years` years."""
        return cls("relative", years)

    @classmethod
    def absolute(cls, year):
        """Return an absolute window closing at `year` (inclusive)."""
        return cls("absolute", year)

    @classmethod
    def parse(cls, text):
        """Build a window from its text form.

        Accepted forms are "unbounded", "3" or "rel3" (relative) and
        "abs2010" (absolute).

        Raises
        ------
        ValueError
            When `text` is not a window.
        """
        text = text.strip().lower()
        if text == "unbounded":
            return cls()
        match = re.fullmatch(r"(rel|abs)?(\d+)", text)
        if match is None:
            raise ValueError(f"'{text}' is not a citation window.")
        kind, number = match.groups()
        if kind == "abs":
            return cls.absolute(int(number))
        return cls.relative(int(number))

    def label(self):
        """Return the text form used in output files."""
        if self.mode == "unbounded":
            return "unbounded"
        prefix = "rel" if self.mode == "relative" else "abs"
        return f"{prefix}{self.value}"

    def cutoff(self, origin_year=None):
        """Return the last year (inclusive) a citer may have, None if unbounded.

        Raises
        ------
        utils.NotComputableError
            For a relative window without `origin_year`.
        """
        if self.mode == "unbounded":
            return None
        if self.mode == "absolute":
            return self.value
        if origin_year is None:
            raise utils.NotComputableError("missing_year",
                                           "a relative window needs the focal publication year")
        return origin_year + self.value


@dataclasses.dataclass(frozen=True)
class PaperRecord:
    """Metadata of one paper."""

    id: str
    year: Optional[int] = None
    journal: Optional[str] = None
    discipline: Optional[str] = None
    elements: Optional[FrozenSet[str]] = None

    def to_json(self):
        """Return the node line of this record (without trailing newline)."""
        elements = None if self.elements is None else sorted(self.elements)
        return json.dumps({"id": self.id, "year": self.year, "journal": self.journal,
                           "discipline": self.discipline, "elements": elements},
                          ensure_ascii=False, sort_keys=True)


@dataclasses.dataclass(frozen=True)
class GraphStats:
    """Ingestion statistics of a graph."""

    n_nodes: int = 0
    n_edges: int = 0
    n_duplicate_edges: int = 0
    n_self_loops: int = 0
    n_stubs: int = 0


@dataclasses.dataclass(frozen=True)
class IngestOptions:
    """Options of `load_graph()`.

    normalize_elements: lowercase and trim knowledge elements (default).
    Without it elements are only trimmed.
    """

    normalize_elements: bool = True


@dataclasses.dataclass(frozen=True)
class CoverageReport:
    """How much of a corpus lacks the data indicators depend on."""

    n_papers: int
    n_zero_reference: int
    n_missing_year: int
    n_stubs: int
    n_missing_elements: int

    @property
    def zero_reference_share(self):
        """Share of papers without any indexed reference."""
        if self.n_papers == 0:
            return Fraction(0)
        return Fraction(self.n_zero_reference, self.n_papers)


class CitationGraph:
    """Immutable directed citation graph.

    Parameters
    ----------
    records : sequence of PaperRecord
        One record per paper, sorted by ascending id, ids unique.
    adjacency : scipy.sparse matrix
        Square matrix, entry (i, j) set when paper i cites paper j.
    stats : GraphStats
        Ingestion statistics.
    """

    # Lazily derived attributes, rebuilt after unpickling.
    _CACHED = ("out_lists", "in_lists", "year_list", "papers", "_index", "_venues")

    def __init__(self, records, adjacency, stats=None):
        records = tuple(records)
        ids = tuple(record.id for record in records)
        if any(a >= b for a, b in zip(ids, ids[1:])):
            raise ValueError("Records must be sorted by id and unique.")
        n = len(records)
        out = sparse.csr_matrix(adjacency, dtype=np.int8)
        if out.shape != (n, n):
            raise ValueError(f"Adjacency shape {out.shape} does not match {n} records.")
        out.sum_duplicates()
        out.sort_indices()
        if n and np.any(out.diagonal() != 0):
            raise ValueError("Self-loops are not allowed in a citation graph.")
        in_ = out.T.tocsr()
        in_.sort_indices()
        self._records = records
        self._ids = ids
        self._out = out
        self._in = in_
        self.years = np.array([YEAR_MISSING if r.year is None else r.year for r in records],
                              dtype=np.int32)
        if stats is None:
            stats = GraphStats(n_nodes=n, n_edges=int(out.nnz))
        self.stats = stats

    def __getstate__(self):
        state = self.__dict__.copy()
        for name in self._CACHED:
            state.pop(name, None)
        return state

    def __len__(self):
        return len(self._records)

    def __contains__(self, paper_id):
        return paper_id in self._index

    def __eq__(self, other):
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return (self._records == other._records
                and self.stats == other.stats
                and np.array_equal(self._out.indptr, other._out.indptr)
                and np.array_equal(self._out.indices, other._out.indices))

    __hash__ = None

    def __repr__(self):
        return f"CitationGraph(papers={len(self)}, edges={self.n_edges})"

    @property
    def ids(self):
        """Tuple of paper ids, ascending."""
        return self._ids

    @property
    def records(self):
        """Tuple of paper records, in id order."""
        return self._records

    @property
    def n_edges(self):
        """Number of citation links."""
        return int(self._out.nnz)

    @property
    def adjacency(self):
        """CSR matrix citing -> cited (read only by convention)."""
        return self._out

    @functools.cached_property
    def _index(self):
        return {paper_id: i for i, paper_id in enumerate(self._ids)}

    @functools.cached_property
    def papers(self):
        """Read-only mapping paper id -> PaperRecord."""
        return types.MappingProxyType(dict(zip(self._ids, self._records)))

    @functools.cached_property
    def out_lists(self):
        """Per paper index, the tuple of indices of its cited references."""
        return _csr_to_lists(self._out)

    @functools.cached_property
    def in_lists(self):
        """Per paper index, the tuple of indices of its citing papers."""
        return _csr_to_lists(self._in)

    @functools.cached_property
    def year_list(self):
        """Per paper index, the publication year (YEAR_MISSING when absent)."""
        return self.years.tolist()

    def index(self, paper_id):
        """Return the integer index of `paper_id`.

        Raises
        ------
        utils.UnknownPaperError
            When the paper is not in the graph.
        """
        try:
            return self._index[paper_id]
        except KeyError:
            raise utils.UnknownPaperError([paper_id]) from None

    def record(self, paper_id):
        """Return the PaperRecord of `paper_id`."""
        return self._records[self.index(paper_id)]

    @functools.cached_property
    def _venues(self):
        groups = {}
        for i, record in enumerate(self._records):
            if record.journal is not None and record.year is not None:
                groups.setdefault((record.journal, record.year), []).append(i)
        return {key: tuple(members) for key, members in groups.items()}

    def venue_members(self, journal, year):
        """Return the indices of the papers of `journal` published in `year`."""
        return self._venues.get((journal, year), ())

    def references(self, paper_id):
        """Return the cited references of `paper_id`, ascending by id."""
        ids = self._ids
        return tuple(ids[j] for j in self.out_lists[self.index(paper_id)])

    def citers(self, paper_id):
        """Return the papers citing `paper_id`, ascending by id."""
        ids = self._ids
        return tuple(ids[j] for j in self.in_lists[self.index(paper_id)])

    def edges(self):
        """Iterate over (citing, cited) id pairs, sorted."""
        ids = self._ids
        for i, refs in enumerate(self.out_lists):
            for j in refs:
                yield ids[i], ids[j]

    def out_degrees(self):
        """Numpy array of reference counts, in id order."""
        return np.diff(self._out.indptr)

    def in_degrees(self):
        """Numpy array of (unwindowed) citation counts, in id order."""
        return np.diff(self._in.indptr)


def _csr_to_lists(matrix):
    """Split a CSR matrix into a list of per-row tuples of column indices."""
    indptr = matrix.indptr.tolist()
    indices = matrix.indices.tolist()
    return [tuple(indices[indptr[i]:indptr[i + 1]]) for i in range(len(indptr) - 1)]


def _parse_node_line(line, lineno, source, options):
    """Turn one node line into a PaperRecord.

    Raises
    ------
    utils.GraphFormatError
        When the line is not a valid node object.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise utils.GraphFormatError(f"invalid JSON ({e.msg})", source, lineno) from e
    if not isinstance(obj, dict):
        raise utils.GraphFormatError("a node line must be a JSON object", source, lineno)
    unknown = set(obj) - set(NODE_KEYS)
    if unknown:
        raise utils.GraphFormatError(f"unexpected key(s) {sorted(unknown)}", source, lineno)
    paper_id = obj.get("id")
    if not utils.check_paper_id(paper_id):
        raise utils.GraphFormatError(f"invalid paper id {paper_id!r}", source, lineno)
    year = obj.get("year")
    if not utils.check_year(year):
        raise utils.GraphFormatError(f"invalid year {year!r} for {paper_id}", source, lineno)
    fields = {}
    for key in ("journal", "discipline"):
        value = obj.get(key)
        if value is not None:
            if not isinstance(value, str):
                raise utils.GraphFormatError(f"{key} of {paper_id} must be text",
                                             source, lineno)
            value = value.strip() or None
        fields[key] = value
    elements = obj.get("elements")
    if elements is not None:
        if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
            raise utils.GraphFormatError(f"elements of {paper_id} must be a list of text",
                                         source, lineno)
        if options.normalize_elements:
            cleaned = (utils.normalize_element(e) for e in elements)
        else:
            cleaned = (e.strip() for e in elements)
        elements = frozenset(e for e in cleaned if e)
    return PaperRecord(paper_id, year, fields["journal"], fields["discipline"], elements)


def read_nodes(nodes_source, options=None):
    """Read a JSON-lines node source.

    Blank lines are skipped. A paper listed twice with identical metadata is
    kept once.

    Parameters
    ----------
    nodes_source : readable text stream
    options : IngestOptions

    Returns
    -------
    dict
        paper id -> PaperRecord.

    Raises
    ------
    utils.GraphFormatError
        On a malformed line or a duplicate id with conflicting metadata.
    """
    options = options or IngestOptions()
    source = getattr(nodes_source, "name", "<nodes>")
    records = {}
    for lineno, line in enumerate(nodes_source, start=1):
        if not line.strip():
            continue
        record = _parse_node_line(line, lineno, source, options)
        previous = records.get(record.id)
        if previous is not None:
            if previous != record:
                raise utils.GraphFormatError(
                    f"duplicate node id {record.id} with conflicting metadata",
                    source, lineno)
            logger.debug("Identical duplicate node line for %s ignored.", record.id)
            continue
        records[record.id] = record
    return records


def _invalid_id_mask(column):
    """Boolean mask of the entries of `column` that are not valid paper ids."""
    text = column.astype("string")
    valid = text.notna() & (text.str.len() > 0) & (text.str.strip() == text)
    return ~valid.fillna(False).to_numpy(dtype=bool)


def read_edges(edges_source):
    """Read a CSV edge source into a pandas dataframe.

    Parameters
    ----------
    edges_source : readable text stream

    Returns
    -------
    pandas dataframe
        Columns "citing_id", "cited_id", one row per line.

    Raises
    ------
    utils.GraphFormatError
        On a bad header or a malformed line.
    """
    source = getattr(edges_source, "name", "<edges>")
    try:
        df = pd.read_csv(edges_source, dtype=str, keep_default_na=False,
                         na_filter=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError as e:
        raise utils.GraphFormatError("missing header 'citing_id,cited_id'", source, 1) from e
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        lineno = int(match.group(1)) if match else None
        raise utils.GraphFormatError("malformed edge line", source, lineno) from e
    if list(df.columns) != EDGE_COLUMNS:
        raise utils.GraphFormatError(f"header must be '{','.join(EDGE_COLUMNS)}', "
                                     f"got '{','.join(map(str, df.columns))}'", source, 1)
    bad = _invalid_id_mask(df["citing_id"]) | _invalid_id_mask(df["cited_id"])
    if bad.any():
        # Row 0 is on line 2, after the header.
        lineno = int(np.flatnonzero(bad)[0]) + 2
        raise utils.GraphFormatError("malformed edge line", source, lineno)
    return df


def build_graph(records, edges):
    """Assemble a CitationGraph from node records and an edge dataframe.

    Self-loops are dropped, duplicate edges collapsed and unknown endpoints
    turned into stub records (no year, no metadata). All of them are counted
    in the graph statistics.

    Parameters
    ----------
    records : dict
        paper id -> PaperRecord.
    edges : pandas dataframe
        Columns "citing_id", "cited_id".

    Returns
    -------
    CitationGraph
    """
    endpoints = pd.unique(pd.concat([edges["citing_id"], edges["cited_id"]], ignore_index=True))
    stub_ids = sorted(set(endpoints.tolist()) - set(records))
    for paper_id in stub_ids:
        records[paper_id] = PaperRecord(paper_id)
    if stub_ids:
        logger.info("%d paper(s) cited or citing without a node line, stubs created.",
                    len(stub_ids))
    ids = sorted(records)
    n = len(ids)
    index = pd.Index(ids)
    src = index.get_indexer(edges["citing_id"]).astype(np.int64)
    dst = index.get_indexer(edges["cited_id"]).astype(np.int64)

    loops = src == dst
    n_self_loops = int(loops.sum())
    if n_self_loops:
        logger.info("%d self-citation link(s) dropped.", n_self_loops)
    src = src[~loops]
    dst = dst[~loops]

    keys = np.unique(src * max(n, 1) + dst)
    n_duplicates = len(src) - len(keys)
    src = keys // max(n, 1)
    dst = keys % max(n, 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(np.bincount(src, minlength=n))
    adjacency = sparse.csr_matrix((np.ones(len(dst), dtype=np.int8),
                                   dst.astype(np.int32), indptr), shape=(n, n))
    stats = GraphStats(n_nodes=n, n_edges=int(len(dst)), n_duplicate_edges=int(n_duplicates),
                       n_self_loops=n_self_loops, n_stubs=len(stub_ids))
    return CitationGraph((records[paper_id] for paper_id in ids), adjacency, stats)


def load_graph(nodes_source, edges_source, options=None):
    """Read, validate and assemble a citation graph.

    Parameters
    ----------
    nodes_source : readable text stream
        JSON lines, one object per paper with keys id, year, journal,
        discipline and elements.
    edges_source : readable text stream
        CSV with header ``citing_id,cited_id``.
    options : IngestOptions

    Returns
    -------
    CitationGraph

    Raises
    ------
    utils.GraphFormatError
        On a malformed line (with its line number) or a duplicate node id
        with conflicting metadata.
    """
    records = read_nodes(nodes_source, options)
    edges = read_edges(edges_source)
    graph = build_graph(records, edges)
    logger.info("Graph has %d papers (%d stubs) and %d citation links "
                "(%d duplicates collapsed, %d self-loops dropped).",
                graph.stats.n_nodes, graph.stats.n_stubs, graph.stats.n_edges,
                graph.stats.n_duplicate_edges, graph.stats.n_self_loops)
    return graph


def citation_count(graph, paper, window, origin_year=None):
    """Return the number of distinct citers of `paper` inside `window`.

    Citers without a year only count under an unbounded window.

    Parameters
    ----------
    graph : CitationGraph
    paper : str
        Paper id.
    window : Window
    origin_year : int or None
        Year relative windows are resolved against.

    Returns
    -------
    int

    Raises
    ------
    utils.UnknownPaperError
        When `paper` is not in the graph.
    utils.NotComputableError
        For a relative window without `origin_year`.
    """
    i = graph.index(paper)
    cutoff = window.cutoff(origin_year)
    citers = graph.in_lists[i]
    if cutoff is None:
        return len(citers)
    years = graph.year_list
    return sum(1 for c in citers if years[c] != YEAR_MISSING and years[c] <= cutoff)


def coverage_report(graph):
    """Count the papers lacking references, years or knowledge elements.

    Parameters
    ----------
    graph : CitationGraph

    Returns
    -------
    CoverageReport
    """
    records = graph.records
    return CoverageReport(
        n_papers=len(records),
        n_zero_reference=int(np.count_nonzero(graph.out_degrees() == 0)),
        n_missing_year=int(np.count_nonzero(graph.years == YEAR_MISSING)),
        n_stubs=graph.stats.n_stubs,
        n_missing_elements=sum(1 for r in records if not r.elements),
    )
