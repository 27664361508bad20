"""Module extracting the neighbourhood of a focal paper.

For one focal paper (FP) and one citation window, the network is split
into::

    F: papers citing FP and none of the pool references
    B: papers citing FP and at least one pool reference
    R: papers citing at least one pool reference but not FP

The pool is either FP's own reference list or the field pool (the
references of every paper of the same journal and year). Everything the
indicator formulas need is stored on a FocalNetwork: coupling links per
citer, the R-side citers of every reference, windowed reference citation
counts and the reference counts of the citers.

Networks are plain values. The transforms below (reference exclusion,
link thresholds) return new networks and never touch the graph.
"""

import dataclasses
import itertools
import logging
import math
from typing import FrozenSet, Mapping, Optional, Tuple

from . import graph as graph_store
from . import utils

logger = logging.getLogger(__name__)

OWN_REFERENCES = "own_references"
FIELD_POOL = "field_pool"
RECLASSIFY = "reclassify"
EXCLUDE = "exclude"
ENTITY = "entity"
RELATION = "relation"


@dataclasses.dataclass(frozen=True)
class ReferencePool:
    """Set of references a focal paper is compared against."""

    refs: Tuple[str, ...]
    provenance: str = OWN_REFERENCES
    journal: Optional[str] = None
    year: Optional[int] = None


@dataclasses.dataclass(frozen=True)
class CiterLink:
    """A paper citing the focal paper, with the pool references it also cites."""

    citer: str
    coupled_refs: FrozenSet[str]

    @property
    def n_links(self):
        """Number of bibliographic coupling links of this citer."""
        return len(self.coupled_refs)


@dataclasses.dataclass(frozen=True)
class FocalNetwork:
    """Windowed tripartite network of one focal paper.

    `link_threshold` is the minimal number of coupling links a citer needs to
    count in B. It is 1 for the plain network; citers below it count in F.
    """

    fp: str
    fp_year: Optional[int]
    window: graph_store.Window
    pool: Tuple[str, ...]
    citers: Tuple[CiterLink, ...]
    external_ref_citers: Mapping[str, FrozenSet[str]]
    ref_citation_counts: Mapping[str, int]
    citer_ref_counts: Mapping[str, int]
    provenance: str = OWN_REFERENCES
    link_threshold: int = 1
    warnings: Tuple[str, ...] = ()

    @property
    def c(self):
        """Number of citers of the focal paper."""
        return len(self.citers)

    @property
    def r(self):
        """Number of pool references."""
        return len(self.pool)

    @property
    def n_b(self):
        return sum(1 for link in self.citers if link.n_links >= self.link_threshold)

    @property
    def n_f(self):
        return self.c - self.n_b

    @property
    def n_r(self):
        return len(self.r_side())

    @property
    def t_r(self):
        """Total number of coupling links between citers and pool references."""
        return sum(link.n_links for link in self.citers)

    def r_side(self):
        """Return the set of papers citing a pool reference but not the focal paper."""
        union = set()
        for citers in self.external_ref_citers.values():
            union.update(citers)
        return union

    def link_counts(self):
        """Return the coupling link count of every citer, in citer order."""
        return [link.n_links for link in self.citers]


@dataclasses.dataclass(frozen=True)
class PriorArtNetwork:
    """Network of the focal paper against a single cited reference (prior art)."""

    prior: str
    n_f_i: int
    n_b_i: int
    n_p_i: int

    @property
    def denominator(self):
        return self.n_f_i + self.n_b_i + self.n_p_i


@dataclasses.dataclass(frozen=True)
class CiterPartition:
    """Knowledge elements of one citer split by origin.

    cf: only in the focal paper, ca: in the focal paper and its references,
    cr: only in the references, cc: only in the citer itself.
    """

    citer: str
    n_cf: int
    n_ca: int
    n_cr: int
    n_cc: int

    @property
    def total(self):
        return self.n_cf + self.n_ca + self.n_cr + self.n_cc


@dataclasses.dataclass(frozen=True)
class EntityNetwork:
    """Knowledge-element partitions of a focal paper's neighbourhood."""

    fp: str
    fp_year: Optional[int]
    mode: str
    fp_elements: FrozenSet
    ref_elements: FrozenSet
    citer_partitions: Tuple[CiterPartition, ...]
    n_citers: int
    n_s: int
    warnings: Tuple[str, ...] = ()

    @property
    def n_rf(self):
        """Elements of the focal paper absent from its references."""
        return len(self.fp_elements - self.ref_elements)

    @property
    def n_rb(self):
        """Elements shared by the focal paper and its references."""
        return len(self.fp_elements & self.ref_elements)


def own_references(graph, fp):
    """Return the reference list of `fp` as a ReferencePool."""
    return ReferencePool(graph.references(fp), OWN_REFERENCES)


def build_field_pool(graph, fp):
    """Return the field pool of `fp`.

    The pool is the union of the references of every paper published in the
    same journal and the same year as `fp`, `fp` included. The focal paper
    itself never belongs to its own pool.

    Parameters
    ----------
    graph : CitationGraph
    fp : str

    Returns
    -------
    ReferencePool

    Raises
    ------
    utils.NotComputableError
        When `fp` has no journal or no year.
    """
    i = graph.index(fp)
    record = graph.records[i]
    if record.journal is None or record.year is None:
        raise utils.NotComputableError("no_field", f"{fp} lacks a journal or a year")
    out = graph.out_lists
    refs = set()
    for member in graph.venue_members(record.journal, record.year):
        refs.update(out[member])
    refs.discard(i)
    ids = graph.ids
    return ReferencePool(tuple(ids[j] for j in sorted(refs)), FIELD_POOL,
                         record.journal, record.year)


def extract_focal_network(graph, fp, window, pool=None, allow_empty_pool=False):
    """Extract the windowed tripartite network of `fp`.

    Parameters
    ----------
    graph : CitationGraph
    fp : str
        Focal paper id.
    window : Window
    pool : ReferencePool
        Defaults to the own references of `fp`.
    allow_empty_pool : bool
        Return a flagged network instead of raising when the pool is empty.

    Returns
    -------
    FocalNetwork

    Raises
    ------
    utils.UnknownPaperError
        When `fp` is not in the graph.
    utils.NotComputableError
        "missing_year" for a relative window and a focal paper without year,
        "zero_reference_artifact" for an empty pool.
    """
    i = graph.index(fp)
    fp_year = graph.records[i].year
    cutoff = window.cutoff(fp_year)
    if pool is None:
        pool = own_references(graph, fp)
    warnings = []
    if not pool.refs:
        if not allow_empty_pool:
            raise utils.NotComputableError("zero_reference_artifact",
                                           f"{fp} has no indexed reference")
        warnings.append("zero_reference_artifact")

    ids = graph.ids
    years = graph.year_list
    out = graph.out_lists
    in_ = graph.in_lists

    def passes(paper):
        if cutoff is None:
            return True
        year = years[paper]
        return year != graph_store.YEAR_MISSING and year <= cutoff

    pool_index = [graph.index(ref) for ref in pool.refs]
    pool_set = set(pool_index)
    citer_index = [c for c in in_[i] if passes(c)]
    inside = set(citer_index)
    inside.add(i)

    citers = tuple(CiterLink(ids[c], frozenset(ids[r] for r in pool_set.intersection(out[c])))
                   for c in citer_index)
    external = {}
    counts = {}
    for r in pool_index:
        windowed = [c for c in in_[r] if passes(c)]
        counts[ids[r]] = len(windowed)
        external[ids[r]] = frozenset(ids[c] for c in windowed if c not in inside)
    citer_ref_counts = {ids[c]: len(out[c]) for c in citer_index}

    return FocalNetwork(fp=fp, fp_year=fp_year, window=window, pool=tuple(pool.refs),
                        citers=citers, external_ref_citers=external,
                        ref_citation_counts=counts, citer_ref_counts=citer_ref_counts,
                        provenance=pool.provenance, warnings=tuple(warnings))


def exclude_references(net, refs):
    """Return `net` with the references `refs` removed from its pool.

    Coupling links, R-side citers and citation counts of the removed
    references disappear with them.
    """
    drop = frozenset(refs)
    if not drop:
        return net
    return dataclasses.replace(
        net,
        pool=tuple(ref for ref in net.pool if ref not in drop),
        citers=tuple(CiterLink(link.citer, link.coupled_refs - drop) for link in net.citers),
        external_ref_citers={ref: citers for ref, citers in net.external_ref_citers.items()
                             if ref not in drop},
        ref_citation_counts={ref: count for ref, count in net.ref_citation_counts.items()
                             if ref not in drop},
    )


def most_cited_references(net, x_percent):
    """Return the ceil(x * R / 100) most cited pool references.

    References are ranked by windowed citation count, descending, ties broken
    by ascending id.
    """
    x_percent = utils.as_fraction(x_percent)
    if x_percent <= 0:
        return ()
    k = math.ceil(x_percent * net.r / 100)
    ranked = sorted(net.pool, key=lambda ref: (-net.ref_citation_counts[ref], ref))
    return tuple(ranked[:k])


def exclude_top_cited(net, x_percent):
    """Remove the x% most cited references from the pool of `net`.

    Raises
    ------
    utils.NotComputableError
        "all_refs_excluded" when nothing would be left in the pool.
    """
    top = most_cited_references(net, x_percent)
    if not top:
        return net
    if len(top) >= net.r:
        raise utils.NotComputableError("all_refs_excluded",
                                       f"{x_percent}% of {net.r} reference(s) leaves none")
    return exclude_references(net, top)


def apply_link_threshold(net, l_threshold, semantics=RECLASSIFY):
    """Apply a minimal number of coupling links to the B group.

    Parameters
    ----------
    net : FocalNetwork
    l_threshold : int
        Threshold l, 1 leaves the network untouched.
    semantics : str
        "reclassify": citers with fewer than l links count in F.
        "exclude": citers with 1 to l-1 links are dropped from the network.

    Returns
    -------
    FocalNetwork
    """
    if l_threshold <= 1:
        return net
    if semantics == RECLASSIFY:
        return dataclasses.replace(net, link_threshold=l_threshold)
    if semantics == EXCLUDE:
        kept = tuple(link for link in net.citers
                     if link.n_links == 0 or link.n_links >= l_threshold)
        return _keep_citers(net, kept)
    raise ValueError(f"Unknown threshold semantics '{semantics}'.")


def filter_citers(net, min_links):
    """Keep only the citers with at least `min_links` coupling links."""
    if min_links <= 0:
        return net
    kept = tuple(link for link in net.citers if link.n_links >= min_links)
    return _keep_citers(net, kept)


def _keep_citers(net, kept):
    names = {link.citer for link in kept}
    return dataclasses.replace(
        net, citers=kept,
        citer_ref_counts={c: n for c, n in net.citer_ref_counts.items() if c in names})


def prior_art_networks(net):
    """Split `net` into one network per pool reference.

    A citer counts in B for reference p_i when it cites p_i and reaches the
    link threshold of `net`; every other citer counts in F. N_P is the R-side
    of p_i alone.

    Returns
    -------
    list of PriorArtNetwork
        In pool order.
    """
    c = net.c
    threshold = net.link_threshold
    networks = []
    for prior in net.pool:
        n_b = sum(1 for link in net.citers
                  if prior in link.coupled_refs and link.n_links >= threshold)
        networks.append(PriorArtNetwork(prior, c - n_b, n_b,
                                        len(net.external_ref_citers[prior])))
    return networks


def extract_prior_art_networks(graph, fp, window):
    """Return the per-reference networks of `fp`.

    Raises
    ------
    utils.NotComputableError
        When `fp` has no reference.
    """
    return prior_art_networks(extract_focal_network(graph, fp, window))


def element_set(elements, mode=ENTITY):
    """Return the knowledge elements of a paper in the given mode.

    In relation mode a paper is represented by the unordered pairs of its
    elements, so a single element gives an empty set.
    """
    if elements is None:
        return None
    if mode == ENTITY:
        return frozenset(elements)
    if mode == RELATION:
        return frozenset(itertools.combinations(sorted(elements), 2))
    raise ValueError(f"Unknown element mode '{mode}'.")


def entity_network(graph, net, mode=ENTITY):
    """Build the knowledge-element partitions over an extracted network.

    The pool of `net` gives the reference elements, its citers the citer
    partitions. Citers without elements are left out and flagged.

    Raises
    ------
    utils.NotComputableError
        "no_elements" when the focal paper has no usable element.
    """
    fp_elements = element_set(graph.record(net.fp).elements, mode)
    if not fp_elements:
        raise utils.NotComputableError("no_elements",
                                       f"{net.fp} has no knowledge element in {mode} mode")
    warnings = list(net.warnings)
    if not net.pool and "zero_reference_artifact" not in warnings:
        warnings.append("zero_reference_artifact")

    ref_elements = set()
    missing_refs = 0
    for ref in net.pool:
        elements = element_set(graph.record(ref).elements, mode)
        if elements is None:
            missing_refs += 1
            continue
        ref_elements.update(elements)
    if missing_refs:
        warnings.append("refs_missing_elements")

    partitions = []
    missing_citers = 0
    empty_citers = 0
    n_s = 0
    for link in net.citers:
        elements = element_set(graph.record(link.citer).elements, mode)
        if elements is None:
            missing_citers += 1
            continue
        if not elements:
            empty_citers += 1
        from_fp = elements & fp_elements
        rest = elements - fp_elements
        if from_fp:
            n_s += 1
        partitions.append(CiterPartition(
            link.citer,
            n_cf=len(from_fp - ref_elements),
            n_ca=len(from_fp & ref_elements),
            n_cr=len(rest & ref_elements),
            n_cc=len(rest - ref_elements)))
    if missing_citers:
        logger.debug("%s: %d citer(s) without knowledge elements left out.",
                     net.fp, missing_citers)
        warnings.append("citers_missing_elements")
    if empty_citers and mode == RELATION:
        warnings.append("singleton_elements")

    return EntityNetwork(fp=net.fp, fp_year=net.fp_year, mode=mode,
                         fp_elements=fp_elements, ref_elements=frozenset(ref_elements),
                         citer_partitions=tuple(partitions), n_citers=len(partitions),
                         n_s=n_s, warnings=tuple(warnings))


def extract_entity_network(graph, fp, window, mode=ENTITY):
    """Extract the knowledge-element network of `fp` over its own references."""
    net = extract_focal_network(graph, fp, window, allow_empty_pool=True)
    return entity_network(graph, net, mode)
