"""Module for the knowledge-element disruption indicators (ED family).

ED compares the knowledge elements (e.g. MeSH descriptors) of a focal paper
with those of its references (ED_R) and with those of its citers (ED_C)::

    ED_R = (n_RF - n_RB) / (n_RF + n_RB)
    ED_C = mean over citers of (n_CF + n_CC - n_CA - n_CR) / (n_CF + n_CC + n_CA + n_CR)
    ED   = alpha * ED_R + (1 - alpha) * ED_C

mED weights ED by m_t, the number of citers sharing an element with the
focal paper, min-max normalised over the papers of the same year.

alpha defaults to 0.5; values below 0.5 give ED_C more weight, which is the
setting reported to single out breakthrough papers best.
"""

import dataclasses
import logging
from fractions import Fraction
from typing import Mapping, Tuple

from . import focal
from . import graph as graph_store
from . import utils

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = Fraction(1, 2)


@dataclasses.dataclass(frozen=True)
class EDScore:
    """ED and its two parts."""

    ed_r: Fraction
    ed_c: Fraction
    ed: Fraction
    alpha: Fraction
    mode: str
    warnings: Tuple[str, ...] = ()


@dataclasses.dataclass(frozen=True)
class MEDScore:
    """ED weighted by the cohort-normalised element impact m_t."""

    value: Fraction
    m_t: Fraction
    n_s: int
    ed: EDScore
    warnings: Tuple[str, ...] = ()


@dataclasses.dataclass(frozen=True)
class CohortStats:
    """Per publication year, the extrema of N_S over the papers of that year."""

    extrema: Mapping[int, Tuple[int, int]]
    window: graph_store.Window
    mode: str = focal.ENTITY

    def __contains__(self, year):
        return year in self.extrema

    def __getitem__(self, year):
        return self.extrema[year]


def ed(enet, alpha=DEFAULT_ALPHA):
    """Compute ED on an entity network.

    Citers whose element set is empty are skipped (and flagged); ED_C is the
    mean over the remaining citers.

    Parameters
    ----------
    enet : EntityNetwork
    alpha : Fraction
        Weight of ED_R, in [0, 1].

    Returns
    -------
    EDScore

    Raises
    ------
    utils.NotComputableError
        "no_elements" when the focal paper has no element, "no_retained_citers"
        when no citer has elements.
    """
    alpha = utils.as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}.")
    n_rf, n_rb = enet.n_rf, enet.n_rb
    if n_rf + n_rb == 0:
        raise utils.NotComputableError("no_elements", f"{enet.fp} has no knowledge element")
    ed_r = Fraction(n_rf - n_rb, n_rf + n_rb)

    retained = [p for p in enet.citer_partitions if p.total > 0]
    if not retained:
        raise utils.NotComputableError("no_retained_citers",
                                       f"no citer of {enet.fp} carries knowledge elements")
    ed_c = sum(Fraction(p.n_cf + p.n_cc - p.n_ca - p.n_cr, p.total) for p in retained)
    ed_c /= len(retained)

    warnings = list(enet.warnings)
    if len(retained) < len(enet.citer_partitions):
        warnings.append("citers_skipped")
    return EDScore(ed_r=ed_r, ed_c=ed_c, ed=alpha * ed_r + (1 - alpha) * ed_c,
                   alpha=alpha, mode=enet.mode, warnings=tuple(warnings))


def shared_citer_count(graph, paper, window, mode=focal.ENTITY):
    """Return N_S: windowed citers of `paper` sharing an element with it.

    Returns None when `paper` has no usable element or, under a relative
    window, no year.
    """
    i = graph.index(paper)
    record = graph.records[i]
    fp_elements = focal.element_set(record.elements, mode)
    if not fp_elements:
        return None
    if window.mode == "relative" and record.year is None:
        return None
    cutoff = window.cutoff(record.year)
    years = graph.year_list
    records = graph.records
    count = 0
    for c in graph.in_lists[i]:
        if cutoff is not None:
            year = years[c]
            if year == graph_store.YEAR_MISSING or year > cutoff:
                continue
        elements = focal.element_set(records[c].elements, mode)
        if elements and elements & fp_elements:
            count += 1
    return count


def cohort_stats(graph, window, mode=focal.ENTITY):
    """Compute the N_S extrema of every publication year.

    Only papers with a year and usable elements enter a cohort; years
    without any such paper are absent.

    Parameters
    ----------
    graph : CitationGraph
    window : Window
    mode : str
        "entity" or "relation".

    Returns
    -------
    CohortStats
    """
    extrema = {}
    for record in graph.records:
        if record.year is None:
            continue
        n_s = shared_citer_count(graph, record.id, window, mode)
        if n_s is None:
            continue
        low, high = extrema.get(record.year, (n_s, n_s))
        extrema[record.year] = (min(low, n_s), max(high, n_s))
    logger.debug("Cohort statistics computed for %d year(s).", len(extrema))
    return CohortStats(dict(sorted(extrema.items())), window, mode)


def med(enet, alpha, stats, n_s=None):
    """Compute mED = m_t * ED.

    m_t = (N_S - min_y) / (max_y - min_y) over the cohort of the focal
    publication year y. A cohort where all papers share the same N_S gives
    m_t = 0 and the warning "degenerate_cohort".

    Parameters
    ----------
    enet : EntityNetwork
    alpha : Fraction
    stats : CohortStats
    n_s : int or None
        N_S of the focal paper, defaults to `enet.n_s`.

    Returns
    -------
    MEDScore

    Raises
    ------
    utils.NotComputableError
        "missing_cohort_year" when the focal year has no cohort.
    """
    score = ed(enet, alpha)
    year = enet.fp_year
    if year is None or year not in stats:
        raise utils.NotComputableError("missing_cohort_year",
                                       f"no cohort statistics for {enet.fp} ({year})")
    if n_s is None:
        n_s = enet.n_s
    low, high = stats[year]
    warnings = list(score.warnings)
    if high > low:
        m_t = Fraction(n_s - low, high - low)
    else:
        m_t = Fraction(0)
        warnings.append("degenerate_cohort")
    return MEDScore(value=m_t * score.ed, m_t=m_t, n_s=n_s, ed=score,
                    warnings=tuple(warnings))
