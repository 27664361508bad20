"""Module for corpus-level procedures built on single-paper scores.

It covers trajectories over growing citation windows, the two quadrant
classifications, sample-relative transforms (inverse DEP, percentile ranks),
the eligibility filter and the batch runner.
"""

import bisect
import dataclasses
import logging
import math
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from . import entity
from . import focal
from . import graph as graph_store
from . import indicators
from . import utils

logger = logging.getLogger(__name__)

# Shortest relative window considered reliable, in years.
MIN_RELIABLE_WINDOW = 3
# Default high impact cut on the log10(citations + 1) axis.
LOG_CITATION_CUT = Fraction(2)

WEI = "wei"
CHEN = "chen"
WEI_LABELS = ("revolutionary", "high_impact_incremental",
              "low_impact_direction_changing", "low_impact_incremental")
CHEN_LABELS = ("dual", "disruptive_only", "consolidating_only", "neither")


@dataclasses.dataclass(frozen=True)
class Trajectory:
    """Scores of one focal paper for relative windows t = 1, 2, ..."""

    fp: str
    config: indicators.IndicatorConfig
    points: Tuple[Tuple[int, indicators.ScoreRecord], ...]

    def values(self):
        """Return the (t, value or None) pairs."""
        return [(t, record.value) for t, record in self.points]


@dataclasses.dataclass(frozen=True)
class QuadrantLabel:
    """Quadrant of a paper in a two-axis classification."""

    scheme: str
    label: str

    def __post_init__(self):
        labels = WEI_LABELS if self.scheme == WEI else CHEN_LABELS if self.scheme == CHEN else ()
        if self.label not in labels:
            raise ValueError(f"'{self.label}' is not a {self.scheme} label.")


def needs_cohort(config):
    """Tell whether `config` is mED, which needs cohort statistics."""
    return config.base == "ed" and config.m_weight


def trajectory(graph, fp, config, max_t, cohorts=None):
    """Compute the score of `fp` for every relative window t = 1..max_t.

    Parameters
    ----------
    graph : CitationGraph
    fp : str
    config : IndicatorConfig
        Its window is replaced by each relative window in turn.
    max_t : int
    cohorts : dict
        t -> CohortStats for mED, computed when missing.

    Returns
    -------
    Trajectory

    Raises
    ------
    utils.NotComputableError
        "missing_year" when `fp` has no publication year.
    """
    if max_t < 1:
        raise ValueError(f"max_t must be >= 1, got {max_t}.")
    if graph.record(fp).year is None:
        raise utils.NotComputableError("missing_year", f"{fp} has no publication year")
    cohorts = {} if cohorts is None else cohorts
    points = []
    for t in range(1, max_t + 1):
        window = graph_store.Window.relative(t)
        config_t = dataclasses.replace(config, window=window)
        cohort = None
        if needs_cohort(config):
            if t not in cohorts:
                cohorts[t] = entity.cohort_stats(graph, window, config.mode)
            cohort = cohorts[t]
        points.append((t, indicators.score_or_flag(graph, fp, config_t, cohort)))
    return Trajectory(fp, config, tuple(points))


def stabilization_point(traj):
    """Return the first t from which the trajectory no longer changes.

    Returns None when the last point is not computable.
    """
    if not traj.points:
        return None
    last = traj.points[-1][1].value
    if last is None:
        return None
    stable = traj.points[-1][0]
    for t, record in reversed(traj.points):
        if record.value != last:
            break
        stable = t
    return stable


def wei_classify(di1_score, citations, di_cut=0, logc_cut=LOG_CITATION_CUT):
    """Place a paper in the disruption x impact quadrants.

    A paper is disruptive when its DI_1 is above `di_cut` and of high impact
    when log10(citations + 1) is above `logc_cut`. Values on a cut fall on the
    low side.

    Returns
    -------
    QuadrantLabel
    """
    disruptive = utils.as_fraction(di1_score) > utils.as_fraction(di_cut)
    high = math.log10(citations + 1) > float(logc_cut)
    if disruptive:
        label = "revolutionary" if high else "low_impact_direction_changing"
    else:
        label = "high_impact_incremental" if high else "low_impact_incremental"
    return QuadrantLabel(WEI, label)


def chen_classify(d, c, d_cut, c_cut):
    """Place a paper in the D x C quadrants (ties fall low)."""
    high_d = utils.as_fraction(d) > utils.as_fraction(d_cut)
    high_c = utils.as_fraction(c) > utils.as_fraction(c_cut)
    if high_d and high_c:
        label = "dual"
    elif high_d:
        label = "disruptive_only"
    elif high_c:
        label = "consolidating_only"
    else:
        label = "neither"
    return QuadrantLabel(CHEN, label)


def median(values):
    """Return the exact median of a non-empty list of rationals."""
    if not values:
        raise ValueError("Median of an empty list.")
    ordered = sorted(utils.as_fraction(v) for v in values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def impact_cut(citations, method="log", log_cut=LOG_CITATION_CUT):
    """Return the high impact cut on the log10(citations + 1) axis.

    Parameters
    ----------
    citations : list of int
        Citation counts of the corpus.
    method : str
        "log" for the fixed `log_cut`, "median" or "mean" for the median or
        mean of log10(citations + 1) over the corpus.

    Returns
    -------
    Fraction
    """
    if method == "log":
        return utils.as_fraction(log_cut)
    if not len(citations):
        raise ValueError("An empty corpus has no impact cut.")
    logs = np.log10(np.asarray(citations, dtype=float) + 1)
    if method == "median":
        return utils.as_fraction(float(np.median(logs)))
    if method == "mean":
        return utils.as_fraction(float(np.mean(logs)))
    raise ValueError(f"Unknown impact cut method '{method}'.")


def inverse_dep(dep_scores):
    """Return max(DEP) - DEP + 1 for every score of the sample.

    The result depends on the sample: its maximum maps to 1.
    """
    if not dep_scores:
        raise ValueError("inverse DEP needs at least one score.")
    scores = [utils.as_fraction(s) for s in dep_scores]
    top = max(scores)
    return [top - s + 1 for s in scores]


def percentile_ranks(scores):
    """Return the midrank percentile of every score.

    percentile = 100 * (number strictly below + 0.5 * number equal) / N, so
    ties share a rank and the ranks of a sample average exactly 50.
    """
    if not scores:
        raise ValueError("Percentile ranks need at least one score.")
    values = [utils.as_fraction(s) for s in scores]
    ordered = sorted(values)
    n = len(ordered)
    ranks = []
    for value in values:
        below = bisect.bisect_left(ordered, value)
        ties = bisect.bisect_right(ordered, value) - below
        ranks.append(Fraction(200 * below + 100 * ties, 2 * n))
    return ranks


def eligibility_filter(graph, min_refs=10, min_cites=10, min_year=None,
                       window=graph_store.Window()):
    """Return the papers worth scoring.

    A paper is eligible with at least `min_refs` references, at least
    `min_cites` citations inside `window` and, if given, a year of at least
    `min_year`. Papers without any reference are never eligible.

    Returns
    -------
    set of str
    """
    ids = graph.ids
    years = graph.year_list
    refs = graph.out_degrees()
    candidates = np.flatnonzero((refs > 0) & (refs >= min_refs))
    eligible = set()
    for i in candidates.tolist():
        year = years[i]
        if min_year is not None and (year == graph_store.YEAR_MISSING or year < min_year):
            continue
        if window.mode == "relative" and year == graph_store.YEAR_MISSING:
            continue
        origin = None if year == graph_store.YEAR_MISSING else year
        if graph_store.citation_count(graph, ids[i], window, origin) >= min_cites:
            eligible.add(ids[i])
    logger.info("%d of %d paper(s) eligible.", len(eligible), len(ids))
    return eligible


def _score_chunk(graph, chunk, config, cohort):
    return [indicators.score_or_flag(graph, fp, config, cohort) for fp in chunk]


def short_window(window):
    """Tell whether `window` is a relative window under the reliable minimum."""
    return window.mode == "relative" and window.value < MIN_RELIABLE_WINDOW


def batch_compute(graph, focal_set, config, jobs=1, cohort=None, progress=False):
    """Score every focal paper of `focal_set`.

    Records come back in ascending id order whatever the number of jobs.
    Not-computable papers get a flagged record. Under a short relative window
    every record carries a "short_window" warning.

    Parameters
    ----------
    graph : CitationGraph
    focal_set : iterable of str
    config : IndicatorConfig
    jobs : int
        Number of worker processes.
    cohort : CohortStats
        For mED, computed once when missing.
    progress : bool
        Show a progress bar on stderr.

    Returns
    -------
    list of ScoreRecord

    Raises
    ------
    utils.UnknownPaperError
        Listing every unknown id.
    """
    ids = sorted(set(focal_set))
    unknown = [paper for paper in ids if paper not in graph]
    if unknown:
        raise utils.UnknownPaperError(unknown)
    short = short_window(config.window)
    if short:
        logger.warning("A %d year citation window is short, at least %d years are advised.",
                       config.window.value, MIN_RELIABLE_WINDOW)
    if needs_cohort(config) and cohort is None:
        cohort = entity.cohort_stats(graph, config.window, config.mode)

    if jobs <= 1 or len(ids) < 2:
        records = [indicators.score_or_flag(graph, fp, config, cohort)
                   for fp in tqdm(ids, disable=not progress, unit="paper")]
    else:
        records = _parallel_compute(graph, ids, config, cohort, jobs, progress)
    if short:
        records = [dataclasses.replace(record, warnings=record.warnings + ("short_window",))
                   for record in records]
    return records


def _parallel_compute(graph, ids, config, cohort, jobs, progress):
    n_chunks = min(len(ids), jobs * 2)
    size = math.ceil(len(ids) / n_chunks)
    chunks = [ids[k:k + size] for k in range(0, len(ids), size)]
    logger.debug("Scoring %d paper(s) in %d chunk(s) on %d job(s).",
                 len(ids), len(chunks), jobs)
    results = Parallel(n_jobs=jobs)(
        delayed(_score_chunk)(graph, chunk, config, cohort)
        for chunk in tqdm(chunks, disable=not progress, unit="chunk"))
    return [record for chunk in results for record in chunk]


def reference_sensitivity(graph, fp, config):
    """Recompute the score of `fp` leaving out one pool reference at a time.

    Returns
    -------
    list of (str, ScoreRecord)
        One entry per pool reference, in pool order.
    """
    pool = focal.build_field_pool(graph, fp) if config.field_pool \
        else focal.own_references(graph, fp)
    cohort = None
    if needs_cohort(config):
        cohort = entity.cohort_stats(graph, config.window, config.mode)
    return [(ref, indicators.score_or_flag(graph, fp, config, cohort, (ref,)))
            for ref in pool.refs]


def score_summary(records):
    """Count computable records and warnings.

    Returns
    -------
    dict
        "rows", "computable" and "warnings" (flag -> count, sorted).
    """
    warnings = {}
    for record in records:
        for flag in record.warnings:
            warnings[flag] = warnings.get(flag, 0) + 1
    return {"rows": len(records),
            "computable": sum(1 for record in records if record.computable),
            "warnings": dict(sorted(warnings.items()))}


def optional_median(values) -> Optional[Fraction]:
    """Median of the non-missing values, None when there is none."""
    kept = [v for v in values if v is not None]
    return median(kept) if kept else None
