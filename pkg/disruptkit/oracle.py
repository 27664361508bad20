"""Module of brute-force reference computations and a synthetic corpus generator.

Nothing here uses the graph store or the focal network code: every set is
rebuilt from the raw edge list by plain loops, which makes it slow (meant
for a few hundred papers) but independent. Tests compare it with the
optimized path.
"""

import dataclasses
import json
import math
from fractions import Fraction
from typing import Mapping, Optional, Tuple

import numpy as np

SPLIT_BASES = ("di1", "di_nor", "di_star", "di_hash", "dual_dc")


@dataclasses.dataclass(frozen=True)
class RawEdgeList:
    """A corpus as plain data.

    Parameters
    ----------
    edges : tuple of (str, str)
        (citing, cited) pairs, duplicates and self-loops allowed.
    years : dict
        Paper id -> year or None.
    elements : dict
        Paper id -> list of knowledge elements or None.
    journals : dict
        Paper id -> journal or None.
    """

    edges: Tuple[Tuple[str, str], ...]
    years: Mapping[str, Optional[int]] = dataclasses.field(default_factory=dict)
    elements: Mapping[str, Optional[Tuple[str, ...]]] = dataclasses.field(default_factory=dict)
    journals: Mapping[str, Optional[str]] = dataclasses.field(default_factory=dict)

    def paper_ids(self):
        """All ids: papers with metadata and edge endpoints, sorted."""
        ids = set(self.years) | set(self.elements) | set(self.journals)
        for citing, cited in self.edges:
            ids.add(citing)
            ids.add(cited)
        return sorted(ids)


def _clean_elements(elements):
    if elements is None:
        return None
    return {e.strip().lower() for e in elements if e.strip()}


def _transform(elements, mode):
    if elements is None:
        return None
    if mode == "entity":
        return set(elements)
    pairs = set()
    for x in elements:
        for y in elements:
            if x < y:
                pairs.add((x, y))
    return pairs


def _cutoff(window, year):
    """Last accepted citer year; "none" for no limit, None when undefined."""
    if window.mode == "unbounded":
        return "none"
    if window.mode == "absolute":
        return window.value
    if year is None:
        return None
    return year + window.value


class _Corpus:
    """Naive view of a RawEdgeList."""

    def __init__(self, raw):
        self.edges = sorted({(a, b) for a, b in raw.edges if a != b})
        self.edge_set = set(self.edges)
        self.years = dict(raw.years)
        self.elements = {p: _clean_elements(e) for p, e in raw.elements.items()}
        self.journals = {}
        for paper, journal in raw.journals.items():
            if journal is not None and journal.strip():
                self.journals[paper] = journal.strip()

    def year(self, paper):
        return self.years.get(paper)

    def in_window(self, paper, cutoff):
        if cutoff == "none":
            return True
        year = self.years.get(paper)
        return year is not None and year <= cutoff

    def shared_citers(self, paper, window, mode):
        """N_S of `paper`, None when it has no usable element or no cutoff."""
        own = _transform(self.elements.get(paper), mode)
        if not own:
            return None
        cutoff = _cutoff(window, self.year(paper))
        if cutoff is None:
            return None
        count = 0
        for a, b in self.edges:
            if b != paper or not self.in_window(a, cutoff):
                continue
            other = _transform(self.elements.get(a), mode)
            if other and other & own:
                count += 1
        return count


def naive_cohort(raw, window, mode="entity"):
    """Return year -> (min N_S, max N_S) over papers with a year and elements."""
    corpus = raw if isinstance(raw, _Corpus) else _Corpus(raw)
    extrema = {}
    for paper in sorted(set(corpus.years) | set(corpus.elements)):
        year = corpus.year(paper)
        if year is None:
            continue
        n_s = corpus.shared_citers(paper, window, mode)
        if n_s is None:
            continue
        if year in extrema:
            low, high = extrema[year]
            extrema[year] = (min(low, n_s), max(high, n_s))
        else:
            extrema[year] = (n_s, n_s)
    return extrema


def naive_score(raw, fp, config, cohort=None):
    """Recompute the indicator of `config` for `fp` by enumeration.

    Parameters
    ----------
    raw : RawEdgeList
    fp : str
    config : IndicatorConfig
    cohort : dict
        year -> (min, max) for mED, from `naive_cohort()` when missing.

    Returns
    -------
    Fraction or None
        None when the indicator is not computable.
    """
    corpus = _Corpus(raw)
    edges = corpus.edges
    fp_year = corpus.year(fp)
    cutoff = _cutoff(config.window, fp_year)
    if cutoff is None:
        return None
    base = config.base

    if config.field_pool:
        journal = corpus.journals.get(fp)
        if journal is None or fp_year is None:
            return None
        pool = set()
        for a, b in edges:
            if corpus.journals.get(a) == journal and corpus.year(a) == fp_year:
                pool.add(b)
        pool.discard(fp)
    else:
        pool = {b for a, b in edges if a == fp}
    if not pool and base != "ed":
        return None

    def window_citers(paper):
        return {a for a, b in edges if b == paper and corpus.in_window(a, cutoff)}

    citers = sorted(window_citers(fp))

    if config.x_percent > 0 and pool:
        counts = {r: len(window_citers(r)) for r in pool}
        k = math.ceil(config.x_percent * len(pool) / 100)
        ranked = sorted(pool, key=lambda r: (-counts[r], r))
        if k >= len(pool):
            return None
        for r in ranked[:k]:
            pool.discard(r)

    links = {c: {r for r in pool if (c, r) in corpus.edge_set} for c in citers}
    b_min = 1
    l_value = config.l_threshold or 1
    if l_value > 1:
        if base in SPLIT_BASES and config.l_semantics == "reclassify":
            b_min = l_value
        elif base in SPLIT_BASES:
            citers = [c for c in citers if len(links[c]) == 0 or len(links[c]) >= l_value]
        else:
            citers = [c for c in citers if len(links[c]) >= l_value]

    f_group = [c for c in citers if len(links[c]) < b_min]
    b_group = [c for c in citers if len(links[c]) >= b_min]
    r_group = set()
    for a, b in edges:
        if b in pool and a != fp and corpus.in_window(a, cutoff) \
                and (a, fp) not in corpus.edge_set:
            r_group.add(a)
    n_f, n_b, n_r = len(f_group), len(b_group), len(r_group)
    n_c = len(citers)
    n_refs = len(pool)
    t_r = sum(len(links[c]) for c in citers)

    if base == "ed":
        return _naive_ed(corpus, fp, config, sorted(pool), citers, cohort)

    weight = Fraction(1)
    if config.m_weight:
        if n_f + n_b + n_r == 0:
            return None
        weight = Fraction(n_f + n_b, n_f + n_b + n_r)

    if base in ("di1", "di_star", "di_hash"):
        total = n_f + n_b + (0 if config.no_r else n_r)
        if total == 0:
            return None
        numerator = {"di1": n_f - n_b, "di_star": n_f, "di_hash": n_b}[base]
        value = Fraction(numerator, total)
    elif base == "di_nor":
        if n_f + n_b == 0:
            return None
        value = Fraction(n_f - n_b, n_f + n_b)
    elif base == "dep":
        if n_c == 0:
            return None
        value = Fraction(t_r, n_c)
    elif base in ("orig_base", "orig_yc", "orig_zr"):
        if n_c == 0 or n_refs == 0:
            return None
        if base == "orig_base":
            value = 1 - Fraction(t_r, n_c * n_refs)
        else:
            sum_y = 0
            for c in citers:
                sum_y += len({b for a, b in edges if a == c})
            if sum_y == 0:
                return None
            if base == "orig_yc":
                value = 1 - config.weight_l / n_refs * Fraction(t_r, sum_y)
            else:
                sum_z = sum(len(window_citers(r)) for r in pool)
                if sum_z == 0:
                    return None
                value = 1 - config.weight_l * Fraction(t_r, sum_y * sum_z)
    elif base == "dual_dc":
        d_values = []
        for prior in sorted(pool):
            n_b_i = sum(1 for c in citers
                        if prior in links[c] and len(links[c]) >= b_min)
            n_f_i = n_c - n_b_i
            n_p_i = len({a for a, b in edges
                         if b == prior and a != fp and corpus.in_window(a, cutoff)
                         and (a, fp) not in corpus.edge_set})
            total = n_f_i + n_b_i + (0 if config.no_r else n_p_i)
            if total:
                d_values.append(Fraction(n_f_i, total))
        if not d_values:
            return None
        value = sum(d_values) / len(d_values)
    else:
        raise ValueError(f"Unknown indicator '{base}'.")
    return value * weight


def _naive_ed(corpus, fp, config, pool, citers, cohort):
    mode = config.mode
    fp_elements = _transform(corpus.elements.get(fp), mode)
    if not fp_elements:
        return None
    ref_elements = set()
    for r in pool:
        elements = _transform(corpus.elements.get(r), mode)
        if elements is not None:
            ref_elements |= elements
    n_rf = len([e for e in fp_elements if e not in ref_elements])
    n_rb = len([e for e in fp_elements if e in ref_elements])
    ed_r = Fraction(n_rf - n_rb, n_rf + n_rb)

    terms = []
    for c in citers:
        elements = _transform(corpus.elements.get(c), mode)
        if not elements:
            continue
        n_cf = n_ca = n_cr = n_cc = 0
        for e in elements:
            if e in fp_elements and e not in ref_elements:
                n_cf += 1
            elif e in fp_elements:
                n_ca += 1
            elif e in ref_elements:
                n_cr += 1
            else:
                n_cc += 1
        terms.append(Fraction(n_cf + n_cc - n_ca - n_cr, n_cf + n_ca + n_cr + n_cc))
    if not terms:
        return None
    ed_c = sum(terms) / len(terms)
    value = config.alpha * ed_r + (1 - config.alpha) * ed_c
    if not config.m_weight:
        return value

    if cohort is None:
        cohort = naive_cohort(corpus, config.window, mode)
    year = corpus.year(fp)
    if year is None or year not in cohort:
        return None
    n_s = corpus.shared_citers(fp, config.window, mode)
    low, high = cohort[year]
    m_t = Fraction(n_s - low, high - low) if high > low else Fraction(0)
    return m_t * value


def random_graph(seed, n_papers, avg_refs, year_span, element_vocab=0,
                 n_journals=3, missing_rate=0.0):
    """Draw a synthetic corpus that respects time.

    Papers get sorted years in `year_span`; paper i may only cite papers
    drawn before it, so no paper cites a later year (same-year citations
    happen). Reference counts follow a Poisson law of mean `avg_refs`.

    Parameters
    ----------
    seed : int
    n_papers : int
        At least 2.
    avg_refs : float
    year_span : (int, int)
        First and last year, inclusive.
    element_vocab : int
        Size of the knowledge element vocabulary, 0 for no elements.
    n_journals : int
    missing_rate : float
        Probability of a missing year, journal or element list per paper.

    Returns
    -------
    RawEdgeList
    """
    if n_papers < 2:
        raise ValueError("A random corpus needs at least 2 papers.")
    first, last = year_span
    rng = np.random.default_rng(seed)
    ids = [f"P{i:05d}" for i in range(n_papers)]
    years = np.sort(rng.integers(first, last + 1, size=n_papers)).tolist()

    edges = []
    for i in range(1, n_papers):
        k = min(int(rng.poisson(avg_refs)), i)
        for j in sorted(rng.choice(i, size=k, replace=False).tolist()):
            edges.append((ids[i], ids[j]))

    year_map = {}
    journals = {}
    elements = {}
    for i, paper in enumerate(ids):
        missing = rng.random(3) < missing_rate
        year_map[paper] = None if missing[0] else years[i]
        journals[paper] = None if missing[1] else f"J{int(rng.integers(n_journals))}"
        if element_vocab:
            if missing[2]:
                elements[paper] = None
            else:
                size = int(rng.integers(1, min(element_vocab, 4) + 1))
                picked = rng.choice(element_vocab, size=size, replace=False)
                elements[paper] = tuple(f"e{e}" for e in sorted(picked.tolist()))
    return RawEdgeList(tuple(edges), year_map, elements, journals)


def to_sources(raw):
    """Serialize `raw` into the node (JSON lines) and edge (CSV) formats.

    Returns
    -------
    (str, str)
        Node text and edge text.
    """
    lines = []
    for paper in raw.paper_ids():
        if paper not in raw.years and paper not in raw.elements and paper not in raw.journals:
            continue
        elements = raw.elements.get(paper)
        lines.append(json.dumps({
            "id": paper, "year": raw.years.get(paper), "journal": raw.journals.get(paper),
            "discipline": None,
            "elements": None if elements is None else list(elements)}))
    nodes = "".join(line + "\n" for line in lines)
    edges = "citing_id,cited_id\n" + "".join(f"{a},{b}\n" for a, b in raw.edges)
    return nodes, edges
