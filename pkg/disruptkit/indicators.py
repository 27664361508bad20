"""Module for the citation-based disruption indicators.

All formulas work on a FocalNetwork and return exact Fractions. An
indicator with an empty denominator raises utils.NotComputableError; it is
never reported as 0 or 1.

Indicators and modifiers::

    di1       (N_F - N_B) / (N_F + N_B + N_R)
    di_nor    (N_F - N_B) / (N_F + N_B)
    di_star   N_F / (N_F + N_B + N_R)
    di_hash   N_B / (N_F + N_B + N_R)
    dep       T_R / C
    orig_base 1 - T_R / (C * R)
    orig_yc   1 - (L / R) * T_R / sum(y_c)
    orig_zr   1 - L * T_R / (sum(y_c) * sum(z_r))
    dual_dc   D and C, means of the per prior art d_i and c_i
    ed        see entity.py

    l_threshold  coupling links a citer needs to count in B
    x_percent    share of the most cited references removed from the pool
    field_pool   pool = references of all papers of the same journal and year
    m_weight     multiply by m_t / n_t (mED for ed)
    no_r         drop N_R (N_P for dual_dc) from the denominator
"""

import dataclasses
import logging
from fractions import Fraction
from typing import Mapping, Optional, Tuple

from . import entity
from . import focal
from . import graph as graph_store
from . import utils

logger = logging.getLogger(__name__)

BASES = ("di1", "di_nor", "di_star", "di_hash", "dep",
         "orig_base", "orig_yc", "orig_zr", "dual_dc", "ed")
# Bases built on the F/B split: the l threshold moves citers from B to F.
SPLIT_BASES = frozenset({"di1", "di_nor", "di_star", "di_hash", "dual_dc"})
ORIGINALITY_MODES = {"orig_base": "base", "orig_yc": "weighted_yc", "orig_zr": "weighted_zr"}
MODIFIERS = ("l_threshold", "x_percent", "field_pool", "m_weight", "no_r")
# Bases with an R side to drop; di_nor has none left.
NO_R_BASES = frozenset({"di1", "di_star", "di_hash", "dual_dc"})

# Legal modifiers and base-specific parameters of every base.
APPLICABILITY = {
    base: {
        "modifiers": frozenset(MODIFIERS) if base in NO_R_BASES
        else frozenset(MODIFIERS) - {"no_r"},
        "parameters": frozenset(
            {"alpha", "mode"} if base == "ed"
            else {"weight_l"} if base in ("orig_yc", "orig_zr")
            else ()),
    }
    for base in BASES
}

LABEL_PREFIXES = {"di1": "di1", "di_nor": "dinor", "di_star": "distar", "di_hash": "dihash",
                  "dep": "dep", "orig_base": "orig", "orig_yc": "origyc", "orig_zr": "origzr",
                  "dual_dc": "d", "ed": "ed"}


def _short(value):
    """Compact text of a rational for labels: 3, 2.5 or 1/3."""
    if value.denominator == 1:
        return str(value.numerator)
    text = format(float(value), "g")
    if utils.as_fraction(float(text)) == value:
        return text
    return f"{value.numerator}/{value.denominator}"


@dataclasses.dataclass(frozen=True)
class IndicatorConfig:
    """Base formula plus modifiers.

    Parameters
    ----------
    base : str
        One of BASES.
    l_threshold : int or None
        Minimal number of coupling links (>= 2), None behaves as 1.
    l_semantics : str
        "reclassify" or "exclude".
    x_percent : Fraction
        Share (in %) of the most cited references to exclude, in [0, 100].
    field_pool : bool
        Compare against the field pool instead of the own references.
    m_weight : bool
        Weight by m_t / n_t (mED for ed).
    no_r : bool
        Leave N_R (N_P for dual_dc) out of the denominator. The m_t / n_t
        weight keeps its full n_t.
    window : Window
    alpha : Fraction
        ED only, weight of ED_R in [0, 1].
    weight_l : Fraction
        Weighted originality only, the positive constant L.
    mode : str
        ED only, "entity" or "relation".
    """

    base: str = "di1"
    l_threshold: Optional[int] = None
    l_semantics: str = focal.RECLASSIFY
    x_percent: Fraction = Fraction(0)
    field_pool: bool = False
    m_weight: bool = False
    no_r: bool = False
    window: graph_store.Window = graph_store.Window()
    alpha: Fraction = entity.DEFAULT_ALPHA
    weight_l: Fraction = Fraction(1)
    mode: str = focal.ENTITY

    def __post_init__(self):
        if self.base not in BASES:
            raise utils.ConfigError(f"Unknown indicator '{self.base}', "
                                    f"expected one of {', '.join(BASES)}.")
        try:
            for name in ("x_percent", "alpha", "weight_l"):
                object.__setattr__(self, name, utils.as_fraction(getattr(self, name)))
        except (TypeError, ValueError) as e:
            raise utils.ConfigError(f"Invalid numeric parameter: {e}") from e
        if self.l_threshold is not None:
            if isinstance(self.l_threshold, bool) or not isinstance(self.l_threshold, int) \
                    or self.l_threshold < 2:
                raise utils.ConfigError(f"l threshold must be an integer >= 2, "
                                        f"got {self.l_threshold!r}.")
        if self.l_semantics not in (focal.RECLASSIFY, focal.EXCLUDE):
            raise utils.ConfigError(f"Unknown l semantics '{self.l_semantics}'.")
        if not 0 <= self.x_percent <= 100:
            raise utils.ConfigError(f"x percent must be in [0, 100], got {self.x_percent}.")
        if not 0 <= self.alpha <= 1:
            raise utils.ConfigError(f"alpha must be in [0, 1], got {self.alpha}.")
        if self.weight_l <= 0:
            raise utils.ConfigError(f"L must be positive, got {self.weight_l}.")
        if self.mode not in (focal.ENTITY, focal.RELATION):
            raise utils.ConfigError(f"Unknown element mode '{self.mode}'.")
        if not isinstance(self.window, graph_store.Window):
            raise utils.ConfigError("window must be a Window.")

        parameters = APPLICABILITY[self.base]["parameters"]
        if "alpha" not in parameters and self.alpha != entity.DEFAULT_ALPHA:
            raise utils.ConfigError(f"alpha only applies to ed, not to {self.base}.")
        if "mode" not in parameters and self.mode != focal.ENTITY:
            raise utils.ConfigError(f"mode only applies to ed, not to {self.base}.")
        if "weight_l" not in parameters and self.weight_l != 1:
            raise utils.ConfigError(f"L only applies to weighted originality, "
                                    f"not to {self.base}.")
        used = {"l_threshold": self.l_threshold is not None, "x_percent": self.x_percent > 0,
                "field_pool": self.field_pool, "m_weight": self.m_weight,
                "no_r": self.no_r}
        illegal = [name for name, on in used.items()
                   if on and name not in APPLICABILITY[self.base]["modifiers"]]
        if illegal:
            raise utils.ConfigError(f"{', '.join(illegal)} not applicable to {self.base}.")

    def label(self):
        """Return the indicator name used in output files, e.g. "mdi1_l5_n"."""
        parts = [("m" if self.m_weight else "") + LABEL_PREFIXES[self.base]]
        if self.l_threshold is not None:
            parts.append(f"l{self.l_threshold}"
                         + ("e" if self.l_semantics == focal.EXCLUDE else ""))
        if self.x_percent > 0:
            parts.append(f"x{_short(self.x_percent)}")
        if self.no_r:
            parts.append("nor")
        if self.field_pool:
            parts.append("n")
        if self.base == "ed":
            if self.mode == focal.RELATION:
                parts.append("rel")
            if self.alpha != entity.DEFAULT_ALPHA:
                parts.append(f"a{_short(self.alpha)}")
        if self.base in ("orig_yc", "orig_zr") and self.weight_l != 1:
            parts.append(f"L{_short(self.weight_l)}")
        return "_".join(parts)

    def to_dict(self):
        """Return a JSON-friendly echo of the configuration."""
        return {"base": self.base, "l_threshold": self.l_threshold,
                "l_semantics": self.l_semantics, "x_percent": str(self.x_percent),
                "field_pool": self.field_pool, "m_weight": self.m_weight,
                "no_r": self.no_r, "window": self.window.label(), "alpha": str(self.alpha),
                "weight_l": str(self.weight_l), "mode": self.mode,
                "label": self.label()}


@dataclasses.dataclass(frozen=True)
class ScoreRecord:
    """Result of one indicator for one focal paper.

    `value` is None when the indicator is not computable; the reason is then
    the first warning.
    """

    fp: str
    config: IndicatorConfig
    value: Optional[Fraction]
    components: Mapping[str, Fraction] = dataclasses.field(default_factory=dict)
    warnings: Tuple[str, ...] = ()

    @property
    def computable(self):
        return self.value is not None

    @property
    def indicator(self):
        return self.config.label()


@dataclasses.dataclass(frozen=True)
class DualScore:
    """D and C of a focal paper, with the per prior art values."""

    d: Fraction
    c: Fraction
    per_prior: Tuple[Tuple[str, Fraction, Fraction], ...]
    skipped: Tuple[str, ...] = ()


def _counts(net):
    n_b = net.n_b
    return net.c - n_b, n_b, net.n_r


def di1(net):
    """Return DI_1 = (N_F - N_B) / (N_F + N_B + N_R).

    Raises
    ------
    utils.NotComputableError
        When N_F, N_B and N_R are all 0.
    """
    n_f, n_b, n_r = _counts(net)
    if n_f + n_b + n_r == 0:
        raise utils.NotComputableError("empty_denominator", f"{net.fp} has an empty network")
    return Fraction(n_f - n_b, n_f + n_b + n_r)


def di_nor(net):
    """Return DI^noR = (N_F - N_B) / (N_F + N_B), DI_1 without the R side."""
    n_f, n_b, _ = _counts(net)
    if n_f + n_b == 0:
        raise utils.NotComputableError("uncited", f"{net.fp} is not cited in the window")
    return Fraction(n_f - n_b, n_f + n_b)


def di_star_hash(net, no_r=False):
    """Return (DI*, DI#), the disruption and consolidation shares.

    DI* - DI# equals DI_1, or DI^noR when `no_r` leaves N_R out.
    """
    n_f, n_b, n_r = _counts(net)
    total = n_f + n_b + (0 if no_r else n_r)
    if total == 0:
        raise utils.NotComputableError("empty_denominator", f"{net.fp} has an empty network")
    return Fraction(n_f, total), Fraction(n_b, total)


def m_weight(net):
    """Return (m_t, n_t).

    m_t counts the citers of the focal paper, n_t the papers citing the
    focal paper or one of its pool references.
    """
    n_f, n_b, n_r = _counts(net)
    n_t = n_f + n_b + n_r
    if n_t == 0:
        raise utils.NotComputableError("empty_denominator", f"{net.fp} has an empty network")
    return Fraction(n_f + n_b), Fraction(n_t)


def di_threshold(net, l_threshold, semantics=focal.RECLASSIFY):
    """Return DI_l, DI_1 where a citer needs `l_threshold` links to count in B."""
    return di1(focal.apply_link_threshold(net, l_threshold, semantics))


def di_percent_excluded(net, x_percent):
    """Return DI_X%, DI_1 after removing the x% most cited references."""
    return di1(focal.exclude_top_cited(net, x_percent))


def dep(net):
    """Return DEP = T_R / C, the mean number of coupling links per citer."""
    if net.c == 0:
        raise utils.NotComputableError("uncited", f"{net.fp} is not cited in the window")
    return Fraction(net.t_r, net.c)


def originality(net, mode="base", weight_l=1, citer_ref_counts=None, ref_cit_counts=None):
    """Return the originality of the focal paper.

    Parameters
    ----------
    net : FocalNetwork
    mode : str
        "base": 1 - T_R / (C * R).
        "weighted_yc": 1 - (L / R) * T_R / sum(y_c).
        "weighted_zr": 1 - L * T_R / (sum(y_c) * sum(z_r)).
    weight_l : Fraction
        The constant L.
    citer_ref_counts : dict
        Citer -> number of references y_c, defaults to the network's.
    ref_cit_counts : dict
        Reference -> windowed citation count z_r, defaults to the network's.

    Returns
    -------
    Fraction

    Raises
    ------
    utils.NotComputableError
        When C, R or one of the weight sums is 0.
    """
    weight_l = utils.as_fraction(weight_l)
    if net.c == 0:
        raise utils.NotComputableError("uncited", f"{net.fp} is not cited in the window")
    if net.r == 0:
        raise utils.NotComputableError("zero_reference_artifact",
                                       f"{net.fp} has no indexed reference")
    if mode == "base":
        return 1 - Fraction(net.t_r, net.c * net.r)
    if citer_ref_counts is None:
        citer_ref_counts = net.citer_ref_counts
    sum_y = sum(citer_ref_counts[link.citer] for link in net.citers)
    if sum_y == 0:
        raise utils.NotComputableError("empty_denominator", "citers have no references")
    if mode == "weighted_yc":
        return 1 - weight_l / net.r * Fraction(net.t_r, sum_y)
    if mode == "weighted_zr":
        if ref_cit_counts is None:
            ref_cit_counts = net.ref_citation_counts
        sum_z = sum(ref_cit_counts[ref] for ref in net.pool)
        if sum_z == 0:
            raise utils.NotComputableError("empty_denominator", "references are uncited")
        return 1 - weight_l * Fraction(net.t_r, sum_y * sum_z)
    raise ValueError(f"Unknown originality mode '{mode}'.")


def dual_dc(prior_nets, no_r=False):
    """Return D and C over the prior art networks of a focal paper.

    Priors with an empty network (no citer of the focal paper, nobody citing
    the prior) are skipped; D and C are means over the others. With `no_r`
    the papers citing only the prior (N_P) leave the denominator, so
    d_i + c_i = 1 and priors without citers of the focal paper are skipped.

    Raises
    ------
    utils.NotComputableError
        "no_retained_priors" when nothing is left.
    """
    per_prior = []
    skipped = []
    for prior in prior_nets:
        total = prior.n_f_i + prior.n_b_i if no_r else prior.denominator
        if total == 0:
            skipped.append(prior.prior)
            continue
        per_prior.append((prior.prior, Fraction(prior.n_f_i, total),
                          Fraction(prior.n_b_i, total)))
    if not per_prior:
        raise utils.NotComputableError("no_retained_priors", "every prior art network is empty")
    d = sum(d_i for _, d_i, _ in per_prior) / len(per_prior)
    c = sum(c_i for _, _, c_i in per_prior) / len(per_prior)
    return DualScore(d, c, tuple(per_prior), tuple(skipped))


def _network(graph, fp, config, drop_refs=()):
    """Extract the focal network of `fp` and apply pool, X% and l modifiers."""
    warnings = []
    pool = focal.build_field_pool(graph, fp) if config.field_pool else None
    allow_empty = config.base == "ed"
    net = focal.extract_focal_network(graph, fp, config.window, pool,
                                      allow_empty_pool=allow_empty)
    if drop_refs:
        net = focal.exclude_references(net, drop_refs)
        if not net.pool and not allow_empty:
            raise utils.NotComputableError("zero_reference_artifact",
                                           f"no reference of {fp} left")
    if config.x_percent > 0 and net.r > 0:
        net = focal.exclude_top_cited(net, config.x_percent)
    if config.l_threshold is not None:
        if config.base in SPLIT_BASES:
            net = focal.apply_link_threshold(net, config.l_threshold, config.l_semantics)
        else:
            # No F/B split to reclassify: keep the citers reaching l links.
            net = focal.filter_citers(net, config.l_threshold)
            warnings.append("l_semantics_coerced")
    return net, warnings


def compute_composite(graph, fp, config, cohort=None, drop_refs=()):
    """Compute the indicator described by `config` for the focal paper `fp`.

    Modifiers are applied in this order: field pool, X% exclusion,
    l threshold, base formula, m_t / n_t weight. For bases without an F/B
    split (dep, originality, ed) the l threshold keeps the citers with at
    least l coupling links and the record carries "l_semantics_coerced".

    Parameters
    ----------
    graph : CitationGraph
    fp : str
    config : IndicatorConfig
    cohort : entity.CohortStats
        Cohort statistics for mED, computed on the fly when missing.
    drop_refs : iterable of str
        References removed from the pool before any modifier.

    Returns
    -------
    ScoreRecord

    Raises
    ------
    utils.NotComputableError
        From any stage.
    utils.UnknownPaperError
        When `fp` is not in the graph.
    """
    net, warnings = _network(graph, fp, config, drop_refs)
    n_f, n_b, n_r = _counts(net)
    components = {"n_f": Fraction(n_f), "n_b": Fraction(n_b), "n_r": Fraction(n_r),
                  "t_r": Fraction(net.t_r), "c": Fraction(net.c), "r": Fraction(net.r)}
    warnings = list(net.warnings) + warnings
    weight = Fraction(1)
    if config.m_weight and config.base != "ed":
        m_t, n_t = m_weight(net)
        components["m_t"], components["n_t"] = m_t, n_t
        weight = m_t / n_t

    base = config.base
    if base == "di1":
        value = di_nor(net) if config.no_r else di1(net)
    elif base == "di_nor":
        value = di_nor(net)
    elif base in ("di_star", "di_hash"):
        star, hash_ = di_star_hash(net, config.no_r)
        components["di_star"], components["di_hash"] = star * weight, hash_ * weight
        value = star if base == "di_star" else hash_
    elif base == "dep":
        value = dep(net)
    elif base in ORIGINALITY_MODES:
        value = originality(net, ORIGINALITY_MODES[base], config.weight_l)
    elif base == "dual_dc":
        dual = dual_dc(focal.prior_art_networks(net), config.no_r)
        value = dual.d
        components["d"], components["c_score"] = dual.d * weight, dual.c * weight
        if dual.skipped:
            warnings.append("priors_skipped")
    else:
        enet = focal.entity_network(graph, net, config.mode)
        if config.m_weight:
            if cohort is None:
                cohort = entity.cohort_stats(graph, config.window, config.mode)
            n_s = entity.shared_citer_count(graph, fp, config.window, config.mode)
            scored = entity.med(enet, config.alpha, cohort, n_s)
            score = scored.ed
            components["m_t"] = scored.m_t
            value = scored.value
            warnings = list(scored.warnings) + [w for w in warnings
                                                if w not in scored.warnings]
        else:
            score = entity.ed(enet, config.alpha)
            value = score.ed
            warnings = list(score.warnings) + [w for w in warnings if w not in score.warnings]
        components["ed_r"], components["ed_c"] = score.ed_r, score.ed_c
        return ScoreRecord(fp, config, value, components, tuple(warnings))

    return ScoreRecord(fp, config, value * weight, components, tuple(warnings))


def flagged_record(fp, config, error):
    """Return the record of a not-computable indicator."""
    return ScoreRecord(fp, config, None, {}, (error.reason,))


def score_or_flag(graph, fp, config, cohort=None, drop_refs=()):
    """Same as `compute_composite()`, with not-computable turned into a flagged record."""
    try:
        return compute_composite(graph, fp, config, cohort, drop_refs)
    except utils.NotComputableError as e:
        logger.debug("%s: %s not computable (%s).", fp, config.label(), e)
        return flagged_record(fp, config, e)
