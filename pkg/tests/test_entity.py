"""
Unit tests for disruptkit.

Test functions from module entity.
"""

import io
import pathlib
from fractions import Fraction

import pytest

from disruptkit import entity
from disruptkit import focal
from disruptkit import graph as graph_store
from disruptkit import indicators
from disruptkit import oracle
from disruptkit import utils


DIR_DATA = "test_data"
PATH_ROOT_DATA = pathlib.Path(__file__).parent / DIR_DATA
UNBOUNDED = graph_store.Window()


def load_raw(raw):
    """Load a RawEdgeList through the ingest formats."""
    nodes, edges = oracle.to_sources(raw)
    return graph_store.load_graph(io.StringIO(nodes), io.StringIO(edges))


def make_enet(fp_elements, ref_elements, partitions, year=2000, n_s=0):
    """Build an EntityNetwork by hand."""
    return focal.EntityNetwork(fp="FP", fp_year=year, mode=focal.ENTITY,
                               fp_elements=frozenset(fp_elements),
                               ref_elements=frozenset(ref_elements),
                               citer_partitions=tuple(partitions),
                               n_citers=len(partitions), n_s=n_s)


class TestED():
    """Test class for ed()."""

    def setup_class(self):
        """Initialize attributes."""
        with open(PATH_ROOT_DATA / "six_nodes.jsonl", encoding="utf-8") as nodes, \
                open(PATH_ROOT_DATA / "six_edges.csv", encoding="utf-8") as edges:
            self.graph = graph_store.load_graph(nodes, edges)
        self.enet = focal.extract_entity_network(self.graph, "P0", UNBOUNDED)

    def test_ed(self):
        """fp {a,b,c}, refs {c,d}, citer {a,e}."""
        score = entity.ed(self.enet)
        assert score.ed_r == Fraction(1, 3)
        assert score.ed_c == 1
        assert score.ed == Fraction(2, 3)
        assert score.alpha == Fraction(1, 2)
        assert "citers_missing_elements" in score.warnings

    @pytest.mark.parametrize('alpha, value', [
        (1, Fraction(1, 3)),
        (0, Fraction(1)),
        (Fraction(1, 4), Fraction(5, 6)),
    ])
    def test_alpha(self, alpha, value):
        """Test for the ED_R weight.

        Parameters
        ----------
        alpha : Fraction
            Weight of ED_R.
        value : Fraction
            Expected ED.
        """
        assert entity.ed(self.enet, alpha).ed == value

    def test_categories_overlap(self):
        """Element a is RF for the focal paper and CF again in its citer."""
        assert self.enet.fp_elements - self.enet.ref_elements == {"a", "b"}
        assert self.enet.n_rf == 2
        assert self.enet.n_rb == 1
        (partition,) = self.enet.citer_partitions
        assert partition == focal.CiterPartition("c1", n_cf=1, n_ca=0, n_cr=0, n_cc=1)
        score = entity.ed(self.enet)
        assert score.ed_r > 0
        assert score.ed_c > 0

    def test_alpha_range(self):
        """alpha outside [0, 1] is rejected."""
        with pytest.raises(ValueError):
            entity.ed(self.enet, 2)

    def test_full_overlap(self):
        """Elements all found in the references give ED_R = -1."""
        enet = make_enet({"a", "b"}, {"a", "b", "z"},
                         [focal.CiterPartition("c", 0, 1, 0, 0)])
        assert entity.ed(enet).ed_r == -1

    def test_skipped_citers(self):
        """Citers without elements are skipped and flagged."""
        enet = make_enet({"a"}, set(), [focal.CiterPartition("c1", 1, 0, 0, 0),
                                        focal.CiterPartition("c2", 0, 0, 0, 0)])
        score = entity.ed(enet)
        assert score.ed_c == 1
        assert score.warnings == ("citers_skipped",)

    @pytest.mark.parametrize('enet, reason', [
        (make_enet(set(), {"a"}, [focal.CiterPartition("c", 1, 0, 0, 0)]), "no_elements"),
        (make_enet({"a"}, {"a"}, []), "no_retained_citers"),
        (make_enet({"a"}, {"a"}, [focal.CiterPartition("c", 0, 0, 0, 0)]),
         "no_retained_citers"),
    ])
    def test_not_computable(self, enet, reason):
        """Test for not computable ED."""
        with pytest.raises(utils.NotComputableError) as err:
            entity.ed(enet)
        assert err.value.reason == reason


class TestCohort():
    """Test class for shared_citer_count() and cohort_stats()."""

    def setup_class(self):
        """Initialize attributes."""
        # A, B and C (2000) are cited by 1, 3 and 5 papers sharing element "k".
        edges = [("a0", "A")]
        edges += [(f"b{i}", "B") for i in range(3)]
        edges += [(f"c{i}", "C") for i in range(5)]
        edges += [("d0", "D"), ("n0", "A")]
        years = {paper: 2001 for paper in {a for a, _ in edges}}
        years.update({"A": 2000, "B": 2000, "C": 2000, "D": 1999, "E": 1998, "n0": 2001})
        elements = {paper: ("k",) for paper in years}
        elements.update({"n0": ("other",), "E": None})
        self.graph = load_raw(oracle.RawEdgeList(tuple(edges), years, elements))

    def test_shared_citer_count(self):
        """n0 shares nothing with A."""
        assert entity.shared_citer_count(self.graph, "A", UNBOUNDED) == 1
        assert entity.shared_citer_count(self.graph, "C", UNBOUNDED) == 5
        assert entity.shared_citer_count(self.graph, "E", UNBOUNDED) is None

    def test_cohort_stats(self):
        """Extrema per year, years without element papers absent."""
        stats = entity.cohort_stats(self.graph, UNBOUNDED)
        assert stats[2000] == (1, 5)
        assert stats[1999] == (1, 1)
        assert 1998 not in stats
        # Citers of 2001 are cited by nobody.
        assert stats[2001] == (0, 0)

    def test_windowed_cohort(self):
        """A cutoff before every citer keeps nobody."""
        stats = entity.cohort_stats(self.graph, graph_store.Window.absolute(2000))
        assert stats[2000] == (0, 0)


class TestMED():
    """Test class for med()."""

    def setup_class(self):
        """Initialize attributes."""
        self.enet = make_enet({"a", "b", "c"}, {"c", "d"},
                              [focal.CiterPartition("c1", 1, 0, 0, 1)], n_s=3)
        self.stats = entity.CohortStats({2000: (1, 5), 2001: (4, 4)}, UNBOUNDED)

    def test_med(self):
        """N_S = 3 in a (1, 5) cohort gives m_t = 0.5."""
        score = entity.med(self.enet, Fraction(1, 2), self.stats)
        assert score.m_t == Fraction(1, 2)
        assert score.value == Fraction(1, 3)
        assert score.ed.ed == Fraction(2, 3)

    def test_cohort_maximum(self):
        """N_S at the cohort maximum keeps ED."""
        score = entity.med(self.enet, Fraction(1, 2), self.stats, n_s=5)
        assert score.value == score.ed.ed

    def test_degenerate_cohort(self):
        """All papers of the year with the same N_S give 0 and a warning."""
        enet = make_enet({"a"}, set(), [focal.CiterPartition("c1", 1, 0, 0, 0)],
                         year=2001, n_s=4)
        score = entity.med(enet, Fraction(1, 2), self.stats)
        assert score.value == 0
        assert "degenerate_cohort" in score.warnings

    def test_missing_cohort(self):
        """A year without cohort is not computable."""
        enet = make_enet({"a"}, set(), [focal.CiterPartition("c1", 1, 0, 0, 0)], year=1990)
        with pytest.raises(utils.NotComputableError) as err:
            entity.med(enet, Fraction(1, 2), self.stats)
        assert err.value.reason == "missing_cohort_year"


class TestRandomCorpora():
    """Test class for the ED family on synthetic corpora."""

    @pytest.mark.parametrize('seed, mode', [(seed, mode) for seed in range(6)
                                            for mode in (focal.ENTITY, focal.RELATION)])
    def test_partition_totals(self, seed, mode):
        """Partitions cover the citer elements; scores stay in [-1, 1].

        Parameters
        ----------
        seed : int
            Random corpus seed.
        mode : str
            Entity or relation.
        """
        raw = oracle.random_graph(seed, 60, 4, (1990, 2000), element_vocab=6,
                                  missing_rate=0.1)
        graph = load_raw(raw)
        cohort = entity.cohort_stats(graph, UNBOUNDED, mode)
        naive_cohort = oracle.naive_cohort(raw, UNBOUNDED, mode)
        for fp in graph.ids:
            try:
                enet = focal.extract_entity_network(graph, fp, UNBOUNDED, mode)
            except utils.NotComputableError:
                continue
            for part in enet.citer_partitions:
                elements = focal.element_set(graph.record(part.citer).elements, mode)
                assert part.total == len(elements)
            config = indicators.IndicatorConfig(base="ed", mode=mode, m_weight=True)
            record = indicators.score_or_flag(graph, fp, config, cohort)
            assert record.value == oracle.naive_score(raw, fp, config, naive_cohort)
            if record.value is not None:
                assert -1 <= record.value <= 1
                assert 0 <= record.components["m_t"] <= 1
