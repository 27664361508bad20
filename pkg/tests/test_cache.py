"""
Unit tests for disruptkit.

Test functions from module cache.
"""

import io
import pathlib

import pytest

from disruptkit import cache
from disruptkit import graph as graph_store
from disruptkit import oracle
from disruptkit import utils


DIR_DATA = "test_data"
PATH_ROOT_DATA = pathlib.Path(__file__).parent / DIR_DATA


def persist(graph):
    """Return the cache bytes of `graph`."""
    sink = io.BytesIO()
    cache.persist_graph(graph, sink)
    return sink.getvalue()


class TestCache():
    """Test class for the graph cache."""

    def setup_class(self):
        """Initialize attributes."""
        with open(PATH_ROOT_DATA / "six_nodes.jsonl", encoding="utf-8") as nodes, \
                open(PATH_ROOT_DATA / "messy_edges.csv", encoding="utf-8") as edges:
            self.graph = graph_store.load_graph(nodes, edges)
        self.data = persist(self.graph)

    def test_round_trip(self):
        """A persisted graph loads back field for field."""
        loaded = cache.load_cached(io.BytesIO(self.data))
        assert loaded == self.graph
        assert loaded.records == self.graph.records
        assert loaded.stats == self.graph.stats
        assert list(loaded.edges()) == list(self.graph.edges())
        assert loaded.record("P0").elements == frozenset({"a", "b", "c"})

    def test_deterministic_bytes(self):
        """Identical graphs give identical bytes."""
        assert persist(cache.load_cached(io.BytesIO(self.data))) == self.data

    def test_file_round_trip(self, tmpdir):
        """Test for persist_graph() and load_cached() on a file.

        Parameters
        ----------
        tmpdir: function
            pytest callback which return a unique directory.
        """
        path = tmpdir / "graph.bin"
        with open(path, "wb") as f:
            cache.persist_graph(self.graph, f)
        with open(path, "rb") as f:
            assert cache.load_cached(f) == self.graph

    def test_empty_graph(self):
        """An empty graph persists and loads back."""
        nodes, edges = oracle.to_sources(oracle.RawEdgeList(()))
        empty = graph_store.load_graph(io.StringIO(nodes), io.StringIO(edges))
        loaded = cache.load_cached(io.BytesIO(persist(empty)))
        assert len(loaded) == 0
        assert loaded.n_edges == 0
        assert loaded == empty

    def test_wrong_magic(self):
        """Wrong magic bytes give a version error."""
        with pytest.raises(utils.CacheVersionError) as err:
            cache.load_cached(io.BytesIO(b"DKG0" + self.data[4:]))
        assert "Not a DKG1 graph cache" in str(err.value)

    def test_checksum(self):
        """A flipped byte is detected."""
        data = bytearray(self.data)
        data[20] ^= 0xFF
        with pytest.raises(utils.CacheChecksumError):
            cache.load_cached(io.BytesIO(bytes(data)))

    @pytest.mark.parametrize('size', [4, 20, 60])
    def test_truncated(self, size):
        """A truncated cache is a checksum error.

        Parameters
        ----------
        size : int
            Number of bytes kept.
        """
        with pytest.raises(utils.CacheChecksumError):
            cache.load_cached(io.BytesIO(self.data[:size]))
