"""Module for the binary graph cache.

Layout of a cache file::

    b"DKG1"                      magic bytes, also the format version
    <u64 length><nodes>          JSON lines, one PaperRecord per line, id order
    <u64 length><edges>          two .npy arrays: CSR indptr then indices
    <u64 length><stats>          JSON object of GraphStats
    <32 bytes>                   sha256 of everything above

Lengths are little-endian unsigned 64-bit integers.
"""

import dataclasses
import hashlib
import io
import json
import logging
import struct

import numpy as np
from scipy import sparse

from . import graph as graph_store
from . import utils

logger = logging.getLogger(__name__)

MAGIC = b"DKG1"
LENGTH = struct.Struct("<Q")
CHECKSUM_SIZE = hashlib.sha256().digest_size


def _section(payload):
    return LENGTH.pack(len(payload)) + payload


def _dump_nodes(graph):
    return "\n".join(record.to_json() for record in graph.records).encode("utf-8")


def _dump_edges(graph):
    buffer = io.BytesIO()
    adjacency = graph.adjacency
    np.save(buffer, adjacency.indptr.astype(np.int64), allow_pickle=False)
    np.save(buffer, adjacency.indices.astype(np.int32), allow_pickle=False)
    return buffer.getvalue()


def _dump_stats(graph):
    return json.dumps(dataclasses.asdict(graph.stats), sort_keys=True).encode("utf-8")


def persist_graph(graph, sink):
    """Write `graph` to a binary sink in the DKG1 format.

    Identical graphs always give identical bytes.

    Parameters
    ----------
    graph : CitationGraph
    sink : writable binary stream
    """
    body = (MAGIC + _section(_dump_nodes(graph)) + _section(_dump_edges(graph))
            + _section(_dump_stats(graph)))
    sink.write(body + hashlib.sha256(body).digest())
    logger.debug("Graph cache written (%d bytes).", len(body) + CHECKSUM_SIZE)


def _read_sections(body, count):
    sections = []
    offset = len(MAGIC)
    for _ in range(count):
        if offset + LENGTH.size > len(body):
            raise utils.CacheChecksumError("Graph cache is truncated.")
        (size,) = LENGTH.unpack_from(body, offset)
        offset += LENGTH.size
        if offset + size > len(body):
            raise utils.CacheChecksumError("Graph cache is truncated.")
        sections.append(body[offset:offset + size])
        offset += size
    if offset != len(body):
        raise utils.CacheFormatError("Graph cache has trailing data.")
    return sections


def _load_record(line):
    obj = json.loads(line)
    elements = obj["elements"]
    return graph_store.PaperRecord(
        obj["id"], obj["year"], obj["journal"], obj["discipline"],
        None if elements is None else frozenset(elements))


def load_cached(source):
    """Read a graph written by `persist_graph()`.

    Parameters
    ----------
    source : readable binary stream

    Returns
    -------
    CitationGraph

    Raises
    ------
    utils.CacheVersionError
        When the magic bytes are not b"DKG1".
    utils.CacheChecksumError
        When the file is truncated or its checksum does not match.
    """
    data = source.read()
    if data[:len(MAGIC)] != MAGIC:
        raise utils.CacheVersionError(
            f"Not a DKG1 graph cache (magic bytes {data[:len(MAGIC)]!r}).")
    if len(data) < len(MAGIC) + CHECKSUM_SIZE:
        raise utils.CacheChecksumError("Graph cache is truncated.")
    body, checksum = data[:-CHECKSUM_SIZE], data[-CHECKSUM_SIZE:]
    if hashlib.sha256(body).digest() != checksum:
        raise utils.CacheChecksumError("Graph cache checksum does not match.")

    nodes, edges, stats = _read_sections(body, 3)
    text = nodes.decode("utf-8")
    records = [_load_record(line) for line in text.split("\n")] if text else []
    buffer = io.BytesIO(edges)
    indptr = np.load(buffer, allow_pickle=False)
    indices = np.load(buffer, allow_pickle=False)
    n = len(records)
    adjacency = sparse.csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr),
                                  shape=(n, n))
    stats = graph_store.GraphStats(**json.loads(stats.decode("utf-8")))
    return graph_store.CitationGraph(records, adjacency, stats)
