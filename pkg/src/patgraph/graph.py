"""Undirected tripartite patent / IPC / institution graph."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .corpus import PatentRecord
from .errors import DataError, DuplicateRegistrationId

log = logging.getLogger(__name__)


class NodeKind(str, Enum):
    PATENT = "Patent"
    IPC = "Ipc"
    INSTITUTION = "Institution"


class EdgeKind(str, Enum):
    CLASSIFIED_AS = "ClassifiedAs"
    SUPPORTED_BY = "SupportedBy"


_ALLOWED = {
    EdgeKind.CLASSIFIED_AS: frozenset({NodeKind.PATENT, NodeKind.IPC}),
    EdgeKind.SUPPORTED_BY: frozenset({NodeKind.PATENT, NodeKind.INSTITUTION}),
}


@dataclass(frozen=True)
class NodeRef:
    id: int
    kind: NodeKind
    key: str


class HeteroGraph:
    """Immutable simple undirected graph with typed nodes and edges.

    Node ids are dense ``0..n-1``; edges are stored as ``(u, v)`` with
    ``u < v`` in insertion order. Generic graphs used for algorithm tests can
    be created with :meth:`from_edges`, in which case edge kinds are ``None``.
    """

    def __init__(self, kinds: Sequence[NodeKind], keys: Sequence[str],
                 edges: Iterable[tuple[int, int]], edge_kinds: Sequence[EdgeKind | None] | None = None):
        self.kinds = [NodeKind(k) for k in kinds]
        self.keys = [str(k) for k in keys]
        if len(self.kinds) != len(self.keys):
            raise ValueError("kinds and keys differ in length")
        n = len(self.keys)
        edges = list(edges)
        if edge_kinds is None:
            edge_kinds = [None] * len(edges)
        norm = []
        norm_kinds = []
        seen = set()
        for (u, v), ek in zip(edges, edge_kinds):
            u, v = int(u), int(v)
            if u == v:
                raise DataError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DataError(f"edge ({u}, {v}) out of range for {n} nodes")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen:
                continue
            seen.add((a, b))
            norm.append((a, b))
            norm_kinds.append(EdgeKind(ek) if ek is not None else None)
        self.edges = norm
        self.edge_kinds = norm_kinds
        self._index = {(kind, key): i for i, (kind, key) in enumerate(zip(self.kinds, self.keys))}
        if len(self._index) != n:
            raise DataError("duplicate (kind, key) node")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "HeteroGraph":
        return cls([NodeKind.PATENT] * n, [str(i) for i in range(n)], edges)

    @property
    def n(self) -> int:
        return len(self.keys)

    @property
    def m(self) -> int:
        return len(self.edges)

    def node(self, i: int) -> NodeRef:
        return NodeRef(i, self.kinds[i], self.keys[i])

    def find(self, key: str, kind: NodeKind | None = None) -> int | None:
        if kind is not None:
            return self._index.get((NodeKind(kind), key))
        for k in NodeKind:
            i = self._index.get((k, key))
            if i is not None:
                return i
        return None

    def nodes_of_kind(self, kind: NodeKind) -> list[int]:
        return [i for i, k in enumerate(self.kinds) if k == kind]

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def adjacency(self) -> list[np.ndarray]:
        """Sorted neighbor array per node."""
        csr = self.csr
        return [csr.indices[csr.indptr[i]:csr.indptr[i + 1]] for i in range(self.n)]

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix with sorted column indices."""
        e = self.edge_array
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        mat = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))
        mat.sort_indices()
        return mat

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.csr.indptr).astype(np.int64)

    def check_tripartite(self) -> None:
        """Raise :class:`DataError` unless every edge joins a permitted kind pair."""
        for (u, v), ek in zip(self.edges, self.edge_kinds):
            pair = frozenset({self.kinds[u], self.kinds[v]})
            if ek is None or pair != _ALLOWED[ek]:
                raise DataError(f"edge ({self.keys[u]}, {self.keys[v]}) of kind {ek} "
                                f"joins {self.kinds[u].value}-{self.kinds[v].value}")

    def subgraph(self, nodes: Iterable[int]) -> "HeteroGraph":
        """Induced subgraph; nodes are renumbered in ascending original id order."""
        keep = sorted(set(int(i) for i in nodes))
        remap = {old: new for new, old in enumerate(keep)}
        edges, kinds = [], []
        for (u, v), ek in zip(self.edges, self.edge_kinds):
            if u in remap and v in remap:
                edges.append((remap[u], remap[v]))
                kinds.append(ek)
        return HeteroGraph([self.kinds[i] for i in keep], [self.keys[i] for i in keep], edges, kinds)

    def without_kind(self, kind: NodeKind) -> "HeteroGraph":
        return self.subgraph(i for i, k in enumerate(self.kinds) if k != kind)

    def __repr__(self):
        return f"HeteroGraph(n={self.n}, m={self.m})"


def build_graph(records: Iterable[PatentRecord], institution_map: Mapping[str, str] | None = None,
                strict: bool = False) -> HeteroGraph:
    """Assemble the patent / IPC-subclass / institution graph.

    Node ids follow first appearance: each record contributes its patent node,
    then its subclass nodes, then its institution node.
    """
    institution_map = institution_map or {}
    kinds: list[NodeKind] = []
    keys: list[str] = []
    index: dict[tuple[NodeKind, str], int] = {}
    edges: list[tuple[int, int]] = []
    edge_kinds: list[EdgeKind] = []

    def node(kind, key):
        i = index.get((kind, key))
        if i is None:
            i = index[(kind, key)] = len(keys)
            kinds.append(kind)
            keys.append(key)
        return i

    for rec in records:
        if (NodeKind.PATENT, rec.registration_id) in index:
            if strict:
                raise DuplicateRegistrationId(f"duplicate registration id {rec.registration_id!r}")
            log.warning("duplicate registration id %r, keeping first", rec.registration_id)
            continue
        p = node(NodeKind.PATENT, rec.registration_id)
        for sub in rec.subclass_keys:
            edges.append((p, node(NodeKind.IPC, sub)))
            edge_kinds.append(EdgeKind.CLASSIFIED_AS)
        if rec.institution:
            canon = institution_map.get(rec.institution, rec.institution)
            edges.append((p, node(NodeKind.INSTITUTION, canon)))
            edge_kinds.append(EdgeKind.SUPPORTED_BY)
    return HeteroGraph(kinds, keys, edges, edge_kinds)


def degree_histogram(g: HeteroGraph) -> dict[int, int]:
    """Number of nodes per degree, keyed by degree in ascending order."""
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(d): int(c) for d, c in zip(values, counts)}


class Components(list):
    """List of node-id sets, ordered by smallest member; carries ``isolated_count``."""

    isolated_count: int = 0

    @property
    def labels(self) -> np.ndarray:
        n = sum(len(c) for c in self)
        out = np.empty(n, dtype=np.int64)
        for label, comp in enumerate(self):
            out[list(comp)] = label
        return out


def component_labels(g: HeteroGraph) -> np.ndarray:
    """Component label per node; labels are numbered by smallest member id."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    _, raw = csgraph.connected_components(g.csr, directed=False)
    # relabel so that label order follows first appearance
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[raw].astype(np.int64)


def connected_components(g: HeteroGraph) -> Components:
    labels = component_labels(g)
    comps = Components(set() for _ in range(int(labels.max()) + 1 if len(labels) else 0))
    for i, lab in enumerate(labels):
        comps[lab].add(i)
    comps.isolated_count = int(np.sum(g.degrees == 0))
    return comps


@dataclass
class PatentProjection:
    """Patent-only graph weighted by the number of shared IPC subclasses."""

    patents: list[int]
    weights: dict[tuple[int, int], int]

    def weight(self, a: int, b: int) -> int:
        return self.weights.get((a, b) if a < b else (b, a), 0)


def project_patent_graph(g: HeteroGraph) -> PatentProjection:
    patents = g.nodes_of_kind(NodeKind.PATENT)
    ipcs = g.nodes_of_kind(NodeKind.IPC)
    if not patents or not ipcs:
        return PatentProjection(patents, {})
    a = g.csr
    inc = a[patents][:, ipcs]
    shared = sp.triu(inc @ inc.T, k=1).tocoo()
    pid = np.asarray(patents)
    weights = {}
    for r, c, w in sorted(zip(shared.row, shared.col, shared.data)):
        if w > 0:
            u, v = int(pid[r]), int(pid[c])
            weights[(min(u, v), max(u, v))] = int(round(w))
    return PatentProjection(patents, weights)


def export_graph(g: HeteroGraph, node_path, edge_path) -> None:
    """Write ``id,kind,key`` and ``src,dst,kind`` CSV files (UTF-8, LF)."""
    try:
        with open(node_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "kind", "key"])
            for i, (kind, key) in enumerate(zip(g.kinds, g.keys)):
                w.writerow([i, kind.value, key])
        with open(edge_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["src", "dst", "kind"])
            for (u, v), ek in zip(g.edges, g.edge_kinds):
                w.writerow([u, v, ek.value if ek is not None else ""])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write graph export: {exc.strerror}", exc.filename) from exc


def load_graph(node_path, edge_path) -> HeteroGraph:
    """Inverse of :func:`export_graph`; ids must be dense and in order."""
    kinds, keys = [], []
    with open(node_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for expect, row in enumerate(reader):
            if int(row["id"]) != expect:
                raise DataError(f"{node_path}: node ids must be dense and ordered (row {expect})")
            kinds.append(NodeKind(row["kind"]))
            keys.append(row["key"])
    edges, edge_kinds = [], []
    with open(edge_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            edges.append((int(row["src"]), int(row["dst"])))
            edge_kinds.append(EdgeKind(row["kind"]) if row["kind"] else None)
    return HeteroGraph(kinds, keys, edges, edge_kinds)
