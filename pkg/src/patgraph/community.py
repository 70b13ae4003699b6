"""Girvan-Newman divisive community detection."""

from __future__ import annotations

import csv
import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .analytics import brandes
from .errors import EmptyGraph, UncoveredNode
from .graph import HeteroGraph, component_labels

log = logging.getLogger(__name__)


def _dense_labels(labels) -> np.ndarray:
    """Renumber labels densely in order of first appearance."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        return labels.astype(np.int64)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse]


@dataclass
class Partition:
    assignment: np.ndarray
    modularity: float = float("nan")

    def __post_init__(self):
        self.assignment = _dense_labels(self.assignment)

    @property
    def community_count(self) -> int:
        return int(self.assignment.max()) + 1 if len(self.assignment) else 0

    @property
    def nontrivial_count(self) -> int:
        """Communities with more than one member."""
        return int(np.sum(np.bincount(self.assignment) > 1)) if len(self.assignment) else 0

    def communities(self) -> list[list[int]]:
        out = [[] for _ in range(self.community_count)]
        for node, c in enumerate(self.assignment):
            out[c].append(node)
        return out


def modularity(g: HeteroGraph, p) -> float:
    """Newman modularity of an unweighted undirected graph."""
    labels = p.assignment if isinstance(p, Partition) else np.asarray(p)
    if len(labels) != g.n:
        raise UncoveredNode(f"partition covers {len(labels)} of {g.n} nodes")
    if g.m == 0:
        raise EmptyGraph("modularity is undefined without edges")
    labels = _dense_labels(labels)
    e = g.edge_array
    m = float(g.m)
    k = len(np.unique(labels))
    same = labels[e[:, 0]] == labels[e[:, 1]]
    inner = np.bincount(labels[e[same, 0]], minlength=k) / m
    degree_share = np.bincount(labels, weights=g.degrees, minlength=k) / (2.0 * m)
    return float(np.sum(inner - degree_share ** 2))


@dataclass
class DendrogramStep:
    removed_edge: tuple[int, int] | None
    removals: int
    partition: Partition


@dataclass
class Dendrogram:
    steps: list[DendrogramStep] = field(default_factory=list)
    removals: int = 0

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def _component(adj: list[set], start: int) -> list[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return sorted(seen)


def component_edge_betweenness(adj: list[set], nodes: list[int]) -> dict[tuple[int, int], float]:
    """Edge betweenness restricted to the subgraph induced by ``nodes``."""
    local = {u: i for i, u in enumerate(nodes)}
    edges = sorted((u, v) for u in nodes for v in adj[u] if u < v)
    if not edges:
        return {}
    arr = np.array([(local[u], local[v]) for u, v in edges], dtype=np.int64)
    _, values = brandes(len(nodes), arr)
    return dict(zip(edges, values.tolist()))


def girvan_newman(g: HeteroGraph, max_removals: int | None = None,
                  plateau: int | None = None, tie_tol: float = 1e-9):
    """Remove maximal-betweenness edges until none remain.

    After each removal only the component(s) that contained the removed edge
    are re-scored. Whenever the component count grows, the component partition
    is recorded with its modularity measured on the original graph. Ties on
    betweenness (within ``tie_tol`` relative) go to the smallest ``(u, v)``.

    ``plateau`` stops after that many consecutive splits without a new best
    modularity. Returns ``(dendrogram, best_partition)``.
    """
    labels = component_labels(g)
    initial = Partition(labels)
    dendro = Dendrogram()
    if g.m == 0:
        dendro.steps.append(DendrogramStep(None, 0, initial))
        return dendro, initial
    initial.modularity = modularity(g, initial)
    dendro.steps.append(DendrogramStep(None, 0, initial))
    best = initial

    adj = [set(map(int, nb)) for nb in g.adjacency]
    # sorted so the first maximal index is the lexicographically smallest edge
    edges = sorted(g.edges)
    pos = {e: i for i, e in enumerate(edges)}
    score = np.full(len(edges), -np.inf)
    _, full = brandes(g.n, g.edge_array)
    score[[pos[e] for e in g.edges]] = full

    labels = labels.copy()
    next_label = int(labels.max()) + 1
    since_best = 0
    limit = len(edges) if max_removals is None else min(max_removals, len(edges))
    removals = 0
    while removals < limit:
        top = score.max()
        idx = int(np.flatnonzero(score >= top - tie_tol * max(1.0, abs(top)))[0])
        u, v = edges[idx]
        score[idx] = -np.inf
        adj[u].discard(v)
        adj[v].discard(u)
        removals += 1

        comp_u = _component(adj, u)
        split = v not in set(comp_u)
        touched = [comp_u]
        if split:
            comp_v = _component(adj, v)
            touched.append(comp_v)
            labels[comp_v] = next_label
            next_label += 1
        for comp in touched:
            for e, val in component_edge_betweenness(adj, comp).items():
                score[pos[e]] = val

        if split:
            part = Partition(labels)
            part.modularity = modularity(g, part)
            dendro.steps.append(DendrogramStep((u, v), removals, part))
            if part.modularity > best.modularity:
                best = part
                since_best = 0
            else:
                since_best += 1
                if plateau is not None and since_best >= plateau:
                    log.info("modularity plateau after %d removals", removals)
                    break
    dendro.removals = removals
    return dendro, best


def write_partition(g: HeteroGraph, p: Partition, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["key", "community_id"])
        for key, c in zip(g.keys, p.assignment):
            w.writerow([key, int(c)])


def read_partition(path) -> dict[str, int]:
    with open(path, encoding="utf-8", newline="") as fh:
        return {row["key"]: int(row["community_id"]) for row in csv.DictReader(fh)}
