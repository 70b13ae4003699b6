"""Top-k similar-patent queries with IPC-overlap explanations."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .embed.matrix import EmbeddingMatrix
from .errors import KindMismatch, UnknownKey, ZeroVector
from .graph import HeteroGraph, NodeKind

log = logging.getLogger(__name__)


@dataclass
class Neighbor:
    key: str
    score: float
    shared_ipcs: list[str] = field(default_factory=list)
    jaccard: float | None = None


@dataclass
class Recommendation:
    query_key: str
    neighbors: list[Neighbor]

    def to_dict(self) -> dict:
        return {
            "query": self.query_key,
            "neighbors": [
                {"key": nb.key, "score": nb.score, "shared_ipcs": nb.shared_ipcs,
                 "jaccard": nb.jaccard}
                for nb in self.neighbors
            ],
        }


def top_k_similar(e: EmbeddingMatrix, query: str, k: int, candidates=None) -> Recommendation:
    """Exact cosine scan.

    ``candidates`` limits the result set (the query is always excluded).
    Zero-norm candidates are skipped. Ordering is by score descending, then
    key ascending, so it does not depend on row order.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    q = e.row(query)
    q_norm = np.linalg.norm(q)
    if q_norm == 0:
        raise ZeroVector(f"query {query!r} has a zero embedding")
    if candidates is None:
        idx = np.arange(len(e))
    else:
        idx = np.array([e.index(c) for c in candidates if c in e], dtype=np.int64)
    idx = idx[np.array([e.keys[i] != query for i in idx], dtype=bool)] if len(idx) else idx
    vecs = e.vectors[idx]
    norms = np.linalg.norm(vecs, axis=1)
    zero = norms == 0
    if zero.any():
        log.warning("skipping %d zero-norm candidate vectors", int(zero.sum()))
        idx, vecs, norms = idx[~zero], vecs[~zero], norms[~zero]
    scores = np.clip((vecs @ q) / (norms * q_norm), -1.0, 1.0)
    ranked = sorted(zip(scores.tolist(), (e.keys[i] for i in idx)), key=lambda t: (-t[0], t[1]))
    return Recommendation(query, [Neighbor(key, score) for score, key in ranked[:k]])


def _patent(g: HeteroGraph, key: str) -> int:
    i = g.find(key, NodeKind.PATENT)
    if i is not None:
        return i
    if g.find(key) is not None:
        raise KindMismatch(f"{key!r} is not a patent node")
    raise UnknownKey(f"no node with key {key!r}")


def ipc_set(g: HeteroGraph, key: str) -> set[str]:
    i = _patent(g, key)
    return {g.keys[j] for j in g.adjacency[i] if g.kinds[j] == NodeKind.IPC}


def explain_similarity(g: HeteroGraph, a: str, b: str) -> tuple[list[str], float]:
    """Shared IPC subclasses (sorted) and the Jaccard index of the two IPC sets."""
    sa, sb = ipc_set(g, a), ipc_set(g, b)
    union = sa | sb
    shared = sorted(sa & sb)
    return shared, (len(shared) / len(union) if union else 0.0)


def recommend(g: HeteroGraph, e: EmbeddingMatrix, query: str, k: int = 5) -> Recommendation:
    """Top-k patents for ``query`` with explanations attached."""
    _patent(g, query)
    patents = [g.keys[i] for i in g.nodes_of_kind(NodeKind.PATENT)]
    rec = top_k_similar(e, query, k, candidates=patents)
    for nb in rec.neighbors:
        nb.shared_ipcs, nb.jaccard = explain_similarity(g, query, nb.key)
    return rec


def evaluate_recommender(g: HeteroGraph, e: EmbeddingMatrix, k: int = 5) -> float:
    """Macro-averaged precision@k: share of top-k neighbors with a common IPC.

    Patents without any IPC subclass are not queried.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    patents = [g.keys[i] for i in g.nodes_of_kind(NodeKind.PATENT)]
    ipcs = {p: ipc_set(g, p) for p in patents}
    scores = []
    for p in patents:
        if not ipcs[p] or p not in e:
            continue
        try:
            rec = top_k_similar(e, p, k, candidates=patents)
        except ZeroVector:
            log.warning("skipping query %r with zero embedding", p)
            continue
        if rec.neighbors:
            hits = sum(1 for nb in rec.neighbors if ipcs[p] & ipcs[nb.key])
            scores.append(hits / len(rec.neighbors))
    return float(np.mean(scores)) if scores else 0.0
