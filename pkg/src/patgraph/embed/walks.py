"""Uniform (DeepWalk) and second-order biased (Node2Vec) random walks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..graph import HeteroGraph
from .alias import alias_draw, build_alias
from .config import DeepWalkConfig, Node2VecConfig


@dataclass
class WalkCorpus:
    walks: list[list[int]]
    starts: list[int]
    seed: int
    keys: list[str] = field(default_factory=list)

    @property
    def n_nodes(self) -> int:
        return len(self.keys)

    def __len__(self):
        return len(self.walks)


def _walk_schedule(n: int, num_walks: int, seed: int) -> list[int]:
    """Start node of every walk: ``num_walks`` passes over shuffled node orders."""
    rng = np.random.default_rng(seed)
    starts = []
    for _ in range(num_walks):
        starts.extend(rng.permutation(n).tolist())
    return starts


def _walk_rng(seed: int, index: int):
    return np.random.default_rng([seed, index])


def _run(fn, starts, threads):
    jobs = list(enumerate(starts))
    if threads <= 1:
        return [fn(i, s) for i, s in jobs]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def generate_walks(g: HeteroGraph, cfg: DeepWalkConfig | None = None, seed: int = 0,
                   threads: int = 1) -> WalkCorpus:
    """Uniform random walks; each walk has its own RNG keyed by (seed, index)."""
    cfg = cfg or DeepWalkConfig()
    adj = g.adjacency
    length = cfg.walk_length

    def walk(index, start):
        u = _walk_rng(seed, index).random(length - 1)
        path = [start]
        v = start
        for step in range(length - 1):
            nb = adj[v]
            if len(nb) == 0:
                break
            v = int(nb[int(u[step] * len(nb))])
            path.append(v)
        return path

    starts = _walk_schedule(g.n, cfg.num_walks, seed)
    return WalkCorpus(_run(walk, starts, threads), starts, seed, list(g.keys))


class Node2VecSampler:
    """Per-(previous, current) alias tables for the p/q-biased transition."""

    def __init__(self, g: HeteroGraph, p: float = 1.0, q: float = 1.0):
        if p <= 0 or q <= 0:
            raise ValueError("p and q must be positive")
        self.adj = g.adjacency
        self.p = p
        self.q = q
        self._tables = {}

    def weights(self, prev: int, cur: int) -> np.ndarray:
        nb = self.adj[cur]
        prev_nb = self.adj[prev]
        pos = np.searchsorted(prev_nb, nb)
        linked = (pos < len(prev_nb)) & (prev_nb[np.minimum(pos, len(prev_nb) - 1)] == nb)
        w = np.where(linked, 1.0, 1.0 / self.q)
        w[nb == prev] = 1.0 / self.p
        return w

    def transition_probs(self, prev: int, cur: int):
        """``(neighbors, probabilities)`` of the step after ``prev -> cur``."""
        w = self.weights(prev, cur)
        return self.adj[cur], w / w.sum()

    def table(self, prev: int, cur: int):
        key = (prev, cur)
        tab = self._tables.get(key)
        if tab is None:
            tab = self._tables[key] = build_alias(self.weights(prev, cur))
        return tab

    def sample_next(self, prev: int, cur: int, rng, size: int = 1) -> np.ndarray:
        prob, alias = self.table(prev, cur)
        idx = alias_draw(prob, alias, rng.random(size), rng.random(size))
        return self.adj[cur][idx]


def generate_walks_biased(g: HeteroGraph, cfg: Node2VecConfig | None = None, seed: int = 0,
                          threads: int = 1) -> WalkCorpus:
    """Node2Vec walks: uniform first step, then alias-sampled biased steps."""
    cfg = cfg or Node2VecConfig()
    sampler = Node2VecSampler(g, cfg.p, cfg.q)
    adj = g.adjacency
    length = cfg.walk_length

    def walk(index, start):
        u = _walk_rng(seed, index).random(2 * length)
        path = [start]
        nb = adj[start]
        if length < 2 or len(nb) == 0:
            return path
        path.append(int(nb[int(u[0] * len(nb))]))
        for step in range(1, length - 1):
            prev, cur = path[-2], path[-1]
            prob, alias = sampler.table(prev, cur)
            k = min(int(u[2 * step] * len(prob)), len(prob) - 1)
            if u[2 * step + 1] >= prob[k]:
                k = alias[k]
            path.append(int(adj[cur][k]))
        return path

    starts = _walk_schedule(g.n, cfg.num_walks, seed)
    return WalkCorpus(_run(walk, starts, threads), starts, seed, list(g.keys))
