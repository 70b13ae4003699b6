"""Synthetic graphs and record sets with known structure."""

from __future__ import annotations

import numpy as np

from .corpus import IpcCode, PatentRecord
from .graph import HeteroGraph

FULL_SCALE_NODES = 6443
FULL_SCALE_EDGES = 8928
FULL_SCALE_ISOLATED = 650


def planted_partition(n: int, blocks: int, p_in: float, p_out: float, seed: int = 0):
    """Stochastic block graph with equal blocks. Returns ``(graph, labels)``."""
    rng = np.random.default_rng(seed)
    labels = np.arange(n) * blocks // n
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(labels[iu] == labels[ju], p_in, p_out)
    keep = rng.random(len(iu)) < prob
    return HeteroGraph.from_edges(n, zip(iu[keep], ju[keep])), labels


def two_cliques(size: int = 20):
    """Two ``size``-cliques joined by a single edge. Returns ``(graph, labels)``."""
    edges = [(i, j) for i in range(size) for j in range(i + 1, size)]
    edges += [(i + size, j + size) for i, j in edges]
    edges.append((0, size))
    return HeteroGraph.from_edges(2 * size, edges), np.repeat([0, 1], size)


def triangles_with_bridge():
    """Nodes 0-2 and 3-5 form triangles; (2, 3) is the bridge."""
    return HeteroGraph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def _subclass(i: int) -> str:
    section = "ABCDEFGH"[i % 8]
    return f"{section}{(i // 8) % 100:02d}{chr(ord('A') + (i // 800) % 26)}"


def block_patent_records(blocks: int = 10, per_block: int = 30) -> list[PatentRecord]:
    """Each block of patents shares one subclass used by no other block."""
    records = []
    for b in range(blocks):
        code = IpcCode(*_split(_subclass(b)), "1/00")
        for j in range(per_block):
            records.append(PatentRecord(registration_id=f"P{b:02d}{j:03d}", ipc_codes=[code]))
    return records


def _split(subclass: str):
    return subclass[0], subclass[1:3], subclass[3]


def full_scale_records(seed: int = 0, n_patents: int = 5000, n_ipc: int = 643,
                        n_institutions: int = FULL_SCALE_NODES - 5000 - 643,
                        n_supported: int = 3000) -> list[PatentRecord]:
    """Records whose graph has the published node, edge and isolated counts.

    IPC and institution popularity follow a Zipf law, which gives the degree
    distribution a heavy tail. Every IPC and institution is used at least once,
    so only the ``FULL_SCALE_ISOLATED`` patents without IPC or institution are
    isolated.
    """
    rng = np.random.default_rng(seed)
    linked = n_patents - FULL_SCALE_ISOLATED
    extra = FULL_SCALE_EDGES - linked - n_supported
    if extra < 0 or n_ipc > linked + extra or n_institutions > n_supported:
        raise ValueError("inconsistent synthetic sizes")

    def zipf_pick(count, size, exponent):
        w = 1.0 / np.arange(1, count + 1) ** exponent
        return rng.choice(count, size=size, p=w / w.sum())

    ipc_of = [set() for _ in range(linked)]
    # one IPC per linked patent, every IPC used at least once
    first = np.concatenate([np.arange(n_ipc), zipf_pick(n_ipc, linked - n_ipc, 1.1)])
    rng.shuffle(first)
    for p, c in enumerate(first):
        ipc_of[p].add(int(c))
    added = 0
    while added < extra:
        p = int(rng.integers(linked))
        c = int(zipf_pick(n_ipc, 1, 1.1)[0])
        if c not in ipc_of[p]:
            ipc_of[p].add(c)
            added += 1

    inst = np.concatenate([np.arange(n_institutions),
                           zipf_pick(n_institutions, n_supported - n_institutions, 1.2)])
    rng.shuffle(inst)
    supported = rng.choice(linked, size=n_supported, replace=False)
    inst_of = {int(p): int(i) for p, i in zip(supported, inst)}

    records = []
    for p in range(n_patents):
        if p < linked:
            codes = [IpcCode(*_split(_subclass(c)), "1/00") for c in sorted(ipc_of[p])]
            institution = f"Institution {inst_of[p]}" if p in inst_of else None
        else:
            codes, institution = [], None
        records.append(PatentRecord(registration_id=f"R{p:05d}", ipc_codes=codes,
                                    institution=institution))
    return records
