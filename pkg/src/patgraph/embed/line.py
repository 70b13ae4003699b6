"""LINE: first- and second-order proximity embeddings by edge sampling."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyGraph
from ..graph import HeteroGraph
from .alias import AliasSampler
from .config import LineConfig
from .matrix import EmbeddingMatrix
from .sgns import batch_grads, noise_distribution


def _targets(emb, ctx, order):
    return emb if order == "1" else ctx


def line_loss(emb, ctx, src, dst, neg, order="2") -> float:
    """Summed LINE loss over sampled arcs ``src -> dst`` with negatives ``neg``.

    Order 1 scores ``emb[src] . emb[dst]``; order 2 scores ``emb[src] . ctx[dst]``.
    """
    tgt = _targets(emb, ctx, order)
    loss, *_ = batch_grads(emb[src], tgt[dst], tgt[neg])
    return float(loss.sum())


def line_grads(emb, ctx, src, dst, neg, order="2"):
    """Dense gradients of :func:`line_loss` w.r.t. ``emb`` and ``ctx``."""
    _, g_u, g_pos, g_neg = batch_grads(emb[src], _targets(emb, ctx, order)[dst],
                                       _targets(emb, ctx, order)[neg])
    ge = np.zeros_like(emb)
    gc = np.zeros_like(ctx)
    np.add.at(ge, src, g_u)
    side = ge if order == "1" else gc
    np.add.at(side, dst, g_pos)
    np.add.at(side, neg, g_neg)
    return ge, gc


def _train_order(g: HeteroGraph, dim, order, cfg: LineConfig, rng):
    n = g.n
    emb = rng.uniform(-0.5 / dim, 0.5 / dim, size=(n, dim))
    ctx = np.zeros((n, dim))
    e = g.edge_array
    arcs = np.concatenate([e, e[:, ::-1]])
    edge_sampler = AliasSampler(np.ones(len(arcs)))
    noise_cdf = np.cumsum(noise_distribution(g.degrees))
    noise_cdf /= noise_cdf[-1]

    batches = -(-len(arcs) // cfg.batch_size)
    total = cfg.epochs * batches
    losses = []
    step = 0
    for _ in range(cfg.epochs):
        epoch_loss = 0.0
        for _ in range(batches):
            rate = cfg.lr * max(0.01, 1.0 - 0.99 * step / total)
            step += 1
            picked = arcs[edge_sampler.sample(rng, cfg.batch_size)]
            src, dst = picked[:, 0], picked[:, 1]
            neg = np.searchsorted(noise_cdf, rng.random((len(src), cfg.negatives)), side="right")
            neg = np.minimum(neg, n - 1)
            tgt = emb if order == "1" else ctx
            loss, g_u, g_pos, g_neg = batch_grads(emb[src], tgt[dst], tgt[neg])
            epoch_loss += float(loss.sum())
            np.add.at(emb, src, -rate * g_u)
            np.add.at(tgt, dst, -rate * g_pos)
            np.add.at(tgt, neg, -rate * g_neg)
        losses.append(epoch_loss)
    return emb, losses


def _unit_rows(x):
    norm = np.linalg.norm(x, axis=1, keepdims=True)
    return x / np.where(norm > 0, norm, 1.0)


def train_line(g: HeteroGraph, cfg: LineConfig | None = None, seed: int = 0) -> EmbeddingMatrix:
    """Edge-sampling SGD. ``order="concat"`` trains both orders at half
    dimension each and joins the row-normalized results."""
    cfg = cfg or LineConfig()
    if g.m == 0:
        raise EmptyGraph("LINE needs at least one edge")
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2)]
    meta = {"order": cfg.order, "dim": cfg.dim, "batch_size": cfg.batch_size,
            "epochs": cfg.epochs, "negatives": cfg.negatives, "lr": cfg.lr,
            "mode": "deterministic"}
    if cfg.order == "concat":
        first = cfg.dim // 2
        a, la = _train_order(g, first, "1", cfg, rngs[0])
        b, lb = _train_order(g, cfg.dim - first, "2", cfg, rngs[1])
        vectors = np.hstack([_unit_rows(a), _unit_rows(b)])
        meta["epoch_loss"] = {"1": la, "2": lb}
    else:
        vectors, losses = _train_order(g, cfg.dim, cfg.order, cfg, rngs[0])
        meta["epoch_loss"] = losses
    return EmbeddingMatrix(list(g.keys), vectors, f"line{cfg.order}", seed, meta)
