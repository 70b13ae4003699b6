"""Skip-gram with negative sampling over random-walk corpora."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyCorpus
from .matrix import EmbeddingMatrix
from .walks import WalkCorpus

# pairs are shuffled and streamed in chunks of this many walks
_CHUNK_WALKS = 20_000


def _log_sigmoid_neg(x):
    """-log(sigmoid(x)), stable for large |x|."""
    return np.logaddexp(0.0, -x)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def batch_grads(u, v_pos, v_neg):
    """Loss and gradients for a batch of (center, context, negatives) rows.

    Shapes: ``u`` and ``v_pos`` are (B, d), ``v_neg`` is (B, K, d). The loss per
    row is ``-log s(u.v_pos) - sum_k log s(-u.v_neg[k])``.
    """
    x_pos = np.einsum("bd,bd->b", u, v_pos)
    x_neg = np.einsum("bd,bkd->bk", u, v_neg)
    loss = _log_sigmoid_neg(x_pos) + _log_sigmoid_neg(-x_neg).sum(axis=1)
    c_pos = _sigmoid(x_pos) - 1.0
    c_neg = _sigmoid(x_neg)
    g_u = c_pos[:, None] * v_pos + np.einsum("bk,bkd->bd", c_neg, v_neg)
    g_pos = c_pos[:, None] * u
    g_neg = c_neg[:, :, None] * u[:, None, :]
    return loss, g_u, g_pos, g_neg


def pair_loss(u, v_pos, v_neg) -> float:
    loss, *_ = batch_grads(u[None], v_pos[None], v_neg[None])
    return float(loss[0])


def pair_grads(u, v_pos, v_neg):
    """Gradients of :func:`pair_loss` w.r.t. ``u``, ``v_pos`` and ``v_neg``."""
    _, g_u, g_pos, g_neg = batch_grads(u[None], v_pos[None], v_neg[None])
    return g_u[0], g_pos[0], g_neg[0]


def table_loss(w_in, w_out, centers, contexts, negatives) -> float:
    loss, *_ = batch_grads(w_in[centers], w_out[contexts], w_out[negatives])
    return float(loss.sum())


def table_grads(w_in, w_out, centers, contexts, negatives):
    """Dense gradients of :func:`table_loss` w.r.t. both tables."""
    _, g_u, g_pos, g_neg = batch_grads(w_in[centers], w_out[contexts], w_out[negatives])
    gi = np.zeros_like(w_in)
    go = np.zeros_like(w_out)
    np.add.at(gi, centers, g_u)
    np.add.at(go, contexts, g_pos)
    np.add.at(go, negatives, g_neg)
    return gi, go


def context_pairs(walks, window: int) -> np.ndarray:
    """All (center, context) pairs within ``window`` positions, center != context.

    Pairs come out grouped by offset, not in walk order.
    """
    if not walks:
        return np.zeros((0, 2), dtype=np.int64)
    width = max(len(w) for w in walks)
    mat = np.full((len(walks), width), -1, dtype=np.int64)
    for i, w in enumerate(walks):
        mat[i, :len(w)] = w
    out = []
    for off in range(1, min(window, width - 1) + 1):
        a, b = mat[:, :-off].ravel(), mat[:, off:].ravel()
        ok = (a >= 0) & (b >= 0) & (a != b)
        out.append(np.stack([a[ok], b[ok]], axis=1))
        out.append(np.stack([b[ok], a[ok]], axis=1))
    return np.concatenate(out) if out else np.zeros((0, 2), dtype=np.int64)


def _pair_count(walks, window) -> int:
    total = 0
    for w in walks:
        length = len(w)
        for off in range(1, min(window, length - 1) + 1):
            total += 2 * (length - off)
    return total


def noise_distribution(counts, power: float = 0.75) -> np.ndarray:
    w = np.asarray(counts, dtype=float) ** power
    return w / w.sum()


def sgd_epochs(w_in, w_out, pair_chunks, total_pairs, noise_cdf, epochs, negatives, lr,
               batch_size, rng):
    """Shared minibatch SGD loop with linear decay from ``lr`` to ``lr / 100``.

    ``pair_chunks`` is a callable returning an iterable of (P, 2) arrays for one
    epoch. Gradients within a batch are evaluated at the batch's starting
    parameters and applied together.
    """
    seen = 0
    total = max(1, total_pairs * epochs)
    losses = []
    for _ in range(epochs):
        epoch_loss = 0.0
        for chunk in pair_chunks():
            chunk = chunk[rng.permutation(len(chunk))]
            for start in range(0, len(chunk), batch_size):
                batch = chunk[start:start + batch_size]
                b = len(batch)
                rate = lr * max(0.01, 1.0 - 0.99 * seen / total)
                seen += b
                neg = np.searchsorted(noise_cdf, rng.random((b, negatives)), side="right")
                neg = np.minimum(neg, len(noise_cdf) - 1)
                c, ctx = batch[:, 0], batch[:, 1]
                loss, g_u, g_pos, g_neg = batch_grads(w_in[c], w_out[ctx], w_out[neg])
                epoch_loss += float(loss.sum())
                np.add.at(w_in, c, -rate * g_u)
                np.add.at(w_out, ctx, -rate * g_pos)
                np.add.at(w_out, neg, -rate * g_neg)
        losses.append(epoch_loss)
    return losses


def train_sgns(corpus: WalkCorpus, dim: int = 64, window: int = 5, epochs: int = 1,
               negatives: int = 5, lr: float = 0.025, seed: int = 0, batch_size: int = 256,
               algo: str = "sgns") -> EmbeddingMatrix:
    """Train input vectors so nodes sharing walk contexts end up close."""
    if not corpus.walks:
        raise EmptyCorpus("walk corpus is empty")
    n = corpus.n_nodes or 1 + max(max(w) for w in corpus.walks)
    keys = corpus.keys or [str(i) for i in range(n)]
    rng = np.random.default_rng(seed)
    w_in = rng.uniform(-0.5 / dim, 0.5 / dim, size=(n, dim))
    w_out = np.zeros((n, dim))

    counts = np.bincount(np.concatenate([np.asarray(w) for w in corpus.walks]), minlength=n)
    noise_cdf = np.cumsum(noise_distribution(counts))
    noise_cdf /= noise_cdf[-1]

    walks = corpus.walks

    def chunks():
        for start in range(0, len(walks), _CHUNK_WALKS):
            yield context_pairs(walks[start:start + _CHUNK_WALKS], window)

    total = _pair_count(walks, window)
    losses = sgd_epochs(w_in, w_out, chunks, total, noise_cdf, epochs, negatives, lr,
                        batch_size, rng)
    meta = {"dim": dim, "window": window, "epochs": epochs, "negatives": negatives, "lr": lr,
            "batch_size": batch_size, "epoch_loss": losses, "mode": "deterministic"}
    return EmbeddingMatrix(list(keys), w_in, algo, seed, meta)
