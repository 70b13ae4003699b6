"""SDNE: deep autoencoder over adjacency rows with a first-order Laplacian term."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyGraph, NonFiniteLoss
from ..graph import HeteroGraph
from .config import SdneConfig
from .matrix import EmbeddingMatrix


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def init_params(n: int, hidden_sizes, rng, scale: float = 0.01):
    """``[(W, b), ...]`` for encoder layers followed by the mirrored decoder."""
    sizes = [n, *hidden_sizes]
    dims = list(zip(sizes[:-1], sizes[1:]))
    dims += [(b, a) for a, b in reversed(dims)]
    return [(rng.normal(0.0, scale, size=(a, b)), np.zeros(b)) for a, b in dims]


def penalty_matrix(x: np.ndarray, beta: float) -> np.ndarray:
    """``beta`` where the adjacency entry is nonzero, 1 elsewhere."""
    return np.where(x > 0, beta, 1.0)


def _forward(params, x):
    acts = [x]
    for w, b in params:
        acts.append(_sigmoid(acts[-1] @ w + b))
    return acts


def _parts(params, x, adj, beta, alpha, nu):
    acts = _forward(params, x)
    y = acts[len(params) // 2]
    pen = penalty_matrix(x, beta)
    diff = (acts[-1] - x) * pen
    lap = np.diag(adj.sum(axis=1)) - adj
    second = float(np.sum(diff ** 2))
    first = alpha * float(np.sum(y * (lap @ y)))
    reg = 0.5 * nu * sum(float(np.sum(w ** 2)) for w, _ in params)
    return acts, y, pen, lap, second, first, reg


def sdne_loss(params, x, adj, beta=5.0, alpha=0.2, nu=1e-5) -> float:
    """Total loss on a batch.

    ``x`` holds the batch's adjacency rows and ``adj`` the adjacency among the
    batch nodes. Reconstruction error is weighted by ``beta`` on nonzero
    entries; ``alpha`` scales the sum over batch edges of squared embedding
    distances; ``nu / 2`` scales the squared weight norms.
    """
    *_, second, first, reg = _parts(params, x, adj, beta, alpha, nu)
    return second + first + reg


def sdne_grads(params, x, adj, beta=5.0, alpha=0.2, nu=1e-5):
    """Loss and ``[(dW, db), ...]`` matching ``params``."""
    acts, y, pen, lap, second, first, reg = _parts(params, x, adj, beta, alpha, nu)
    depth = len(params)
    grads = [None] * depth
    d_act = 2.0 * (acts[-1] - x) * pen ** 2
    for layer in range(depth - 1, -1, -1):
        if layer == depth // 2 - 1:
            # this layer's output is the bottleneck
            d_act = d_act + 2.0 * alpha * (lap @ y)
        out = acts[layer + 1]
        dz = d_act * out * (1.0 - out)
        w, _ = params[layer]
        grads[layer] = (acts[layer].T @ dz + nu * w, dz.sum(axis=0))
        d_act = dz @ w.T
    return second + first + reg, grads


class _Adam:
    def __init__(self, params, lr, b1=0.9, b2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, b1, b2, eps
        self.t = 0
        self.m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
        self.v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]

    def step(self, params, grads):
        self.t += 1
        c1 = 1.0 - self.b1 ** self.t
        c2 = 1.0 - self.b2 ** self.t
        for i, ((w, b), (gw, gb)) in enumerate(zip(params, grads)):
            for j, (p, g) in enumerate(((w, gw), (b, gb))):
                m, v = self.m[i][j], self.v[i][j]
                m *= self.b1
                m += (1.0 - self.b1) * g
                v *= self.b2
                v += (1.0 - self.b2) * g * g
                p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def train_sdne(g: HeteroGraph, cfg: SdneConfig | None = None, seed: int = 0) -> EmbeddingMatrix:
    """Minibatch Adam over node batches; the embedding is the bottleneck layer.

    Adjacency rows are sliced from the sparse matrix and densified one batch
    at a time.
    """
    cfg = cfg or SdneConfig()
    if g.n < 2 or g.m == 0:
        raise EmptyGraph("SDNE needs at least two nodes and one edge")
    rng = np.random.default_rng(seed)
    params = init_params(g.n, cfg.hidden_sizes, rng)
    opt = _Adam(params, cfg.lr)
    csr = g.csr
    losses = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(g.n)
        epoch_loss = 0.0
        for start in range(0, g.n, cfg.batch_size):
            batch = np.sort(order[start:start + cfg.batch_size])
            x = csr[batch].toarray()
            adj = x[:, batch]
            loss, grads = sdne_grads(params, x, adj, cfg.beta, cfg.alpha, cfg.nu)
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"SDNE loss became {loss} at epoch {epoch}, batch offset {start}")
            opt.step(params, grads)
            epoch_loss += loss
        losses.append(epoch_loss)

    y = np.vstack([
        _forward(params[: len(params) // 2], csr[i:i + cfg.batch_size].toarray())[-1]
        for i in range(0, g.n, cfg.batch_size)
    ])
    meta = {"hidden_sizes": list(cfg.hidden_sizes), "batch_size": cfg.batch_size,
            "epochs": cfg.epochs, "alpha": cfg.alpha, "beta": cfg.beta, "nu": cfg.nu,
            "lr": cfg.lr, "optimizer": "adam", "epoch_loss": losses, "mode": "deterministic"}
    return EmbeddingMatrix(list(g.keys), y, "sdne", seed, meta)
