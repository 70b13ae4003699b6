"""Exact t-SNE projection of embeddings to two dimensions."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .embed.matrix import EmbeddingMatrix
from .errors import PerplexityTooLarge, TooFewPoints

log = logging.getLogger(__name__)

EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8


def _row_stats(d, beta):
    """Conditional distribution and its entropy (nats) for shifted distances."""
    e = np.exp(-beta * d)
    total = e.sum()
    p = e / total
    entropy = np.log(total) + beta * np.sum(d * p)
    return p, entropy


def conditional_probabilities(d2: np.ndarray, perplexity: float, tol: float = 1e-5,
                              max_steps: int = 50):
    """Row-wise Gaussian affinities ``p(j|i)`` at the target perplexity.

    ``d2`` is the squared distance matrix. For each row the precision is
    bisected in log space until ``exp(entropy)`` is within ``tol`` of
    ``perplexity`` or ``max_steps`` is reached. Returns ``(P, betas)``.
    """
    n = d2.shape[0]
    target = np.log(perplexity)
    P = np.zeros((n, n))
    betas = np.zeros(n)
    for i in range(n):
        d = np.delete(d2[i], i)
        d = d - d.min()
        scale = d.mean() if d.mean() > 0 else 1.0
        ds = d / scale
        lo, hi = -50.0, 50.0
        log_beta = 0.0
        p, h = _row_stats(ds, 1.0)
        for _ in range(max_steps):
            if abs(np.exp(h) - perplexity) < tol:
                break
            if h > target:
                lo = log_beta
            else:
                hi = log_beta
            log_beta = 0.5 * (lo + hi)
            p, h = _row_stats(ds, np.exp(log_beta))
        P[i, np.arange(n) != i] = p
        betas[i] = np.exp(log_beta) / scale
    return P, betas


def joint_probabilities(x: np.ndarray, perplexity: float) -> np.ndarray:
    sq = np.sum(x * x, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * x @ x.T, 0.0)
    np.fill_diagonal(d2, 0.0)
    cond, _ = conditional_probabilities(d2, perplexity)
    return (cond + cond.T) / (2.0 * len(x))


def _student_t(y):
    sq = np.sum(y * y, axis=1)
    num = 1.0 / (1.0 + np.maximum(sq[:, None] + sq[None, :] - 2.0 * y @ y.T, 0.0))
    np.fill_diagonal(num, 0.0)
    return num, num / num.sum()


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    mask = P > 0
    return float(np.sum(P[mask] * np.log(P[mask] / np.maximum(Q[mask], 1e-300))))


@dataclass
class Projection2D:
    keys: list[str]
    coords: np.ndarray
    final_kl: float
    iterations: int
    kl_history: dict[int, float] = field(default_factory=dict)

    @property
    def points(self) -> dict[str, tuple[float, float]]:
        return {k: (float(x), float(y)) for k, (x, y) in zip(self.keys, self.coords)}

    def to_csv(self, path, labels: dict[str, int] | None = None) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["key", "x", "y"] + (["label"] if labels is not None else []))
            for key, (x, y) in zip(self.keys, self.coords):
                row = [key, repr(float(x)), repr(float(y))]
                if labels is not None:
                    row.append(labels.get(key, ""))
                w.writerow(row)


def tsne_array(x: np.ndarray, perplexity: float = 30.0, iterations: int = 1000,
               learning_rate: float = 200.0, seed: int = 0, kl_every: int = 10):
    """t-SNE on a raw ``(n, d)`` array. Returns ``(coords, final_kl, kl_history)``."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 5:
        raise TooFewPoints(f"t-SNE needs at least 5 points, got {n}")
    if perplexity >= n:
        raise PerplexityTooLarge(f"perplexity {perplexity} must be below the point count {n}")
    if n < 3 * perplexity:
        log.warning("perplexity %s is large for %d points", perplexity, n)

    P = np.maximum(joint_probabilities(x, perplexity), 1e-12)
    np.fill_diagonal(P, 0.0)
    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(y)
    gains = np.ones_like(y)
    step = 1.0
    num, Q = _student_t(y)
    kl = kl_divergence(P, Q)
    history = {}
    for it in range(iterations):
        early = it < EXAGGERATION_ITERS
        if it == EXAGGERATION_ITERS:
            # second stage starts from rest
            update[:] = 0.0
            gains[:] = 1.0
        target = P * EXAGGERATION if early else P
        w = (target - Q) * num
        grad = 4.0 * (np.diag(w.sum(axis=1)) - w) @ y
        momentum = MOMENTUM_EARLY if early else MOMENTUM_LATE
        flip = (grad > 0) != (update > 0)
        gains = np.maximum(np.where(flip, gains + 0.2, gains * 0.8), 0.01)
        update = momentum * update - step * learning_rate * gains * grad
        y_new = y + update
        y_new -= y_new.mean(axis=0)
        num_new, Q_new = _student_t(y_new)
        kl_new = kl_divergence(P, Q_new)
        if not early and kl_new > kl:
            # adaptive restart: drop the step, kill momentum, shorten the step
            update[:] = 0.0
            gains[:] = 1.0
            step *= 0.5
        else:
            y, num, Q, kl = y_new, num_new, Q_new, kl_new
            step = min(1.0, step * 1.25)
        done = it + 1
        if done % kl_every == 0 or done == iterations:
            history[done] = kl
    return y, kl, history


def tsne(e: EmbeddingMatrix, perplexity: float = 30.0, iterations: int = 1000,
         learning_rate: float = 200.0, seed: int = 0) -> Projection2D:
    coords, kl, history = tsne_array(e.vectors, perplexity, iterations, learning_rate, seed)
    return Projection2D(list(e.keys), coords, kl, iterations, history)
