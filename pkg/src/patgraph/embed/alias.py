"""Walker's alias method for O(1) sampling from a discrete distribution."""

import numpy as np


def build_alias(weights):
    """Return ``(prob, alias)`` tables for the normalized ``weights``."""
    w = np.asarray(weights, dtype=float)
    k = len(w)
    if k == 0 or w.sum() <= 0:
        raise ValueError("alias table needs positive total weight")
    scaled = w * (k / w.sum())
    prob = np.ones(k)
    alias = np.arange(k)
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        g = large.pop()
        prob[s] = scaled[s]
        alias[s] = g
        scaled[g] -= 1.0 - scaled[s]
        (small if scaled[g] < 1.0 else large).append(g)
    # leftovers are 1 up to rounding
    for i in small + large:
        prob[i] = 1.0
    return prob, alias


def alias_draw(prob, alias, u_pick, u_accept):
    """Vectorized draw given two arrays of uniforms in [0, 1)."""
    idx = np.minimum((np.asarray(u_pick) * len(prob)).astype(np.int64), len(prob) - 1)
    return np.where(np.asarray(u_accept) < prob[idx], idx, alias[idx])


class AliasSampler:
    def __init__(self, weights):
        self.prob, self.alias = build_alias(weights)

    def __len__(self):
        return len(self.prob)

    def sample(self, rng, size):
        return alias_draw(self.prob, self.alias, rng.random(size), rng.random(size))
