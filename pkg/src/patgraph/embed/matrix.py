"""Embedding table and its plain-text file format."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, DuplicateKey, MalformedHeader, UnknownKey


@dataclass
class EmbeddingMatrix:
    keys: list[str]
    vectors: np.ndarray
    algo: str = ""
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=float)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.keys):
            raise DimensionMismatch(f"{len(self.keys)} keys but vectors of shape {self.vectors.shape}")
        self._index = {}
        for i, k in enumerate(self.keys):
            if k in self._index:
                raise DuplicateKey(f"duplicate embedding key {k!r}")
            self._index[k] = i

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self._index

    def index(self, key: str) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise UnknownKey(f"no embedding row for {key!r}") from None

    def row(self, key: str) -> np.ndarray:
        return self.vectors[self.index(key)]

    def subset(self, keys) -> "EmbeddingMatrix":
        idx = [self.index(k) for k in keys]
        return EmbeddingMatrix(list(keys), self.vectors[idx], self.algo, self.seed, dict(self.meta))


def save_embeddings(e: EmbeddingMatrix, path) -> None:
    """Write ``<n> <dim>`` then ``<key> <f1> ... <fdim>`` per row.

    Floats use Python's shortest round-trip repr, so loading is exact.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(e)} {e.dim}\n")
        for key, vec in zip(e.keys, e.vectors):
            if "\n" in key or key != key.strip() or not key:
                raise DuplicateKey(f"embedding key {key!r} cannot be written")
            fh.write(key + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def load_embeddings(path, algo: str = "") -> EmbeddingMatrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        try:
            n, dim = (int(x) for x in header)
        except ValueError:
            raise MalformedHeader(f"{path}: expected '<n> <dim>', got {' '.join(header)!r}") from None
        if n < 0 or dim < 1:
            raise MalformedHeader(f"{path}: bad header {n} {dim}")
        keys, rows = [], []
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) < dim + 1:
                raise DimensionMismatch(f"{path}:{lineno}: expected {dim} values")
            try:
                vec = [float(x) for x in parts[-dim:]]
            except ValueError:
                raise DimensionMismatch(f"{path}:{lineno}: expected {dim} numeric values") from None
            keys.append(" ".join(parts[:-dim]))
            rows.append(vec)
    if len(keys) != n:
        raise MalformedHeader(f"{path}: header promises {n} rows, found {len(keys)}")
    return EmbeddingMatrix(keys, np.array(rows, dtype=float).reshape(n, dim), algo)
