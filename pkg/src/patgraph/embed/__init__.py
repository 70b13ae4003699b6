"""Node-embedding trainers."""

from .config import DeepWalkConfig, LineConfig, Node2VecConfig, SdneConfig
from .line import train_line
from .matrix import EmbeddingMatrix, load_embeddings, save_embeddings
from .sdne import train_sdne
from .sgns import train_sgns
from .walks import Node2VecSampler, WalkCorpus, generate_walks, generate_walks_biased

ALGORITHMS = ("deepwalk", "node2vec", "line", "sdne")


def embed_graph(g, algo: str, cfg=None, seed: int = 0, threads: int = 1) -> EmbeddingMatrix:
    """Run one of :data:`ALGORITHMS` with its config (defaults when ``None``)."""
    if algo == "deepwalk":
        cfg = cfg or DeepWalkConfig()
        corpus = generate_walks(g, cfg, seed, threads)
        return train_sgns(corpus, cfg.dim, cfg.window, cfg.epochs, cfg.negatives, cfg.lr,
                          seed, cfg.batch_size, algo="deepwalk")
    if algo == "node2vec":
        cfg = cfg or Node2VecConfig()
        corpus = generate_walks_biased(g, cfg, seed, threads)
        e = train_sgns(corpus, cfg.dim, cfg.window, cfg.epochs, cfg.negatives, cfg.lr,
                       seed, cfg.batch_size, algo="node2vec")
        e.meta.update(p=cfg.p, q=cfg.q)
        return e
    if algo == "line":
        return train_line(g, cfg, seed)
    if algo == "sdne":
        return train_sdne(g, cfg, seed)
    raise ValueError(f"unknown embedding algorithm {algo!r}")


__all__ = [
    "ALGORITHMS", "DeepWalkConfig", "EmbeddingMatrix", "LineConfig", "Node2VecConfig",
    "Node2VecSampler", "SdneConfig", "WalkCorpus", "embed_graph", "generate_walks",
    "generate_walks_biased", "load_embeddings", "save_embeddings", "train_line",
    "train_sdne", "train_sgns",
]
