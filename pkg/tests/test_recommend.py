import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from patgraph.corpus import PatentRecord, parse_ipc
from patgraph.embed import EmbeddingMatrix
from patgraph.errors import KindMismatch, UnknownKey, ZeroVector
from patgraph.graph import build_graph
from patgraph.recommend import evaluate_recommender, explain_similarity, recommend, top_k_similar


@settings(max_examples=100)
@given(arrays(np.float64, (8, 3), elements=st.integers(-3, 3).map(float)), st.integers(1, 8))
def test_top_k_matches_scan(vectors, k):
    keys = [f"n{i}" for i in range(8)]
    e = EmbeddingMatrix(keys, vectors)
    if not vectors[0].any():
        with pytest.raises(ZeroVector):
            top_k_similar(e, "n0", k)
        return
    got = [(nb.key, nb.score) for nb in top_k_similar(e, "n0", k).neighbors]
    want = oracles.cosine_scan(keys, vectors, "n0", k)
    assert [key for key, _ in got] == [key for key, _ in want]
    assert np.allclose([s for _, s in got], [s for _, s in want], atol=1e-12)


def test_top_k_rules():
    e = EmbeddingMatrix(["a", "b", "c"], np.array([[1.0, 0], [1.0, 0], [0, 1.0]]))
    with pytest.raises(ValueError):
        top_k_similar(e, "a", 0)
    rec = top_k_similar(e, "a", 5)
    assert [nb.key for nb in rec.neighbors] == ["b", "c"]
    assert [nb.key for nb in top_k_similar(e, "a", 5, candidates=["c", "zz"]).neighbors] == ["c"]


def _graph():
    recs = [PatentRecord("p1", ipc_codes=[parse_ipc("A61K 1/00"), parse_ipc("B82Y 1/00")],
                         institution="U"),
            PatentRecord("p2", ipc_codes=[parse_ipc("A61K 1/00")]),
            PatentRecord("p3", ipc_codes=[parse_ipc("H04M 1/00")])]
    return build_graph(recs)


def test_explanations():
    g = _graph()
    assert explain_similarity(g, "p1", "p2") == (["A61K"], 0.5)
    assert explain_similarity(g, "p1", "p3") == ([], 0.0)
    with pytest.raises(KindMismatch):
        explain_similarity(g, "p1", "A61K")
    with pytest.raises(UnknownKey):
        explain_similarity(g, "p1", "p9")


def test_recommend_only_returns_patents():
    g = _graph()
    e = EmbeddingMatrix(list(g.keys), np.random.default_rng(0).normal(size=(g.n, 4)))
    rec = recommend(g, e, "p1", k=5)
    assert {nb.key for nb in rec.neighbors} == {"p2", "p3"}
    assert rec.to_dict()["query"] == "p1"


def test_precision_of_perfect_and_adversarial_embeddings():
    g = _graph()
    keys = ["p1", "p2", "p3"]
    good = EmbeddingMatrix(keys, np.array([[1.0, 0.1], [1.0, 0.0], [0.0, 1.0]]))
    assert evaluate_recommender(g, good, k=1) == pytest.approx(2 / 3)
    bad = EmbeddingMatrix(keys, np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.1]]))
    assert evaluate_recommender(g, bad, k=1) == 0.0
