import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patgraph.embed import (DeepWalkConfig, EmbeddingMatrix, LineConfig, Node2VecConfig,
                            SdneConfig, embed_graph, generate_walks, generate_walks_biased,
                            load_embeddings, save_embeddings, train_line, train_sdne)
from patgraph.embed.alias import AliasSampler, build_alias
from patgraph.embed.sgns import context_pairs, noise_distribution, pair_grads, pair_loss
from patgraph.errors import (ConfigError, DimensionMismatch, DuplicateKey, EmptyGraph,
                             MalformedHeader, UnknownKey)
from patgraph.graph import HeteroGraph
from patgraph.synthetic import triangles_with_bridge, two_cliques


@settings(max_examples=100)
@given(st.lists(st.floats(0.0, 10.0), min_size=1, max_size=12).filter(lambda w: sum(w) > 0))
def test_alias_table_reproduces_weights(weights):
    prob, alias = build_alias(weights)
    k = len(weights)
    # probability mass of outcome j: own column acceptance plus aliased remainders
    mass = prob.copy()
    np.add.at(mass, alias, 1.0 - prob)
    assert np.allclose(mass / k, np.asarray(weights) / sum(weights), atol=1e-12)


def test_alias_sampler_frequencies():
    w = np.array([1.0, 2.0, 3.0, 4.0])
    draws = AliasSampler(w).sample(np.random.default_rng(0), 200_000)
    freq = np.bincount(draws, minlength=4) / len(draws)
    assert np.abs(freq - w / w.sum()).max() < 0.005


def _is_walk(g, walk):
    return all(b in g.adjacency[a] for a, b in zip(walk, walk[1:]))


def test_uniform_walks():
    g = triangles_with_bridge()
    corpus = generate_walks(g, DeepWalkConfig(walk_length=7, num_walks=3), seed=5)
    assert len(corpus) == 18
    assert sorted(corpus.starts[:6]) == list(range(6))
    assert all(len(w) == 7 and _is_walk(g, w) for w in corpus.walks)


def test_walks_ignore_thread_count():
    g, _ = two_cliques(6)
    cfg = Node2VecConfig(walk_length=12, num_walks=4, p=0.5, q=2)
    one = generate_walks_biased(g, cfg, seed=9, threads=1)
    many = generate_walks_biased(g, cfg, seed=9, threads=3)
    assert one.walks == many.walks
    assert all(_is_walk(g, w) for w in one.walks)


def test_isolated_node_walk_stops():
    g = HeteroGraph.from_edges(3, [(0, 1)])
    walks = generate_walks(g, DeepWalkConfig(walk_length=5, num_walks=1), seed=0).walks
    assert [2] in walks


def _naive_pairs(walks, window):
    out = []
    for w in walks:
        for i, a in enumerate(w):
            for j in range(max(0, i - window), min(len(w), i + window + 1)):
                if j != i and w[j] != a:
                    out.append((a, w[j]))
    return sorted(out)


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=8), max_size=6),
       st.integers(1, 4))
def test_context_pairs_match_naive(walks, window):
    got = sorted(map(tuple, context_pairs(walks, window).tolist()))
    assert got == _naive_pairs(walks, window)


def test_noise_distribution():
    p = noise_distribution([1, 16, 0])
    assert p[2] == 0 and p[1] / p[0] == pytest.approx(8.0)


def test_pair_gradient_signs():
    u = np.array([0.3, -0.2])
    v = np.array([0.1, 0.4])
    neg = np.array([[0.5, 0.5]])
    g_u, _, _ = pair_grads(u, v, neg)
    assert pair_loss(u - 1e-3 * g_u, v, neg) < pair_loss(u, v, neg)


def test_sgns_is_deterministic_per_seed():
    g, _ = two_cliques(5)
    cfg = DeepWalkConfig(walk_length=8, num_walks=5, dim=8)
    a = embed_graph(g, "deepwalk", cfg, seed=3)
    b = embed_graph(g, "deepwalk", cfg, seed=3)
    c = embed_graph(g, "deepwalk", cfg, seed=4)
    assert np.array_equal(a.vectors, b.vectors)
    assert not np.array_equal(a.vectors, c.vectors)
    assert a.meta["epoch_loss"]


@pytest.mark.parametrize("order,dim", [("1", 8), ("2", 8), ("concat", 9)])
def test_line_orders(order, dim):
    g, _ = two_cliques(6)
    e = train_line(g, LineConfig(dim=dim, order=order, epochs=5, batch_size=64), seed=1)
    assert e.vectors.shape == (12, dim)
    assert e.algo == f"line{order}"
    if order == "concat":
        assert np.allclose(np.linalg.norm(e.vectors[:, :4], axis=1), 1.0)
    else:
        losses = e.meta["epoch_loss"]
        assert losses[-1] < losses[0]


def test_sdne_loss_decreases():
    g, _ = two_cliques(8)
    e = train_sdne(g, SdneConfig(hidden_sizes=(12, 4), epochs=10, batch_size=16), seed=2)
    losses = e.meta["epoch_loss"]
    assert e.vectors.shape == (16, 4)
    assert all(b < a for a, b in zip(losses, losses[1:]))


def test_trainers_reject_edgeless_graphs():
    g = HeteroGraph.from_edges(3, [])
    with pytest.raises(EmptyGraph):
        train_line(g, LineConfig(dim=4, epochs=1))
    with pytest.raises(EmptyGraph):
        train_sdne(g, SdneConfig(hidden_sizes=(4, 2), epochs=1))
    with pytest.raises(ValueError):
        embed_graph(g, "word2vec")


@pytest.mark.parametrize("make", [
    lambda: DeepWalkConfig(dim=0),
    lambda: Node2VecConfig(p=0),
    lambda: LineConfig(order="3"),
    lambda: SdneConfig(hidden_sizes=()),
    lambda: SdneConfig(alpha=-1),
])
def test_config_validation(make):
    with pytest.raises(ConfigError):
        make()


def test_embedding_file_round_trip(tmp_path):
    e = EmbeddingMatrix(["a", "Institution 3", "ب"], np.random.default_rng(0).normal(size=(3, 4)))
    save_embeddings(e, tmp_path / "e.txt")
    back = load_embeddings(tmp_path / "e.txt")
    assert back.keys == e.keys and np.array_equal(back.vectors, e.vectors)


@pytest.mark.parametrize("text,err", [
    ("2\na 1 2\n", MalformedHeader),
    ("2 2\na 1 2\n", MalformedHeader),
    ("1 2\na 1\n", DimensionMismatch),
    ("1 2\na 1 x\n", DimensionMismatch),
])
def test_embedding_file_errors(tmp_path, text, err):
    path = tmp_path / "e.txt"
    path.write_text(text)
    with pytest.raises(err):
        load_embeddings(path)


def test_matrix_validation():
    with pytest.raises(DuplicateKey):
        EmbeddingMatrix(["a", "a"], np.zeros((2, 2)))
    with pytest.raises(DimensionMismatch):
        EmbeddingMatrix(["a"], np.zeros((2, 2)))
    with pytest.raises(UnknownKey):
        EmbeddingMatrix(["a"], np.zeros((1, 2))).row("b")
