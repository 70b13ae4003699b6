"""
Similar-patent recommendations
==============================

Embed a patent graph with Node2Vec, ask for the nearest patents and explain
each hit by the IPC subclasses the two patents share.
"""

import numpy as np

from patgraph.embed import EmbeddingMatrix, Node2VecConfig, embed_graph
from patgraph.graph import build_graph
from patgraph.recommend import evaluate_recommender, recommend
from patgraph.synthetic import block_patent_records

records = block_patent_records(blocks=10, per_block=30)
g = build_graph(records)
cfg = Node2VecConfig(dim=32, walk_length=20, num_walks=10, epochs=1)
e = embed_graph(g, "node2vec", cfg, seed=0)

rec = recommend(g, e, "P03007", k=5)
for nb in rec.neighbors:
    print(f"{nb.key}  cos={nb.score:.3f}  shared={nb.shared_ipcs}  jaccard={nb.jaccard:.2f}")

# precision@5: the share of neighbors that have at least one subclass in common
print("node2vec precision@5:", round(evaluate_recommender(g, e, k=5), 3))

# one-hot vectors of the true block are a perfect reference
keys = [r.registration_id for r in records]
onehot = np.eye(10)[np.arange(len(keys)) // 30]
print("one-hot precision@5:", evaluate_recommender(g, EmbeddingMatrix(keys, onehot), k=5))

# random vectors for comparison
noise = EmbeddingMatrix(keys, np.random.default_rng(0).normal(size=(len(keys), 32)))
print("random precision@5:", round(evaluate_recommender(g, noise, k=5), 3))
