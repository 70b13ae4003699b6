"""
Girvan-Newman communities
=========================

Repeatedly cut the edge with the highest betweenness and keep the split with
the best modularity.
"""

import time

from patgraph.community import girvan_newman, modularity
from patgraph.graph import build_graph
from patgraph.synthetic import block_patent_records, triangles_with_bridge

# Two triangles and a bridge: the bridge goes first
g = triangles_with_bridge()
dendro, best = girvan_newman(g)
print("first cut:", dendro.steps[1].removed_edge)
print("best split:", best.communities(), f"Q = {best.modularity:.6f}")

# modularity of the whole graph as one community is zero
print("one community:", modularity(g, [0] * g.n))

# Every recorded step is a split; modularity is always measured on the original graph
for step in dendro.steps:
    print(f"  after {step.removals} removals: {step.partition.community_count} parts, "
          f"Q = {step.partition.modularity:.4f}")

# On a block-structured patent graph each subclass and its patents form one community
g = build_graph(block_patent_records(blocks=6, per_block=10))
t0 = time.perf_counter()
dendro, best = girvan_newman(g, plateau=5)
print(f"\n{best.community_count} communities, Q = {best.modularity:.4f}, "
      f"{dendro.removals} removals in {time.perf_counter() - t0:.2f} s")
