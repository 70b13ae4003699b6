"""Patent / IPC / institution graph analytics, node embeddings and recommendations."""

__version__ = "0.1.0"

from .analytics import (average_degree, average_path_length, betweenness_centrality,
                        degree_centrality, edge_betweenness, fit_power_law,
                        ipc_frequency_table, pagerank)
from .community import Partition, girvan_newman, modularity
from .corpus import (IpcCode, PatentRecord, extract_ipc_codes, normalize_text, parse_ipc,
                     parse_record, read_records, resolve_institutions)
from .graph import (HeteroGraph, NodeKind, build_graph, connected_components, degree_histogram,
                    export_graph, load_graph, project_patent_graph)
from .project import tsne
from .recommend import evaluate_recommender, explain_similarity, recommend, top_k_similar
