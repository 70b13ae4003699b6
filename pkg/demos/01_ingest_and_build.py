"""
From gazette records to a patent graph
======================================

Parse the bundled sample records, merge institution spellings and build the
patent / IPC subclass / institution graph.
"""

from pathlib import Path

import patgraph
from patgraph.corpus import resolve_institutions
from patgraph.graph import NodeKind

DATA = Path(patgraph.__file__).parent / "data"

# Persian digits and Arabic letter forms are normalized while parsing.
# The sample has one deliberately broken IPC token; lenient mode logs and skips it.
records = patgraph.read_records(DATA / "sample_records.jsonl")
first = records[0]
print(first.registration_id, first.registration_date, [str(c) for c in first.ipc_codes])

# An IPC code carries four levels
code = patgraph.parse_ipc("H04M 1/00")
print(code.section_key, code.class_key, code.subclass_key, code.full_key)

# Institution names are grouped after stripping honorifics and case folding;
# an alias table handles the Latin-script spelling.
aliases = {"Sharif Univ.": "دانشگاه صنعتی شریف", "Sharif University": "دانشگاه صنعتی شریف"}
mapping = resolve_institutions(records, aliases)
for surface, canon in mapping.items():
    if surface != canon:
        print(f"  {surface!r} -> {canon!r}")

g = patgraph.build_graph(records, mapping)
g.check_tripartite()
for kind in NodeKind:
    print(kind.value, len(g.nodes_of_kind(kind)))
print(g)

# The graph is saved as two CSV files that every other command reads back.
out = Path("demo_out")
out.mkdir(exist_ok=True)
patgraph.export_graph(g, out / "nodes.csv", out / "edges.csv")
print((out / "nodes.csv").read_text(encoding="utf-8").splitlines()[:4])
