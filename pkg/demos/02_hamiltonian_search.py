"""
Hamiltonian path by ligation and selection
==========================================

Seven nodes, each a 20-base sequence. Every walk through the graph is
"ligated" into one strand, then the pool is filtered: PCR keeps strands that
start at node 0 and end at node 6, the gel keeps 140-base strands, and one
affinity pass per node keeps strands visiting every node.
"""

from importlib import resources

from strandbench import adleman
from strandbench.strands import OligoPool, cleave

g = adleman.DiGraph.from_json(resources.files("strandbench").joinpath("data/adleman7.json").read_text())
enc = adleman.encode_graph(g, seed=0)
for v, s in enc.node_seq.items():
    print(v, s)

pool = adleman.assemble(g, adleman.Exhaustive(7))
strands = adleman.to_strands(pool, enc)
print(f"\n{len(strands)} distinct ligation products, {strands.total_bases} bases in total")

answer = adleman.molecular_selection(strands, g, enc, start=0, end=6)
for seq in answer:
    print("survivor:", adleman.decode_strand(seq, enc), len(seq), "bases")

# same answer by direct path logic, and by brute force over all orderings
print(adleman.select_hamiltonian(pool, g, 0, 6), adleman.brute_force_hamiltonian(g, 0, 6))

# trimming the survivor at a node boundary: cut after node 2's sequence
(seq,) = answer
print([len(f) for f in cleave(OligoPool({seq: 1}), enc.node_seq[2])])

# random ligation instead of enumerating: a big enough pool still finds it
sampled = adleman.assemble(g, adleman.Stochastic(20_000, seed=3))
print("stochastic:", adleman.select_hamiltonian(sampled, g, 0, 6))
