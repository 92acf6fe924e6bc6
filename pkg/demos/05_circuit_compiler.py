"""
From a circuit file to displacement species
===========================================
"""

import itertools
from importlib import resources

from strandbench import circuits

text = resources.files("strandbench").joinpath("data/xor2.circ").read_text()
print(text)
ast = circuits.parse_circuit(text)

# NOT forces dual-rail signals: every wire gets a 0 rail and a 1 rail
c = circuits.compile_circuit(ast, circuits.CompileOptions(dual_rail=True))
print(c.stats)

for a, b in itertools.product((0, 1), repeat=2):
    ev = circuits.evaluate_detailed(c, {"a": a, "b": b}, seed=a + b)
    print(a, b, "->", ev.outputs["y"], f"({len(ev.run.trace)} displacements)")

ref = circuits.parse_circuit(resources.files("strandbench").joinpath("data/reference_8gate.circ").read_text())
for multi in (True, False):
    print("multi-input" if multi else "cascade", circuits.compile_circuit(ref, circuits.CompileOptions(multi)).stats)

try:
    circuits.parse_circuit("inputs a\ny = AND(a, y)\noutputs y\n")
except circuits.CircuitSyntaxError as exc:
    print("rejected:", exc)
