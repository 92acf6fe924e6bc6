"""
AND by toehold-mediated strand displacement
===========================================

The gate backbone exposes a single toehold. Input a binds it, migrates, and
knocks off a blocker, which reveals the toehold for input b. Input b then
releases the output strand.
"""

from strandbench import dsd

gate = dsd.make_and_gate("a", "b", "out")
state = gate.state(["a", "b"])
print("initial complexes:", *state.complexes, sep="\n  ")

final, trace = dsd.simulate(state, seed=0)
for ev in trace:
    print(f"t={ev.time:.3f}  {ev.strand} @ toehold {ev.toehold}  releases {ev.released}")
print("output present:", dsd.signal_present(final, "out"))
for w in dsd.waste_census(final):
    print("waste:", w.species, "x", w.count)

# one wide gate versus a chain of two-input gates
multi = dsd.make_multi_input_and(["a", "b", "c"], "out")
casc = dsd.make_cascade_and(["a", "b", "c"], "out")
for name, g in (("multi-input", multi), ("cascade", casc)):
    f = dsd.simulate(g.state(g.inputs), seed=0).final
    print(f"{name:12s} domains={len(g.domain_ids())} waste={sum(e.count for e in dsd.waste_census(f))}")

# leakage: a stray waste strand carrying y's toehold can fake input y
s, out = dsd.leak_fixture()
for lam in (0.0, 0.01, 0.1, 1.0):
    hits = sum(dsd.signal_present(dsd.simulate(s, seed, lam, t_end=10.0).final, out) for seed in range(500))
    print(f"leak rate {lam:<5} false output in {hits / 500:.1%} of runs")

# a threshold unit: fires when 3a + 2b + 2c >= 4
th = dsd.make_threshold_gate([3, 2, 2], 3, "o", inputs=["a", "b", "c"])
for bits in ("100", "011", "110", "010"):
    present = [n for n, bit in zip("abc", bits) if bit == "1"]
    print(bits, dsd.run_gate(th, present).outputs["o"])
