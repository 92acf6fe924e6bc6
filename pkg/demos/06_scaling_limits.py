"""
Why brute force does not scale
==============================

Encoding every ordering of 62 cities, with 100 copies of each path, takes
more DNA mass than the Earth has.
"""

from strandbench import feasibility as fz

s = fz.feasibility_summary(62)
print("orderings      ", fz.sci(s["paths"]))
print("strand length  ", s["strand_bp"], "bp")
print("mass           ", fz.sci(s["mass_kg"]), "kg")
print("unique strands ", s["strands_required"])
print("4^L bound      ", s["capacity_bound_bp"], "bp  (reported design length", s["reported_min_length_bp"], "bp)")

for n in (5, 10, 15, 20, 30):
    print(f"n={n:>2}  mass={fz.sci(fz.total_mass_kg(fz.TspQuery(n)))} kg")

for row in fz.comparison_report():
    print(f"{row['characteristic']:24s} {row['silicon']:45.45s} | {row['dna']}")
