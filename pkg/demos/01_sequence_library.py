"""
Designing a codeword library
============================

Draw fourteen 20-mers that keep GC content and Wallace melting temperature
in a window and stay at least 8 mismatches apart from each other, from each
other's complements and from each other's reverse complements.
"""

from strandbench.strands import DesignConstraints, design_library, melting_temp, verify_library, gc_fraction

c = DesignConstraints(length=20, gc_fraction=(0.4, 0.6), tm_window=(48, 64), min_hamming=8, max_homopolymer=3)
lib = design_library(c, 14, seed=1)

for s in lib:
    print(s, f"gc={gc_fraction(s):.2f}", f"tm={melting_temp(s)}")

# the verifier is the oracle: an empty report means every constraint holds
print("violations:", verify_library(lib, c))

# duplicate one entry and the pairwise check catches it
print(verify_library(lib + [lib[0]], c)[0])
