"""Resource arithmetic for brute-force DNA combinatorial search.

All counts are exact Python integers. Mass uses :class:`fractions.Fraction`
until the final conversion to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

AVOGADRO = Fraction("6.02214076e23")

# literature figure for 2015 unique strands; no derivation is available, so it
# is reported next to the information-theoretic bound rather than recomputed
REPORTED_MIN_LENGTH_BP = 142


@dataclass(frozen=True)
class TspQuery:
    n: int
    seg_len: int = 150
    copies: int = 100
    mass_per_bp: float = 660.0
    avogadro: Fraction = field(default=AVOGADRO)

    def __post_init__(self):
        if self.n < 1 or self.seg_len < 1 or self.copies < 1:
            raise ValueError("n, seg_len and copies must all be >= 1")
        if self.mass_per_bp <= 0:
            raise ValueError("mass_per_bp must be positive")


def path_count(n: int) -> int:
    """Number of city orderings, n! (not the (n-1)!/2 tour classes)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.factorial(n)


def path_strand_length(n: int, seg_len: int = 150) -> int:
    """Bases in a full path strand: n city segments joined by n-1 link segments."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (2 * n - 1) * seg_len


def total_mass_exact(q: TspQuery) -> Fraction:
    grams_per_mol = Fraction(path_count(q.n) * q.copies * path_strand_length(q.n, q.seg_len))
    grams_per_mol *= Fraction(str(q.mass_per_bp))
    return grams_per_mol / Fraction(q.avogadro) / 1000


def total_mass_kg(q: TspQuery) -> float:
    return float(total_mass_exact(q))


def strands_required(n: int) -> int:
    # n node strands + n(n-1)/2 link strands + n auxiliary strands = n(n+3)/2
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * (n + 3) // 2


def unique_capacity(length: int) -> int:
    if length < 1:
        raise ValueError("length must be >= 1")
    return 4 ** length


def min_length_for(k: int) -> int:
    """Smallest L with 4**L >= k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    L = 1
    while 4 ** L < k:
        L += 1
    return L


@dataclass(frozen=True)
class TechProfile:
    name: str
    storage_density: str
    ops_per_second: tuple[float, float]
    ops_per_joule: float
    energy_per_operation_j: float
    architecture: str


SILICON = TechProfile(
    name="Silicon-based",
    storage_density="one bit per 10^12 cubic nanometers",
    ops_per_second=(1e8, 1e12),
    ops_per_joule=1e9,
    energy_per_operation_j=1e-9,
    architecture="Effective for single operation; multiple cores of CPU for multiple operations at one time (up to six operations)",
)

DNA = TechProfile(
    name="DNA-mediated",
    storage_density="one bit per cubic nanometer",
    ops_per_second=(1e14, 1e20),
    ops_per_joule=2e19,
    energy_per_operation_j=5e-20,
    architecture="Ineffective for single operation; naturally effective for massive parallel operations",
)


def _rate_text(lo: float, hi: float, unit: str) -> str:
    return f"10^{round(math.log10(lo))} to 10^{round(math.log10(hi))} {unit}"


def comparison_report() -> list[dict[str, str]]:
    """Silicon versus DNA table, one dict per characteristic."""
    dna_speed = _rate_text(*DNA.ops_per_second, "operations per second") + " (ligation)"
    return [
        {"characteristic": "Information storage",
         "silicon": SILICON.storage_density, "dna": DNA.storage_density},
        {"characteristic": "Processing speed",
         "silicon": _rate_text(*SILICON.ops_per_second, "operations per second"), "dna": dna_speed},
        {"characteristic": "Energy efficiency",
         "silicon": "10^9 operations per Joule", "dna": "2×10^19 operations per Joule"},
        {"characteristic": "Computing architecture",
         "silicon": SILICON.architecture, "dna": DNA.architecture},
    ]


def sci(x: float | int, digits: int = 2) -> str:
    """Compact scientific notation, e.g. ``3.15e85``."""
    mant, exp = f"{float(x):.{digits}e}".split("e")
    return f"{mant}e{int(exp)}"


def feasibility_summary(n: int, seg_len: int = 150, copies: int = 100, mass_per_bp: float = 660.0) -> dict:
    q = TspQuery(n=n, seg_len=seg_len, copies=copies, mass_per_bp=mass_per_bp)
    k = strands_required(n)
    return {
        "n": n,
        "paths": path_count(n),
        "strand_bp": path_strand_length(n, seg_len),
        "mass_kg": total_mass_kg(q),
        "strands_required": k,
        "capacity_bound_bp": min_length_for(k),
        "reported_min_length_bp": REPORTED_MIN_LENGTH_BP,
    }
