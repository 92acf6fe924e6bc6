from decimal import Decimal, getcontext

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strandbench import feasibility as fz
from strandbench.feasibility import TspQuery


def test_path_count():
    assert fz.path_count(1) == 1
    assert fz.path_count(10) == 3628800
    assert abs(fz.path_count(62) - 3.15e85) / 3.15e85 < 0.005
    for n in range(2, 101):
        assert fz.path_count(n) == n * fz.path_count(n - 1)
    with pytest.raises(ValueError):
        fz.path_count(0)


def test_strand_length():
    assert fz.path_strand_length(62, 150) == 18450
    assert fz.path_strand_length(1, 150) == 150
    assert fz.path_strand_length(5, 10) == 90


def test_mass_anchor():
    assert abs(fz.total_mass_kg(TspQuery(62)) - 6.37e67) / 6.37e67 < 0.02
    # the 650 g/mol convention lands outside 1%
    assert abs(fz.total_mass_kg(TspQuery(62, mass_per_bp=650)) - 6.37e67) / 6.37e67 > 0.01


def test_mass_cancels_avogadro():
    q = TspQuery(n=1, seg_len=1, copies=1, mass_per_bp=602.214076)
    assert fz.total_mass_exact(q) == fz.Fraction(1, 10**24)


def test_mass_matches_decimal_oracle():
    getcontext().prec = 60
    want = Decimal(3628800) * 100 * 19 * 150 * Decimal("660") / Decimal("6.02214076e23") / 1000
    got = fz.total_mass_exact(TspQuery(10))
    assert abs(Decimal(got.numerator) / Decimal(got.denominator) - want) < Decimal("1e-40")


@given(st.integers(1, 30), st.integers(1, 200), st.integers(1, 500), st.floats(1, 1000))
def test_mass_monotone(n, copies, seg, mpb):
    base = fz.total_mass_exact(TspQuery(n, seg, copies, mpb))
    assert fz.total_mass_exact(TspQuery(n + 1, seg, copies, mpb)) > base
    assert fz.total_mass_exact(TspQuery(n, seg, copies + 1, mpb)) > base
    assert fz.total_mass_exact(TspQuery(n, seg + 1, copies, mpb)) > base
    assert fz.total_mass_exact(TspQuery(n, seg, copies, mpb * 1.5)) > base


def test_query_validation():
    for kw in ({"n": 0}, {"n": 1, "seg_len": 0}, {"n": 1, "copies": 0}, {"n": 1, "mass_per_bp": 0}):
        with pytest.raises(ValueError):
            TspQuery(**kw)


def test_strands_required():
    assert fz.strands_required(62) == 2015
    assert fz.strands_required(1) == 2
    assert fz.strands_required(10) == 65


def test_capacity():
    assert fz.unique_capacity(1) == 4
    assert fz.min_length_for(2015) == 6
    assert fz.min_length_for(4 ** 10) == 10
    assert fz.min_length_for(4 ** 10 + 1) == 11
    assert fz.min_length_for(1) == 1


def test_dna_profile():
    assert fz.DNA.storage_density == "one bit per cubic nanometer"
    assert fz.DNA.ops_per_second == (1e14, 1e20)
    assert fz.DNA.ops_per_joule == 2e19
    assert fz.DNA.energy_per_operation_j == 5e-20


def test_comparison_report():
    rows = {r["characteristic"]: r for r in fz.comparison_report()}
    assert len(rows) == 4
    assert rows["Information storage"]["dna"] == "one bit per cubic nanometer"
    assert "2×10^19 operations per Joule" == rows["Energy efficiency"]["dna"]
    assert rows["Processing speed"]["silicon"] == "10^8 to 10^12 operations per second"


def test_summary_and_sci():
    s = fz.feasibility_summary(62)
    assert s["strand_bp"] == 18450 and s["strands_required"] == 2015
    assert s["capacity_bound_bp"] == 6 and s["reported_min_length_bp"] == 142
    assert fz.sci(fz.path_count(62)) == "3.15e85"
    assert fz.sci(0.5) == "5.00e-1"
