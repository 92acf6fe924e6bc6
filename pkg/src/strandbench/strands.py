"""Base-level sequence primitives and pool operations.

Sequences are plain uppercase ``str`` over ``ACGT``. An :class:`OligoPool`
is an immutable multiset of sequences with exact integer counts; every
pool operation returns a new pool. The selection steps of a DNA search
(PCR, gel, affinity purification) are modelled as deterministic filters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

BASES = "ACGT"
_COMPLEMENT = str.maketrans("ACGT", "TGCA")


class SequenceError(ValueError):
    pass


class DesignInfeasible(RuntimeError):
    """No library satisfying the constraints could be produced."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        msg = f"unsatisfiable constraint: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def check_sequence(s: str) -> str:
    if not isinstance(s, str):
        raise SequenceError(f"sequence must be a str, got {type(s).__name__}")
    bad = set(s) - set(BASES)
    if bad:
        raise SequenceError(f"non-ACGT characters {sorted(bad)} in {s!r}")
    return s


def complement(s: str) -> str:
    return check_sequence(s).translate(_COMPLEMENT)


def reverse_complement(s: str) -> str:
    return complement(s)[::-1]


def melting_temp(s: str) -> int:
    """Wallace-rule melting temperature in degrees Celsius: 2(A+T) + 4(G+C)."""
    check_sequence(s)
    gc = s.count("G") + s.count("C")
    return 2 * (len(s) - gc) + 4 * gc


def gc_fraction(s: str) -> float:
    if not s:
        return 0.0
    return (s.count("G") + s.count("C")) / len(s)


def longest_homopolymer(s: str) -> int:
    best = run = 0
    prev = ""
    for b in s:
        run = run + 1 if b == prev else 1
        prev = b
        best = max(best, run)
    return best


def hamming(a: str, b: str) -> int:
    if len(a) != len(b):
        raise ValueError("hamming distance needs equal lengths")
    return sum(x != y for x, y in zip(a, b))


# -- library design ---------------------------------------------------------


@dataclass(frozen=True)
class DesignConstraints:
    length: int
    gc_fraction: tuple[float, float] = (0.0, 1.0)
    tm_window: tuple[float, float] = (float("-inf"), float("inf"))
    min_hamming: int = 1
    max_homopolymer: int | None = None

    def __post_init__(self):
        lo, hi = self.gc_fraction
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"bad gc_fraction interval {self.gc_fraction}")
        if self.tm_window[0] > self.tm_window[1]:
            raise ValueError(f"bad tm_window interval {self.tm_window}")
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if self.max_homopolymer is not None and self.max_homopolymer < 1:
            raise ValueError("max_homopolymer must be >= 1")

    @property
    def homopolymer_limit(self) -> int:
        return self.length if self.max_homopolymer is None else self.max_homopolymer

    def allowed_gc_counts(self) -> list[int]:
        """GC counts compatible with both the GC interval and the Tm window."""
        L = self.length
        lo, hi = self.gc_fraction
        out = []
        for g in range(L + 1):
            frac = g / L if L else 0.0
            # small slack so 0.4 * 20 == 8 counts as inside
            if not (lo - 1e-12 <= frac <= hi + 1e-12):
                continue
            tm = 2 * (L - g) + 4 * g
            if self.tm_window[0] <= tm <= self.tm_window[1]:
                out.append(g)
        return out


@dataclass(frozen=True)
class Violation:
    constraint: str
    indices: tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.constraint} {self.indices}: {self.detail}"


def verify_library(seqs: list[str], c: DesignConstraints) -> list[Violation]:
    """Return every constraint violation in ``seqs``; an empty list means compliant.

    Per-sequence checks cover alphabet, length, GC fraction, Tm and homopolymer
    runs. Each pair ``(i, j)`` is reported at most once for distance, using the
    smallest Hamming distance of ``seqs[i]`` against ``seqs[j]``, its complement
    and its reverse complement.
    """
    report: list[Violation] = []
    ok_len = []
    for i, s in enumerate(seqs):
        try:
            check_sequence(s)
        except SequenceError as exc:
            report.append(Violation("alphabet", (i,), str(exc)))
            continue
        if len(s) != c.length:
            report.append(Violation("length", (i,), f"{len(s)} != {c.length}"))
            continue
        ok_len.append(i)
        gc = gc_fraction(s)
        if not (c.gc_fraction[0] - 1e-12 <= gc <= c.gc_fraction[1] + 1e-12):
            report.append(Violation("gc_fraction", (i,), f"{gc:.3f} outside {c.gc_fraction}"))
        tm = melting_temp(s)
        if not (c.tm_window[0] <= tm <= c.tm_window[1]):
            report.append(Violation("tm_window", (i,), f"{tm} outside {c.tm_window}"))
        run = longest_homopolymer(s)
        if run > c.homopolymer_limit:
            report.append(Violation("max_homopolymer", (i,), f"run of {run}"))

    for a, i in enumerate(ok_len):
        for j in ok_len[a + 1:]:
            relation, d = _closest_relation(seqs[i], seqs[j])
            if d < c.min_hamming:
                report.append(Violation("min_hamming", (i, j), f"{relation} distance {d} < {c.min_hamming}"))
    return report


def _closest_relation(a: str, b: str) -> tuple[str, int]:
    cands = [
        ("identity", hamming(a, b)),
        ("complement", hamming(a, complement(b))),
        ("reverse_complement", hamming(a, reverse_complement(b))),
    ]
    return min(cands, key=lambda kv: kv[1])


def _pairwise_ok(cand: str, accepted: list[str], min_hamming: int) -> bool:
    for s in accepted:
        if _closest_relation(cand, s)[1] < min_hamming:
            return False
    return True


def design_library(c: DesignConstraints, k: int, seed: int, attempts: int = 10_000) -> list[str]:
    """Generate ``k`` sequences that pass :func:`verify_library` under ``c``.

    Candidates are drawn at seeded random with a GC count chosen from the
    feasible set, then rejected against homopolymer and pairwise distance
    limits. Each sequence gets ``attempts`` tries before giving up.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if c.min_hamming > c.length:
        raise DesignInfeasible("min_hamming", f"{c.min_hamming} exceeds length {c.length}")
    gc_counts = c.allowed_gc_counts()
    if not gc_counts:
        # name whichever interval alone is already empty
        if not DesignConstraints(c.length, c.gc_fraction).allowed_gc_counts():
            raise DesignInfeasible("gc_fraction", f"no integer GC count at length {c.length}")
        raise DesignInfeasible("tm_window", f"no GC count gives Tm in {c.tm_window}")
    if c.length == 0 and k > 1 and c.min_hamming > 0:
        raise DesignInfeasible("min_hamming", "empty sequences are all identical")

    rng = np.random.default_rng(seed)
    out: list[str] = []
    for _ in range(k):
        rejected = {"max_homopolymer": 0, "min_hamming": 0}
        for _ in range(attempts):
            g = int(rng.choice(gc_counts))
            strong = rng.choice(["G", "C"], size=g)
            weak = rng.choice(["A", "T"], size=c.length - g)
            bases = np.concatenate([strong, weak])
            rng.shuffle(bases)
            cand = "".join(bases.tolist())
            if longest_homopolymer(cand) > c.homopolymer_limit:
                rejected["max_homopolymer"] += 1
                continue
            if not _pairwise_ok(cand, out, c.min_hamming):
                rejected["min_hamming"] += 1
                continue
            out.append(cand)
            break
        else:
            worst = max(rejected, key=rejected.get)
            raise DesignInfeasible(worst, f"budget of {attempts} exhausted after {len(out)} sequences")
    return out


# -- pools ------------------------------------------------------------------


class OligoPool(Mapping[str, int]):
    """Immutable multiset of sequences with positive integer counts."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[str, int]] | Mapping[str, int] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        merged: dict[str, int] = {}
        for seq, count in entries:
            check_sequence(seq)
            if int(count) != count or count < 1:
                raise ValueError(f"count for {seq!r} must be a positive integer, got {count}")
            merged[seq] = merged.get(seq, 0) + int(count)
        self._entries = dict(sorted(merged.items()))

    def __getitem__(self, seq: str) -> int:
        return self._entries[seq]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, OligoPool):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self):
        inner = ", ".join(f"{s}x{n}" for s, n in self._entries.items())
        return f"OligoPool({{{inner}}})"

    @property
    def total(self) -> int:
        return sum(self._entries.values())

    @property
    def total_bases(self) -> int:
        return sum(len(s) * n for s, n in self._entries.items())

    def to_json(self) -> str:
        return json.dumps({"entries": [{"seq": s, "count": n} for s, n in self._entries.items()]})

    @classmethod
    def from_json(cls, text: str) -> "OligoPool":
        data = json.loads(text)
        return cls((e["seq"], e["count"]) for e in data["entries"])


def cleave(p: OligoPool, site: str) -> OligoPool:
    """Cut after every leftmost non-overlapping occurrence of ``site``."""
    check_sequence(site)
    if not site:
        raise ValueError("restriction site must be non-empty")
    out: list[tuple[str, int]] = []
    for seq, n in p.items():
        start = i = 0
        while True:
            hit = seq.find(site, i)
            if hit < 0:
                break
            cut = hit + len(site)
            out.append((seq[start:cut], n))
            start = i = cut
        if start < len(seq):
            out.append((seq[start:], n))
    return OligoPool(out)


def filter_by_length(p: OligoPool, lo: int, hi: int) -> OligoPool:
    """Gel band cut: keep entries with ``lo <= len <= hi``."""
    if lo > hi:
        raise ValueError("min length exceeds max length")
    return OligoPool((s, n) for s, n in p.items() if lo <= len(s) <= hi)


def pcr_select(p: OligoPool, head: str, tail: str, gain: int = 1) -> OligoPool:
    """Keep strands primed at both ends and multiply their counts by ``gain``."""
    if gain < 1:
        raise ValueError("gain must be >= 1")
    check_sequence(head)
    check_sequence(tail)
    return OligoPool(
        (s, n * gain) for s, n in p.items()
        if s.startswith(head) and s.endswith(tail)
    )


def affinity_select(p: OligoPool, probe: str) -> OligoPool:
    check_sequence(probe)
    if not probe:
        raise ValueError("probe must be non-empty")
    return OligoPool((s, n) for s, n in p.items() if probe in s)
