"""Domain-level toehold-mediated strand displacement.

Model
-----
A :class:`Domain` is an opaque symbol (toehold ``"t"`` or migration ``"m"``)
with a polarity. A :class:`GateComplex` is a backbone strand with incumbent
strands bound over disjoint position ranges; a bound strand pairs its
domains one-to-one with consecutive backbone positions and may overhang.

A *normal* reaction is 3-way branch migration: a free strand whose leading
domain complements an exposed backbone toehold at ``p`` keeps pairing
through the incumbent that starts at ``p + 1``. If the incumbent is left
holding only toeholds it falls off, exposing what it covered. Partial or
reversible migration is not modelled.

A *leak* is the same toehold binding by a strand from the waste pool, which
spuriously releases the adjacent incumbent regardless of sequence match.

Released strands whose leading domain is a toehold are live signals and go
to the free pool; anything else, together with complexes that no longer
expose a toehold, goes to waste.

Kinetics are unit-rate mass action with relative rate ``leak_rate`` for
leaks, simulated with the Gillespie direct method on molecule counts.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Union

import numpy as np


@dataclass(frozen=True, order=True)
class Domain:
    id: str
    kind: str = "m"  # "t" toehold, "m" migration
    comp: bool = False

    def __post_init__(self):
        if self.kind not in ("t", "m"):
            raise ValueError(f"domain kind must be 't' or 'm', got {self.kind!r}")

    def __invert__(self) -> "Domain":
        return Domain(self.id, self.kind, not self.comp)

    def binds(self, other: "Domain") -> bool:
        return self.id == other.id and self.comp != other.comp

    @property
    def is_toehold(self) -> bool:
        return self.kind == "t"

    def __str__(self):
        return self.id + ("*" if self.comp else "")


@dataclass(frozen=True)
class Strand:
    domains: tuple[Domain, ...]

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        if not self.domains:
            raise ValueError("a strand needs at least one domain")

    def __len__(self):
        return len(self.domains)

    def __getitem__(self, i):
        return self.domains[i]

    @property
    def key(self) -> str:
        return "<" + " ".join(map(str, self.domains)) + ">"

    def __str__(self):
        return self.key


@dataclass(frozen=True)
class Bound:
    """``strand.domains[offset + i]`` pairs with backbone position ``start + i``."""

    strand: Strand
    start: int
    offset: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length

    @property
    def key(self) -> str:
        return f"{self.strand.key}@{self.start}+{self.offset}:{self.length}"


@dataclass(frozen=True)
class GateComplex:
    backbone: Strand
    incumbents: tuple[Bound, ...] = ()

    def __post_init__(self):
        incs = tuple(sorted(self.incumbents, key=lambda b: b.start))
        object.__setattr__(self, "incumbents", incs)
        last = 0
        for b in incs:
            if b.length < 1 or b.start < last or b.end > len(self.backbone):
                raise ValueError(f"bound range {b.start}:{b.end} overlaps or leaves the backbone")
            if b.offset < 0 or b.offset + b.length > len(b.strand):
                raise ValueError("bound range runs past the end of its strand")
            for i in range(b.length):
                if not b.strand[b.offset + i].binds(self.backbone[b.start + i]):
                    raise ValueError(
                        f"{b.strand[b.offset + i]} cannot pair with backbone {self.backbone[b.start + i]}")
            last = b.end

    @property
    def exposed(self) -> tuple[int, ...]:
        covered = {p for b in self.incumbents for p in range(b.start, b.end)}
        return tuple(p for p in range(len(self.backbone)) if p not in covered)

    @property
    def exposed_toeholds(self) -> tuple[int, ...]:
        return tuple(p for p in self.exposed if self.backbone[p].is_toehold)

    def incumbent_at(self, start: int) -> Bound | None:
        for b in self.incumbents:
            if b.start == start:
                return b
        return None

    def strands(self) -> list[Strand]:
        return [self.backbone] + [b.strand for b in self.incumbents]

    @property
    def key(self) -> str:
        return "[" + self.backbone.key + " | " + " ".join(b.key for b in self.incumbents) + "]"

    def __str__(self):
        return self.key


Species = Union[Strand, GateComplex]


def _sorted_counts(m: Mapping | Iterable, what: str) -> dict:
    items = m.items() if isinstance(m, Mapping) else m
    acc: Counter = Counter()
    for sp, n in items:
        if n < 0 or int(n) != n:
            raise ValueError(f"{what} count must be a non-negative integer, got {n}")
        acc[sp] += int(n)
    return {sp: acc[sp] for sp in sorted(acc, key=lambda s: s.key) if acc[sp] > 0}


@dataclass(frozen=True, eq=True)
class SolutionState:
    free: Mapping[Strand, int] = field(default_factory=dict)
    complexes: Mapping[GateComplex, int] = field(default_factory=dict)
    waste: Mapping[Species, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "free", _sorted_counts(self.free, "free"))
        object.__setattr__(self, "complexes", _sorted_counts(self.complexes, "complex"))
        object.__setattr__(self, "waste", _sorted_counts(self.waste, "waste"))

    __hash__ = None

    def add(self, free: Mapping[Strand, int] | None = None, complexes: Mapping[GateComplex, int] | None = None,
            waste: Mapping[Species, int] | None = None) -> "SolutionState":
        def merged(a, b):
            out = Counter(a)
            out.update(b or {})
            return out
        return SolutionState(merged(self.free, free), merged(self.complexes, complexes), merged(self.waste, waste))

    def strands_with_prefix(self, prefix: tuple[Domain, ...]) -> int:
        return sum(n for s, n in self.free.items() if s.domains[:len(prefix)] == prefix)


def census(s: SolutionState) -> Counter:
    """Count of every (domain id, polarity) instance in the solution."""
    c: Counter = Counter()

    def add_strand(st: Strand, n: int):
        for d in st.domains:
            c[(d.id, d.comp)] += n

    for st, n in s.free.items():
        add_strand(st, n)
    for cx, n in s.complexes.items():
        for st in cx.strands():
            add_strand(st, n)
    for sp, n in s.waste.items():
        for st in (sp.strands() if isinstance(sp, GateComplex) else [sp]):
            add_strand(st, n)
    return c


def species_census(species: Iterable[Species]) -> Counter:
    c: Counter = Counter()
    for sp in species:
        for st in (sp.strands() if isinstance(sp, GateComplex) else [sp]):
            for d in st.domains:
                c[(d.id, d.comp)] += 1
    return c


# -- reactions ------------------------------------------------------------------


@dataclass(frozen=True)
class ReactionEvent:
    """One displacement: ``strand`` (from free or waste) invades ``complex`` at ``toehold``."""

    strand: Strand
    complex: GateComplex
    toehold: int
    product: GateComplex
    released: Strand
    rate_class: str = "normal"
    time: float | None = None

    @property
    def reactants(self) -> tuple[Species, Species]:
        return (self.strand, self.complex)

    @property
    def products(self) -> tuple[Species, Species]:
        return (self.product, self.released)

    @property
    def rate(self) -> float:
        return 1.0 if self.rate_class == "normal" else 0.0

    def to_dict(self) -> dict:
        return {
            "rate_class": self.rate_class,
            "time": self.time,
            "strand": self.strand.key,
            "complex": self.complex.key,
            "toehold": self.toehold,
            "product": self.product.key,
            "released": self.released.key,
        }


def _invade(strand: Strand, cx: GateComplex, p: int) -> tuple[GateComplex, Strand] | None:
    bb = cx.backbone
    if not strand[0].binds(bb[p]):
        return None
    inc = cx.incumbent_at(p + 1)
    if inc is None:
        return None
    j = 1
    while j < len(strand) and p + j < inc.end and strand[j].binds(bb[p + j]):
        j += 1
    if j == 1:
        return None
    r = p + j
    # incumbent must be left holding toeholds only
    if any(not bb[x].is_toehold for x in range(r, inc.end)):
        return None
    others = tuple(b for b in cx.incumbents if b is not inc)
    product = GateComplex(bb, others + (Bound(strand, p, 0, j),))
    return product, inc.strand


def _leak(strand: Strand, cx: GateComplex, p: int) -> tuple[GateComplex, Strand] | None:
    if not strand[0].binds(cx.backbone[p]):
        return None
    inc = cx.incumbent_at(p + 1)
    if inc is None:
        return None
    others = tuple(b for b in cx.incumbents if b is not inc)
    return GateComplex(cx.backbone, others + (Bound(strand, p, 0, 1),)), inc.strand


def enumerate_reactions(s: SolutionState, leak_rate: float = 0.0) -> list[ReactionEvent]:
    if leak_rate < 0:
        raise ValueError("leak rate must be >= 0")
    events = []
    for st in s.free:
        for cx in s.complexes:
            for p in cx.exposed_toeholds:
                res = _invade(st, cx, p)
                if res:
                    events.append(ReactionEvent(st, cx, p, res[0], res[1], "normal"))
    if leak_rate > 0:
        for st in s.waste:
            if not isinstance(st, Strand):
                continue
            for cx in s.complexes:
                for p in cx.exposed_toeholds:
                    res = _leak(st, cx, p)
                    if res:
                        events.append(ReactionEvent(st, cx, p, res[0], res[1], "leak"))
    return events


def propensity(ev: ReactionEvent, s: SolutionState, leak_rate: float) -> float:
    pool = s.free if ev.rate_class == "normal" else s.waste
    rate = 1.0 if ev.rate_class == "normal" else leak_rate
    return rate * pool.get(ev.strand, 0) * s.complexes.get(ev.complex, 0)


def is_live(st: Strand) -> bool:
    return st[0].is_toehold


def apply_event(s: SolutionState, ev: ReactionEvent) -> SolutionState:
    free, cxs, waste = Counter(s.free), Counter(s.complexes), Counter(s.waste)
    src = free if ev.rate_class == "normal" else waste
    if src[ev.strand] < 1 or cxs[ev.complex] < 1:
        raise ValueError("event reactants are not present in the state")
    src[ev.strand] -= 1
    cxs[ev.complex] -= 1
    if ev.product.exposed_toeholds:
        cxs[ev.product] += 1
    else:
        waste[ev.product] += 1
    (free if is_live(ev.released) else waste)[ev.released] += 1
    return SolutionState(free, cxs, waste)


# test instrumentation: callables invoked as f(initial, final, trace) after every run
_observers: list[Callable] = []


def add_observer(fn: Callable) -> None:
    _observers.append(fn)


def remove_observer(fn: Callable) -> None:
    _observers.remove(fn)


@dataclass(frozen=True)
class SimulationRun:
    final: SolutionState
    trace: list[ReactionEvent]
    reason: str  # "quiescent" | "max_events" | "t_end"
    time: float

    def __iter__(self):
        # unpacks as (final, trace)
        return iter((self.final, self.trace))


def simulate(s: SolutionState, seed: int, leak_rate: float = 0.0, max_events: int = 10_000,
             t_end: float | None = None) -> SimulationRun:
    """Gillespie direct-method run until quiescence, ``max_events`` or ``t_end``.

    Each step draws an exponential waiting time from the total propensity,
    then one enabled event with probability proportional to
    count(strand) * count(complex) * rate.
    """
    if max_events < 0:
        raise ValueError("max_events must be >= 0")
    rng = np.random.default_rng(seed)
    state, trace, t = s, [], 0.0
    reason = "max_events"
    while True:
        events = enumerate_reactions(state, leak_rate)
        props = np.array([propensity(ev, state, leak_rate) for ev in events], dtype=float)
        live = props > 0
        if not live.any():
            reason = "quiescent"
            break
        if len(trace) >= max_events:
            reason = "max_events"
            break
        events = [ev for ev, ok in zip(events, live) if ok]
        props = props[live]
        total = props.sum()
        dt = rng.exponential(1.0 / total)
        if t_end is not None and t + dt > t_end:
            t = t_end
            reason = "t_end"
            break
        t += dt
        k = int(np.searchsorted(np.cumsum(props), rng.random() * total, side="right"))
        ev = replace(events[min(k, len(events) - 1)], time=t)
        state = apply_event(state, ev)
        trace.append(ev)
    run = SimulationRun(state, trace, reason, t)
    for fn in _observers:
        fn(s, run.final, run.trace)
    return run


# -- waste ----------------------------------------------------------------------


@dataclass(frozen=True)
class WasteEntry:
    species: Species
    count: int
    leak_targets: tuple[tuple[GateComplex, int], ...]  # (complex, exposed toehold position)


def waste_census(s: SolutionState) -> list[WasteEntry]:
    out = []
    for sp, n in s.waste.items():
        targets = []
        if isinstance(sp, Strand):
            for cx in s.complexes:
                for p in cx.exposed_toeholds:
                    if _leak(sp, cx, p):
                        targets.append((cx, p))
        out.append(WasteEntry(sp, n, tuple(targets)))
    return out


# -- gate constructors ------------------------------------------------------------


def wire(name: str) -> tuple[Domain, Domain]:
    """Toehold and migration domain carrying the signal ``name``."""
    return Domain(f"{name}.t", "t"), Domain(f"{name}.m", "m")


def signal_strand(name: str) -> Strand:
    return Strand(wire(name))


def rail(name: str, bit: int) -> str:
    return f"{name}~{bit}"


def signal_present(s: SolutionState, name: str) -> bool:
    return s.strands_with_prefix(wire(name)) > 0


@dataclass(frozen=True)
class Gate:
    """Complexes (with copy numbers) plus the input strands that drive them."""

    kind: str
    complexes: tuple[tuple[GateComplex, int], ...]
    inputs: Mapping[str, tuple[Strand, int]]  # signal name -> (strand, copies to inject)
    outputs: tuple[str, ...]

    def state(self, present: Iterable[str] = ()) -> SolutionState:
        free = Counter()
        for name in present:
            strand, copies = self.inputs[name]
            free[strand] += copies
        return SolutionState(free, dict(Counter({c: 0 for c, _ in self.complexes}) + Counter(dict(self.complexes))))

    def domain_ids(self) -> set[str]:
        ids = set()
        for cx, _ in self.complexes:
            for st in cx.strands():
                ids.update(d.id for d in st.domains)
        for st, _ in self.inputs.values():
            ids.update(d.id for d in st.domains)
        return ids

    def oligos(self) -> set[Strand]:
        out = {st for cx, _ in self.complexes for st in cx.strands()}
        out.update(st for st, _ in self.inputs.values())
        return out


def _distinct(*names: str):
    if len(set(names)) != len(names):
        raise ValueError(f"gate signal names must be distinct, got {names}")


def relay_complex(src: str, dst: str) -> GateComplex:
    """``src`` releases one ``dst`` strand."""
    ts, ms = wire(src)
    td, md = wire(dst)
    out = Strand((td, md, ms))
    return GateComplex(Strand((~ts, ~ms)), (Bound(out, 1, 2, 1),))


def chain_complex(inputs: list[str], out: str) -> GateComplex:
    """Sequential AND: input ``i`` exposes the toehold of input ``i + 1``.

    Backbone ``t1* m1* t2* m2* ... tk* mk*``; blockers ``[m_i t_(i+1)]`` hide
    every toehold after the first, and the output strand ``[t_o m_o m_k]``
    sits on the last migration domain.
    """
    doms = [wire(n) for n in inputs]
    backbone = Strand(tuple(~d for pair in doms for d in pair))
    incs = []
    for i in range(len(inputs) - 1):
        incs.append(Bound(Strand((doms[i][1], doms[i + 1][0])), 2 * i + 1, 0, 2))
    to, mo = wire(out)
    incs.append(Bound(Strand((to, mo, doms[-1][1])), 2 * len(inputs) - 1, 2, 1))
    return GateComplex(backbone, tuple(incs))


def make_and_gate(in1: str, in2: str, out: str) -> Gate:
    _distinct(in1, in2, out)
    return Gate("AND", ((chain_complex([in1, in2], out), 1),),
                {in1: (signal_strand(in1), 1), in2: (signal_strand(in2), 1)}, (out,))


def make_or_gate(in1: str, in2: str, out: str) -> Gate:
    _distinct(in1, in2, out)
    return Gate("OR", ((relay_complex(in1, out), 1), (relay_complex(in2, out), 1)),
                {in1: (signal_strand(in1), 1), in2: (signal_strand(in2), 1)}, (out,))


def make_not_gate(inp: str, out: str) -> Gate:
    """Dual-rail NOT: ``inp~1`` releases ``out~0`` and ``inp~0`` releases ``out~1``."""
    _distinct(inp, out)
    cxs = ((relay_complex(rail(inp, 1), rail(out, 0)), 1), (relay_complex(rail(inp, 0), rail(out, 1)), 1))
    inputs = {rail(inp, b): (signal_strand(rail(inp, b)), 1) for b in (0, 1)}
    return Gate("NOT", cxs, inputs, (rail(out, 0), rail(out, 1)))


def make_multi_input_and(inputs: list[str], out: str) -> Gate:
    if len(inputs) < 2:
        raise ValueError("multi-input AND needs at least 2 inputs")
    _distinct(*inputs, out)
    return Gate("AND-k", ((chain_complex(list(inputs), out), 1),),
                {n: (signal_strand(n), 1) for n in inputs}, (out,))


def make_cascade_and(inputs: list[str], out: str) -> Gate:
    """Same logic as :func:`make_multi_input_and` built from chained 2-input gates."""
    if len(inputs) < 2:
        raise ValueError("cascade AND needs at least 2 inputs")
    _distinct(*inputs, out)
    cxs = []
    acc = inputs[0]
    for i, nxt in enumerate(inputs[1:], start=1):
        dst = out if i == len(inputs) - 1 else f"{out}.c{i}"
        cxs.append((chain_complex([acc, nxt], dst), 1))
        acc = dst
    return Gate("AND-cascade", tuple(cxs), {n: (signal_strand(n), 1) for n in inputs}, (out,))


def make_threshold_gate(weights: list[int], theta: int, out: str, inputs: list[str] | None = None) -> Gate:
    """Linear threshold unit: output iff sum(w_i * x_i) >= theta + 1.

    Input ``i`` is injected as ``w_i`` copies, each converted to a shared
    signal strand by its own translator complex. A counter complex of
    ``theta + 1`` sequential stages absorbs the first ``theta`` signals and
    releases the output on the next one.
    """
    if not weights or any(int(w) != w or w < 1 for w in weights):
        raise ValueError("weights must be positive integers")
    if int(theta) != theta or theta < 1:
        raise ValueError("theta must be a positive integer; express an always-on gate explicitly")
    if theta > sum(weights):
        raise ValueError("theta exceeds the sum of weights; the gate could never be reached")
    names = list(inputs) if inputs else [f"{out}.x{i}" for i in range(len(weights))]
    if len(names) != len(weights):
        raise ValueError("one input name per weight")
    sig = f"{out}.sig"
    _distinct(*names, out, sig)
    cxs = [(relay_complex(n, sig), w) for n, w in zip(names, weights)]
    counter = chain_complex([sig] * (theta + 1), out)
    cxs.append((counter, 1))
    return Gate("THRESHOLD", tuple(cxs), {n: (signal_strand(n), w) for n, w in zip(names, weights)}, (out,))


# -- reporting --------------------------------------------------------------------


def rail_status(s: SolutionState, name: str) -> str:
    """``"0"``, ``"1"``, ``"none"`` or ``"invalid"`` (both rails present)."""
    lo, hi = signal_present(s, rail(name, 0)), signal_present(s, rail(name, 1))
    if lo and hi:
        return "invalid"
    if hi:
        return "1"
    if lo:
        return "0"
    return "none"


@dataclass(frozen=True)
class GateRun:
    outputs: dict[str, bool]
    invalid_rails: tuple[str, ...]
    run: SimulationRun


def run_gate(g: Gate, present: Iterable[str], seed: int = 0, leak_rate: float = 0.0,
             max_events: int = 10_000) -> GateRun:
    """Inject ``present`` inputs, simulate, and report output presence.

    Dual-rail signals (``name~0``/``name~1``) seen on both rails, either in
    the injected inputs or in the final state, are flagged as invalid.
    """
    present = list(present)
    init = g.state(present)
    run = simulate(init, seed, leak_rate, max_events)
    outs = {o: signal_present(run.final, o) for o in g.outputs}
    bases = {n.rsplit("~", 1)[0] for n in list(g.inputs) + list(g.outputs) if "~" in n}
    bad = tuple(sorted(b for b in bases
                       if rail_status(init, b) == "invalid" or rail_status(run.final, b) == "invalid"))
    return GateRun(outs, bad, run)


def leak_fixture() -> tuple[SolutionState, str]:
    """Two chained AND gates with a stray waste strand; inputs x=1, y=0, z=1.

    The correct output is absent. The stray strand starts with y's toehold,
    so once x opens gate A it can leak gate A's output, which then drives
    gate B to a false positive.
    """
    a = chain_complex(["x", "y"], "w")
    b = chain_complex(["w", "z"], "out")
    stray = Strand((wire("y")[0], Domain("junk.m", "m")))
    state = SolutionState({signal_strand("x"): 1, signal_strand("z"): 1}, {a: 1, b: 1}, {stray: 1})
    return state, "out"


# -- serialisation ----------------------------------------------------------------


def domain_to_json(d: Domain) -> dict:
    return {"id": d.id, "kind": d.kind, "comp": d.comp}


def strand_to_json(st: Strand) -> dict:
    return {"domains": [domain_to_json(d) for d in st.domains]}


def complex_to_json(cx: GateComplex) -> dict:
    return {
        "backbone": strand_to_json(cx.backbone),
        "incumbents": [{"strand": strand_to_json(b.strand), "start": b.start, "offset": b.offset,
                        "length": b.length} for b in cx.incumbents],
    }


def strand_from_json(d: dict) -> Strand:
    return Strand(tuple(Domain(x["id"], x["kind"], bool(x["comp"])) for x in d["domains"]))


def complex_from_json(d: dict) -> GateComplex:
    return GateComplex(strand_from_json(d["backbone"]), tuple(
        Bound(strand_from_json(b["strand"]), b["start"], b["offset"], b["length"]) for b in d["incumbents"]))


def state_to_json(s: SolutionState) -> dict:
    waste = []
    for sp, n in s.waste.items():
        if isinstance(sp, GateComplex):
            waste.append({"complex": complex_to_json(sp), "count": n})
        else:
            waste.append({"strand": strand_to_json(sp), "count": n})
    return {
        "free": [{"strand": strand_to_json(st), "count": n} for st, n in s.free.items()],
        "complexes": [{"complex": complex_to_json(cx), "count": n} for cx, n in s.complexes.items()],
        "waste": waste,
    }


def state_from_json(d: dict) -> SolutionState:
    free = [(strand_from_json(e["strand"]), e["count"]) for e in d.get("free", [])]
    cxs = [(complex_from_json(e["complex"]), e["count"]) for e in d.get("complexes", [])]
    waste = []
    for e in d.get("waste", []):
        sp = complex_from_json(e["complex"]) if "complex" in e else strand_from_json(e["strand"])
        waste.append((sp, e["count"]))
    return SolutionState(free, cxs, waste)


def trace_to_jsonl(trace: list[ReactionEvent]) -> str:
    return "".join(json.dumps({"step": i, **ev.to_dict()}) + "\n" for i, ev in enumerate(trace))
