"""Boolean circuit DSL, compiler to strand-displacement species, and evaluator.

Grammar (one statement per line, ``#`` starts a comment)::

    inputs a b c
    w = AND(a, b)          # AND with 3..8 arguments is a k-input AND
    y = OR(w, c)
    z = NOT(y)
    outputs y z

Each wire ``w`` becomes a signal carried by the domains ``w.t`` / ``w.m``
(``w~0.t`` and so on for dual-rail encodings). Gates are built from the
complexes in :mod:`strandbench.dsd`; fan-out is handled by giving a gate
one complex copy per downstream consumer.
"""

from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from . import dsd
from .dsd import GateComplex, SolutionState, Strand, chain_complex, rail, relay_complex, signal_strand

GATE_KINDS = ("AND", "OR", "NOT")
MAX_AND_ARITY = 8
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class CircuitSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, col {col}: {message}")


class SimulationTimeout(RuntimeError):
    def __init__(self, message: str, trace: list):
        self.trace = trace
        super().__init__(message)


@dataclass(frozen=True)
class Assignment:
    wire: str
    kind: str  # AND, OR, NOT, AND-k
    args: tuple[str, ...]
    line: int = 0


@dataclass(frozen=True)
class CircuitAst:
    inputs: tuple[str, ...]
    assignments: tuple[Assignment, ...]
    outputs: tuple[str, ...]

    def gate_for(self, wire: str) -> Assignment | None:
        for a in self.assignments:
            if a.wire == wire:
                return a
        return None

    @property
    def has_not(self) -> bool:
        return any(a.kind == "NOT" for a in self.assignments)


# -- parsing ------------------------------------------------------------------

_ASSIGN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _names_with_cols(text: str, base_col: int, lineno: int) -> list[tuple[str, int]]:
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        if not _IDENT.fullmatch(tok):
            raise CircuitSyntaxError(f"invalid identifier {tok!r}", lineno, base_col + m.start() + 1)
        out.append((tok, base_col + m.start() + 1))
    return out


def parse_circuit(text: str) -> CircuitAst:
    """Parse DSL text; the first problem found raises :class:`CircuitSyntaxError`."""
    raw = text.splitlines()
    # pass 1: tokenise every statement so forward references can be classified
    stmts: list[tuple[str, int, object]] = []
    for lineno, line in enumerate(raw, start=1):
        body = _strip_comment(line)
        if not body.strip():
            continue
        head = body.split(None, 1)[0]
        if head in ("inputs", "outputs"):
            col = body.index(head) + len(head)
            names = _names_with_cols(body[col:], col, lineno)
            if not names:
                raise CircuitSyntaxError(f"'{head}' needs at least one name", lineno, col + 1)
            stmts.append((head, lineno, names))
            continue
        m = _ASSIGN.match(body)
        if not m:
            raise CircuitSyntaxError("expected 'inputs', 'outputs' or 'wire = GATE(args)'", lineno,
                                     len(body) - len(body.lstrip()) + 1)
        wire_name, kind = m.group(1), m.group(2)
        if kind not in GATE_KINDS:
            raise CircuitSyntaxError(f"unknown gate {kind!r}", lineno, m.start(2) + 1)
        args = []
        arg_text, arg_col = m.group(3), m.start(3)
        if arg_text.strip():
            for part in re.finditer(r"[^,]+", arg_text):
                tok = part.group(0).strip()
                col = arg_col + part.start() + (len(part.group(0)) - len(part.group(0).lstrip())) + 1
                if not _IDENT.fullmatch(tok):
                    raise CircuitSyntaxError(f"invalid argument {tok!r}", lineno, col)
                args.append((tok, col))
        stmts.append(("assign", lineno, (wire_name, m.start(1) + 1, kind, m.start(2) + 1, args)))

    later_defs: dict[str, tuple[int, list[str]]] = {}
    for kind, lineno, payload in stmts:
        if kind == "assign":
            wire_name, _, _, _, args = payload
            later_defs.setdefault(wire_name, (lineno, [a for a, _ in args]))

    def depends_on(start: str, target: str) -> bool:
        seen, stack = set(), [start]
        while stack:
            w = stack.pop()
            if w == target:
                return True
            if w in seen or w not in later_defs:
                continue
            seen.add(w)
            stack.extend(later_defs[w][1])
        return False

    inputs: list[str] = []
    outputs: list[str] = []
    defined: dict[str, int] = {}
    assignments: list[Assignment] = []
    seen_inputs = seen_outputs = False

    def check_use(name: str, lineno: int, col: int, user: str | None):
        if name in defined:
            return
        if name in later_defs and user is not None and (name == user or depends_on(name, user)):
            raise CircuitSyntaxError(f"cycle through {name!r}", lineno, col)
        if name in later_defs:
            raise CircuitSyntaxError(f"{name!r} used before its definition on line {later_defs[name][0]}",
                                     lineno, col)
        raise CircuitSyntaxError(f"unknown identifier {name!r}", lineno, col)

    for kind, lineno, payload in stmts:
        if kind == "inputs":
            if seen_inputs:
                raise CircuitSyntaxError("'inputs' declared twice", lineno, 1)
            if assignments:
                raise CircuitSyntaxError("'inputs' must come before any gate", lineno, 1)
            seen_inputs = True
            for name, col in payload:
                if name in defined:
                    raise CircuitSyntaxError(f"redefinition of {name!r}", lineno, col)
                defined[name] = lineno
                inputs.append(name)
        elif kind == "outputs":
            if seen_outputs:
                raise CircuitSyntaxError("'outputs' declared twice", lineno, 1)
            seen_outputs = True
            for name, col in payload:
                check_use(name, lineno, col, None)
                if name in outputs:
                    raise CircuitSyntaxError(f"output {name!r} listed twice", lineno, col)
                outputs.append(name)
        else:
            wire_name, wcol, gate, gcol, args = payload
            if not seen_inputs:
                raise CircuitSyntaxError("missing 'inputs' declaration before first gate", lineno, 1)
            if seen_outputs:
                raise CircuitSyntaxError("gate after 'outputs'", lineno, 1)
            if wire_name in defined:
                raise CircuitSyntaxError(f"redefinition of {wire_name!r}", lineno, wcol)
            n = len(args)
            if gate == "NOT" and n != 1:
                raise CircuitSyntaxError(f"NOT takes 1 argument, got {n}", lineno, gcol)
            if gate == "OR" and n != 2:
                raise CircuitSyntaxError(f"OR takes 2 arguments, got {n}", lineno, gcol)
            if gate == "AND" and not 2 <= n <= MAX_AND_ARITY:
                raise CircuitSyntaxError(f"AND takes 2..{MAX_AND_ARITY} arguments, got {n}", lineno, gcol)
            for a, acol in args:
                check_use(a, lineno, acol, wire_name)
            defined[wire_name] = lineno
            gkind = "AND-k" if gate == "AND" and n > 2 else gate
            assignments.append(Assignment(wire_name, gkind, tuple(a for a, _ in args), lineno))

    last = len(raw) if raw else 1
    if not seen_inputs:
        raise CircuitSyntaxError("missing 'inputs' declaration", 1, 1)
    if not seen_outputs:
        raise CircuitSyntaxError("missing 'outputs' declaration", last, 1)
    return CircuitAst(tuple(inputs), tuple(assignments), tuple(outputs))


def format_circuit(ast: CircuitAst) -> str:
    lines = ["inputs " + " ".join(ast.inputs)]
    for a in ast.assignments:
        gate = "AND" if a.kind == "AND-k" else a.kind
        lines.append(f"{a.wire} = {gate}({', '.join(a.args)})")
    lines.append("outputs " + " ".join(ast.outputs))
    return "\n".join(lines) + "\n"


def evaluate_ast(ast: CircuitAst, assignment: Mapping[str, int]) -> dict[str, int]:
    missing = [n for n in ast.inputs if n not in assignment]
    if missing:
        raise KeyError(f"no value for inputs {missing}")
    env = {n: int(bool(assignment[n])) for n in ast.inputs}
    for a in ast.assignments:
        vals = [env[x] for x in a.args]
        if a.kind == "NOT":
            env[a.wire] = 1 - vals[0]
        elif a.kind == "OR":
            env[a.wire] = int(any(vals))
        else:
            env[a.wire] = int(all(vals))
    return {o: env[o] for o in ast.outputs}


def circuit_depth(ast: CircuitAst) -> int:
    depth = {n: 0 for n in ast.inputs}
    for a in ast.assignments:
        depth[a.wire] = 1 + max(depth[x] for x in a.args)
    return max((depth[o] for o in ast.outputs), default=0)


# -- compilation --------------------------------------------------------------


@dataclass(frozen=True)
class CompileOptions:
    multi_input: bool = True
    dual_rail: bool = False


@dataclass(frozen=True)
class CircuitStats:
    gates: int
    depth: int
    distinct_oligos: int

    def as_lines(self) -> str:
        return f"gates={self.gates}\ndepth={self.depth}\ndistinct_oligos={self.distinct_oligos}\n"


@dataclass(frozen=True)
class Injection:
    strand: Strand
    copies: int


@dataclass(frozen=True)
class CompileOutput:
    ast: CircuitAst
    options: CompileOptions
    initial_state: SolutionState
    input_map: Mapping[str, Mapping[int, Injection]]  # bit -> what to inject; absent bit injects nothing
    output_map: Mapping[str, Mapping[int, str]]  # bit -> signal whose presence reports it
    gate_complexes: Mapping[str, tuple[GateComplex, ...]]  # per AST wire
    gate_wires: Mapping[str, frozenset[str]]  # signals each gate touches
    stats: CircuitStats = field(default=None)

    @property
    def species(self) -> list[Strand | GateComplex]:
        strands = set()
        for inj in (i for m in self.input_map.values() for i in m.values()):
            strands.add(inj.strand)
        cxs = set(self.initial_state.complexes)
        for cx in cxs:
            strands.update(cx.strands())
        return sorted(strands, key=lambda s: s.key) + sorted(cxs, key=lambda c: c.key)

    def oligos(self) -> set[Strand]:
        return {s for s in self.species if isinstance(s, Strand)}

    def domain_ids(self) -> set[str]:
        return {d.id for s in self.oligos() for d in s.domains}


@dataclass(frozen=True)
class _Unit:
    kind: str  # "chain" or "relay"
    inputs: tuple[str, ...]
    out: str
    gate: str  # owning AST wire


def _units_for(a: Assignment, multi_input: bool, dual: bool) -> list[_Unit]:
    def and_units(ins: list[str], out: str) -> list[_Unit]:
        if multi_input or len(ins) == 2:
            return [_Unit("chain", tuple(ins), out, a.wire)]
        units, acc = [], ins[0]
        for i, nxt in enumerate(ins[1:], start=1):
            dst = out if i == len(ins) - 1 else f"{out}.c{i}"
            units.append(_Unit("chain", (acc, nxt), dst, a.wire))
            acc = dst
        return units

    def relays(ins: list[str], out: str) -> list[_Unit]:
        return [_Unit("relay", (x,), out, a.wire) for x in ins]

    if not dual:
        if a.kind == "NOT":
            raise ValueError("NOT needs dual-rail compilation")
        if a.kind == "OR":
            return relays(list(a.args), a.wire)
        return and_units(list(a.args), a.wire)
    hi = [rail(x, 1) for x in a.args]
    lo = [rail(x, 0) for x in a.args]
    if a.kind == "NOT":
        return [_Unit("relay", (hi[0],), rail(a.wire, 0), a.wire), _Unit("relay", (lo[0],), rail(a.wire, 1), a.wire)]
    if a.kind == "OR":
        return relays(hi, rail(a.wire, 1)) + and_units(lo, rail(a.wire, 0))
    return and_units(hi, rail(a.wire, 1)) + relays(lo, rail(a.wire, 0))


def compile_circuit(ast: CircuitAst, opts: CompileOptions | None = None) -> CompileOutput:
    """Lower an AST to gate complexes with copy numbers plus input/output maps.

    Copy numbers are demand-driven: a signal consumed ``d`` times downstream
    (circuit outputs count once, as their reporter) is produced by ``d``
    copies of its gate, and every consuming complex copy takes one strand.
    """
    opts = opts or CompileOptions()
    dual = opts.dual_rail
    if ast.has_not and not dual:
        warnings.warn("circuit contains NOT; compiling with dual-rail encoding", stacklevel=2)
        dual = True
        opts = CompileOptions(opts.multi_input, True)

    units: list[_Unit] = []
    for a in ast.assignments:
        units.extend(_units_for(a, opts.multi_input, dual))

    def signals_of(wire_name: str) -> list[str]:
        return [rail(wire_name, 0), rail(wire_name, 1)] if dual else [wire_name]

    demand: Counter = Counter()
    for o in ast.outputs:
        for sgn in signals_of(o):
            demand[sgn] += 1
    copies: list[int] = [0] * len(units)
    for i in range(len(units) - 1, -1, -1):
        u = units[i]
        # every gate is instantiated at least once, even if nothing reads it
        copies[i] = max(demand[u.out], 1)
        for x in u.inputs:
            demand[x] += copies[i]

    complexes: Counter = Counter()
    per_gate: dict[str, list[GateComplex]] = {a.wire: [] for a in ast.assignments}
    touched: dict[str, set[str]] = {a.wire: set() for a in ast.assignments}
    for u, n in zip(units, copies):
        cx = chain_complex(list(u.inputs), u.out) if u.kind == "chain" else relay_complex(u.inputs[0], u.out)
        complexes[cx] += n
        if cx not in per_gate[u.gate]:
            per_gate[u.gate].append(cx)
        touched[u.gate].update(u.inputs)
        touched[u.gate].add(u.out)

    input_map: dict[str, dict[int, Injection]] = {}
    for name in ast.inputs:
        if dual:
            input_map[name] = {b: Injection(signal_strand(rail(name, b)), max(demand[rail(name, b)], 1))
                               for b in (0, 1)}
        else:
            input_map[name] = {1: Injection(signal_strand(name), max(demand[name], 1))}
    output_map = {o: ({0: rail(o, 0), 1: rail(o, 1)} if dual else {1: o}) for o in ast.outputs}

    out = CompileOutput(
        ast=ast,
        options=opts,
        initial_state=SolutionState({}, complexes),
        input_map=input_map,
        output_map=output_map,
        gate_complexes={k: tuple(v) for k, v in per_gate.items()},
        gate_wires={k: frozenset(v) for k, v in touched.items()},
    )
    stats = CircuitStats(len(ast.assignments), circuit_depth(ast), len(out.oligos()))
    object.__setattr__(out, "stats", stats)
    return out


def _signal_of_domain(domain_id: str) -> str:
    return domain_id.rsplit(".", 1)[0]


def freshness_violations(c: CompileOutput) -> list[tuple[str, str, str]]:
    """Domains shared by two gates without a wire connecting them.

    Returns ``(domain id, gate a, gate b)`` triples; empty means every
    cross-gate domain is a declared wire connection.
    """
    owners: dict[str, list[str]] = {}
    for g, cxs in c.gate_complexes.items():
        ids = {d.id for cx in cxs for s in cx.strands() for d in s.domains}
        for i in ids:
            owners.setdefault(i, []).append(g)
    bad = []
    for i, gs in sorted(owners.items()):
        sig = _signal_of_domain(i)
        for x in range(len(gs)):
            for y in range(x + 1, len(gs)):
                if not (sig in c.gate_wires[gs[x]] and sig in c.gate_wires[gs[y]]):
                    bad.append((i, gs[x], gs[y]))
    return bad


def event_bound(c: CompileOutput) -> int:
    """Upper bound on displacements at zero leak: one per incumbent copy."""
    return sum(n * len(cx.incumbents) for cx, n in c.initial_state.complexes.items())


def inject(c: CompileOutput, assignment: Mapping[str, int]) -> SolutionState:
    missing = [n for n in c.ast.inputs if n not in assignment]
    if missing:
        raise KeyError(f"no value for inputs {missing}")
    free: Counter = Counter()
    for name in c.ast.inputs:
        inj = c.input_map[name].get(int(bool(assignment[name])))
        if inj is not None:
            free[inj.strand] += inj.copies
    return c.initial_state.add(free=free)


class InvalidEncoding(RuntimeError):
    pass


def read_outputs(c: CompileOutput, s: SolutionState) -> dict[str, int]:
    out = {}
    for name, rails in c.output_map.items():
        seen = {b for b, sig in rails.items() if dsd.signal_present(s, sig)}
        if c.options.dual_rail:
            if seen == {0, 1}:
                raise InvalidEncoding(f"both rails of {name!r} are present")
            if not seen:
                raise InvalidEncoding(f"neither rail of {name!r} is present")
            out[name] = seen.pop()
        else:
            out[name] = int(1 in seen)
    return out


@dataclass(frozen=True)
class Evaluation:
    outputs: dict[str, int]
    run: dsd.SimulationRun


def evaluate_detailed(c: CompileOutput, assignment: Mapping[str, int], seed: int = 0, leak_rate: float = 0.0,
                      max_events: int | None = None) -> Evaluation:
    state = inject(c, assignment)
    if max_events is None:
        max_events = 10 * event_bound(c) + 100
    run = dsd.simulate(state, seed, leak_rate, max_events)
    if run.reason != "quiescent":
        raise SimulationTimeout(f"no quiescence after {len(run.trace)} events", run.trace)
    return Evaluation(read_outputs(c, run.final), run)


def evaluate(c: CompileOutput, assignment: Mapping[str, int], seed: int = 0, leak_rate: float = 0.0,
             max_events: int | None = None) -> dict[str, int]:
    return evaluate_detailed(c, assignment, seed, leak_rate, max_events).outputs


def to_json(c: CompileOutput) -> dict:
    return {
        "circuit": format_circuit(c.ast),
        "options": {"multi_input": c.options.multi_input, "dual_rail": c.options.dual_rail},
        "inputs": {n: {str(b): {"strand": dsd.strand_to_json(i.strand), "count": i.copies} for b, i in m.items()}
                   for n, m in c.input_map.items()},
        "outputs": {n: {str(b): s for b, s in m.items()} for n, m in c.output_map.items()},
        "stats": {"gates": c.stats.gates, "depth": c.stats.depth, "distinct_oligos": c.stats.distinct_oligos},
        "state": dsd.state_to_json(c.initial_state),
    }


def from_json(d: dict) -> CompileOutput:
    """Rebuild a compiled circuit; the DSL text is re-parsed and compiled, then checked against the stored state."""
    ast = parse_circuit(d["circuit"])
    opts = CompileOptions(**d["options"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = compile_circuit(ast, opts)
    stored = dsd.state_from_json(d["state"])
    if stored != c.initial_state:
        raise ValueError("stored species do not match the circuit text")
    return c


def instantiate_sequences(c: CompileOutput, length: int = 10, seed: int = 0) -> dict[str, str]:
    """Concrete ACGT sequence per plain domain id (complements follow by reverse complement)."""
    from .strands import DesignConstraints, design_library

    ids = sorted(c.domain_ids())
    cons = DesignConstraints(length=length, gc_fraction=(0.4, 0.6), min_hamming=max(1, length // 3),
                             max_homopolymer=3)
    return dict(zip(ids, design_library(cons, len(ids), seed)))
