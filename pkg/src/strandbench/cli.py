"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 malformed input, 3 valid run with
no solution. Results go to stdout (or ``--output``); diagnostics go to
stderr. Every result embeds the tool version, the seed and a digest of the
inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from pathlib import Path

from . import __version__, adleman, circuits, dsd, feasibility, strands, tiling

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NO_SOLUTION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class NoSolution(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _digest(*parts: bytes | str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode() if isinstance(p, str) else p)
        h.update(b"\0")
    return h.hexdigest()[:16]


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str) -> tuple[object, bytes]:
    raw = _read(path)
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, col {exc.colno}: {exc.msg}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: byte {exc.start}: not UTF-8") from exc


def _styled() -> bool:
    return sys.stdout.isatty() and "STRANDBENCH_NO_COLOR" not in os.environ


def _meta(seed: int | None, digest: str) -> dict:
    return {"tool": "strandbench", "version": __version__, "seed": seed, "input_digest": digest}


def _emit(args, meta: dict, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out = json.dumps({"meta": meta, **payload}, indent=2, sort_keys=True) + "\n"
    else:
        head = f"# strandbench {meta['version']} seed={meta['seed']} input={meta['input_digest']}"
        if _styled() and not args.output:
            text_lines = [f"\033[1m{text_lines[0]}\033[0m"] + text_lines[1:] if text_lines else text_lines
        out = "\n".join([head] + text_lines) + "\n"
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


# -- subcommands ----------------------------------------------------------------


def cmd_design(args) -> int:
    try:
        c = strands.DesignConstraints(
            length=args.length,
            gc_fraction=(args.gc_min, args.gc_max),
            tm_window=(args.tm_min, args.tm_max),
            min_hamming=args.min_hamming,
            max_homopolymer=args.max_homopolymer,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        seqs = strands.design_library(c, args.count, args.seed)
    except strands.DesignInfeasible as exc:
        raise NoSolution(str(exc)) from exc
    meta = _meta(args.seed, _digest(json.dumps(vars_subset(args, ["length", "count", "gc_min", "gc_max", "tm_min",
                                                                  "tm_max", "min_hamming", "max_homopolymer"]))))
    rows = [{"seq": s, "gc": strands.gc_fraction(s), "tm": strands.melting_temp(s)} for s in seqs]
    _emit(args, meta, {"sequences": rows},
          [f"{r['seq']}  gc={r['gc']:.2f}  tm={r['tm']}" for r in rows])
    return EXIT_OK


def vars_subset(args, keys: list[str]) -> dict:
    return {k: getattr(args, k) for k in keys}


def cmd_adleman(args) -> int:
    data, raw = _load_json(args.graph)
    try:
        g = adleman.DiGraph.from_json(json.dumps(data))
    except (adleman.GraphError, TypeError, ValueError) as exc:
        raise InputError(f"{args.graph}: {exc}") from exc
    start = g.nodes[0] if args.start is None else args.start
    end = g.nodes[-1] if args.end is None else args.end
    if start not in g.nodes or end not in g.nodes:
        raise UsageError("--start and --end must be nodes of the graph")
    if args.mode == "exhaustive":
        mode = adleman.Exhaustive(args.max_nodes or len(g.nodes))
    else:
        mode = adleman.Stochastic(args.samples, seed=args.seed)
    enc = adleman.encode_graph(g, seed=args.seed)
    pool = adleman.assemble(g, mode)
    sols = adleman.select_hamiltonian(pool, g, start, end)
    strands_pool = adleman.to_strands(pool, enc)
    selected = adleman.molecular_selection(strands_pool, g, enc, start, end)
    meta = _meta(args.seed, _digest(raw, args.mode, str(args.samples), str(args.max_nodes), str(start), str(end)))
    payload = {
        "mode": args.mode,
        "start": start,
        "end": end,
        "nodes": {str(v): s for v, s in sorted(enc.node_seq.items())},
        "assembled_walks": len(pool),
        "solutions": [list(p) for p in sols],
        "solution_strands": [{"seq": s, "length": len(s), "count": n} for s, n in selected.items()],
    }
    lines = [f"walks assembled: {len(pool)}", f"hamiltonian paths {start}->{end}: {len(sols)}"]
    lines += ["  " + " -> ".join(map(str, p)) for p in sols]
    lines += [f"  strand {s} ({len(s)} bases)" for s in selected]
    _emit(args, meta, payload, lines)
    if not sols:
        print(f"no Hamiltonian path from {start} to {end}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    return EXIT_OK


def _bits(text: str, flag: str) -> list[int]:
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"{flag} must be a non-empty string of 0/1")
    return [int(c) for c in text]


def cmd_tile(args) -> int:
    if args.input:
        data, raw = _load_json(args.input)
        try:
            ts = tiling.TileSet.from_json(json.dumps(data))
            by_tag = {t.tag: t for t in ts.tiles}
            row = [by_tag[tag] for tag in data["seed_row"]]
        except KeyError as exc:
            raise InputError(f"{args.input}: missing key or unknown tile tag {exc}") from exc
        except tiling.TileError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
        try:
            res = tiling.assemble_generic(ts, row, args.steps, args.seed, args.temperature)
        except tiling.TileError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
        meta = _meta(args.seed, _digest(raw, str(args.steps), str(args.temperature)))
        payload = {"attachments": res.attachments, "stuck": res.stuck, "tiles": len(res.grid)}
        _emit(args, meta, payload, [f"attachments={res.attachments} stuck={res.stuck}", res.grid.render()])
        return EXIT_OK

    x = _bits(args.x, "--x")
    y0 = args.y0
    if y0 not in (0, 1):
        raise UsageError("--y0 must be 0 or 1")
    if args.mode == "generic":
        res = tiling.assemble_generic(tiling.XOR_TILESET, tiling.xor_seed(x, y0), 10 * len(x) + 10, args.seed,
                                      args.temperature)
        try:
            y = tiling.readout(res.grid, "output")
        except tiling.ReadoutError as exc:
            raise NoSolution(str(exc)) from exc
        grid = res.grid
        complete = len(y) == len(x)
    else:
        y, grid = tiling.run_xor(x, y0)
        complete = True
    meta = _meta(args.seed, _digest(args.x, str(y0), args.mode, str(args.temperature)))
    payload = {"x": x, "y0": y0, "y": y, "complete": complete}
    _emit(args, meta, payload, ["x  = " + "".join(map(str, x)), "y  = " + "".join(map(str, y)), grid.render()])
    return EXIT_OK if complete else EXIT_NO_SOLUTION


def _read_circuit(path: str) -> tuple[circuits.CircuitAst, bytes]:
    raw = _read(path)
    try:
        return circuits.parse_circuit(raw.decode("utf-8")), raw
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: byte {exc.start}: not UTF-8") from exc
    except circuits.CircuitSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_dsd_compile(args) -> int:
    path = args.circuit or args.input
    if not path:
        raise UsageError("dsd-compile needs a circuit file")
    ast, raw = _read_circuit(path)
    opts = circuits.CompileOptions(multi_input=args.mode != "cascade", dual_rail=args.dual_rail)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        c = circuits.compile_circuit(ast, opts)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    meta = _meta(args.seed, _digest(raw, args.mode, str(args.dual_rail)))
    if args.emit == "stats":
        text = c.stats.as_lines()
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    body = circuits.to_json(c)
    out = json.dumps({"meta": meta, **body}, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _parse_assign(text: str | None) -> dict[str, int]:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"--assign entries look like name=0|1, got {part!r}")
        k, v = part.split("=", 1)
        if v.strip() not in ("0", "1"):
            raise UsageError(f"--assign value for {k!r} must be 0 or 1")
        out[k.strip()] = int(v)
    return out


def cmd_dsd_sim(args) -> int:
    path = args.species or args.input
    if not path:
        raise UsageError("dsd-sim needs a species JSON file")
    if args.leak_rate < 0 or args.max_events < 0:
        raise UsageError("--leak-rate and --max-events must be >= 0")
    data, raw = _load_json(path)
    assign = _parse_assign(args.assign)
    meta = _meta(args.seed, _digest(raw, json.dumps(assign, sort_keys=True), repr(args.leak_rate),
                                    str(args.max_events)))
    try:
        if isinstance(data, dict) and "circuit" in data:
            c = circuits.from_json(data)
            missing = [n for n in c.ast.inputs if n not in assign]
            if missing:
                raise UsageError(f"--assign is missing inputs {missing}")
            state = circuits.inject(c, assign)
        else:
            c = None
            state = dsd.state_from_json(data.get("state", data))
    except (KeyError, TypeError, AttributeError, ValueError, circuits.CircuitSyntaxError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise InputError(f"{path}: malformed species JSON ({exc})") from exc

    run = dsd.simulate(state, args.seed, args.leak_rate, args.max_events)
    payload: dict = {"events": len(run.trace), "stop": run.reason, "final": dsd.state_to_json(run.final)}
    lines = [f"events={len(run.trace)} stop={run.reason}"]
    status = EXIT_OK
    if c is not None:
        try:
            outs = circuits.read_outputs(c, run.final)
            payload["outputs"] = outs
            lines += [f"{k}={v}" for k, v in outs.items()]
        except circuits.InvalidEncoding as exc:
            payload["invalid_encoding"] = str(exc)
            lines.append(f"invalid encoding: {exc}")
            print(f"invalid encoding: {exc}", file=sys.stderr)
            status = EXIT_NO_SOLUTION
    if run.reason != "quiescent":
        print(f"simulation stopped before quiescence ({run.reason})", file=sys.stderr)
    if args.trace:
        Path(args.trace).write_text(dsd.trace_to_jsonl(run.trace), encoding="utf-8")
    _emit(args, meta, payload, lines)
    return status


def cmd_feasibility(args) -> int:
    try:
        summary = feasibility.feasibility_summary(args.n, args.seg_len, args.copies, args.mass_per_bp)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    meta = _meta(None, _digest(json.dumps(vars_subset(args, ["n", "seg_len", "copies", "mass_per_bp"]))))
    payload = {
        "paths": str(summary["paths"]),
        "paths_sci": feasibility.sci(summary["paths"]),
        "strand_bp": summary["strand_bp"],
        "mass_kg": summary["mass_kg"],
        "strands_required": summary["strands_required"],
        "capacity_bound_bp": summary["capacity_bound_bp"],
        "reported_min_length_bp": summary["reported_min_length_bp"],
        "comparison": feasibility.comparison_report(),
    }
    lines = [
        f"cities            {args.n}",
        f"paths             {feasibility.sci(summary['paths'])}",
        f"strand length     {summary['strand_bp']} bp",
        f"DNA mass          {feasibility.sci(summary['mass_kg'])} kg",
        f"unique strands    {summary['strands_required']}",
        f"length bound      {summary['capacity_bound_bp']} bp (4^L >= strands); reported figure "
        f"{summary['reported_min_length_bp']} bp",
        "",
    ]
    for row in feasibility.comparison_report():
        lines.append(f"{row['characteristic']}: silicon {row['silicon']} | DNA {row['dna']}")
    _emit(args, meta, payload, lines)
    return EXIT_OK


# -- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="strandbench", description="DNA computing models: design, search, tiles, displacement")
    p.add_argument("--version", action="version", version=f"strandbench {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, seed=True):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o")
        sp.add_argument("--format", choices=["text", "json"], default="text")

    d = sub.add_parser("design", help="generate a constrained sequence library")
    d.add_argument("--length", type=int, default=20)
    d.add_argument("--count", "-k", type=int, default=8)
    d.add_argument("--gc-min", type=float, default=0.4)
    d.add_argument("--gc-max", type=float, default=0.6)
    d.add_argument("--tm-min", type=float, default=float("-inf"))
    d.add_argument("--tm-max", type=float, default=float("inf"))
    d.add_argument("--min-hamming", type=int, default=6)
    d.add_argument("--max-homopolymer", type=int, default=4)
    common(d)
    d.set_defaults(func=cmd_design)

    a = sub.add_parser("adleman", help="encode, assemble and select Hamiltonian paths of a graph file")
    a.add_argument("--graph", "--input", dest="graph", required=True)
    a.add_argument("--start", type=int)
    a.add_argument("--end", type=int)
    a.add_argument("--mode", choices=["exhaustive", "stochastic"], default="exhaustive")
    a.add_argument("--samples", type=int, default=10_000)
    a.add_argument("--max-nodes", type=int)
    common(a)
    a.set_defaults(func=cmd_adleman)

    t = sub.add_parser("tile", help="run the XOR tile set or grow a tile-set file")
    t.add_argument("--x", default="1011")
    t.add_argument("--y0", type=int, default=0)
    t.add_argument("--mode", choices=["direct", "generic"], default="direct")
    t.add_argument("--input", help="tile-set JSON with a seed_row of tile tags")
    t.add_argument("--steps", type=int, default=100)
    t.add_argument("--temperature", type=int, default=2)
    common(t)
    t.set_defaults(func=cmd_tile)

    c = sub.add_parser("dsd-compile", help="compile a .circ file to species JSON")
    c.add_argument("circuit", nargs="?")
    c.add_argument("--input")
    c.add_argument("--mode", choices=["multi", "cascade"], default="multi")
    c.add_argument("--dual-rail", action="store_true")
    c.add_argument("--emit", choices=["species", "stats"], default="species")
    common(c)
    c.set_defaults(func=cmd_dsd_compile)

    s = sub.add_parser("dsd-sim", help="simulate compiled species or a raw state")
    s.add_argument("species", nargs="?")
    s.add_argument("--input")
    s.add_argument("--assign", help="comma separated name=bit pairs")
    s.add_argument("--leak-rate", type=float, default=0.0)
    s.add_argument("--max-events", type=int, default=10_000)
    s.add_argument("--trace", help="write the event trace as JSON lines")
    common(s)
    s.set_defaults(func=cmd_dsd_sim)

    f = sub.add_parser("feasibility", help="resource report for brute-force DNA search")
    f.add_argument("report", nargs="?", choices=["report"])
    f.add_argument("--n", type=int, default=62)
    f.add_argument("--seg-len", type=int, default=150)
    f.add_argument("--copies", type=int, default=100)
    f.add_argument("--mass-per-bp", type=float, default=660.0)
    common(f, seed=False)
    f.set_defaults(func=cmd_feasibility, seed=None)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoSolution as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION


if __name__ == "__main__":
    sys.exit(main())
