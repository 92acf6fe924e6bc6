"""Wang tile self-assembly with a built-in seven-tile XOR set.

Tiles carry four glue labels ``(n, e, s, w)`` and an optional tag. Tags
starting with ``X`` mark input tiles and tags starting with ``Y`` mark
output tiles; the trailing character is the bit (``"X1"``, ``"Y0"``).

XOR layout used by :func:`run_xor`::

    row 1:  Y0  Y1  Y2 ... Yn        Y_i = Y_(i-1) XOR X_i
    row 0:  R   X1  X2 ... Xn        R is the root tile

Each computation tile reads ``x`` on its south side and the previous
result on its west side, and presents its own result on east and north.
The first Y tile sits on the root (which offers ``x0``) and therefore
simply carries the initial value ``y0``. Physical readout (PCR primers on
reporter strands, AFM) is abstracted to reading tile tags.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

Pos = tuple[int, int]  # (row, col); row grows upwards

SIDES = ("n", "e", "s", "w")
# side -> (row offset, col offset, the neighbour's facing side)
_NEIGHBOUR = {
    "n": (1, 0, "s"),
    "s": (-1, 0, "n"),
    "e": (0, 1, "w"),
    "w": (0, -1, "e"),
}


class TileError(ValueError):
    pass


class GlueMismatch(TileError):
    def __init__(self, pos: Pos, side: str, mine: str, theirs: str):
        self.pos, self.side = pos, side
        super().__init__(f"glue mismatch at {pos} on {side} side: {mine!r} vs neighbour {theirs!r}")


class ReadoutError(TileError):
    pass


@dataclass(frozen=True)
class WangTile:
    n: str
    e: str
    s: str
    w: str
    tag: str | None = None

    def glue(self, side: str) -> str:
        return getattr(self, side)

    @property
    def role(self) -> str | None:
        if self.tag is None:
            return None
        if self.tag.startswith("X"):
            return "input"
        if self.tag.startswith("Y"):
            return "output"
        return self.tag

    @property
    def bit(self) -> int | None:
        if self.role in ("input", "output"):
            return int(self.tag[-1])
        return None


@dataclass(frozen=True)
class TileSet:
    palette: tuple[str, ...]
    tiles: tuple[WangTile, ...]

    def __post_init__(self):
        object.__setattr__(self, "palette", tuple(self.palette))
        object.__setattr__(self, "tiles", tuple(self.tiles))
        for t in self.tiles:
            for side in SIDES:
                if t.glue(side) not in self.palette:
                    raise TileError(f"glue {t.glue(side)!r} of {t} not in palette")

    def to_json(self) -> str:
        return json.dumps({
            "palette": list(self.palette),
            "tiles": [{"n": t.n, "e": t.e, "s": t.s, "w": t.w, "tag": t.tag} for t in self.tiles],
        })

    @classmethod
    def from_json(cls, text: str) -> "TileSet":
        data = json.loads(text)
        try:
            tiles = [WangTile(d["n"], d["e"], d["s"], d["w"], d.get("tag")) for d in data["tiles"]]
            return cls(tuple(data["palette"]), tuple(tiles))
        except (KeyError, TypeError) as exc:
            raise TileError(f"malformed tile set JSON: {exc}") from exc


@dataclass(frozen=True)
class AssemblyGrid:
    placements: Mapping[Pos, WangTile] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "placements", dict(self.placements))

    def __contains__(self, pos: Pos) -> bool:
        return pos in self.placements

    def __getitem__(self, pos: Pos) -> WangTile:
        return self.placements[pos]

    def __len__(self):
        return len(self.placements)

    def __eq__(self, other):
        if not isinstance(other, AssemblyGrid):
            return NotImplemented
        return self.placements == other.placements

    def __hash__(self):
        return hash(frozenset(self.placements.items()))

    def neighbours(self, pos: Pos) -> Iterable[tuple[str, Pos, WangTile, str]]:
        r, c = pos
        for side, (dr, dc, facing) in _NEIGHBOUR.items():
            q = (r + dr, c + dc)
            if q in self.placements:
                yield side, q, self.placements[q], facing

    def render(self) -> str:
        if not self.placements:
            return ""
        rows = [p[0] for p in self.placements]
        cols = [p[1] for p in self.placements]
        lines = []
        for r in range(max(rows), min(rows) - 1, -1):
            cells = []
            for c in range(min(cols), max(cols) + 1):
                t = self.placements.get((r, c))
                cells.append(f"{(t.tag or '.') if t else ' ':>4}")
            lines.append("".join(cells))
        return "\n".join(lines)


def check_grid(g: AssemblyGrid) -> list[tuple[Pos, Pos]]:
    """Full rescan: every adjacent pair whose facing glues differ."""
    bad = []
    for (r, c), t in g.placements.items():
        east = g.placements.get((r, c + 1))
        if east is not None and t.e != east.w:
            bad.append(((r, c), (r, c + 1)))
        north = g.placements.get((r + 1, c))
        if north is not None and t.n != north.s:
            bad.append(((r, c), (r + 1, c)))
    return bad


def matching_bonds(g: AssemblyGrid, pos: Pos, t: WangTile) -> int | None:
    """Number of occupied neighbours, or ``None`` if any of them mismatches."""
    bonds = 0
    for side, _, other, facing in g.neighbours(pos):
        if t.glue(side) != other.glue(facing):
            return None
        bonds += 1
    return bonds


def attach(g: AssemblyGrid, pos: Pos, t: WangTile) -> AssemblyGrid:
    if pos in g.placements:
        raise TileError(f"position {pos} is occupied")
    for side, _, other, facing in g.neighbours(pos):
        if t.glue(side) != other.glue(facing):
            raise GlueMismatch(pos, side, t.glue(side), other.glue(facing))
    placements = dict(g.placements)
    placements[pos] = t
    return AssemblyGrid(placements)


# -- the XOR tile set ---------------------------------------------------------

XOR_PALETTE = ("x0", "x1", "y0", "y1", "b")


def _xor_tiles() -> dict[str, WangTile]:
    tiles = {
        "root": WangTile(n="x0", e="b", s="b", w="y0", tag="root"),
        "X0": WangTile(n="x0", e="b", s="b", w="b", tag="X0"),
        "X1": WangTile(n="x1", e="b", s="b", w="b", tag="X1"),
    }
    for x in (0, 1):
        for y_prev in (0, 1):
            y = x ^ y_prev
            tiles[f"C{x}{y_prev}"] = WangTile(n=f"y{y}", e=f"y{y}", s=f"x{x}", w=f"y{y_prev}", tag=f"Y{y}")
    return tiles


XOR_TILES = _xor_tiles()
XOR_TILESET = TileSet(XOR_PALETTE, tuple(XOR_TILES.values()))


def _check_bits(bits: Iterable[int]) -> list[int]:
    out = [int(b) for b in bits]
    if any(b not in (0, 1) for b in out):
        raise ValueError("bits must be 0 or 1")
    return out


def xor_seed(x: list[int], y0: int) -> AssemblyGrid:
    """Root, input row and the initial Y tile: the starting assembly for XOR growth."""
    x = _check_bits(x)
    (y0,) = _check_bits([y0])
    g = attach(AssemblyGrid(), (0, 0), XOR_TILES["root"])
    for i, b in enumerate(x, start=1):
        g = attach(g, (0, i), XOR_TILES[f"X{b}"])
    return attach(g, (1, 0), XOR_TILES[f"C0{y0}"])


def run_xor(x: list[int], y0: int) -> tuple[list[int], AssemblyGrid]:
    """Grow the output row left to right; ``y[i] = y[i-1] XOR x[i]``."""
    x = _check_bits(x)
    if not x:
        raise ValueError("x must be non-empty")
    g = xor_seed(x, y0)
    for i in range(1, len(x) + 1):
        below = g[(0, i)]
        left = g[(1, i - 1)]
        fits = [t for t in XOR_TILESET.tiles if t.s == below.n and t.w == left.e]
        # the tile set is deterministic: exactly one tile fits both glues
        assert len(fits) == 1, fits
        g = attach(g, (1, i), fits[0])
    return readout(g, "output"), g


def xor_truth_table() -> dict[tuple[int, int], int]:
    """``(y_prev, x) -> y`` computed by one step of tile assembly."""
    return {(y_prev, x): run_xor([x], y_prev)[0][0] for y_prev in (0, 1) for x in (0, 1)}


# -- generic assembly ---------------------------------------------------------


@dataclass(frozen=True)
class AssemblyResult:
    grid: AssemblyGrid
    attachments: int
    stuck: bool  # growth halted because nothing could attach


def candidates(ts: TileSet, g: AssemblyGrid, temperature: int = 1) -> list[tuple[Pos, WangTile]]:
    frontier = set()
    for (r, c) in g.placements:
        for dr, dc, _ in _NEIGHBOUR.values():
            q = (r + dr, c + dc)
            if q not in g.placements:
                frontier.add(q)
    out = []
    for pos in sorted(frontier):
        for t in ts.tiles:
            bonds = matching_bonds(g, pos, t)
            if bonds is not None and bonds >= max(temperature, 1):
                out.append((pos, t))
    return out


def assemble_generic(ts: TileSet, seed_row: list[WangTile] | AssemblyGrid, steps: int, seed: int,
                     temperature: int = 1) -> AssemblyResult:
    """Random-order growth from a seed.

    At each step every (position, tile) pair whose occupied neighbours all
    match, with at least ``temperature`` of them, is a candidate; one is
    picked uniformly with a seeded generator. A list seed is laid out as
    row 0 starting at column 0.

    With ``temperature=1`` a tile may commit using a single glue, so sets that
    need two inputs per tile (XOR among them) can choose wrongly and get
    stuck. Cooperative growth at ``temperature=2`` from :func:`xor_seed` is
    deterministic in outcome.
    """
    if isinstance(seed_row, AssemblyGrid):
        g = seed_row
        bad = check_grid(g)
        if bad:
            raise TileError(f"seed assembly has mismatched neighbours {bad[0]}")
    else:
        g = AssemblyGrid()
        for col, t in enumerate(seed_row):
            g = attach(g, (0, col), t)
    rng = np.random.default_rng(seed)
    done = 0
    while done < steps:
        options = candidates(ts, g, temperature)
        if not options:
            return AssemblyResult(g, done, stuck=True)
        pos, t = options[int(rng.integers(len(options)))]
        g = attach(g, pos, t)
        done += 1
    return AssemblyResult(g, done, stuck=not candidates(ts, g, temperature))


def readout(g: AssemblyGrid, role: str) -> list[int]:
    """Bits of the tiles with ``role`` (``"input"`` or ``"output"``) in column order.

    When input tiles exist, an output bit is read in each input column (the
    reporter pairing of X_i with Y_i), which leaves out the initial Y tile
    sitting on the root.
    """
    if role not in ("input", "output"):
        raise ValueError("role must be 'input' or 'output'")
    inputs = sorted((p for p, t in g.placements.items() if t.role == "input"), key=lambda p: (p[1], p[0]))
    if role == "input":
        if not inputs:
            raise ReadoutError("grid holds no input tiles")
        return [g[p].bit for p in inputs]
    outputs = [(p, t) for p, t in g.placements.items() if t.role == "output"]
    if not outputs:
        raise ReadoutError("grid holds no output tiles")
    if inputs:
        cols = {p[1] for p in inputs}
        outputs = [(p, t) for p, t in outputs if p[1] in cols]
    # lowest output tile per column
    per_col: dict[int, tuple[Pos, WangTile]] = {}
    for p, t in outputs:
        if p[1] not in per_col or p[0] < per_col[p[1]][0][0]:
            per_col[p[1]] = (p, t)
    return [per_col[c][1].bit for c in sorted(per_col)]
