"""Hamiltonian path search by simulated ligation and selection.

A directed graph is encoded as a library of node sequences. Ligation is
modelled as walk assembly over the graph (every product strand is the
concatenation of its node sequences), and the classical selection cascade
is applied either directly on walks or on rendered strands through the
pool filters in :mod:`strandbench.strands`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping

import numpy as np

from .strands import (
    DesignConstraints,
    OligoPool,
    affinity_select,
    design_library,
    filter_by_length,
    pcr_select,
    reverse_complement,
)

Path = tuple[int, ...]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DiGraph:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = tuple(int(v) for v in self.nodes)
        if not nodes:
            raise GraphError("graph needs at least one node")
        if len(set(nodes)) != len(nodes):
            raise GraphError("duplicate node ids")
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if u not in nodes or v not in nodes:
                raise GraphError(f"edge ({u}, {v}) references an unknown node")
            edges.append((u, v))
        if len(set(edges)) != len(edges):
            raise GraphError("duplicate edges")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> "DiGraph":
        edges = list(edges)
        if len(set(map(tuple, edges))) != len(edges):
            raise GraphError("duplicate edges")
        return cls(tuple(nodes), frozenset(map(tuple, edges)))

    def successors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self.edges if a == u)

    def to_json(self) -> str:
        return json.dumps({"nodes": list(self.nodes), "edges": sorted([list(e) for e in self.edges])})

    @classmethod
    def from_json(cls, text: str) -> "DiGraph":
        data = json.loads(text)
        if not isinstance(data, dict) or "nodes" not in data or "edges" not in data:
            raise GraphError('graph JSON needs "nodes" and "edges"')
        edges = [tuple(e) for e in data["edges"]]
        if any(len(e) != 2 for e in edges):
            raise GraphError("every edge must be a [u, v] pair")
        return cls.from_edges(data["nodes"], edges)


def random_digraph(n: int, p: float, seed: int) -> DiGraph:
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return DiGraph.from_edges(range(n), edges)


# -- encoding ---------------------------------------------------------------


@dataclass(frozen=True)
class Encoding:
    node_seq: dict[int, str]
    splint_seq: dict[int, str]
    edge_seq: dict[tuple[int, int], str]

    @property
    def node_length(self) -> int:
        return len(next(iter(self.node_seq.values())))


def encode_graph(g: DiGraph, c: DesignConstraints | None = None, seed: int = 0) -> Encoding:
    """Assign node sequences via :func:`design_library` and derive edge/splint strands.

    An edge strand is the second half of its source node followed by the first
    half of its target node; the splint of a node is its reverse complement.
    """
    if c is None:
        c = DesignConstraints(length=20, gc_fraction=(0.4, 0.6), min_hamming=6, max_homopolymer=4)
    if c.length < 2 or c.length % 2:
        raise ValueError("node sequence length must be even and >= 2")
    seqs = design_library(c, len(g.nodes), seed)
    node_seq = dict(zip(g.nodes, seqs))
    half = c.length // 2
    edge_seq = {(u, v): node_seq[u][half:] + node_seq[v][:half] for (u, v) in sorted(g.edges)}
    splint = {v: reverse_complement(s) for v, s in node_seq.items()}
    return Encoding(node_seq, splint, edge_seq)


# -- assembly ---------------------------------------------------------------


def is_walk(path: Path, g: DiGraph) -> bool:
    return len(path) >= 1 and all(v in g.nodes for v in path) and all(
        (a, b) in g.edges for a, b in zip(path, path[1:]))


class PathPool(Counter):
    """Multiset of walks (tuples of node ids) with counts."""

    def paths(self) -> list[Path]:
        return sorted(self)


@dataclass(frozen=True)
class Exhaustive:
    max_nodes: int


@dataclass(frozen=True)
class Stochastic:
    samples: int
    seed: int = 0
    stop_prob: float = 0.1


def assemble(g: DiGraph, mode: Exhaustive | Stochastic) -> PathPool:
    """Simulate ligation products.

    ``Exhaustive(k)`` yields every walk of 1..k nodes once. ``Stochastic``
    grows each sample from a uniformly chosen node by uniform out-edge choice
    until a dead end or a geometric stop.
    """
    if isinstance(mode, Exhaustive):
        if mode.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1")
        return _all_walks(g, mode.max_nodes)
    if isinstance(mode, Stochastic):
        if mode.samples < 1:
            raise ValueError("samples must be >= 1")
        return _sample_walks(g, mode)
    raise TypeError(f"unknown assembly mode {mode!r}")


def _all_walks(g: DiGraph, max_nodes: int) -> PathPool:
    succ = {u: g.successors(u) for u in g.nodes}
    pool = PathPool()
    stack: list[Path] = [(v,) for v in reversed(g.nodes)]
    while stack:
        walk = stack.pop()
        pool[walk] = 1
        if len(walk) < max_nodes:
            stack.extend(walk + (v,) for v in reversed(succ[walk[-1]]))
    return pool


def _sample_walks(g: DiGraph, mode: Stochastic) -> PathPool:
    rng = np.random.default_rng(mode.seed)
    succ = {u: g.successors(u) for u in g.nodes}
    pool = PathPool()
    for _ in range(mode.samples):
        walk = [g.nodes[int(rng.integers(len(g.nodes)))]]
        while True:
            out = succ[walk[-1]]
            if not out or rng.random() < mode.stop_prob:
                break
            walk.append(out[int(rng.integers(len(out)))])
        pool[tuple(walk)] += 1
    return pool


def merge_pools(pools: Iterable[PathPool]) -> PathPool:
    """Multiset union; independent seeded streams combine this way."""
    out = PathPool()
    for p in pools:
        out.update(p)
    return out


# -- selection --------------------------------------------------------------


def is_hamiltonian(path: Path, g: DiGraph, start: int, end: int) -> bool:
    return (
        len(path) == len(g.nodes)
        and set(path) == set(g.nodes)
        and path[0] == start
        and path[-1] == end
        and is_walk(path, g)
    )


def select_hamiltonian(p: PathPool, g: DiGraph, start: int, end: int) -> list[Path]:
    if start not in g.nodes or end not in g.nodes:
        raise GraphError("start and end must be nodes of the graph")
    n = len(g.nodes)
    return sorted(
        path for path in p
        if path[0] == start and path[-1] == end and len(path) == n and len(set(path)) == n
    )


def brute_force_hamiltonian(g: DiGraph, start: int, end: int) -> list[Path]:
    """Reference answer: try every ordering of the nodes."""
    return sorted(
        perm for perm in permutations(g.nodes)
        if perm[0] == start and perm[-1] == end and all((a, b) in g.edges for a, b in zip(perm, perm[1:]))
    )


def to_strands(p: PathPool, e: Encoding) -> OligoPool:
    out = []
    for path, count in sorted(p.items()):
        missing = [v for v in path if v not in e.node_seq]
        if missing:
            raise KeyError(f"path {path} uses node {missing[0]} with no sequence")
        out.append(("".join(e.node_seq[v] for v in path), count))
    return OligoPool(out)


def decode_strand(seq: str, e: Encoding) -> Path:
    L = e.node_length
    lookup = {s: v for v, s in e.node_seq.items()}
    if len(seq) % L:
        raise ValueError("strand length is not a multiple of the node length")
    return tuple(lookup[seq[i:i + L]] for i in range(0, len(seq), L))


def molecular_selection(strands: OligoPool, g: DiGraph, e: Encoding, start: int, end: int,
                        gain: int = 1) -> OligoPool:
    """PCR on the end nodes, gel cut at full length, then one affinity pass per node."""
    L = e.node_length
    n = len(g.nodes)
    pool = pcr_select(strands, e.node_seq[start], e.node_seq[end], gain)
    pool = filter_by_length(pool, n * L, n * L)
    for v in g.nodes:
        pool = affinity_select(pool, e.node_seq[v])
    return pool

