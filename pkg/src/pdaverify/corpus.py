"""Shipped fixtures and generated graph families for tests and experiments."""

from __future__ import annotations

import random
from importlib import resources

from .protocol import (OPERATORS, PROTOCOL_1, PROTOCOL_2, PROTOCOL_3,
                       SABOTEUR_OPS, Fsa, build_fsa, parse_fsa)
from .sim import Tape, parse_tape

PROTOCOLS = {1: PROTOCOL_1, 2: PROTOCOL_2, 3: PROTOCOL_3}


def data_path(name: str):
    return resources.files("pdaverify") / "data" / name


def read_data(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def fixture_tape(k: int) -> Tape:
    return parse_tape(read_data(f"protocol{k}.tape"))


def fixture_fsa(k: int) -> Fsa:
    return parse_fsa(read_data(f"protocol{k}.fsa"))


def random_fsa(rng: random.Random, max_nodes: int = 8, max_edges: int = 24) -> Fsa:
    """Nodes 0..k-1 with 2 <= k <= max_nodes, labels uniform over all operators."""
    k = rng.randint(2, max_nodes)
    m = rng.randint(1, max_edges)
    edges = tuple((str(rng.randrange(k)), rng.choice(OPERATORS), str(rng.randrange(k)))
                  for _ in range(m))
    return Fsa(edges)


def random_digraph(rng: random.Random, max_nodes: int = 8,
                   max_edges: int = 20) -> list[tuple[str, str]]:
    k = rng.randint(2, max_nodes)
    m = rng.randint(0, max_edges)
    return [(str(rng.randrange(k)), str(rng.randrange(k))) for _ in range(m)]


def digraph_tape(edges) -> Tape:
    return Tape.of(s for e in edges for s in e)


def scaled_protocol1(m: int) -> Fsa:
    """Protocol 1 with the saboteur loops copied onto a chain of m extra nodes.

    The chain is 1 -EZ-> c1 -EZ-> ... -EZ-> cm -DZ-> 1 and every ci carries
    the eleven saboteur loops; the tape grows by 36 symbols per chain node.
    """
    base = build_fsa(PROTOCOL_1)
    if m == 0:
        return base
    taken = {int(u) for u in base.nodes}
    chain = [str(max(taken) + 1 + i) for i in range(m)]
    edges = list(base.edges)
    prev = "1"
    for c in chain:
        edges.append((prev, "EZ", c))
        edges.extend((c, op, c) for op in SABOTEUR_OPS)
        prev = c
    edges.append((prev, "DZ", "1"))
    return Fsa(tuple(edges))


def scaled_sizes(doublings: int = 4, base: int = 60) -> list[int]:
    """Chain lengths giving tapes of about base * 2**j symbols."""
    return [max(0, round((base * 2 ** j - 59) / 36)) for j in range(doublings)]
