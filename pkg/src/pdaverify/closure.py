"""Cancellation closure over an operator-labeled automaton.

``(u, v)`` is in the relation when some path from u to v spells a word that
cancels to ε.  The relation is the least one that is reflexive, transitive
and closed under surrounding: if ``u -a-> u'``, ``v' -b-> v``, ``(u', v')``
is related and ``(a, b)`` cancels, then ``(u, v)`` is related.  This is the
grammar of reducible words read as graph rules, so the closure decides
whether the automaton's language meets that grammar.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

from .protocol import DEFAULT_TABLE, CancelTable, Fsa, reduce_word


@dataclass(frozen=True)
class CancelRelation:
    pairs: frozenset
    nodes: tuple

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def successors(self, u) -> set:
        return {b for a, b in self.pairs if a == u}


def dyck_closure(f: Fsa, ct: CancelTable = DEFAULT_TABLE) -> CancelRelation:
    nodes = tuple(f.nodes)
    into = defaultdict(list)                  # v -> [(u, op)] for u -op-> v
    out_by_op = defaultdict(lambda: defaultdict(list))   # u -> op -> [v]
    for u, op, v in f.edges:
        into[v].append((u, op))
        out_by_op[u][op].append(v)
    later_of = defaultdict(list)
    for earlier, later in ct:
        later_of[earlier].append(later)

    rel = set()
    fwd = defaultdict(set)   # u -> {v : (u, v) in rel}
    back = defaultdict(set)  # v -> {u : (u, v) in rel}
    work = deque()

    def add(u, v):
        if (u, v) not in rel:
            rel.add((u, v))
            fwd[u].add(v)
            back[v].add(u)
            work.append((u, v))

    for v in nodes:
        add(v, v)
    while work:
        x, y = work.popleft()
        for w in list(back[x]):
            add(w, y)
        for z in list(fwd[y]):
            add(x, z)
        for u, a in into[x]:
            for b in later_of[a]:
                for v in out_by_op[y].get(b, ()):
                    add(u, v)
    return CancelRelation(frozenset(rel), nodes)


def is_insecure(f: Fsa, ct: CancelTable = DEFAULT_TABLE) -> bool:
    return (f.source, f.target) in dyck_closure(f, ct)


def bounded_path_search(f: Fsa, ct: CancelTable = DEFAULT_TABLE,
                        max_len: int = 12) -> list | None:
    """Shortest source->target path of at most ``max_len`` edges whose word cancels.

    Breadth-first over (node, uncanceled operators), so the first hit is a
    shortest witness.  Returns the edge list, or None if no such path fits
    the bound.  A state whose pending operators outnumber the remaining
    budget is dropped, as is one holding an operator nothing can cancel.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    out = defaultdict(list)
    for e in f.edges:
        out[e[0]].append(e)
    cancellable = {earlier for earlier, _ in ct}
    start = (f.source, ())
    parent = {start: None}
    frontier = [start]
    for depth in range(max_len):
        budget = max_len - depth - 1
        nxt = []
        for state in frontier:
            node, pending = state
            for e in out[node]:
                _, op, v = e
                if pending and ct.cancels(pending[-1], op):
                    p2 = pending[:-1]
                else:
                    if op not in cancellable:
                        continue
                    p2 = pending + (op,)
                if len(p2) > budget:
                    continue
                s2 = (v, p2)
                if s2 in parent:
                    continue
                parent[s2] = (state, e)
                if v == f.target and not p2:
                    path = []
                    while parent[s2] is not None:
                        s2, edge = parent[s2]
                        path.append(edge)
                    path.reverse()
                    assert not reduce_word([op for _, op, _ in path], ct)
                    return path
                nxt.append(s2)
        frontier = nxt
        if not frontier:
            break
    return None
