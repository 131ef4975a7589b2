"""Dolev-Yao operators, two-step ping-pong protocols and their automata.

Words are stored in application order: the first operator applied to the
text comes first, which is also the order in which a path through the
automaton spells its labels.  The conventional notation writes words in
composition order (right to left); `composition` converts for display.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .sim import Tape, parse_tape

USERS = ("X", "Y", "Z")
TRUSTED = ("X", "Y")
SABOTEUR = "Z"

COMMON_OPS = ("EX", "EY", "EZ", "PX", "PY", "PZ", "MX", "MY", "MZ", "M")
OPERATORS = ("EX", "EY", "EZ", "DX", "DY", "DZ", "PX", "PY", "PZ",
             "MX", "MY", "MZ", "M")
OPERATOR_SET = frozenset(OPERATORS)

# loop order on the saboteur node, as in the published tapes
SABOTEUR_OPS = ("EX", "PX", "MX", "EY", "PY", "MY", "EZ", "PZ", "MZ", "M", "DZ")

ROLE_TOKENS = ("EA", "EB", "DA", "DB", "PA", "PB", "MA", "MB", "M")


def user_ops(user: str) -> frozenset:
    """Operators available to ``user``: the common set plus its own decryption."""
    return frozenset(COMMON_OPS) | {"D" + user}


class ProtocolError(ValueError):
    pass


class UnknownOperator(ProtocolError):
    pass


class MalformedEdge(ProtocolError):
    pass


class RoleClash(ProtocolError):
    pass


class TooManyNodes(ProtocolError):
    pass


# --------------------------------------------------------------------------
# cancellation

@dataclass(frozen=True)
class CancelTable:
    """Ordered pairs (earlier, later) such that applying later after earlier is ε."""
    pairs: tuple

    def __post_init__(self):
        for pair in self.pairs:
            if len(pair) != 2:
                raise ProtocolError(f"not a pair: {pair!r}")
        object.__setattr__(self, "_index", frozenset(self.pairs))

    def cancels(self, earlier: str, later: str) -> bool:
        return (earlier, later) in self._index

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def symbols(self) -> frozenset:
        return frozenset(s for pair in self.pairs for s in pair)


def _default_pairs():
    pairs = []
    for u in USERS:
        pairs += [("E" + u, "D" + u), ("D" + u, "E" + u)]
    for u in USERS:
        pairs += [("P" + u, "M" + u), ("P" + u, "M")]
    return tuple(pairs)


DEFAULT_TABLE = CancelTable(_default_pairs())
EMPTY_TABLE = CancelTable(())


def parse_identities(text: str) -> CancelTable:
    """One identity per line in composition order: ``DX EX`` means DX∘EX = ε."""
    pairs = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.replace("=", " ").split()
        if toks[-1:] in (["ε"], ["eps"]):
            toks = toks[:-1]
        if len(toks) != 2:
            raise ProtocolError(f"line {n}: expected two operators, got {line!r}")
        later, earlier = toks
        for t in toks:
            if not re.fullmatch(r"[A-Za-z0-9_]+", t):
                raise UnknownOperator(f"line {n}: bad operator token {t!r}")
        pairs.append((earlier, later))
    return CancelTable(tuple(pairs))


def format_identities(ct: CancelTable) -> str:
    return "".join(f"{later} {earlier}\n" for earlier, later in ct)


def reduce_word(word, ct: CancelTable = DEFAULT_TABLE) -> list:
    """Cancel adjacent pairs innermost-first; the word is reducible iff the result is empty."""
    stack = []
    for op in word:
        if stack and ct.cancels(stack[-1], op):
            stack.pop()
        else:
            stack.append(op)
    return stack


def is_reducible(word, ct: CancelTable = DEFAULT_TABLE) -> bool:
    return not reduce_word(word, ct)


def reduction_steps(word, ct: CancelTable = DEFAULT_TABLE) -> list:
    """The cancellations performed by `reduce_word`.

    Each step is ``(remaining, i)``: the word (application order) just
    before the step, and the index of the earlier operator of the canceled
    pair, which sits at ``i`` and ``i + 1``.
    """
    remaining = list(word)
    stack = []   # indices into `remaining` of uncanceled operators
    steps = []
    i = 0
    while i < len(remaining):
        op = remaining[i]
        if stack and ct.cancels(remaining[stack[-1]], op):
            j = stack.pop()
            # everything between j and i was already removed, so they are adjacent
            steps.append((tuple(remaining), j))
            del remaining[j:i + 1]
            i = j
        else:
            stack.append(i)
            i += 1
    return steps


def composition(word) -> str:
    """Composition-order rendering, e.g. ``[EX, DX]`` -> ``"DX EX"``."""
    return " ".join(reversed(list(word))) if word else "ε"


def boxed(word, i: int) -> str:
    """Composition-order rendering with the pair at ``i, i+1`` bracketed."""
    w = list(word)
    left = w[:i]
    right = w[i + 2:]
    parts = [composition(right)] if right else []
    parts.append(f"[{w[i + 1]} {w[i]}]")
    if left:
        parts.append(composition(left))
    return " ".join(parts)


# --------------------------------------------------------------------------
# protocols

@dataclass(frozen=True)
class Protocol:
    alpha1: tuple   # role tokens, application order
    alpha2: tuple

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            w = getattr(self, name)
            if not w:
                raise ProtocolError(f"{name} is empty")
            for t in w:
                if t not in ROLE_TOKENS:
                    raise UnknownOperator(f"{name}: unknown role operator {t!r}")

    @classmethod
    def from_composition(cls, alpha1: str, alpha2: str) -> "Protocol":
        """Build from words as usually written, e.g. ``"EA DB"``."""
        return cls(tuple(reversed(alpha1.split())), tuple(reversed(alpha2.split())))


PROTOCOL_1 = Protocol.from_composition("EB", "EA DB")
PROTOCOL_2 = Protocol.from_composition("EB PA", "EA MA DB")
PROTOCOL_3 = Protocol.from_composition("EB PA EB", "EA DB MA DB")


def parse_protocol(text: str) -> Protocol:
    words = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower().replace("α", "alpha")
        if not sep or key not in ("alpha1", "alpha2"):
            raise ProtocolError(f"line {n}: expected 'alpha1: ...' or 'alpha2: ...'")
        if key in words:
            raise ProtocolError(f"line {n}: {key} given twice")
        words[key] = rest
    for key in ("alpha1", "alpha2"):
        if key not in words:
            raise ProtocolError(f"missing {key}")
    return Protocol.from_composition(words["alpha1"], words["alpha2"])


def format_protocol(p: Protocol) -> str:
    return (f"alpha1: {composition(p.alpha1)}\n"
            f"alpha2: {composition(p.alpha2)}\n")


def instantiate(word, a: str, b: str) -> list:
    """Substitute users for the roles A and B; ``M`` is role-free."""
    if a == b:
        raise RoleClash(f"initiator and recipient are both {a}")
    out = []
    for t in word:
        if t == "M":
            out.append("M")
        elif t in ROLE_TOKENS:
            out.append(t[0] + (a if t[1] == "A" else b))
        else:
            raise UnknownOperator(f"unknown role operator {t!r}")
    return out


# --------------------------------------------------------------------------
# automata

@dataclass(frozen=True)
class Fsa:
    edges: tuple            # (u, op, v), node ids are strings
    source: str = "0"
    target: str = "1"

    @property
    def nodes(self) -> list:
        seen = {self.source: None, self.target: None}
        for u, _, v in self.edges:
            seen.setdefault(u)
            seen.setdefault(v)
        return list(seen)

    def __len__(self) -> int:
        return len(self.edges)


def build_fsa(p: Protocol) -> Fsa:
    """Automaton of all operator words applied to a text sent by X to Y.

    A path 0 -> 1 spells alpha1(X, Y); node 1 carries one loop per
    saboteur operator; for each trusted responder B a trie rooted at node 1
    spells alpha2(A, B) for every other user A, each word returning to 1.
    """
    counter = itertools.count(2)
    edges = []

    def add(e):
        if e not in edges:
            edges.append(e)

    word = instantiate(p.alpha1, "X", "Y")
    u = "0"
    for k, op in enumerate(word):
        v = "1" if k == len(word) - 1 else str(next(counter))
        add((u, op, v))
        u = v
    for op in SABOTEUR_OPS:
        add(("1", op, "1"))
    for b in TRUSTED:
        trie = {(): "1"}
        for a in USERS:
            if a == b:
                continue
            w = tuple(instantiate(p.alpha2, a, b))
            for k, op in enumerate(w):
                src = trie[w[:k]]
                if k == len(w) - 1:
                    dst = "1"
                else:
                    if w[:k + 1] not in trie:
                        trie[w[:k + 1]] = str(next(counter))
                    dst = trie[w[:k + 1]]
                add((src, op, dst))
    return Fsa(tuple(edges))


def _check_node(u: str, where: str):
    if u in OPERATOR_SET:
        raise TooManyNodes(f"{where}: node id {u!r} collides with an operator")
    if not re.fullmatch(r"[A-Za-z0-9_]+", u):
        raise MalformedEdge(f"{where}: bad node id {u!r}")


def check_fsa(f: Fsa) -> None:
    for u, op, v in f.edges:
        if op not in OPERATOR_SET:
            raise UnknownOperator(f"unknown operator {op!r}")
        _check_node(u, "edge")
        _check_node(v, "edge")
    _check_node(f.source, "source")
    _check_node(f.target, "target")


def parse_fsa(text: str) -> Fsa:
    """Edge list: optional ``source:``/``target:`` headers, then ``u OP v`` lines."""
    source, target = "0", "1"
    edges = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() in ("source", "target"):
            node = rest.strip()
            if not node or len(node.split()) != 1:
                raise MalformedEdge(f"line {n}: bad {key.strip()} header")
            _check_node(node, f"line {n}")
            if key.strip() == "source":
                source = node
            else:
                target = node
            continue
        toks = line.split()
        if len(toks) != 3:
            raise MalformedEdge(f"line {n}: expected 'u OP v', got {line!r}")
        u, op, v = toks
        if op not in OPERATOR_SET:
            raise UnknownOperator(f"line {n}: unknown operator {op!r}")
        _check_node(u, f"line {n}")
        _check_node(v, f"line {n}")
        edges.append((u, op, v))
    return Fsa(tuple(edges), source, target)


def format_fsa(f: Fsa) -> str:
    lines = [f"source: {f.source}", f"target: {f.target}"]
    lines += [f"{u} {op} {v}" for u, op, v in f.edges]
    return "\n".join(lines) + "\n"


def _normalized(f: Fsa) -> Fsa:
    """Rename nodes so the source is ``0`` and the target ``1``."""
    if f.source == "0" and f.target == "1":
        return f
    if f.source == f.target:
        raise ProtocolError("source and target coincide; the tape cannot express that")
    taken = set(f.nodes)
    fresh = (str(k) for k in itertools.count(2) if str(k) not in taken)
    rename = {f.source: "0", f.target: "1"}
    for u in f.nodes:
        if u not in rename:
            rename[u] = next(fresh) if u in ("0", "1") else u
    return Fsa(tuple((rename[u], op, rename[v]) for u, op, v in f.edges))


def encode_tape(f: Fsa) -> Tape:
    """``> u1 o1 v1 ... un on vn <`` with the source as 0 and the target as 1."""
    check_fsa(f)
    f = _normalized(f)
    return Tape.of(s for e in f.edges for s in e)


def decode_tape(t: Tape) -> Fsa:
    """Inverse of `encode_tape`: edges are consecutive symbol triples."""
    inner = t.inner
    if len(inner) % 3:
        raise MalformedEdge(f"tape holds {len(inner)} symbols, not a multiple of 3")
    edges = tuple(tuple(inner[k:k + 3]) for k in range(0, len(inner), 3))
    f = Fsa(edges)
    check_fsa(f)
    return f


def read_tape_fsa(text: str) -> Fsa:
    return decode_tape(parse_tape(text))


def isomorphic(f: Fsa, g: Fsa) -> bool:
    """Label-preserving isomorphism mapping source to source and target to target."""
    if sorted(op for _, op, _ in f.edges) != sorted(op for _, op, _ in g.edges):
        return False
    fn, gn = f.nodes, g.nodes
    if len(fn) != len(gn):
        return False

    def signature(fsa, u):
        out = sorted(op for a, op, _ in fsa.edges if a == u)
        inn = sorted(op for _, op, b in fsa.edges if b == u)
        loops = sorted(op for a, op, b in fsa.edges if a == u == b)
        return (tuple(out), tuple(inn), tuple(loops))

    gsig = {v: signature(g, v) for v in gn}
    fsig = {u: signature(f, u) for u in fn}
    order = sorted(fn, key=lambda u: (u not in (f.source, f.target)))
    gedges = {}
    for a, op, b in g.edges:
        gedges[(a, op, b)] = gedges.get((a, op, b), 0) + 1
    fedges = {}
    for a, op, b in f.edges:
        fedges[(a, op, b)] = fedges.get((a, op, b), 0) + 1

    def consistent(m):
        for (a, op, b), k in fedges.items():
            if a in m and b in m and gedges.get((m[a], op, m[b]), 0) != k:
                return False
        return True

    def extend(i, m, used):
        if i == len(order):
            return True
        u = order[i]
        if u == f.source:
            cands = [g.source]
        elif u == f.target:
            cands = [g.target]
        else:
            cands = [v for v in gn if v not in used and v not in (g.source, g.target)]
        for v in cands:
            if v in used or gsig[v] != fsig[u]:
                continue
            m[u] = v
            used.add(v)
            if consistent(m) and extend(i + 1, m, used):
                return True
            del m[u]
            used.discard(v)
        return False

    return extend(0, {}, set())

