"""Memoizing simulation of nondeterministic pushdown programs.

`simulate` decides acceptance by tabulation instead of search.  Every push
opens a *context*, identified by the surface configuration right after the
push (program point, head positions, pushed symbol).  Within a context the
stack below the pushed symbol is invisible, so the set of local states
(program point, heads) reachable in it is finite.  When a context pops its
symbol, the resulting local state is recorded as a pop summary of that
context and delivered to every caller that pushed into it, including
callers that arrive later.  A FIFO worklist closes all of this to a
fixpoint, so programs that loop or push forever still terminate.

`run_deterministic` is the plain small-step interpreter, driven by an
explicit choice script.  It walks the AST directly and shares no code with
the tabulation; it is what witnesses are replayed on.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .lang import (BOTTOM, LEFT_END, RESERVED, RIGHT_END, Accept, And,
                   Bottom, Choice, Const, Eq, Goto, Hd, If, Left, LeftEnd, Or,
                   Pop, Program, Push, Reject, Right, RightEnd, Skip, Top,
                   expand_macros)


class TapeError(ValueError):
    pass


class MissingEndmarker(TapeError):
    pass


@dataclass(frozen=True)
class Tape:
    cells: tuple

    def __post_init__(self):
        c = self.cells
        if len(c) < 2 or c[0] != LEFT_END or c[-1] != RIGHT_END:
            raise MissingEndmarker(f"tape must start with {LEFT_END!r} and end "
                                   f"with {RIGHT_END!r}")
        for s in c[1:-1]:
            if s in RESERVED:
                raise TapeError(f"reserved symbol {s!r} inside the tape")

    @classmethod
    def of(cls, symbols) -> "Tape":
        """Wrap inner symbols with endmarkers."""
        return cls((LEFT_END, *symbols, RIGHT_END))

    def __len__(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        return " ".join(self.cells)

    @property
    def inner(self) -> tuple:
        return self.cells[1:-1]


def parse_tape(text: str) -> Tape:
    cells = tuple(text.split())
    if not cells or cells[0] != LEFT_END or cells[-1] != RIGHT_END:
        raise MissingEndmarker(f"tape must start with {LEFT_END!r} and end "
                               f"with {RIGHT_END!r}")
    return Tape(cells)


# --------------------------------------------------------------------------
# compilation to a flat instruction graph

POP, PUSH, LEFT, RIGHT, CHOICE, IF, JUMP, SKIP, ACCEPT, REJECT, HALT = range(11)
OPNAMES = ("pop", "push", "left", "right", "choice", "if", "goto", "skip",
           "accept", "reject", "halt")


@dataclass(frozen=True)
class Compiled:
    """Instructions are tuples; operands are AST nodes or program points.

    ``(POP, next)``, ``(PUSH, expr, next)``, ``(LEFT, head, next)``,
    ``(RIGHT, head, next)``, ``(CHOICE, first, second)``,
    ``(IF, cond, then, else)``, ``(JUMP, target)``, ``(SKIP, next)``,
    ``(ACCEPT,)``, ``(REJECT,)``, ``(HALT,)``.  Heads are 0-based here.
    """
    code: tuple
    entry: int
    head_count: int
    program: Program

    def __len__(self) -> int:
        return len(self.code)


def compile_program(p: Program) -> Compiled:
    p = expand_macros(p)
    code: list[list] = [[HALT]]

    def emit(*ins) -> int:
        code.append(list(ins))
        return len(code) - 1

    # compile back to front so every command knows its continuation;
    # label continuations stay symbolic until all block entries are known
    def seq(cmds, cont):
        for c in reversed(cmds):
            cont = cmd(c, cont)
        return cont

    def cmd(c, cont):
        if isinstance(c, Pop):
            return emit(POP, cont)
        if isinstance(c, Push):
            return emit(PUSH, c.expr, cont)
        if isinstance(c, Left):
            return emit(LEFT, c.head - 1, cont)
        if isinstance(c, Right):
            return emit(RIGHT, c.head - 1, cont)
        if isinstance(c, Choice):
            return emit(CHOICE, seq(c.first, cont), seq(c.second, cont))
        if isinstance(c, If):
            return emit(IF, c.cond, seq(c.then, cont), seq(c.orelse, cont))
        if isinstance(c, Goto):
            return emit(JUMP, c.label)
        if isinstance(c, Skip):
            return emit(SKIP, cont)
        if isinstance(c, Accept):
            return emit(ACCEPT)
        if isinstance(c, Reject):
            return emit(REJECT)
        raise TypeError(f"cannot compile {c!r}")

    entries = {}
    for i, b in enumerate(p.blocks):
        nxt = p.blocks[i + 1].label if i + 1 < len(p.blocks) else 0
        entries[b.label] = seq(b.body, nxt)

    def resolve(x):
        while isinstance(x, str):
            x = entries[x]
        return x

    final = []
    for ins in code:
        op = ins[0]
        if op in (POP, SKIP):
            ins[1] = resolve(ins[1])
        elif op in (PUSH, LEFT, RIGHT):
            ins[2] = resolve(ins[2])
        elif op == CHOICE:
            ins[1], ins[2] = resolve(ins[1]), resolve(ins[2])
        elif op == IF:
            ins[2], ins[3] = resolve(ins[2]), resolve(ins[3])
        elif op == JUMP:
            ins[1] = resolve(ins[1])
        final.append(tuple(ins))
    return Compiled(tuple(final), resolve(p.blocks[0].label), p.head_count, p)


def _sym_fn(e, cells):
    if isinstance(e, Const):
        v = e.symbol
        return lambda hs, top: v
    if isinstance(e, Top):
        return lambda hs, top: top
    h = e.head - 1
    return lambda hs, top: cells[hs[h]]


def _cond_fn(e, cells):
    if isinstance(e, Bottom):
        return lambda hs, top: top == BOTTOM
    if isinstance(e, LeftEnd):
        h = e.head - 1
        return lambda hs, top: hs[h] == 0
    if isinstance(e, RightEnd):
        h, last = e.head - 1, len(cells) - 1
        return lambda hs, top: hs[h] == last
    if isinstance(e, Eq):
        # the common shapes get a direct comparison
        lhs, rhs = e.lhs, e.rhs
        if isinstance(rhs, Const) and not isinstance(lhs, Const):
            lhs, rhs = rhs, lhs
        if isinstance(lhs, Const) and isinstance(rhs, Hd):
            v, h = lhs.symbol, rhs.head - 1
            return lambda hs, top: cells[hs[h]] == v
        if isinstance(lhs, Const) and isinstance(rhs, Top):
            v = lhs.symbol
            return lambda hs, top: top == v
        f, g = _sym_fn(e.lhs, cells), _sym_fn(e.rhs, cells)
        return lambda hs, top: f(hs, top) == g(hs, top)
    f, g = _cond_fn(e.lhs, cells), _cond_fn(e.rhs, cells)
    if isinstance(e, And):
        return lambda hs, top: f(hs, top) and g(hs, top)
    if isinstance(e, Or):
        return lambda hs, top: f(hs, top) or g(hs, top)
    raise TypeError(f"not a condition: {e!r}")


def _bind(compiled: Compiled, cells) -> list:
    """Instructions with conditions and push operands turned into closures."""
    out = []
    for ins in compiled.code:
        if ins[0] == IF:
            ins = (IF, _cond_fn(ins[1], cells), ins[2], ins[3])
        elif ins[0] == PUSH:
            ins = (PUSH, _sym_fn(ins[1], cells), ins[2])
        out.append(ins)
    return out


# --------------------------------------------------------------------------
# tabulating simulator

@dataclass(frozen=True)
class SimStats:
    configs: int      # distinct surface configurations (pp, heads, top)
    steps: int        # worklist items processed
    summaries: int    # pop summaries recorded, one per (context, exit)
    contexts: int     # push-created contexts, root included


@dataclass(frozen=True)
class Step:
    pp: int
    heads: tuple
    action: str


@dataclass(frozen=True)
class Witness:
    trace: tuple      # Steps from the initial configuration to accept
    choices: tuple    # branch taken at each executed choice, 0 or 1


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    stats: SimStats
    witness: Witness | None = None

    def to_json(self) -> str:
        return json.dumps(stats_dict(self), sort_keys=True)


def stats_dict(v: Verdict) -> dict:
    return {**{k: getattr(v.stats, k) for k in ("configs", "steps", "summaries")},
            "accepted": v.accepted}


def collect_stats(v: Verdict) -> SimStats:
    return v.stats


def simulate(p: Program | Compiled, tape: Tape, want_witness: bool = False,
             first_accept: bool = False) -> Verdict:
    """Decide whether some computation of ``p`` on ``tape`` accepts.

    The search is exhaustive unless ``first_accept`` is set, so statistics
    do not depend on where an accepting path happens to be found.
    """
    compiled = p if isinstance(p, Compiled) else compile_program(p)
    cells = tape.cells
    last = len(cells) - 1
    code = _bind(compiled, cells)
    track = want_witness

    # context data, indexed by context id; context 0 is the empty stack
    start_hs = (0,) * compiled.head_count
    ctx_ids = {(compiled.entry, start_hs, BOTTOM): 0}
    tops = [BOTTOM]
    callers: list[dict] = [{}]      # caller ctx -> (push pp, push heads)
    exits: list[dict] = [{}]        # (pp, heads) after pop -> pop item
    origin: list = [None]           # first (caller, push pp, push heads)

    reach = {(0, compiled.entry, start_hs)}
    why: dict = {(0, compiled.entry, start_hs): None}
    surface = {(compiled.entry, start_hs, BOTTOM)}
    work = deque(reach)
    steps = summaries = 0
    accept_item = None

    def add(c, pp, hs, reason):
        key = (c, pp, hs)
        if key not in reach:
            reach.add(key)
            if track:
                why[key] = reason
            surface.add((pp, hs, tops[c]))
            work.append(key)

    while work:
        item = work.popleft()
        c, pp, hs = item
        steps += 1
        ins = code[pp]
        op = ins[0]
        top = tops[c]
        if op == IF:
            add(c, ins[2] if ins[1](hs, top) else ins[3], hs, (pp, hs, None))
        elif op == RIGHT:
            h = ins[1]
            if hs[h] < last:
                add(c, ins[2], hs[:h] + (hs[h] + 1,) + hs[h + 1:], (pp, hs, None))
        elif op == LEFT:
            h = ins[1]
            if hs[h] > 0:
                add(c, ins[2], hs[:h] + (hs[h] - 1,) + hs[h + 1:], (pp, hs, None))
        elif op == JUMP or op == SKIP:
            add(c, ins[1], hs, (pp, hs, None))
        elif op == CHOICE:
            add(c, ins[1], hs, (pp, hs, 0))
            add(c, ins[2], hs, (pp, hs, 1))
        elif op == PUSH:
            v = ins[1](hs, top)
            if v in RESERVED:
                continue
            nxt = ins[2]
            key = (nxt, hs, v)
            c2 = ctx_ids.get(key)
            if c2 is None:
                c2 = len(tops)
                ctx_ids[key] = c2
                tops.append(v)
                callers.append({})
                exits.append({})
                origin.append((c, pp, hs))
                add(c2, nxt, hs, None)
            if c not in callers[c2]:
                callers[c2][c] = (pp, hs)
                for (epp, ehs), (ppop, hpop) in list(exits[c2].items()):
                    add(c, epp, ehs, ("ret", pp, hs, c2, ppop, hpop))
        elif op == POP:
            if c == 0:
                continue  # empty stack: this path dies
            ex = (ins[1], hs)
            if ex in exits[c]:
                continue
            exits[c][ex] = (pp, hs)
            summaries += 1
            for c0, (ppush, hpush) in list(callers[c].items()):
                add(c0, ins[1], hs, ("ret", ppush, hpush, c, pp, hs))
        elif op == ACCEPT:
            if accept_item is None:
                accept_item = item
                if first_accept:
                    break
        # REJECT and HALT end the path

    stats = SimStats(len(surface), steps, summaries, len(tops))
    witness = None
    if track and accept_item is not None:
        witness = _reconstruct(compiled, code, tops, why, origin, accept_item)
    return Verdict(accept_item is not None, stats, witness)


def _reconstruct(compiled, code, tops, why, origin, accept_item) -> Witness:
    """Rebuild one accepting computation from the first-discovery links.

    Every link points at an item discovered earlier, so the unfolding is
    finite.
    """
    def local(c, pp, hs) -> list:
        out = []
        cur = (pp, hs)
        while True:
            r = why[(c,) + cur]
            if r is None:
                break
            if r[0] == "ret":
                _, ppush, hpush, callee, ppop, hpop = r
                seg = [(c, ppush, hpush, None)]
                seg += local(callee, ppop, hpop)
                seg.append((callee, ppop, hpop, None))
                out.append(seg)
                cur = (ppush, hpush)
            else:
                prev_pp, prev_hs, branch = r
                out.append([(c, prev_pp, prev_hs, branch)])
                cur = (prev_pp, prev_hs)
        out.reverse()
        return [e for seg in out for e in seg]

    def full(c, pp, hs) -> list:
        if origin[c] is None:
            return local(c, pp, hs)
        c0, ppush, hpush = origin[c]
        return full(c0, ppush, hpush) + [(c0, ppush, hpush, None)] + local(c, pp, hs)

    c, pp, hs = accept_item
    events = full(c, pp, hs) + [(c, pp, hs, None)]
    trace, choices = [], []
    for ec, epp, ehs, branch in events:
        ins = code[epp]
        op = ins[0]
        action = OPNAMES[op]
        if op == PUSH:
            action = f"push {ins[1](ehs, tops[ec])}"
        elif op == CHOICE:
            action = f"choice {branch}"
            choices.append(branch)
        elif op in (LEFT, RIGHT) and compiled.head_count > 1:
            action += str(ins[1] + 1)
        trace.append(Step(epp, ehs, action))
    return Witness(tuple(trace), tuple(choices))


# --------------------------------------------------------------------------
# reference interpreter

ACCEPTED, REJECTED, STUCK, OUT_OF_FUEL = "accepted", "rejected", "stuck", "out_of_fuel"


@dataclass
class Run:
    status: str
    steps: int
    trace: list = field(default_factory=list)   # (command, heads, stack)


def _eval_sym(e, cells, heads, stack):
    if isinstance(e, Const):
        return e.symbol
    if isinstance(e, Top):
        return stack[-1] if stack else BOTTOM
    return cells[heads[e.head - 1]]


def _eval_cond(e, cells, heads, stack) -> bool:
    if isinstance(e, Bottom):
        return not stack
    if isinstance(e, LeftEnd):
        return heads[e.head - 1] == 0
    if isinstance(e, RightEnd):
        return heads[e.head - 1] == len(cells) - 1
    if isinstance(e, Eq):
        return _eval_sym(e.lhs, cells, heads, stack) == _eval_sym(e.rhs, cells, heads, stack)
    if isinstance(e, And):
        return _eval_cond(e.lhs, cells, heads, stack) and _eval_cond(e.rhs, cells, heads, stack)
    return _eval_cond(e.lhs, cells, heads, stack) or _eval_cond(e.rhs, cells, heads, stack)


def run_deterministic(p: Program, tape: Tape, fuel: int, choices=(),
                      record: bool = False) -> Run:
    """Execute one computation, resolving the i-th choice by ``choices[i]``.

    Ends ``stuck`` when the script runs out at a choice, on a pop of the
    empty stack, a push of a reserved symbol, or a head leaving the tape.
    Falling off the last block rejects.
    """
    p = expand_macros(p)
    cells = tape.cells
    index = {b.label: i for i, b in enumerate(p.blocks)}
    bi = 0
    todo = list(reversed(p.blocks[0].body))
    heads = [0] * p.head_count
    stack: list = []
    trace: list = []
    used = steps = 0
    while True:
        if not todo:
            bi += 1
            if bi == len(p.blocks):
                return Run(REJECTED, steps, trace)
            todo = list(reversed(p.blocks[bi].body))
            continue
        if steps >= fuel:
            return Run(OUT_OF_FUEL, steps, trace)
        c = todo.pop()
        steps += 1
        if record:
            trace.append((c, tuple(heads), tuple(stack)))
        if isinstance(c, Accept):
            return Run(ACCEPTED, steps, trace)
        if isinstance(c, Reject):
            return Run(REJECTED, steps, trace)
        if isinstance(c, Pop):
            if not stack:
                return Run(STUCK, steps, trace)
            stack.pop()
        elif isinstance(c, Push):
            v = _eval_sym(c.expr, cells, heads, stack)
            if v in RESERVED:
                return Run(STUCK, steps, trace)
            stack.append(v)
        elif isinstance(c, Left):
            if heads[c.head - 1] == 0:
                return Run(STUCK, steps, trace)
            heads[c.head - 1] -= 1
        elif isinstance(c, Right):
            if heads[c.head - 1] == len(cells) - 1:
                return Run(STUCK, steps, trace)
            heads[c.head - 1] += 1
        elif isinstance(c, If):
            branch = c.then if _eval_cond(c.cond, cells, heads, stack) else c.orelse
            todo.extend(reversed(branch))
        elif isinstance(c, Choice):
            if used >= len(choices):
                return Run(STUCK, steps, trace)
            branch = c.first if choices[used] == 0 else c.second
            used += 1
            todo.extend(reversed(branch))
        elif isinstance(c, Goto):
            bi = index[c.label]
            todo = list(reversed(p.blocks[bi].body))
        elif isinstance(c, Skip):
            pass
        else:
            raise TypeError(f"unexpanded command {c!r}")
