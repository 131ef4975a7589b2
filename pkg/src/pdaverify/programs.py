"""The two pushdown programs: graph pathfinding and protocol checking.

Both scan a tape of edges, keeping the current node on top of the stack and
guessing at each matching edge whether to traverse it.  The checker's edges
carry an operator; traversing pops the current node, cancels the operator
against the pending one below it (or pushes it), and accepts on reaching
node 1 with nothing left pending.
"""

from __future__ import annotations

from functools import reduce

from .lang import (Accept, And, Block, Bottom, Choice, Const, Eq, Goto, Hd,
                   If, MoveToLeftEnd, Or, Pop, Program, Push, Repeat, Right,
                   RightEnd, Top)
from .protocol import DEFAULT_TABLE, CancelTable
from .sim import CHOICE, Tape, Witness, compile_program

SOURCE, TARGET = "0", "1"


def _scanner(traverse: tuple, width: int) -> Program:
    skip = (Repeat("right", width),)
    init = Block("init", (Push(Const(SOURCE)), Right()))
    loop = Block("loop", (
        If(Eq(Top(), Hd()), (Choice(traverse, skip),), skip),
        If(RightEnd(), (MoveToLeftEnd(),)),
        Goto("loop"),
    ))
    return Program((init, loop), 1)


def gen_pathfinder() -> Program:
    """Nondeterministic search for a path 0 -> 1 over two-symbol edges."""
    traverse = (
        Pop(), Right(),
        If(Eq(Hd(), Const(TARGET)), (Accept(),)),
        Push(Hd()), Right(),
    )
    return _scanner(traverse, 2)


def identity_test(ct: CancelTable):
    """Disjunction over the table: the operator under the head cancels the one on top."""
    terms = [And(Eq(Hd(), Const(later)), Eq(Top(), Const(earlier)))
             for earlier, later in ct]
    return reduce(Or, terms) if terms else None


def gen_verifier(ct: CancelTable = DEFAULT_TABLE) -> Program:
    """Search for a path 0 -> 1 over three-symbol edges whose word cancels under ``ct``."""
    test = identity_test(ct)
    step = If(test, (Pop(),), (Push(Hd()),)) if test is not None else Push(Hd())
    traverse = (
        Pop(), Right(),
        step,
        Right(),
        If(And(Eq(Hd(), Const(TARGET)), Bottom()), (Accept(),)),
        Push(Hd()), Right(),
    )
    return _scanner(traverse, 3)


def attack_path(w: Witness, tape: Tape, program: Program | None = None) -> list:
    """Edges traversed by an accepting run of `gen_verifier` on ``tape``.

    The traverse branch is the first arm of the only choice; the head sits
    on the edge's source symbol when the choice is made.
    """
    code = compile_program(program or gen_verifier()).code
    cells = tape.cells
    edges = []
    for step in w.trace:
        if code[step.pp][0] == CHOICE and step.action == "choice 0":
            h = step.heads[0]
            edges.append(tuple(cells[h:h + 3]))
    return edges
