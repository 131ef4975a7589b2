"""Multihead nondeterministic pushdown flowchart language.

A program is a list of labeled command sequences.  This module holds the
AST, the parser for the concrete syntax, a printer that renders programs
back to text, macro expansion and static validation.

Concrete syntax::

    heads: 1                          (* optional, defaults to 1 *)
    init: push '0'; right
    loop: if top = hd then choice pop; right or 2-right end
          else 2-right end;
          if rightend then move-to-leftend end;
          goto loop

Conditions combine with ``&&`` / ``||`` (``∧`` / ``∨`` are accepted too);
``&&`` binds tighter.  Head-indexed forms take a numeric suffix
(``hd2``, ``left2``, ``leftend2``); the bare form means head 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

LEFT_END = ">"
RIGHT_END = "<"
BOTTOM = "⊥"
RESERVED = frozenset({LEFT_END, RIGHT_END, BOTTOM})


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Const:
    symbol: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Hd:
    head: int = 1


SymExpr = Union[Const, Top, Hd]


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class LeftEnd:
    head: int = 1


@dataclass(frozen=True)
class RightEnd:
    head: int = 1


@dataclass(frozen=True)
class Eq:
    lhs: SymExpr
    rhs: SymExpr


@dataclass(frozen=True)
class And:
    lhs: "BoolExpr"
    rhs: "BoolExpr"


@dataclass(frozen=True)
class Or:
    lhs: "BoolExpr"
    rhs: "BoolExpr"


BoolExpr = Union[Bottom, LeftEnd, RightEnd, Eq, And, Or]


@dataclass(frozen=True)
class Pop:
    pass


@dataclass(frozen=True)
class Push:
    expr: SymExpr


@dataclass(frozen=True)
class Left:
    head: int = 1


@dataclass(frozen=True)
class Right:
    head: int = 1


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Choice:
    first: tuple
    second: tuple


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: tuple
    orelse: tuple = (Skip(),)


@dataclass(frozen=True)
class Goto:
    label: str


@dataclass(frozen=True)
class Accept:
    pass


@dataclass(frozen=True)
class Reject:
    pass


# sugar, removed by expand_macros

@dataclass(frozen=True)
class Repeat:
    """``k-right`` / ``k-left``: k moves of one head."""
    direction: str  # "left" | "right"
    count: int
    head: int = 1


@dataclass(frozen=True)
class MoveToLeftEnd:
    head: int = 1


Command = Union[Pop, Push, Left, Right, Choice, If, Goto, Skip, Accept,
                Reject, Repeat, MoveToLeftEnd]

SKIP_ONLY = (Skip(),)
TRANSFERS = (Goto, Accept, Reject)


@dataclass(frozen=True)
class Block:
    label: str
    body: tuple


@dataclass(frozen=True)
class Program:
    blocks: tuple
    head_count: int = 1

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.blocks]

    def block(self, label: str) -> Block:
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)


# --------------------------------------------------------------------------
# errors

class ProgramError(ValueError):
    pass


class ParseError(ProgramError):
    def __init__(self, message: str, line: int = 0, col: int = 0,
                 expected: tuple = ()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        where = f"{line}:{col}: " if line else ""
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{where}{message}{hint}")


class DuplicateLabel(ProgramError):
    pass


class UndefinedLabel(ProgramError):
    pass


class BadHeadIndex(ProgramError):
    pass


class EmptyBlock(ProgramError):
    pass


# --------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\(\*.*?\*\))
  | (?P<const>'[^'\s]+')
  | (?P<repeat>(?P<count>\d+)-(?P<dir>left|right)(?P<rhead>\d*)(?![A-Za-z0-9_]))
  | (?P<mtl>move-to-leftend(?P<mhead>\d*)(?![A-Za-z0-9_]))
  | (?P<number>\d+(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||∧|∨|=|\(|\)|;|:)
""", re.VERBOSE | re.DOTALL)

_OP_ALIASES = {"∧": "&&", "∨": "||"}

# keyword families with optional head suffix
_HEADED = re.compile(r"(hd|left|right|leftend|rightend)(\d*)$")
_KEYWORDS = {"pop", "push", "choice", "or", "end", "if", "then", "else",
             "goto", "skip", "accept", "reject", "bottom", "top"}


@dataclass(frozen=True)
class Token:
    kind: str   # const | repeat | mtl | number | ident | op | eof
    text: str
    line: int
    col: int
    value: object = None


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text.startswith("(*", pos):
                raise ParseError("unterminated comment", line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        # lastgroup reports the innermost named group; normalize
        for k in ("ws", "comment", "const", "repeat", "mtl", "number", "ident", "op"):
            if m.group(k) is not None:
                kind = k
                break
        raw = m.group(0)
        col = pos - line_start + 1
        if kind == "const":
            tokens.append(Token("const", raw, line, col, raw[1:-1]))
        elif kind == "repeat":
            head = int(m.group("rhead") or 1)
            tokens.append(Token("repeat", raw, line, col,
                                (m.group("dir"), int(m.group("count")), head)))
        elif kind == "mtl":
            tokens.append(Token("mtl", raw, line, col, int(m.group("mhead") or 1)))
        elif kind == "number":
            tokens.append(Token("number", raw, line, col, int(raw)))
        elif kind == "ident":
            tokens.append(Token("ident", raw, line, col))
        elif kind == "op":
            tokens.append(Token("op", _OP_ALIASES.get(raw, raw), line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            line_start = pos + raw.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _headed(word: str):
    m = _HEADED.match(word)
    if not m:
        return None
    return m.group(1), int(m.group(2) or 1)


def _is_keyword(word: str) -> bool:
    return word in _KEYWORDS or _headed(word) is not None


# --------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected, what=None):
        t = self.tok
        found = what or (repr(t.text) if t.kind != "eof" else "end of input")
        raise ParseError(f"unexpected {found}", t.line, t.col, tuple(expected))

    def is_op(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def is_word(self, text: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == text

    def expect_op(self, text: str) -> Token:
        if not self.is_op(text):
            self.fail([repr(text)])
        return self.advance()

    def expect_word(self, text: str) -> Token:
        if not self.is_word(text):
            self.fail([repr(text)])
        return self.advance()

    def at_label(self) -> bool:
        t, n = self.tok, self.peek()
        return (t.kind == "ident" and not _is_keyword(t.text)
                and n.kind == "op" and n.text == ":")

    # program := ['heads' ':' NUMBER] (label ':' cmds)+
    def program(self) -> tuple[list, int]:
        heads = 1
        if self.is_word("heads") and self.peek().text == ":" and self.peek(2).kind == "number":
            self.advance()
            self.advance()
            heads = self.advance().value
            if heads < 1:
                raise BadHeadIndex("head count must be positive")
        blocks = []
        while self.tok.kind != "eof":
            if not self.at_label():
                self.fail(["label"])
            lt = self.advance()
            self.advance()  # ':'
            if self.at_label() or self.tok.kind == "eof":
                raise EmptyBlock(f"{lt.line}:{lt.col}: block {lt.text!r} is empty")
            blocks.append((lt, self.cmds()))
            if self.tok.kind != "eof" and not self.at_label():
                self.fail(["';'", "label", "end of input"])
        if not blocks:
            self.fail(["label"])
        return blocks, heads

    def cmds(self) -> tuple:
        out = [self.cmd()]
        while self.is_op(";"):
            self.advance()
            t = self.tok
            if (t.kind == "eof" or self.at_label()
                    or (t.kind == "ident" and t.text in ("or", "else", "end"))):
                break
            out.append(self.cmd())
        return tuple(out)

    def cmd(self):
        t = self.tok
        if t.kind == "repeat":
            self.advance()
            direction, count, head = t.value
            if count < 1:
                raise ParseError("repeat count must be positive", t.line, t.col)
            return Repeat(direction, count, head)
        if t.kind == "mtl":
            self.advance()
            return MoveToLeftEnd(t.value)
        if t.kind != "ident":
            self.fail(["command"])
        word = t.text
        h = _headed(word)
        if h and h[0] in ("left", "right"):
            self.advance()
            return Left(h[1]) if h[0] == "left" else Right(h[1])
        if word == "pop":
            self.advance()
            return Pop()
        if word == "push":
            self.advance()
            return Push(self.sexp())
        if word == "skip":
            self.advance()
            return Skip()
        if word == "accept":
            self.advance()
            return Accept()
        if word == "reject":
            self.advance()
            return Reject()
        if word == "goto":
            self.advance()
            lt = self.tok
            if lt.kind != "ident" or _is_keyword(lt.text):
                self.fail(["label"])
            self.advance()
            return Goto(lt.text)
        if word == "choice":
            self.advance()
            first = self.cmds()
            self.expect_word("or")
            second = self.cmds()
            self.expect_word("end")
            return Choice(first, second)
        if word == "if":
            self.advance()
            cond = self.bexp()
            self.expect_word("then")
            then = self.cmds()
            orelse = SKIP_ONLY
            if self.is_word("else"):
                self.advance()
                orelse = self.cmds()
            self.expect_word("end")
            return If(cond, then, orelse)
        self.fail(["command"], f"word {word!r}")

    def bexp(self):
        e = self.conj()
        while self.is_op("||"):
            self.advance()
            e = Or(e, self.conj())
        return e

    def conj(self):
        e = self.atom()
        while self.is_op("&&"):
            self.advance()
            e = And(e, self.atom())
        return e

    def atom(self):
        if self.is_op("("):
            self.advance()
            e = self.bexp()
            self.expect_op(")")
            return e
        t = self.tok
        if t.kind == "ident":
            if t.text == "bottom":
                self.advance()
                return Bottom()
            h = _headed(t.text)
            if h and h[0] in ("leftend", "rightend"):
                self.advance()
                return LeftEnd(h[1]) if h[0] == "leftend" else RightEnd(h[1])
        lhs = self.sexp()
        self.expect_op("=")
        return Eq(lhs, self.sexp())

    def sexp(self):
        t = self.tok
        if t.kind == "const":
            self.advance()
            if t.value in RESERVED:
                raise ParseError(f"reserved symbol {t.value!r} cannot be a constant",
                                 t.line, t.col)
            return Const(t.value)
        if t.kind == "ident":
            if t.text == "top":
                self.advance()
                return Top()
            h = _headed(t.text)
            if h and h[0] == "hd":
                self.advance()
                return Hd(h[1])
        self.fail(["constant", "'top'", "'hd'"])


def parse_program(text: str) -> Program:
    """Parse program text; the result is validated but not macro-expanded."""
    parser = _Parser(text)
    raw_blocks, heads = parser.program()
    seen = {}
    for lt, _ in raw_blocks:
        if lt.text in seen:
            raise DuplicateLabel(f"{lt.line}:{lt.col}: label {lt.text!r} already "
                                 f"defined at line {seen[lt.text].line}")
        seen[lt.text] = lt
    prog = Program(tuple(Block(lt.text, body) for lt, body in raw_blocks), heads)
    validate(prog)
    return prog


# --------------------------------------------------------------------------
# traversal and validation

def walk(cmds) -> Iterator:
    """Yield every command in ``cmds``, descending into branches."""
    for c in cmds:
        yield c
        if isinstance(c, Choice):
            yield from walk(c.first)
            yield from walk(c.second)
        elif isinstance(c, If):
            yield from walk(c.then)
            yield from walk(c.orelse)


def _cond_heads(e) -> Iterator[int]:
    if isinstance(e, (LeftEnd, RightEnd)):
        yield e.head
    elif isinstance(e, Eq):
        yield from _sexp_heads(e.lhs)
        yield from _sexp_heads(e.rhs)
    elif isinstance(e, (And, Or)):
        yield from _cond_heads(e.lhs)
        yield from _cond_heads(e.rhs)


def _sexp_heads(e) -> Iterator[int]:
    if isinstance(e, Hd):
        yield e.head


def _cmd_heads(c) -> Iterator[int]:
    if isinstance(c, (Left, Right, Repeat, MoveToLeftEnd)):
        yield c.head
    elif isinstance(c, Push):
        yield from _sexp_heads(c.expr)
    elif isinstance(c, If):
        yield from _cond_heads(c.cond)


def validate(p: Program) -> None:
    if p.head_count < 1:
        raise BadHeadIndex("head count must be positive")
    if not p.blocks:
        raise ProgramError("program has no blocks")
    labels = set()
    for b in p.blocks:
        if b.label in labels:
            raise DuplicateLabel(f"label {b.label!r} defined twice")
        labels.add(b.label)
        if not b.body:
            raise EmptyBlock(f"block {b.label!r} is empty")
    for b in p.blocks:
        for c in walk(b.body):
            if isinstance(c, Goto) and c.label not in labels:
                raise UndefinedLabel(f"goto {c.label!r} in block {b.label!r}: "
                                     "no such label")
            if isinstance(c, (Choice, If)) and not (
                    (c.first if isinstance(c, Choice) else c.then)
                    and (c.second if isinstance(c, Choice) else c.orelse)):
                raise ProgramError(f"empty branch in block {b.label!r}")
            if isinstance(c, Push) and isinstance(c.expr, Const) and c.expr.symbol in RESERVED:
                raise ProgramError(f"cannot push reserved symbol {c.expr.symbol!r}")
            for h in _cmd_heads(c):
                if not 1 <= h <= p.head_count:
                    raise BadHeadIndex(f"head {h} used in block {b.label!r} but "
                                       f"program declares {p.head_count} head(s)")


def classify(p: Program) -> dict:
    """One-way: no left moves.  Deterministic: no choice."""
    p = expand_macros(p)
    cmds = [c for b in p.blocks for c in walk(b.body)]
    return {
        "one_way": not any(isinstance(c, Left) for c in cmds),
        "deterministic": not any(isinstance(c, Choice) for c in cmds),
        "head_count": p.head_count,
    }


def has_sugar(cmds) -> bool:
    return any(isinstance(c, (Repeat, MoveToLeftEnd)) for c in walk(cmds))


# --------------------------------------------------------------------------
# macro expansion

def _expand_repeats(cmds) -> tuple:
    out = []
    for c in cmds:
        if isinstance(c, Repeat):
            move = Right(c.head) if c.direction == "right" else Left(c.head)
            out.extend([move] * c.count)
        elif isinstance(c, Choice):
            out.append(Choice(_expand_repeats(c.first), _expand_repeats(c.second)))
        elif isinstance(c, If):
            out.append(If(c.cond, _expand_repeats(c.then), _expand_repeats(c.orelse)))
        else:
            out.append(c)
    return tuple(out)


def _has_mtl(cmds) -> bool:
    return any(isinstance(c, MoveToLeftEnd) for c in walk(cmds))


def _ends_in_transfer(cmds) -> bool:
    if not cmds:
        return False
    last = cmds[-1]
    if isinstance(last, TRANSFERS):
        return True
    if isinstance(last, If):
        return _ends_in_transfer(last.then) and _ends_in_transfer(last.orelse)
    if isinstance(last, Choice):
        return _ends_in_transfer(last.first) and _ends_in_transfer(last.second)
    return False


class _Splitter:
    """Rewrites move-to-leftend loops into fresh labeled blocks.

    A loop needs a label to jump back to, and labels only start blocks, so
    the enclosing block is cut at the loop; the rest of the block goes to a
    continuation block and every cut branch ends in an explicit goto.
    """

    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = 0

    def fresh(self) -> str:
        while f"L{self.counter}" in self.taken:
            self.counter += 1
        name = f"L{self.counter}"
        self.taken.add(name)
        return name

    def seq(self, cmds, cont) -> tuple[tuple, list]:
        """Return (cmds', blocks): run ``cmds`` then transfer to ``cont``.

        ``cont`` is a label, or None for "halt without accepting".
        """
        if not _has_mtl(cmds):
            if _ends_in_transfer(cmds):
                return tuple(cmds), []
            return tuple(cmds) + (Goto(cont) if cont else Reject(),), []
        i = next(k for k, c in enumerate(cmds) if _has_mtl((c,)))
        prefix, c, rest = tuple(cmds[:i]), cmds[i], tuple(cmds[i + 1:])
        blocks = []
        loop = self.fresh() if isinstance(c, MoveToLeftEnd) else None
        after = cont
        rest_blocks = []
        if rest:
            after = self.fresh()
            body, more = self.seq(rest, cont)
            rest_blocks = [Block(after, body)] + more
        if isinstance(c, MoveToLeftEnd):
            h = c.head
            tail = (Goto(after),) if after else (Reject(),)
            blocks.append(Block(loop, (Left(h), If(LeftEnd(h), (Right(h),), (Goto(loop),))) + tail))
            head = prefix + (Goto(loop),)
        elif isinstance(c, If):
            t, bt = self.seq(c.then, after)
            e, be = self.seq(c.orelse, after)
            blocks += bt + be
            head = prefix + (If(c.cond, t, e),)
        else:
            t, bt = self.seq(c.first, after)
            e, be = self.seq(c.second, after)
            blocks += bt + be
            head = prefix + (Choice(t, e),)
        return head, blocks + rest_blocks


def expand_macros(p: Program) -> Program:
    """Replace k-right/k-left and move-to-leftend by core commands.

    Programs without sugar come back unchanged, so expansion is idempotent.
    """
    if not any(has_sugar(b.body) for b in p.blocks):
        return p
    splitter = _Splitter(p.labels)
    out = []
    for i, b in enumerate(p.blocks):
        body = _expand_repeats(b.body)
        if not _has_mtl(body):
            out.append(Block(b.label, body))
            continue
        nxt = p.blocks[i + 1].label if i + 1 < len(p.blocks) else None
        head, extra = splitter.seq(body, nxt)
        out.append(Block(b.label, head))
        out.extend(extra)
    return Program(tuple(out), p.head_count)


# --------------------------------------------------------------------------
# printer

def _suffix(head: int) -> str:
    return "" if head == 1 else str(head)


def format_sexp(e) -> str:
    if isinstance(e, Const):
        return f"'{e.symbol}'"
    if isinstance(e, Top):
        return "top"
    return "hd" + _suffix(e.head)


def format_cond(e, parent: str = "") -> str:
    if isinstance(e, Bottom):
        return "bottom"
    if isinstance(e, LeftEnd):
        return "leftend" + _suffix(e.head)
    if isinstance(e, RightEnd):
        return "rightend" + _suffix(e.head)
    if isinstance(e, Eq):
        return f"{format_sexp(e.lhs)} = {format_sexp(e.rhs)}"
    if isinstance(e, And):
        # parenthesized under || for readability; under && only when the
        # conjunction is a right operand
        s = f"{format_cond(e.lhs, 'and')} && {format_cond(e.rhs, 'and-r')}"
        return f"({s})" if parent in ("and-r", "or-l", "or") else s
    s = f"{format_cond(e.lhs, 'or-l')} || {format_cond(e.rhs, 'or')}"
    return f"({s})" if parent in ("and", "and-r", "or") else s


_SIMPLE = (Pop, Push, Left, Right, Repeat, MoveToLeftEnd, Goto, Skip, Accept, Reject)
_LINE = 72


def _inline(cmds) -> str | None:
    if all(isinstance(c, _SIMPLE) for c in cmds):
        return "; ".join(_format_cmd(c, 0)[0] for c in cmds)
    return None


def _format_cmds(cmds, indent: int) -> list[str]:
    pad = " " * indent
    rendered = []
    for c in cmds:
        block = _format_cmd(c, indent)
        # runs of one-line commands share a line while they fit
        if (len(block) == 1 and rendered and len(rendered[-1]) == 1
                and indent + len(rendered[-1][0]) + len(block[0]) + 2 <= _LINE
                and isinstance(c, _SIMPLE)):
            rendered[-1] = [rendered[-1][0] + "; " + block[0]]
        else:
            rendered.append(block)
    lines = []
    for k, block in enumerate(rendered):
        block = list(block)
        if k < len(rendered) - 1:
            block[-1] += ";"
        lines.append(pad + block[0])
        lines.extend(block[1:])
    return lines


def _format_long_cond(e, indent: int) -> list[str]:
    """Break a long disjunction into lines of at most two disjuncts."""
    parts = []
    while isinstance(e, Or):
        parts.append(e.rhs)
        e = e.lhs
    parts.append(e)
    parts.reverse()
    texts = [format_cond(parts[0], "or-l")] + [format_cond(x, "or") for x in parts[1:]]
    rows = [" || ".join(texts[i:i + 2]) for i in range(0, len(texts), 2)]
    pad = " " * (indent + 3)
    return [r + " ||" if i < len(rows) - 1 else r
            for i, r in enumerate(rows[:1])] + [
        pad + r + (" ||" if i < len(rows) - 2 else "")
        for i, r in enumerate(rows[1:])]


def _format_cmd(c, indent: int) -> list[str]:
    pad = " " * indent
    if isinstance(c, Pop):
        return ["pop"]
    if isinstance(c, Push):
        return [f"push {format_sexp(c.expr)}"]
    if isinstance(c, Left):
        return ["left" + _suffix(c.head)]
    if isinstance(c, Right):
        return ["right" + _suffix(c.head)]
    if isinstance(c, Repeat):
        return [f"{c.count}-{c.direction}{_suffix(c.head)}"]
    if isinstance(c, MoveToLeftEnd):
        return ["move-to-leftend" + _suffix(c.head)]
    if isinstance(c, Goto):
        return [f"goto {c.label}"]
    if isinstance(c, Skip):
        return ["skip"]
    if isinstance(c, Accept):
        return ["accept"]
    if isinstance(c, Reject):
        return ["reject"]
    if isinstance(c, Choice):
        a, b = _inline(c.first), _inline(c.second)
        if a is not None and b is not None:
            line = f"choice {a} or {b} end"
            if indent + len(line) <= _LINE:
                return [line]
        return (["choice"] + _format_cmds(c.first, indent + 2)
                + [pad + "or"] + _format_cmds(c.second, indent + 2) + [pad + "end"])
    if isinstance(c, If):
        cond = format_cond(c.cond)
        plain_else = c.orelse == SKIP_ONLY
        a, b = _inline(c.then), _inline(c.orelse)
        if a is not None and b is not None:
            line = f"if {cond} then {a}" + ("" if plain_else else f" else {b}") + " end"
            if indent + len(line) <= _LINE:
                return [line]
        if indent + len(cond) + 3 <= _LINE:
            lines = [f"if {cond}"]
        else:
            lines = _format_long_cond(c.cond, indent)
            lines[0] = "if " + lines[0]
        lines += [pad + "then"] + _format_cmds(c.then, indent + 2)
        if not plain_else:
            lines += [pad + "else"] + _format_cmds(c.orelse, indent + 2)
        return lines + [pad + "end"]
    raise TypeError(f"not a command: {c!r}")


def format_program(p: Program) -> str:
    """Render ``p`` as program text that parses back to ``p``."""
    width = max(len(b.label) for b in p.blocks) + 2
    out = [] if p.head_count == 1 else [f"heads: {p.head_count}"]
    for b in p.blocks:
        lines = _format_cmds(b.body, width)
        lines[0] = f"{b.label + ':':<{width}}" + lines[0][width:]
        out.extend(lines)
    return "\n".join(out) + "\n"
