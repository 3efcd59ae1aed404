"""Concrete syntax for programs: parser and canonical pretty-printer.

The `.bssram` format, one instruction per label, `;`-separated, `.` after
the final stop, `#` comments, whitespace-insensitive between tokens:

    signature (2; 2,2,2; 2)      # optional header pinning the signature
    1: Z1 := f1^2(Z1,Z2);        # Zj := fi^m(...)    computation
    2: Z4 := c1^0;               # Zj := ci^0         constant
    3: Z2 := Z3;                 # Zj := Zk           direct copy
    4: Z[I1] := Z[I2];           # indirect copy
    5: if r1^2(Z1,Z2) then goto 7 else goto 6;
    6: if I1 = I2 then goto 7 else goto 5;
    7: I2 := 1;
    8: I2 := I2 + 1;
    9: if (Z1,...,Z[I1]) in O then goto 10 else goto 11;
    10: Z1 := nu[O](Z1,...,Z[I1]);
    11: goto 1 or goto 12;
    12: stop.

The oracle argument list is the fixed text `(Z1,...,Z[I1])`, not a general
expression.  parse_program(format_program(p)) is structurally p.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from bssram.program import (
    Compute, SetConst, CopyDirect, CopyIndirect, RelBranch, IdxBranch,
    IdxSetOne, IdxInc, Stop, OracleBranch, NuAssign, NdGoto,
    Instruction, Program,
)
from bssram.structures import Signature

__all__ = ["ParseError", "parse_program", "format_program"]


class ParseError(ValueError):
    """Rejection of program text, with 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# := must precede the ':' alternative and '...' must precede '.'.
_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<num>\d+)
      | (?P<word>[A-Za-z][A-Za-z0-9]*)
      | (?P<assign>:=)
      | (?P<ellipsis>\.\.\.)
      | (?P<sym>[:;.,()^\[\]=+])
    """,
    re.VERBOSE,
)

_REGISTER_RE = re.compile(r"^([ZIfcr])([0-9]+)$")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "word", "sym", "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    line_starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            line_starts.append(i + 1)

    def position(offset: int) -> tuple[int, int]:
        line = bisect_right(line_starts, offset)
        return line, offset - line_starts[line - 1] + 1

    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = position(pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            line, col = position(pos)
            if kind == "assign":
                tokens.append(_Token("sym", ":=", line, col))
            elif kind == "ellipsis":
                tokens.append(_Token("sym", "...", line, col))
            else:
                tokens.append(_Token(kind, m.group(), line, col))
        pos = m.end()
    line, col = position(len(text)) if text else (1, 1)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None) -> "ParseError":
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect_sym(self, sym: str) -> _Token:
        tok = self.next()
        if tok.kind != "sym" or tok.text != sym:
            raise self.fail(f"expected {sym!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def expect_word(self, word: str) -> _Token:
        tok = self.next()
        if tok.kind != "word" or tok.text != word:
            raise self.fail(f"expected {word!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def expect_num(self, what: str) -> int:
        tok = self.next()
        if tok.kind != "num":
            raise self.fail(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return int(tok.text)

    def register(self, kinds: str, what: str) -> tuple[str, int]:
        tok = self.next()
        m = _REGISTER_RE.match(tok.text) if tok.kind == "word" else None
        if m is None or m.group(1) not in kinds:
            raise self.fail(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        index = int(m.group(2))
        if index < 1:
            raise self.fail(f"{what} names start at 1", tok)
        return m.group(1), index

    # --- grammar ---------------------------------------------------------

    def program(self) -> Program:
        declared = None
        if self.peek().kind == "word" and self.peek().text == "signature":
            declared = self.header()
        instructions: list[Instruction] = []
        while True:
            label_tok = self.peek()
            label = self.expect_num("instruction label")
            if label != len(instructions) + 1:
                raise self.fail(
                    f"labels must run 1,2,...; expected {len(instructions) + 1}, found {label}",
                    label_tok,
                )
            self.expect_sym(":")
            ins = self.instruction()
            instructions.append(ins)
            tok = self.next()
            if tok.kind == "sym" and tok.text == ";":
                if isinstance(ins, Stop):
                    raise self.fail("stop must be the last instruction", tok)
                continue
            if tok.kind == "sym" and tok.text == ".":
                if not isinstance(ins, Stop):
                    raise self.fail("the program must end with stop", tok)
                break
            raise self.fail(f"expected ';' or '.', found {tok.text or 'end of input'!r}", tok)
        tail = self.next()
        if tail.kind != "eof":
            raise self.fail("text after end of program", tail)
        return Program(tuple(instructions), declared)

    def header(self) -> Signature:
        self.expect_word("signature")
        self.expect_sym("(")
        n1 = self.expect_num("constant count")
        self.expect_sym(";")
        op_arities = self.arity_list(";")
        self.expect_sym(";")
        rel_arities = self.arity_list(")")
        self.expect_sym(")")
        return Signature(n1, op_arities, rel_arities)

    def arity_list(self, closer: str) -> tuple[int, ...]:
        if self.peek().kind == "sym" and self.peek().text == closer:
            return ()
        arities = [self.expect_num("arity")]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.next()
            arities.append(self.expect_num("arity"))
        return tuple(arities)

    def instruction(self) -> Instruction:
        tok = self.peek()
        if tok.kind != "word":
            raise self.fail(f"expected an instruction, found {tok.text or 'end of input'!r}")
        if tok.text == "stop":
            self.next()
            return Stop()
        if tok.text == "goto":
            return self.nd_goto()
        if tok.text == "if":
            return self.branch()
        if tok.text == "Z":
            return self.copy_indirect()
        if tok.text.startswith("Z"):
            return self.z_assignment()
        if tok.text.startswith("I"):
            return self.index_assignment()
        raise self.fail(f"expected an instruction, found {tok.text!r}")

    def nd_goto(self) -> NdGoto:
        self.expect_word("goto")
        a = self.expect_num("label")
        self.expect_word("or")
        self.expect_word("goto")
        b = self.expect_num("label")
        return NdGoto(a, b)

    def branch(self) -> Instruction:
        self.expect_word("if")
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "(":
            self.oracle_args()
            self.expect_word("in")
            self.expect_word("O")
            then_label, else_label = self.goto_pair()
            return OracleBranch(then_label, else_label)
        if tok.kind == "word" and tok.text.startswith("r"):
            _, r = self.register("r", "relation symbol")
            self.expect_sym("^")
            arity_tok = self.peek()
            arity = self.expect_num("arity annotation")
            args = self.z_list()
            if arity != len(args):
                raise self.fail(
                    f"arity annotation ^{arity} does not match {len(args)} arguments",
                    arity_tok,
                )
            then_label, else_label = self.goto_pair()
            return RelBranch(r, args, then_label, else_label)
        if tok.kind == "word" and tok.text.startswith("I"):
            _, a = self.register("I", "index register")
            self.expect_sym("=")
            _, b = self.register("I", "index register")
            then_label, else_label = self.goto_pair()
            return IdxBranch(a, b, then_label, else_label)
        raise self.fail(f"expected a test, found {tok.text or 'end of input'!r}")

    def goto_pair(self) -> tuple[int, int]:
        self.expect_word("then")
        self.expect_word("goto")
        then_label = self.expect_num("label")
        self.expect_word("else")
        self.expect_word("goto")
        else_label = self.expect_num("label")
        return then_label, else_label

    def z_list(self) -> tuple[int, ...]:
        self.expect_sym("(")
        args = [self.register("Z", "Z-register")[1]]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.next()
            args.append(self.register("Z", "Z-register")[1])
        self.expect_sym(")")
        return tuple(args)

    def oracle_args(self) -> None:
        # The fixed prefix text (Z1,...,Z[I1]).
        start = self.peek()
        try:
            self.expect_sym("(")
            self.expect_word("Z1")
            self.expect_sym(",")
            self.expect_sym("...")
            self.expect_sym(",")
            self.expect_word("Z")
            self.expect_sym("[")
            self.expect_word("I1")
            self.expect_sym("]")
            self.expect_sym(")")
        except ParseError:
            raise self.fail(
                "oracle argument list must be exactly (Z1,...,Z[I1])", start
            ) from None

    def copy_indirect(self) -> CopyIndirect:
        self.expect_word("Z")
        self.expect_sym("[")
        _, dst = self.register("I", "index register")
        self.expect_sym("]")
        self.expect_sym(":=")
        self.expect_word("Z")
        self.expect_sym("[")
        _, src = self.register("I", "index register")
        self.expect_sym("]")
        return CopyIndirect(dst, src)

    def z_assignment(self) -> Instruction:
        _, z = self.register("Z", "Z-register")
        self.expect_sym(":=")
        tok = self.peek()
        if tok.kind != "word":
            raise self.fail(
                f"expected a right-hand side, found {tok.text or 'end of input'!r}"
            )
        if tok.text == "nu":
            self.next()
            self.expect_sym("[")
            self.expect_word("O")
            self.expect_sym("]")
            self.oracle_args()
            return NuAssign(z)
        if tok.text.startswith("Z"):
            _, src = self.register("Z", "Z-register")
            return CopyDirect(z, src)
        if tok.text.startswith("f"):
            _, f = self.register("f", "operation symbol")
            self.expect_sym("^")
            arity_tok = self.peek()
            arity = self.expect_num("arity annotation")
            args = self.z_list()
            if arity != len(args):
                raise self.fail(
                    f"arity annotation ^{arity} does not match {len(args)} arguments",
                    arity_tok,
                )
            return Compute(z, f, args)
        if tok.text.startswith("c"):
            _, c = self.register("c", "constant symbol")
            self.expect_sym("^")
            zero_tok = self.peek()
            if self.expect_num("arity annotation") != 0:
                raise self.fail("constant symbols carry the annotation ^0", zero_tok)
            return SetConst(z, c)
        raise self.fail(f"expected a right-hand side, found {tok.text!r}")

    def index_assignment(self) -> Instruction:
        _, j = self.register("I", "index register")
        self.expect_sym(":=")
        tok = self.next()
        if tok.kind == "num":
            if int(tok.text) != 1:
                raise self.fail("index registers may only be set to 1", tok)
            return IdxSetOne(j)
        if tok.kind == "word" and tok.text.startswith("I"):
            m = _REGISTER_RE.match(tok.text)
            if m is None or int(m.group(2)) != j:
                raise self.fail(
                    f"increment must name the assigned register I{j}", tok
                )
            self.expect_sym("+")
            one_tok = self.next()
            if one_tok.kind != "num" or one_tok.text != "1":
                raise self.fail("index registers increment by 1 only", one_tok)
            return IdxInc(j)
        raise self.fail(
            f"expected 1 or I{j} + 1, found {tok.text or 'end of input'!r}", tok
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"_Parser(at {self.peek()})"


def parse_program(text: str) -> Program:
    """Parse program text; raises ParseError with line/column on rejection."""
    return _Parser(_tokenize(text)).program()


_ORACLE_ARGS = "(Z1,...,Z[I1])"


def _render(ins: Instruction) -> str:
    if isinstance(ins, Compute):
        args = ",".join(f"Z{a}" for a in ins.args)
        return f"Z{ins.z} := f{ins.f}^{len(ins.args)}({args})"
    if isinstance(ins, SetConst):
        return f"Z{ins.z} := c{ins.c}^0"
    if isinstance(ins, CopyDirect):
        return f"Z{ins.dst} := Z{ins.src}"
    if isinstance(ins, CopyIndirect):
        return f"Z[I{ins.dst}] := Z[I{ins.src}]"
    if isinstance(ins, RelBranch):
        args = ",".join(f"Z{a}" for a in ins.args)
        return (
            f"if r{ins.r}^{len(ins.args)}({args}) "
            f"then goto {ins.then_label} else goto {ins.else_label}"
        )
    if isinstance(ins, IdxBranch):
        return (
            f"if I{ins.a} = I{ins.b} "
            f"then goto {ins.then_label} else goto {ins.else_label}"
        )
    if isinstance(ins, IdxSetOne):
        return f"I{ins.j} := 1"
    if isinstance(ins, IdxInc):
        return f"I{ins.j} := I{ins.j} + 1"
    if isinstance(ins, Stop):
        return "stop"
    if isinstance(ins, OracleBranch):
        return (
            f"if {_ORACLE_ARGS} in O "
            f"then goto {ins.then_label} else goto {ins.else_label}"
        )
    if isinstance(ins, NuAssign):
        return f"Z{ins.z} := nu[O]{_ORACLE_ARGS}"
    if isinstance(ins, NdGoto):
        return f"goto {ins.a} or goto {ins.b}"
    raise TypeError(f"not an instruction: {ins!r}")


def format_program(p: Program) -> str:
    """Canonical text: optional header, one instruction per line."""
    lines = []
    if p.declared_signature is not None:
        lines.append(f"signature {p.declared_signature}")
    last = len(p.instructions) - 1
    for pos, ins in enumerate(p.instructions):
        terminator = "." if pos == last else ";"
        lines.append(f"{pos + 1}: {_render(ins)}{terminator}")
    return "\n".join(lines) + "\n"
