"""Builder for the formula-evaluation machine over the Boolean-symbol
structure: a stack (pushdown) simulation with index-register arithmetic.

The machine receives a well-formed prefix formula as its input tuple and
halts exactly when the formula evaluates to 1; on every other input it
enters a one-instruction self-loop and never halts.  Strategy: relocate
the input upward to clear scratch registers, lay a stack-bottom marker
above it, then consume the formula right to left.  Truth constants are
pushed; a connective pops its first operand and reduces to one of the
unary operator actions (constant 0, constant 1, identity, negation)
applied to the next value.  When the input is exhausted the run accepts
iff the stack holds exactly one value and that value is 1.

The structure has no operations, so every value move is a copy and every
test is an equality branch; popping decrements an index register through
the three-register counting macro (emit_decrement).

Tape layout after the prologue, for input length m:

    Z1..Z8          scratch (current symbol, popped value, write staging,
                    comparand; rest spare)
    Z9..Z8+m        the relocated input
    Z9+m            stack bottom marker '#'; the stack grows upward

Index registers: I1 input length, I2 input cursor, I3 stack top, I4/I5
decrement scratch, I6..I9 the static values 8, 1, 2, 3 (boundary check
and pointers to the scratch cells).
"""

from __future__ import annotations

from typing import Callable, Optional

from bssram.machine import Configuration, Machine, input_i1, step
from bssram.program import (
    CopyIndirect, IdxBranch, IdxInc, IdxSetOne, Instruction, Program,
    RelBranch, SetConst, Stop, emit_decrement,
)
from bssram.structures import BOOL_SYMBOLS, Signature, get_builtin_structure

__all__ = [
    "build_formula_machine",
    "formula_machine",
    "run_formula",
    "accepts_prefix",
    "accepts_formula",
]

# Constant indices into BOOL_SYMBOLS (1-based).
_C = {symbol: i + 1 for i, symbol in enumerate(BOOL_SYMBOLS)}

_SHIFT = 8  # scratch cells cleared by relocating the input upward

# Scratch cell numbers and their pointer registers.
_SYMBOL, _POPPED, _STAGE, _COMPARAND = 1, 2, 3, 4
_CURSOR, _TOP = 2, 3
_AUX1, _AUX2 = 4, 5
_BOUNDARY, _PTR_SYMBOL, _PTR_POPPED, _PTR_STAGE = 6, 7, 8, 9


class _Assembler:
    """Two-pass assembler over symbolic labels.

    Pass one assigns addresses (the decrement macro occupies 11 labels),
    pass two builds the instructions with branch targets resolved.
    """

    def __init__(self) -> None:
        self._items: list[tuple[str, list[str], object]] = []
        self._pending: list[str] = []

    def label(self, name: str) -> None:
        self._pending.append(name)

    def ins(self, factory: Callable) -> None:
        self._items.append(("ins", self._pending, factory))
        self._pending = []

    def raw(self, instruction: Instruction) -> None:
        self.ins(lambda resolve, _i=instruction: _i)

    def goto(self, target: str) -> None:
        # Unconditional jump idiom: a register always equals itself.
        self.ins(lambda r, _t=target: IdxBranch(1, 1, r(_t), r(_t)))

    def idx_branch(self, a: int, b: int, then_label: str, else_label: str) -> None:
        self.ins(
            lambda r, _a=a, _b=b, _t=then_label, _e=else_label: IdxBranch(
                _a, _b, r(_t), r(_e)
            )
        )

    def eq_branch(self, z1: int, z2: int, then_label: str, else_label: str) -> None:
        self.ins(
            lambda r, _z=(z1, z2), _t=then_label, _e=else_label: RelBranch(
                1, _z, r(_t), r(_e)
            )
        )

    def dec(self, target: int) -> None:
        self._items.append(("dec", self._pending, target))
        self._pending = []

    def assemble(self) -> list[Instruction]:
        if self._pending:
            raise ValueError(f"labels {self._pending} attached to no instruction")
        table: dict[str, int] = {}
        address = 1
        for kind, labels, _payload in self._items:
            for name in labels:
                if name in table:
                    raise ValueError(f"duplicate label {name!r}")
                table[name] = address
            address += 11 if kind == "dec" else 1

        def resolve(name: str) -> int:
            if name not in table:
                raise ValueError(f"undefined label {name!r}")
            return table[name]

        out: list[Instruction] = []
        address = 1
        for kind, _labels, payload in self._items:
            if kind == "dec":
                out.extend(emit_decrement(payload, _AUX1, _AUX2, address))
                address += 11
            else:
                out.append(payload(resolve))
                address += 1
        return out


def _static_value(asm: _Assembler, register: int, value: int) -> None:
    asm.raw(IdxSetOne(register))
    for _ in range(value - 1):
        asm.raw(IdxInc(register))


def _count_up_to_i1(asm: _Assembler, register: int, name: str) -> None:
    # register := I1 by counting, the only way to copy an index register.
    asm.raw(IdxSetOne(register))
    asm.label(name)
    asm.idx_branch(register, 1, f"{name}.done", f"{name}.inc")
    asm.label(f"{name}.inc")
    asm.raw(IdxInc(register))
    asm.goto(name)
    asm.label(f"{name}.done")


def _pop_bit(asm: _Assembler, name: str, if0: str, if1: str) -> None:
    """Guarded pop: reject on stack bottom or a non-bit value, else branch
    on the popped bit.  Entry label is `name`."""
    asm.label(name)
    asm.ins(lambda r: CopyIndirect(_PTR_POPPED, _TOP))  # peek into Z2
    asm.raw(SetConst(_COMPARAND, _C["#"]))
    asm.eq_branch(_POPPED, _COMPARAND, "reject", f"{name}.pop")
    asm.label(f"{name}.pop")
    asm.dec(_TOP)
    asm.raw(SetConst(_COMPARAND, _C["0"]))
    asm.eq_branch(_POPPED, _COMPARAND, if0, f"{name}.try1")
    asm.label(f"{name}.try1")
    asm.raw(SetConst(_COMPARAND, _C["1"]))
    asm.eq_branch(_POPPED, _COMPARAND, if1, "reject")


def _push(asm: _Assembler, name: str, constant: str) -> None:
    asm.label(name)
    asm.raw(SetConst(_STAGE, _C[constant]))
    asm.raw(IdxInc(_TOP))
    asm.ins(lambda r: CopyIndirect(_TOP, _PTR_STAGE))
    asm.goto("main")


def build_formula_machine() -> Program:
    """Assemble the formula-evaluation program (the shipped boolpda listing)."""
    asm = _Assembler()

    # Static index values: boundary 8 and pointers to scratch cells 1..3.
    _static_value(asm, _BOUNDARY, _SHIFT)
    _static_value(asm, _PTR_SYMBOL, _SYMBOL)
    _static_value(asm, _PTR_POPPED, _POPPED)
    _static_value(asm, _PTR_STAGE, _STAGE)

    # Relocate the input from Z1..Zm to Z9..Z8+m, walking src and dst
    # downward so no cell is overwritten before it is copied.
    _count_up_to_i1(asm, _CURSOR, "src")
    _count_up_to_i1(asm, _TOP, "dst")
    for _ in range(_SHIFT):
        asm.raw(IdxInc(_TOP))
    asm.label("shift")
    asm.ins(lambda r: CopyIndirect(_TOP, _CURSOR))
    asm.idx_branch(_CURSOR, _PTR_SYMBOL, "shift.done", "shift.step")
    asm.label("shift.step")
    asm.dec(_CURSOR)
    asm.dec(_TOP)
    asm.goto("shift")
    asm.label("shift.done")

    # Cursor to the rightmost input cell, stack bottom marker above the input.
    _count_up_to_i1(asm, _CURSOR, "cursor")
    for _ in range(_SHIFT):
        asm.raw(IdxInc(_CURSOR))
    _count_up_to_i1(asm, _TOP, "base")
    for _ in range(_SHIFT + 1):
        asm.raw(IdxInc(_TOP))
    asm.raw(SetConst(_STAGE, _C["#"]))
    asm.ins(lambda r: CopyIndirect(_TOP, _PTR_STAGE))

    # Main scan: done when the cursor is back at the scratch boundary,
    # else fetch the rightmost unread symbol and dispatch on it.
    asm.label("main")
    asm.idx_branch(_CURSOR, _BOUNDARY, "finish", "main.read")
    asm.label("main.read")
    asm.ins(lambda r: CopyIndirect(_PTR_SYMBOL, _CURSOR))
    asm.dec(_CURSOR)
    dispatch = [
        ("0", "push0"),
        ("1", "push1"),
        ("¬", "negate"),
        ("∧", "op.and"),
        ("∨", "op.or"),
        ("↔", "op.iff"),
    ]
    for pos, (symbol, target) in enumerate(dispatch):
        asm.raw(SetConst(_COMPARAND, _C[symbol]))
        fallthrough = f"main.d{pos + 1}" if pos + 1 < len(dispatch) else "reject"
        asm.eq_branch(_SYMBOL, _COMPARAND, target, fallthrough)
        if pos + 1 < len(dispatch):
            asm.label(f"main.d{pos + 1}")

    _push(asm, "push0", "0")
    _push(asm, "push1", "1")

    # The unary actions a connective reduces to, each popping one value.
    _pop_bit(asm, "negate", "push1", "push0")
    _pop_bit(asm, "identity", "push0", "push1")
    _pop_bit(asm, "const0", "push0", "push0")
    _pop_bit(asm, "const1", "push1", "push1")

    # Connectives pop their first operand b and become a unary action:
    # and_0 kills, and_1 keeps; or_0 keeps, or_1 forces 1; iff_0 negates,
    # iff_1 keeps.
    _pop_bit(asm, "op.and", "const0", "identity")
    _pop_bit(asm, "op.or", "identity", "const1")
    _pop_bit(asm, "op.iff", "negate", "identity")

    # Input exhausted: pop the result, require value 1 over a bare marker.
    _pop_bit(asm, "finish", "reject", "finish.check")
    asm.label("finish.check")
    asm.ins(lambda r: CopyIndirect(_PTR_POPPED, _TOP))
    asm.raw(SetConst(_COMPARAND, _C["#"]))
    asm.eq_branch(_POPPED, _COMPARAND, "accept", "reject")

    asm.label("reject")
    asm.ins(lambda r: IdxBranch(1, 1, r("reject"), r("reject")))

    asm.label("accept")
    asm.raw(IdxSetOne(1))
    asm.raw(SetConst(1, _C["1"]))
    asm.raw(Stop())

    signature = Signature(len(BOOL_SYMBOLS), (), (2,))
    return Program(tuple(asm.assemble()), signature)


_MACHINE: Optional[Machine] = None


def formula_machine() -> Machine:
    """The formula-evaluation machine over bool-symbols (shared instance)."""
    global _MACHINE
    if _MACHINE is None:
        _MACHINE = Machine(build_formula_machine(), get_builtin_structure("bool-symbols"))
    return _MACHINE


def run_formula(c0: Configuration, max_steps: int) -> tuple[str, Configuration, int]:
    """Drive the machine from c0: ("halted" | "diverges" | "budget", last, steps).

    A configuration that steps to itself without being at stop can never
    halt, which is how the machine's reject loop is recognized without
    spending the whole budget.
    """
    m = formula_machine()
    stop_label = m.stop_label
    c = c0
    steps = 0
    while c.label != stop_label:
        if steps >= max_steps:
            return ("budget", c, steps)
        n = step(m, c)
        if n == c:
            return ("diverges", c, steps)
        c = n
        steps += 1
    return ("halted", c, steps)


def accepts_prefix(p: tuple[str, ...], max_steps: int = 100000) -> bool:
    """Does the machine halt on the prefix tuple p?"""
    m = formula_machine()
    status, _c, _steps = run_formula(input_i1(tuple(p), m.k_M), max_steps)
    if status == "budget":
        raise RuntimeError(f"verdict needs more than {max_steps} steps for {p!r}")
    return status == "halted"


def accepts_formula(text: str, max_steps: int = 100000) -> bool:
    """Does the machine halt on the encoded formula text (malformed text
    maps to the fixed rejected configuration)?"""
    from bssram.encodings import formula_input

    m = formula_machine()
    status, _c, _steps = run_formula(formula_input(text, m.k_M), max_steps)
    if status == "budget":
        raise RuntimeError(f"verdict needs more than {max_steps} steps for {text!r}")
    return status == "halted"
