"""Configurations and the deterministic transition system.

A configuration (label . indices . tape) stores the register tape as a
finite prefix plus a constant tail default: position p holds prefix[p-1]
when p <= len(prefix) and the tail default beyond.  The input procedure
produces exactly this shape and every instruction preserves it, so the
tape always differs from its own tail in only finitely many positions.

One transition is one step; halting is detected before stepping, so a
program whose first instruction is stop halts in 0 steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Union

from bssram.program import (
    Compute, SetConst, CopyDirect, CopyIndirect, RelBranch, IdxBranch,
    IdxSetOne, IdxInc, Stop, OracleBranch, NuAssign, NdGoto,
    Program, compute_kP, validate_program,
)
from bssram.structures import Structure, apply_operation, test_relation

if TYPE_CHECKING:  # pragma: no cover
    from bssram.nondet import OracleSet

__all__ = [
    "Configuration",
    "Machine",
    "MachineError",
    "Halted",
    "BudgetExhausted",
    "RunOutcome",
    "input_i1",
    "output_o",
    "step",
    "run",
    "run_finite",
    "trace",
    "format_configuration",
    "format_trace",
]


class MachineError(ValueError):
    """Machine construction or stepping violated a semantic precondition."""


@dataclass(frozen=True)
class Configuration:
    """(label . indices . tape) with the tape as prefix + constant tail."""

    label: int
    indices: tuple[int, ...]
    prefix: tuple
    tail: object

    def tape_get(self, pos: int):
        if pos < 1:
            raise MachineError(f"tape position {pos} out of range")
        if pos <= len(self.prefix):
            return self.prefix[pos - 1]
        return self.tail

    def set_tape(self, pos: int, value) -> "Configuration":
        if pos < 1:
            raise MachineError(f"tape position {pos} out of range")
        prefix = self.prefix
        if pos <= len(prefix):
            prefix = prefix[: pos - 1] + (value,) + prefix[pos:]
        else:
            prefix = prefix + (self.tail,) * (pos - 1 - len(prefix)) + (value,)
        return Configuration(self.label, self.indices, prefix, self.tail)

    def set_index(self, j: int, value: int) -> "Configuration":
        if not 1 <= j <= len(self.indices):
            raise MachineError(f"index register I{j} out of range")
        indices = self.indices[: j - 1] + (value,) + self.indices[j:]
        return Configuration(self.label, indices, self.prefix, self.tail)

    def with_label(self, label: int) -> "Configuration":
        return Configuration(label, self.indices, self.prefix, self.tail)


def input_i1(x: tuple, k_m: int) -> Configuration:
    """Input procedure: (1 . (n,1,...,1) . (x1..xn, xn, xn, ...))."""
    x = tuple(x)
    if not x:
        raise MachineError("input tuple must be non-empty")
    if k_m < 1:
        raise MachineError("machines have at least one index register")
    return Configuration(1, (len(x),) + (1,) * (k_m - 1), x, x[-1])


def output_o(c: Configuration) -> tuple:
    """Output procedure: the first nu_1 tape values."""
    nu1 = c.indices[0]
    return tuple(c.tape_get(i) for i in range(1, nu1 + 1))


@dataclass
class Machine:
    """A program bound to a structure, with k_M index registers.

    An oracle is required exactly when the program queries one (oracle
    branches or nu-assignments); passing one otherwise is rejected, since
    it could not influence the run.
    """

    program: Program
    structure: Structure
    k_M: Optional[int] = None
    oracle: Optional["OracleSet"] = None

    def __post_init__(self) -> None:
        report = validate_program(self.program, self.structure.signature, "infinite")
        if not report.ok:
            raise MachineError(
                "program does not fit the structure: " + "; ".join(report.errors)
            )
        if self.k_M is None:
            self.k_M = report.k_P
        elif self.k_M < report.k_P:
            raise MachineError(
                f"k_M = {self.k_M} is below the program's requirement k_P = {report.k_P}"
            )
        queries = report.uses["oracle"] or report.uses["nu"]
        if queries and self.oracle is None:
            raise MachineError("program queries an oracle but none was supplied")
        if self.oracle is not None and not queries:
            raise MachineError("oracle supplied but the program never queries one")
        self._report = report

    @property
    def stop_label(self) -> int:
        return self.program.stop_label


@dataclass(frozen=True)
class Halted:
    output: tuple
    steps: int
    final: Configuration


@dataclass(frozen=True)
class BudgetExhausted:
    last: Configuration
    steps: int


RunOutcome = Union[Halted, BudgetExhausted]


def step(m: Machine, c: Configuration) -> Configuration:
    """One application of the transition relation at c (types 1-9 only)."""
    ins = m.program.instructions[c.label - 1]
    nxt = c.label + 1
    if isinstance(ins, Stop):
        return c
    if isinstance(ins, Compute):
        value = apply_operation(
            m.structure, ins.f, tuple(c.tape_get(a) for a in ins.args)
        )
        return c.set_tape(ins.z, value).with_label(nxt)
    if isinstance(ins, SetConst):
        return c.set_tape(ins.z, m.structure.constants[ins.c - 1]).with_label(nxt)
    if isinstance(ins, CopyDirect):
        return c.set_tape(ins.dst, c.tape_get(ins.src)).with_label(nxt)
    if isinstance(ins, CopyIndirect):
        dst = c.indices[ins.dst - 1]
        src = c.indices[ins.src - 1]
        return c.set_tape(dst, c.tape_get(src)).with_label(nxt)
    if isinstance(ins, RelBranch):
        holds = test_relation(
            m.structure, ins.r, tuple(c.tape_get(a) for a in ins.args)
        )
        return c.with_label(ins.then_label if holds else ins.else_label)
    if isinstance(ins, IdxBranch):
        # Index registers live in the integers, so their equality test is
        # native and independent of the structure's declared relations.
        holds = c.indices[ins.a - 1] == c.indices[ins.b - 1]
        return c.with_label(ins.then_label if holds else ins.else_label)
    if isinstance(ins, IdxSetOne):
        return c.set_index(ins.j, 1).with_label(nxt)
    if isinstance(ins, IdxInc):
        return c.set_index(ins.j, c.indices[ins.j - 1] + 1).with_label(nxt)
    if isinstance(ins, OracleBranch):
        if m.oracle is None:
            raise MachineError("oracle branch reached but machine has no oracle")
        prefix = tuple(c.tape_get(i) for i in range(1, c.indices[0] + 1))
        holds = m.oracle.member(prefix)
        return c.with_label(ins.then_label if holds else ins.else_label)
    if isinstance(ins, (NuAssign, NdGoto)):
        raise MachineError(
            f"label {c.label}: {type(ins).__name__} is not deterministic; "
            "use the search engines"
        )
    raise MachineError(f"label {c.label}: unknown instruction {ins!r}")


def _run_from(m: Machine, c: Configuration, max_steps: int) -> RunOutcome:
    stop_label = m.stop_label
    steps = 0
    while c.label != stop_label:
        if steps >= max_steps:
            return BudgetExhausted(c, steps)
        c = step(m, c)
        steps += 1
    return Halted(output_o(c), steps, c)


def run(m: Machine, x: tuple, max_steps: int) -> RunOutcome:
    """Run to the stop label or until max_steps transitions are spent."""
    return _run_from(m, input_i1(x, m.k_M), max_steps)


def run_finite(m: Machine, x: tuple, max_steps: int) -> RunOutcome:
    """Run under the finite-machine convention: the output is (Z1) only.

    Finite machines address registers directly and have a fixed-arity
    output map reading the first register; the index vector is inert.
    """
    outcome = _run_from(m, input_i1(x, m.k_M), max_steps)
    if isinstance(outcome, Halted):
        return Halted((outcome.final.tape_get(1),), outcome.steps, outcome.final)
    return outcome


def trace(m: Machine, x: tuple, max_steps: int) -> list[Configuration]:
    """Configuration sequence from input through halt (or budget)."""
    c = input_i1(x, m.k_M)
    out = [c]
    stop_label = m.stop_label
    steps = 0
    while c.label != stop_label and steps < max_steps:
        c = step(m, c)
        out.append(c)
        steps += 1
    return out


def format_configuration(c: Configuration, s: Structure) -> str:
    """One line: `label | indices | tape prefix | tail=⟨element⟩`.

    The printed prefix is truncated at the last position whose value
    differs from the tail default.
    """
    shown = len(c.prefix)
    while shown > 0 and c.prefix[shown - 1] == c.tail:
        shown -= 1
    cells = ",".join(s.render(v) for v in c.prefix[:shown])
    indices = ",".join(str(v) for v in c.indices)
    return f"{c.label} | {indices} | {cells} | tail=⟨{s.render(c.tail)}⟩"


def format_trace(configurations: list[Configuration], s: Structure) -> str:
    return "\n".join(format_configuration(c, s) for c in configurations)
