"""Instruction AST, program wellformedness checks, and the decrement macro.

A program is a list of instructions labeled 1..l_P by position, with
exactly one stop instruction, in the last position.  Eleven instruction
variants exist; see the parser module for their concrete syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from bssram.structures import Signature

__all__ = [
    "Compute",
    "SetConst",
    "CopyDirect",
    "CopyIndirect",
    "RelBranch",
    "IdxBranch",
    "IdxSetOne",
    "IdxInc",
    "Stop",
    "OracleBranch",
    "NuAssign",
    "NdGoto",
    "Instruction",
    "Program",
    "ValidationReport",
    "validate_program",
    "compute_kP",
    "emit_decrement",
]


@dataclass(frozen=True)
class Compute:
    """Zz := ff^m(args) - apply operation f to the named Z-registers."""

    z: int
    f: int
    args: tuple[int, ...]


@dataclass(frozen=True)
class SetConst:
    """Zz := cc^0 - write constant c."""

    z: int
    c: int


@dataclass(frozen=True)
class CopyDirect:
    """Zdst := Zsrc - copy between directly addressed registers."""

    dst: int
    src: int


@dataclass(frozen=True)
class CopyIndirect:
    """Z[Idst] := Z[Isrc] - copy between indirectly addressed registers."""

    dst: int
    src: int


@dataclass(frozen=True)
class RelBranch:
    """if rr^k(args) then goto then_label else goto else_label."""

    r: int
    args: tuple[int, ...]
    then_label: int
    else_label: int


@dataclass(frozen=True)
class IdxBranch:
    """if Ia = Ib then goto then_label else goto else_label."""

    a: int
    b: int
    then_label: int
    else_label: int


@dataclass(frozen=True)
class IdxSetOne:
    """Ij := 1."""

    j: int


@dataclass(frozen=True)
class IdxInc:
    """Ij := Ij + 1."""

    j: int


@dataclass(frozen=True)
class Stop:
    """stop - absorbing halt instruction."""


@dataclass(frozen=True)
class OracleBranch:
    """if (Z1,...,Z[I1]) in O then goto then_label else goto else_label."""

    then_label: int
    else_label: int


@dataclass(frozen=True)
class NuAssign:
    """Zz := nu[O](Z1,...,Z[I1]) - multi-valued assignment from the oracle."""

    z: int


@dataclass(frozen=True)
class NdGoto:
    """goto a or goto b - non-deterministic branch."""

    a: int
    b: int


Instruction = Union[
    Compute, SetConst, CopyDirect, CopyIndirect, RelBranch, IdxBranch,
    IdxSetOne, IdxInc, Stop, OracleBranch, NuAssign, NdGoto,
]

# Instructions allowed in finite machines: direct register access only.
_FINITE_OK = (Compute, SetConst, CopyDirect, RelBranch, Stop)


@dataclass(frozen=True)
class Program:
    """A labeled instruction list; position i holds the label-(i+1) instruction.

    declared_signature is the optional header signature pinned in the
    source text; when absent, the minimal signature covering every used
    index is inferred on demand (unused lower op/rel indices get arity 1).
    """

    instructions: tuple[Instruction, ...]
    declared_signature: Optional[Signature] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def stop_label(self) -> int:
        return len(self.instructions)

    @property
    def signature(self) -> Signature:
        if self.declared_signature is not None:
            return self.declared_signature
        return infer_signature(self)


def infer_signature(p: Program) -> Signature:
    """Minimal signature covering the program's constant/op/rel uses."""
    n1 = 0
    op_ar: dict[int, int] = {}
    rel_ar: dict[int, int] = {}
    for ins in p.instructions:
        if isinstance(ins, SetConst):
            n1 = max(n1, ins.c)
        elif isinstance(ins, Compute):
            op_ar.setdefault(ins.f, len(ins.args))
        elif isinstance(ins, RelBranch):
            rel_ar.setdefault(ins.r, len(ins.args))
    n2 = max(op_ar, default=0)
    n3 = max(rel_ar, default=0)
    return Signature(
        n1,
        tuple(op_ar.get(i, 1) for i in range(1, n2 + 1)),
        tuple(rel_ar.get(i, 1) for i in range(1, n3 + 1)),
    )


@dataclass
class ValidationReport:
    """Result of validate_program: derived measures plus any errors."""

    k_P: int = 1
    j_max: int = 0
    uses: dict[str, bool] = field(
        default_factory=lambda: {
            "oracle": False, "nu": False, "branch": False, "indirect": False,
        }
    )
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _i_indices(ins: Instruction) -> tuple[int, ...]:
    if isinstance(ins, CopyIndirect):
        return (ins.dst, ins.src)
    if isinstance(ins, IdxBranch):
        return (ins.a, ins.b)
    if isinstance(ins, (IdxSetOne, IdxInc)):
        return (ins.j,)
    return ()


def _z_indices(ins: Instruction) -> tuple[int, ...]:
    if isinstance(ins, Compute):
        return (ins.z, *ins.args)
    if isinstance(ins, SetConst):
        return (ins.z,)
    if isinstance(ins, CopyDirect):
        return (ins.dst, ins.src)
    if isinstance(ins, RelBranch):
        return ins.args
    if isinstance(ins, NuAssign):
        return (ins.z,)
    return ()


def _goto_targets(ins: Instruction) -> tuple[int, ...]:
    if isinstance(ins, (RelBranch, IdxBranch, OracleBranch)):
        return (ins.then_label, ins.else_label)
    if isinstance(ins, NdGoto):
        return (ins.a, ins.b)
    return ()


def compute_kP(p: Program) -> int:
    """Smallest k0 bounding every index-register name in p (1 when none occur)."""
    k = 1
    for ins in p.instructions:
        for j in _i_indices(ins):
            k = max(k, j)
    return k


def validate_program(p: Program, s: Signature, mode: str = "infinite") -> ValidationReport:
    """Check p against signature s; errors are reported, never raised.

    mode "finite" admits only directly addressed computation, constant
    assignment, direct copies, relation branches, and stop; mode
    "infinite" admits everything but rejects programs mixing more than one
    of the oracle-branch / nu-assignment / non-deterministic-goto families.
    """
    if mode not in ("finite", "infinite"):
        raise ValueError(f"unknown validation mode {mode!r}")
    report = ValidationReport()
    errors = report.errors
    n = len(p.instructions)

    if n == 0:
        errors.append("program is empty")
        return report

    stop_labels = [i + 1 for i, ins in enumerate(p.instructions) if isinstance(ins, Stop)]
    if len(stop_labels) == 0:
        errors.append("program has no stop instruction")
    elif len(stop_labels) > 1:
        errors.append(f"multiple stop instructions at labels {stop_labels}")
    elif stop_labels[0] != n:
        errors.append(f"stop instruction at label {stop_labels[0]} is not last")

    for pos, ins in enumerate(p.instructions):
        label = pos + 1
        where = f"label {label}"

        for j in _i_indices(ins):
            if j < 1:
                errors.append(f"{where}: index-register name I{j} must be >= 1")
            report.k_P = max(report.k_P, j)
        for z in _z_indices(ins):
            if z < 1:
                errors.append(f"{where}: Z-register name Z{z} must be >= 1")
            report.j_max = max(report.j_max, z)
        for target in _goto_targets(ins):
            if not 1 <= target <= n:
                errors.append(f"{where}: goto target {target} out of range 1..{n}")

        if isinstance(ins, Compute):
            if not 1 <= ins.f <= s.n2:
                errors.append(f"{where}: op index f{ins.f} out of range (n2 = {s.n2})")
            elif len(ins.args) != s.op_arities[ins.f - 1]:
                errors.append(
                    f"{where}: f{ins.f} has arity {s.op_arities[ins.f - 1]}, "
                    f"got {len(ins.args)} arguments"
                )
        elif isinstance(ins, SetConst):
            if not 1 <= ins.c <= s.n1:
                errors.append(f"{where}: constant index c{ins.c} out of range (n1 = {s.n1})")
        elif isinstance(ins, RelBranch):
            if not 1 <= ins.r <= s.n3:
                errors.append(f"{where}: rel index r{ins.r} out of range (n3 = {s.n3})")
            elif len(ins.args) != s.rel_arities[ins.r - 1]:
                errors.append(
                    f"{where}: r{ins.r} has arity {s.rel_arities[ins.r - 1]}, "
                    f"got {len(ins.args)} arguments"
                )
        elif isinstance(ins, OracleBranch):
            report.uses["oracle"] = True
        elif isinstance(ins, NuAssign):
            report.uses["nu"] = True
        elif isinstance(ins, NdGoto):
            report.uses["branch"] = True
        elif isinstance(ins, CopyIndirect):
            report.uses["indirect"] = True

        if mode == "finite" and not isinstance(ins, _FINITE_OK):
            errors.append(
                f"{where}: {type(ins).__name__} is not allowed in a finite machine"
            )

    families = [name for name in ("oracle", "nu", "branch") if report.uses[name]]
    if len(families) > 1:
        errors.append(
            "program mixes instruction families with no common machine class: "
            + " and ".join(families)
        )
    return report


def emit_decrement(target: int, aux1: int, aux2: int, base: int) -> list[Instruction]:
    """Expand the pseudo instruction Itarget := Itarget - 1.

    Emits 11 instructions labeled base..base+10 using only index
    instructions; control falls out at base+11.  aux1 counts 1,2,... while
    aux2 runs one ahead until it reaches the target's value, so aux1 ends
    at value-1; the tail then recounts target up to aux1.  The emitted
    layout:

        base+0:  Iaux1 := 1
        base+1:  Iaux2 := 1
        base+2:  Iaux2 := Iaux2 + 1
        base+3:  if Iaux2 = Itarget then goto base+7 else goto base+4
        base+4:  Iaux1 := Iaux1 + 1
        base+5:  Iaux2 := Iaux2 + 1
        base+6:  if Iaux2 = Itarget then goto base+7 else goto base+4
        base+7:  Itarget := 1
        base+8:  if Itarget = Iaux1 then goto base+11 else goto base+9
        base+9:  Itarget := Itarget + 1
        base+10: if Itarget = Iaux1 then goto base+11 else goto base+9

    Requires the target's runtime value to be >= 2; at value 1 the first
    loop never terminates (aux2 only grows), so the machine diverges.
    """
    if len({target, aux1, aux2}) != 3:
        raise ValueError("target, aux1, aux2 must be pairwise distinct")
    if min(target, aux1, aux2) < 1:
        raise ValueError("index-register names must be >= 1")
    return [
        IdxSetOne(aux1),
        IdxSetOne(aux2),
        IdxInc(aux2),
        IdxBranch(aux2, target, base + 7, base + 4),
        IdxInc(aux1),
        IdxInc(aux2),
        IdxBranch(aux2, target, base + 7, base + 4),
        IdxSetOne(target),
        IdxBranch(target, aux1, base + 11, base + 9),
        IdxInc(target),
        IdxBranch(target, aux1, base + 11, base + 9),
    ]
