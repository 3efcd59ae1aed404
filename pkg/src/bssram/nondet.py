"""Non-deterministic semantics: guessing, branching, and the nu-operator.

The machine classes differ in where choice enters: guessing machines
receive extra tape values from the input procedure, branching machines
fork on `goto a or goto b`, and nu-machines receive any first component of
a tuple extending the query prefix into the oracle.  Acceptance means some
choice leads to the stop label.  The engines here realize acceptance with
finite budgets through fixed, documented dovetailing schedules, so results
are reproducible; a negative answer is always reported as NotWithinBudget,
never as a claim of divergence.

Canonical guess order is shortlex: by tuple length, then componentwise by
enumerator index (for digital guessing: over the designated constant pair,
first constant before second).  The empty tuple comes first.  Over an
infinite universe the length-1 block never ends, so longer tuples are
never reached; machines needing several guesses from an infinite universe
should be searched through their branching or nu forms instead.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product
from typing import Callable, Optional, Union

from bssram.machine import (
    BudgetExhausted, Configuration, Halted, Machine, MachineError, RunOutcome,
    input_i1, output_o, step, _run_from,
)
from bssram.program import NdGoto, NuAssign
from bssram.structures import Structure, enumerate_universe

__all__ = [
    "OracleSet",
    "Accepted",
    "NotWithinBudget",
    "SearchOutcome",
    "CompareRow",
    "input_i2",
    "search_nd",
    "search_branch",
    "search_nu",
    "eval_nu",
    "replay_nd",
    "replay_branch",
    "replay_nu",
    "compare_halting",
    "BUILTIN_ORACLES",
    "oracle_from_lines",
]


@dataclass(frozen=True)
class OracleSet:
    """A set Q of element tuples, given by a total membership predicate.

    witnesses, when provided, short-circuits nu-evaluation: called with a
    query prefix and a bound, it returns (y1, extension) pairs such that
    member(prefix + extension) holds and extension[0] == y1.
    """

    member: Callable[[tuple], bool]
    witnesses: Optional[Callable[[tuple, int], list]] = None
    name: str = "oracle"


@dataclass(frozen=True)
class Accepted:
    """Some choice reached stop; witness is engine-specific, replayable
    evidence and steps counts the transitions of the accepting run."""

    witness: object
    steps: int


@dataclass(frozen=True)
class NotWithinBudget:
    """No acceptance found within the budget (no claim of divergence)."""


SearchOutcome = Union[Accepted, NotWithinBudget]


def input_i2(x: tuple, guesses: tuple, k_m: int) -> Configuration:
    """ND input: guesses follow the input at Z_{n+1}.., tail stays x_n."""
    x = tuple(x)
    if not x:
        raise MachineError("input tuple must be non-empty")
    if k_m < 1:
        raise MachineError("machines have at least one index register")
    return Configuration(1, (len(x),) + (1,) * (k_m - 1), x + tuple(guesses), x[-1])


def _uses(m: Machine) -> dict:
    return m._report.uses


def _forbid(m: Machine, engine: str, *features: str) -> None:
    names = {
        "oracle": "oracle branches",
        "nu": "nu-assignments",
        "branch": "non-deterministic gotos",
    }
    for feature in features:
        if _uses(m)[feature]:
            raise MachineError(
                f"engine {engine!r} cannot run a program with {names[feature]}"
            )


def _guess_tuples(s: Structure, mode: str):
    if mode == "dnd":
        if s.designated_pair is None:
            raise MachineError(
                f"structure {s.name} has no designated constant pair for digital guessing"
            )
        pool: list = list(s.designated_pair)
    else:
        if s.enumerator is None:
            raise MachineError(f"structure {s.name} has no enumerator")
        pool = None
    yield ()
    if pool is None and s.universe_size is None:
        for i in count(1):
            yield (enumerate_universe(s, i),)
        return
    if pool is None:
        pool = [enumerate_universe(s, i) for i in range(1, s.universe_size + 1)]
    for length in count(1):
        yield from product(pool, repeat=length)


def search_nd(m: Machine, x: tuple, budget: int, mode: str = "nd") -> SearchOutcome:
    """Dovetailing guess search: round t runs the first t guess tuples for
    t steps each; rounds run 1..budget.

    Returns Accepted(witness=guess tuple, steps=halting step count) for
    the first success in schedule order.  The schedule is evaluated
    incrementally (each tuple's configuration is cached between rounds)
    and a tuple whose next configuration equals its current one is
    discarded: a deterministic self-loop can never reach stop.  Outcomes
    equal the literal schedule's.
    """
    if mode not in ("nd", "dnd"):
        raise MachineError(f"unknown guess mode {mode!r}")
    _forbid(m, mode, "nu", "branch")
    x = tuple(x)
    stop_label = m.stop_label
    gen = _guess_tuples(m.structure, mode)
    entries: list[dict] = []
    alive: list[int] = []

    for t in range(1, budget + 1):
        g = next(gen)
        c = input_i2(x, g, m.k_M)
        if c.label == stop_label:
            return Accepted(g, 0)
        entries.append({"g": g, "config": c, "steps": 0})
        current = alive + [t - 1]
        alive = []
        for i in current:
            e = entries[i]
            c = e["config"]
            dead = False
            while e["steps"] < t:
                n = step(m, c)
                if n.label == stop_label:
                    return Accepted(e["g"], e["steps"] + 1)
                if n == c:
                    dead = True
                    break
                c = n
                e["steps"] += 1
            e["config"] = c
            if not dead:
                alive.append(i)
    return NotWithinBudget()


def replay_nd(m: Machine, x: tuple, guesses: tuple, max_steps: int) -> RunOutcome:
    """Deterministic re-run of a guess witness."""
    return _run_from(m, input_i2(x, guesses, m.k_M), max_steps)


def search_branch(m: Machine, x: tuple, depth_budget: int) -> SearchOutcome:
    """Breadth-first exploration of the branching computation tree.

    NdGoto nodes fork, then-branch enqueued first; everything else follows
    the deterministic step.  Accepted carries the branch-choice bit string
    ('0' = then) of the first stop configuration in BFS order, and steps is
    its depth.  Previously seen configurations are not re-enqueued; the
    earlier copy dominates in BFS order, so the first acceptance (and its
    tie-broken witness) is unchanged.
    """
    _forbid(m, "branch", "oracle", "nu")
    x = tuple(x)
    stop_label = m.stop_label
    c0 = input_i1(x, m.k_M)
    if c0.label == stop_label:
        return Accepted("", 0)
    seen = {c0}
    frontier: list[tuple[Configuration, str]] = [(c0, "")]
    depth = 0
    while frontier and depth < depth_budget:
        depth += 1
        nxt: list[tuple[Configuration, str]] = []
        for c, bits in frontier:
            ins = m.program.instructions[c.label - 1]
            if isinstance(ins, NdGoto):
                children = (
                    (c.with_label(ins.a), bits + "0"),
                    (c.with_label(ins.b), bits + "1"),
                )
            else:
                children = ((step(m, c), bits),)
            for child, child_bits in children:
                if child.label == stop_label:
                    return Accepted(child_bits, depth)
                if child not in seen:
                    seen.add(child)
                    nxt.append((child, child_bits))
        frontier = nxt
    return NotWithinBudget()


def replay_branch(m: Machine, x: tuple, choices: str, max_steps: int) -> RunOutcome:
    """Deterministic re-run resolving each NdGoto by the recorded bits."""
    c = input_i1(tuple(x), m.k_M)
    stop_label = m.stop_label
    bits = iter(choices)
    depth = 0
    while c.label != stop_label:
        if depth >= max_steps:
            return BudgetExhausted(c, depth)
        ins = m.program.instructions[c.label - 1]
        if isinstance(ins, NdGoto):
            bit = next(bits, None)
            if bit not in ("0", "1"):
                raise MachineError("choice string exhausted or malformed")
            c = c.with_label(ins.a if bit == "0" else ins.b)
        else:
            c = step(m, c)
        depth += 1
    return Halted(output_o(c), depth, c)


def _eval_nu_pairs(
    q: OracleSet,
    structure: Optional[Structure],
    prefix: tuple,
    bound: int,
    max_tests: Optional[int],
) -> tuple[Optional[list], int]:
    """Collect (y1, extension) pairs; returns (pairs, tests spent).

    pairs is None when max_tests ran out before the enumeration finished.
    """
    if q.witnesses is not None:
        raw = list(q.witnesses(prefix, bound))
        pairs = []
        seen = []
        for y1, ext in raw:
            if y1 not in seen:
                seen.append(y1)
                pairs.append((y1, tuple(ext)))
        return pairs, max(1, len(raw))
    if structure is None or structure.enumerator is None:
        raise MachineError(
            "nu-evaluation needs an enumerable structure or an oracle with witnesses"
        )
    top = bound
    if structure.universe_size is not None:
        top = min(top, structure.universe_size)
    pool = [enumerate_universe(structure, i) for i in range(1, top + 1)]
    pairs = []
    seen = []
    tests = 0
    for length in range(1, bound + 1):
        for y in product(pool, repeat=length):
            if max_tests is not None and tests >= max_tests:
                return None, tests
            tests += 1
            if q.member(prefix + y):
                if y[0] not in seen:
                    seen.append(y[0])
                    pairs.append((y[0], y))
    return pairs, tests


def eval_nu(
    q: OracleSet, prefix: tuple, bound: int, structure: Optional[Structure] = None
) -> list:
    """Candidates y1 extendable into q within the bound, discovery order.

    Without a witnesses procedure the extensions y (1 <= |y| <= bound,
    component enumerator indices <= bound) are tried in shortlex order, so
    a structure with an enumerator must be supplied.  That extension set
    holds bound + bound^2 + ... + bound^bound tuples, every one of which
    is tested: keep the bound small (the search engine instead budgets
    the tests and grows its per-node bound one step at a time).
    """
    if bound < 1:
        raise MachineError("bound must be >= 1")
    pairs, _ = _eval_nu_pairs(q, structure, tuple(prefix), bound, None)
    return [y1 for y1, _ext in pairs]


def search_nu(m: Machine, x: tuple, budget: int) -> SearchOutcome:
    """Breadth-first search with a work-unit budget.

    Each deterministic transition and each oracle membership test costs
    one unit.  A nu-node expands into one child per candidate from
    eval_nu at the node's own bound; with no candidates the node rejoins
    the back of the queue with the bound raised by one (bounds start at
    2), so a genuinely empty nu-set burns budget instead of halting the
    search.  Accepted carries the (y1, extension) choices in order.
    """
    _forbid(m, "nu", "oracle", "branch")
    x = tuple(x)
    stop_label = m.stop_label
    c0 = input_i1(x, m.k_M)
    if c0.label == stop_label:
        return Accepted((), 0)
    work = 0
    frontier = deque([(c0, (), 0, 2)])  # config, choices, steps, nu-bound
    while frontier and work < budget:
        c, choices, steps, bound = frontier.popleft()
        ins = m.program.instructions[c.label - 1]
        if isinstance(ins, NuAssign):
            prefix = tuple(c.tape_get(i) for i in range(1, c.indices[0] + 1))
            pairs, tests = _eval_nu_pairs(
                m.oracle, m.structure, prefix, bound, budget - work
            )
            work += tests
            if pairs is None:
                return NotWithinBudget()
            if not pairs:
                frontier.append((c, choices, steps, bound + 1))
                continue
            for y1, ext in pairs:
                child = c.set_tape(ins.z, y1).with_label(c.label + 1)
                child_choices = choices + ((y1, ext),)
                if child.label == stop_label:
                    return Accepted(child_choices, steps + 1)
                frontier.append((child, child_choices, steps + 1, 2))
        else:
            work += 1
            child = step(m, c)
            if child.label == stop_label:
                return Accepted(choices, steps + 1)
            if child == c:
                continue  # deterministic self-loop can never halt
            frontier.append((child, choices, steps + 1, bound))
    return NotWithinBudget()


def replay_nu(m: Machine, x: tuple, choices: tuple, max_steps: int) -> RunOutcome:
    """Re-run a nu witness, checking each recorded choice against the oracle."""
    c = input_i1(tuple(x), m.k_M)
    stop_label = m.stop_label
    remaining = list(choices)
    steps = 0
    while c.label != stop_label:
        if steps >= max_steps:
            return BudgetExhausted(c, steps)
        ins = m.program.instructions[c.label - 1]
        if isinstance(ins, NuAssign):
            if not remaining:
                raise MachineError("recorded nu-choices exhausted")
            y1, ext = remaining.pop(0)
            ext = tuple(ext)
            if not ext or ext[0] != y1:
                raise MachineError("recorded extension does not start with the choice")
            prefix = tuple(c.tape_get(i) for i in range(1, c.indices[0] + 1))
            if m.oracle is None or not m.oracle.member(prefix + ext):
                raise MachineError("recorded nu-choice is not justified by the oracle")
            c = c.set_tape(ins.z, y1).with_label(c.label + 1)
        else:
            c = step(m, c)
        steps += 1
    return Halted(output_o(c), steps, c)


# --- empirical comparison harness ---------------------------------------


@dataclass(frozen=True)
class CompareRow:
    x: tuple
    outcome1: object
    outcome2: object
    verdict: str  # agree | M1-only | M2-only | both-unknown


_ENGINES = ("run", "nd", "dnd", "branch", "nu")


def _launch(m: Machine, engine: str, x: tuple, budget: int):
    if engine == "run":
        from bssram.machine import run

        return run(m, x, budget)
    if engine == "nd":
        return search_nd(m, x, budget, "nd")
    if engine == "dnd":
        return search_nd(m, x, budget, "dnd")
    if engine == "branch":
        return search_branch(m, x, budget)
    if engine == "nu":
        return search_nu(m, x, budget)
    raise MachineError(f"unknown engine {engine!r} (expected one of {_ENGINES})")


def compare_halting(
    m1: tuple[Machine, str],
    m2: tuple[Machine, str],
    inputs: list[tuple],
    budget: int,
) -> list[CompareRow]:
    """Per-input acceptance comparison of two machine+engine pairs.

    Acceptance means Halted or Accepted within the budget; anything else
    counts as unknown, never as rejection.  Both machines must share a
    structure.
    """
    machine1, engine1 = m1
    machine2, engine2 = m2
    s1, s2 = machine1.structure, machine2.structure
    if s1.name != s2.name or s1.signature != s2.signature:
        raise MachineError("compare_halting requires machines over the same structure")
    rows = []
    for x in inputs:
        o1 = _launch(machine1, engine1, tuple(x), budget)
        o2 = _launch(machine2, engine2, tuple(x), budget)
        a1 = isinstance(o1, (Halted, Accepted))
        a2 = isinstance(o2, (Halted, Accepted))
        if a1 and a2:
            verdict = "agree"
        elif a1:
            verdict = "M1-only"
        elif a2:
            verdict = "M2-only"
        else:
            verdict = "both-unknown"
        rows.append(CompareRow(tuple(x), o1, o2, verdict))
    return rows


# --- built-in oracle sets -------------------------------------------------


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _nonneg_member(t: tuple) -> bool:
    return len(t) == 1 and _is_rational(t[0]) and t[0] >= 0


def _squares_member(t: tuple) -> bool:
    return (
        len(t) == 2
        and _is_rational(t[0])
        and _is_rational(t[1])
        and t[0] == t[1] * t[1]
    )


BUILTIN_ORACLES = {
    "nonneg-singletons": OracleSet(_nonneg_member, name="nonneg-singletons"),
    "squares-pairs": OracleSet(_squares_member, name="squares-pairs"),
    "universal": OracleSet(lambda t: True, name="universal"),
    "empty": OracleSet(lambda t: False, name="empty"),
}


def oracle_from_lines(lines, structure: Structure) -> OracleSet:
    """Finite oracle from text: one member tuple per line, comma-separated
    elements in the structure's syntax; '#' comments and blanks ignored."""
    if structure.parse_element is None:
        raise MachineError(f"structure {structure.name} has no element syntax")
    members = set()
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        members.add(tuple(structure.parse_element(p) for p in line.split(",")))
    return OracleSet(lambda t: t in members, name="finite-oracle")
