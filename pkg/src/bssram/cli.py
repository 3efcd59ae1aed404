"""Command-line front end: run machines, launch searches, use the encoders.

Exit codes follow one contract everywhere: 0 when the machine halted or
the search accepted, 2 when a step or work budget ran out, 1 for every
error (parse, validation, structure, engine mismatch, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from bssram.encodings import (
    LAMBDA, bin_inv, bin_word, cantor, cantor_inv, in_nat, in_star, out_nat,
    out_star,
)
from bssram.machine import (
    BudgetExhausted, Halted, Machine, MachineError, format_configuration,
    format_trace, run, run_finite, trace,
)
from bssram.nondet import (
    BUILTIN_ORACLES, Accepted, NotWithinBudget, oracle_from_lines, search_branch,
    search_nd, search_nu,
)
from bssram.parser import ParseError, parse_program
from bssram.program import validate_program
from bssram.structures import (
    Structure, StructureError, get_builtin_structure, load_finite_structure,
)

_DEFAULT_BUDGET = 10000


def _budget_default() -> int:
    raw = os.environ.get("BSSRAM_MAX_STEPS")
    if raw is None:
        return _DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"BSSRAM_MAX_STEPS must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"BSSRAM_MAX_STEPS must be >= 1, got {value}")
    return value


def _structure_from_args(args) -> Structure:
    if getattr(args, "structure_config", None):
        with open(args.structure_config, encoding="utf-8") as f:
            return load_finite_structure(f.read())
    return get_builtin_structure(args.structure)


def _parse_input(text: str, s: Structure) -> tuple:
    parts = text.split(",")
    if parts == [""]:
        raise ValueError("input tuple must not be empty")
    return tuple(s.parse_element(part.strip()) for part in parts)


def _oracle_from_args(args, s: Structure):
    name = getattr(args, "oracle", None)
    if name is None:
        return None
    if name in BUILTIN_ORACLES:
        return BUILTIN_ORACLES[name]
    with open(name, encoding="utf-8") as f:
        return oracle_from_lines(f.read().splitlines(), s)


def format_elements(values: tuple, s: Structure) -> str:
    return "(" + ",".join(s.render(v) for v in values) + ")"


def _load_machine(args, s: Structure) -> Machine:
    with open(args.program, encoding="utf-8") as f:
        program = parse_program(f.read())
    return Machine(program, s, oracle=_oracle_from_args(args, s))


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, ensure_ascii=False))
    else:
        print(text)


def _cmd_run(args) -> int:
    s = _structure_from_args(args)
    m = _load_machine(args, s)
    x = _parse_input(args.input, s)
    budget = args.max_steps if args.max_steps is not None else _budget_default()

    if args.trace:
        configurations = trace(m, x, budget)
        if not args.json:
            print(format_trace(configurations, s))

    # A program that passes the finite-machine checks follows the finite
    # convention: its output is the single cell Z1.
    finite = validate_program(m.program, s.signature, mode="finite").ok
    outcome = (run_finite if finite else run)(m, x, budget)
    if isinstance(outcome, Halted):
        _emit(
            args,
            {
                "command": "run",
                "status": "halted",
                "output": [s.render(v) for v in outcome.output],
                "steps": outcome.steps,
            },
            format_elements(outcome.output, s),
        )
        return 0
    _emit(
        args,
        {"command": "run", "status": "budget", "steps": outcome.steps},
        f"no stop within {outcome.steps} steps "
        f"(last at instruction {outcome.last.label})",
    )
    return 2


def _witness_record(engine: str, witness, s: Structure):
    if engine in ("nd", "dnd"):
        return [s.render(v) for v in witness]
    if engine == "branch":
        return witness
    return [
        {"choice": s.render(y1), "extension": [s.render(v) for v in ext]}
        for y1, ext in witness
    ]


def _witness_text(engine: str, witness, s: Structure) -> str:
    if engine in ("nd", "dnd"):
        return "guesses " + format_elements(witness, s)
    if engine == "branch":
        return f"choices {witness or '(none)'}"
    picks = ",".join(s.render(y1) for y1, _ext in witness)
    return f"nu-choices ({picks})"


def _cmd_search(args) -> int:
    s = _structure_from_args(args)
    m = _load_machine(args, s)
    x = _parse_input(args.input, s)
    budget = args.budget if args.budget is not None else _budget_default()

    if args.engine == "nd":
        outcome = search_nd(m, x, budget)
    elif args.engine == "dnd":
        outcome = search_nd(m, x, budget, mode="dnd")
    elif args.engine == "branch":
        outcome = search_branch(m, x, budget)
    else:
        outcome = search_nu(m, x, budget)

    if isinstance(outcome, Accepted):
        _emit(
            args,
            {
                "command": "search",
                "engine": args.engine,
                "status": "accepted",
                "witness": _witness_record(args.engine, outcome.witness, s),
                "steps": outcome.steps,
            },
            f"accepted in {outcome.steps} steps, "
            + _witness_text(args.engine, outcome.witness, s),
        )
        return 0
    _emit(
        args,
        {"command": "search", "engine": args.engine, "status": "budget"},
        f"not accepted within budget {budget}",
    )
    return 2


def _cmd_validate(args) -> int:
    s = _structure_from_args(args)
    with open(args.program, encoding="utf-8") as f:
        program = parse_program(f.read())
    report = validate_program(program, s.signature, mode=args.mode)
    record = {
        "command": "validate",
        "ok": report.ok,
        "k_P": report.k_P,
        "j_max": report.j_max,
        "errors": list(report.errors),
    }
    if report.ok:
        _emit(args, record, f"ok: k_P={report.k_P} j_max={report.j_max}")
        return 0
    _emit(args, record, "\n".join(report.errors))
    return 1


def _cmd_encode(args) -> int:
    mode = args.mode
    values = args.values

    def nat(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise ValueError(f"expected an integer, got {text!r}")
        if n < 1:
            raise ValueError(f"expected a positive integer, got {n}")
        return n

    if mode == "cantor":
        if len(values) != 2:
            raise ValueError("cantor takes two positive integers")
        result = cantor(nat(values[0]), nat(values[1]))
        text = str(result)
    elif mode == "cantor-inv":
        if len(values) != 1:
            raise ValueError("cantor-inv takes one integer")
        pair = cantor_inv(nat(values[0]))
        if pair is None:
            raise ValueError(f"{values[0]} is not in the range of the pairing")
        result = list(pair)
        text = f"({pair[0]},{pair[1]})"
    elif mode == "bin":
        if len(values) != 1:
            raise ValueError("bin takes one positive integer")
        result = bin_word(nat(values[0]))
        text = result
    elif mode == "bin-inv":
        if len(values) != 1:
            raise ValueError("bin-inv takes one bit word")
        decoded = bin_inv(values[0])
        if decoded is None:
            raise ValueError(f"{values[0]!r} is not in the range of bin")
        result = decoded
        text = str(decoded)
    elif mode == "in-star":
        if len(values) != 1:
            raise ValueError("in-star takes one bit word")
        c = in_star(values[0])
        result = format_configuration(c, get_builtin_structure("bit"))
        text = result
    else:  # in-nat
        if len(values) != 1:
            raise ValueError("in-nat takes one positive integer")
        c = in_nat(nat(values[0]))
        result = format_configuration(c, get_builtin_structure("bit"))
        text = result

    _emit(args, {"command": "encode", "mode": mode, "result": result}, text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bssram",
        description="Run, search, and encode for register machines over "
        "first-order structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        p.add_argument("program", help="path to a .bssram program file")
        p.add_argument(
            "--structure",
            default="rational-field-eq",
            help="built-in structure name (default: rational-field-eq)",
        )
        p.add_argument(
            "--structure-config",
            help="finite-structure config file (overrides --structure)",
        )
        if with_input:
            p.add_argument(
                "--input", required=True, help="comma-separated input tuple"
            )
        p.add_argument(
            "--oracle",
            help="oracle: built-in name ("
            + ", ".join(sorted(BUILTIN_ORACLES))
            + ") or a file of member tuples",
        )
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p_run = sub.add_parser("run", help="run a deterministic machine")
    common(p_run)
    p_run.add_argument(
        "--max-steps",
        type=int,
        help="step budget (default: BSSRAM_MAX_STEPS or 10000)",
    )
    p_run.add_argument(
        "--trace", action="store_true", help="print the configuration sequence"
    )
    p_run.set_defaults(func=_cmd_run)

    p_search = sub.add_parser("search", help="bounded non-deterministic search")
    common(p_search)
    p_search.add_argument(
        "--engine",
        choices=("nd", "dnd", "branch", "nu"),
        default="nd",
        help="guess search, digital guess search, branching search, or nu search",
    )
    p_search.add_argument(
        "--budget",
        type=int,
        help="search budget (default: BSSRAM_MAX_STEPS or 10000)",
    )
    p_search.set_defaults(func=_cmd_search)

    p_validate = sub.add_parser("validate", help="check a program against a structure")
    common(p_validate, with_input=False)
    p_validate.add_argument(
        "--mode",
        choices=("finite", "infinite"),
        default="infinite",
        help="validation mode (finite machines allow fewer instruction types)",
    )
    p_validate.set_defaults(func=_cmd_validate)

    p_encode = sub.add_parser("encode", help="number/word/tape encoders")
    p_encode.add_argument(
        "--mode",
        required=True,
        choices=("cantor", "cantor-inv", "bin", "bin-inv", "in-star", "in-nat"),
    )
    p_encode.add_argument("values", nargs="+", help="mode arguments")
    p_encode.add_argument("--json", action="store_true")
    p_encode.set_defaults(func=_cmd_encode)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, StructureError, MachineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
