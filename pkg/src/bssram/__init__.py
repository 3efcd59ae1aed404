"""Register machines over first-order structures.

Register machines whose Z-registers hold individuals of an arbitrary
first-order structure (a universe with constants, total operations, and
relations) and whose index registers hold positive integers.  The package
provides the textual program language, the deterministic interpreter with
oracle queries, bounded search engines for the non-deterministic machine
classes (guessing, digital guessing, branching, nu-operator), and the
standard encoders (binary words, interleaved tapes, restricted Cantor
pairing, Boolean prefix formulas).
"""

from bssram.structures import (
    Signature,
    Structure,
    get_builtin_structure,
    load_finite_structure,
    apply_operation,
    test_relation,
    enumerate_universe,
)
from bssram.program import (
    Compute,
    SetConst,
    CopyDirect,
    CopyIndirect,
    RelBranch,
    IdxBranch,
    IdxSetOne,
    IdxInc,
    Stop,
    OracleBranch,
    NuAssign,
    NdGoto,
    Program,
    ValidationReport,
    validate_program,
    compute_kP,
    emit_decrement,
)
from bssram.parser import ParseError, parse_program, format_program
from bssram.machine import (
    Configuration,
    Machine,
    MachineError,
    Halted,
    BudgetExhausted,
    input_i1,
    output_o,
    step,
    run,
    run_finite,
    trace,
    format_configuration,
    format_trace,
)
from bssram.nondet import (
    OracleSet,
    Accepted,
    NotWithinBudget,
    input_i2,
    search_nd,
    search_branch,
    search_nu,
    eval_nu,
    replay_nd,
    replay_branch,
    replay_nu,
    compare_halting,
    BUILTIN_ORACLES,
    oracle_from_lines,
)
from bssram.encodings import (
    cantor,
    cantor_inv,
    bin_word,
    bin_inv,
    in_star,
    out_star,
    in_nat,
    out_nat,
    infix_to_prefix,
    eval_boolean_prefix,
    formula_input,
    LAMBDA,
)

__all__ = [name for name in dir() if not name.startswith("_")]
