import pytest

from bssram.boolpda import (
    accepts_formula, accepts_prefix, build_formula_machine, formula_machine,
    run_formula,
)
from bssram.encodings import formula_input, infix_to_prefix
from bssram.machine import input_i1
from bssram.program import compute_kP, validate_program
from bssram.programs import load
from bssram.structures import Signature

from conftest import WORKED_FORMULA, eval_infix, formulas_up_to_depth, sample_formulas


def test_shipped_listing_matches_the_builder():
    assert load("boolpda") == build_formula_machine()


def test_builder_output_validates():
    p = build_formula_machine()
    m = formula_machine()
    report = validate_program(p, Signature(15, (), (2,)), "infinite")
    assert report.ok, report.errors
    assert compute_kP(p) == 9
    assert m.k_M == 9


def test_accepts_true_formulas():
    assert accepts_formula("1")
    assert accepts_formula("¬0")
    assert accepts_formula("(0∨1)")
    assert accepts_formula("(0↔0)")
    assert not accepts_formula("0")
    assert not accepts_formula("(1∧0)")
    assert not accepts_formula("¬(0↔0)")


def test_rejects_malformed_text():
    for bad in ["", "1∧0", "((1∧0)", "(∧1)", "hello"]:
        assert not accepts_formula(bad)


def test_rejects_garbage_prefixes():
    m = formula_machine()
    for junk in [("∧", "1"), ("1", "1"), ("#",), ("¬",), ("q0",),
                 ("∧", "1", "1", "1"), ("Λ", "1")]:
        assert not accepts_prefix(junk)
        status, _, _ = run_formula(input_i1(junk, m.k_M), 100000)
        assert status in ("halted", "diverges")


def test_run_formula_statuses():
    m = formula_machine()
    status, last, steps = run_formula(formula_input("1", m.k_M), 100000)
    assert status == "halted"
    assert last.label == m.stop_label
    assert 0 < steps < 100000

    status, _, _ = run_formula(formula_input("0", m.k_M), 100000)
    assert status == "diverges"  # reject is a detectable self-loop

    status, _, steps = run_formula(formula_input("1", m.k_M), 3)
    assert status == "budget" and steps == 3


def test_worked_formula_prefix_is_accepted():
    p = infix_to_prefix(WORKED_FORMULA)
    assert p == tuple("∧∨∧01¬↔10∨¬∧01↔00")
    assert accepts_prefix(p)


@pytest.mark.parametrize("depth", [0, 1, 2])
def test_machine_agrees_with_evaluator_exhaustively(depth):
    for w in formulas_up_to_depth(depth):
        assert accepts_formula(w) == (eval_infix(w) == 1), w


def test_machine_agrees_on_sampled_deep_formulas():
    for w in sample_formulas():
        assert accepts_formula(w) == (eval_infix(w) == 1), w
