from fractions import Fraction

import pytest

from bssram.structures import (
    BOOL_SYMBOLS, Signature, StructureError, apply_operation,
    enumerate_universe, get_builtin_structure, load_finite_structure,
)
from bssram.structures import test_relation as holds

F = Fraction


def test_signature_text_forms():
    assert str(Signature(2, (2, 2, 2), (2,))) == "(2; 2,2,2; 2)"
    assert str(Signature(15, (), (2,))) == "(15; ; 2)"
    assert str(Signature(1, (1,), (2, 2))) == "(1; 1; 2,2)"


def test_signature_rejects_bad_arities():
    with pytest.raises(StructureError):
        Signature(-1, (), ())
    with pytest.raises(StructureError):
        Signature(1, (0,), ())
    with pytest.raises(StructureError):
        Signature(1, (), (-2,))


def test_builtin_names_and_caching():
    s1 = get_builtin_structure("bit")
    s2 = get_builtin_structure("bit")
    assert s1 is s2
    with pytest.raises(StructureError):
        get_builtin_structure("unknown-x")


def test_bit_structure():
    bit = get_builtin_structure("bit")
    assert bit.signature == Signature(2, (), (2,))
    assert bit.constants == (0, 1)
    assert holds(bit, 1, (0, 0))
    assert not holds(bit, 1, (0, 1))
    assert enumerate_universe(bit, 1) == 0
    assert enumerate_universe(bit, 2) == 1
    with pytest.raises(StructureError):
        enumerate_universe(bit, 3)
    assert bit.designated_pair == (0, 1)


def test_peano_structure():
    peano = get_builtin_structure("peano")
    assert apply_operation(peano, 1, (41,)) == 42
    assert enumerate_universe(peano, 7) == 7
    assert peano.parse_element("12") == 12
    with pytest.raises(StructureError):
        peano.parse_element("0")


def test_rational_field_constants_and_ops():
    rat = get_builtin_structure("rational-field-eq")
    # constants are ordered (1, 0): c1 is the accept value, c2 the reject one
    assert rat.constants == (F(1), F(0))
    assert apply_operation(rat, 1, (F(1), F(2))) == F(3)
    assert apply_operation(rat, 2, (F(1), F(2))) == F(-1)
    assert apply_operation(rat, 3, (F(2, 3), F(3, 2))) == F(1)
    assert holds(rat, 1, (F(1, 2), F(1, 2)))
    assert not holds(rat, 1, (F(1, 2), F(1, 3)))
    with pytest.raises(StructureError):
        apply_operation(rat, 4, (F(1), F(1)))
    with pytest.raises(StructureError):
        apply_operation(rat, 1, (F(1),))


def test_rational_enumeration_first_twenty():
    rat = get_builtin_structure("rational-field-eq")
    want = [
        "0", "1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3", "1/3",
        "-1/3", "4", "-4", "3/2", "-3/2", "2/3", "-2/3", "1/4", "-1/4", "5",
    ]
    got = [rat.render(enumerate_universe(rat, i)) for i in range(1, 21)]
    assert got == want


def test_rational_enumeration_injective():
    rat = get_builtin_structure("rational-field-eq")
    seen = {enumerate_universe(rat, i) for i in range(1, 1001)}
    assert len(seen) == 1000


def test_rational_parse_and_render():
    rat = get_builtin_structure("rational-field-eq")
    for text in ["0", "1", "-1", "3/4", "-7/2", "10"]:
        assert rat.render(rat.parse_element(text)) == text
    with pytest.raises(StructureError):
        rat.parse_element("1.5")
    with pytest.raises(StructureError):
        rat.parse_element("a")


def test_gaussian_structure():
    g = get_builtin_structure("gaussian-rational-field-eq")
    one = g.constants[0]
    zero = g.constants[1]
    imag = g.constants[2]
    assert g.render(one) == "1" and g.render(zero) == "0" and g.render(imag) == "i"
    assert apply_operation(g, 3, (imag, imag)) == (F(-1), F(0))
    assert g.render(apply_operation(g, 1, (g.parse_element("6+i"), g.parse_element("3i")))) == "6+4i"
    for text in ["0", "1", "i", "-1", "-i", "3i", "6+i", "18+4i", "1/2", "1/2-3/4i"]:
        assert g.render(g.parse_element(text)) == text
    with pytest.raises(StructureError):
        g.parse_element("2+")


def test_gaussian_enumeration_injective_and_total():
    g = get_builtin_structure("gaussian-rational-field-eq")
    seen = {enumerate_universe(g, i) for i in range(1, 1001)}
    assert len(seen) == 1000
    assert enumerate_universe(g, 1) == (F(0), F(0))


def test_bool_symbols_structure():
    b = get_builtin_structure("bool-symbols")
    assert b.signature == Signature(15, (), (2,))
    assert b.constants == BOOL_SYMBOLS
    assert len(BOOL_SYMBOLS) == 15
    assert not holds(b, 1, ("q0", "#"))
    assert holds(b, 1, ("∧", "∧"))
    assert b.parse_element("↔") == "↔"
    with pytest.raises(StructureError):
        b.parse_element("x")


def test_operation_totality_over_enumerated_elements():
    for name in ("rational-field-eq", "gaussian-rational-field-eq"):
        s = get_builtin_structure(name)
        pool = [enumerate_universe(s, i) for i in range(1, 51)]
        for op_index in range(1, len(s.signature.op_arities) + 1):
            for a in pool[:10]:
                for b in pool:
                    apply_operation(s, op_index, (a, b))


FINITE_CFG = """\
# two-element structure with a flip op and equality
universe: a b
constants: a b
op flip/1:
a -> b
b -> a
rel same/2:
a a
b b
"""


def test_load_finite_structure():
    s = load_finite_structure(FINITE_CFG)
    assert s.signature == Signature(2, (1,), (2,))
    assert apply_operation(s, 1, ("a",)) == "b"
    assert holds(s, 1, ("b", "b"))
    assert not holds(s, 1, ("a", "b"))
    assert enumerate_universe(s, 1) == "a"
    assert enumerate_universe(s, 2) == "b"
    assert s.designated_pair == ("a", "b")
    assert s.universe_size == 2
    assert s.parse_element("b") == "b"


def test_load_finite_structure_totality_error():
    broken = FINITE_CFG.replace("b -> a\n", "")
    with pytest.raises(StructureError):
        load_finite_structure(broken)


def test_load_finite_structure_unknown_element():
    broken = FINITE_CFG.replace("a a", "a c")
    with pytest.raises(StructureError):
        load_finite_structure(broken)


def test_load_finite_structure_duplicate_element():
    broken = FINITE_CFG.replace("universe: a b", "universe: a b a")
    with pytest.raises(StructureError):
        load_finite_structure(broken)
