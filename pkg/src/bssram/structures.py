"""First-order structures: built-in library and finite-structure loader.

A structure is a universe together with finitely many constants, total
operations, and relations; its signature is the arity profile
(n1; m1..m_n2; k1..k_n3) that programs must match.  Equality is available
to programs only when it is declared as one of the relations.

Element values are canonical hashable Python values: int for the bit and
peano universes, Fraction for rationals, (re, im) Fraction pairs for
gaussian rationals, and str for symbol universes.  Machine semantics only
ever inspects elements through the declared relations; the plain Python
equality of these values is used for rendering, dedup and test oracles.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

__all__ = [
    "Signature",
    "Structure",
    "StructureError",
    "get_builtin_structure",
    "load_finite_structure",
    "apply_operation",
    "test_relation",
    "enumerate_universe",
    "BUILTIN_STRUCTURE_NAMES",
]


class StructureError(ValueError):
    """Bad structure definition, unknown name, or misuse of an operation."""


@dataclass(frozen=True)
class Signature:
    """Arity profile (n1; m1..m_n2; k1..k_n3)."""

    n1: int
    op_arities: tuple[int, ...]
    rel_arities: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n1 < 0:
            raise StructureError("constant count must be >= 0")
        if any(m < 1 for m in self.op_arities):
            raise StructureError("operation arities must be >= 1")
        if any(k < 1 for k in self.rel_arities):
            raise StructureError("relation arities must be >= 1")

    @property
    def n2(self) -> int:
        return len(self.op_arities)

    @property
    def n3(self) -> int:
        return len(self.rel_arities)

    def __str__(self) -> str:
        ops = ",".join(str(m) for m in self.op_arities)
        rels = ",".join(str(k) for k in self.rel_arities)
        return f"({self.n1}; {ops}; {rels})"


@dataclass(frozen=True)
class Structure:
    """A first-order structure: universe plus interpreted symbols.

    ops and rels are total on tuples of universe elements of the declared
    arity.  enumerator, when present, maps n >= 1 to the n-th element of a
    fixed canonical enumeration (injective; for finite universes it is
    defined for n <= universe_size only).  designated_pair supplies the two
    constants used by digital (two-valued) guessing.
    """

    name: str
    signature: Signature
    constants: tuple
    ops: tuple[Callable, ...] = ()
    rels: tuple[Callable, ...] = ()
    enumerator: Optional[Callable[[int], object]] = None
    render: Callable[[object], str] = str
    parse_element: Optional[Callable[[str], object]] = None
    designated_pair: Optional[tuple] = None
    universe_size: Optional[int] = None  # None means infinite

    def __post_init__(self) -> None:
        if len(self.constants) != self.signature.n1:
            raise StructureError("constant list does not match signature")
        if len(self.ops) != self.signature.n2:
            raise StructureError("operation list does not match signature")
        if len(self.rels) != self.signature.n3:
            raise StructureError("relation list does not match signature")


def apply_operation(s: Structure, i: int, args: tuple):
    """Apply the structure's i-th operation (1-based) to args."""
    if not 1 <= i <= s.signature.n2:
        raise StructureError(f"op index f{i} out of range for {s.name}")
    arity = s.signature.op_arities[i - 1]
    if len(args) != arity:
        raise StructureError(f"f{i} expects {arity} arguments, got {len(args)}")
    return s.ops[i - 1](*args)


def test_relation(s: Structure, i: int, args: tuple) -> bool:
    """Test membership of args in the structure's i-th relation (1-based)."""
    if not 1 <= i <= s.signature.n3:
        raise StructureError(f"rel index r{i} out of range for {s.name}")
    arity = s.signature.rel_arities[i - 1]
    if len(args) != arity:
        raise StructureError(f"r{i} expects {arity} arguments, got {len(args)}")
    return bool(s.rels[i - 1](*args))


def enumerate_universe(s: Structure, n: int):
    """Return the n-th element (n >= 1) of the structure's canonical enumeration."""
    if s.enumerator is None:
        raise StructureError(f"structure {s.name} has no enumerator")
    if n < 1:
        raise StructureError("enumeration index must be >= 1")
    if s.universe_size is not None and n > s.universe_size:
        raise StructureError(
            f"structure {s.name} has only {s.universe_size} elements"
        )
    return s.enumerator(n)


# --- rational helpers ---------------------------------------------------

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise StructureError(f"not a rational literal: {text!r}")
    return Fraction(text)


# Zig-zag enumeration of the rationals: 0 first, then for each weight
# |p| + q = 2, 3, ... and each denominator q ascending, the reduced
# fraction p/q positive before negative.  Prefix so far is cached.
_ZIGZAG: list[Fraction] = [Fraction(0)]
_ZIGZAG_WEIGHT = 1


def _rational_zigzag(n: int) -> Fraction:
    global _ZIGZAG_WEIGHT
    while len(_ZIGZAG) < n:
        _ZIGZAG_WEIGHT += 1
        w = _ZIGZAG_WEIGHT
        for q in range(1, w):
            p = w - q
            if math.gcd(p, q) == 1:
                _ZIGZAG.append(Fraction(p, q))
                _ZIGZAG.append(Fraction(-p, q))
    return _ZIGZAG[n - 1]


# --- gaussian rational helpers ------------------------------------------

Gaussian = tuple[Fraction, Fraction]


def _g_add(a: Gaussian, b: Gaussian) -> Gaussian:
    return (a[0] + b[0], a[1] + b[1])


def _g_sub(a: Gaussian, b: Gaussian) -> Gaussian:
    return (a[0] - b[0], a[1] - b[1])


def _g_mul(a: Gaussian, b: Gaussian) -> Gaussian:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _render_gaussian(z: Gaussian) -> str:
    re_part, im_part = z
    if im_part == 0:
        return str(re_part)
    if im_part == 1:
        im_text = "i"
    elif im_part == -1:
        im_text = "-i"
    else:
        im_text = f"{im_part}i"
    if re_part == 0:
        return im_text
    sign = "+" if im_part > 0 else ""
    return f"{re_part}{sign}{im_text}"


# A trailing i-term is split off lazily so "3i" is imaginary-only while
# "6+i" and "1/2-3/4i" keep their real part intact.
_GAUSSIAN_IM_RE = re.compile(r"^(?P<rest>.*?)(?P<imc>[+-]?(?:\d+(?:/\d+)?)?)i$")
_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_gaussian(text: str) -> Gaussian:
    text = text.strip().replace(" ", "")
    m = _GAUSSIAN_IM_RE.match(text)
    if m is None:
        if not _RATIONAL_RE.match(text):
            raise StructureError(f"not a gaussian rational literal: {text!r}")
        return (Fraction(text), Fraction(0))
    rest, imc = m.group("rest"), m.group("imc")
    if rest == "":
        re_part = Fraction(0)
    elif _RATIONAL_RE.match(rest):
        re_part = Fraction(rest)
    else:
        raise StructureError(f"not a gaussian rational literal: {text!r}")
    if imc in ("", "+"):
        im_part = Fraction(1)
    elif imc == "-":
        im_part = Fraction(-1)
    else:
        im_part = Fraction(imc)
    return (re_part, im_part)


def _gaussian_zigzag(n: int) -> Gaussian:
    # Pair the zig-zag with itself through the classic diagonal unpairing,
    # so every (re, im) pair appears exactly once.
    k = n - 1
    d = (math.isqrt(8 * k + 1) - 1) // 2
    j = k - d * (d + 1) // 2
    i = d - j
    return (_rational_zigzag(i + 1), _rational_zigzag(j + 1))


# --- built-in structures -------------------------------------------------


def _eq(a, b) -> bool:
    return a == b


def _make_bit() -> Structure:
    def parse(text: str) -> int:
        text = text.strip()
        if text not in ("0", "1"):
            raise StructureError(f"not a bit: {text!r}")
        return int(text)

    return Structure(
        name="bit",
        signature=Signature(2, (), (2,)),
        constants=(0, 1),
        rels=(_eq,),
        enumerator=lambda n: (0, 1)[n - 1],
        parse_element=parse,
        designated_pair=(0, 1),
        universe_size=2,
    )


def _make_peano() -> Structure:
    def parse(text: str) -> int:
        text = text.strip()
        if not text.isdigit() or int(text) < 1:
            raise StructureError(f"not a positive integer: {text!r}")
        return int(text)

    return Structure(
        name="peano",
        signature=Signature(1, (1,), (2,)),
        constants=(1,),
        ops=(lambda a: a + 1,),
        rels=(_eq,),
        enumerator=lambda n: n,
        parse_element=parse,
    )


def _make_rational_field() -> Structure:
    return Structure(
        name="rational-field-eq",
        signature=Signature(2, (2, 2, 2), (2,)),
        constants=(Fraction(1), Fraction(0)),
        ops=(
            lambda a, b: a + b,
            lambda a, b: a - b,
            lambda a, b: a * b,
        ),
        rels=(_eq,),
        enumerator=_rational_zigzag,
        parse_element=_parse_rational,
        designated_pair=(Fraction(1), Fraction(0)),
    )


def _make_gaussian_field() -> Structure:
    one = (Fraction(1), Fraction(0))
    zero = (Fraction(0), Fraction(0))
    imag = (Fraction(0), Fraction(1))
    return Structure(
        name="gaussian-rational-field-eq",
        signature=Signature(3, (2, 2, 2), (2,)),
        constants=(one, zero, imag),
        ops=(_g_add, _g_sub, _g_mul),
        rels=(_eq,),
        enumerator=_gaussian_zigzag,
        render=_render_gaussian,
        parse_element=_parse_gaussian,
        designated_pair=(one, zero),
    )


# Universe of the Boolean-symbol structure: the two truth values, the four
# connectives, the six unary operator symbols obtained by fixing one
# operand, the empty-word marker, the stack-bottom marker, and the scan
# state.  Every element is a constant, so programs can write any of them.
BOOL_SYMBOLS = (
    "0", "1", "¬", "∧", "∨", "↔",
    "∧0", "∧1", "∨0", "∨1", "↔0", "↔1",
    "Λ", "#", "q0",
)


def _make_bool_symbols() -> Structure:
    def parse(text: str) -> str:
        text = text.strip()
        if text not in BOOL_SYMBOLS:
            raise StructureError(f"unknown symbol: {text!r}")
        return text

    return Structure(
        name="bool-symbols",
        signature=Signature(len(BOOL_SYMBOLS), (), (2,)),
        constants=BOOL_SYMBOLS,
        rels=(_eq,),
        enumerator=lambda n: BOOL_SYMBOLS[n - 1],
        parse_element=parse,
        designated_pair=("0", "1"),
        universe_size=len(BOOL_SYMBOLS),
    )


_BUILTIN_FACTORIES = {
    "bit": _make_bit,
    "peano": _make_peano,
    "rational-field-eq": _make_rational_field,
    "gaussian-rational-field-eq": _make_gaussian_field,
    "bool-symbols": _make_bool_symbols,
}

BUILTIN_STRUCTURE_NAMES = tuple(sorted(_BUILTIN_FACTORIES))

_BUILTIN_CACHE: dict[str, Structure] = {}


def get_builtin_structure(name: str, params: Optional[dict] = None) -> Structure:
    """Return a built-in structure by name.

    The built-ins take no parameters; params exists so unknown keys are
    rejected loudly instead of ignored.  Instances are cached, so repeated
    lookups return the same (immutable) object.
    """
    if name not in _BUILTIN_FACTORIES:
        raise StructureError(
            f"unknown structure {name!r} (available: {', '.join(BUILTIN_STRUCTURE_NAMES)})"
        )
    if params:
        bad = ", ".join(sorted(params))
        raise StructureError(f"structure {name!r} takes no parameters (got: {bad})")
    if name not in _BUILTIN_CACHE:
        _BUILTIN_CACHE[name] = _BUILTIN_FACTORIES[name]()
    return _BUILTIN_CACHE[name]


# --- finite-structure loader ---------------------------------------------

_SECTION_RE = re.compile(
    r"^(universe|constants|(?:op|rel)\s+\S+/\d+)\s*:", re.UNICODE
)
_TABLE_HEADER_RE = re.compile(r"^(op|rel)\s+(\S+)/(\d+)\s*:\s*(.*)$")


def load_finite_structure(config_text: str) -> Structure:
    """Build a finite structure from the line-oriented table format.

    Sections: `universe:` and `constants:` list elements separated by
    whitespace (continuation lines allowed); `op <name>/<arity>:` rows are
    `a b -> c`; `rel <name>/<arity>:` rows are `a b` (listed rows are the
    members).  Section order fixes the op/rel indices.  Every operation
    table must cover each argument tuple exactly once.
    """
    sections: list[tuple[str, str, int, list[str]]] = []  # kind, name, arity, rows
    current: Optional[list[str]] = None
    for lineno, raw in enumerate(config_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if _SECTION_RE.match(line):
            header, _, rest = line.partition(":")
            header = header.strip()
            if header == "universe":
                sections.append(("universe", "", 0, []))
            elif header == "constants":
                sections.append(("constants", "", 0, []))
            else:
                m = _TABLE_HEADER_RE.match(line)
                if m is None:
                    raise StructureError(f"line {lineno}: bad section header {line!r}")
                sections.append((m.group(1), m.group(2), int(m.group(3)), []))
                rest = m.group(4)
            current = sections[-1][3]
            if rest.strip():
                current.append(rest.strip())
        else:
            if current is None:
                raise StructureError(f"line {lineno}: content before any section")
            current.append(line)

    universe: list[str] = []
    constants: list[str] = []
    op_tables: list[tuple[str, int, dict[tuple, str]]] = []
    rel_tables: list[tuple[str, int, set[tuple]]] = []
    seen_universe = False

    for kind, name, arity, rows in sections:
        if kind == "universe":
            if seen_universe:
                raise StructureError("duplicate universe section")
            seen_universe = True
            for row in rows:
                for tok in row.split():
                    if tok in universe:
                        raise StructureError(f"duplicate element name {tok!r}")
                    universe.append(tok)
        elif kind == "constants":
            for row in rows:
                constants.extend(row.split())
        elif kind == "op":
            table: dict[tuple, str] = {}
            for row in rows:
                if "->" not in row:
                    raise StructureError(f"op {name}: row {row!r} lacks '->'")
                lhs, _, rhs = row.partition("->")
                args = tuple(lhs.split())
                results = rhs.split()
                if len(args) != arity or len(results) != 1:
                    raise StructureError(f"op {name}: malformed row {row!r}")
                if args in table:
                    raise StructureError(f"op {name}: duplicate row for {args}")
                table[args] = results[0]
            op_tables.append((name, arity, table))
        else:
            members: set[tuple] = set()
            for row in rows:
                args = tuple(row.split())
                if len(args) != arity:
                    raise StructureError(f"rel {name}: malformed row {row!r}")
                members.add(args)
            rel_tables.append((name, arity, members))

    if not universe:
        raise StructureError("empty or missing universe section")
    elements = set(universe)
    for c in constants:
        if c not in elements:
            raise StructureError(f"constant {c!r} not in universe")

    def check_tuple(owner: str, args: tuple) -> None:
        for a in args:
            if a not in elements:
                raise StructureError(f"{owner}: unknown element {a!r}")

    from itertools import product

    ops = []
    for name, arity, table in op_tables:
        for args, result in table.items():
            check_tuple(f"op {name}", args)
            if result not in elements:
                raise StructureError(f"op {name}: unknown element {result!r}")
        for args in product(universe, repeat=arity):
            if args not in table:
                rendered = ",".join(args)
                raise StructureError(f"op {name} is not total: missing row for ({rendered})")
        ops.append(lambda *args, _t=table: _t[args])

    rels = []
    for name, arity, members in rel_tables:
        for args in members:
            check_tuple(f"rel {name}", args)
        rels.append(lambda *args, _m=members: args in _m)

    universe_t = tuple(universe)

    def parse(text: str) -> str:
        text = text.strip()
        if text not in elements:
            raise StructureError(f"unknown element: {text!r}")
        return text

    return Structure(
        name="finite",
        signature=Signature(
            len(constants),
            tuple(a for _, a, _t in op_tables),
            tuple(a for _, a, _m in rel_tables),
        ),
        constants=tuple(constants),
        ops=tuple(ops),
        rels=tuple(rels),
        enumerator=lambda n: universe_t[n - 1],
        parse_element=parse,
        designated_pair=tuple(constants[:2]) if len(constants) >= 2 else None,
        universe_size=len(universe_t),
    )
