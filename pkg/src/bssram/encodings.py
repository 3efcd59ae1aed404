"""Encoders: Cantor pairing, binary words, interleaved bit tapes, and
Boolean prefix formulas with a reference evaluator.

Conventions.  Binary words are written most significant bit first, so
bin_word(6) = "110" encodes x1=0, x2=1, x3=1 with value sum x_i 2^(i-1).
The tape encoding interleaves a 0 marker before each bit and closes with
an all-ones tail: in_star("110") gives tape (0,0,0,1,0,1) with tail 1 and
the first index register at 6.  LAMBDA (the empty word) is the decode of
a tape whose first marker slot is already 1.
"""

from __future__ import annotations

import math
from typing import Optional

from bssram.machine import Configuration, input_i1

__all__ = [
    "cantor",
    "cantor_inv",
    "bin_word",
    "bin_inv",
    "in_star",
    "out_star",
    "in_nat",
    "out_nat",
    "infix_to_prefix",
    "eval_boolean_prefix",
    "formula_input",
    "LAMBDA",
    "MALFORMED",
    "CONNECTIVES",
]

LAMBDA = ""  # the empty word, decode of an immediately-terminated tape
MALFORMED = None  # infix_to_prefix's marker for rejected formula text


def cantor(a: int, b: int) -> int:
    """Restricted Cantor pairing ((a+b)^2 + 3b + a) / 2 on positive pairs."""
    if a < 1 or b < 1:
        raise ValueError("cantor is defined on positive integers")
    total = (a + b) * (a + b) + 3 * b + a
    return total // 2


def cantor_inv(c: int) -> Optional[tuple[int, int]]:
    """The unique (a, b) with cantor(a, b) = c, or None when c is not attained.

    With s = a + b, 2c = s^2 + s + 2b and 1 <= b <= s - 1, which pins s
    because consecutive s give disjoint value ranges.
    """
    if c < 1:
        return None
    for s in range(2, math.isqrt(2 * c) + 1):
        t = 2 * c - s * s - s
        if t < 2:
            continue
        if t % 2 == 0:
            b = t // 2
            if b <= s - 1:
                return (s - b, b)
    return None


def bin_word(n: int) -> str:
    """Binary word of a positive integer, leading bit 1."""
    if n < 1:
        raise ValueError("bin is defined on positive integers")
    return format(n, "b")


def bin_inv(w: str) -> Optional[int]:
    """Partial inverse of bin_word: None off its range (leading 0 etc.)."""
    if not w or any(ch not in "01" for ch in w) or w[0] == "0":
        return None
    return int(w, 2)


def in_star(w: str, k_m: int = 1) -> Configuration:
    """Tape encoding of a bit word: ((2n,1,..,1) . (0,x1,0,x2,...,0,xn,1,1,...)).

    The bits of w = xn...x1 are laid out least significant first, each
    preceded by a 0 marker; the tail of 1s terminates the word.
    """
    if not w or any(ch not in "01" for ch in w):
        raise ValueError(f"not a bit word: {w!r}")
    bits = [int(ch) for ch in reversed(w)]  # x1, x2, ..., xn
    prefix = []
    for bit in bits:
        prefix.append(0)
        prefix.append(bit)
    return Configuration(1, (2 * len(bits),) + (1,) * (k_m - 1), tuple(prefix), 1)


def out_star(c: Configuration) -> Optional[str]:
    """Decode an interleaved tape back to its word.

    Scans slot pairs (u_{2i-1}, u_{2i}) from i = 1: a marker slot holding
    1 terminates the word; while it holds 0, the even slot contributes the
    next bit.  An immediately-terminated tape decodes to LAMBDA.  Tapes
    outside the encoding's range (a non-bit value in a scanned slot, or a
    0 tail that never terminates) decode to None.
    """
    bits = []
    i = 1
    while True:
        marker_pos = 2 * i - 1
        if marker_pos > len(c.prefix) and c.tail == 0:
            return None  # all-zero tail: the scan would never terminate
        marker = c.tape_get(marker_pos)
        if marker == 1:
            return "".join(str(b) for b in reversed(bits))
        if marker != 0:
            return None
        bit = c.tape_get(marker_pos + 1)
        if bit not in (0, 1):
            return None
        bits.append(bit)
        i += 1


def in_nat(m: int, k_m: int = 1) -> Configuration:
    """Tape encoding of a positive integer: in_star of its binary word."""
    return in_star(bin_word(m), k_m)


def out_nat(c: Configuration) -> Optional[int]:
    """Decode a tape to a positive integer; None for LAMBDA or off-range tapes."""
    w = out_star(c)
    if w is None:
        return None
    return bin_inv(w)


# --- Boolean formulas -----------------------------------------------------

CONNECTIVES = ("¬", "∧", "∨", "↔")
_BINARY = ("∧", "∨", "↔")

_TABLES = {
    "∧": lambda a, b: a & b,
    "∨": lambda a, b: a | b,
    "↔": lambda a, b: 1 if a == b else 0,
}


def infix_to_prefix(s: str) -> Optional[tuple[str, ...]]:
    """Polish prefix form of a fully parenthesized formula, else MALFORMED.

    Grammar: formula is '0', '1', '¬' formula, or '(' formula op formula ')'
    with op among the binary connectives.  Whitespace between symbols is
    ignored.  Unparenthesized binary chains are rejected.
    """
    text = [ch for ch in s if not ch.isspace()]

    def parse(pos: int) -> Optional[tuple[list[str], int]]:
        if pos >= len(text):
            return None
        ch = text[pos]
        if ch in ("0", "1"):
            return [ch], pos + 1
        if ch == "¬":
            inner = parse(pos + 1)
            if inner is None:
                return None
            body, end = inner
            return ["¬"] + body, end
        if ch == "(":
            left = parse(pos + 1)
            if left is None:
                return None
            left_body, mid = left
            if mid >= len(text) or text[mid] not in _BINARY:
                return None
            op = text[mid]
            right = parse(mid + 1)
            if right is None:
                return None
            right_body, end = right
            if end >= len(text) or text[end] != ")":
                return None
            return [op] + left_body + right_body, end + 1
        return None

    result = parse(0)
    if result is None or result[1] != len(text):
        return MALFORMED
    return tuple(result[0])


def eval_boolean_prefix(p: tuple[str, ...]) -> int:
    """Truth value of a well-formed prefix tuple; rejects anything else."""
    if p is MALFORMED:
        raise ValueError("malformed formula")

    def eat(pos: int) -> tuple[int, int]:
        if pos >= len(p):
            raise ValueError("prefix formula ends prematurely")
        sym = p[pos]
        if sym in ("0", "1"):
            return int(sym), pos + 1
        if sym == "¬":
            value, end = eat(pos + 1)
            return 1 - value, end
        if sym in _BINARY:
            left, mid = eat(pos + 1)
            right, end = eat(mid)
            return _TABLES[sym](left, right), end
        raise ValueError(f"unknown symbol {sym!r} in prefix formula")

    value, end = eat(0)
    if end != len(p):
        raise ValueError("trailing symbols in prefix formula")
    return value


def formula_input(s: str, k_m: int) -> Configuration:
    """Machine input for formula text over the Boolean-symbol structure.

    Well-formed text becomes the prefix tuple under the standard input
    procedure; malformed text maps to the fixed rejected configuration
    ((1,1,...,1) . (0,0,0,...)), i.e. the input ("0",), which the formula
    machine never accepts.
    """
    p = infix_to_prefix(s)
    if p is MALFORMED:
        return input_i1(("0",), k_m)
    return input_i1(p, k_m)
