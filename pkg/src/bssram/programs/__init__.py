"""Shipped example programs in the concrete syntax."""

from importlib import resources

NAMES = (
    "sum3",
    "sumn-c",
    "nonneg-nd",
    "nonneg-oracle-semi",
    "nonneg-oracle-complement",
    "nonneg-oracle-decider",
    "loop",
    "boolpda",
)


def program_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown shipped program {name!r}; have {', '.join(NAMES)}")
    return (resources.files(__package__) / f"{name}.bssram").read_text(encoding="utf-8")


def load(name: str):
    """Parse a shipped program by name."""
    from bssram.parser import parse_program

    return parse_program(program_text(name))
