"""Formula ASTs and the canonical printer.

Terms are names (resolved against bound variables, an explicit assignment,
or structure constants at evaluation time) or element literals.  The printer
emits text that reparses to the identical tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Name:
    """A variable or constant symbol; which one is settled at evaluation."""

    value: str


@dataclass(frozen=True)
class Element:
    """A literal domain element."""

    value: int


Term = Union[Name, Element]


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Pred, Eq, Not, And, Or, Implies, Iff, Forall, Exists]

_BINARY = {And: "and", Or: "or", Implies: "->", Iff: "<->"}


def conjunction(parts: list[Formula]) -> Formula:
    """Left-folded conjunction; a single part stands alone."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def free_names(f: Formula) -> set[str]:
    """Names not bound by any quantifier (variables or constant symbols)."""
    if isinstance(f, Pred):
        return {t.value for t in f.args if isinstance(t, Name)}
    if isinstance(f, Eq):
        return {t.value for t in (f.left, f.right) if isinstance(t, Name)}
    if isinstance(f, Not):
        return free_names(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_names(f.left) | free_names(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_names(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def format_term(t: Term) -> str:
    return t.value if isinstance(t, Name) else str(t.value)


def format_formula(f: Formula) -> str:
    """Canonical text; binary connectives are always parenthesized."""
    if isinstance(f, Pred):
        return f"{f.name}({', '.join(format_term(a) for a in f.args)})"
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Not):
        return "not " + _wrap(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        op = _BINARY[type(f)]
        return f"({format_formula(f.left)} {op} {format_formula(f.right)})"
    if isinstance(f, Forall):
        return f"forall {f.var} " + _wrap(f.body)
    if isinstance(f, Exists):
        return f"exists {f.var} " + _wrap(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula) -> str:
    # unary-level contexts need parens only around bare atoms' binary cousins;
    # binary connectives already print their own parentheses
    if isinstance(f, Eq):
        return f"({format_formula(f)})"
    return format_formula(f)
