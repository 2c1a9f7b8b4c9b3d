"""Tarskian satisfaction over finite structures."""

from __future__ import annotations

from typing import Mapping

from ..errors import EvaluationError
from ..structures import FiniteStructure
from .syntax import (
    And,
    Element,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Term,
)


def evaluate(
    s: FiniteStructure,
    f: Formula,
    assignment: Mapping[str, int] | None = None,
) -> bool:
    """Truth value of f in s under the given assignment of free variables.

    Quantifiers range over the domain.  A name resolves as a bound variable
    first, then through the assignment, then as a structure constant;
    anything else is an unbound variable.  The equality atom is true
    identity of elements.
    """
    env = dict(assignment or {})
    for v, e in env.items():
        if not 0 <= e < s.size:
            raise EvaluationError(f"assignment sends {v!r} outside the domain")
    return _eval(s, f, env)


def _term(s: FiniteStructure, t: Term, env: dict[str, int]) -> int:
    if isinstance(t, Element):
        if not 0 <= t.value < s.size:
            raise EvaluationError(f"element literal {t.value} outside the domain")
        return t.value
    if t.value in env:
        return env[t.value]
    if t.value in s.constants:
        return s.constants[t.value]
    raise EvaluationError(f"unbound variable {t.value!r}")


def _eval(s: FiniteStructure, f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Pred):
        if f.name not in s.tables:
            raise EvaluationError(f"predicate {f.name!r} is not in the structure's signature")
        arity = s.signature.arity(f.name)
        if arity != len(f.args):
            raise EvaluationError(
                f"predicate {f.name!r} expects {arity} arguments, got {len(f.args)}"
            )
        return tuple(_term(s, a, env) for a in f.args) in s.tables[f.name]
    if isinstance(f, Eq):
        return _term(s, f.left, env) == _term(s, f.right, env)
    if isinstance(f, Not):
        return not _eval(s, f.body, env)
    if isinstance(f, And):
        return _eval(s, f.left, env) and _eval(s, f.right, env)
    if isinstance(f, Or):
        return _eval(s, f.left, env) or _eval(s, f.right, env)
    if isinstance(f, Implies):
        return (not _eval(s, f.left, env)) or _eval(s, f.right, env)
    if isinstance(f, Iff):
        return _eval(s, f.left, env) == _eval(s, f.right, env)
    if isinstance(f, (Forall, Exists)):
        had = f.var in env
        saved = env.get(f.var)
        want = isinstance(f, Exists)  # short-circuit value
        verdict = not want
        for e in s.domain:
            env[f.var] = e
            if _eval(s, f.body, env) == want:
                verdict = want
                break
        if had:
            env[f.var] = saved  # type: ignore[assignment]
        else:
            env.pop(f.var, None)
        return verdict
    raise TypeError(f"not a formula: {f!r}")
