"""The .qlog DSL: formulas and finite-structure declarations.

Grammar (EBNF; '#' starts a comment running to end of line):

    input       := structure | formula | template
    structure   := stmt+
    stmt        := "signature" [sigitem ("," sigitem)*] ";"
                 | "domain" INT ";"
                 | "rel" NAME "=" "{" [row ("," row)*] "}" ";"
                 | "const" NAME "=" INT ";"
                 | "label" INT "=" STRING ";"
    sigitem     := NAME "/" INT          # relation with arity
                 | NAME                  # constant symbol
    row         := INT | "(" INT ("," INT)* ")"

    formula     := iff
    iff         := impl ("<->" impl)*
    impl        := disj ["->" impl]
    disj        := conj ("or" conj)*
    conj        := unary ("and" unary)*
    unary       := "not" unary
                 | ("forall" | "exists") NAME unary
                 | atom
    atom        := "(" formula ")" | NAME "(" term ("," term)* ")"
                 | term "=" term
    term        := NAME | INT

    template    := NAME "=" NAME ":=" "..."   # defined-identity expansion

The template form expands, against a supplied signature, to the conjunction
stating that the two named elements agree on every relation at every argument
position (all remaining positions universally quantified).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError
from ..structures import FiniteStructure, Signature, signature
from .syntax import (
    And,
    Element,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Name,
    Not,
    Or,
    Pred,
    Term,
    conjunction,
)

_KEYWORDS = {
    "signature", "domain", "rel", "const", "label",
    "forall", "exists", "and", "or", "not",
}
_STRUCTURE_HEADS = {"signature", "domain", "rel", "const", "label"}
_PUNCT = ("<->", "->", ":=", "...", "(", ")", "{", "}", ",", ";", "=", "/")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, STRING, PUNCT, EOF
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1

    def advance(n: int) -> None:
        nonlocal pos, line, col
        for ch in text[pos : pos + n]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos += n

    while pos < len(text):
        ch = text[pos]
        if ch == "#":
            end = text.find("\n", pos)
            advance((end if end >= 0 else len(text)) - pos)
        elif ch.isspace():
            advance(1)
        elif ch == '"':
            l, c = line, col
            advance(1)
            start = pos
            while pos < len(text) and text[pos] != '"':
                advance(1)
            if pos >= len(text):
                raise ParseError("unterminated string", l, c)
            tokens.append(Token("STRING", text[start:pos], l, c))
            advance(1)
        elif ch.isdigit():
            l, c = line, col
            start = pos
            while pos < len(text) and text[pos].isdigit():
                advance(1)
            tokens.append(Token("INT", text[start:pos], l, c))
        elif ch.isalpha() or ch == "_":
            l, c = line, col
            start = pos
            while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
                advance(1)
            tokens.append(Token("NAME", text[start:pos], l, c))
        else:
            for p in _PUNCT:
                if text.startswith(p, pos):
                    tokens.append(Token("PUNCT", p, line, col))
                    advance(len(p))
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.column)

    def eat(self, kind: str, value: str | None = None) -> Token:
        t = self.cur
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            raise self.error(f"expected {want!r}, found {t.value or t.kind!r}")
        self.i += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.cur
        return t.kind == kind and (value is None or t.value == value)

    def try_eat(self, kind: str, value: str | None = None) -> bool:
        if self.at(kind, value):
            self.i += 1
            return True
        return False

    # -- formulas ------------------------------------------------------------

    def formula(self) -> Formula:
        f = self.impl()
        while self.try_eat("PUNCT", "<->"):
            f = Iff(f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.disj()
        if self.try_eat("PUNCT", "->"):
            return Implies(f, self.impl())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.try_eat("NAME", "or"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.try_eat("NAME", "and"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.try_eat("NAME", "not"):
            return Not(self.unary())
        if self.at("NAME", "forall") or self.at("NAME", "exists"):
            ctor = Forall if self.cur.value == "forall" else Exists
            self.i += 1
            var = self.name("quantified variable")
            return ctor(var, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        if self.try_eat("PUNCT", "("):
            f = self.formula()
            self.eat("PUNCT", ")")
            return f
        if self.at("NAME") and self.tokens[self.i + 1].kind == "PUNCT" \
                and self.tokens[self.i + 1].value == "(":
            pname = self.name("predicate")
            self.eat("PUNCT", "(")
            args = [self.term()]
            while self.try_eat("PUNCT", ","):
                args.append(self.term())
            self.eat("PUNCT", ")")
            return Pred(pname, tuple(args))
        left = self.term()
        self.eat("PUNCT", "=")
        return Eq(left, self.term())

    def term(self) -> Term:
        if self.at("INT"):
            return Element(int(self.eat("INT").value))
        return Name(self.name("term"))

    def name(self, what: str) -> str:
        if not self.at("NAME") or self.cur.value in _KEYWORDS:
            raise self.error(f"expected a {what} name")
        return self.eat("NAME").value

    # -- structures ----------------------------------------------------------

    def structure(self) -> FiniteStructure:
        relations: dict[str, int] = {}
        const_syms: list[str] = []
        size: int | None = None
        tables: dict[str, list[tuple[int, ...]]] = {}
        constants: dict[str, int] = {}
        labels: dict[int, str] = {}

        while not self.at("EOF"):
            head = self.eat("NAME")
            if head.value == "signature":
                if not self.at("PUNCT", ";"):
                    self._sigitem(relations, const_syms)
                    while self.try_eat("PUNCT", ","):
                        self._sigitem(relations, const_syms)
                self.eat("PUNCT", ";")
            elif head.value == "domain":
                size = int(self.eat("INT").value)
                self.eat("PUNCT", ";")
            elif head.value == "rel":
                rname = self.name("relation")
                self.eat("PUNCT", "=")
                self.eat("PUNCT", "{")
                rows: list[tuple[int, ...]] = []
                if not self.at("PUNCT", "}"):
                    rows.append(self._row())
                    while self.try_eat("PUNCT", ","):
                        rows.append(self._row())
                self.eat("PUNCT", "}")
                self.eat("PUNCT", ";")
                tables.setdefault(rname, []).extend(rows)
            elif head.value == "const":
                cname = self.name("constant")
                self.eat("PUNCT", "=")
                constants[cname] = int(self.eat("INT").value)
                self.eat("PUNCT", ";")
            elif head.value == "label":
                e = int(self.eat("INT").value)
                self.eat("PUNCT", "=")
                labels[e] = self.eat("STRING").value
                self.eat("PUNCT", ";")
            else:
                raise ParseError(
                    f"expected a structure statement, found {head.value!r}",
                    head.line,
                    head.column,
                )

        if size is None:
            raise self.error("structure needs a 'domain n;' statement")
        for rname in tables:
            if rname not in relations:
                raise self.error(f"relation {rname!r} missing from the signature")
        for cname in constants:
            if cname not in const_syms:
                raise self.error(f"constant {cname!r} missing from the signature")
        try:
            return FiniteStructure(
                signature(relations, const_syms), size, tables, constants, labels
            )
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def _sigitem(self, relations: dict[str, int], const_syms: list[str]) -> None:
        sym = self.name("signature symbol")
        if self.try_eat("PUNCT", "/"):
            relations[sym] = int(self.eat("INT").value)
        else:
            const_syms.append(sym)

    def _row(self) -> tuple[int, ...]:
        if self.at("INT"):
            return (int(self.eat("INT").value),)
        self.eat("PUNCT", "(")
        row = [int(self.eat("INT").value)]
        while self.try_eat("PUNCT", ","):
            row.append(int(self.eat("INT").value))
        self.eat("PUNCT", ")")
        return tuple(row)


def _is_template(tokens: list[Token]) -> bool:
    kinds = [(t.kind, t.value) for t in tokens[:5]]
    return (
        len(tokens) >= 5
        and kinds[0][0] == "NAME"
        and kinds[1] == ("PUNCT", "=")
        and kinds[2][0] == "NAME"
        and kinds[3] == ("PUNCT", ":=")
    )


def _fresh_names(count: int, avoid: set[str]) -> list[str]:
    names: list[str] = []
    for i in itertools.count():
        if len(names) == count:
            break
        cand = "z" if i == 0 else f"z{i}"
        if cand not in avoid:
            names.append(cand)
    return names


def defined_identity_formula(sig: Signature, x: str = "x", y: str = "y") -> Formula:
    """Agreement of x and y on every relation, position by position.

    Unary relations contribute P(x) <-> P(y); an n-ary relation contributes,
    for each argument position, a universally quantified biconditional with
    fresh variables in the remaining positions.
    """
    parts: list[Formula] = []
    for rname, arity in sig.relations:
        if arity == 1:
            parts.append(Iff(Pred(rname, (Name(x),)), Pred(rname, (Name(y),))))
            continue
        zs = _fresh_names(arity - 1, {x, y})
        for pos in range(arity):
            args_x: list[Term] = [Name(z) for z in zs]
            args_y: list[Term] = [Name(z) for z in zs]
            args_x.insert(pos, Name(x))
            args_y.insert(pos, Name(y))
            body: Formula = Iff(Pred(rname, tuple(args_x)), Pred(rname, tuple(args_y)))
            for z in reversed(zs):
                body = Forall(z, body)
            parts.append(body)
    if not parts:
        raise ValueError("signature has no relations: the defined identity is empty")
    return conjunction(parts)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse a formula; the defined-identity template needs a signature."""
    tokens = tokenize(text)
    if _is_template(tokens):
        if sig is None:
            raise ParseError(
                "defined-identity template requires a signature",
                tokens[0].line,
                tokens[0].column,
            )
        x, y = tokens[0].value, tokens[2].value
        p = _Parser(tokens)
        p.i = 4
        p.eat("PUNCT", "...")
        p.eat("EOF")
        return defined_identity_formula(sig, x, y)
    p = _Parser(tokens)
    f = p.formula()
    p.eat("EOF")
    return f


def parse_structure(text: str) -> FiniteStructure:
    p = _Parser(tokenize(text))
    return p.structure()


def parse(text: str, sig: Signature | None = None) -> Union[Formula, FiniteStructure]:
    """Parse either a structure declaration or a formula, by leading token."""
    tokens = tokenize(text)
    if tokens and tokens[0].kind == "NAME" and tokens[0].value in _STRUCTURE_HEADS:
        return parse_structure(text)
    return parse_formula(text, sig)


def format_structure(s: FiniteStructure) -> str:
    """Canonical .qlog text: sorted symbols, sorted rows, byte-stable."""
    items = [f"{n}/{a}" for n, a in s.signature.relations]
    items += list(s.signature.constants)
    lines = []
    if items:
        lines.append("signature " + ", ".join(items) + ";")
    lines.append(f"domain {s.size};")
    for e in sorted(s.labels):
        lines.append(f'label {e} = "{s.labels[e]}";')
    for cname in sorted(s.constants):
        lines.append(f"const {cname} = {s.constants[cname]};")
    for rname, arity in s.signature.relations:
        rows = sorted(s.tables[rname])
        if arity == 1:
            body = ", ".join(str(t[0]) for t in rows)
        else:
            body = ", ".join("(" + ", ".join(map(str, t)) + ")" for t in rows)
        lines.append(f"rel {rname} = {{{body}}};")
    return "\n".join(lines) + "\n"
