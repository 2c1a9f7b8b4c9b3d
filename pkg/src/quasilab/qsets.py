"""Quasi-sets: collections whose micro-members carry no identity.

A QSet has a classical part (labelled MObjects plus nested quasi-sets) and an
m-part recording, per kind, only *how many* members there are.  Nothing in the
API hands out a reference to "the i-th m-object": the representation stores
multiplicities, so there is no handle to leak.  Kinds are nomological: the
attribute profile (mass, charge, spin, ...) belongs to the kind, is law-given,
and is kept in exact arithmetic so kind comparison is decidable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    BoundExceededError,
    KindConflictError,
    ParseError,
    UnknownKindError,
)

AttrValue = Union[int, str, Fraction]


def _exact(value: AttrValue) -> Fraction:
    # Floats are rejected: kind identity must not depend on rounding.
    if isinstance(value, float):
        raise TypeError("kind attributes take exact values (int, str, Fraction), not float")
    return Fraction(value)


@dataclass(frozen=True)
class Kind:
    """A nomological kind: name plus an exact, law-given attribute profile.

    attributes is a canonically sorted tuple of (attribute, value, unit).
    Use `kind()` to build one from a mapping.
    """

    name: str
    attributes: tuple[tuple[str, Fraction, str], ...] = ()

    def attribute(self, attr: str) -> tuple[Fraction, str]:
        for a, v, u in self.attributes:
            if a == attr:
                return v, u
        raise KeyError(attr)


def kind(name: str, attributes: Mapping[str, AttrValue | tuple[AttrValue, str]] | None = None) -> Kind:
    """Build a Kind; attribute values may be int/str/Fraction or (value, unit)."""
    items: list[tuple[str, Fraction, str]] = []
    for attr, given in (attributes or {}).items():
        if isinstance(given, tuple):
            value, unit = given
        else:
            value, unit = given, ""
        items.append((attr, _exact(value), unit))
    return Kind(name, tuple(sorted(items)))


@dataclass(frozen=True, order=True)
class MObject:
    """A classical individual; identity is its globally unique label."""

    label: str


def _merge_kinds(entries: Iterable[tuple[Kind, int]]) -> dict[Kind, int]:
    """Merge multiplicity entries, rejecting same-name kinds with different attributes."""
    by_name: dict[str, Kind] = {}
    out: dict[Kind, int] = {}
    for k, n in entries:
        if n < 0:
            raise ValueError(f"negative multiplicity for kind {k.name!r}")
        seen = by_name.get(k.name)
        if seen is None:
            by_name[k.name] = k
        elif seen != k:
            raise KindConflictError(
                f"kind {k.name!r} declared twice with different attributes"
            )
        out[k] = out.get(k, 0) + n
    return {k: n for k, n in out.items() if n > 0}


class QSet:
    """An immutable quasi-set.

    m_part maps kinds to multiplicities; the classical part holds MObjects
    (identified by label) and nested quasi-sets (identified only up to
    indiscernibility, hence also stored with multiplicities).  Equality *is*
    indistinguishability: two QSets compare equal exactly when their canonical
    forms coincide.
    """

    __slots__ = ("_kinds", "_mobjects", "_nested", "_key", "_hash")

    def __init__(
        self,
        m_part: Mapping[Kind, int] | Iterable[tuple[Kind, int]] | None = None,
        classical: Iterable[MObject | str] | None = None,
        nested: Iterable[QSet | tuple[QSet, int]] | None = None,
    ):
        entries = m_part.items() if isinstance(m_part, Mapping) else (m_part or ())
        kinds = _merge_kinds(entries)
        object.__setattr__(self, "_kinds", tuple(sorted(kinds.items(), key=lambda e: e[0].name)))

        labels = {m.label if isinstance(m, MObject) else str(m) for m in (classical or ())}
        object.__setattr__(self, "_mobjects", tuple(MObject(l) for l in sorted(labels)))

        grouped: dict[tuple, tuple[QSet, int]] = {}
        for item in nested or ():
            child, mult = item if isinstance(item, tuple) else (item, 1)
            if mult < 0:
                raise ValueError("negative multiplicity for nested quasi-set")
            if mult == 0:
                continue
            prev = grouped.get(child._key)
            grouped[child._key] = (child, mult + (prev[1] if prev else 0))
        object.__setattr__(
            self, "_nested", tuple(grouped[k] for k in sorted(grouped))
        )

        key = (
            tuple((k.name, k.attributes, n) for k, n in self._kinds),
            tuple(m.label for m in self._mobjects),
            tuple((child._key, n) for child, n in self._nested),
        )
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    # -- introspection (never yields an m-object handle) --------------------

    @property
    def m_part(self) -> dict[Kind, int]:
        return dict(self._kinds)

    @property
    def mobjects(self) -> tuple[MObject, ...]:
        return self._mobjects

    @property
    def nested(self) -> tuple[tuple["QSet", int], ...]:
        return self._nested

    def multiplicity(self, k: Kind) -> int:
        for kk, n in self._kinds:
            if kk == k:
                return n
        return 0

    def kinds(self) -> tuple[Kind, ...]:
        return tuple(k for k, _ in self._kinds)

    def is_empty(self) -> bool:
        return not (self._kinds or self._mobjects or self._nested)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QSet) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"QSet({format_qset(self)!r})"


EMPTY = QSet()


def qcard(q: QSet) -> int:
    """Quasi-cardinal: classical members plus summed m-part multiplicities.

    Nested quasi-sets count as single elements (per occurrence).
    """
    return (
        len(q.mobjects)
        + sum(n for _, n in q.nested)
        + sum(n for _, n in q._kinds)
    )


def _combine(a: QSet, b: QSet, kind_rule, nested_rule, label_rule) -> QSet:
    names = {}
    for k, _ in itertools.chain(a._kinds, b._kinds):
        seen = names.get(k.name)
        if seen is None:
            names[k.name] = k
        elif seen != k:
            raise KindConflictError(
                f"kind {k.name!r} has conflicting attributes across operands"
            )
    kinds = {k: kind_rule(a.multiplicity(k), b.multiplicity(k)) for k in names.values()}

    keys = {child._key: child for child, _ in itertools.chain(a._nested, b._nested)}
    amap = {c._key: n for c, n in a._nested}
    bmap = {c._key: n for c, n in b._nested}
    nested = [
        (child, nested_rule(amap.get(key, 0), bmap.get(key, 0)))
        for key, child in keys.items()
    ]

    labels = label_rule(
        {m.label for m in a.mobjects}, {m.label for m in b.mobjects}
    )
    return QSet(kinds, sorted(labels), nested)


def qunion(a: QSet, b: QSet, *, disjoint_source: bool = False) -> QSet:
    """Quasi-union.

    Unlabelled multiplicities (kinds and nested quasi-sets alike) have no
    extensional overlap test, so the caller must say how the operands relate:
    with disjoint_source=True the collections were prepared separately and
    multiplicities add; with the default overlapping reading they draw on a
    common pool and multiplicities take the pointwise maximum.  Classical
    MObjects always take set union by label.
    """
    rule = (lambda x, y: x + y) if disjoint_source else max
    return _combine(a, b, rule, rule, lambda x, y: x | y)


def qintersection(a: QSet, b: QSet) -> QSet:
    """Quasi-intersection: pointwise minimum multiplicities, label intersection."""
    return _combine(a, b, min, min, lambda x, y: x & y)


def indistinguishable(a: QSet, b: QSet) -> bool:
    """True iff the quasi-sets agree on m-part, labels, and nested parts.

    Nested parts are matched recursively by this same relation; canonical
    forms make the bijection search implicit.
    """
    return a == b


def strong_singleton(k: Kind) -> QSet:
    """The quasi-set holding exactly one m-object of kind k.

    Which one?  The question has no answer: the result exposes only the kind
    and the multiplicity, and is indistinguishable from every other strong
    singleton of the same kind.
    """
    return QSet({k: 1})


DEFAULT_POWERSET_BOUND = 4096


@dataclass
class PowersetReport:
    """qpowerset result plus both cardinality readings.

    enumerated_qcard counts the concrete sub-quasi-sets (one per occupancy
    sub-vector and classical subset).  axiom_qcard is the 2^qcard value the
    axiomatic theory assigns to a power quasi-set.  The two disagree whenever
    some multiplicity exceeds 1; the discrepancy is a fact about counting
    without labels, reported rather than hidden.
    """

    collection: QSet
    enumerated_qcard: int
    axiom_qcard: int

    @property
    def agree(self) -> bool:
        return self.enumerated_qcard == self.axiom_qcard


def qpowerset(q: QSet, *, bound: int = DEFAULT_POWERSET_BOUND) -> QSet:
    """All sub-quasi-sets of q, one per (classical subset, occupancy sub-vector).

    Raises BoundExceededError when the result would exceed `bound` members.
    """
    kinds = q._kinds
    nested = q._nested
    mobjects = q.mobjects

    total = 2 ** len(mobjects)
    for _, n in kinds:
        total *= n + 1
    for _, n in nested:
        total *= n + 1
    if total > bound:
        raise BoundExceededError(
            f"power quasi-set would have {total} members (bound {bound})"
        )

    kind_choices = [range(n + 1) for _, n in kinds]
    nested_choices = [range(n + 1) for _, n in nested]
    members = []
    for label_mask in range(2 ** len(mobjects)):
        chosen = [m for i, m in enumerate(mobjects) if label_mask >> i & 1]
        for kc in itertools.product(*kind_choices):
            for nc in itertools.product(*nested_choices):
                members.append(
                    QSet(
                        {k: c for (k, _), c in zip(kinds, kc)},
                        chosen,
                        [(child, c) for (child, _), c in zip(nested, nc)],
                    )
                )
    return QSet(nested=members)


def qpowerset_report(q: QSet, *, bound: int = DEFAULT_POWERSET_BOUND) -> PowersetReport:
    collection = qpowerset(q, bound=bound)
    return PowersetReport(
        collection=collection,
        enumerated_qcard=qcard(collection),
        axiom_qcard=2 ** qcard(q),
    )


# -- individuality taxonomy --------------------------------------------------

INDIVIDUAL = "individual"
NON_INDIVIDUAL_I = "non-individual-i"
NON_INDIVIDUAL_II = "non-individual-ii"
NON_INDIVIDUAL_III = "non-individual-iii"


@dataclass(frozen=True)
class IndividualityVerdict:
    discernible: bool
    reidentifiable: bool
    category: str


def classify_individuality(discernible: bool, reidentifiable: bool) -> IndividualityVerdict:
    """Two-condition individuality test: discernible from others of its kind,
    and re-identifiable over time.  An item failing either is a non-individual;
    the category records which condition(s) failed (i: discernibility, ii:
    re-identification, iii: both)."""
    if discernible and reidentifiable:
        category = INDIVIDUAL
    elif reidentifiable:
        category = NON_INDIVIDUAL_I
    elif discernible:
        category = NON_INDIVIDUAL_II
    else:
        category = NON_INDIVIDUAL_III
    return IndividualityVerdict(discernible, reidentifiable, category)


# -- universe of declared kinds ----------------------------------------------


class Universe:
    """Registry of declared kinds; a malformed redeclaration is rejected."""

    def __init__(self, kinds: Iterable[Kind] = ()):
        self._kinds: dict[str, Kind] = {}
        for k in kinds:
            self.declare(k)

    def declare(self, k: Kind) -> Kind:
        seen = self._kinds.get(k.name)
        if seen is not None and seen != k:
            raise KindConflictError(
                f"kind {k.name!r} redeclared with different attributes"
            )
        self._kinds[k.name] = k
        return k

    def kind(self, name: str) -> Kind:
        try:
            return self._kinds[name]
        except KeyError:
            raise UnknownKindError(f"kind {name!r} is not declared in this universe") from None

    def kinds(self) -> list[Kind]:
        return [self._kinds[n] for n in sorted(self._kinds)]

    def strong_singleton(self, name: str) -> QSet:
        return strong_singleton(self.kind(name))


# -- canonical text form -------------------------------------------------------
#
# Document grammar (byte-stable canonical output; comments start with '#'):
#
#   document  := (kinddecl | qsetdecl)*
#   kinddecl  := "kind" NAME "{" [attr ("; " attr)*] "}"
#   attr      := NAME "=" VALUE [UNIT]
#   qsetdecl  := "qset" [NAME] qsetbody
#   qsetbody  := "{" [section ("," section)*] "}"
#   section   := "m:" "{" NAME ":" INT ("," NAME ":" INT)* "}"
#              | "M:" "[" STRING ("," STRING)* "]"
#              | "nested:" "[" ("qset" qsetbody)* "]"
#
# VALUE is an exact number: integer, fraction p/q, or decimal/scientific
# notation (parsed exactly; canonical output uses integer or p/q form).


def _format_fraction(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_kind(k: Kind) -> str:
    attrs = "; ".join(
        f"{a} = {_format_fraction(v)}" + (f" {u}" if u else "")
        for a, v, u in k.attributes
    )
    return f"kind {k.name} {{ {attrs} }}" if attrs else f"kind {k.name} {{ }}"


def _format_body(q: QSet) -> str:
    sections = []
    if q._kinds:
        inner = ", ".join(f"{k.name}: {n}" for k, n in q._kinds)
        sections.append(f"m: {{ {inner} }}")
    if q.mobjects:
        inner = ", ".join(f'"{m.label}"' for m in q.mobjects)
        sections.append(f"M: [ {inner} ]")
    if q._nested:
        parts = []
        for child, n in q._nested:
            parts.extend(["qset " + _format_body(child)] * n)
        sections.append("nested: [ " + ", ".join(parts) + " ]")
    if not sections:
        return "{ }"
    return "{ " + ", ".join(sections) + " }"


def format_qset(q: QSet, name: str | None = None) -> str:
    head = f"qset {name} " if name else "qset "
    return head + _format_body(q)


def format_document(universe: Universe, qsets: Iterable[tuple[str | None, QSet]]) -> str:
    lines = [format_kind(k) for k in universe.kinds()]
    lines.extend(format_qset(q, name) for name, q in qsets)
    return "\n".join(lines) + "\n"


class QsetDocument:
    """Parsed .qset file: a universe preamble plus named/anonymous qsets."""

    def __init__(self, universe: Universe, qsets: list[tuple[str | None, QSet]]):
        self.universe = universe
        self.qsets = qsets

    def get(self, name: str | None = None) -> QSet:
        if name is None:
            if len(self.qsets) != 1:
                raise KeyError(
                    f"document holds {len(self.qsets)} qsets; a name is required"
                )
            return self.qsets[0][1]
        for n, q in self.qsets:
            if n == name:
                return q
        raise KeyError(f"no qset named {name!r}")

    def canonical(self) -> str:
        return format_document(self.universe, self.qsets)


class _Lexer:
    PUNCT = ("{", "}", "[", "]", ":", ",", ";", "=")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def _advance(self, n: int) -> None:
        for ch in self.text[self.pos : self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def skip_ws(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end >= 0 else len(self.text)) - self.pos)
            elif ch.isspace():
                self._advance(1)
            else:
                return

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take_punct(self, p: str) -> None:
        self.skip_ws()
        if not self.text.startswith(p, self.pos):
            raise self.error(f"expected {p!r}")
        self._advance(len(p))

    def try_punct(self, p: str) -> bool:
        self.skip_ws()
        if self.text.startswith(p, self.pos):
            self._advance(len(p))
            return True
        return False

    def take_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isalnum() or ch in "_-":
                self._advance(1)
            else:
                break
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start : self.pos]

    def take_string(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != '"':
            raise self.error("expected a quoted label")
        self._advance(1)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] != '"':
            self._advance(1)
        if self.pos >= len(self.text):
            raise self.error("unterminated label")
        value = self.text[start : self.pos]
        self._advance(1)
        return value

    def take_number(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self._advance(1)
        while self.pos < len(self.text) and (
            self.text[self.pos].isdigit() or self.text[self.pos] in ".eE+-/"
        ):
            # a sign is only part of the number directly after e/E
            ch = self.text[self.pos]
            if ch in "+-" and self.text[self.pos - 1] not in "eE":
                break
            self._advance(1)
        token = self.text[start : self.pos]
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise self.error(f"bad number {token!r}") from None

    def take_int(self) -> int:
        value = self.take_number()
        if value.denominator != 1:
            raise self.error("expected an integer")
        return value.numerator

    def at_end(self) -> bool:
        return self.peek() is None


def parse_qsets(text: str) -> QsetDocument:
    """Parse a .qset document (kind preamble + qset declarations)."""
    lx = _Lexer(text)
    universe = Universe()
    qsets: list[tuple[str | None, QSet]] = []
    while not lx.at_end():
        word = lx.take_name()
        if word == "kind":
            universe.declare(_parse_kind(lx))
        elif word == "qset":
            name: str | None = None
            if lx.peek() != "{":
                name = lx.take_name()
            qsets.append((name, _parse_qset_body(lx, universe)))
        else:
            raise lx.error(f"expected 'kind' or 'qset', found {word!r}")
    return QsetDocument(universe, qsets)


def _parse_kind(lx: _Lexer) -> Kind:
    name = lx.take_name()
    lx.take_punct("{")
    attrs: dict[str, tuple[Fraction, str]] = {}
    while lx.peek() != "}":
        attr = lx.take_name()
        lx.take_punct("=")
        value = lx.take_number()
        unit = ""
        nxt = lx.peek()
        if nxt is not None and nxt not in ";}":
            unit = lx.take_name()
        attrs[attr] = (value, unit)
        lx.try_punct(";")
    lx.take_punct("}")
    return kind(name, attrs)


def _parse_qset_body(lx: _Lexer, universe: Universe) -> QSet:
    lx.take_punct("{")
    m_part: dict[Kind, int] = {}
    labels: list[str] = []
    nested: list[QSet] = []
    while lx.peek() != "}":
        section = lx.take_name()
        lx.take_punct(":")
        if section == "m":
            lx.take_punct("{")
            while lx.peek() != "}":
                kname = lx.take_name()
                try:
                    k = universe.kind(kname)
                except UnknownKindError as exc:
                    raise lx.error(str(exc)) from None
                lx.take_punct(":")
                m_part[k] = m_part.get(k, 0) + lx.take_int()
                lx.try_punct(",")
            lx.take_punct("}")
        elif section == "M":
            lx.take_punct("[")
            while lx.peek() != "]":
                labels.append(lx.take_string())
                lx.try_punct(",")
            lx.take_punct("]")
        elif section == "nested":
            lx.take_punct("[")
            while lx.peek() != "]":
                word = lx.take_name()
                if word != "qset":
                    raise lx.error(f"expected 'qset' in nested list, found {word!r}")
                nested.append(_parse_qset_body(lx, universe))
                lx.try_punct(",")
            lx.take_punct("]")
        else:
            raise lx.error(f"unknown section {section!r} (expected m, M, nested)")
        lx.try_punct(",")
    lx.take_punct("}")
    return QSet(m_part, labels, nested)
