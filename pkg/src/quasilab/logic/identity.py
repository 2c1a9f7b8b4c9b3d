"""Identity checkers: defined identity, the three identity axioms, and PII.

Defined identity is language-relative indiscernibility: agreement on every
relation at every argument position.  It can make distinct elements come out
"identical" in a poor language, which is exactly the first-order PII failure
these checkers are built to exhibit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Literal

from ..structures import FiniteStructure, automorphisms, orbits


def defined_identity(s: FiniteStructure, a: int, b: int) -> bool:
    """Agreement of a and b on all relations, every position, all completions.

    The remaining argument positions range over the whole domain, including
    a and b themselves.
    """
    if not (0 <= a < s.size and 0 <= b < s.size):
        raise ValueError("elements outside the domain")
    if a == b:
        return True
    for name, arity in s.signature.relations:
        table = s.tables[name]
        for pos in range(arity):
            for rest in itertools.product(s.domain, repeat=arity - 1):
                row_a = rest[:pos] + (a,) + rest[pos:]
                row_b = rest[:pos] + (b,) + rest[pos:]
                if (row_a in table) != (row_b in table):
                    return False
    return True


def pii_first_order(s: FiniteStructure) -> list[tuple[int, int]]:
    """All distinct pairs the language cannot tell apart.

    An empty list means the identity-of-indiscernibles schema holds relative
    to this structure's language; any pair listed is a counterexample.
    """
    return [
        (a, b)
        for a, b in itertools.combinations(s.domain, 2)
        if defined_identity(s, a, b)
    ]


@dataclass
class AxiomVerdict:
    axiom: str
    holds: bool | None  # None: not applicable (no designated relation)
    counterexamples: list[Any] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "counterexamples": self.counterexamples,
        }


@dataclass
class IdentityAxiomsReport:
    """Verdicts for reflexivity, substitution, and extensionality.

    Substitution is checked on atomic contexts only; satisfaction is
    compositional, so atomic preservation is equivalent to preservation in
    every formula.
    """

    equality: str
    membership: str | None
    reflexivity: AxiomVerdict
    substitution: AxiomVerdict
    extensionality: AxiomVerdict

    @property
    def all_hold(self) -> bool:
        return all(
            v.holds is not False
            for v in (self.reflexivity, self.substitution, self.extensionality)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "equality": self.equality,
            "membership": self.membership,
            "verdicts": [
                self.reflexivity.to_dict(),
                self.substitution.to_dict(),
                self.extensionality.to_dict(),
            ],
            "all_hold": self.all_hold,
            "note": "substitution checked on atomic contexts (compositional)",
        }


def check_identity_axioms(
    s: FiniteStructure, equality: str, membership: str | None = None
) -> IdentityAxiomsReport:
    """Test a designated binary relation against the laws of identity.

    Reflexivity and substitution are always checked; extensionality needs a
    designated membership relation.  A non-diagonal "equality" typically
    passes reflexivity while substitution fails with an explicit witness
    context: the relation, the position, and the completed tuple whose truth
    value flips.
    """
    if equality not in s.tables or s.signature.arity(equality) != 2:
        raise ValueError(f"designated equality {equality!r} must be a binary relation")
    if membership is not None and (
        membership not in s.tables or s.signature.arity(membership) != 2
    ):
        raise ValueError(f"designated membership {membership!r} must be a binary relation")
    eq = s.tables[equality]

    reflexivity = AxiomVerdict(
        "reflexivity",
        True,
        [{"element": e} for e in s.domain if (e, e) not in eq],
    )
    reflexivity.holds = not reflexivity.counterexamples

    substitution = AxiomVerdict("substitution", True)
    for a, b in eq:
        if a == b:
            continue
        for name, arity in s.signature.relations:
            table = s.tables[name]
            for pos in range(arity):
                for rest in itertools.product(s.domain, repeat=arity - 1):
                    row_a = rest[:pos] + (a,) + rest[pos:]
                    row_b = rest[:pos] + (b,) + rest[pos:]
                    if row_a in table and row_b not in table:
                        substitution.counterexamples.append(
                            {
                                "pair": [a, b],
                                "relation": name,
                                "position": pos,
                                "context": list(row_a),
                                "substituted": list(row_b),
                            }
                        )
    substitution.holds = not substitution.counterexamples

    if membership is None:
        extensionality = AxiomVerdict("extensionality", None)
    else:
        member = s.tables[membership]
        extensionality = AxiomVerdict("extensionality", True)
        members_of = {
            e: frozenset(z for z in s.domain if (z, e) in member) for e in s.domain
        }
        for a, b in itertools.permutations(s.domain, 2):
            if members_of[a] == members_of[b] and (a, b) not in eq:
                extensionality.counterexamples.append(
                    {"pair": [a, b], "members": sorted(members_of[a])}
                )
        extensionality.holds = not extensionality.counterexamples

    return IdentityAxiomsReport(
        equality=equality,
        membership=membership,
        reflexivity=reflexivity,
        substitution=substitution,
        extensionality=extensionality,
    )


Semantics = Literal["full", "orbit-invariant"]


@dataclass
class PiiSecondOrderReport:
    """Second-order PII outcome under a property semantics.

    In full semantics every distinct pair is separated by a subset property
    (the singleton of one side).  Restricting properties to unions of
    automorphism orbits removes exactly the singletons of orbit-mates, so the
    failures are the distinct same-orbit pairs.
    """

    semantics: str
    witnesses: dict[tuple[int, int], list[int]]
    failures: list[tuple[int, int]]
    orbit_partition: list[list[int]] | None = None

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "semantics": self.semantics,
            "witnesses": [
                {"pair": list(pair), "property": prop}
                for pair, prop in sorted(self.witnesses.items())
            ],
            "failures": [list(p) for p in self.failures],
            "orbits": self.orbit_partition,
            "holds": self.holds,
        }


def pii_second_order(s: FiniteStructure, semantics: Semantics = "full") -> PiiSecondOrderReport:
    """Search for a separating property for every distinct pair.

    Properties are extensional subsets of the domain.  Full semantics admits
    every subset; orbit-invariant semantics admits only unions of
    automorphism orbits (the properties available once symmetric elements
    cannot be told apart).
    """
    witnesses: dict[tuple[int, int], list[int]] = {}
    failures: list[tuple[int, int]] = []

    if semantics == "full":
        for a, b in itertools.combinations(s.domain, 2):
            witnesses[(a, b)] = [a]  # the singleton {a} holds of a, not of b
        return PiiSecondOrderReport("full", witnesses, failures)

    if semantics != "orbit-invariant":
        raise ValueError(f"unknown semantics {semantics!r}")

    parts = orbits(s, automorphisms(s))
    orbit_of = {e: tuple(part) for part in parts for e in part}
    for a, b in itertools.combinations(s.domain, 2):
        if orbit_of[a] == orbit_of[b]:
            # every orbit union containing a contains b too: no witness
            failures.append((a, b))
        else:
            witnesses[(a, b)] = list(orbit_of[a])
    return PiiSecondOrderReport("orbit-invariant", witnesses, failures, parts)
