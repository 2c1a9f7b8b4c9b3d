"""Built-in example objects used by the check suite and shipped as files.

The conjugation structure is the finite stand-in for the complex field: the
Galois field of nine elements written as a + b*i over the integers mod 3.
Conjugation (the Frobenius cube map) is its one nontrivial automorphism, so i
and -i sit in a common orbit while everything in the base field is fixed.
"""

from __future__ import annotations

from typing import Any

from .structures import FiniteStructure, signature


def _gf9_label(a: int, b: int) -> str:
    if b == 0:
        return str(a)
    imag = {1: "i", 2: "-i"}[b]
    return imag if a == 0 else f"{a}{'+' if b == 1 else ''}{imag}"


def conjugation_structure() -> FiniteStructure:
    """GF(9) with addition and multiplication as ternary relations.

    Element a + b*i has index a + 3b; i is element 3 and -i is element 6.
    The automorphism group is {identity, conjugation}.
    """
    def idx(a: int, b: int) -> int:
        return a % 3 + 3 * (b % 3)

    add, mul = [], []
    for a1 in range(3):
        for b1 in range(3):
            for a2 in range(3):
                for b2 in range(3):
                    add.append((idx(a1, b1), idx(a2, b2), idx(a1 + a2, b1 + b2)))
                    # (a1 + b1 i)(a2 + b2 i) with i^2 = -1
                    mul.append(
                        (
                            idx(a1, b1),
                            idx(a2, b2),
                            idx(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1),
                        )
                    )
    labels = {idx(a, b): _gf9_label(a, b) for a in range(3) for b in range(3)}
    return FiniteStructure(
        signature({"add": 3, "mul": 3}, ["zero", "one"]),
        9,
        {"add": add, "mul": mul},
        {"zero": 0, "one": 1},
        labels,
    )


GF9_I = 3
GF9_MINUS_I = 6


def poor_structure(size: int = 2) -> FiniteStructure:
    """A domain with an empty language; nothing can tell its elements apart."""
    return FiniteStructure(signature(), size)


def linear_order(size: int = 4) -> FiniteStructure:
    """A strict linear order; orders are rigid."""
    table = [(i, j) for i in range(size) for j in range(size) if i < j]
    return FiniteStructure(signature({"lt": 2}), size, {"lt": table})


def singleton_predicate_structure(size: int = 3) -> FiniteStructure:
    """P holds of exactly one element; the rest are indistinguishable."""
    return FiniteStructure(signature({"P": 1}), size, {"P": [(0,)]})


def congruence_structure() -> FiniteStructure:
    """A total equivalence masquerading as equality, unmasked by P.

    eq relates everything to everything, so reflexivity passes; P holds of
    element 0 only, so substitution fails with an explicit witness context.
    """
    return FiniteStructure(
        signature({"eq": 2, "P": 1}),
        2,
        {"eq": [(0, 0), (0, 1), (1, 0), (1, 1)], "P": [(0,)]},
    )


def extensionality_structure() -> FiniteStructure:
    """Two distinct elements with identical (empty) membership: =3 fails."""
    return FiniteStructure(
        signature({"eq": 2, "in": 2}),
        2,
        {"eq": [(0, 0), (1, 1)], "in": []},
    )


def diagonal_structure() -> FiniteStructure:
    """Honest identity: diagonal eq, extensional membership; all axioms hold."""
    return FiniteStructure(
        signature({"eq": 2, "in": 2, "P": 1}),
        3,
        {
            "eq": [(0, 0), (1, 1), (2, 2)],
            "in": [(0, 1), (0, 2), (1, 2)],
            "P": [(0,)],
        },
    )


def electron_pair_doc() -> dict[str, Any]:
    """A two-electron quantum structure declaration (JSON-shaped)."""
    s = 2 ** -0.5
    return {
        "schema": 1,
        "systems": {"m": {"electron": 2}},
        "spaces": [
            {
                "dim": 2,
                "observables": [
                    [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],  # spin-z analogue
                    [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],  # spin-x analogue
                ],
                "unitaries": [
                    [[[s, 0], [s, 0]], [[s, 0], [-s, 0]]],  # basis-mixing unitary
                ],
                "states": {
                    "up": [[1, 0], [0, 0]],
                    "down": [[0, 0], [1, 0]],
                    "plus": [[s, 0], [s, 0]],
                },
            }
        ],
        "system_space": {"electron": 0},
        "borel": {
            "plus-one": [[1, 1]],
            "minus-one": [[-1, -1]],
            "line": [[None, None]],
        },
    }


def labelled_systems_doc() -> dict[str, Any]:
    """Same structure but with systems given as a labelled (classical) set."""
    doc = electron_pair_doc()
    doc["systems"] = ["s1", "s2"]
    return doc


QSET_DOCUMENT = """\
kind electron { charge = -4.80320451e-10 esu; mass = 9.109e-31 kg; spin = 1/2 hbar }
kind positron { charge = 4.80320451e-10 esu; mass = 9.109e-31 kg; spin = 1/2 hbar }
qset pair { m: { electron: 2 } }
qset one { m: { electron: 1 } }
qset trio { m: { electron: 2, positron: 1 }, M: [ "Alice" ] }
"""
