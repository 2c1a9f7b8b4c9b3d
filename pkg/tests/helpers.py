"""Independent oracles for the test suite.

Everything here recomputes expected values from first principles (labelled
expansion, brute-force enumeration, n! permutation search) without calling
the code paths under test.
"""

from __future__ import annotations

import itertools
import random

from quasilab import qsets, structures


# -- labelled-expansion oracles for quasi-set operations -------------------------


def kind_key(k: qsets.Kind) -> tuple:
    return (k.name, k.attributes)


def labelled_union_overlap(a: dict[str, int], b: dict[str, int]) -> dict[str, int]:
    """Union of two same-source collections: label 1..n per kind, unite, erase."""
    labels_a = {(k, i) for k, n in a.items() for i in range(n)}
    labels_b = {(k, i) for k, n in b.items() for i in range(n)}
    out: dict[str, int] = {}
    for k, _ in labels_a | labels_b:
        out[k] = out.get(k, 0) + 1
    return out


def labelled_union_disjoint(a: dict[str, int], b: dict[str, int]) -> dict[str, int]:
    labels = {(k, "a", i) for k, n in a.items() for i in range(n)}
    labels |= {(k, "b", i) for k, n in b.items() for i in range(n)}
    out: dict[str, int] = {}
    for k, _, _ in labels:
        out[k] = out.get(k, 0) + 1
    return out


def labelled_intersection(a: dict[str, int], b: dict[str, int]) -> dict[str, int]:
    labels_a = {(k, i) for k, n in a.items() for i in range(n)}
    labels_b = {(k, i) for k, n in b.items() for i in range(n)}
    out: dict[str, int] = {}
    for k, _ in labels_a & labels_b:
        out[k] = out.get(k, 0) + 1
    return out


def m_part_by_name(q: qsets.QSet) -> dict[str, int]:
    return {k.name: n for k, n in q.m_part.items()}


def labelled_items(q: qsets.QSet) -> list[tuple]:
    """Attach artificial labels to every member (the representation refuses to)."""
    items: list[tuple] = []
    for k, n in sorted(q.m_part.items(), key=lambda e: e[0].name):
        items.extend(("m", kind_key(k), i) for i in range(n))
    items.extend(("M", m.label) for m in q.mobjects)
    for idx, (child, n) in enumerate(q.nested):
        items.extend(("q", idx, i) for i in range(n))
    return items


def powerset_by_labelled_subsets(q: qsets.QSet) -> int:
    """Count distinct sub-qsets: all labelled subsets, erase labels, dedupe."""
    items = labelled_items(q)
    signatures = set()
    for mask in range(2 ** len(items)):
        chosen = [items[i] for i in range(len(items)) if mask >> i & 1]
        sig: dict = {}
        for item in chosen:
            key = item[:-1] if item[0] in ("m", "q") else item
            sig[key] = sig.get(key, 0) + 1
        signatures.add(frozenset(sig.items()))
    return len(signatures)


def indistinguishable_oracle(a: qsets.QSet, b: qsets.QSet) -> bool:
    """Recursive bijection search over nested parts; no canonical forms."""
    am = {kind_key(k): n for k, n in a.m_part.items()}
    bm = {kind_key(k): n for k, n in b.m_part.items()}
    if am != bm:
        return False
    if {m.label for m in a.mobjects} != {m.label for m in b.mobjects}:
        return False
    left = [child for child, n in a.nested for _ in range(n)]
    right = [child for child, n in b.nested for _ in range(n)]
    if len(left) != len(right):
        return False

    def match(ls: list[qsets.QSet], rs: list[qsets.QSet]) -> bool:
        if not ls:
            return True
        head, rest = ls[0], ls[1:]
        for i, candidate in enumerate(rs):
            if indistinguishable_oracle(head, candidate):
                if match(rest, rs[:i] + rs[i + 1 :]):
                    return True
        return False

    return match(left, right)


# -- brute-force structure oracles --------------------------------------------------


def brute_force_automorphisms(s: structures.FiniteStructure) -> list[tuple[int, ...]]:
    """All automorphisms by bare n! enumeration over image tuples."""
    out = []
    for perm in itertools.permutations(range(s.size)):
        if any(perm[e] != e for e in s.constants.values()):
            continue
        good = True
        for name, table in s.tables.items():
            mapped = {tuple(perm[i] for i in t) for t in table}
            if mapped != set(table):
                good = False
                break
        if good:
            out.append(perm)
    return out


def brute_force_orbits(s: structures.FiniteStructure) -> list[list[int]]:
    autos = brute_force_automorphisms(s)
    seen: set[int] = set()
    parts = []
    for e in range(s.size):
        if e in seen:
            continue
        orbit = sorted({p[e] for p in autos})
        seen.update(orbit)
        parts.append(orbit)
    return parts


def brute_force_defined_identity(
    s: structures.FiniteStructure, a: int, b: int
) -> bool:
    """Agreement on all relations by direct tuple enumeration."""
    for name, arity in s.signature.relations:
        table = s.tables[name]
        for t in itertools.product(range(s.size), repeat=arity):
            for pos in range(arity):
                if t[pos] == a:
                    swapped = t[:pos] + (b,) + t[pos + 1 :]
                    if (t in table) != (swapped in table):
                        return False
    return True


# -- random generators (test-local, seeded by caller) --------------------------------


def random_test_structure(
    rng: random.Random, max_size: int = 7
) -> structures.FiniteStructure:
    n = rng.randint(1, max_size)
    rels = {f"R{i}": rng.choice([1, 2]) for i in range(rng.randint(1, 3))}
    consts = ["c"] if rng.random() < 0.25 else []
    tables = {
        name: [
            t
            for t in itertools.product(range(n), repeat=arity)
            if rng.random() < 0.35
        ]
        for name, arity in rels.items()
    }
    constants = {"c": rng.randrange(n)} if consts else {}
    return structures.FiniteStructure(
        structures.signature(rels, consts), n, tables, constants
    )
