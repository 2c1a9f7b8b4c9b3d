"""The full check suite behind `report run`.

Every public checker in the package is exercised at desk scale: fixture cases
with known outcomes plus seeded randomized spot checks.  Identical seeds give
byte-identical reports.
"""

from __future__ import annotations

import itertools
import random
from typing import Any

import numpy as np

from . import fixtures, fock, qsets, quantum, structures
from .logic import (
    check_identity_axioms,
    defined_identity,
    evaluate,
    format_formula,
    parse_formula,
    pii_first_order,
    pii_second_order,
)
from .reports import FAIL, PASS, CheckReport, bundle

# -- seeded generators ---------------------------------------------------------


def random_structure(
    rng: random.Random, max_size: int = 5, max_relations: int = 3
) -> structures.FiniteStructure:
    """A random small structure with unary/binary relations and maybe a constant."""
    n = rng.randint(1, max_size)
    rels = {}
    for i in range(rng.randint(1, max_relations)):
        rels[f"R{i}"] = rng.choice([1, 1, 2])
    consts = ["c"] if rng.random() < 0.3 else []
    tables = {}
    for name, arity in rels.items():
        rows = [
            t
            for t in itertools.product(range(n), repeat=arity)
            if rng.random() < 0.4
        ]
        tables[name] = rows
    constants = {"c": rng.randrange(n)} if consts else {}
    return structures.FiniteStructure(
        structures.signature(rels, consts), n, tables, constants
    )


_KIND_POOL = [
    qsets.kind("electron", {"charge": ("-4.80320451e-10", "esu"),
                            "mass": ("9.109e-31", "kg"), "spin": ("1/2", "hbar")}),
    qsets.kind("positron", {"charge": ("4.80320451e-10", "esu"),
                            "mass": ("9.109e-31", "kg"), "spin": ("1/2", "hbar")}),
    qsets.kind("proton", {"charge": ("4.80320451e-10", "esu"), "spin": ("1/2", "hbar")}),
    qsets.kind("photon", {"charge": (0, "esu"), "spin": (1, "hbar")}),
]
_LABEL_POOL = ["Alice", "Bob", "Geiger", "Stern", "Gerlach"]


def random_qset(
    rng: random.Random,
    kinds: list[qsets.Kind] | None = None,
    depth: int = 2,
    max_multiplicity: int = 5,
) -> qsets.QSet:
    kinds = _KIND_POOL if kinds is None else kinds
    m_part = {}
    for k in kinds:
        if rng.random() < 0.6:
            m_part[k] = rng.randint(0, max_multiplicity)
    labels = [l for l in _LABEL_POOL if rng.random() < 0.25]
    nested = []
    if depth > 0:
        for _ in range(rng.randint(0, 2)):
            nested.append(random_qset(rng, kinds, depth - 1, max_multiplicity=2))
    return qsets.QSet(m_part, labels, nested)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def eigenvalue_partition(a: np.ndarray) -> list[quantum.BorelSet]:
    """Disjoint intervals, one per eigenvalue cluster, covering the line."""
    lines = quantum.spectral_decompose(a)
    values = [l.eigenvalue for l in lines]
    cuts = [-np.inf] + [
        (values[i] + values[i + 1]) / 2 for i in range(len(values) - 1)
    ] + [np.inf]
    return [
        quantum.BorelSet.of((cuts[i], cuts[i + 1])) for i in range(len(values))
    ]


# -- individual checks -----------------------------------------------------------


def _report(name: str, module: str, ok: bool, witnesses: list, diag: dict) -> CheckReport:
    return CheckReport(name, PASS if ok else FAIL, module, None, witnesses, diag)


def check_qset_laws(rng: random.Random, trials: int = 60) -> CheckReport:
    failures: list[Any] = []
    for t in range(trials):
        a = random_qset(rng)
        b = random_qset(rng)
        # min-max identity through the cardinality of meet and overlap-join
        if qsets.qcard(qsets.qintersection(a, b)) + qsets.qcard(qsets.qunion(a, b)) \
                != qsets.qcard(a) + qsets.qcard(b):
            failures.append({"law": "min-max", "trial": t})
        # disjoint-source additivity on label-disjoint operands
        lone = qsets.QSet(
            {k: n for k, n in a.m_part.items()},
            [],
            [child for child, m in a.nested for _ in range(m)],
        )
        if qsets.qcard(qsets.qunion(lone, b, disjoint_source=True)) != \
                qsets.qcard(lone) + qsets.qcard(b):
            failures.append({"law": "disjoint-additivity", "trial": t})
        # indistinguishability is an equivalence: rebuild a shuffled copy
        entries = list(a.m_part.items())
        rng.shuffle(entries)
        copy = qsets.QSet(entries, list(a.mobjects), list(a.nested))
        if not (
            qsets.indistinguishable(a, a)
            and qsets.indistinguishable(a, copy) == qsets.indistinguishable(copy, a)
            and qsets.indistinguishable(a, copy)
        ):
            failures.append({"law": "equivalence", "trial": t})
        if qsets.indistinguishable(a, copy) and qsets.indistinguishable(copy, b):
            if not qsets.indistinguishable(a, b):
                failures.append({"law": "transitivity", "trial": t})
        # identity element
        if qsets.qunion(qsets.EMPTY, a) != a:
            failures.append({"law": "empty-identity", "trial": t})
        # canonical serialization round-trip (label-erasure soundness)
        u = qsets.Universe(_KIND_POOL)
        text = qsets.format_document(u, [(None, a)])
        back = qsets.parse_qsets(text)
        if back.get() != a or back.canonical() != text:
            failures.append({"law": "roundtrip", "trial": t})
    return _report(
        "qsets.laws", "qsets", not failures, failures, {"trials": trials}
    )


def check_qset_powerset(rng: random.Random, trials: int = 20) -> CheckReport:
    failures: list[Any] = []
    for t in range(trials):
        q = random_qset(rng, depth=1, max_multiplicity=2)
        if qsets.qcard(q) > 8:
            q = qsets.QSet({k: min(n, 1) for k, n in q.m_part.items()})
        expected = 2 ** len(q.mobjects)
        for _, n in q.m_part.items():
            expected *= n + 1
        for _, n in q.nested:
            expected *= n + 1
        rep = qsets.qpowerset_report(q)
        if rep.enumerated_qcard != expected:
            failures.append({"trial": t, "got": rep.enumerated_qcard, "want": expected})
    fixture = qsets.qpowerset_report(qsets.QSet({_KIND_POOL[0]: 2}))
    ok = not failures and fixture.enumerated_qcard == 3 and fixture.axiom_qcard == 4
    return _report(
        "qsets.powerset",
        "qsets",
        ok,
        failures,
        {
            "trials": trials,
            "fixture_enumerated": fixture.enumerated_qcard,
            "fixture_axiom": fixture.axiom_qcard,
            "note": "occupancy enumeration; axiomatic 2^qcard reported alongside",
        },
    )


def check_qset_classification() -> CheckReport:
    table = {
        (True, True): qsets.INDIVIDUAL,
        (False, True): qsets.NON_INDIVIDUAL_I,
        (True, False): qsets.NON_INDIVIDUAL_II,
        (False, False): qsets.NON_INDIVIDUAL_III,
    }
    failures = []
    for (d, r), want in table.items():
        got = qsets.classify_individuality(d, r)
        if got.category != want or got.discernible != d or got.reidentifiable != r:
            failures.append({"flags": [d, r], "got": got.category, "want": want})
    singleton_ok = qsets.strong_singleton(_KIND_POOL[0]) == qsets.strong_singleton(_KIND_POOL[0])
    if not singleton_ok:
        failures.append({"law": "strong-singleton-indistinguishable"})
    return _report("qsets.classification", "qsets", not failures, failures, {})


def check_conjugation_fixture() -> CheckReport:
    s = fixtures.conjugation_structure()
    autos = structures.automorphisms(s)
    parts = structures.orbits(s, autos)
    ok = (
        len(autos) == 2
        and structures.orbit_indiscernible(s, fixtures.GF9_I, fixtures.GF9_MINUS_I)
        and not structures.is_rigid(s)
        and [fixtures.GF9_I, fixtures.GF9_MINUS_I] in parts
    )
    return _report(
        "structures.conjugation",
        "structures",
        ok,
        [] if ok else [{"automorphisms": len(autos), "orbits": parts}],
        {
            "automorphisms": len(autos),
            "i_orbit": [s.display(e) for part in parts if fixtures.GF9_I in part for e in part],
        },
    )


def check_automorphism_oracle(rng: random.Random, trials: int = 20) -> CheckReport:
    failures = []
    for t in range(trials):
        s = random_structure(rng, max_size=5)
        pruned = structures.automorphisms(s)
        naive = structures.naive_automorphisms(s)
        if pruned != naive:
            failures.append({"trial": t, "pruned": len(pruned), "naive": len(naive)})
    return _report(
        "structures.automorphism-oracle", "structures", not failures, failures,
        {"trials": trials},
    )


def check_rigidify(rng: random.Random, trials: int = 10) -> CheckReport:
    failures = []
    cases = [random_structure(rng, max_size=5) for _ in range(trials)]
    cases += [fixtures.conjugation_structure(), fixtures.poor_structure(3), fixtures.linear_order(4)]
    for i, s in enumerate(cases):
        out = structures.rigidify(s)
        conservative = all(
            s.tables[name] <= out.tables[name] for name in s.tables
        ) and out.size == s.size
        if not structures.is_rigid(out) or not conservative:
            failures.append({"case": i})
        if structures.is_rigid(s) and out is not s:
            failures.append({"case": i, "problem": "rigid input was modified"})
    return _report(
        "structures.rigidify", "structures", not failures, failures,
        {"cases": len(cases)},
    )


def check_ur_universe() -> CheckReport:
    u = structures.build_ur_universe(["a", "b"], 2)
    failures = []
    level_sizes = [len(l) for l in u.levels]
    if level_sizes != [2, 4, 64]:
        failures.append({"levels": level_sizes})
    for perm in itertools.permutations(["a", "b"]):
        amap = dict(zip(["a", "b"], perm))
        try:
            structures.extend_permutation(u, amap)
        except Exception as exc:  # verification failures surface here
            failures.append({"perm": amap, "error": str(exc)})
    witnesses = []
    for atom in ["a", "b"]:
        w = structures.identity_property_witness(u, atom)
        witnesses.append(
            {"atom": atom, "satisfied_by": w.satisfied_by, "separates": w.separates}
        )
        if not w.separates or not w.distinct_from_all_others:
            failures.append({"atom": atom, "witness": w.satisfied_by})
    return _report(
        "structures.ur-universe", "structures", not failures, failures,
        {"levels": level_sizes, "members": len(u.members), "witnesses": witnesses},
    )


_ROUNDTRIP_FORMULAS = [
    "forall x (P(x) -> P(x))",
    "exists x exists y (not x = y)",
    "forall x (P(x) and (Q(x) or not R(x, x)))",
    "((P(x) <-> Q(y)) -> exists z R(z, z))",
    "not not P(c)",
    "forall x forall y ((R(x, y) and R(y, x)) -> x = y)",
]


def check_parser_roundtrip(rng: random.Random) -> CheckReport:
    failures = []
    for text in _ROUNDTRIP_FORMULAS:
        f = parse_formula(text)
        printed = format_formula(f)
        if parse_formula(printed) != f:
            failures.append({"formula": text, "printed": printed})
    # template expansion agrees with the table-level checker (dual route)
    for t in range(5):
        s = random_structure(rng, max_size=4)
        template = parse_formula("x = y := ...", s.signature)
        for a in s.domain:
            for b in s.domain:
                via_eval = evaluate(s, template, {"x": a, "y": b})
                via_tables = defined_identity(s, a, b)
                if via_eval != via_tables:
                    failures.append({"trial": t, "pair": [a, b]})
    return _report(
        "logic.parser-roundtrip", "logic", not failures, failures,
        {"fixtures": len(_ROUNDTRIP_FORMULAS)},
    )


def check_poor_language() -> CheckReport:
    pairs = pii_first_order(fixtures.poor_structure(2))
    rigid_pairs = pii_first_order(fixtures.linear_order(4))
    single = pii_first_order(fixtures.singleton_predicate_structure(3))
    ok = pairs == [(0, 1)] and rigid_pairs == [] and single == [(1, 2)]
    return _report(
        "logic.poor-language-pii", "logic", ok,
        [] if ok else [{"poor": pairs, "order": rigid_pairs, "singleton": single}],
        {"poor_counterexamples": [list(p) for p in pairs]},
    )


def check_identity_axiom_suite() -> CheckReport:
    failures = []
    good = check_identity_axioms(fixtures.diagonal_structure(), "eq", "in")
    if not good.all_hold:
        failures.append({"case": "diagonal", "report": good.to_dict()})
    masked = check_identity_axioms(fixtures.congruence_structure(), "eq")
    if not (masked.reflexivity.holds and masked.substitution.holds is False
            and masked.substitution.counterexamples):
        failures.append({"case": "congruence", "report": masked.to_dict()})
    ext = check_identity_axioms(fixtures.extensionality_structure(), "eq", "in")
    if ext.extensionality.holds is not False:
        failures.append({"case": "extensionality", "report": ext.to_dict()})
    witness = masked.substitution.counterexamples[:1]
    return _report(
        "logic.identity-axioms", "logic", not failures, failures,
        {"congruence_witness": witness},
    )


def check_pii_second_order() -> CheckReport:
    failures = []
    conj = fixtures.conjugation_structure()
    full = pii_second_order(conj, "full")
    if full.failures:
        failures.append({"case": "full", "failures": full.failures})
    orbit = pii_second_order(conj, "orbit-invariant")
    same_orbit = {
        (a, b)
        for part in structures.orbits(conj)
        for a, b in itertools.combinations(part, 2)
    }
    if set(orbit.failures) != same_orbit:
        failures.append({"case": "orbit", "failures": orbit.failures})
    rigid = pii_second_order(fixtures.linear_order(4), "orbit-invariant")
    if rigid.failures:
        failures.append({"case": "rigid", "failures": rigid.failures})
    return _report(
        "logic.pii-second-order", "logic", not failures, failures,
        {"conjugation_failure_pairs": [list(p) for p in orbit.failures]},
    )


def check_qm_fixture() -> CheckReport:
    failures = []
    q = quantum.load_qm_structure(fixtures.electron_pair_doc())
    validation = quantum.validate_qm_structure(q)
    if not validation.ok:
        failures.append({"case": "electron-pair", "report": validation.to_dict()})
    space = q.spaces[0]
    z = space.observables[0]
    p_half = quantum.born_probability(space.states["plus"], z, q.borel_element("plus-one"))
    p_line = quantum.born_probability(space.states["plus"], z, q.borel_element("line"))
    p_eigen = quantum.born_probability(space.states["up"], z, q.borel_element("plus-one"))
    if abs(p_half - 0.5) > 1e-12 or abs(p_line - 1.0) > 1e-12 or abs(p_eigen - 1.0) > 1e-12:
        failures.append({"case": "born", "values": [p_half, p_line, p_eigen]})
    labelled = quantum.validate_qm_structure(
        quantum.load_qm_structure(fixtures.labelled_systems_doc())
    )
    flagged = [i for i in labelled.items if not i["ok"]]
    if not any(i["check"] == "systems-quasi-set" for i in flagged):
        failures.append({"case": "labelled-diagnostic", "items": labelled.items})
    return _report(
        "quantum.fixture", "quantum", not failures, failures,
        {"born_plus": p_half},
    )


def check_qm_random(seed: int, trials: int = 20) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures = []
    worst = {"partition": 0.0, "reconstruction": 0.0, "phase": 0.0, "covariance": 0.0}
    for t in range(trials):
        d = int(rng.integers(2, 7))
        a = random_hermitian(rng, d)
        psi = random_state(rng, d)
        lines = quantum.spectral_decompose(a)
        cells = eigenvalue_partition(a)
        total = sum(
            quantum.born_probability(psi, a, cell, decomposition=lines)
            for cell in cells
        )
        worst["partition"] = max(worst["partition"], abs(total - 1.0))
        if abs(total - 1.0) > 1e-10:
            failures.append({"trial": t, "law": "partition", "total": total})
        recon = sum(l.eigenvalue * l.projector for l in lines)
        defect = float(np.abs(recon - a).max())
        worst["reconstruction"] = max(worst["reconstruction"], defect)
        if defect > 1e-9:
            failures.append({"trial": t, "law": "reconstruction", "defect": defect})
        cell = cells[int(rng.integers(0, len(cells)))]
        base = quantum.born_probability(psi, a, cell, decomposition=lines)
        for theta in (np.pi / 7, np.pi / 3, 1.0):
            shifted = quantum.born_probability(np.exp(1j * theta) * psi, a, cell,
                                               decomposition=lines)
            worst["phase"] = max(worst["phase"], abs(shifted - base))
            if abs(shifted - base) > 1e-10:
                failures.append({"trial": t, "law": "phase", "theta": theta})
        u = random_unitary(rng, d)
        conjugated = quantum.born_probability(u @ psi, u @ a @ u.conj().T, cell)
        worst["covariance"] = max(worst["covariance"], abs(conjugated - base))
        if abs(conjugated - base) > 1e-9:
            failures.append({"trial": t, "law": "covariance", "defect": abs(conjugated - base)})
        evolved = quantum.evolve(quantum.evolve(psi, u), u.conj().T)
        if np.abs(evolved - psi).max() > 1e-12:
            failures.append({"trial": t, "law": "evolve-inverse"})
    return _report(
        "quantum.random-kernel", "quantum", not failures, failures,
        {"trials": trials, "worst_defects": worst},
    )


def check_fock_counting(max_n: int = 4, max_k: int = 4) -> CheckReport:
    failures = []
    rows = []
    for n in range(max_n + 1):
        for k in range(1, max_k + 1):
            mb = fock.count_states(n, k, "MB")
            be = fock.count_states(n, k, "BE")
            fd = fock.count_states(n, k, "FD") if n <= k else None
            row = {"n": n, "k": k, "MB": mb, "BE": be, "FD": fd}
            rows.append(row)
            if fock.classical_quotient_oracle(n, k, "BE") != be:
                failures.append({"law": "BE-oracle", "n": n, "k": k})
            if fd is not None and fock.classical_quotient_oracle(n, k, "FD") != fd:
                failures.append({"law": "FD-oracle", "n": n, "k": k})
            if fock.classical_quotient_oracle(n, k, "MB") != mb:
                failures.append({"law": "MB-oracle", "n": n, "k": k})
    return _report(
        "fock.counting", "fock", not failures, failures,
        {"cells": len(rows), "example": rows[min(10, len(rows) - 1)]},
    )


def check_fock_algebra() -> CheckReport:
    failures = []
    car = fock.check_algebra(fock.build_fock_space(2, 2, fock.FERMIONIC))
    if not car.ok:
        failures.append({"case": "fermionic", "report": car.to_dict()})
    ccr = fock.check_algebra(fock.build_fock_space(2, 4, fock.BOSONIC))
    if not ccr.ok:
        failures.append({"case": "bosonic", "report": ccr.to_dict()})
    spaces = [
        fock.build_fock_space(2, 3, fock.BOSONIC),
        fock.build_fock_space(3, 3, fock.FERMIONIC),
    ]
    if not all(fock.check_number_operator(s) for s in spaces):
        failures.append({"case": "number-operator"})
    return _report(
        "fock.algebra", "fock", not failures, failures,
        {
            "bosonic_boundary_excluded": ccr.boundary_excluded,
            "fermionic_identities": len(car.identities),
        },
    )


def check_fock_indistinguishability(seed: int, trials: int = 20) -> CheckReport:
    rng = np.random.default_rng(seed + 1)
    failures = []
    e = np.eye(2)
    anti = fock.symmetrize([e[0], e[1]], fock.FERMIONIC).vector
    sym = fock.symmetrize([e[0], random_state(rng, 2)], fock.BOSONIC).vector
    worst = 0.0
    for t in range(trials):
        obs = random_hermitian(rng, 4)
        for state in (anti, sym):
            rep = fock.indistinguishability_check(state, obs, [1, 0])
            worst = max(worst, rep.difference)
            if not (rep.applicable and rep.within_tolerance):
                failures.append({"trial": t, "difference": rep.difference})
    # the designated violation: unsymmetrized |01> against Z (x) I under swap
    unsym = np.kron(e[0], e[1])
    z_first = np.kron(np.diag([1.0, -1.0]), np.eye(2))
    counter = fock.indistinguishability_check(unsym, z_first, [1, 0])
    if counter.applicable or counter.within_tolerance:
        failures.append({"case": "unsymmetrized", "report": counter.to_dict()})
    pauli = fock.symmetrize([e[0], e[0]], fock.FERMIONIC)
    if not pauli.zero:
        failures.append({"case": "pauli-exclusion"})
    return _report(
        "fock.indistinguishability", "fock", not failures, failures,
        {
            "trials": trials,
            "worst_difference": worst,
            "counterexample_gap": counter.difference,
        },
    )


def run_suite(seed: int = 0) -> dict[str, Any]:
    """Run every check deterministically and bundle the reports."""
    rng = random.Random(seed)
    checks = [
        check_qset_laws(rng),
        check_qset_powerset(rng),
        check_qset_classification(),
        check_conjugation_fixture(),
        check_automorphism_oracle(rng),
        check_rigidify(rng),
        check_ur_universe(),
        check_parser_roundtrip(rng),
        check_poor_language(),
        check_identity_axiom_suite(),
        check_pii_second_order(),
        check_qm_fixture(),
        check_qm_random(seed),
        check_fock_counting(),
        check_fock_algebra(),
        check_fock_indistinguishability(seed),
    ]
    return bundle(checks, seed=seed)
