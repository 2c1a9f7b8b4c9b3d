"""FastAPI service exposing every checker over HTTP.

The CLI is a thin client of this app; the same handlers serve both an
in-process transport and a deployed server.  Malformed inputs map to 422
with a structured detail; check outcomes are payload, not status codes.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException

from .. import fock, qsets, quantum, structures, suite
from ..errors import (
    BoundExceededError,
    EvaluationError,
    KindConflictError,
    ParseError,
    UnknownKindError,
)
from ..logic import (
    check_identity_axioms,
    defined_identity,
    defined_identity_formula,
    evaluate,
    format_formula,
    format_structure,
    parse_formula,
    parse_structure,
    pii_first_order,
    pii_second_order,
)
from ..reports import REPORT_SCHEMA
from . import models

_INPUT_ERRORS = (
    ParseError,
    KindConflictError,
    UnknownKindError,
    BoundExceededError,
    EvaluationError,
    ValueError,
    KeyError,
)


def _bad_request(exc: Exception) -> HTTPException:
    detail: dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        detail.update({"message": exc.message, "line": exc.line, "column": exc.column})
    return HTTPException(status_code=422, detail=detail)


def create_app() -> FastAPI:
    app = FastAPI(
        title="quasilab",
        description="Finite-model laboratory: quasi-sets, structure symmetry,"
        " identity/PII checking, quantum statistics by state counting.",
        version="0.1.0",
    )

    @app.get("/health")
    def health() -> dict[str, Any]:
        return {"status": "ok", "schema": REPORT_SCHEMA}

    # -- structures ----------------------------------------------------------

    def _parse_guarded(source: str, max_domain: int | None) -> structures.FiniteStructure:
        s = parse_structure(source)
        if max_domain is not None and s.size > max_domain:
            raise BoundExceededError(
                f"domain size {s.size} exceeds the requested guard {max_domain}"
            )
        return s

    @app.post("/structure/automorphisms", response_model=models.AutomorphismsResponse)
    def structure_automorphisms(req: models.StructureRequest):
        try:
            s = _parse_guarded(req.source, req.max_domain)
            autos = structures.automorphisms(s)
            parts = structures.orbits(s, autos)
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.AutomorphismsResponse(
            count=len(autos),
            automorphisms=[list(p.mapping) for p in autos],
            rigid=len(autos) == 1,
            orbits=parts,
            labels=s.labels,
        )

    @app.post("/structure/rigid", response_model=models.RigidResponse)
    def structure_rigid(req: models.StructureRequest):
        try:
            s = _parse_guarded(req.source, req.max_domain)
            return models.RigidResponse(rigid=structures.is_rigid(s))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)

    @app.post("/structure/rigidify", response_model=models.RigidifyResponse)
    def structure_rigidify(req: models.StructureRequest):
        try:
            s = _parse_guarded(req.source, req.max_domain)
            out = structures.rigidify(s)
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        added = sorted(set(out.signature.relation_names()) - set(s.signature.relation_names()))
        return models.RigidifyResponse(
            source=format_structure(out), added_relations=added, was_rigid=out is s
        )

    @app.post("/structure/orbits", response_model=models.OrbitsResponse)
    def structure_orbits(req: models.StructureRequest):
        try:
            s = _parse_guarded(req.source, req.max_domain)
            return models.OrbitsResponse(orbits=structures.orbits(s))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)

    @app.post("/structure/ur-universe")
    def structure_ur(req: models.UrUniverseRequest) -> dict[str, Any]:
        import itertools

        try:
            u = structures.build_ur_universe(req.atoms, req.rank, max_members=req.max_members)
            names = sorted({a.name for a in u.atoms})
            extensions = 0
            for perm in itertools.permutations(names):
                structures.extend_permutation(u, dict(zip(names, perm)))
                extensions += 1
            witnesses = [
                structures.identity_property_witness(u, a).__dict__ for a in names
            ]
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return {
            "atoms": names,
            "rank": u.rank,
            "level_sizes": [len(l) for l in u.levels],
            "members": len(u.members),
            "membership_edges": len(u.edges),
            "permutations_extended": extensions,
            "all_extensions_preserve_membership": True,
            "identity_witnesses": witnesses,
        }

    # -- logic -----------------------------------------------------------------

    @app.post("/logic/eval", response_model=models.EvalResponse)
    def logic_eval(req: models.EvalRequest):
        try:
            s = parse_structure(req.structure)
            f = parse_formula(req.formula, s.signature)
            return models.EvalResponse(value=evaluate(s, f, req.assignment))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)

    @app.post("/logic/defined-identity", response_model=models.DefinedIdentityResponse)
    def logic_defined_identity(req: models.DefinedIdentityRequest):
        try:
            s = parse_structure(req.structure)
            value = defined_identity(s, req.a, req.b)
            formula = (
                format_formula(defined_identity_formula(s.signature))
                if s.signature.relations
                else None  # empty language: the agreement conjunction is vacuous
            )
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.DefinedIdentityResponse(identical=value, formula=formula)

    @app.post("/logic/pii/first-order", response_model=models.PiiFirstOrderResponse)
    def logic_pii_first_order(req: models.StructureRequest):
        try:
            pairs = pii_first_order(parse_structure(req.source))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.PiiFirstOrderResponse(
            counterexamples=[list(p) for p in pairs], holds=not pairs
        )

    @app.post("/logic/pii/second-order")
    def logic_pii_second_order(req: models.PiiSecondOrderRequest) -> dict[str, Any]:
        try:
            return pii_second_order(parse_structure(req.structure), req.semantics).to_dict()
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)

    @app.post("/logic/identity-axioms")
    def logic_axioms(req: models.AxiomsRequest) -> dict[str, Any]:
        try:
            s = parse_structure(req.structure)
            return check_identity_axioms(s, req.equality, req.membership).to_dict()
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)

    # -- quasi-sets --------------------------------------------------------------

    def _qset(req_source: str, name: str | None) -> qsets.QSet:
        return qsets.parse_qsets(req_source).get(name)

    @app.post("/qset/card", response_model=models.QsetCardResponse)
    def qset_card(req: models.QsetRequest):
        try:
            q = _qset(req.source, req.name)
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.QsetCardResponse(qcard=qsets.qcard(q), canonical=qsets.format_qset(q))

    @app.post("/qset/union", response_model=models.QsetBinaryResponse)
    def qset_union(req: models.QsetBinaryRequest):
        try:
            doc = qsets.parse_qsets(req.source)
            out = qsets.qunion(
                doc.get(req.left), doc.get(req.right), disjoint_source=req.disjoint_source
            )
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        mode = (
            "disjoint-source reading: multiplicities add"
            if req.disjoint_source
            else "overlapping-source reading: pointwise maxima"
        )
        return models.QsetBinaryResponse(
            result=qsets.format_qset(out),
            qcard=qsets.qcard(out),
            note=f"reconstructed union semantics; {mode} (declared by the caller)",
        )

    @app.post("/qset/intersection", response_model=models.QsetBinaryResponse)
    def qset_intersection(req: models.QsetBinaryRequest):
        try:
            doc = qsets.parse_qsets(req.source)
            out = qsets.qintersection(doc.get(req.left), doc.get(req.right))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.QsetBinaryResponse(
            result=qsets.format_qset(out),
            qcard=qsets.qcard(out),
            note="reconstructed intersection semantics: pointwise minima",
        )

    @app.post("/qset/indistinguishable", response_model=models.QsetIndistResponse)
    def qset_indistinguishable(req: models.QsetBinaryRequest):
        try:
            doc = qsets.parse_qsets(req.source)
            value = qsets.indistinguishable(doc.get(req.left), doc.get(req.right))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.QsetIndistResponse(indistinguishable=value)

    @app.post("/qset/powerset")
    def qset_powerset(req: models.QsetRequest) -> dict[str, Any]:
        try:
            rep = qsets.qpowerset_report(_qset(req.source, req.name))
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return {
            "members": [
                qsets.format_qset(child)
                for child, mult in rep.collection.nested
                for _ in range(mult)
            ],
            "enumerated_qcard": rep.enumerated_qcard,
            "axiom_qcard": rep.axiom_qcard,
            "agree": rep.agree,
            "note": "occupancy-enumeration reading; the axiomatic power-qset"
            " cardinal 2^qcard differs once multiplicities exceed 1",
        }

    @app.post("/qset/classify", response_model=models.ClassifyResponse)
    def qset_classify(req: models.ClassifyRequest):
        verdict = qsets.classify_individuality(req.discernible, req.reidentifiable)
        return models.ClassifyResponse(
            discernible=verdict.discernible,
            reidentifiable=verdict.reidentifiable,
            category=verdict.category,
        )

    # -- quantum -------------------------------------------------------------------

    @app.post("/qm/check")
    def qm_check(req: models.QmDocumentRequest) -> dict[str, Any]:
        try:
            q = quantum.load_qm_structure(req.document)
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return quantum.validate_qm_structure(q).to_dict()

    @app.post("/qm/prob", response_model=models.QmProbResponse)
    def qm_prob(req: models.QmProbRequest):
        try:
            q = quantum.load_qm_structure(req.document)
            space = q.space_for(req.system)
            if req.state not in space.states:
                raise ValueError(f"state {req.state!r} is not declared for this space")
            if not 0 <= req.observable < len(space.observables):
                raise ValueError(f"observable index {req.observable} out of range")
            p = quantum.born_probability(
                space.states[req.state],
                space.observables[req.observable],
                q.borel_element(req.borel),
            )
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return models.QmProbResponse(probability=p, space_index=q.system_space[req.system])

    # -- fock ------------------------------------------------------------------------

    @app.post("/fock/count")
    def fock_count(req: models.FockCountRequest) -> dict[str, Any]:
        try:
            wanted = ["MB", "BE", "FD"] if req.stat == "all" else [req.stat.upper()]
            counts: dict[str, int | None] = {}
            oracle: dict[str, int | None] = {}
            for stat in wanted:
                if stat == "FD" and req.n > req.k:
                    counts[stat] = None
                    oracle[stat] = None
                    continue
                counts[stat] = fock.count_states(req.n, req.k, stat)
                oracle[stat] = (
                    fock.classical_quotient_oracle(req.n, req.k, stat)
                    if max(req.n, req.k) <= fock.QUOTIENT_GUARD
                    else None
                )
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        agree = all(
            oracle[s] is None or counts[s] == oracle[s] for s in counts
        )
        return {"n": req.n, "k": req.k, "counts": counts, "quotient_oracle": oracle, "agree": agree}

    @app.post("/fock/algebra")
    def fock_algebra(req: models.FockAlgebraRequest) -> dict[str, Any]:
        try:
            space = fock.build_fock_space(req.modes, req.nmax, req.stat)
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        report = fock.check_algebra(space).to_dict()
        report["dim"] = space.dim
        report["number_operator_exact"] = fock.check_number_operator(space)
        return report

    @app.post("/fock/table")
    def fock_table(req: models.FockTableRequest) -> dict[str, Any]:
        if req.max_n < 0 or req.max_k < 1:
            raise _bad_request(ValueError("table needs max_n >= 0 and max_k >= 1"))
        rows = []
        try:
            for n in range(req.max_n + 1):
                for k in range(1, req.max_k + 1):
                    rows.append(
                        {
                            "n": n,
                            "k": k,
                            "MB": fock.count_states(n, k, "MB"),
                            "BE": fock.count_states(n, k, "BE"),
                            "FD": fock.count_states(n, k, "FD") if n <= k else None,
                        }
                    )
        except _INPUT_ERRORS as exc:
            raise _bad_request(exc)
        return {"rows": rows}

    # -- reports -----------------------------------------------------------------------

    @app.post("/report/run")
    def report_run(req: models.ReportRunRequest) -> dict[str, Any]:
        return suite.run_suite(req.seed)

    return app


app = create_app()
