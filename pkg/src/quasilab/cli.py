"""Command-line client for the quasilab service.

Every subcommand is a thin HTTP client: by default requests run against an
in-process instance of the FastAPI app, and `--server URL` points the same
calls at a running deployment.  Exit codes: 0 all checks passed, 1 a check
failed, 2 usage/input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import httpx

from .reports import REPORT_SCHEMA, canonical_json, exit_code

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class ServiceClient:
    """Posts requests either in-process (default) or to a remote server."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def post(self, path: str, payload: dict[str, Any]) -> Any:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=120.0) as client:
                response = client.post(path, json=payload)
        else:
            response = asyncio.run(self._post_inprocess(path, payload))
        if response.status_code == 422:
            detail = response.json().get("detail")
            raise UsageError(_format_detail(detail))
        if response.status_code != 200:
            raise RuntimeError(f"service returned {response.status_code}: {response.text}")
        return response.json()

    @staticmethod
    async def _post_inprocess(path: str, payload: dict[str, Any]) -> httpx.Response:
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://quasilab.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)


def _format_detail(detail: Any) -> str:
    if isinstance(detail, dict):
        msg = detail.get("message", str(detail))
        if "line" in detail and "column" in detail:
            return f"{msg} (line {detail['line']}, column {detail['column']})"
        return str(msg)
    return str(detail)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


@dataclass
class Outcome:
    lines: list[str]
    data: Any
    failed: bool = False


@dataclass
class Command:
    group: str
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[ServiceClient, argparse.Namespace], Outcome]
    covers: list[str] = field(default_factory=list)


COMMANDS: list[Command] = []


def command(group: str, name: str, help: str, covers: list[str]):
    def wrap(fn):
        COMMANDS.append(Command(group, name, help, fn.configure, fn, covers))
        return fn

    return wrap


def _with_configure(configure):
    def wrap(fn):
        fn.configure = configure
        return fn

    return wrap


def _structure_payload(args) -> dict[str, Any]:
    payload: dict[str, Any] = {"source": _read(args.file)}
    if args.max_domain is not None:
        payload["max_domain"] = args.max_domain
    return payload


def _structure_args(parser):
    parser.add_argument("file", help=".qlog structure file")
    parser.add_argument("--max-domain", type=int, default=None,
                        help="refuse domains larger than this")


# -- structure ---------------------------------------------------------------


@command("structure", "auts", "list the automorphism group",
         ["structures.automorphisms", "structures.orbits"])
@_with_configure(_structure_args)
def cmd_structure_auts(client, args):
    data = client.post("/structure/automorphisms", _structure_payload(args))
    lines = [f"automorphisms: {data['count']}"]
    labels = {int(k): v for k, v in data.get("labels", {}).items()}
    for mapping in data["automorphisms"]:
        moved = [
            f"{labels.get(i, i)}->{labels.get(j, j)}"
            for i, j in enumerate(mapping)
            if i != j
        ]
        lines.append("  " + (" ".join(moved) if moved else "identity"))
    lines.append(f"rigid: {data['rigid']}")
    lines.append("orbits: " + " ".join("{" + ",".join(str(e) for e in orbit) + "}"
                                       for orbit in data["orbits"]))
    return Outcome(lines, data)


@command("structure", "rigid", "test rigidity", ["structures.is_rigid"])
@_with_configure(_structure_args)
def cmd_structure_rigid(client, args):
    data = client.post("/structure/rigid", _structure_payload(args))
    return Outcome([f"rigid: {data['rigid']}"], data)


@command("structure", "rigidify", "extend to a rigid structure conservatively",
         ["structures.rigidify"])
@_with_configure(_structure_args)
def cmd_structure_rigidify(client, args):
    data = client.post("/structure/rigidify", _structure_payload(args))
    lines = [
        f"was_rigid: {data['was_rigid']}",
        f"added_relations: {', '.join(data['added_relations']) or '(none)'}",
        data["source"].rstrip("\n"),
    ]
    return Outcome(lines, data)


@command("structure", "orbits", "orbit partition under the automorphism group",
         ["structures.orbit_indiscernible"])
@_with_configure(_structure_args)
def cmd_structure_orbits(client, args):
    data = client.post("/structure/orbits", _structure_payload(args))
    lines = ["orbits: " + " ".join("{" + ",".join(str(e) for e in orbit) + "}"
                                   for orbit in data["orbits"])]
    return Outcome(lines, data)


def _ur_args(parser):
    parser.add_argument("--atoms", required=True,
                        help="comma-separated ur-element names")
    parser.add_argument("--rank", type=int, required=True)
    parser.add_argument("--max-members", type=int, default=100_000)


@command("structure", "ur", "build an ur-element universe and verify extensions",
         ["structures.build_ur_universe", "structures.extend_permutation",
          "structures.identity_property_witness"])
@_with_configure(_ur_args)
def cmd_structure_ur(client, args):
    atoms = [a for a in args.atoms.split(",") if a]
    data = client.post("/structure/ur-universe",
                       {"atoms": atoms, "rank": args.rank,
                        "max_members": args.max_members})
    lines = [
        f"atoms: {', '.join(data['atoms'])}  rank: {data['rank']}",
        f"level sizes: {data['level_sizes']}  members: {data['members']}",
        f"permutations extended: {data['permutations_extended']}"
        f" (membership preserved: {data['all_extensions_preserve_membership']})",
    ]
    for w in data["identity_witnesses"]:
        lines.append(
            f"identity of {w['atom']}: satisfied by {w['satisfied_by']}"
            f" -> distinct from every other entity: {w['distinct_from_all_others']}"
        )
    failed = not data["all_extensions_preserve_membership"] or not all(
        w["separates"] for w in data["identity_witnesses"]
    )
    return Outcome(lines, data, failed)


# -- logic ---------------------------------------------------------------------


@command("logic", "eval", "evaluate a formula in a structure", ["logic.evaluate", "logic.parse"])
@_with_configure(lambda p: (
    p.add_argument("file", help=".qlog structure file"),
    p.add_argument("--formula", required=True),
    p.add_argument("--assign", nargs="*", default=[], metavar="VAR=ELEM"),
))
def cmd_logic_eval(client, args):
    assignment = {}
    for item in args.assign:
        if "=" not in item:
            raise UsageError(f"bad assignment {item!r}, expected VAR=ELEM")
        var, _, value = item.partition("=")
        try:
            assignment[var] = int(value)
        except ValueError:
            raise UsageError(f"bad assignment {item!r}, element must be an integer")
    data = client.post("/logic/eval", {
        "structure": _read(args.file), "formula": args.formula,
        "assignment": assignment,
    })
    return Outcome([f"value: {data['value']}"], data)


@command("logic", "defid", "defined (language-relative) identity of two elements",
         ["logic.defined_identity", "logic.defined_identity_formula"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--a", type=int, required=True),
    p.add_argument("--b", type=int, required=True),
))
def cmd_logic_defid(client, args):
    data = client.post("/logic/defined-identity", {
        "structure": _read(args.file), "a": args.a, "b": args.b,
    })
    lines = [f"defined-identical: {data['identical']}"]
    if data["formula"] is not None:
        lines.append(f"schema: {data['formula']}")
    return Outcome(lines, data)


@command("logic", "pii", "first-order identity-of-indiscernibles counterexamples",
         ["logic.pii_first_order"])
@_with_configure(lambda p: p.add_argument("file"))
def cmd_logic_pii(client, args):
    data = client.post("/logic/pii/first-order", {"source": _read(args.file)})
    lines = []
    for a, b in data["counterexamples"]:
        lines.append(f"counterexample: ({a}, {b})")
    lines.append(f"PII holds (in this language): {data['holds']}")
    return Outcome(lines, data, failed=not data["holds"])


@command("logic", "pii2", "second-order PII under full or orbit-invariant semantics",
         ["logic.pii_second_order"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--semantics", choices=["full", "orbit-invariant"], default="full"),
))
def cmd_logic_pii2(client, args):
    data = client.post("/logic/pii/second-order", {
        "structure": _read(args.file), "semantics": args.semantics,
    })
    lines = [f"semantics: {data['semantics']}"]
    for failure in data["failures"]:
        lines.append(f"no witness for pair: ({failure[0]}, {failure[1]})")
    lines.append(f"PII holds: {data['holds']}")
    return Outcome(lines, data, failed=not data["holds"])


@command("logic", "axioms", "check the identity axioms for a designated relation",
         ["logic.check_identity_axioms"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--eq", required=True, help="designated equality relation"),
    p.add_argument("--member", default=None, help="designated membership relation"),
))
def cmd_logic_axioms(client, args):
    data = client.post("/logic/identity-axioms", {
        "structure": _read(args.file), "equality": args.eq,
        "membership": args.member,
    })
    lines = []
    for verdict in data["verdicts"]:
        status = {True: "holds", False: "FAILS", None: "not applicable"}[verdict["holds"]]
        lines.append(f"{verdict['axiom']}: {status}")
        for ce in verdict["counterexamples"][:3]:
            lines.append(f"  witness: {ce}")
    return Outcome(lines, data, failed=not data["all_hold"])


# -- qset ------------------------------------------------------------------------


@command("qset", "card", "quasi-cardinal of a quasi-set", ["qsets.qcard"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--name", default=None),
))
def cmd_qset_card(client, args):
    data = client.post("/qset/card", {"source": _read(args.file), "name": args.name})
    return Outcome([f"qcard: {data['qcard']}", data["canonical"]], data)


def _qset_binary_args(p):
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)


@command("qset", "union", "quasi-union (overlapping or disjoint source)", ["qsets.qunion"])
@_with_configure(lambda p: (
    _qset_binary_args(p),
    p.add_argument("--disjoint", action="store_true",
                   help="operands were prepared separately; multiplicities add"),
))
def cmd_qset_union(client, args):
    data = client.post("/qset/union", {
        "source": _read(args.file), "left": args.left, "right": args.right,
        "disjoint_source": args.disjoint,
    })
    return Outcome([data["result"], f"qcard: {data['qcard']}"], data)


@command("qset", "intersect", "quasi-intersection", ["qsets.qintersection"])
@_with_configure(_qset_binary_args)
def cmd_qset_intersect(client, args):
    data = client.post("/qset/intersection", {
        "source": _read(args.file), "left": args.left, "right": args.right,
    })
    return Outcome([data["result"], f"qcard: {data['qcard']}"], data)


@command("qset", "indist", "indistinguishability of two quasi-sets",
         ["qsets.indistinguishable"])
@_with_configure(_qset_binary_args)
def cmd_qset_indist(client, args):
    data = client.post("/qset/indistinguishable", {
        "source": _read(args.file), "left": args.left, "right": args.right,
    })
    return Outcome([f"indistinguishable: {data['indistinguishable']}"], data)


@command("qset", "power", "power quasi-set with both cardinality readings",
         ["qsets.qpowerset", "qsets.qpowerset_report"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--name", default=None),
))
def cmd_qset_power(client, args):
    data = client.post("/qset/powerset", {"source": _read(args.file), "name": args.name})
    lines = [m for m in data["members"]]
    lines.append(
        f"enumerated qcard: {data['enumerated_qcard']}"
        f"  axiomatic 2^qcard: {data['axiom_qcard']}"
        f"  agree: {data['agree']}"
    )
    lines.append(f"note: {data['note']}")
    return Outcome(lines, data)


@command("qset", "classify", "individuality taxonomy from the two conditions",
         ["qsets.classify_individuality", "qsets.strong_singleton"])
@_with_configure(lambda p: (
    p.add_argument("--discernible", choices=["true", "false"], required=True),
    p.add_argument("--reidentifiable", choices=["true", "false"], required=True),
))
def cmd_qset_classify(client, args):
    data = client.post("/qset/classify", {
        "discernible": args.discernible == "true",
        "reidentifiable": args.reidentifiable == "true",
    })
    return Outcome([f"category: {data['category']}"], data)


# -- qm ------------------------------------------------------------------------------


@command("qm", "check", "validate a quantum structure declaration",
         ["quantum.validate_qm_structure", "quantum.spectral_decompose"])
@_with_configure(lambda p: p.add_argument("file", help="JSON declaration"))
def cmd_qm_check(client, args):
    import json as _json

    try:
        document = _json.loads(_read(args.file))
    except ValueError as exc:
        raise UsageError(f"bad JSON in {args.file}: {exc}")
    data = client.post("/qm/check", {"document": document})
    lines = []
    for item in data["items"]:
        lines.append(f"{'ok  ' if item['ok'] else 'FAIL'} {item['check']}: {item['detail']}")
    lines.append(f"valid: {data['ok']}")
    return Outcome(lines, data, failed=not data["ok"])


@command("qm", "prob", "Born probability for a declared state/observable/interval",
         ["quantum.born_probability", "quantum.evolve", "quantum.position_wavefunction"])
@_with_configure(lambda p: (
    p.add_argument("file"),
    p.add_argument("--system", required=True),
    p.add_argument("--state", required=True),
    p.add_argument("--observable", type=int, required=True),
    p.add_argument("--borel", required=True),
))
def cmd_qm_prob(client, args):
    import json as _json

    try:
        document = _json.loads(_read(args.file))
    except ValueError as exc:
        raise UsageError(f"bad JSON in {args.file}: {exc}")
    data = client.post("/qm/prob", {
        "document": document, "system": args.system, "state": args.state,
        "observable": args.observable, "borel": args.borel,
    })
    return Outcome([f"probability: {data['probability']!r}"], data)


# -- fock -----------------------------------------------------------------------------


@command("fock", "count", "state counts by direct occupancy counting",
         ["fock.count_states", "fock.classical_quotient_oracle"])
@_with_configure(lambda p: (
    p.add_argument("--n", type=int, required=True),
    p.add_argument("--k", type=int, required=True),
    p.add_argument("--stat", choices=["mb", "be", "fd", "all"], default="all"),
))
def cmd_fock_count(client, args):
    data = client.post("/fock/count", {"n": args.n, "k": args.k, "stat": args.stat})
    parts = [
        f"{stat}={value}"
        for stat, value in data["counts"].items()
        if value is not None
    ]
    lines = [" ".join(parts)]
    oracle = {s: v for s, v in data["quotient_oracle"].items() if v is not None}
    if oracle:
        lines.append(
            "labelled-quotient oracle: "
            + " ".join(f"{s}={v}" for s, v in oracle.items())
            + f"  agree: {data['agree']}"
        )
    return Outcome(lines, data, failed=not data["agree"])


@command("fock", "algebra", "audit the (anti)commutation relations",
         ["fock.check_algebra", "fock.build_fock_space", "fock.apply_creation",
          "fock.check_number_operator"])
@_with_configure(lambda p: (
    p.add_argument("--modes", type=int, required=True),
    p.add_argument("--nmax", type=int, required=True),
    p.add_argument("--stat", choices=["bosonic", "fermionic"], required=True),
))
def cmd_fock_algebra(client, args):
    data = client.post("/fock/algebra", {
        "modes": args.modes, "nmax": args.nmax, "stat": args.stat,
    })
    lines = [f"space: {data['statistics']} modes={data['modes']}"
             f" nmax={data['max_total']} dim={data['dim']}"]
    for ident in data["identities"]:
        status = "exact" if ident["exact"] else "VIOLATED"
        lines.append(f"  {ident['identity']}: {status}"
                     f" (float defect {ident['float_defect']:.2e})")
    if data["boundary_excluded"]:
        lines.append("boundary states excluded: " + " ".join(data["boundary_excluded"]))
    lines.append(f"number operator exact: {data['number_operator_exact']}")
    lines.append(f"algebra ok: {data['ok']}")
    return Outcome(lines, data, failed=not (data["ok"] and data["number_operator_exact"]))


@command("fock", "table", "MB/BE/FD counting table",
         ["fock.symmetrize", "fock.indistinguishability_check"])
@_with_configure(lambda p: (
    p.add_argument("--max-n", type=int, required=True),
    p.add_argument("--max-k", type=int, required=True),
    p.add_argument("--csv", action="store_true"),
))
def cmd_fock_table(client, args):
    data = client.post("/fock/table", {"max_n": args.max_n, "max_k": args.max_k})
    lines = []
    if args.csv:
        lines.append("n,k,MB,BE,FD")
        for row in data["rows"]:
            fd = "" if row["FD"] is None else row["FD"]
            lines.append(f"{row['n']},{row['k']},{row['MB']},{row['BE']},{fd}")
    else:
        lines.append(f"{'n':>3} {'k':>3} {'MB':>8} {'BE':>8} {'FD':>8}")
        for row in data["rows"]:
            fd = "-" if row["FD"] is None else row["FD"]
            lines.append(f"{row['n']:>3} {row['k']:>3} {row['MB']:>8} {row['BE']:>8} {fd:>8}")
    return Outcome(lines, data)


# -- report ----------------------------------------------------------------------------


@command("report", "run", "run the full check suite", ["suite.run_suite"])
@_with_configure(lambda p: p.add_argument("--seed", type=int, default=0))
def cmd_report_run(client, args):
    data = client.post("/report/run", {"seed": args.seed})
    lines = []
    for check in data["checks"]:
        lines.append(f"{check['verdict']:>14}  {check['name']}")
    s = data["summary"]
    lines.append(
        f"total: {s['total']}  passed: {s['passed']}  failed: {s['failed']}"
        f"  not applicable: {s['not_applicable']}"
    )
    return Outcome(lines, data, failed=exit_code(data) != 0)


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasilab",
        description="Finite-model laboratory for indistinguishability and"
        " quantum statistics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", default=None,
                        help="URL of a running service (default: in-process)")
    common.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                        help="write the machine-readable report to PATH")
    groups = parser.add_subparsers(dest="group", required=True)

    group_help = {
        "structure": "finite structures: automorphisms, rigidity, ur-universes",
        "logic": "formula evaluation, identity axioms, PII checks",
        "qset": "quasi-set operations and individuality classification",
        "qm": "quantum structure validation and Born probabilities",
        "fock": "occupancy spaces, ladder algebra, statistics counting",
        "report": "aggregate check reports",
    }
    by_group: dict[str, Any] = {}
    for cmd in COMMANDS:
        if cmd.group not in by_group:
            gp = groups.add_parser(cmd.group, help=group_help.get(cmd.group, ""))
            by_group[cmd.group] = gp.add_subparsers(dest="command", required=True)
        sub = by_group[cmd.group].add_parser(cmd.name, help=cmd.help, parents=[common])
        cmd.configure(sub)
        sub.set_defaults(_run=cmd.run, _command=f"{cmd.group} {cmd.name}")

    serve = groups.add_parser("serve", help="run the HTTP service", parents=[common])
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(_run=None, _command="serve")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args._command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    client = ServiceClient(args.server)
    try:
        outcome: Outcome = args._run(client, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report and exit 3 per contract
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    for line in outcome.lines:
        print(line)
    if args.json_path:
        envelope = {
            "schema": REPORT_SCHEMA,
            "command": args._command,
            "input": getattr(args, "file", None),
            "data": outcome.data,
        }
        Path(args.json_path).write_text(canonical_json(envelope))
    return EXIT_CHECK_FAILED if outcome.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
