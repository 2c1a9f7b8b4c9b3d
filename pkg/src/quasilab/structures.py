"""Finite relational structures and their symmetries.

Automorphism-group computation (pruned backtracking, exact), orbit-based
indiscernibility, rigidity testing, rigid extension, and hereditarily finite
universes over ur-elements with permutation extension.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import BoundExceededError, QuasilabError

EXHAUSTIVE_BOUND = 10


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities, plus constant symbols."""

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.relations] + list(self.constants)
        if len(names) != len(set(names)):
            raise ValueError("signature symbols must be unique")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"relation {name!r} has arity {arity} < 1")

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def relation_names(self) -> list[str]:
        return [n for n, _ in self.relations]


def signature(
    relations: Mapping[str, int] | Iterable[tuple[str, int]] = (),
    constants: Iterable[str] = (),
) -> Signature:
    rels = relations.items() if isinstance(relations, Mapping) else relations
    return Signature(tuple(sorted(rels)), tuple(sorted(constants)))


class FiniteStructure:
    """A finite relational structure: domain 0..n-1, relation tables, constants."""

    __slots__ = ("signature", "size", "tables", "constants", "labels")

    def __init__(
        self,
        sig: Signature,
        size: int,
        tables: Mapping[str, Iterable[Sequence[int]]] | None = None,
        constants: Mapping[str, int] | None = None,
        labels: Mapping[int, str] | None = None,
    ):
        if size < 0:
            raise ValueError("domain size must be >= 0")
        self.signature = sig
        self.size = size
        self.tables: dict[str, frozenset[tuple[int, ...]]] = {}
        tables = tables or {}
        for name in tables:
            if name not in sig.relation_names():
                raise ValueError(f"table for undeclared relation {name!r}")
        for name, arity in sig.relations:
            rows = set()
            for row in tables.get(name, ()):
                t = tuple(row)
                if len(t) != arity:
                    raise ValueError(
                        f"tuple {t} has arity {len(t)}, relation {name!r} expects {arity}"
                    )
                if any(not 0 <= e < size for e in t):
                    raise ValueError(f"tuple {t} leaves the domain 0..{size - 1}")
                rows.add(t)
            self.tables[name] = frozenset(rows)
        self.constants = dict(constants or {})
        for cname in self.constants:
            if cname not in sig.constants:
                raise ValueError(f"value for undeclared constant {cname!r}")
        for cname, e in self.constants.items():
            if not 0 <= e < size:
                raise ValueError(f"constant {cname!r} = {e} leaves the domain")
        self.labels = dict(labels or {})

    @property
    def domain(self) -> range:
        return range(self.size)

    def holds(self, relation: str, row: Sequence[int]) -> bool:
        return tuple(row) in self.tables[relation]

    def display(self, element: int) -> str:
        return self.labels.get(element, str(element))

    def with_extra(
        self,
        relations: Mapping[str, int],
        tables: Mapping[str, Iterable[Sequence[int]]],
    ) -> "FiniteStructure":
        """A copy extended with fresh relations; existing tables are untouched."""
        sig = Signature(
            tuple(sorted(list(self.signature.relations) + list(relations.items()))),
            self.signature.constants,
        )
        merged: dict[str, Iterable[Sequence[int]]] = dict(self.tables)
        merged.update(tables)
        return FiniteStructure(sig, self.size, merged, self.constants, self.labels)


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on 0..n-1, stored as the image tuple."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self) -> int:
        return len(self.mapping)

    def apply(self, row: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.mapping[i] for i in row)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self ∘ other)(i) = self(other(i))."""
        return Permutation(tuple(self.mapping[other.mapping[i]] for i in range(len(self))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))


def _fingerprint(s: FiniteStructure, e: int) -> tuple:
    """Permutation-invariant element profile used to prune candidate images."""
    prof = []
    for name, arity in s.signature.relations:
        table = s.tables[name]
        for pos in range(arity):
            prof.append(sum(1 for t in table if t[pos] == e))
    return tuple(prof)


def _group_closed(autos: list[Permutation], sample_bound: int = 500) -> bool:
    """Identity, inverses, and composition closure.

    Full closure is quadratic in the group order, so above sample_bound the
    check strides deterministically through the pair grid instead.
    """
    group = set(autos)
    n = len(autos[0]) if autos else 0
    if Permutation.identity(n) not in group:
        return False
    if any(p.inverse() not in group for p in autos):
        return False
    if len(autos) <= sample_bound:
        pairs = itertools.product(autos, autos)
    else:
        pairs = (
            (autos[(k * 7919) % len(autos)], autos[(k * 104729) % len(autos)])
            for k in range(sample_bound)
        )
    return all(p.compose(q) in group for p, q in pairs)


def automorphisms(
    s: FiniteStructure,
    *,
    limit: int | None = None,
    exhaustive_bound: int = EXHAUSTIVE_BOUND,
) -> list[Permutation]:
    """All permutations of the domain preserving every table and constant.

    Backtracking over partial maps with degree-profile pruning; exact at any
    size, but a domain above `exhaustive_bound` triggers a cost warning.  The
    result always contains the identity, is canonically ordered, and is
    checked to be closed as a group (sampled closure above 500 elements).
    With `limit` the search stops early after that many automorphisms, in
    which case no group check is performed.
    """
    n = s.size
    if n > exhaustive_bound:
        warnings.warn(
            f"automorphism search on domain of size {n} exceeds the"
            f" exhaustive-mode bound {exhaustive_bound}; exact but may be slow",
            stacklevel=2,
        )
    if n == 0:
        return [Permutation(())]

    fingerprints = [_fingerprint(s, e) for e in range(n)]
    fixed = set(s.constants.values())
    candidates: list[list[int]] = []
    for e in range(n):
        if e in fixed:
            candidates.append([e])
        else:
            candidates.append(
                [c for c in range(n) if c not in fixed and fingerprints[c] == fingerprints[e]]
            )

    # tuples touching element e whose other components are already assigned
    # when elements are mapped in ascending order
    checks: list[list[tuple[str, tuple[int, ...]]]] = [[] for _ in range(n)]
    for name, _ in s.signature.relations:
        for t in s.tables[name]:
            checks[max(t)].append((name, t))

    found: list[Permutation] = []
    img: list[int] = [0] * n
    used = [False] * n

    def extend(e: int) -> bool:
        if e == n:
            found.append(Permutation(tuple(img)))
            return limit is not None and len(found) >= limit
        for c in candidates[e]:
            if used[c]:
                continue
            img[e] = c
            ok = True
            for name, t in checks[e]:
                if tuple(img[i] for i in t) not in s.tables[name]:
                    ok = False
                    break
            if ok:
                used[c] = True
                if extend(e + 1):
                    return True
                used[c] = False
        return False

    extend(0)
    found.sort()
    if limit is None and not _group_closed(found):
        raise QuasilabError("internal error: automorphism list is not a group")
    return found


def naive_automorphisms(s: FiniteStructure) -> list[Permutation]:
    """Brute-force n! enumeration; the validation fallback for the pruned search."""
    out = []
    for perm in itertools.permutations(range(s.size)):
        p = Permutation(perm)
        if any(p(e) != e for e in s.constants.values()):
            continue
        if all(
            frozenset(p.apply(t) for t in s.tables[name]) == s.tables[name]
            for name in s.tables
        ):
            out.append(p)
    return out


def is_rigid(s: FiniteStructure) -> bool:
    """True iff the identity is the only automorphism."""
    return len(automorphisms(s, limit=2)) == 1


def orbits(s: FiniteStructure, autos: list[Permutation] | None = None) -> list[list[int]]:
    """Automorphism orbits as a sorted partition of the domain."""
    autos = automorphisms(s) if autos is None else autos
    seen: set[int] = set()
    parts: list[list[int]] = []
    for e in s.domain:
        if e in seen:
            continue
        orbit = sorted({p(e) for p in autos})
        seen.update(orbit)
        parts.append(orbit)
    return parts


def orbit_indiscernible(s: FiniteStructure, a: int, b: int) -> bool:
    """True iff some automorphism maps a to b (same orbit)."""
    if not (0 <= a < s.size and 0 <= b < s.size):
        raise ValueError("elements outside the domain")
    if a == b:
        return True
    return any(p(a) == b for p in automorphisms(s))


def rigidify(s: FiniteStructure) -> FiniteStructure:
    """Extend s conservatively to a rigid structure.

    Already-rigid structures come back unchanged.  Otherwise ceil(log2 n)
    fresh unary predicates are added, encoding each element's binary index;
    distinct index profiles leave only the identity automorphism.  Minimality
    of the extension is not claimed.
    """
    if s.size <= 1 or is_rigid(s):
        return s
    bits = max(1, math.ceil(math.log2(s.size)))
    existing = set(s.signature.relation_names()) | set(s.signature.constants)
    names = []
    for j in range(bits):
        name = f"ix{j}"
        while name in existing:
            name = "_" + name
        existing.add(name)
        names.append(name)
    tables = {
        name: [(e,) for e in s.domain if (e >> j) & 1]
        for j, name in enumerate(names)
    }
    out = s.with_extra({name: 1 for name in names}, tables)
    if not is_rigid(out):  # distinct unary profiles force the identity
        raise QuasilabError("internal error: rigidified structure is not rigid")
    return out


# -- hereditarily finite universes over ur-elements ---------------------------


@dataclass(frozen=True, order=True)
class Atom:
    """An ur-element: not a set, but a possible member of sets."""

    name: str


UrMember = Union[Atom, frozenset]

MAX_ATOMS = 4
MAX_RANK = 3
DEFAULT_MAX_MEMBERS = 100_000


class UrUniverse:
    """Hereditary levels over a finite atom set.

    levels[0] is the atom set; levels[k+1] contains every subset of the union
    of levels up to k (so levels are cumulative on the set side).  members
    lists every distinct universe member in a deterministic order; edges is
    the full membership relation over member indices.
    """

    def __init__(self, atoms: Sequence[Atom], rank: int, levels: list[frozenset]):
        self.atoms = tuple(atoms)
        self.rank = rank
        self.levels = levels
        self.members: list[UrMember] = list(self.atoms)
        self.index: dict[UrMember, int] = {a: i for i, a in enumerate(self.atoms)}
        for level in levels[1:]:
            fresh = [x for x in level if x not in self.index]
            fresh.sort(key=lambda x: (len(x), sorted(self.index[m] for m in x)))
            for x in fresh:
                self.index[x] = len(self.members)
                self.members.append(x)
        self.edges = frozenset(
            (self.index[x], self.index[y])
            for y in self.members
            if isinstance(y, frozenset)
            for x in y
        )

    def __contains__(self, x: UrMember) -> bool:
        return x in self.index

    def member_of(self, x: UrMember, y: UrMember) -> bool:
        """x ∈ y; atoms have no members."""
        return isinstance(y, frozenset) and x in y

    def display(self, x: UrMember) -> str:
        if isinstance(x, Atom):
            return x.name
        return "{" + ", ".join(sorted(self.display(m) for m in x)) + "}"


def build_ur_universe(
    atoms: Iterable[str],
    rank: int,
    *,
    max_members: int = DEFAULT_MAX_MEMBERS,
) -> UrUniverse:
    """Materialize the hereditary levels over the given atoms.

    Growth is double exponential, so both hard caps (atoms, rank) and a
    computed member-count guard apply; raise the guard explicitly to go
    bigger.
    """
    names = sorted(set(atoms))
    if len(names) > MAX_ATOMS:
        raise BoundExceededError(f"at most {MAX_ATOMS} ur-elements supported, got {len(names)}")
    if rank < 0 or rank > MAX_RANK:
        raise BoundExceededError(f"rank must lie in 0..{MAX_RANK}, got {rank}")

    cumulative = len(names)
    for _ in range(rank):
        nxt = 2**cumulative
        if nxt > max_members:
            raise BoundExceededError(
                f"a level would hold {nxt} sets (guard {max_members})"
            )
        cumulative = len(names) + nxt

    atom_objs = [Atom(n) for n in names]
    levels: list[frozenset] = [frozenset(atom_objs)]
    pool: set[UrMember] = set(atom_objs)
    for _ in range(rank):
        members = sorted(pool, key=lambda x: (isinstance(x, frozenset), repr(x)))
        level = frozenset(
            frozenset(c)
            for r in range(len(members) + 1)
            for c in itertools.combinations(members, r)
        )
        levels.append(level)
        pool |= level
    return UrUniverse(atom_objs, rank, levels)


@dataclass
class ExtendedPermutation:
    """The membership-preserving extension of an atom permutation."""

    universe: UrUniverse
    atom_map: dict[Atom, Atom]
    mapping: dict[UrMember, UrMember]

    def __call__(self, x: UrMember) -> UrMember:
        return self.mapping[x]


def extend_permutation(
    universe: UrUniverse, atom_map: Mapping[str, str] | Mapping[Atom, Atom]
) -> ExtendedPermutation:
    """Extend a permutation of the atoms to the whole universe.

    The extension sends a set to the set of images of its members; the result
    is verified to be a bijection of the universe preserving membership in
    both directions (an automorphism of the membership structure).
    """
    amap: dict[Atom, Atom] = {}
    for k, v in atom_map.items():
        ka = k if isinstance(k, Atom) else Atom(str(k))
        va = v if isinstance(v, Atom) else Atom(str(v))
        amap[ka] = va
    if set(amap) != set(universe.atoms) or set(amap.values()) != set(universe.atoms):
        raise ValueError("atom map must be a permutation of the universe's atoms")

    cache: dict[UrMember, UrMember] = dict(amap)

    def ext(x: UrMember) -> UrMember:
        if x in cache:
            return cache[x]
        y = frozenset(ext(m) for m in x)
        cache[x] = y
        return y

    mapping = {x: ext(x) for x in universe.members}

    # verification: bijection per level, membership preserved both ways
    for level in universe.levels:
        if {mapping[x] for x in level} != set(level):
            raise QuasilabError("internal error: extension is not a level bijection")
    idx = universe.index
    mapped_edges = {(idx[mapping[universe.members[a]]], idx[mapping[universe.members[b]]])
                    for a, b in universe.edges}
    if mapped_edges != universe.edges:
        raise QuasilabError("internal error: extension does not preserve membership")
    return ExtendedPermutation(universe, amap, mapping)


@dataclass
class IdentityWitnessReport:
    """Outcome of building the 'identity of a' property inside the universe.

    The singleton {a} exists by pairing; the property I_a(x) := x ∈ {a} is
    evaluated against every universe member.  separates is true when a alone
    satisfies it, i.e. the atom is distinct from every other entity here.
    """

    atom: str
    singleton: str
    satisfied_by: list[str]
    separates: bool
    distinct_from_all_others: bool
    members_checked: int


def identity_property_witness(universe: UrUniverse, atom_name: str) -> IdentityWitnessReport:
    """Exhibit the property that picks out a single ur-element."""
    target = Atom(atom_name)
    if target not in universe.atoms:
        raise ValueError(f"no atom named {atom_name!r}")
    if universe.rank < 1:
        raise ValueError("rank >= 1 required: the singleton must exist in the universe")
    singleton = frozenset([target])
    if singleton not in universe:
        raise QuasilabError("internal error: singleton missing from level 1")
    satisfied = [x for x in universe.members if universe.member_of(x, singleton)]
    separates = satisfied == [target]
    return IdentityWitnessReport(
        atom=atom_name,
        singleton=universe.display(singleton),
        satisfied_by=[universe.display(x) for x in satisfied],
        separates=separates,
        distinct_from_all_others=separates,
        members_checked=len(universe.members),
    )
