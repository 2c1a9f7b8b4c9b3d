"""Truncated Fock spaces and quantum statistics by direct state counting.

The basis is the set of occupancy vectors: per-mode occupation numbers with
no particle labels anywhere in the representation.  Bose-Einstein and
Fermi-Dirac counts fall out of enumerating these vectors directly; the
labelled "count then quotient by permutations" construction exists here only
as an oracle to confirm the two routes agree.  Ladder operators come in a
float matrix form for general use and a symbolic integer form used to check
the (anti)commutation identities exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Literal, Sequence

import numpy as np

from .errors import BoundExceededError

BOSONIC = "bosonic"
FERMIONIC = "fermionic"

INDISTINGUISHABILITY_TOL = 1e-10


@dataclass(frozen=True)
class OccupancyVector:
    """Per-mode occupation numbers; the label-free many-particle state."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("occupation numbers must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def bumped(self, mode: int, delta: int) -> "OccupancyVector":
        counts = list(self.counts)
        counts[mode] += delta
        return OccupancyVector(tuple(counts))

    def __str__(self) -> str:
        return "|" + ",".join(map(str, self.counts)) + ">"


def _compositions(total: int, modes: int, cap: int | None) -> Iterable[tuple[int, ...]]:
    """Occupancies of `total` over `modes`, first mode descending (graded lex)."""
    if modes == 0:
        if total == 0:
            yield ()
        return
    top = total if cap is None else min(total, cap)
    for first in range(top, -1, -1):
        for rest in _compositions(total - first, modes - 1, cap):
            yield (first,) + rest


class FockSpace:
    """Occupancy basis with total particle number at most max_total."""

    def __init__(self, modes: int, max_total: int, statistics: str):
        if modes < 1:
            raise ValueError("at least one mode required")
        if max_total < 0:
            raise ValueError("max_total must be >= 0")
        if statistics not in (BOSONIC, FERMIONIC):
            raise ValueError(f"unknown statistics {statistics!r}")
        if statistics == FERMIONIC and max_total > modes:
            raise ValueError(
                f"fermionic truncation needs max_total <= modes, got {max_total} > {modes}"
            )
        self.modes = modes
        self.max_total = max_total
        self.statistics = statistics
        cap = 1 if statistics == FERMIONIC else None
        self.basis: tuple[OccupancyVector, ...] = tuple(
            OccupancyVector(c)
            for n in range(max_total + 1)
            for c in _compositions(n, modes, cap)
        )
        self.index: dict[tuple[int, ...], int] = {
            v.counts: i for i, v in enumerate(self.basis)
        }
        expected = sum(
            count_states(n, modes, "FD" if statistics == FERMIONIC else "BE")
            for n in range(max_total + 1)
        )
        if len(self.basis) != expected:
            raise AssertionError("basis enumeration disagrees with the counting formula")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_vector(self, occ: OccupancyVector | Sequence[int]) -> np.ndarray:
        counts = occ.counts if isinstance(occ, OccupancyVector) else tuple(occ)
        out = np.zeros(self.dim, dtype=complex)
        out[self.index[counts]] = 1.0
        return out

    def boundary(self) -> list[OccupancyVector]:
        """Basis states sitting on the truncation surface (total == max_total)."""
        return [v for v in self.basis if v.total == self.max_total]

    # -- ladder action, symbolic: amplitude is sign * sqrt(radicand) ----------

    def _step(
        self, kind: str, mode: int, v: OccupancyVector
    ) -> tuple[int, int, OccupancyVector] | None:
        """One ladder application; None when the state is annihilated.

        Creation beyond the truncation bound also returns None: the operator
        matrix projects back into the space, losing that component.
        """
        n_m = v.counts[mode]
        if self.statistics == FERMIONIC:
            sign = -1 if sum(v.counts[:mode]) % 2 else 1
            if kind == "create":
                if n_m == 1 or v.total + 1 > self.max_total:
                    return None
                return sign, 1, v.bumped(mode, +1)
            if n_m == 0:
                return None
            return sign, 1, v.bumped(mode, -1)
        if kind == "create":
            if v.total + 1 > self.max_total:
                return None
            return 1, n_m + 1, v.bumped(mode, +1)
        if n_m == 0:
            return None
        return 1, n_m, v.bumped(mode, -1)

    def chain(
        self, ops: Sequence[tuple[str, int]], v: OccupancyVector
    ) -> tuple[int, int, OccupancyVector] | None:
        """Apply ladder operators left to right, exactly.

        Returns (sign, radicand, target): the amplitude is sign*sqrt(radicand)
        with radicand an exact integer product of the step factors.
        """
        sign, radicand = 1, 1
        for kind, mode in ops:
            step = self._step(kind, mode, v)
            if step is None:
                return None
            s, r, v = step
            sign *= s
            radicand *= r
        return sign, radicand, v

    # -- matrices --------------------------------------------------------------

    def creation_matrix(self, mode: int) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for j, v in enumerate(self.basis):
            step = self._step("create", mode, v)
            if step is not None:
                sign, radicand, w = step
                out[self.index[w.counts], j] = sign * math.sqrt(radicand)
        return out

    def annihilation_matrix(self, mode: int) -> np.ndarray:
        # adjoint of creation; real matrices, so plain transpose
        return self.creation_matrix(mode).T.copy()

    def number_operator(self) -> np.ndarray:
        total = np.zeros((self.dim, self.dim))
        for m in range(self.modes):
            c = self.creation_matrix(m)
            total += c @ c.T
        return total


@dataclass(frozen=True)
class LadderOperator:
    """A creation or annihilation operator realized over the truncated basis."""

    mode: int
    kind: Literal["creation", "annihilation"]
    matrix: np.ndarray


def build_fock_space(modes: int, max_total: int, statistics: str) -> FockSpace:
    return FockSpace(modes, max_total, statistics)


def ladder_operator(space: FockSpace, mode: int, kind: str) -> LadderOperator:
    if kind == "creation":
        return LadderOperator(mode, "creation", space.creation_matrix(mode))
    if kind == "annihilation":
        return LadderOperator(mode, "annihilation", space.annihilation_matrix(mode))
    raise ValueError(f"unknown ladder kind {kind!r}")


@dataclass
class LadderResult:
    """Result state plus a flag for amplitude lost to the truncation surface."""

    vector: np.ndarray
    truncated: bool


def _as_state(space: FockSpace, state: Any) -> np.ndarray:
    if isinstance(state, OccupancyVector):
        return space.basis_vector(state)
    if isinstance(state, (tuple, list)) and all(isinstance(x, int) for x in state):
        return space.basis_vector(state)
    out = np.asarray(state, dtype=complex)
    if out.shape != (space.dim,):
        raise ValueError(f"state must have dimension {space.dim}")
    return out


def apply_creation(space: FockSpace, mode: int, state: Any) -> LadderResult:
    """Apply the creation operator for one mode.

    Amplitude on basis states whose image would exceed the truncation bound is
    dropped by the matrix; the flag records whether that happened.
    """
    if not 0 <= mode < space.modes:
        raise ValueError(f"mode {mode} out of range")
    vec = _as_state(space, state)
    lost = 0.0
    for j, v in enumerate(space.basis):
        if vec[j] != 0 and v.total == space.max_total:
            if space.statistics == BOSONIC or v.counts[mode] == 0:
                lost += abs(vec[j]) ** 2
    return LadderResult(space.creation_matrix(mode) @ vec, truncated=lost > 0.0)


def apply_annihilation(space: FockSpace, mode: int, state: Any) -> LadderResult:
    """Apply the annihilation operator; it never crosses the truncation bound."""
    if not 0 <= mode < space.modes:
        raise ValueError(f"mode {mode} out of range")
    vec = _as_state(space, state)
    return LadderResult(space.annihilation_matrix(mode) @ vec, truncated=False)


# -- algebra checks -------------------------------------------------------------


@dataclass
class AlgebraIdentity:
    name: str
    exact: bool
    float_defect: float

    def to_dict(self) -> dict[str, Any]:
        return {"identity": self.name, "exact": self.exact, "float_defect": self.float_defect}


@dataclass
class AlgebraReport:
    """Commutation-relation audit for a truncated Fock space.

    The canonical relations cannot hold on the truncation surface, so the
    columns for boundary states are excluded and listed; everywhere else the
    identities are verified with exact integer arithmetic (the float defect of
    the matrix route is reported alongside, for reference).
    """

    statistics: str
    modes: int
    max_total: int
    identities: list[AlgebraIdentity] = field(default_factory=list)
    boundary_excluded: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(i.exact for i in self.identities)

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistics": self.statistics,
            "modes": self.modes,
            "max_total": self.max_total,
            "ok": self.ok,
            "identities": [i.to_dict() for i in self.identities],
            "boundary_excluded": self.boundary_excluded,
        }


def _delta(m: int, n: int) -> int:
    return 1 if m == n else 0


def _isqrt_exact(radicand: int) -> int | None:
    root = math.isqrt(radicand)
    return root if root * root == radicand else None


def _split_square(radicand: int) -> tuple[int, int]:
    """radicand = s*s*f with f squarefree; sqrt(radicand) = s*sqrt(f)."""
    s, f = 1, radicand
    p = 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1
    return s, f


def _bracket_holds(
    space: FockSpace, m: int, n: int, v: OccupancyVector, anti: bool
) -> bool:
    """Exact check that (a_m adag_n -/+ adag_n a_m)|v> = delta(m,n)|v>.

    Amplitudes are tracked as integer multiples of square roots of squarefree
    integers, so cancellation and the expected coefficient are decided with
    integer arithmetic only.
    """
    combo: dict[tuple[int, ...], dict[int, int]] = {}

    def add(term: tuple[int, int, OccupancyVector] | None, factor: int) -> None:
        if term is None:
            return
        sign, radicand, target = term
        s, f = _split_square(radicand)
        entry = combo.setdefault(target.counts, {})
        entry[f] = entry.get(f, 0) + factor * sign * s

    add(space.chain([("create", n), ("annihilate", m)], v), 1)
    add(space.chain([("annihilate", m), ("create", n)], v), 1 if anti else -1)

    expected = {v.counts: {1: 1}} if m == n else {}
    cleaned = {
        key: {f: c for f, c in entry.items() if c != 0}
        for key, entry in combo.items()
    }
    cleaned = {key: entry for key, entry in cleaned.items() if entry}
    return cleaned == expected


def check_algebra(space: FockSpace) -> AlgebraReport:
    """Audit the canonical (anti)commutation relations.

    Bosonic: [a_m, adag_n] = delta I on every basis state below the truncation
    surface.  Fermionic: {a_m, adag_n} = delta I (below the surface when
    truncated; the full space otherwise), plus {a_m, a_n} = 0 and
    adag_m adag_m = 0 everywhere.
    """
    report = AlgebraReport(space.statistics, space.modes, space.max_total)
    fermionic = space.statistics == FERMIONIC
    truncated = space.max_total < space.modes if fermionic else True
    if truncated:
        report.boundary_excluded = [str(v) for v in space.boundary()]
        interior = [v for v in space.basis if v.total < space.max_total]
    else:
        interior = list(space.basis)

    matrices_c = [space.creation_matrix(m) for m in range(space.modes)]
    matrices_a = [c.T for c in matrices_c]
    interior_idx = [space.index[v.counts] for v in interior]

    for m in range(space.modes):
        for n in range(space.modes):
            ok = all(
                _bracket_holds(space, m, n, v, anti=fermionic) for v in interior
            )
            bracket = (
                matrices_a[m] @ matrices_c[n]
                + (1 if fermionic else -1) * matrices_c[n] @ matrices_a[m]
            )
            expected = _delta(m, n) * np.eye(space.dim)
            defect = (
                float(np.abs((bracket - expected)[:, interior_idx]).max())
                if interior_idx
                else 0.0
            )
            sym = "{a,adag}" if fermionic else "[a,adag]"
            report.identities.append(
                AlgebraIdentity(
                    f"{sym}({m},{n}) = {_delta(m, n)}*I", ok, defect
                )
            )

    if fermionic:
        for m in range(space.modes):
            for n in range(m, space.modes):
                anti = matrices_a[m] @ matrices_a[n] + matrices_a[n] @ matrices_a[m]
                exact = not anti.any()
                report.identities.append(
                    AlgebraIdentity(
                        f"{{a,a}}({m},{n}) = 0", exact, float(np.abs(anti).max())
                    )
                )
        for m in range(space.modes):
            square = matrices_c[m] @ matrices_c[m]
            exact = not square.any()
            report.identities.append(
                AlgebraIdentity(f"adag({m})^2 = 0", exact, float(np.abs(square).max()))
            )
    return report


def check_number_operator(space: FockSpace) -> bool:
    """Every occupancy basis state is an exact eigenvector of sum adag_m a_m."""
    for v in space.basis:
        total = 0
        for m in range(space.modes):
            out = space.chain([("annihilate", m), ("create", m)], v)
            if out is None:
                continue
            sign, radicand, target = out
            root = _isqrt_exact(radicand)
            if root is None or target != v or sign != 1:
                return False
            total += root
        if total != v.total:
            return False
    return True


# -- state counting -------------------------------------------------------------

CountingStat = Literal["MB", "BE", "FD"]

ENUMERATION_GUARD = 10_000_000


def count_states(n: int, k: int, statistics: str) -> int:
    """Number of n-particle states over k modes, by closed form AND enumeration.

    MB counts labelled assignments (k^n); BE counts occupancy vectors
    (C(n+k-1, n)); FD counts 0/1 occupancy vectors (C(k, n)).  The closed form
    and a direct enumeration of the underlying objects must agree, otherwise
    this raises.  Enumeration is part of the contract, so cells too large to
    enumerate are refused rather than silently trusted to the formula.
    """
    stat = statistics.upper()
    if n < 0 or k < 0:
        raise ValueError("particle and mode counts must be >= 0")
    if stat not in ("MB", "BE", "FD"):
        raise ValueError(f"unknown statistics {statistics!r} (use MB, BE, or FD)")
    if stat == "FD" and n > k:
        raise ValueError(f"FD requires n <= k, got n={n} > k={k}")
    if k == 0:
        return 1 if n == 0 else 0

    if stat == "MB":
        closed = k**n
    elif stat == "BE":
        closed = math.comb(n + k - 1, n)
    else:
        closed = math.comb(k, n)
    if closed > ENUMERATION_GUARD:
        raise BoundExceededError(
            f"cell n={n}, k={k}, {stat} has {closed} states, too many to"
            f" enumerate (guard {ENUMERATION_GUARD})"
        )
    if stat == "MB":
        enumerated = sum(1 for _ in itertools.product(range(k), repeat=n))
    elif stat == "BE":
        enumerated = sum(1 for _ in _compositions(n, k, None))
    else:
        enumerated = sum(1 for _ in _compositions(n, k, 1))
    if closed != enumerated:
        raise AssertionError(
            f"closed form {closed} disagrees with enumeration {enumerated}"
        )
    return closed


QUOTIENT_GUARD = 6


def classical_quotient_oracle(n: int, k: int, statistics: str) -> int:
    """The labelled-individuals route: enumerate k^n assignments, then identify
    permutation-equivalent ones (and, for FD, discard multiply-occupied
    orbits).  Exists to confirm that direct occupancy counting gives the same
    BE/FD numbers without any quotienting step."""
    stat = statistics.upper()
    if n > QUOTIENT_GUARD or k > QUOTIENT_GUARD:
        raise BoundExceededError(
            f"labelled enumeration guarded at n, k <= {QUOTIENT_GUARD}"
        )
    if stat == "FD" and n > k:
        raise ValueError(f"FD requires n <= k, got n={n} > k={k}")
    if k == 0:
        return 1 if n == 0 else 0
    assignments = itertools.product(range(k), repeat=n)
    if stat == "MB":
        return sum(1 for _ in assignments)
    orbits = {tuple(sorted(a)) for a in assignments}
    if stat == "BE":
        return len(orbits)
    if stat == "FD":
        return sum(1 for o in orbits if len(set(o)) == len(o))
    raise ValueError(f"unknown statistics {statistics!r}")


# -- (anti)symmetrization and the indistinguishability postulate ------------------


def _parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class SymmetrizedState:
    """An (anti)symmetrized product state; zero marks Pauli exclusion."""

    vector: np.ndarray
    statistics: str
    zero: bool


def symmetrize(factors: Sequence[np.ndarray], statistics: str) -> SymmetrizedState:
    """Normalized permanent (bosonic) or determinant (fermionic) expansion.

    Fermionic input with linearly dependent factors collapses to the zero
    vector, which is reported rather than raised.
    """
    if statistics not in (BOSONIC, FERMIONIC):
        raise ValueError(f"unknown statistics {statistics!r}")
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    if not arrays:
        raise ValueError("at least one factor required")
    d = arrays[0].shape[0]
    if any(a.shape != (d,) for a in arrays):
        raise ValueError("all factors must share one dimension")
    n = len(arrays)
    out = np.zeros(d**n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        term = arrays[perm[0]]
        for i in perm[1:]:
            term = np.kron(term, arrays[i])
        coeff = _parity(perm) if statistics == FERMIONIC else 1
        out = out + coeff * term
    norm = float(np.linalg.norm(out))
    if norm < 1e-12:
        return SymmetrizedState(np.zeros(d**n, dtype=complex), statistics, True)
    return SymmetrizedState(out / norm, statistics, False)


def permute_factors(state: np.ndarray, perm: Sequence[int], dim: int) -> np.ndarray:
    """The tensor-factor permutation operator applied to a flat state."""
    n = len(perm)
    if dim**n != state.shape[0]:
        raise ValueError("state length is not dim**len(perm)")
    return np.transpose(state.reshape((dim,) * n), axes=perm).reshape(-1)


@dataclass
class IndistinguishabilityReport:
    """Expectation comparison under a permutation of tensor factors.

    For an (anti)symmetrized state the permutation only flips a global sign,
    so every observable's expectation is unchanged; that is the content of the
    indistinguishability postulate, and on such states it is a theorem.  On an
    unsymmetrized state the comparison can fail, which the report exposes.
    """

    applicable: bool
    symmetry: str | None
    permutation: list[int]
    expectation: float
    permuted_expectation: float
    difference: float
    within_tolerance: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "applicable": self.applicable,
            "symmetry": self.symmetry,
            "permutation": self.permutation,
            "expectation": self.expectation,
            "permuted_expectation": self.permuted_expectation,
            "difference": self.difference,
            "within_tolerance": self.within_tolerance,
        }


def _detect_symmetry(state: np.ndarray, dim: int, n: int) -> str | None:
    tol = 1e-10
    sym = anti = True
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        swapped = permute_factors(state, perm, dim)
        if np.abs(swapped - state).max() > tol:
            sym = False
        if np.abs(swapped + state).max() > tol:
            anti = False
    if sym:
        return "symmetric"
    if anti:
        return "antisymmetric"
    return None


def indistinguishability_check(
    state: np.ndarray,
    observable: np.ndarray,
    perm: Sequence[int],
    *,
    tol: float = INDISTINGUISHABILITY_TOL,
) -> IndistinguishabilityReport:
    """Compare <O> before and after permuting the tensor factors."""
    state = np.asarray(state, dtype=complex)
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    dim = round(state.shape[0] ** (1.0 / n))
    while dim**n < state.shape[0]:
        dim += 1
    if dim**n != state.shape[0]:
        raise ValueError("state length is not a perfect tensor power")
    observable = np.asarray(observable, dtype=complex)
    if observable.shape != (state.shape[0], state.shape[0]):
        raise ValueError("observable shape does not match the state")

    symmetry = _detect_symmetry(state, dim, n) if n > 1 else "symmetric"
    permuted = permute_factors(state, perm, dim)
    e_plain = float(np.vdot(state, observable @ state).real)
    e_perm = float(np.vdot(permuted, observable @ permuted).real)
    difference = abs(e_plain - e_perm)
    return IndistinguishabilityReport(
        applicable=symmetry is not None,
        symmetry=symmetry,
        permutation=perm,
        expectation=e_plain,
        permuted_expectation=e_perm,
        difference=difference,
        within_tolerance=difference <= tol,
    )
