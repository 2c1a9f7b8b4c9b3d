"""Finite-dimensional quantum kernel.

Hermitian observables with spectral decomposition, Born probabilities over a
finite interval algebra standing in for the Borel sets, unitary evolution, and
a structure type that bundles a *quasi-set* of physical systems with indexed
families of spaces, observables, and unitaries.  All spaces are
finite-dimensional (hence separable); spacetime is reduced to a 1-D grid plus
a time parameter, which is all the wave-function contract needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Union

import numpy as np

from .errors import QuasilabError
from .qsets import Kind, QSet, qcard

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
PROJECTOR_TOL = 1e-10
STATE_NORM_TOL = 1e-9
SIGMA_NORM_TOL = 1e-10
EIGENVALUE_CLUSTER_TOL = 1e-9
BOREL_EDGE_TOL = 1e-9


def _as_matrix(m: Any) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.abs(a - a.conj().T).max()) if a.size else 0.0


def unitarity_defect(u: np.ndarray) -> float:
    eye = np.eye(u.shape[0])
    return float(np.abs(u.conj().T @ u - eye).max()) if u.size else 0.0


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(_as_matrix(a)) <= tol


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_defect(_as_matrix(u)) <= tol


@dataclass(frozen=True)
class BorelSet:
    """A finite union of closed real intervals, canonically merged and sorted.

    Endpoints may be infinite.  Membership uses an edge tolerance so that
    floating-point spectra sitting on an interval boundary are counted in.
    """

    intervals: tuple[tuple[float, float], ...]

    @classmethod
    def of(cls, *intervals: tuple[float, float]) -> "BorelSet":
        cleaned = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("interval endpoints must not be NaN")
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return cls(tuple(merged))

    @classmethod
    def whole_line(cls) -> "BorelSet":
        return cls.of((-math.inf, math.inf))

    @classmethod
    def empty(cls) -> "BorelSet":
        return cls(())

    def contains(self, x: float, tol: float = BOREL_EDGE_TOL) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals)

    def to_json(self) -> list[list[float]]:
        return [[lo, hi] for lo, hi in self.intervals]


@dataclass(frozen=True)
class SpectralLine:
    """One eigenvalue cluster with its eigenspace projector."""

    eigenvalue: float
    projector: np.ndarray


def spectral_decompose(
    a: np.ndarray, *, cluster_tol: float = EIGENVALUE_CLUSTER_TOL
) -> list[SpectralLine]:
    """Eigenvalue clusters (ascending) with orthogonal projectors.

    Nearby eigenvalues (within cluster_tol) are treated as one degenerate
    eigenvalue, so each projector covers a whole eigenspace.  Projector
    idempotence, mutual orthogonality, and completeness are verified.
    """
    a = _as_matrix(a)
    defect = hermiticity_defect(a)
    if defect > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    values, vectors = np.linalg.eigh(a)
    lines: list[SpectralLine] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > cluster_tol:
            block = vectors[:, start:i]
            lines.append(
                SpectralLine(float(values[start:i].mean()), block @ block.conj().T)
            )
            start = i

    total = np.zeros_like(a)
    for li, line in enumerate(lines):
        p = line.projector
        if np.abs(p @ p - p).max() > PROJECTOR_TOL:
            raise QuasilabError("internal error: projector not idempotent")
        for other in lines[li + 1 :]:
            if np.abs(p @ other.projector).max() > PROJECTOR_TOL:
                raise QuasilabError("internal error: projectors not orthogonal")
        total = total + p
    if np.abs(total - np.eye(a.shape[0])).max() > PROJECTOR_TOL:
        raise QuasilabError("internal error: projectors do not resolve the identity")
    return lines


def born_probability(
    psi: np.ndarray,
    a: np.ndarray,
    delta: BorelSet,
    *,
    decomposition: list[SpectralLine] | None = None,
) -> float:
    """Probability that measuring the observable lands in the interval set.

    Sums the squared norms of the eigenspace components whose eigenvalue lies
    in delta.
    """
    psi = np.asarray(psi, dtype=complex)
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > STATE_NORM_TOL:
        raise ValueError(f"state is not normalized (norm^2 = {norm2!r})")
    lines = spectral_decompose(a) if decomposition is None else decomposition
    if lines and lines[0].projector.shape[0] != psi.shape[0]:
        raise ValueError("state and observable dimensions differ")
    total = 0.0
    for line in lines:
        if delta.contains(line.eigenvalue):
            component = line.projector @ psi
            total += float(np.vdot(component, component).real)
    return total


def evolve(psi: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Apply a unitary; norm is preserved to unitarity tolerance."""
    u = _as_matrix(u)
    defect = unitarity_defect(u)
    if defect > UNITARY_TOL:
        raise ValueError(f"operator is not unitary (defect {defect:.3e})")
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != u.shape[0]:
        raise ValueError("state and unitary dimensions differ")
    return u @ psi


@dataclass(frozen=True)
class Grid1D:
    """A uniform 1-D spatial grid with a time parameter."""

    x0: float
    dx: float
    count: int
    t: float = 0.0

    def __post_init__(self):
        if self.dx <= 0 or self.count < 1:
            raise ValueError("grid needs dx > 0 and at least one point")

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.count)


def position_wavefunction(
    psi: np.ndarray, grid: Grid1D, basis: np.ndarray | None = None
) -> np.ndarray:
    """Amplitudes of the state in the position (grid) eigenbasis.

    With `basis` given, its columns are the position eigenvectors expressed in
    the state's basis, so the coefficients are basis† psi; otherwise the state
    is already in the grid basis.  Amplitudes carry the 1/sqrt(dx) continuum
    normalization, making sum |psi(x)|^2 dx equal to <psi|psi>.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != grid.count:
        raise ValueError("state dimension differs from the number of grid points")
    if basis is not None:
        basis = _as_matrix(basis)
        if basis.shape[0] != grid.count:
            raise ValueError("basis dimension differs from the number of grid points")
        defect = unitarity_defect(basis)
        if defect > UNITARY_TOL:
            raise ValueError(f"position basis is not orthonormal (defect {defect:.3e})")
        psi = basis.conj().T @ psi
    return psi / math.sqrt(grid.dx)


@dataclass
class SystemSigma:
    """Per-system tuple: grid, position wave function, interval set, space index.

    The wave function is continuum-normalized on the grid; probability queries
    delegate to the Born rule for the system's space.
    """

    grid: Grid1D
    psi: np.ndarray
    delta: BorelSet
    space_index: int = 0

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.shape[0] != self.grid.count:
            raise ValueError("wave function length differs from the grid")
        total = float((np.abs(self.psi) ** 2).sum() * self.grid.dx)
        if abs(total - 1.0) > SIGMA_NORM_TOL:
            raise ValueError(f"wave function is not normalized (sum dx = {total!r})")

    def state_vector(self) -> np.ndarray:
        """Unit coefficient vector in the grid basis."""
        return self.psi * math.sqrt(self.grid.dx)

    def probability(self, a: np.ndarray, delta: BorelSet | None = None) -> float:
        return born_probability(self.state_vector(), a, self.delta if delta is None else delta)


@dataclass
class Space:
    """One finite-dimensional space with its observable and unitary families."""

    dim: int
    observables: list[np.ndarray] = field(default_factory=list)
    unitaries: list[np.ndarray] = field(default_factory=list)
    states: dict[str, np.ndarray] = field(default_factory=dict)


@dataclass
class QMStructure:
    """Quasi-set of systems + indexed families of spaces/observables/unitaries
    + a finite interval algebra; the system→space map realizes "for some i
    (determined by the system)" explicitly."""

    systems: Union[QSet, list[str]]
    spaces: list[Space]
    system_space: dict[str, int] = field(default_factory=dict)
    borel: dict[str, BorelSet] = field(default_factory=dict)

    def space_for(self, system: str) -> Space:
        if system not in self.system_space:
            raise KeyError(f"no space assigned to system {system!r}")
        return self.spaces[self.system_space[system]]

    def borel_element(self, name: str) -> BorelSet:
        if name not in self.borel:
            raise ValueError(f"interval set {name!r} is outside the declared algebra")
        return self.borel[name]


@dataclass
class QMValidationReport:
    items: list[dict[str, Any]]

    @property
    def ok(self) -> bool:
        return all(item["ok"] for item in self.items)

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "items": self.items}


def validate_qm_structure(q: QMStructure) -> QMValidationReport:
    """Verify every structural invariant; violations are reported, not raised."""
    items: list[dict[str, Any]] = []

    def item(name: str, ok: bool, detail: str) -> None:
        items.append({"check": name, "ok": bool(ok), "detail": detail})

    if isinstance(q.systems, QSet):
        mults = {k.name: n for k, n in q.systems.m_part.items()}
        item(
            "systems-quasi-set",
            True,
            f"systems form a quasi-set (quasi-cardinal {qcard(q.systems)});"
            " m-part exposes only kind multiplicities, no member handles: "
            + str(mults),
        )
        keys = [k.name for k in q.systems.kinds()] + [m.label for m in q.systems.mobjects]
    else:
        item(
            "systems-quasi-set",
            False,
            "classical set where quasi-set required: systems were given as"
            f" a labelled list {list(q.systems)!r}",
        )
        keys = list(q.systems)

    missing = [k for k in keys if k not in q.system_space]
    item(
        "system-space-map",
        not missing,
        "every system kind/label maps to a space index"
        if not missing
        else f"unmapped systems: {missing}",
    )
    bad_index = {k: i for k, i in q.system_space.items() if not 0 <= i < len(q.spaces)}
    item(
        "system-space-range",
        not bad_index,
        "all mapped indices in range" if not bad_index else f"bad indices: {bad_index}",
    )

    for i, space in enumerate(q.spaces):
        for j, a in enumerate(space.observables):
            defect = hermiticity_defect(np.asarray(a, dtype=complex))
            shape_ok = a.shape == (space.dim, space.dim)
            item(
                f"observable[{i}][{j}]-hermitian",
                shape_ok and defect <= HERMITIAN_TOL,
                f"shape {a.shape}, hermiticity defect {defect:.3e}",
            )
        for k, u in enumerate(space.unitaries):
            defect = unitarity_defect(np.asarray(u, dtype=complex))
            shape_ok = u.shape == (space.dim, space.dim)
            item(
                f"unitary[{i}][{k}]-unitary",
                shape_ok and defect <= UNITARY_TOL,
                f"shape {u.shape}, unitarity defect {defect:.3e}",
            )
        for name, psi in space.states.items():
            norm2 = float(np.vdot(psi, psi).real)
            item(
                f"state[{i}][{name}]-normalized",
                len(psi) == space.dim and abs(norm2 - 1.0) <= STATE_NORM_TOL,
                f"norm^2 = {norm2!r}",
            )

    item(
        "index-sets-finite",
        True,
        f"|I| = {len(q.spaces)}, |J| = {sum(len(s.observables) for s in q.spaces)},"
        f" |K| = {sum(len(s.unitaries) for s in q.spaces)},"
        f" |B| = {len(q.borel)} (all explicit)",
    )
    return QMValidationReport(items)


# -- JSON declaration files ----------------------------------------------------


def _complex_from(pair: Any) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair, 0.0)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {pair!r}")


def _matrix_from(rows: Any) -> np.ndarray:
    return np.array([[_complex_from(x) for x in row] for row in rows], dtype=complex)


def _vector_from(entries: Any) -> np.ndarray:
    return np.array([_complex_from(x) for x in entries], dtype=complex)


def _endpoint(x: Any, side: int) -> float:
    if x is None:
        return -math.inf if side == 0 else math.inf
    if isinstance(x, str):
        return float(x)
    return float(x)


def load_qm_structure(doc: Mapping[str, Any]) -> QMStructure:
    """Build a QMStructure from its JSON declaration.

    systems: {"m": {kind: multiplicity}, "M": [labels]} declares a quasi-set;
    a bare list of labels declares a classical set (the validator flags it).
    Matrices are row-major with [re, im] entries.
    """
    raw_systems = doc.get("systems", {"m": {}})
    systems: Union[QSet, list[str]]
    if isinstance(raw_systems, list):
        systems = [str(x) for x in raw_systems]
    else:
        kinds = {
            Kind(str(name)): int(mult)
            for name, mult in (raw_systems.get("m") or {}).items()
        }
        systems = QSet(kinds, raw_systems.get("M") or [])

    spaces = []
    for entry in doc.get("spaces", []):
        dim = int(entry["dim"])
        spaces.append(
            Space(
                dim=dim,
                observables=[_matrix_from(m) for m in entry.get("observables", [])],
                unitaries=[_matrix_from(m) for m in entry.get("unitaries", [])],
                states={
                    str(nm): _vector_from(v)
                    for nm, v in (entry.get("states") or {}).items()
                },
            )
        )

    borel = {}
    for name, intervals in (doc.get("borel") or {}).items():
        borel[str(name)] = BorelSet.of(
            *[(_endpoint(iv[0], 0), _endpoint(iv[1], 1)) for iv in intervals]
        )

    return QMStructure(
        systems=systems,
        spaces=spaces,
        system_space={str(k): int(v) for k, v in (doc.get("system_space") or {}).items()},
        borel=borel,
    )


def parse_qm_json(text: str) -> QMStructure:
    return load_qm_structure(json.loads(text))
