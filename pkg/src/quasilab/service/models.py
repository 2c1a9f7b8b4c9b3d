"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class StructureRequest(BaseModel):
    source: str = Field(description=".qlog structure text")
    max_domain: Optional[int] = Field(
        default=None, description="reject domains larger than this guard"
    )


class AutomorphismsResponse(BaseModel):
    count: int
    automorphisms: list[list[int]]
    rigid: bool
    orbits: list[list[int]]
    labels: dict[int, str] = {}


class RigidResponse(BaseModel):
    rigid: bool


class RigidifyResponse(BaseModel):
    source: str
    added_relations: list[str]
    was_rigid: bool


class OrbitsResponse(BaseModel):
    orbits: list[list[int]]


class UrUniverseRequest(BaseModel):
    atoms: list[str]
    rank: int
    max_members: int = 100_000


class EvalRequest(BaseModel):
    structure: str
    formula: str
    assignment: dict[str, int] = {}


class EvalResponse(BaseModel):
    value: bool


class DefinedIdentityRequest(BaseModel):
    structure: str
    a: int
    b: int


class DefinedIdentityResponse(BaseModel):
    identical: bool
    formula: Optional[str] = None  # None when the language has no relations


class PiiFirstOrderResponse(BaseModel):
    counterexamples: list[list[int]]
    holds: bool


class PiiSecondOrderRequest(BaseModel):
    structure: str
    semantics: Literal["full", "orbit-invariant"] = "full"


class AxiomsRequest(BaseModel):
    structure: str
    equality: str
    membership: Optional[str] = None


class QsetRequest(BaseModel):
    source: str = Field(description=".qset document text")
    name: Optional[str] = None


class QsetCardResponse(BaseModel):
    qcard: int
    canonical: str


class QsetBinaryRequest(BaseModel):
    source: str
    left: str
    right: str
    disjoint_source: bool = False


class QsetBinaryResponse(BaseModel):
    result: str
    qcard: int
    note: str = ""


class QsetIndistResponse(BaseModel):
    indistinguishable: bool


class ClassifyRequest(BaseModel):
    discernible: bool
    reidentifiable: bool


class ClassifyResponse(BaseModel):
    discernible: bool
    reidentifiable: bool
    category: str


class QmDocumentRequest(BaseModel):
    document: dict[str, Any]


class QmProbRequest(BaseModel):
    document: dict[str, Any]
    system: str
    state: str
    observable: int
    borel: str


class QmProbResponse(BaseModel):
    probability: float
    space_index: int


class FockCountRequest(BaseModel):
    n: int
    k: int
    stat: Literal["mb", "be", "fd", "all"] = "all"


class FockAlgebraRequest(BaseModel):
    modes: int
    nmax: int
    stat: Literal["bosonic", "fermionic"]


class FockTableRequest(BaseModel):
    max_n: int
    max_k: int


class ReportRunRequest(BaseModel):
    seed: int = 0
