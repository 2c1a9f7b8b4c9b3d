"""Logic DSL: parsing, Tarskian evaluation, and identity/PII checking."""

from .evaluate import evaluate
from .identity import (
    AxiomVerdict,
    IdentityAxiomsReport,
    PiiSecondOrderReport,
    check_identity_axioms,
    defined_identity,
    pii_first_order,
    pii_second_order,
)
from .parser import (
    defined_identity_formula,
    format_structure,
    parse,
    parse_formula,
    parse_structure,
)
from .syntax import (
    And,
    Element,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Name,
    Not,
    Or,
    Pred,
    Term,
    format_formula,
    free_names,
)

__all__ = [
    "And", "AxiomVerdict", "Element", "Eq", "Exists", "Forall", "Formula",
    "IdentityAxiomsReport", "Iff", "Implies", "Name", "Not", "Or",
    "PiiSecondOrderReport", "Pred", "Term",
    "check_identity_axioms", "defined_identity", "defined_identity_formula",
    "evaluate", "format_formula", "format_structure", "free_names", "parse",
    "parse_formula", "parse_structure", "pii_first_order", "pii_second_order",
]
