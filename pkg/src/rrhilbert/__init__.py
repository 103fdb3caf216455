"""Hilbert coefficients, Ratliff-Rush closures and reduction numbers of
m-primary ideals in polynomial rings and their quotients."""

from __future__ import annotations

__version__ = "0.1.0"

from .field import parse_field  # noqa: E402
from .filtration import RatliffRush, filtration_report, stability_index  # noqa: E402
from .hilbert import BudgetExceeded, NotMPrimaryError, hilbert_samuel, profile  # noqa: E402
from .ideal import Ideal  # noqa: E402
from .parse import ParseError, parse_polynomial  # noqa: E402
from .reduction import random_minimal_reduction, reduction_number  # noqa: E402
from .ring import Polynomial, Ring  # noqa: E402
from .verdict import evaluate_bounds, is_integrally_closed_monomial  # noqa: E402

__all__ = [
    "BudgetExceeded",
    "Ideal",
    "NotMPrimaryError",
    "ParseError",
    "Polynomial",
    "RatliffRush",
    "Ring",
    "evaluate_bounds",
    "filtration_report",
    "hilbert_samuel",
    "is_integrally_closed_monomial",
    "parse_field",
    "parse_polynomial",
    "profile",
    "random_minimal_reduction",
    "reduction_number",
    "stability_index",
]
