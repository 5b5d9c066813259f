"""Python access to the heavenly library.

Structured results come back as plain dicts and lists.
"""

import json

from ._core import (
    DomainError,
    Expr,
    ParseError,
    UnboundSymbol,
    catalog_ids,
    fd_oracle,
    parse,
    run_cli,
    systems,
)
from . import _core

__all__ = [
    "DomainError",
    "Expr",
    "ParseError",
    "UnboundSymbol",
    "acceptance",
    "catalog_entry",
    "catalog_ids",
    "check_entry",
    "display_invariants",
    "fd_oracle",
    "parse",
    "residual",
    "run_cli",
    "systems",
]


def residual(system, key, lambdas=(), points=100, seed=20240917, tolerance=1e-8):
    """Residual report of a PDE system for a key function on its default box."""
    return json.loads(_core._residual(system, str(key), [str(l) for l in lambdas], points, seed, tolerance))


def catalog_entry(entry_id):
    return json.loads(_core._catalog_entry(entry_id))


def check_entry(entry_id, points=100, seed=20240917):
    """Runs every expectation of a catalog entry."""
    return json.loads(_core._check_entry(entry_id, points, seed))


def display_invariants(psi, Z, kappa, mu=0.0):
    """I, J and I^3 - 6 J^2 of the twisted cubic pp-wave written through Psi(Z)."""
    return json.loads(_core._display_invariants(str(psi), Z, kappa, mu))


def acceptance():
    """All numbered acceptance criteria."""
    return json.loads(_core._acceptance())
