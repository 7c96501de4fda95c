"""Finite counter-model search.

A model where the axiom is valid but the goal is not shows, by soundness,
that the goal cannot be derived from the axiom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .interp import DEFAULT_PRODUCT_CAP, is_valid
from .term import Context, Term
from .topology import MAX_ENUM_POINTS, BoundExceeded, FiniteTopology, enumerate_with_masks


@dataclass(frozen=True)
class Countermodel:
    model: FiniteTopology
    points: int
    family_mask: int
    examined: int


def candidate_models(max_points: int) -> Iterator[tuple[int, int, FiniteTopology]]:
    """``(n, mask, model)`` by point count, then family mask, then reference point."""
    if not 1 <= max_points <= MAX_ENUM_POINTS:
        raise BoundExceeded(f"--max-points must be between 1 and {MAX_ENUM_POINTS}")
    for n in range(1, max_points + 1):
        for mask, topo in enumerate_with_masks(n):
            for q in range(n):
                yield n, mask, topo.with_reference(q)


def find_countermodel(
    goal: Term,
    axiom: Term | None = None,
    max_points: int = 3,
    ctx: Context = Context(),
    product_cap: int = DEFAULT_PRODUCT_CAP,
) -> Countermodel | None:
    examined = 0
    for n, mask, model in candidate_models(max_points):
        examined += 1
        if axiom is not None and not is_valid(ctx, axiom, model, product_cap):
            continue
        if not is_valid(ctx, goal, model, product_cap):
            return Countermodel(model, n, mask, examined)
    return None
