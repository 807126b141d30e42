"""Approximate-dominance relations, Pareto filtering, and the domination digraph.

All relations here are monotonic: componentwise "at least as good" always
implies relation membership, so in particular every relation is reflexive.
Pairwise checks run in O(n^2 p); at the explicit-instance scale this package
targets, exact rational comparisons dominate the cost anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .model import Instance, RelationKind, RelationSpec, Solution

__all__ = [
    "r_dominates",
    "values_r_dominate",
    "strictly_dominates",
    "dominates",
    "exact_components",
    "efficient_set",
    "weakly_efficient_set",
    "DominationDigraph",
    "domination_digraph",
]


def _check_dims(fx: Sequence[Fraction], fy: Sequence[Fraction]) -> None:
    if len(fx) != len(fy):
        raise ValueError(f"dimension mismatch: {len(fx)} vs {len(fy)}")


def values_r_dominate(
    fx: Sequence[Fraction], fy: Sequence[Fraction], spec: RelationSpec
) -> bool:
    """Does the vector fx approximately dominate fy under the given relation?

    epsilon:            every component within factor 1 + eps.
    one-exact:          first component exact, the rest within 1 + eps.
    two-exact:          first two components exact, the rest within 1 + eps.
    quasi-k:            every component within 1 + eps and at least k exact.
    one-exact-quasi-k:  quasi-k and additionally exact in the first component.

    "Exact" means fx[i] <= fy[i]; "within 1 + eps" means fx[i] <= (1+eps)*fy[i].
    quasi-k uses the counting criterion, which is equivalent to asking for an
    exact k-subset of components because any k exact components can serve.
    """
    _check_dims(fx, fy)
    p = len(fx)
    slack = 1 + spec.eps
    kind = spec.kind
    if kind is RelationKind.EPSILON:
        return all(a <= slack * b for a, b in zip(fx, fy))
    if kind is RelationKind.ONE_EXACT:
        return fx[0] <= fy[0] and all(a <= slack * b for a, b in zip(fx[1:], fy[1:]))
    if kind is RelationKind.TWO_EXACT:
        if p < 2:
            raise ValueError("two-exact dominance needs at least two objectives")
        return (
            fx[0] <= fy[0]
            and fx[1] <= fy[1]
            and all(a <= slack * b for a, b in zip(fx[2:], fy[2:]))
        )
    k = spec.k
    assert k is not None
    if k > p:
        raise ValueError(f"k={k} exceeds the number of objectives p={p}")
    if not all(a <= slack * b for a, b in zip(fx, fy)):
        return False
    exact = sum(1 for a, b in zip(fx, fy) if a <= b)
    if kind is RelationKind.QUASI_K:
        return exact >= k
    return exact >= k and fx[0] <= fy[0]


def r_dominates(x: Solution, y: Solution, spec: RelationSpec) -> bool:
    return values_r_dominate(x.f, y.f, spec)


def strictly_dominates(x: Solution, y: Solution) -> bool:
    """Strictly better in every objective."""
    _check_dims(x.f, y.f)
    return all(a < b for a, b in zip(x.f, y.f))


def dominates(x: Solution, y: Solution) -> bool:
    """At least as good everywhere and strictly better somewhere."""
    _check_dims(x.f, y.f)
    return all(a <= b for a, b in zip(x.f, y.f)) and any(a < b for a, b in zip(x.f, y.f))


def exact_components(x: Solution, y: Solution) -> tuple[int, ...]:
    """1-based objective indices in which x is at least as good as y."""
    _check_dims(x.f, y.f)
    return tuple(i + 1 for i, (a, b) in enumerate(zip(x.f, y.f)) if a <= b)


def efficient_set(instance: Instance) -> set[str]:
    """Ids of solutions not dominated by any other solution.

    Dominance is computed on images, so a solution tied with another on all
    components is not dominated by it (one strict inequality is required).
    """
    return {
        x.id
        for x in instance.solutions
        if not any(dominates(y, x) for y in instance.solutions if y.id != x.id)
    }


def weakly_efficient_set(instance: Instance) -> set[str]:
    """Ids of solutions not strictly dominated by any other solution."""
    return {
        x.id
        for x in instance.solutions
        if not any(strictly_dominates(y, x) for y in instance.solutions if y.id != x.id)
    }


@dataclass(frozen=True)
class DominationDigraph:
    """Directed graph on solution ids: an arc (u, v) means u R-dominates v.

    Every node carries a self-loop (the relations are reflexive), so closed
    out-neighborhoods are exactly the `out` sets.
    """

    nodes: tuple[str, ...]
    out: Mapping[str, frozenset[str]]

    def has_arc(self, u: str, v: str) -> bool:
        return v in self.out[u]

    def arc_count(self) -> int:
        return sum(len(targets) for targets in self.out.values())


def domination_digraph(instance: Instance, spec: RelationSpec) -> DominationDigraph:
    nodes = instance.ids
    out = {
        x.id: frozenset(y.id for y in instance.solutions if r_dominates(x, y, spec))
        for x in instance.solutions
    }
    return DominationDigraph(nodes=nodes, out=out)
