"""Exact simulation of budget-query problems on explicit instances, the
biobjective greedy algorithms built on them, and the adversarial query
answerer that makes two instances indistinguishable to budget queries.

All oracles are exhaustive scans: their value is contract fidelity, not
speed.  Each answer can be validated independently against the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .constructors import verify_approximation
from .dominance import r_dominates
from .model import (
    ApproximationSet,
    GapQuery,
    Instance,
    RelationKind,
    RelationSpec,
    Solution,
)
from .numerics import half_step_delta

__all__ = [
    "GapQuery",
    "AdversaryPrecisionError",
    "AdversarialPair",
    "adversarial_pair",
    "gap_oracle",
    "valid_gap_answer",
    "consistent_gap_answer",
    "constrained_oracle",
    "dual_restrict_oracle",
    "greedy_biobjective_min",
    "dual_restrict_2approx",
]


class AdversaryPrecisionError(ValueError):
    """A query's delta is below the adversary's indistinguishability regime."""


def gap_oracle(instance: Instance, query: GapQuery) -> Solution | None:
    """Answer a budget query: a solution within the budgets, or None ("NO").

    Returns the first solution in instance order with f(x) <= b componentwise.
    Answering None when nothing fits b is always correct, since nonexistence
    under b implies nonexistence under the stricter b/(1+delta).
    """
    if len(query.b) != instance.p:
        raise ValueError("query dimension does not match the instance")
    for sol in instance.solutions:
        if all(v <= bound for v, bound in zip(sol.f, query.b)):
            return sol
    return None


def valid_gap_answer(
    instance: Instance, query: GapQuery, answer: Solution | None
) -> bool:
    """Independent exhaustive check of a budget-query answer.

    A returned solution must belong to the instance and fit the budgets; a
    None answer requires that no solution fits b/(1+delta) componentwise.
    """
    if answer is not None:
        if answer.id not in instance.ids:
            return False
        if instance.solution(answer.id).f != answer.f:
            return False
        return all(v <= bound for v, bound in zip(answer.f, query.b))
    shrunk = tuple(bound / (1 + query.delta) for bound in query.b)
    return not any(
        all(v <= bound for v, bound in zip(sol.f, shrunk))
        for sol in instance.solutions
    )


@dataclass(frozen=True)
class AdversarialPair:
    """Two biobjective instances that budget queries cannot tell apart.

    The smaller instance holds x1 = (1 + 1/l, 1 + 1/l); the larger one adds
    x2 = (1, 1).  For any query with delta >= 1/l there is a shared correct
    answer, so a solver driven only by such queries never discovers x2.
    """

    l: int
    i1: Instance
    i2: Instance

    @property
    def x1(self) -> Solution:
        return self.i1.solutions[0]


def adversarial_pair(l: int) -> AdversarialPair:
    if l < 1:
        raise ValueError("l must be a positive integer")
    x1 = Solution("x1", (1 + Fraction(1, l), 1 + Fraction(1, l)))
    x2 = Solution("x2", (Fraction(1), Fraction(1)))
    return AdversarialPair(
        l=l,
        i1=Instance(p=2, solutions=(x1,)),
        i2=Instance(p=2, solutions=(x1, x2)),
    )


def consistent_gap_answer(pair: AdversarialPair, query: GapQuery) -> Solution | None:
    """An answer that is correct for both instances of the pair.

    If b covers x1 componentwise, return x1 (feasible in both instances).
    Otherwise some b_j < 1 + 1/l <= (1 + 1/l) = f_j(x2) * (1 + 1/l), so with
    delta >= 1/l no solution of either instance fits b_j/(1+delta) and None
    is a correct answer for both.  Queries with delta < 1/l are rejected:
    they model precision beyond the adversary's regime.
    """
    if len(query.b) != 2:
        raise ValueError("adversarial queries are biobjective")
    if query.delta < Fraction(1, pair.l):
        raise AdversaryPrecisionError(
            f"delta={query.delta} below 1/l = 1/{pair.l}: precision exceeds adversary regime"
        )
    x1 = pair.x1
    if all(bound >= v for bound, v in zip(query.b, x1.f)):
        return x1
    return None


def _bounded(sol: Solution, objective: int, bounds: Sequence[Fraction]) -> bool:
    others = [v for i, v in enumerate(sol.f, start=1) if i != objective]
    return all(v <= b for v, b in zip(others, bounds))


def _check_constrained_args(
    instance: Instance, objective: int, bounds: Sequence[Fraction]
) -> None:
    if not 1 <= objective <= instance.p:
        raise ValueError(f"objective index {objective} out of range 1..{instance.p}")
    if len(bounds) != instance.p - 1:
        raise ValueError(f"expected {instance.p - 1} bounds, got {len(bounds)}")
    if any(b <= 0 for b in bounds):
        raise ValueError("bounds must be positive")


def constrained_oracle(
    instance: Instance, objective: int, bounds: Sequence[Fraction]
) -> Solution | None:
    """Minimize objective i subject to bounds on all other objectives.

    `objective` is 1-based; `bounds` applies to the remaining objectives in
    ascending index order.  Among feasible solutions the minimizer with the
    lexicographically smallest image (ties by instance order) is returned,
    which is automatically weakly efficient.  None means infeasible.
    """
    _check_constrained_args(instance, objective, bounds)
    feasible = [s for s in instance.solutions if _bounded(s, objective, bounds)]
    if not feasible:
        return None
    return min(
        feasible,
        key=lambda s: (s.f[objective - 1], s.f, instance.position(s.id)),
    )


def dual_restrict_oracle(
    instance: Instance,
    objective: int,
    bounds: Sequence[Fraction],
    delta: Fraction,
) -> Solution | None:
    """Budget-relaxed variant: optimal in objective i, bounds slack by 1+delta.

    None only if no solution meets the *un-relaxed* bounds.  Otherwise the
    answer must reach the constrained optimum in objective i while exceeding
    each bound by at most a factor 1 + delta.  This implementation returns an
    efficient solution componentwise at most the constrained optimizer, which
    satisfies both requirements without ever using the slack.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    anchor = constrained_oracle(instance, objective, bounds)
    if anchor is None:
        return None
    candidates = [
        s
        for s in instance.solutions
        if all(a <= b for a, b in zip(s.f, anchor.f))
    ]
    return min(candidates, key=lambda s: (s.f, instance.position(s.id)))


def greedy_biobjective_min(instance: Instance, eps: Fraction) -> ApproximationSet:
    """Minimum-cardinality cover of a biobjective instance within 1 + eps.

    Repeatedly takes the uncovered solution with the smallest first objective
    value t, asks the constrained oracle for the second-objective minimizer
    subject to f1 <= (1+eps) * t, and removes everything the answer covers.
    Members are weakly efficient, so the result also covers every solution
    with at least one exact component.
    """
    if instance.p != 2:
        raise ValueError("the greedy cover works on biobjective instances only")
    eps_spec = RelationSpec(RelationKind.EPSILON, eps)
    uncovered = list(instance.solutions)
    members: list[str] = []
    while uncovered:
        t = min(s.f[0] for s in uncovered)
        pick = constrained_oracle(instance, objective=2, bounds=[(1 + eps) * t])
        assert pick is not None  # the attainer of t is feasible
        members.append(pick.id)
        uncovered = [s for s in uncovered if not r_dominates(pick, s, eps_spec)]
    result = verify_approximation(
        instance, members, RelationSpec(RelationKind.QUASI_K, eps, k=1)
    )
    assert result.ok and result.approximation is not None
    return result.approximation


def dual_restrict_2approx(instance: Instance, eps: Fraction) -> ApproximationSet:
    """Cover within 1 + eps using the budget-relaxed oracle only.

    Runs the same sweep as greedy_biobjective_min but with bound (1+delta) * t
    where (1+delta)**2 <= 1+eps, so the relaxed answer still covers the
    sweep's anchor solution.  Cardinality is at most twice the minimum; all
    members are efficient.
    """
    if instance.p != 2:
        raise ValueError("the relaxed greedy cover works on biobjective instances only")
    delta = half_step_delta(eps)
    eps_spec = RelationSpec(RelationKind.EPSILON, eps)
    uncovered = list(instance.solutions)
    members: list[str] = []
    while uncovered:
        t = min(s.f[0] for s in uncovered)
        pick = dual_restrict_oracle(
            instance, objective=2, bounds=[(1 + delta) * t], delta=delta
        )
        assert pick is not None
        members.append(pick.id)
        uncovered = [s for s in uncovered if not r_dominates(pick, s, eps_spec)]
    result = verify_approximation(
        instance, members, RelationSpec(RelationKind.QUASI_K, eps, k=1)
    )
    assert result.ok and result.approximation is not None
    return result.approximation
