"""End-to-end construction pipelines and verification of approximation sets.

The grid pipeline buckets solutions into cells of intra-cell ratio below
1 + eps, keeps only weakly nondominated nonempty cells, and selects a
per-cell representative set suited to the requested relation.  Verification
is independent of construction: it re-checks coverage of every instance
solution from the definitions and emits a re-checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .dominance import (
    DominationDigraph,
    exact_components,
    r_dominates,
    strictly_dominates,
    weakly_efficient_set,
)
from .domsets import (
    greedy_cover_dominating_set,
    greedy_tournament_dominating_set,
    tournament_view,
)
from .grid import bucket, filter_weakly_nondominated_cells, ratio_steps_to_reach
from .model import (
    ApproximationSet,
    CertificateEntry,
    GapQuery,
    Instance,
    RelationKind,
    RelationSpec,
    Solution,
)
from .numerics import half_step_delta, pow_ratio

__all__ = [
    "UnsupportedRelationError",
    "VerificationFailed",
    "VerifyResult",
    "verify_approximation",
    "certificate_is_valid",
    "construct_grid_approx",
    "weakly_efficient_lift",
    "construct_via_gap",
]


class UnsupportedRelationError(ValueError):
    """The requested relation has no general polynomial grid construction."""


class VerificationFailed(ValueError):
    """A set that was required to verify does not cover some solution."""

    def __init__(self, counterexample: str, message: str | None = None):
        super().__init__(message or f"solution {counterexample!r} is not covered")
        self.counterexample = counterexample


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of a coverage check: a certified set, or the first uncovered id."""

    approximation: ApproximationSet | None
    counterexample: str | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _ordered_members(instance: Instance, members: Iterable[str]) -> list[str]:
    seen = set()
    unique = []
    for m in members:
        instance.position(m)  # raises KeyError on unknown ids
        if m not in seen:
            seen.add(m)
            unique.append(m)
    return sorted(unique, key=instance.position)


def verify_approximation(
    instance: Instance, members: Iterable[str], spec: RelationSpec
) -> VerifyResult:
    """Check that the members cover every solution under the relation.

    On success the certificate names, for each solution, the first covering
    member in instance order together with all components in which coverage
    is exact.  On failure the counterexample is the first uncovered solution
    in instance order.
    """
    ordered = _ordered_members(instance, members)
    member_solutions = [instance.solution(m) for m in ordered]
    entries = []
    for target in instance.solutions:
        for m in member_solutions:
            if r_dominates(m, target, spec):
                entries.append(
                    CertificateEntry(
                        covered=target.id,
                        by=m.id,
                        exact_indices=exact_components(m, target),
                    )
                )
                break
        else:
            return VerifyResult(approximation=None, counterexample=target.id)
    approx = ApproximationSet(
        relation=spec, members=tuple(ordered), certificate=tuple(entries)
    )
    return VerifyResult(approximation=approx, counterexample=None)


def _witnesses_relation(spec: RelationSpec, exact: tuple[int, ...]) -> bool:
    kind = spec.kind
    if kind is RelationKind.EPSILON:
        return True
    if kind is RelationKind.ONE_EXACT:
        return 1 in exact
    if kind is RelationKind.TWO_EXACT:
        return 1 in exact and 2 in exact
    if kind is RelationKind.QUASI_K:
        return len(exact) >= (spec.k or 0)
    return 1 in exact and len(exact) >= (spec.k or 0)


def certificate_is_valid(instance: Instance, aset: ApproximationSet) -> bool:
    """Re-check an approximation set's certificate from scratch.

    Requires: members belong to the instance, every instance solution is
    covered exactly once, each entry's member actually dominates the covered
    solution under the relation, and the claimed exact components are
    precisely those in which the member is at least as good.
    """
    try:
        member_set = set(aset.members)
        if not member_set <= set(instance.ids):
            return False
        covered = [e.covered for e in aset.certificate]
        if sorted(covered) != sorted(instance.ids):
            return False
        for entry in aset.certificate:
            if entry.by not in member_set:
                return False
            by = instance.solution(entry.by)
            target = instance.solution(entry.covered)
            if not r_dominates(by, target, aset.relation):
                return False
            if entry.exact_indices != exact_components(by, target):
                return False
            if not _witnesses_relation(aset.relation, entry.exact_indices):
                return False
    except (KeyError, ValueError):
        return False
    return True


def _pick_lex_min(instance: Instance, cell_ids: Sequence[str]) -> str:
    """Representative with the lexicographically smallest image, ties by order.

    The lex-minimal image in particular attains the cell's minimum first
    objective, so one rule serves both the plain and the first-exact cases.
    """
    return min(cell_ids, key=lambda i: (instance.solution(i).f, instance.position(i)))


def construct_grid_approx(instance: Instance, spec: RelationSpec) -> ApproximationSet:
    """Grid construction: bucket, filter, select per retained cell, verify.

    Supported relations: epsilon and one-exact (one representative per cell)
    and quasi-k with k <= ceil(p/2) (a greedy majority-tournament dominating
    set per cell).  Two-exact and one-exact-quasi-k are rejected: no general
    polynomial-cardinality construction exists for them.
    """
    kind = spec.kind
    if kind in (RelationKind.TWO_EXACT, RelationKind.ONE_EXACT_QUASI_K):
        raise UnsupportedRelationError(
            f"no general grid construction for {kind.value} sets"
        )
    if kind is RelationKind.QUASI_K:
        assert spec.k is not None
        half_up = -(-instance.p // 2)
        if spec.k > half_up:
            raise UnsupportedRelationError(
                f"quasi-k grid construction needs k <= ceil(p/2) = {half_up}, got k={spec.k}"
            )
    bucketing = bucket(instance, spec.eps)
    retained = filter_weakly_nondominated_cells(bucketing)
    members: list[str] = []
    for cell in sorted(retained):
        ids = bucketing.cells[cell]
        if kind is RelationKind.QUASI_K and spec.k is not None:
            cell_solutions = [instance.solution(i) for i in ids]
            view = tournament_view(cell_solutions, spec.k)
            members.extend(sorted(greedy_tournament_dominating_set(view)))
        else:
            members.append(_pick_lex_min(instance, ids))
    result = verify_approximation(instance, members, spec)
    if not result.ok:  # pragma: no cover - construction is sound by design
        raise VerificationFailed(result.counterexample or "?")
    assert result.approximation is not None
    return result.approximation


def weakly_efficient_lift(
    instance: Instance, members: Iterable[str], eps: Fraction
) -> ApproximationSet:
    """Replace strictly dominated members by weakly efficient strict dominators.

    The input must cover the instance within factor 1 + eps.  Each strictly
    dominated member is swapped for the weakly efficient solution that
    strictly dominates it with the lexicographically smallest image (ties by
    instance order), skipping candidates already used so cardinality is
    preserved whenever distinct dominators exist.  The result consists of
    weakly efficient solutions only and therefore covers every solution with
    at least one exact component.
    """
    eps_spec = RelationSpec(RelationKind.EPSILON, eps)
    inbound = verify_approximation(instance, members, eps_spec)
    if not inbound.ok:
        raise VerificationFailed(
            inbound.counterexample or "?",
            f"input set fails coverage at solution {inbound.counterexample!r}",
        )
    assert inbound.approximation is not None
    weakly = weakly_efficient_set(instance)
    members_in_order = inbound.approximation.members
    # kept members reserve their ids first so replacements never collide with them
    taken = {m for m in members_in_order if m in weakly}
    chosen: list[str] = []
    for member in members_in_order:
        if member in weakly:
            chosen.append(member)
            continue
        sol = instance.solution(member)
        candidates = sorted(
            (
                c
                for c in instance.solutions
                if c.id in weakly and strictly_dominates(c, sol)
            ),
            key=lambda c: (c.f, instance.position(c.id)),
        )
        unused = [c.id for c in candidates if c.id not in taken]
        if not unused:
            # every dominator already serves; those members cover this one too
            continue
        taken.add(unused[0])
        chosen.append(unused[0])
    quasi1 = RelationSpec(RelationKind.QUASI_K, eps, k=1)
    result = verify_approximation(instance, chosen, quasi1)
    if not result.ok:  # pragma: no cover - guaranteed by weak efficiency
        raise VerificationFailed(result.counterexample or "?")
    assert result.approximation is not None
    return result.approximation


def construct_via_gap(
    gap: Callable[[GapQuery], Solution | None],
    eps: Fraction,
    value_bound: int,
    p: int,
) -> list[Solution]:
    """Discover a covering set using only budget-threshold queries.

    Splits the budget into a delta with (1+delta)**2 <= 1+eps, queries every
    point of the geometric budget grid {2**-M * (1+delta)**t} per dimension,
    and prunes the discovered solutions with a greedy cover under exact
    componentwise dominance (factor-1 pruning keeps the end-to-end guarantee
    at (1+delta)**2).  Returns the chosen solutions; callers verify against
    the underlying instance where one is available.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if value_bound < 0:
        raise ValueError("value_bound must be nonnegative")
    delta = half_step_delta(eps)
    # top budget must reach (1+delta) * 2**M so every value has a grid
    # threshold at most a factor (1+delta) above its (1+delta)-scaled image
    steps = ratio_steps_to_reach(Fraction(1 << (2 * value_bound)), delta) + 1
    floor = Fraction(1, 1 << value_bound)
    levels = [floor * pow_ratio(1 + delta, t) for t in range(steps + 1)]
    discovered: dict[str, Solution] = {}

    def sweep(prefix: tuple[Fraction, ...]) -> None:
        if len(prefix) == p:
            answer = gap(GapQuery(b=prefix, delta=delta))
            if answer is not None:
                discovered.setdefault(answer.id, answer)
            return
        for level in levels:
            sweep(prefix + (level,))

    sweep(())
    found = list(discovered.values())
    if not found:
        return []
    out = {
        x.id: frozenset(
            y.id for y in found if all(a <= b for a, b in zip(x.f, y.f))
        )
        for x in found
    }
    digraph = DominationDigraph(nodes=tuple(x.id for x in found), out=out)
    keep = greedy_cover_dominating_set(digraph)
    return [x for x in found if x.id in keep]
