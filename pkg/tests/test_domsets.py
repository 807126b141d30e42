import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mopareto.dominance import DominationDigraph, domination_digraph
from mopareto.domsets import (
    NodeLimitExceeded,
    exact_min_dominating_set,
    greedy_cover_dominating_set,
    greedy_tournament_dominating_set,
    is_dominating,
    tournament_view,
)
from mopareto.generators import gen_prop_dominated, gen_quasi2_gap, gen_random
from mopareto.model import RelationKind, RelationSpec, Solution


def sols(*vectors):
    return [
        Solution(f"s{i}", tuple(Fraction(v) for v in vec))
        for i, vec in enumerate(vectors, start=1)
    ]


def digraph_of(out):
    return DominationDigraph(
        nodes=tuple(out), out={u: frozenset(vs) | {u} for u, vs in out.items()}
    )


def brute_force_min(graph):
    nodes = list(graph.nodes)
    for size in range(1, len(nodes) + 1):
        for subset in combinations(nodes, size):
            if is_dominating(graph, set(subset)):
                return set(subset)
    raise AssertionError("self-loops guarantee a cover")


class TestTournament:
    def test_single_point(self):
        view = tournament_view(sols((1, 2, 3)), k=2)
        assert greedy_tournament_dominating_set(view) == {"s1"}

    def test_rock_paper_scissors_cycle(self):
        points = sols((1, 2, 3), (2, 3, 1), (3, 1, 2))
        view = tournament_view(points, k=2)
        assert view.out == {
            "s1": frozenset({"s2"}),
            "s2": frozenset({"s3"}),
            "s3": frozenset({"s1"}),
        }
        chosen = greedy_tournament_dominating_set(view)
        assert len(chosen) == 2
        # enumeration confirms no single point dominates the cycle
        closed = {u: {u} | set(view.out[u]) for u in view.out}
        assert not any(closed[u] >= {"s1", "s2", "s3"} for u in closed)

    def test_strict_chain_collapses_to_top(self):
        points = sols((1, 1, 1), (2, 2, 2), (3, 3, 3))
        view = tournament_view(points, k=2)
        assert greedy_tournament_dominating_set(view) == {"s1"}

    def test_majority_threshold_needs_enough_objectives(self):
        with pytest.raises(ValueError, match="2k-1"):
            tournament_view(sols((1, 2), (2, 1)), k=2)

    def test_ties_break_by_list_position(self):
        # identical images: earlier point outranks later in every order
        view = tournament_view(sols((1, 1, 1), (1, 1, 1)), k=2)
        assert view.out["s1"] == frozenset({"s2"})
        assert view.out["s2"] == frozenset()

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=0, max_value=10_000),
        st.integers(min_value=1, max_value=24),
        st.sampled_from([(3, 2), (4, 2), (5, 3)]),
    )
    def test_completeness_validity_and_log_bound(self, seed, n, pk):
        p, k = pk
        instance = gen_random(n, p, seed=seed)
        view = tournament_view(list(instance.solutions), k)
        for u in instance.ids:
            for v in instance.ids:
                if u != v:
                    assert v in view.out[u] or u in view.out[v]
        chosen = greedy_tournament_dominating_set(view)
        covered = set()
        for c in chosen:
            covered |= {c} | set(view.out[c])
        assert covered == set(instance.ids)
        assert len(chosen) <= math.ceil(math.log2(n)) + 1 if n > 1 else len(chosen) == 1


class TestGreedyCover:
    def test_universal_node_wins(self):
        graph = digraph_of({"a": {"b", "c"}, "b": set(), "c": set()})
        assert greedy_cover_dominating_set(graph) == {"a"}

    def test_self_loops_only_takes_everyone(self):
        inst = gen_quasi2_gap(Fraction(1), 2)
        graph = domination_digraph(inst, RelationSpec(RelationKind.QUASI_K, Fraction(1), k=2))
        assert greedy_cover_dominating_set(graph) == {"x0", "x1", "x2"}

    def test_membership_counts_as_coverage(self):
        # even without explicit self-loops a node covers itself by membership
        graph = DominationDigraph(nodes=("a", "b"), out={"a": frozenset(), "b": frozenset()})
        assert greedy_cover_dominating_set(graph) == {"a", "b"}

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_within_log_factor_of_exact(self, seed):
        instance = gen_random(14, 2, seed=seed)
        graph = domination_digraph(instance, RelationSpec(RelationKind.EPSILON, Fraction(1, 2)))
        greedy = greedy_cover_dominating_set(graph)
        exact = exact_min_dominating_set(graph)
        assert is_dominating(graph, greedy)
        n = len(graph.nodes)
        assert len(exact) <= len(greedy) <= (1 + math.log(n)) * len(exact) + 1e-9


class TestExactMinimum:
    def test_self_loops_only(self):
        graph = digraph_of({"a": set(), "b": set(), "c": set()})
        assert exact_min_dominating_set(graph) == {"a", "b", "c"}

    def test_rock_paper_scissors_minimum_is_two(self):
        graph = digraph_of({"a": {"b"}, "b": {"c"}, "c": {"a"}})
        result = exact_min_dominating_set(graph)
        assert len(result) == 2
        assert result == brute_force_min(graph)
        assert is_dominating(graph, result)

    def test_dominated_family_quasi_one_minimum_is_two(self):
        inst = gen_prop_dominated(Fraction(1))
        graph = domination_digraph(inst, RelationSpec(RelationKind.QUASI_K, Fraction(1), k=1))
        assert len(exact_min_dominating_set(graph)) == 2

    def test_limit_guard(self):
        instance = gen_random(6, 2, seed=1)
        graph = domination_digraph(instance, RelationSpec(RelationKind.EPSILON, Fraction(1)))
        with pytest.raises(NodeLimitExceeded):
            exact_min_dominating_set(graph, node_limit=5)

    def test_deterministic(self):
        instance = gen_random(12, 3, seed=99)
        graph = domination_digraph(instance, RelationSpec(RelationKind.QUASI_K, Fraction(1), k=2))
        first = exact_min_dominating_set(graph)
        second = exact_min_dominating_set(graph)
        assert first == second

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=1, max_value=10))
    def test_matches_brute_force(self, seed, n):
        instance = gen_random(n, 2, seed=seed)
        graph = domination_digraph(instance, RelationSpec(RelationKind.EPSILON, Fraction(1, 2)))
        exact = exact_min_dominating_set(graph)
        assert is_dominating(graph, exact)
        assert len(exact) == len(brute_force_min(graph))
