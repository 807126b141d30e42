import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mopareto.constructors import (
    UnsupportedRelationError,
    VerificationFailed,
    certificate_is_valid,
    construct_grid_approx,
    construct_via_gap,
    verify_approximation,
    weakly_efficient_lift,
)
from mopareto.dominance import weakly_efficient_set
from mopareto.generators import (
    gen_prop_dominated,
    gen_prop_one_exact,
    gen_random,
)
from mopareto.grid import bucket, filter_weakly_nondominated_cells
from mopareto.model import (
    ApproximationSet,
    CertificateEntry,
    GapQuery,
    Instance,
    RelationKind,
    RelationSpec,
    Solution,
    derive_value_bound,
)
from mopareto.oracles import gap_oracle, valid_gap_answer

F = Fraction


def inst(*vectors):
    return Instance(
        p=len(vectors[0]),
        solutions=tuple(
            Solution(f"s{i}", tuple(F(v) for v in vec))
            for i, vec in enumerate(vectors, start=1)
        ),
    )


STAIRCASE = inst((1, 4), (2, 3), (3, 2), (4, 1))


class TestVerify:
    def test_full_set_covers_itself_under_any_relation(self):
        instance = gen_random(10, 3, seed=2)
        for spec in (
            RelationSpec(RelationKind.EPSILON, F(1, 3)),
            RelationSpec(RelationKind.TWO_EXACT, F(1, 3)),
            RelationSpec(RelationKind.ONE_EXACT_QUASI_K, F(1, 3), k=2),
        ):
            result = verify_approximation(instance, instance.ids, spec)
            assert result.ok
            assert certificate_is_valid(instance, result.approximation)

    def test_dominated_pair_covers_quasi_one(self):
        instance = gen_prop_dominated(F(1))
        spec = RelationSpec(RelationKind.QUASI_K, F(1), k=1)
        result = verify_approximation(instance, ["x5", "x6"], spec)
        assert result.ok
        cert = {e.covered: e for e in result.approximation.certificate}
        assert cert["x1"].by == "x5" and 2 in cert["x1"].exact_indices
        assert cert["x4"].by == "x6" and 1 in cert["x4"].exact_indices

    def test_first_uncovered_in_instance_order_is_reported(self):
        # x5 alone covers x1, x3, x5, x6 but has no exact component against
        # x2 = (3/2, 5/2) and misses x4 within the slack; x2 comes first
        instance = gen_prop_dominated(F(1))
        spec = RelationSpec(RelationKind.QUASI_K, F(1), k=1)
        result = verify_approximation(instance, ["x5"], spec)
        assert not result.ok
        assert result.counterexample == "x2"

    def test_covering_member_is_first_in_instance_order(self):
        instance = inst((1, 1), (1, 1), (5, 5))
        spec = RelationSpec(RelationKind.EPSILON, F(10))
        result = verify_approximation(instance, ["s2", "s1"], spec)
        assert result.ok
        assert all(e.by == "s1" for e in result.approximation.certificate)
        assert result.approximation.members == ("s1", "s2")

    def test_unknown_member_rejected(self):
        with pytest.raises(KeyError, match="ghost"):
            verify_approximation(STAIRCASE, ["ghost"], RelationSpec(RelationKind.EPSILON, F(1)))

    def test_tampered_certificates_fail_recheck(self):
        instance = gen_prop_dominated(F(1))
        spec = RelationSpec(RelationKind.QUASI_K, F(1), k=1)
        good = verify_approximation(instance, ["x5", "x6"], spec).approximation
        assert certificate_is_valid(instance, good)

        missing = ApproximationSet(spec, good.members, good.certificate[1:])
        assert not certificate_is_valid(instance, missing)

        wrong_exact = ApproximationSet(
            spec,
            good.members,
            (CertificateEntry(good.certificate[0].covered, good.certificate[0].by, (1, 2)),)
            + good.certificate[1:],
        )
        assert not certificate_is_valid(instance, wrong_exact)

        outsider = ApproximationSet(
            spec,
            good.members,
            (CertificateEntry(good.certificate[0].covered, "x1", (2,)),)
            + good.certificate[1:],
        )
        assert not certificate_is_valid(instance, outsider)  # x1 is not a member


class TestGridConstruction:
    def test_single_solution_any_supported_relation(self):
        one = inst((3, 4, 5))
        for spec in (
            RelationSpec(RelationKind.EPSILON, F(1)),
            RelationSpec(RelationKind.ONE_EXACT, F(1)),
            RelationSpec(RelationKind.QUASI_K, F(1), k=2),
        ):
            assert construct_grid_approx(one, spec).members == ("s1",)

    def test_dominated_family_epsilon_one_member_per_retained_cell(self):
        instance = gen_prop_dominated(F(1))
        spec = RelationSpec(RelationKind.EPSILON, F(1))
        aset = construct_grid_approx(instance, spec)
        bucketing = bucket(instance, F(1))
        retained = filter_weakly_nondominated_cells(bucketing)
        assert len(aset.members) <= len(retained)
        assert certificate_is_valid(instance, aset)

    def test_unsupported_relations_rejected(self):
        instance = gen_random(6, 4, seed=0)
        for spec in (
            RelationSpec(RelationKind.TWO_EXACT, F(1)),
            RelationSpec(RelationKind.ONE_EXACT_QUASI_K, F(1), k=2),
            RelationSpec(RelationKind.QUASI_K, F(1), k=3),  # ceil(4/2) = 2 < 3
        ):
            with pytest.raises(UnsupportedRelationError):
                construct_grid_approx(instance, spec)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_random_quasi_k_construction_verifies_with_small_cells(self, seed):
        instance = gen_random(200, 4, seed=seed, value_range=3)
        spec = RelationSpec(RelationKind.QUASI_K, F(1, 2), k=2)
        aset = construct_grid_approx(instance, spec)
        assert certificate_is_valid(instance, aset)
        bucketing = bucket(instance, F(1, 2))
        retained = filter_weakly_nondominated_cells(bucketing)
        cap = math.ceil(math.log2(len(instance))) + 1
        assert len(aset.members) <= len(retained) * cap


class TestWeaklyEfficientLift:
    def test_already_weakly_efficient_unchanged(self):
        lifted = weakly_efficient_lift(STAIRCASE, ["s1", "s4"], F(1))
        assert lifted.members == ("s1", "s4")

    def test_dominated_pair_lifts_to_their_dominators(self):
        instance = gen_prop_dominated(F(1))
        lifted = weakly_efficient_lift(instance, ["x5", "x6"], F(1))
        assert lifted.members == ("x2", "x3")
        assert lifted.relation == RelationSpec(RelationKind.QUASI_K, F(1), k=1)
        assert certificate_is_valid(instance, lifted)

    def test_one_exact_chain_lifts_interior_points(self):
        n = 2
        instance = gen_prop_one_exact(F(1, 10), n)
        eps = (1 + F(1, 10)) ** (2 * n) - 1
        lifted = weakly_efficient_lift(instance, ["x0", "x1", "x2"], eps)
        assert lifted.members == ("x0", "xbar1", "xbar2")
        weakly = weakly_efficient_set(instance)
        assert all(m in weakly for m in lifted.members)

    def test_cardinality_preserved(self):
        instance = gen_prop_dominated(F(1))
        lifted = weakly_efficient_lift(instance, ["x5", "x6"], F(1))
        assert len(lifted.members) == 2

    def test_non_covering_input_rejected(self):
        with pytest.raises(VerificationFailed) as info:
            weakly_efficient_lift(STAIRCASE, ["s1"], F(1, 10))
        assert info.value.counterexample in STAIRCASE.ids

    def test_kept_members_reserve_their_ids_before_replacements(self):
        # s1 is dominated by both s2 and s3; s2 is itself a member, so s1's
        # replacement must skip s2 and take s3, keeping the cardinality at 2
        instance = inst((3, 3), (1, 2), (2, 1))
        lifted = weakly_efficient_lift(instance, ["s1", "s2"], F(3))
        assert lifted.members == ("s2", "s3")

    def test_merge_only_when_no_unused_dominator_remains(self):
        # x5's only weakly efficient strict dominator is x2, which is already
        # a member; the merged set still covers everything
        instance = gen_prop_dominated(F(1))
        lifted = weakly_efficient_lift(instance, ["x2", "x5", "x6"], F(1))
        assert lifted.members == ("x2", "x3")
        assert certificate_is_valid(instance, lifted)


class TestGapConstruction:
    def test_single_solution_discovered(self):
        one = inst((2, 3))
        found = construct_via_gap(
            lambda q: gap_oracle(one, q), F(1), derive_value_bound(one), one.p
        )
        assert [s.id for s in found] == ["s1"]

    def test_staircase_output_verifies_under_epsilon(self):
        m = derive_value_bound(STAIRCASE)
        queries = []

        def checked_oracle(query: GapQuery):
            answer = gap_oracle(STAIRCASE, query)
            assert valid_gap_answer(STAIRCASE, query, answer)
            queries.append(query)
            return answer

        found = construct_via_gap(checked_oracle, F(1), m, STAIRCASE.p)
        spec = RelationSpec(RelationKind.EPSILON, F(1))
        assert verify_approximation(STAIRCASE, [s.id for s in found], spec).ok
        assert queries  # the constructor only saw the instance through the oracle

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_random_biobjective_instances_covered(self, seed):
        instance = gen_random(10, 2, seed=seed, value_range=2)
        m = derive_value_bound(instance)
        found = construct_via_gap(
            lambda q: gap_oracle(instance, q), F(1), m, instance.p
        )
        spec = RelationSpec(RelationKind.EPSILON, F(1))
        assert verify_approximation(instance, [s.id for s in found], spec).ok
