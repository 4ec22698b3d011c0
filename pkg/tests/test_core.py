"""Core primitives: ballots, profiles, outcome sets, rule evaluation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sccheck import (
    Ballot,
    Profile,
    Scc,
    all_ballots,
    all_profiles,
    ballot_rank,
    ballot_unrank,
    best,
    full_table,
    mask_members,
    num_profiles,
    optimist_ge,
    outcome_mask,
    pessimist_ge,
    profile_decode,
    profile_index,
    worst,
)

import oracles

ABC = Ballot([0, 1, 2])  # a > b > c


def mask(*alts):
    return outcome_mask(alts, 3)


class TestBallot:
    def test_rejects_non_permutations(self):
        with pytest.raises(ValueError):
            Ballot([0, 0, 1])
        with pytest.raises(ValueError):
            Ballot([0, 1, 3])

    def test_positions(self):
        b = Ballot([2, 0, 1])
        assert b.top == 2
        assert b.rank_of(2) == 0 and b.rank_of(0) == 1 and b.rank_of(1) == 2
        assert b.prefers(2, 1) and not b.prefers(1, 2)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_enumeration_yields_valid_permutations(self, m):
        seen = set()
        for b in all_ballots(m):
            assert sorted(b.ranking) == list(range(m))
            seen.add(b.ranking)
        assert len(seen) == len(all_ballots(m))

    @pytest.mark.parametrize("m", range(1, 7))
    def test_rank_unrank_bijection(self, m):
        import math

        for rank, b in enumerate(all_ballots(m)):
            assert ballot_rank(b) == rank
            assert ballot_unrank(rank, m) == b
        assert len(all_ballots(m)) == math.factorial(m)

    def test_rank_zero_is_identity(self):
        assert ballot_unrank(0, 4).ranking == (0, 1, 2, 3)

    def test_unrank_out_of_range(self):
        with pytest.raises(ValueError):
            ballot_unrank(6, 3)


class TestProfileIndex:
    def test_space_sizes(self):
        assert num_profiles(1, 3) == 6
        assert num_profiles(2, 3) == 36

    def test_decode_zero_is_identity_everywhere(self):
        p = profile_decode(0, 3, 3)
        assert all(b.ranking == (0, 1, 2) for b in p.ballots)

    @pytest.mark.parametrize("n,m", [(1, 3), (2, 3), (1, 4), (3, 2)])
    def test_round_trip_exhaustive(self, n, m):
        for idx in range(num_profiles(n, m)):
            assert profile_index(profile_decode(idx, n, m)) == idx

    @settings(max_examples=60, derandomize=True)
    @given(st.integers(min_value=0, max_value=num_profiles(3, 4) - 1))
    def test_round_trip_sampled_large(self, idx):
        assert profile_index(profile_decode(idx, 3, 4)) == idx

    def test_voter_zero_most_significant(self):
        # index = rank(voter0) * m! + rank(voter1)
        p = profile_decode(7, 2, 3)
        assert ballot_rank(p.ballots[0]) == 1
        assert ballot_rank(p.ballots[1]) == 1

    def test_decode_out_of_range(self):
        with pytest.raises(ValueError):
            profile_decode(36, 2, 3)

    def test_with_ballot_replaces_one_voter(self):
        p = profile_decode(0, 2, 3)
        q = p.with_ballot(1, Ballot([2, 1, 0]))
        assert q.ballots[0] == p.ballots[0]
        assert q.ballots[1].ranking == (2, 1, 0)
        assert p.ballots[1].ranking == (0, 1, 2)  # original untouched


class TestOutcomeSets:
    def test_mask_round_trip(self):
        assert mask_members(mask(0, 2)) == (0, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            outcome_mask([], 3)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            outcome_mask([3], 3)

    def test_best_worst_examples(self):
        assert best(ABC, mask(1, 2)) == 1
        assert best(ABC, mask(0, 1, 2)) == 0
        assert best(ABC, mask(2)) == 2
        assert worst(ABC, mask(0, 1)) == 1
        assert worst(ABC, mask(0, 1, 2)) == 2
        assert worst(ABC, mask(2)) == 2

    def test_best_worst_empty_error(self):
        with pytest.raises(ValueError):
            best(ABC, 0)
        with pytest.raises(ValueError):
            worst(ABC, 0)

    @pytest.mark.parametrize("m", [3, 4])
    def test_best_worst_coherence(self, m):
        for ballot in all_ballots(m):
            for w in range(1, 1 << m):
                b, ww = best(ballot, w), worst(ballot, w)
                assert (w >> b) & 1 and (w >> ww) & 1
                assert ballot.rank_of(b) <= ballot.rank_of(ww)
                singleton = w & (w - 1) == 0
                assert (b == ww) == singleton


class TestSetOrders:
    def test_optimist_examples(self):
        assert optimist_ge(mask(0, 2), mask(1), ABC)
        assert optimist_ge(mask(1, 2), mask(1), ABC)
        assert optimist_ge(mask(1), mask(1, 2), ABC)  # equal bests
        assert not optimist_ge(mask(2), mask(0, 2), ABC)

    def test_pessimist_examples(self):
        assert pessimist_ge(mask(0, 1), mask(0, 2), ABC)
        assert not pessimist_ge(mask(0, 2), mask(1), ABC)
        assert pessimist_ge(mask(1), mask(1), ABC)

    @pytest.mark.parametrize("order", [optimist_ge, pessimist_ge])
    def test_total_preorder_m3(self, order):
        sets = range(1, 8)
        for ballot in all_ballots(3):
            for x in sets:
                assert order(x, x, ballot)  # reflexive
                for y in sets:
                    assert order(x, y, ballot) or order(y, x, ballot)  # complete
                    for z in sets:
                        if order(x, y, ballot) and order(y, z, ballot):
                            assert order(x, z, ballot)  # transitive


class TestRules:
    def test_omninomination_example(self):
        f = Scc.omninomination(2, 3)
        p = Profile([Ballot([0, 1, 2]), Ballot([1, 2, 0])])
        assert f.evaluate(p) == mask(0, 1)

    def test_borda_example_against_oracle(self):
        f = Scc.borda_set(2, 3)
        rankings = ((0, 1, 2), (1, 2, 0))
        p = Profile([Ballot(r) for r in rankings])
        assert mask_members(f.evaluate(p)) == (1,)  # scores a:2 b:3 c:1
        assert oracles.borda_winners(rankings) == [1]

    def test_pareto_example_against_oracle(self):
        f = Scc.pareto_set(2, 3)
        rankings = ((0, 1, 2), (0, 2, 1))
        p = Profile([Ballot(r) for r in rankings])
        assert mask_members(f.evaluate(p)) == (0,)  # a tops both ballots
        assert oracles.pareto_winners(rankings) == [0]

    def test_constant_and_dictatorial(self):
        c = Scc.constant(2, 3, 1)
        d = Scc.dictatorial(2, 3, 1)
        p = Profile([Ballot([0, 1, 2]), Ballot([2, 0, 1])])
        assert c.evaluate(p) == mask(1)
        assert d.evaluate(p) == mask(2)

    @pytest.mark.parametrize("n", [1, 2])
    def test_all_rules_agree_with_oracles_everywhere(self, n):
        pairs = [
            (Scc.borda_set(n, 3), oracles.borda_winners),
            (Scc.plurality_ties(n, 3), oracles.plurality_winners),
            (Scc.omninomination(n, 3), oracles.omninomination_winners),
            (Scc.pareto_set(n, 3), oracles.pareto_winners),
        ]
        for rankings in oracles.iter_ranking_profiles(n, 3):
            for f, oracle in pairs:
                assert oracles.outcome_members(f, rankings) == oracle(rankings)

    @pytest.mark.parametrize("n", [1, 2])
    def test_every_rule_nonempty_everywhere(self, n, rules23):
        rules = [
            Scc.constant(n, 3, 0),
            Scc.dictatorial(n, 3, 0),
            Scc.omninomination(n, 3),
            Scc.plurality_ties(n, 3),
            Scc.borda_set(n, 3),
            Scc.pareto_set(n, 3),
        ]
        for f in rules:
            for p in all_profiles(n, 3):
                assert f.evaluate(p) != 0

    def test_dimension_mismatch(self):
        f = Scc.borda_set(2, 3)
        with pytest.raises(ValueError):
            f.evaluate(profile_decode(0, 1, 3))

    def test_table_validation(self):
        with pytest.raises(ValueError):
            Scc.from_table(1, 3, [1] * 5)  # wrong length
        with pytest.raises(ValueError):
            Scc.from_table(1, 3, [1, 1, 1, 0, 1, 1])  # empty entry
        with pytest.raises(ValueError):
            Scc.from_table(1, 3, [1, 1, 1, 8, 1, 1])  # out of range

    def test_materialized_matches_rule(self):
        f = Scc.borda_set(2, 3)
        t = f.materialized()
        assert t.kind == "table"
        for p in all_profiles(2, 3):
            assert t.evaluate(p) == f.evaluate(p)

    def test_full_table_lookup_order(self):
        f = Scc.dictatorial(2, 3, 0)
        table = full_table(f)
        for idx, p in enumerate(all_profiles(2, 3)):
            assert table[idx] == f.evaluate(p)

    def test_evaluation_deterministic(self):
        f = Scc.plurality_ties(2, 3)
        p = profile_decode(17, 2, 3)
        assert f.evaluate(p) == f.evaluate(p)
