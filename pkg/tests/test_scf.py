import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import neutral_all_permutations, satisfies_definition, weighted_plurality_table
from wpcheck.errors import InvalidPermutation, InvalidProfile, InvalidWeights, TooLarge
from wpcheck.scf import (
    FirstMatchingVoter,
    FixedWinner,
    SocialChoiceFunction,
    WeightedPluralityRule,
    all_profiles,
    build_weighted_plurality,
    constant,
    dictator,
    evaluate,
    is_neutral,
    parity,
    permute_alternatives,
    plurality,
    profile_from_index,
    profile_index,
    random_neutral_function,
)

third = Fraction(1, 3)


def majority_ties_to_one(n=2):
    return build_weighted_plurality(2, n, [Fraction(1, n)] * n, FixedWinner(1))


class TestEncoding:
    @pytest.mark.parametrize("k,n", [(2, 1), (2, 5), (3, 3), (4, 2)])
    def test_roundtrip(self, k, n):
        for idx in range(k**n):
            assert profile_index(profile_from_index(idx, k, n), k) == idx

    def test_voter_one_is_least_significant(self):
        assert profile_index((1, 0, 0), 2) == 1
        assert profile_index((0, 0, 1), 2) == 4
        assert profile_from_index(5, 3, 2) == (2, 1)

    def test_all_profiles_rows_match_index(self):
        digits = all_profiles(3, 3)
        for idx in (0, 7, 26):
            assert tuple(digits[idx]) == profile_from_index(idx, 3, 3)


class TestEvaluate:
    def test_dictator(self):
        assert evaluate(dictator(2, 2), (1, 0)) == 1

    def test_majority(self):
        assert evaluate(plurality(2, 3), (1, 1, 0)) == 1

    def test_parity(self):
        assert evaluate(parity(3), (1, 1, 1)) == 1

    @pytest.mark.parametrize("x", [(1, 0, 0), (0, 2)])
    def test_dimension_mismatch(self, x):
        with pytest.raises(InvalidProfile):
            evaluate(dictator(2, 2), x)

    def test_table_validation(self):
        with pytest.raises(ValueError):
            SocialChoiceFunction(2, 2, [0, 1, 2, 0])
        with pytest.raises(ValueError):
            SocialChoiceFunction(2, 2, [0, 1, 1])


class TestPermute:
    def test_identity(self):
        f = random_neutral_function(3, 3, 1)
        g = SocialChoiceFunction(3, 3, np.arange(27) % 3)
        assert permute_alternatives(g, (0, 1, 2)) == g
        assert permute_alternatives(f, (0, 1, 2)) == f

    def test_constant(self):
        assert permute_alternatives(constant(2, 3, 0), (1, 0)) == constant(2, 3, 1)

    def test_majority_fixed(self):
        f = plurality(2, 3)
        assert permute_alternatives(f, (1, 0)) == f

    def test_not_a_bijection(self):
        with pytest.raises(InvalidPermutation):
            permute_alternatives(plurality(3, 2), (0, 0, 1))

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(0, 10**6),
        st.permutations(range(3)),
        st.permutations(range(3)),
    )
    def test_composition(self, seed, sigma, tau):
        rng = np.random.default_rng(seed)
        f = SocialChoiceFunction(3, 3, rng.integers(0, 3, 27))
        tau_sigma = tuple(tau[sigma[j]] for j in range(3))
        lhs = permute_alternatives(permute_alternatives(f, sigma), tau)
        assert lhs == permute_alternatives(f, tau_sigma)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(3)
        f = SocialChoiceFunction(4, 2, rng.integers(0, 4, 16))
        sigma = (2, 0, 3, 1)
        inv = tuple(sigma.index(j) for j in range(4))
        assert permute_alternatives(permute_alternatives(f, sigma), inv) == f


class TestNeutrality:
    def test_majority_odd(self):
        assert is_neutral(plurality(2, 3)) == (True, None)

    def test_ties_to_one_not_neutral(self):
        ok, (sigma, x) = is_neutral(majority_ties_to_one())
        assert not ok
        assert sum(x) == 1  # the counterexample is a tied profile

    def test_ties_to_first_voter_neutral(self):
        f = build_weighted_plurality(2, 2, [Fraction(1, 2)] * 2, FirstMatchingVoter())
        assert f.table.tolist() == [0, 1, 0, 1]  # f(x) = x_1 on ties
        assert is_neutral(f)[0]

    def test_first_match_plurality_k3(self):
        assert is_neutral(plurality(3, 4))[0]

    def test_counterexample_is_genuine(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            f = SocialChoiceFunction(3, 2, rng.integers(0, 3, 9))
            ok, bad = is_neutral(f)
            if ok:
                continue
            sigma, x = bad
            sx = tuple(sigma[v] for v in x)
            assert evaluate(f, sx) != sigma[evaluate(f, x)]

    @pytest.mark.parametrize("k,n", [(2, 3), (3, 2), (3, 3), (4, 2)])
    def test_generators_agree_with_all_permutations(self, k, n):
        rng = np.random.default_rng(k * 10 + n)
        for trial in range(25):
            if trial % 2:
                f = random_neutral_function(k, n, trial)
                # break neutrality at one profile half of the time
                if trial % 4 == 1:
                    t = f.table.copy()
                    t[trial % t.size] = (t[trial % t.size] + 1) % k
                    f = SocialChoiceFunction(k, n, t)
            else:
                f = SocialChoiceFunction(k, n, rng.integers(0, k, k**n))
            assert is_neutral(f)[0] == neutral_all_permutations(f.table.tolist(), k, n)


class TestWeightedPlurality:
    def test_all_weight_on_one_voter(self):
        for tb in (FirstMatchingVoter(), FixedWinner(2)):
            assert build_weighted_plurality(3, 3, [1, 0, 0], tb) == dictator(3, 3)

    def test_three_way_tie(self):
        f = build_weighted_plurality(3, 3, [third] * 3, FirstMatchingVoter())
        assert evaluate(f, (1, 0, 2)) == 1

    def test_half_quarter_quarter_tie(self):
        f = build_weighted_plurality(2, 3, ["1/2", "1/4", "1/4"], FirstMatchingVoter())
        assert evaluate(f, (0, 1, 1)) == 0

    def test_fixed_winner_on_ties(self):
        f = majority_ties_to_one()
        assert f.table.tolist() == [0, 1, 1, 1]

    @pytest.mark.parametrize("w", [[1, 1], ["1/2", "1/3"], [2, -1], ["a", 0]])
    def test_invalid_weights(self, w):
        with pytest.raises(InvalidWeights):
            build_weighted_plurality(2, 2, w)

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)]),
        st.lists(st.integers(0, 6), min_size=4, max_size=4),
        st.booleans(),
    )
    def test_matches_loop_oracle_and_definition(self, kn, raw, fixed):
        k, n = kn
        raw = raw[:n]
        if sum(raw) == 0:
            raw = [1] * n
        w = [Fraction(v, sum(raw)) for v in raw]
        tb = FixedWinner(1) if fixed else FirstMatchingVoter()
        f = build_weighted_plurality(k, n, w, tb)
        assert f.table.tolist() == weighted_plurality_table(k, n, w, 1 if fixed else None)
        assert satisfies_definition(f.table.tolist(), k, n, w)
        if not fixed:
            assert is_neutral(f)[0]

    def test_rule_matches_table(self):
        rule = WeightedPluralityRule(3, ["1/2", "1/4", "1/4"])
        f = rule.to_function()
        digits = all_profiles(3, 3)
        assert np.array_equal(rule.winners(digits), f.table)
        assert rule((2, 1, 1)) == f((2, 1, 1))


class TestRandomNeutral:
    def test_deterministic(self):
        assert random_neutral_function(3, 3, 42) == random_neutral_function(3, 3, 42)

    @pytest.mark.parametrize("k,n", [(2, 1), (2, 4), (3, 2), (3, 4), (4, 3)])
    def test_neutral(self, k, n):
        for seed in range(5):
            assert is_neutral(random_neutral_function(k, n, seed))[0]

    def test_k2_n3_covers_several_functions(self):
        seen = {random_neutral_function(2, 3, s) for s in range(16)}
        assert len(seen) >= 2
        # every anti-symmetric function on {0,1}^3 is one of 2^4 = 16
        assert all(neutral_all_permutations(f.table.tolist(), 2, 3) for f in seen)

    def test_all_antisymmetric_reachable(self):
        seen = {random_neutral_function(2, 3, s) for s in range(400)}
        assert len(seen) == 16

    def test_guard(self):
        with pytest.raises(TooLarge):
            random_neutral_function(5, 2, 0)
        with pytest.raises(TooLarge):
            random_neutral_function(2, 21, 0)

    def test_unanimous_profiles_fixed(self):
        # a profile using one alternative has a large stabilizer when k >= 3
        for seed in range(10):
            f = random_neutral_function(3, 3, seed)
            for j in range(3):
                assert evaluate(f, (j, j, j)) == j


def test_all_antisymmetric_count_by_enumeration():
    """Independent count: 2^(orbits of {0,1}^3 under complement) = 16."""
    count = 0
    for table in itertools.product(range(2), repeat=8):
        if neutral_all_permutations(list(table), 2, 3):
            count += 1
    assert count == 16
