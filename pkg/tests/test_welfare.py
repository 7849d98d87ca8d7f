import random
from fractions import Fraction

import pytest

from helpers import ALPHA_BETA, welfare_instance
from sharealloc import Instance, SearchBudgetExceeded, validate_sharing, welfare
from sharealloc.oracle import max_welfare_bruteforce
from sharealloc.reductions import gen_n3dm_ewsa
from sharealloc.welfare_solvers import maximize_ewsa_simple, solve_ewsa_bounded_exact, solve_ewsa_simple, solve_uwsa


def two_agents():
    return Instance.build([[1, 4], [3, 1]], [[0], [1]], [(0, 1)], [])


class TestUtilitarian:
    def test_two_agents(self):
        res = solve_uwsa(two_agents(), 1, 6)
        assert res.answer and res.optimum == 6
        assert welfare(two_agents(), res.witness)[0] == 6
        assert not solve_uwsa(two_agents(), 1, 7).answer

    def test_no_edges(self):
        inst = Instance.build([[2, 1], [5, 3]], [[0], [1]], [], [])
        assert solve_uwsa(inst, 2, 0).optimum == 5

    def test_witness_is_valid_and_optimal(self):
        rng = random.Random(21)
        for i in range(80):
            inst = welfare_instance(rng, ALPHA_BETA[i % 4])
            for b in (1, 2):
                res = solve_uwsa(inst, b, 0)
                assert validate_sharing(inst, res.witness).ok
                assert res.witness.bound == b
                assert welfare(inst, res.witness)[0] == res.optimum

    def test_rejects_budget_and_bad_b(self):
        with pytest.raises(ValueError):
            solve_uwsa(two_agents().with_extension(budget=1), 1, 0)
        with pytest.raises(ValueError):
            solve_uwsa(two_agents(), 0, 0)


class TestSimpleEgalitarian:
    def test_lift_poor_agent(self):
        inst = Instance.build([[3, 3], [5, 0]], [[0, 1], []], [(0, 1)], [])
        ok, w = solve_ewsa_simple(inst, 5)
        assert ok and welfare(inst, w)[1] >= 5
        assert maximize_ewsa_simple(inst)[0] == 5

    def test_zero_threshold(self):
        rng = random.Random(4)
        for _ in range(20):
            ok, w = solve_ewsa_simple(welfare_instance(rng), 0)
            assert ok and w.is_empty

    def test_no_edges(self):
        inst = Instance.build([[2, 1], [5, 3]], [[0], [1]], [], [])
        assert maximize_ewsa_simple(inst)[0] == 2

    def test_every_threshold_matches_oracle(self):
        rng = random.Random(8)
        for i in range(60):
            inst = welfare_instance(rng, ALPHA_BETA[i % 4])
            best = max_welfare_bruteforce(inst, 1).egalitarian
            for k in sorted({Fraction(0), best, best + Fraction(1, 2), best + 1}):
                ok, w = solve_ewsa_simple(inst, k)
                assert ok == (k <= best)
                if ok:
                    assert welfare(inst, w)[1] >= k


class TestBoundedEgalitarian:
    def test_n3dm_threshold(self):
        inst, b, k = gen_n3dm_ewsa([1], [1], [1], 3)
        assert (b, k) == (2, 39)
        ok, w = solve_ewsa_bounded_exact(inst, b, k)
        assert ok and welfare(inst, w)[1] == 39
        assert not solve_ewsa_bounded_exact(inst, b, k + 1)[0]

    def test_empty_graph(self):
        inst = Instance.build([[2, 1], [5, 3]], [[0], [1]], [], [])
        ok, w = solve_ewsa_bounded_exact(inst, 2, 2)
        assert ok and w.is_empty

    def test_against_oracle(self):
        rng = random.Random(13)
        for i in range(60):
            inst = welfare_instance(rng, ALPHA_BETA[i % 4])
            for b in (1, 2, 3):
                best = max_welfare_bruteforce(inst, b).egalitarian
                assert solve_ewsa_bounded_exact(inst, b, best)[0]
                assert not solve_ewsa_bounded_exact(inst, b, best + Fraction(1, 4))[0]

    def test_node_cap(self):
        rows = [[3, 1, 4, 1, 5, 2], [2, 6, 5, 3, 5, 1], [4, 1, 2, 3, 0, 2],
                [1, 4, 1, 4, 2, 1], [3, 5, 0, 2, 5, 1], [2, 3, 4, 1, 1, 3]]
        inst = Instance.build(rows, [[0, 1, 2], [3, 4, 5], [], [], [], []], "clique", [])
        with pytest.raises(SearchBudgetExceeded):
            solve_ewsa_bounded_exact(inst, 2, 3, node_cap=5)
        expect = max_welfare_bruteforce(inst, 2).egalitarian >= 3
        assert solve_ewsa_bounded_exact(inst, 2, 3, node_cap=10_000)[0] == expect
