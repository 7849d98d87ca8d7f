from fractions import Fraction

import pytest

from sharealloc import (
    Instance,
    InstanceError,
    InvalidSharingError,
    Sharing,
    derive_bundles,
    envious_agents,
    own_utility,
    perceived_value,
    sharing_cost,
    validate_sharing,
    welfare,
)
from sharealloc.reductions import gen_independent_set_ersa

import networkx as nx


def two_agents(**kw):
    # u1 = (1, 4), u2 = (3, 1); agent 0 holds r0, agent 1 holds r1
    return Instance.build([[1, 4], [3, 1]], [[0], [1]], [(0, 1)], "same_as_sharing_bidirected", **kw)


def three_path():
    return Instance.build([[1, 1, 1]] * 3, [[0], [1], [2]], [(0, 1), (1, 2)], [])


class TestInstance:
    def test_shorthands(self):
        inst = Instance.build([[1], [0], [0]], [[0], [], []], "clique", "clique")
        assert inst.sharing_edges == {(0, 1), (0, 2), (1, 2)}
        assert len(inst.attention_arcs) == 6
        inst = Instance.build([[1], [0]], [[0], []], [(1, 0)], "same_as_sharing_bidirected")
        assert inst.attention_arcs == {(0, 1), (1, 0)}

    def test_derived_views(self):
        inst = two_agents()
        assert (inst.n, inst.m) == (2, 2)
        assert inst.owner == (0, 1)
        assert inst.bundle_value[0][1] == 4

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            (dict(utilities=[[1, 1]], allocation=[[0]]), "allocation not complete"),
            (dict(utilities=[[1], [1]], allocation=[[0], [0]]), "allocated twice"),
            (dict(utilities=[[-1]], allocation=[[0]]), "non-negative"),
            (dict(utilities=[[1], [1]], allocation=[[0], []], sharing_edges=[(0, 0)]), "sharing edge"),
            (dict(utilities=[[1], [1]], allocation=[[0], []], sharing_edges=[(0, 5)]), "invalid endpoint"),
            (dict(utilities=[[1]], allocation=[[0]], alpha=Fraction(3, 2)), "alpha out of"),
            (dict(utilities=[[1], [1]], allocation=[[0], []], edge_costs={(0, 1): 2}), "not a sharing edge"),
            (dict(utilities=[[1]], allocation=[[0]], budget=-1), "budget"),
        ],
    )
    def test_invariants(self, kwargs, message):
        with pytest.raises(InstanceError, match=message):
            Instance.build(**kwargs)

    def test_with_extension(self):
        inst = two_agents(edge_costs={(0, 1): 7})
        assert inst.with_extension(budget=3).extension.budget == 3
        assert inst.with_extension(budget=3).extension.cost(1, 0) == 7


class TestValidation:
    def test_empty_sharing_ok(self):
        assert validate_sharing(two_agents(), Sharing()).ok

    def test_ownership_violation(self):
        res = validate_sharing(three_path(), Sharing.from_transfers([(0, 1, 2)]))
        assert "ownership" in res.kinds()

    def test_per_agent_bound(self):
        inst = three_path()
        res = validate_sharing(inst, Sharing.from_transfers([(0, 1, 0), (2, 1, 2)]))
        assert res.kinds() == {"per-agent-bound"}
        assert validate_sharing(inst, Sharing.from_transfers([(0, 1, 0), (2, 1, 2)], bound=2)).ok

    def test_edge_not_in_graph_and_triple_access(self):
        inst = three_path()
        res = validate_sharing(inst, Sharing((((0, 2), 0), ((0, 1), 0)), bound=3))
        assert {"edge-not-in-graph", "triple-access"} <= res.kinds()

    def test_budget(self):
        inst = two_agents(edge_costs={(0, 1): 7}, budget=6)
        assert validate_sharing(inst, Sharing.from_transfers([(1, 0, 1)])).kinds() == {"budget"}

    def test_derive_rejects_invalid(self):
        with pytest.raises(InvalidSharingError):
            derive_bundles(three_path(), Sharing.from_transfers([(0, 1, 2)]))


class TestBundles:
    def test_empty_sharing_is_identity(self):
        inst = two_agents()
        b = derive_bundles(inst, Sharing())
        assert b.kept == inst.allocation
        assert not any(b.received) and not any(b.donated)

    def test_single_share(self):
        b = derive_bundles(two_agents(), Sharing.from_transfers([(0, 1, 0)]))
        assert b.donated[0] == {0} and b.received[1] == {0}
        assert b.bundle(1) == {0, 1}

    def test_two_disjoint_shares(self):
        inst = Instance.build([[1] * 2] * 5, [[0], [], [1], [], []], [(0, 1), (2, 3), (3, 4)], [])
        b = derive_bundles(inst, Sharing.from_transfers([(0, 1, 0), (2, 3, 1)]))
        touched = [a for a in range(5) if b.received[a] or b.donated[a]]
        assert touched == [0, 1, 2, 3]
        # direct set-union view: bundle = initial allocation plus received
        for a in range(5):
            assert b.bundle(a) == inst.allocation[a] | b.received[a]


class TestValues:
    def test_own_utility_base(self):
        inst = Instance.build([[2, 3], [0, 0]], [[0], [1]], [(0, 1)], [])
        b = derive_bundles(inst, Sharing.from_transfers([(1, 0, 1)]))
        assert own_utility(inst, b, 0) == 5

    def test_own_utility_alpha(self):
        inst = Instance.build([[10, 4], [0, 0]], [[0, 1], []], [(0, 1)], [], alpha=Fraction(1, 2))
        b = derive_bundles(inst, Sharing.from_transfers([(0, 1, 1)]))
        assert own_utility(inst, b, 0) == 12

    def test_own_utility_beta(self):
        inst = Instance.build([[0, 3], [0, 0]], [[0], [1]], [(0, 1)], [], beta=Fraction(1, 2))
        b = derive_bundles(inst, Sharing.from_transfers([(1, 0, 1)]))
        assert own_utility(inst, b, 0) == Fraction(3, 2)

    def test_perceived_value(self):
        # viewer 0 sees agent 1 holding r0 (worth 3) and receiving r2 (worth 4) at beta = 1/2
        inst = Instance.build(
            [[3, 0, 4], [0, 0, 0], [0, 0, 0]], [[1], [0], [2]], [(1, 2)], [], beta=Fraction(1, 2)
        )
        b = derive_bundles(inst, Sharing.from_transfers([(2, 1, 2)]))
        assert perceived_value(inst, b, 0, 1) == 5
        with pytest.raises(ValueError):
            perceived_value(inst, b, 1, 1)


class TestEnvy:
    def test_single_agent(self):
        inst = Instance.build([[3]], [[0]])
        assert envious_agents(inst, Sharing()).envious == frozenset()

    def test_empty_bundle_envies(self):
        inst = Instance.build([[1], [0]], [[], [0]], [], [(0, 1)])
        report = envious_agents(inst, Sharing())
        assert report.envious == {0}
        assert report.witnesses[0] == (0, 1)

    def test_independent_set_gadget_initial_envy(self):
        g = nx.path_graph(4)
        inst, _ = gen_independent_set_ersa(g, 2)
        assert envious_agents(inst, Sharing()).envious == frozenset(range(4))


class TestWelfareAndCost:
    def test_empty_sharing(self):
        assert welfare(two_agents(), Sharing()) == (2, 1)

    def test_shares(self):
        inst = two_agents()
        assert welfare(inst, Sharing.from_transfers([(1, 0, 1)]))[0] == 6
        assert welfare(inst, Sharing.from_transfers([(0, 1, 0)])) == (5, 1)

    def test_cost(self):
        inst = two_agents(edge_costs={(0, 1): 7})
        assert sharing_cost(inst, Sharing()) == 0
        assert sharing_cost(inst, Sharing.from_transfers([(0, 1, 0)])) == 7
        assert sharing_cost(two_agents(), Sharing.from_transfers([(0, 1, 0)])) == 0


def test_welfare_function_not_shadowed_by_solver_module():
    import sharealloc
    import sharealloc.welfare_solvers  # noqa: F401

    assert callable(sharealloc.welfare)
