import random

import pytest

from brooks_sim.errors import BrooksSimError, DegPlusOneViolation, InstanceInfeasible
from brooks_sim.graph_core import Graph, PartialColoring, complete_graph
from brooks_sim.listcolor import (
    ListInstance,
    build_instance,
    make_unit,
    solve_distributed,
    solve_greedy_oracle,
    validate_assignment,
)


def star(delta: int) -> Graph:
    return Graph(delta + 1, [(0, i) for i in range(1, delta + 1)])


class TestBuildInstance:
    def test_singleton_palette_after_repeat_colored_neighbors(self):
        g = star(5)
        coloring = PartialColoring(g)  # delta 5
        for i, c in enumerate((0, 1, 2, 3, 3)):
            coloring.assign(1 + i, c)
        inst = build_instance(g, coloring, [make_unit(0)], name="t")
        assert inst.palettes == (frozenset({4}),)
        assert inst.degrees == (0,)

    def test_pair_palette_is_intersection(self):
        # pair (0,1) with disjointly colored outside neighborhoods
        edges = [(0, 2), (0, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4)]
        g = Graph(6, edges)  # delta 4 (node 2)
        coloring = PartialColoring(g)
        coloring.assign(2, 0)
        coloring.assign(5, 1)
        inst = build_instance(g, coloring, [make_unit(0, 1)], name="t")
        # [4] minus {0} (via 0's nbr 2) minus {1} (via 1's nbr 5)
        assert inst.palettes == (frozenset({2, 3}),)

    def test_edges_between_units(self):
        # K_4 plus a pendant raising delta to 4, so palettes beat degrees
        edges = [(i, j) for i in range(4) for j in range(i + 1, 4)] + [(0, 4)]
        g = Graph(5, edges)
        coloring = PartialColoring(g)
        inst = build_instance(g, coloring, [make_unit(v) for v in range(4)], name="t")
        assert len(inst.edges) == 6
        assert inst.max_degree == 3

    def test_pair_member_adjacency_merges_units(self):
        g = Graph(4, [(0, 1), (2, 3), (1, 2)])
        coloring = PartialColoring(g)
        inst = build_instance(g, coloring, [make_unit(0, 3), make_unit(1)], name="t")
        # unit (0,3) touches unit (1,) through edge (0,1)
        assert inst.edges == ((0, 1),)

    def test_deg_plus_one_violation_names_unit(self):
        g = complete_graph(3)
        coloring = PartialColoring(g)  # delta 2, palettes size 2, degree 2
        with pytest.raises(DegPlusOneViolation) as err:
            build_instance(g, coloring, [make_unit(v) for v in range(3)], name="bad")
        assert err.value.unit in {(0,), (1,), (2,)}
        assert err.value.phase == "bad"

    def test_colored_member_rejected(self):
        g = complete_graph(3)
        coloring = PartialColoring(g)
        coloring.assign(0, 0)
        with pytest.raises(BrooksSimError):
            build_instance(g, coloring, [make_unit(0)], name="t")

    def test_pair_on_graph_edge_rejected(self):
        g = complete_graph(3)
        coloring = PartialColoring(g)
        with pytest.raises(BrooksSimError):
            build_instance(g, coloring, [make_unit(0, 1)], name="t")


class TestSolveDistributed:
    def test_single_unit_forced_color(self):
        inst = ListInstance("t", 8, (make_unit(3),), (), (frozenset({5}),))
        assignment, _ = solve_distributed(inst, seed=0)
        assert assignment == {(3,): 5}

    def test_path_of_three_units(self):
        inst = ListInstance(
            "t",
            3,
            (make_unit(0), make_unit(1), make_unit(2)),
            ((0, 1), (1, 2)),
            (frozenset({0, 1}), frozenset({0, 1, 2}), frozenset({0, 1})),
        )
        assignment, metrics = solve_distributed(inst, seed=1)
        assert validate_assignment(inst, assignment)
        assert solve_greedy_oracle(inst)  # oracle agrees the instance is feasible
        assert metrics.rounds_elapsed >= 2

    def test_determinism(self):
        inst = ListInstance(
            "t",
            4,
            tuple(make_unit(v) for v in range(4)),
            ((0, 1), (1, 2), (2, 3), (0, 3)),
            tuple(frozenset(range(3)) for _ in range(4)),
        )
        a, _ = solve_distributed(inst, seed=5)
        b, _ = solve_distributed(inst, seed=5)
        assert a == b

    def test_empty_instance(self):
        inst = ListInstance("t", 4, (), (), ())
        assignment, metrics = solve_distributed(inst, seed=0)
        assert assignment == {}
        assert metrics.rounds_elapsed == 0

    def test_clique_instance_all_distinct(self):
        k = 6
        inst = ListInstance(
            "t",
            8,
            tuple(make_unit(v) for v in range(k)),
            tuple((i, j) for i in range(k) for j in range(i + 1, k)),
            tuple(frozenset(range(7)) for _ in range(k)),
        )
        assignment, _ = solve_distributed(inst, seed=3)
        assert len(set(assignment.values())) == k


class TestGreedyOracle:
    def test_minimal_palettes_always_succeed(self):
        k = 5
        inst = ListInstance(
            "t",
            6,
            tuple(make_unit(v) for v in range(k)),
            tuple((i, j) for i in range(k) for j in range(i + 1, k)),
            tuple(frozenset(range(5)) for _ in range(k)),
        )
        assignment = solve_greedy_oracle(inst)
        assert validate_assignment(inst, assignment)

    def test_infeasible_without_deg_plus_one(self):
        inst = ListInstance(
            "t",
            3,
            (make_unit(0), make_unit(1)),
            ((0, 1),),
            (frozenset({0}), frozenset({0})),
        )
        with pytest.raises(InstanceInfeasible):
            solve_greedy_oracle(inst)

    def test_monte_carlo_random_deg_plus_one_instances(self):
        # greedy succeeds on every instance satisfying deg+1, 10k samples
        rng = random.Random(0)
        for _ in range(10_000):
            n = rng.randrange(1, 9)
            edges = [
                (i, j)
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.5
            ]
            deg = [0] * n
            for i, j in edges:
                deg[i] += 1
                deg[j] += 1
            delta_colors = 10
            palettes = []
            for v in range(n):
                size = deg[v] + 1 + rng.randrange(0, 3)
                palettes.append(frozenset(rng.sample(range(delta_colors), min(size, delta_colors))))
            inst = ListInstance(
                "mc",
                delta_colors,
                tuple(make_unit(v) for v in range(n)),
                tuple(edges),
                tuple(palettes),
            )
            assignment = solve_greedy_oracle(inst)
            assert validate_assignment(inst, assignment)


class TestValidateAssignment:
    def _inst(self):
        return ListInstance(
            "t",
            4,
            (make_unit(0), make_unit(1)),
            ((0, 1),),
            (frozenset({0, 1}), frozenset({1, 2})),
        )

    def test_accepts_good(self):
        assert validate_assignment(self._inst(), {(0,): 0, (1,): 1})

    def test_rejects_out_of_palette(self):
        assert not validate_assignment(self._inst(), {(0,): 3, (1,): 1})

    def test_rejects_conflict(self):
        assert not validate_assignment(self._inst(), {(0,): 1, (1,): 1})

    def test_rejects_partial(self):
        assert not validate_assignment(self._inst(), {(0,): 0})


def test_instance_json_round_trip_fields():
    import json

    inst = ListInstance(
        "dump", 4, (make_unit(0), make_unit(1, 2)), ((0, 1),), (frozenset({0}), frozenset({1, 2}))
    )
    payload = json.loads(inst.to_json())
    assert payload["units"] == [[0], [1, 2]]
    assert payload["edges"] == [[0, 1]]
    assert payload["palettes"] == [[0], [1, 2]]
