import math

import pytest

import bomtsp

TSP_TEXT = """NAME : square
TYPE : TSP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 0 3
3 4 0
4 4 3
EOF
"""


def is_spanning_tree(n, edges):
    if len(edges) != n - 1:
        return False
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


@pytest.fixture(scope="module")
def square(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "square.tsp"
    path.write_text(TSP_TEXT)
    return bomtsp.load_instance(str(path))


@pytest.fixture(scope="module")
def fixture():
    return bomtsp.worst_case_fixture()


def test_load_and_costs(square):
    assert square.n == 4
    assert square.kind == "EUC_2D"
    assert square.cost(0, 1) == 3.0
    assert square.cost(0, 2) == 4.0
    assert square.cost(0, 3) == 5.0
    assert square.tour_cost([0, 1, 3, 2]) == 14.0


def test_load_missing_file(tmp_path):
    with pytest.raises(bomtsp.InputError):
        bomtsp.load_instance(str(tmp_path / "missing.tsp"))


def test_subtour_lp(square, fixture):
    sol = bomtsp.solve_subtour(square)
    assert sol.objective == pytest.approx(14.0)
    bomtsp.validate_subtour_vector(square, sol.x)

    assert bomtsp.solve_subtour(fixture.inst).objective == pytest.approx(4.0)


def test_christofides(square):
    res = bomtsp.run_standard(square, seed=0)
    assert sorted(res.tour) == list(range(4))
    assert res.tour_cost == pytest.approx(14.0)
    assert is_spanning_tree(4, res.tree)
    assert res.walk_cost == pytest.approx(res.tree_cost + res.matching_cost)


def test_decompositions(fixture):
    x = bomtsp.solve_subtour(fixture.inst).x
    z = bomtsp.scale_to_tree_polytope(x)
    assert z.sum() == pytest.approx(fixture.inst.n - 1)

    cg = bomtsp.colgen_decompose(z, to_optimality=True, seed=7)
    assert cg.reached_optimal
    assert cg.objective <= 1e-6
    bomtsp.verify_combination(cg.combo, z)

    sp = bomtsp.split_decompose(x)
    assert sp.from_split
    assert sp.K >= 1
    bomtsp.verify_combination(sp, x)
    for tree in sp.trees:
        assert is_spanning_tree(fixture.inst.n, tree)


def test_maxent_and_sampling(fixture):
    z = bomtsp.scale_to_tree_polytope(fixture.lp)
    fit = bomtsp.fit_max_entropy(z)
    assert fit.converged
    assert fit.max_ratio <= 1.01 + 1e-9

    marg = bomtsp.tree_marginals(fixture.inst.n, z.edges, fit.lam)
    assert sum(marg) == pytest.approx(fixture.inst.n - 1)

    tree = bomtsp.sample_tree(fixture.inst.n, z.edges, fit.lam, seed=11)
    assert is_spanning_tree(fixture.inst.n, tree)
    assert tree == bomtsp.sample_tree(fixture.inst.n, z.edges, fit.lam, seed=11)

    combo = bomtsp.split_decompose(fixture.lp)
    rounded = bomtsp.swap_round(combo, seed=5)
    assert is_spanning_tree(fixture.inst.n, rounded)


def test_exact_solvers(fixture):
    assert bomtsp.exact_optimum(fixture.inst) == pytest.approx(4.0)
    assert bomtsp.branch_bound_optimum(fixture.inst) == pytest.approx(4.0)

    walk = bomtsp.min_walk_over_matchings(fixture.inst, fixture.one_trees[0])
    assert walk == pytest.approx(6.0)


def test_run_instance_deterministic(square):
    names = bomtsp.algorithms()
    assert len(names) == 6

    reports = [
        bomtsp.run_instance(square, samples=10, seed=3, workers=w)
        for w in (1, 2)
    ]
    for rep in reports:
        assert rep.optimum == pytest.approx(14.0)
        assert rep.lp_value <= rep.optimum + 1e-9
        assert [a.algorithm for a in rep.algos] == names
        for algo in rep.algos:
            assert algo.best_cost >= rep.optimum - 1e-9
            assert algo.avg_cost >= algo.best_cost - 1e-9
            assert not math.isnan(algo.avg_odd_frac)

    for a1, a2 in zip(reports[0].algos, reports[1].algos):
        assert a1.best_cost == a2.best_cost
        assert a1.avg_cost == a2.avg_cost
        assert a1.avg_tree == a2.avg_tree
