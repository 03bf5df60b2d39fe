import math

import pytest

from probal import (
    BudgetFractionTooLargeError,
    DegenerateBoundError,
    SearchSpaceTooLargeError,
    approx_factor,
    approx_ratio_study,
    bayes_lower_bound,
    brute_force_bayes,
    brute_force_minimax,
    enumerate_trees,
    minimax_lower_bound,
    path_graph,
    star_graph,
    surrogate_loss,
    uniform_prior,
)


def test_brute_bayes_path5(path5, path5_uniform):
    assert brute_force_bayes(path5, path5_uniform, 2) == ([2, 4], pytest.approx(0.6))
    assert brute_force_bayes(path5, path5_uniform, 1) == ([3], pytest.approx(1.6))
    assert brute_force_bayes(path5, path5_uniform, 5) == ([1, 2, 3, 4, 5], 0.0)


def test_brute_minimax_path5(path5):
    assert brute_force_minimax(path5, 2) == ([2, 4], 1)
    assert brute_force_minimax(path5, 1) == ([3], 2)
    assert brute_force_minimax(path_graph(2), 1) == ([1], 1)


def test_brute_returned_loss_matches_reevaluation(path5, path5_uniform):
    iv, loss = brute_force_bayes(path5, path5_uniform, 2)
    assert loss == pytest.approx(surrogate_loss(path5, path5_uniform, iv))


def test_brute_optimality_exhaustive_small():
    import itertools

    for tree in enumerate_trees(5):
        prior = uniform_prior(tree)
        for m in (1, 2):
            _, best = brute_force_bayes(tree, prior, m)
            for subset in itertools.combinations(tree.labels, m):
                assert best <= surrogate_loss(tree, prior, subset) + 1e-12


def test_brute_cap(path5, path5_uniform):
    with pytest.raises(SearchSpaceTooLargeError):
        brute_force_bayes(path5, path5_uniform, 2, cap=5)


def test_brute_threads_match_serial(path5, path5_uniform):
    tree = path_graph(12)
    prior = uniform_prior(tree)
    assert brute_force_bayes(tree, prior, 3, threads=1) == brute_force_bayes(
        tree, prior, 3, threads=4
    )
    assert brute_force_minimax(tree, 3, threads=1) == brute_force_minimax(tree, 3, threads=4)


def test_bayes_lower_bound_values():
    assert bayes_lower_bound(100, 5, 3) == pytest.approx(9025 / 1400)
    assert bayes_lower_bound(5, 2, 2) == pytest.approx(0.6)
    assert bayes_lower_bound(10, 10, 2) == 0.0
    with pytest.raises(DegenerateBoundError):
        bayes_lower_bound(5, 1, 1)


def test_minimax_lower_bound_values():
    assert minimax_lower_bound(5, 2, 2) == pytest.approx(1.0)
    assert minimax_lower_bound(100, 5, 3) == pytest.approx(95 / 14)
    assert minimax_lower_bound(10, 10, 3) == 0.0
    with pytest.raises(DegenerateBoundError):
        minimax_lower_bound(2, 1, 1)


def test_bounds_tight_on_path5_m2(path5, path5_uniform):
    _, opt_bayes = brute_force_bayes(path5, path5_uniform, 2)
    assert opt_bayes == pytest.approx(bayes_lower_bound(5, 2, 2))
    _, opt_mm = brute_force_minimax(path5, 2)
    assert float(opt_mm) == pytest.approx(minimax_lower_bound(5, 2, 2))


def test_approx_factor_values():
    assert approx_factor(2, 2, 2, 0.4, "bayes") == pytest.approx(25 / 3)
    assert approx_factor(2, 2, 2, 0.4, "minimax") == pytest.approx(5.0)
    assert approx_factor(1, 1, 2, 0.0, "minimax") == pytest.approx(1.5)
    with pytest.raises(BudgetFractionTooLargeError):
        approx_factor(2, 2, 2, 1.0)
    with pytest.raises(ValueError):
        approx_factor(0, 1, 2, 0.5)


def test_study_path5(path5, path5_uniform):
    rep = approx_ratio_study([(path5, path5_uniform)], [2], modes=("bayes",))
    (row,) = rep.rows
    assert row.ratio == pytest.approx(1.0 / 0.6)
    assert row.factor == pytest.approx(25 / 3)
    assert row.within


def test_study_star_ratio_one(star4):
    rep = approx_ratio_study([(star4, uniform_prior(star4))], [1])
    for row in rep.rows:
        assert row.ratio == pytest.approx(1.0)
        assert row.within


def test_study_full_budget_convention():
    # m = n: the optimum reaches zero; equal zeros count as ratio 1, a
    # positive designed loss against a zero optimum is reported as inf
    tree = path_graph(2)
    rep = approx_ratio_study([(tree, uniform_prior(tree))], [2], modes=("bayes",))
    (row,) = rep.rows
    assert row.optimal_loss == 0.0
    assert row.ratio == math.inf and row.factor is None and row.within is None

    star = star_graph("c", ["a", "b"])
    rep2 = approx_ratio_study([(star, uniform_prior(star))], [3], modes=("minimax",))
    (row2,) = rep2.rows
    assert row2.factor is None
