import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgmda.graphs import (
    adjacency_matrix,
    build_sparse_tensor,
    dump_tensor_csv,
    gamma_heuristic,
    sigma_heuristic,
    triangle_feature,
)

from oracles import triangle_sines


class TestSigmaHeuristic:
    def test_one_pair(self):
        assert sigma_heuristic(np.array([[0.0], [2.0]])) == pytest.approx(2.0)

    def test_three_points(self):
        assert sigma_heuristic(np.array([[0.0], [1.0], [2.0]])) == pytest.approx(4.0 / 3.0)

    def test_coincident_rejected(self):
        with pytest.raises(ValueError, match="zero bandwidth"):
            sigma_heuristic(np.array([[0.0], [0.0]]))

    def test_single_point_rejected(self):
        with pytest.raises(ValueError):
            sigma_heuristic(np.array([[1.0, 2.0]]))


class TestAdjacencyMatrix:
    def test_distance_equal_to_sigma(self):
        D = adjacency_matrix(np.array([[0.0], [2.0]]), 2.0)
        assert D[0, 1] == pytest.approx(np.exp(-1.0))

    def test_coincident_entry_one(self):
        D = adjacency_matrix(np.array([[1.0, 1.0], [1.0, 1.0], [5.0, 5.0]]), 1.0)
        assert D[0, 1] == pytest.approx(1.0)

    def test_zero_diagonal(self):
        X = np.random.default_rng(0).normal(size=(6, 3))
        D = adjacency_matrix(X, 1.5)
        assert np.all(np.diag(D) == 0.0)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            adjacency_matrix(np.zeros((2, 2)), 0.0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_symmetry_and_range(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(rng.integers(2, 8), rng.integers(1, 4)))
        D = adjacency_matrix(X, float(rng.uniform(0.1, 5.0)))
        assert np.allclose(D, D.T)
        assert D.min() >= 0.0 and D.max() <= 1.0


class TestTriangleFeature:
    def test_equilateral(self):
        f = triangle_feature([0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2])
        assert np.allclose(f, np.sqrt(3) / 2, atol=1e-12)

    def test_right_isoceles(self):
        f = triangle_feature([0.0, 0.0], [1.0, 0.0], [0.0, 1.0])
        assert np.allclose(f, [1.0, np.sqrt(2) / 2, np.sqrt(2) / 2], atol=1e-12)

    def test_collinear_gives_zeros(self):
        f = triangle_feature([0.0, 0.0], [1.0, 0.0], [2.0, 0.0])
        assert np.array_equal(f, np.zeros(3))

    def test_coincident_rejected(self):
        with pytest.raises(ValueError, match="coincident"):
            triangle_feature([1.0, 1.0], [1.0, 1.0], [0.0, 0.0])

    def test_matches_law_of_cosines_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            pts = rng.normal(size=(3, 3))
            assert np.allclose(
                triangle_feature(*pts), triangle_sines(*pts), atol=1e-9
            )

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_similarity_invariance(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(3, 2))
        base = triangle_feature(*pts)
        theta = rng.uniform(0, 2 * np.pi)
        R = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        scale = float(rng.uniform(0.1, 10.0))
        shift = rng.normal(size=2)
        moved = scale * (pts @ R.T) + shift
        assert np.allclose(triangle_feature(*moved), base, atol=1e-9)


class TestGammaHeuristic:
    def test_identical_pairs_fall_back(self):
        f = np.array([[0.5, 0.5, 0.5]])
        assert gamma_heuristic(f, f) == 1.0

    def test_mean_of_two(self):
        fs = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        ft = np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
        assert gamma_heuristic(fs, ft) == pytest.approx(0.5)

    def test_single_pair(self):
        assert gamma_heuristic([[2.0, 0.0, 0.0]], [[0.0, 0.0, 0.0]]) == pytest.approx(0.25)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            gamma_heuristic(np.zeros((0, 3)), np.zeros((0, 3)))


def decode(tensor):
    """Stored entries as ((is,it),(js,jt),(ks,kt),value) tuples."""
    nt = tensor.nt
    out = []
    for p1, p2, p3, v in zip(tensor.p1, tensor.p2, tensor.p3, tensor.values):
        out.append(
            (
                (p1 // nt, p1 % nt),
                (p2 // nt, p2 % nt),
                (p3 // nt, p3 % nt),
                v,
            )
        )
    return out


class TestBuildSparseTensor:
    def test_matching_triple_has_value_one(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.3, 0.9]])
        tensor = build_sparse_tensor(pts, pts, t_per_node=1, knn=1, seed=0)
        entries = {(a, b, c): v for a, b, c, v in decode(tensor)}
        key = ((0, 0), (1, 1), (2, 2))
        assert key in entries
        assert entries[key] == pytest.approx(1.0)

    def test_values_in_unit_interval(self):
        rng = np.random.default_rng(7)
        tensor = build_sparse_tensor(
            rng.normal(size=(4, 2)), rng.normal(size=(4, 2)), t_per_node=5, knn=10, seed=1
        )
        assert tensor.m > 0
        assert np.all(tensor.values > 0.0)
        assert np.all(tensor.values <= 1.0)

    def test_slot_permutation_closure(self):
        rng = np.random.default_rng(9)
        tensor = build_sparse_tensor(
            rng.normal(size=(4, 2)), rng.normal(size=(5, 2)), t_per_node=3, knn=4, seed=2
        )
        entries = {(a, b, c): v for a, b, c, v in decode(tensor)}
        for (a, b, c), v in entries.items():
            for perm in itertools.permutations((a, b, c)):
                assert perm in entries
                assert entries[perm] == v

    def test_sparse_matches_dense_oracle(self):
        rng = np.random.default_rng(21)
        Xs = rng.normal(size=(5, 2))
        Xt = rng.normal(size=(4, 2))
        tensor = build_sparse_tensor(Xs, Xt, exhaustive=True)
        for (i_s, i_t), (j_s, j_t), (k_s, k_t), v in decode(tensor):
            fs = triangle_sines(Xs[i_s], Xs[j_s], Xs[k_s])
            ft = triangle_sines(Xt[i_t], Xt[j_t], Xt[k_t])
            expected = np.exp(-tensor.gamma * ((fs - ft) ** 2).sum())
            assert v == pytest.approx(expected, rel=1e-9)

    def test_similarity_transform_leaves_values_unchanged(self):
        rng = np.random.default_rng(31)
        Xs = rng.normal(size=(4, 2))
        Xt = rng.normal(size=(4, 2))
        base = build_sparse_tensor(Xs, Xt, exhaustive=True)
        theta = 1.1
        R = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        moved = 3.0 * (Xt @ R.T) + np.array([5.0, -2.0])
        again = build_sparse_tensor(Xs, moved, exhaustive=True)
        assert np.array_equal(base.p1, again.p1)
        assert np.allclose(base.values, again.values, atol=1e-9)
        assert again.gamma == pytest.approx(base.gamma, rel=1e-9)

    def test_determinism_under_seed(self):
        rng = np.random.default_rng(13)
        Xs = rng.normal(size=(6, 2))
        Xt = rng.normal(size=(6, 2))
        t1 = build_sparse_tensor(Xs, Xt, t_per_node=4, knn=6, seed=77)
        t2 = build_sparse_tensor(Xs, Xt, t_per_node=4, knn=6, seed=77)
        assert np.array_equal(t1.p1, t2.p1)
        assert np.array_equal(t1.values, t2.values)

    def test_too_few_points(self):
        with pytest.raises(ValueError, match="at least 3"):
            build_sparse_tensor(np.zeros((2, 2)), np.zeros((5, 2)))

    def test_csv_dump(self, tmp_path):
        rng = np.random.default_rng(15)
        tensor = build_sparse_tensor(
            rng.normal(size=(4, 2)), rng.normal(size=(4, 2)), t_per_node=2, knn=2, seed=3
        )
        path = tmp_path / "tensor.csv"
        dump_tensor_csv(tensor, str(path))
        lines = path.read_text().splitlines()
        assert lines[0] == "is,it,js,jt,ks,kt,value"
        assert len(lines) == tensor.m + 1
        first = lines[1].split(",")
        assert len(first) == 7
