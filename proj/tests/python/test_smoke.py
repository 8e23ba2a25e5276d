import math

import numpy as np
import pytest

import fsasc


def test_monomial_count_and_order():
    assert fsasc.monomial_count(3, 2) == 6
    assert fsasc.exponents(3, 2) == [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
    with pytest.raises(fsasc.CapacityError):
        fsasc.monomial_count(200, 200)


def test_veronese_and_poly():
    x = np.array([[1.0, 2.0]])
    assert np.allclose(fsasc.veronese(x, 2), [[1.0, 2.0, 4.0]])
    p = fsasc.HomoPoly(2, 2, np.array([0.0, 1.0, 0.0]))  # x1 x2
    assert p(np.array([3.0, 5.0])) == pytest.approx(15.0)
    assert np.allclose(p.gradient(np.array([3.0, 5.0])), [5.0, 3.0])


def test_fit_vanishing_recovers_plane_normal():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(40, 3))
    pts[:, 2] = 0.0
    p = fsasc.fit_vanishing(pts, 1)
    assert np.allclose(np.abs(p.coeffs), [0.0, 0.0, 1.0], atol=1e-10)


def test_sample_cloud_shapes():
    x, labels, bases = fsasc.sample_cloud(5, [1, 2], points_per_subspace=20, seed=3)
    assert x.shape == (40, 5)
    assert len(labels) == 40 and set(labels) == {0, 1}
    assert [b.shape for b in bases] == [(5, 1), (5, 2)]
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0)


@pytest.mark.parametrize("method", ["fsasc", "fasc", "sasc_d"])
def test_cluster_noiseless(method):
    x, labels, _ = fsasc.sample_cloud(5, [2, 3], points_per_subspace=60, seed=11)
    out = fsasc.cluster(x, method=method, subspaces=2, seed=5)
    assert fsasc.clustering_error(out["labels"], labels, 2) == 0.0
    if method == "fsasc":
        assert sorted(set(out["depths"])) == [2, 3]
        w = out["affinity"]
        assert fsasc.intra_connectivity(w, labels) == pytest.approx(100.0, abs=1e-9)


def test_contract_errors_map_to_python():
    with pytest.raises(ValueError):
        fsasc.cluster(np.ones((5, 3)), method="nope")
    with pytest.raises(fsasc.ContractError):
        fsasc.cluster(np.ones((5, 3)), subspaces=0)


def test_run_experiment_report():
    report = fsasc.run_experiment(4, [1, 2], method="sasc_d", trials=3, points_per_subspace=30, seed=9)
    assert len(report["per_trial"]) == 3
    assert math.isfinite(report["mean_error_pct"])
