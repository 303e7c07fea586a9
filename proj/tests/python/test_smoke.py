import os
from pathlib import Path

import numpy as np
import pytest

import robustgc as rgc


def spectrum(graph):
    w = graph.to_dense()
    d = w.sum(axis=1)
    s = w / np.sqrt(np.outer(d, d))
    return np.linalg.eigh(np.eye(len(d)) - s)


def test_lambda1_matches_dense_spectrum():
    graph, _, _ = rgc.sbm([20, 20], np.array([[0.6, 0.1], [0.1, 0.6]]), seed=5)
    ctx = rgc.SpectralContext(graph)
    values, _ = spectrum(graph)
    assert ctx.lambda1 == pytest.approx(values[1], abs=1e-9)
    assert np.allclose(ctx.v0, np.sqrt(graph.degrees / graph.degrees.sum()))


def test_robust_solution_matches_spectral_formula():
    graph, truth = rgc.karate_club()
    labels = np.zeros(len(truth), dtype=int)
    labels[[0, 5]] = 1
    labels[[33, 30]] = -1
    ctx = rgc.SpectralContext(graph)
    gamma = 0.5 * ctx.lambda1
    sol = rgc.solve_robust(ctx, labels, gamma)

    values, vectors = spectrum(graph)
    coeff = vectors.T @ labels
    expected = sum(
        coeff[k] / (values[k] / gamma - 1.0) * vectors[:, k] for k in range(1, len(values))
    )
    assert np.max(np.abs(sol.scores - expected)) < 1e-7
    assert sol.method == "robust"
    assert set(sol.predict()) <= {-1, 1}


def test_pf_robust_recovers_chain_split():
    graph, truth = rgc.chain_graph(10)
    labels = np.zeros(len(truth), dtype=int)
    labels[0] = truth[0]
    labels[-1] = truth[-1]
    ctx = rgc.SpectralContext(graph)
    sol = rgc.solve_pf_robust(ctx, labels)
    assert sol.param == pytest.approx(0.9 * ctx.lambda1)
    assert list(sol.predict()) == list(truth)


def test_baselines_run():
    graph, truth = rgc.karate_club()
    ctx = rgc.SpectralContext(graph)
    labels = rgc.sample_labels(truth, 6, seed=2)
    assert sum(1 for v in labels if v != 0) == 6
    zhou = rgc.solve_zhou(ctx, labels, 1.0)
    belkin = rgc.solve_belkin(ctx, labels, 3)
    assert zhou.scores.shape == belkin.scores.shape == (34,)


def test_gamma_out_of_range_raises():
    graph, truth = rgc.karate_club()
    ctx = rgc.SpectralContext(graph)
    labels = rgc.sample_labels(truth, 4, seed=1)
    with pytest.raises(rgc.Error) as info:
        rgc.solve_robust(ctx, labels, 1.01 * ctx.lambda1)
    assert info.value.code == "GammaOutOfRange"


def test_flip_labels_is_deterministic():
    _, truth = rgc.karate_club()
    labels = rgc.sample_labels(truth, 10, seed=7)
    a = rgc.flip_labels(labels, 0.3, seed=9)
    b = rgc.flip_labels(labels, 0.3, seed=9)
    assert a == b
    assert sum(1 for x, y in zip(labels, a) if x != y) == 3


def test_out_of_sample_model_on_moons():
    points, truth = rgc.moons(30, 0.1, seed=3)
    truth = np.asarray(truth)
    labels = np.zeros(len(truth), dtype=int)
    labels[np.flatnonzero(truth == 1)[::10]] = 1
    labels[np.flatnonzero(truth == -1)[::10]] = -1
    model = rgc.OutOfSampleModel.train(points, 0.15, labels)
    predicted = model.predict(points)
    assert np.mean(np.asarray(predicted) == truth) > 0.9
    assert list(predicted) == list(np.sign(model.scores).astype(int))
    assert model.predict(np.array([[50.0, 50.0]])) == [0]


def test_noise_experiment_from_config():
    source = Path(os.environ.get("RGC_SOURCE_DIR", Path(__file__).resolve().parents[2]))
    out = rgc.run_config("noise", source / "configs" / "determinism.cfg", threads=2)
    again = rgc.run_config("noise", source / "configs" / "determinism.cfg", threads=1)
    assert out["rows"] == again["rows"]
    assert {row["method"] for row in out["aggregate"]} == {"zhou", "belkin", "robust", "pf_robust"}
    assert all(0.0 <= row["accuracy"] <= 1.0 for row in out["rows"])
