import itertools

import numpy as np
import pytest

import airgate


def brute_dtw(a, b):
    """Minimum over all monotone paths of (cost, length), cost averaged over the path."""
    best = None
    def walk(i, j, acc, n):
        nonlocal best
        acc += abs(a[i] - b[j])
        n += 1
        if i == len(a) - 1 and j == len(b) - 1:
            if best is None or (acc, n) < best:
                best = (acc, n)
            return
        if i + 1 < len(a) and j + 1 < len(b):
            walk(i + 1, j + 1, acc, n)
        if i + 1 < len(a):
            walk(i + 1, j, acc, n)
        if j + 1 < len(b):
            walk(i, j + 1, acc, n)
    walk(0, 0, 0.0, 0)
    return best[0] / best[1]


@pytest.fixture(scope="module")
def corpus():
    return airgate.generate_corpus(seed=3, n_users=4, samples_per_user_per_batch=5, gestures=["circle", "abc"])


def test_layout():
    names = airgate.feature_names()
    assert len(names) == 100 and len(set(names)) == 100
    assert "sig" in airgate.gestures()


def test_dtw_matches_path_search():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = rng.normal(size=rng.integers(1, 5)), rng.normal(size=rng.integers(1, 5))
        assert airgate.dtw_distance_1d(a, b) == pytest.approx(brute_dtw(a, b), abs=1e-12)
        assert airgate.dtw_distance(a, b) == pytest.approx(brute_dtw(a, b), abs=1e-12)
    x = rng.normal(size=(7, 3))
    assert airgate.dtw_distance(x, x) == 0.0
    with pytest.raises(ValueError):
        airgate.dtw_distance(x, rng.normal(size=(7, 2)))


def test_eer():
    eer, theta = airgate.compute_eer([3.0, 4.0], [1.0, 2.0])
    assert eer == 0.0
    assert 2.0 < theta <= 3.0


def test_corners_of_a_square():
    side = np.linspace(0, 1, 50, endpoint=False)
    square = np.concatenate([
        np.c_[0.5 + 0.5 * side, np.zeros(50)],
        np.c_[np.ones(50), side],
        np.c_[1 - side, np.ones(50)],
        np.c_[np.zeros(50), 1 - side],
        np.c_[0.5 * side, np.zeros(50)],
    ])
    assert len(airgate.detect_corners(square)) == 4


def test_corpus_and_features(corpus, tmp_path):
    assert len(corpus) == 4 * 2 * 5
    s = corpus[0]
    assert s.sample_id == "u01-circle-b01-s001" and s.gesture == "circle"
    f = s.features()
    assert f.shape == (s.frame_count, 100) and np.isfinite(f).all()
    path = tmp_path / "c.jsonl"
    airgate.write_samples(path, corpus)
    back = airgate.read_samples(path)
    assert airgate.content_hash(back) == airgate.content_hash(corpus)
    again = airgate.generate_corpus(seed=3, n_users=4, samples_per_user_per_batch=5, gestures=["circle", "abc"])
    assert airgate.content_hash(again) == airgate.content_hash(corpus)
    with pytest.raises(airgate.UsageError):
        airgate.generate_corpus(n_users=0)


def test_train_verify_save_load(corpus, tmp_path):
    circles = [s for s in corpus if s.gesture == "circle"]
    system = airgate.AuthSystem.train(circles, T=3)
    assert system.users == ["u01", "u02", "u03", "u04"]
    for s in circles:
        score, accepted = system.verify(s, s.user_id)
        assert accepted
        for other in system.users:
            if other != s.user_id:
                assert system.verify(s, other)[0] < score
    with pytest.raises(airgate.UsageError):
        system.verify(circles[0], "nobody")

    corpus_path, model_path = tmp_path / "c.jsonl", tmp_path / "m.json"
    airgate.write_samples(corpus_path, circles)
    system.save(model_path)
    loaded = airgate.AuthSystem.load(model_path, corpus_path)
    assert loaded.template_hash == system.template_hash
    assert loaded.verify(circles[-1], "u04") == system.verify(circles[-1], "u04")
    with pytest.raises(airgate.DataError):
        airgate.AuthSystem.load(model_path, tmp_path / "missing.jsonl")


def test_kfold(corpus):
    r = airgate.kfold_eer(corpus, "abc", T=2, folds=2)
    assert len(r["fold_eers"]) == 2
    assert 0.0 <= r["mean_eer"] <= 0.1
    with pytest.raises(airgate.UsageError):
        airgate.kfold_eer(corpus, "tap")
