import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monosig.exceptions import CapabilityError
from monosig.invert import (
    block_polygon,
    empirical_prob_matrix,
    equivalence_bound_check,
    mle_reconstruct,
    render_svg,
    sample_word,
    sample_words,
    word_to_lattice,
)
from monosig.paths import MonotonePath
from monosig.signature import path_signature
from monosig.words import piece_marginals, symmetrized_weights, word_weights


@pytest.mark.parametrize("k,n,expected", [(2, 3, [2, 1]), (2, 4, [3, 1])])
def test_mle_argmax_matches_red_entries(t_t2, k, n, expected):
    rec = mle_reconstruct(path_signature(t_t2, k * n), (n,) * k)
    assert rec.argmax_m == expected
    assert not any(rec.ties)


def test_mle_estimator_shape(t_t2):
    rec = mle_reconstruct(path_signature(t_t2, 8), (4, 4))
    est = rec.estimator
    np.testing.assert_allclose(est.breakpoints, [0, 0.5, 1])
    np.testing.assert_allclose(est.points, [[0, 0], [3 / 8, 1 / 8], [4 / 8, 4 / 8]])
    assert est.is_unit_speed()
    total = np.array([sum(c[0] for c in rec.argmax), sum(c[1] for c in rec.argmax)]) / 8
    np.testing.assert_allclose(est.points[-1], total)


def test_mle_straight_path(straight):
    rec = mle_reconstruct(path_signature(straight, 6), (2, 4))
    np.testing.assert_allclose(rec.estimator.points, [[0, 0], [2 / 6, 0], [1, 0]])


def test_mle_joint_mode_and_depth_error(t_t2):
    sig = path_signature(t_t2, 8)
    rec = mle_reconstruct(sig, (4, 4), joint=True)
    assert rec.argmax_m == [3, 1]
    assert rec.to_dict()["mode"] == "joint"
    with pytest.raises(CapabilityError):
        mle_reconstruct(sig, (3, 3, 3))


def test_ties_break_toward_e1(diagonal):
    rec = mle_reconstruct(path_signature(diagonal, 2), (1, 1))
    assert rec.argmax_m == [1, 1]
    assert rec.ties == [True, True]


def test_reconstruction_json(t_t2):
    doc = mle_reconstruct(path_signature(t_t2, 6), (3, 3)).to_dict()
    assert doc["partition"] == [3, 3]
    assert doc["argmax"] == [2, 1]
    assert doc["ties"] == [False, False]
    assert MonotonePath.from_dict(doc["estimator"]).length == pytest.approx(1.0)


def test_sample_point_mass(straight):
    dist = word_weights(path_signature(straight, 5), 5)
    assert set(sample_words(dist, 1000, seed=3).tolist()) == {0}
    assert sample_word(dist, seed=1) == (0,) * 5


def test_sample_support_and_determinism(L_path):
    dist = word_weights(path_signature(L_path, 2), 2)
    a = sample_words(dist, 10**6, seed=42)
    b = sample_words(dist, 10**6, seed=42)
    np.testing.assert_array_equal(a, b)
    freq = np.bincount(a, minlength=4) / a.size
    assert freq[2] == 0.0
    np.testing.assert_allclose(freq, [0.25, 0.5, 0.0, 0.25], atol=0.002)


def test_sampled_words_frozen():
    dist = word_weights(path_signature(MonotonePath([[0.5, 0.5]]), 4), 4)
    # pinned so that a change of RNG stream is noticed
    assert sample_words(dist, 5, seed=2024).tolist() == [10, 3, 4, 12, 15]


def test_word_to_lattice_examples():
    c = word_to_lattice([0, 1])
    np.testing.assert_allclose(c.points, [[0, 0], [0.5, 0], [0.5, 0.5]])
    np.testing.assert_allclose(word_to_lattice([0] * 5, dim=2).points[-1], [1, 0])
    np.testing.assert_allclose(word_to_lattice([1, 0, 0]).points[-1], [2 / 3, 1 / 3])
    assert word_to_lattice([1, 0, 0]).is_unit_speed()


def test_equivalence_examples():
    r = equivalence_bound_check([0, 1], (2,))
    assert r["distance"] == pytest.approx(0.5)
    assert r["bound"] == 1.0 and r["holds"]
    assert equivalence_bound_check([0] * 6, (2, 4), dim=2)["distance"] == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(block_polygon([0, 1], (2,)).points, [[0, 0], [0.5, 0.5]])


@given(st.lists(st.integers(0, 2), min_size=1, max_size=20), st.data())
@settings(max_examples=100, deadline=None)
def test_equivalence_bound_pathwise(word, data):
    N = len(word)
    cuts = sorted(data.draw(st.lists(st.integers(0, N), max_size=4)))
    bounds = [0] + cuts + [N]
    partition = [b - a for a, b in zip(bounds[:-1], bounds[1:])]
    r = equivalence_bound_check(word, partition, dim=3)
    assert r["holds"]


@pytest.mark.slow
def test_sampled_prob_matrix_matches_marginals(t_t2):
    dist = word_weights(path_signature(t_t2, 8), 8)
    idx = sample_words(dist, 10**6, seed=11)
    emp = empirical_prob_matrix(idx, 2, (4, 4)).matrix
    exact = piece_marginals(symmetrized_weights(dist, (4, 4))).matrix
    assert np.max(np.abs(emp - exact)) <= 0.005


def test_render_svg(t_t2):
    rec = mle_reconstruct(path_signature(t_t2, 6), (3, 3))
    svg = render_svg({"truth": t_t2, "estimate": rec.estimator})
    assert svg.startswith("<svg") and 'viewBox="0 0 1 1"' in svg
    assert svg.count("<polyline") == 2
