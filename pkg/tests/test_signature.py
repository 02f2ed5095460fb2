import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_path
from monosig.exceptions import CapabilityError, MonosigError, NotMonotoneError
from monosig.paths import MonotonePath, normalize
from monosig.signature import (
    TruncatedSignature,
    chen_concat,
    identity_signature,
    index_word,
    path_signature,
    quadrature_oracle,
    segment_signature,
    word_index,
)

# values below were produced by quadrature_oracle on the L-shaped path and
# agree with the hand computation of the enclosed areas
L_LEVEL2 = [1 / 8, 1 / 4, 0.0, 1 / 8]


def test_word_index_convention():
    assert word_index((0, 1), 2) == 1
    assert word_index((1, 0), 2) == 2
    assert word_index((2, 0, 1), 3) == 2 * 9 + 1
    for idx in range(27):
        assert word_index(index_word(idx, 3, 3), 3) == idx


def test_segment_signature_examples():
    s = segment_signature([1.0, 0.0], 2)
    np.testing.assert_array_equal(s.levels[2], [0.5, 0, 0, 0])
    s = segment_signature([0.5, 0.5], 2)
    np.testing.assert_array_equal(s.levels[1], [0.5, 0.5])
    np.testing.assert_allclose(s.levels[2], [1 / 8] * 4, atol=1e-15)
    seg = MonotonePath([[0.5, 0.5]])
    for w in itertools.product(range(2), repeat=2):
        assert quadrature_oracle(seg, w) == pytest.approx(1 / 8, abs=1e-15)


def test_segment_signature_rejects_negative():
    with pytest.raises(NotMonotoneError):
        segment_signature([1.0, -1.0], 2)


def test_chen_concat_L_path(L_path):
    s = chen_concat(segment_signature([0.5, 0], 2), segment_signature([0, 0.5], 2))
    np.testing.assert_allclose(s.levels[2], L_LEVEL2, atol=1e-15)
    oracle = [quadrature_oracle(L_path, w) for w in itertools.product(range(2), repeat=2)]
    np.testing.assert_allclose(oracle, L_LEVEL2, atol=1e-12)


def test_chen_identity_element_and_level_one():
    b = segment_signature([0.3, 0.7, 0.1], 4)
    e = identity_signature(3, 4)
    for x, y in zip(chen_concat(e, b).levels, b.levels):
        np.testing.assert_array_equal(x, y)
    a = segment_signature([0.2, 0.0, 0.5], 4)
    np.testing.assert_allclose(chen_concat(a, b).levels[1], a.levels[1] + b.levels[1])


def test_chen_mismatch():
    with pytest.raises(MonosigError):
        chen_concat(segment_signature([1, 0], 2), segment_signature([1, 0], 3))
    with pytest.raises(MonosigError):
        chen_concat(segment_signature([1, 0], 2), segment_signature([1, 0, 0], 2))


def test_path_signature_examples(L_path, straight, t_t2):
    s = path_signature(L_path, 2)
    np.testing.assert_allclose(s.levels[2], L_LEVEL2, atol=1e-15)
    s = path_signature(straight, 6)
    for n in range(7):
        expected = np.zeros(2**n)
        expected[0] = 1 / math.factorial(n)
        np.testing.assert_allclose(s.levels[n], expected, atol=1e-18)
    np.testing.assert_allclose(path_signature(t_t2, 1).levels[1], [0.5, 0.5], atol=1e-12)


def test_path_signature_equals_literal_fold():
    rng = np.random.default_rng(7)
    p = random_path(rng, 3, 5)
    sig = path_signature(p, 5)
    fold = identity_signature(3, 5)
    for seg in p.segments:
        fold = chen_concat(fold, segment_signature(seg, 5))
    for x, y in zip(sig.levels, fold.levels):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-16)


def test_depth_cap():
    with pytest.raises(CapabilityError):
        path_signature(MonotonePath([[1.0, 0.0]]), 21)
    s = path_signature(MonotonePath([[1.0]]), 22, allow_deep=True)
    assert s.depth == 22


def test_oracle_examples(L_path, straight):
    assert quadrature_oracle(L_path, (0, 1)) == pytest.approx(0.25, abs=1e-15)
    assert quadrature_oracle(L_path, ()) == 1.0
    assert quadrature_oracle(normalize(straight), (1,)) == 0.0
    with pytest.raises(MonosigError, match="oracle depth exceeded"):
        quadrature_oracle(L_path, (0,) * 7)


def test_signature_json_roundtrip(L_path):
    s = path_signature(L_path, 3)
    t = TruncatedSignature.from_dict(s.to_dict())
    for x, y in zip(s.levels, t.levels):
        np.testing.assert_array_equal(x, y)
    assert t[(0, 1)] == 0.25


@given(st.integers(0, 2**32 - 1), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_level_sums_match_length_power(seed, dim):
    p = random_path(np.random.default_rng(seed), dim, 8)
    N = 8 if dim == 2 else 6
    sums = path_signature(p, N).level_sums()
    for n, total in enumerate(sums):
        expected = p.length**n / math.factorial(n)
        assert abs(total - expected) <= 1e-10 * expected


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_chen_associativity(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (path_signature(random_path(rng, 2, 3), 5) for _ in range(3))
    left = chen_concat(chen_concat(a, b), c)
    right = chen_concat(a, chen_concat(b, c))
    for x, y in zip(left.levels, right.levels):
        np.testing.assert_allclose(x, y, rtol=0, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_subdivision_invariance(seed):
    p = random_path(np.random.default_rng(seed), 2, 5)
    for x, y in zip(path_signature(p, 6).levels, path_signature(p.subdivided(2), 6).levels):
        np.testing.assert_allclose(x, y, rtol=0, atol=1e-12)


def test_oracle_agrees_on_random_paths():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = random_path(rng, 2, 3)
        sig = path_signature(p, 4)
        for n in range(5):
            for w in itertools.product(range(2), repeat=n):
                assert abs(sig[w] - quadrature_oracle(p, w)) <= 1e-8
