import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import ParameterGrid
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from monosig import SignatureInverter, SignatureTransformer
from monosig.exceptions import CapabilityError, MonosigError
from monosig.invert import mle_reconstruct
from monosig.signature import path_signature


def test_transformer_params_and_clone():
    t = SignatureTransformer(depth=3, normalize=False)
    assert t.get_params() == {"depth": 3, "normalize": False}
    c = clone(t)
    assert c.get_params() == t.get_params() and c is not t
    assert "depth=3" in repr(t)


def test_transformer_features(L_path, diagonal):
    t = SignatureTransformer(depth=2)
    X = t.fit_transform([L_path, diagonal])
    assert X.shape == (2, 2 + 4) and t.n_features_out_ == 6
    # level 1 then level 2 of the L path
    np.testing.assert_allclose(X[0], [0.5, 0.5, 0.125, 0.25, 0.0, 0.125], atol=1e-15)
    np.testing.assert_allclose(X[1, 2:], [0.125] * 4, atol=1e-15)


def test_transformer_normalize_flag(L_path):
    big = L_path.scaled(4.0)
    a = SignatureTransformer(depth=3).fit_transform([big])
    b = SignatureTransformer(depth=3).fit_transform([L_path])
    np.testing.assert_allclose(a, b, atol=1e-14)
    raw = SignatureTransformer(depth=1, normalize=False).fit_transform([big])
    np.testing.assert_allclose(raw, [[2.0, 2.0]])


def test_transformer_checks(L_path):
    with pytest.raises(NotFittedError):
        SignatureTransformer().transform([L_path])
    t = SignatureTransformer(depth=1).fit([L_path])
    with pytest.raises(ValueError):
        t.transform([np.ones((2, 3))])
    with pytest.raises(MonosigError):
        SignatureTransformer().fit([[[1.0, -1.0]]])


def test_transformer_in_pipeline(L_path, diagonal):
    pipe = make_pipeline(SignatureTransformer(depth=2), FunctionTransformer(lambda X: X[:, :2]))
    out = pipe.fit_transform([L_path, diagonal])
    np.testing.assert_allclose(out, [[0.5, 0.5], [0.5, 0.5]])


def test_inverter_matches_functional_api(t_t2, t_t2_sig16):
    inv = SignatureInverter(k=2, n=4).fit(t_t2_sig16)
    rec = mle_reconstruct(t_t2_sig16, (4, 4))
    assert inv.argmax_ == rec.argmax
    assert inv.partition_ == (4, 4)
    np.testing.assert_array_equal(inv.prob_matrix_.matrix, rec.prob_matrix.matrix)
    from_path = SignatureInverter(k=2, n=4).fit(t_t2)
    assert from_path.argmax_ == rec.argmax


def test_inverter_partition_overrides(t_t2_sig16):
    inv = SignatureInverter(partition=[2, 3]).fit(t_t2_sig16)
    assert inv.partition_ == (2, 3)
    assert len(inv.argmax_) == 2 and len(inv.ties_) == 2


def test_inverter_predict(L_path):
    inv = SignatureInverter(k=2, n=2).fit(L_path)
    # the L path is recovered exactly: two e1 steps then two e2 steps
    np.testing.assert_allclose(inv.predict([0.0, 0.5, 1.0]), [[0, 0], [0.5, 0], [0.5, 0.5]])
    with pytest.raises(NotFittedError):
        SignatureInverter().predict([0.5])


def test_inverter_sample(diagonal, straight):
    inv = SignatureInverter(k=2, n=3, random_state=0).fit(diagonal)
    a = inv.sample(50)
    assert a.shape == (50, 6) and set(np.unique(a)) <= {0, 1}
    np.testing.assert_array_equal(a, clone(inv).fit(diagonal).sample(50))
    point = SignatureInverter(k=2, n=2, random_state=1).fit(straight).sample(5)
    np.testing.assert_array_equal(point, np.zeros((5, 4)))


def test_inverter_depth_errors(L_path):
    sig = path_signature(L_path, 3)
    with pytest.raises(CapabilityError):
        SignatureInverter(k=2, n=2).fit(sig)
    with pytest.raises(MonosigError):
        SignatureInverter(k=0, n=2).fit(L_path)
    with pytest.raises(MonosigError):
        SignatureInverter().fit("not a path")


def test_inverter_grid_search_style(t_t2_sig16):
    winners = {}
    for params in ParameterGrid({"k": [2, 3], "n": [2, 3]}):
        est = clone(SignatureInverter()).set_params(**params).fit(t_t2_sig16)
        winners[(params["k"], params["n"])] = est.argmax_
    assert winners[(2, 3)] == [(2, 1), (1, 2)]
    assert set(winners) == {(2, 2), (2, 3), (3, 2), (3, 3)}
