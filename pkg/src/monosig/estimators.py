"""scikit-learn compatible wrappers.

``SignatureTransformer`` maps paths to flattened truncated signatures and
``SignatureInverter`` recovers a monotone path from its signature, so both
can sit inside pipelines and be cloned or grid-searched like any other
estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from . import _validation
from .invert import mle_reconstruct, sample_words
from .paths import MonotonePath, normalize as normalize_path
from .signature import TruncatedSignature, path_signature
from .words import word_weights

__all__ = ["SignatureTransformer", "SignatureInverter"]


class SignatureTransformer(TransformerMixin, BaseEstimator):
    """Truncated signature features of monotone piecewise-linear paths.

    Parameters
    ----------
    depth : int, default=4
        Truncation depth N.
    normalize : bool, default=True
        Rescale every path to unit l1 length first.
    """

    def __init__(self, depth=4, normalize=True):
        self.depth = depth
        self.normalize = normalize

    def fit(self, X, y=None):
        paths = _validation.check_paths(X)
        self.dim_ = paths[0].dim
        self.n_features_out_ = sum(self.dim_**n for n in range(1, self.depth + 1))
        return self

    def transform(self, X):
        """Return an array of shape (n_paths, sum_{n=1..depth} dim**n)."""
        check_is_fitted(self, "dim_")
        paths = _validation.check_paths(X)
        if paths[0].dim != self.dim_:
            raise ValueError(f"fitted on dim={self.dim_}, got dim={paths[0].dim}")
        rows = []
        for p in paths:
            sig = path_signature(normalize_path(p) if self.normalize else p, self.depth)
            rows.append(np.concatenate(sig.levels[1:]) if self.depth else np.empty(0))
        return np.vstack(rows)

    def signatures(self, X) -> list[TruncatedSignature]:
        paths = _validation.check_paths(X)
        return [
            path_signature(normalize_path(p) if self.normalize else p, self.depth) for p in paths
        ]


class SignatureInverter(BaseEstimator):
    """Maximum-weight block polygon fitted to the signature of a monotone path.

    ``fit`` accepts a :class:`TruncatedSignature` of a unit-length path, or
    a path (``MonotonePath`` or increment array) whose signature is then
    computed after normalisation.

    Attributes
    ----------
    prob_matrix_ : ProbMatrix
    argmax_ : list of count tuples, one per block
    ties_ : list of bool
    estimator_path_ : CandidatePath
    """

    def __init__(self, k=2, n=4, partition=None, joint=False, random_state=None):
        self.k = k
        self.n = n
        self.partition = partition
        self.joint = joint
        self.random_state = random_state

    def _partition(self):
        if self.partition is not None:
            return _validation.check_partition(partition=self.partition)
        return _validation.check_partition(self.k, self.n)

    def fit(self, X, y=None):
        partition = self._partition()
        N = sum(partition)
        if isinstance(X, (TruncatedSignature, dict)):
            sig = _validation.check_signature(X, N)
        else:
            path = X if isinstance(X, MonotonePath) else _validation.check_path(X)
            sig = path_signature(normalize_path(path), N)
        rec = mle_reconstruct(sig, partition, joint=self.joint)
        self.partition_ = partition
        self.signature_ = sig
        self.reconstruction_ = rec
        self.prob_matrix_ = rec.prob_matrix
        self.argmax_ = rec.argmax
        self.ties_ = rec.ties
        self.estimator_path_ = rec.estimator
        return self

    def predict(self, q):
        """Estimated path evaluated at times ``q`` in [0, 1]."""
        check_is_fitted(self, "estimator_path_")
        return self.estimator_path_(np.asarray(q, dtype=float))

    def sample(self, n_samples=1):
        """Draw words of length N with probabilities N! C(w).

        Returns an int array of shape (n_samples, N) of 0-based letters.
        """
        check_is_fitted(self, "signature_")
        N = sum(self.partition_)
        dist = word_weights(self.signature_, N)
        seed = check_random_state(self.random_state).randint(np.iinfo(np.int32).max)
        idx = sample_words(dist, n_samples, seed)
        powers = dist.dim ** np.arange(N - 1, -1, -1)
        return (idx[:, None] // powers) % dist.dim
