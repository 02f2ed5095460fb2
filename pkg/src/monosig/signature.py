"""Exact truncated signatures of piecewise-linear paths.

Level ``n`` of a :class:`TruncatedSignature` is a dense vector of length
``dim**n``. The word ``(i_1, ..., i_n)`` (letters 0-based) sits at index
``sum_j i_j * dim**(n - j)``, i.e. the first letter is the most significant
digit. This matches ``np.kron`` ordering, so Chen's identity is a sum of
Kronecker products.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import CapabilityError, MonosigError, NotMonotoneError
from .paths import MonotonePath

__all__ = [
    "MAX_DEPTH",
    "TruncatedSignature",
    "word_index",
    "index_word",
    "segment_signature",
    "chen_concat",
    "path_signature",
    "quadrature_oracle",
    "identity_signature",
]

MAX_DEPTH = 20
MAX_ORACLE_LENGTH = 6


def word_index(word: Sequence[int], dim: int) -> int:
    idx = 0
    for letter in word:
        if not 0 <= letter < dim:
            raise MonosigError(f"letter {letter} outside alphabet of size {dim}")
        idx = idx * dim + int(letter)
    return idx


def index_word(index: int, length: int, dim: int) -> tuple[int, ...]:
    letters = []
    for _ in range(length):
        index, r = divmod(index, dim)
        letters.append(r)
    return tuple(reversed(letters))


def _check_depth(depth: int, allow_deep: bool):
    if depth < 0:
        raise MonosigError("depth must be non-negative")
    if depth > MAX_DEPTH and not allow_deep:
        raise CapabilityError(
            f"depth {depth} exceeds the default cap {MAX_DEPTH}; pass allow_deep=True"
        )


@dataclass(frozen=True, eq=False)
class TruncatedSignature:
    dim: int
    depth: int
    levels: tuple

    def __post_init__(self):
        levels = []
        for n, lv in enumerate(self.levels):
            a = np.array(lv, dtype=float).ravel()
            if a.size != self.dim**n:
                raise MonosigError(
                    f"level {n} has {a.size} entries, expected {self.dim ** n}"
                )
            a.setflags(write=False)
            levels.append(a)
        if len(levels) != self.depth + 1:
            raise MonosigError("number of levels must be depth + 1")
        if levels[0][0] != 1.0:
            raise MonosigError("level 0 must be [1]")
        object.__setattr__(self, "levels", tuple(levels))

    def __getitem__(self, word) -> float:
        """Coefficient of a word given as a sequence of 0-based letters."""
        word = tuple(word)
        if len(word) > self.depth:
            raise MonosigError("word longer than signature depth")
        return float(self.levels[len(word)][word_index(word, self.dim)])

    def level_sums(self) -> list[float]:
        return [math.fsum(lv) for lv in self.levels]

    def truncate(self, depth: int) -> "TruncatedSignature":
        if depth > self.depth:
            raise CapabilityError("cannot truncate to a larger depth")
        return TruncatedSignature(self.dim, depth, self.levels[: depth + 1])

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "depth": self.depth,
            "levels": [lv.tolist() for lv in self.levels],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TruncatedSignature":
        return cls(int(data["dim"]), int(data["depth"]), tuple(data["levels"]))

    @classmethod
    def load(cls, filename) -> "TruncatedSignature":
        with open(filename) as fh:
            return cls.from_dict(json.load(fh))

    def __repr__(self):
        return f"TruncatedSignature(dim={self.dim}, depth={self.depth})"


def identity_signature(dim: int, depth: int) -> TruncatedSignature:
    """Signature of the constant path: 1 at level 0 and zero elsewhere."""
    return TruncatedSignature(
        dim, depth, tuple([np.ones(1)] + [np.zeros(dim**n) for n in range(1, depth + 1)])
    )


def segment_signature(increment, depth: int, allow_deep: bool = False) -> TruncatedSignature:
    """Signature of a straight segment: level n is increment^{(x)n} / n!."""
    delta = np.asarray(increment, dtype=float).ravel()
    if np.any(delta < 0):
        raise NotMonotoneError("segment increment has a negative component")
    _check_depth(depth, allow_deep)
    levels = [np.ones(1)]
    for n in range(1, depth + 1):
        levels.append(np.outer(levels[-1], delta).ravel() / n)
    return TruncatedSignature(delta.size, depth, tuple(levels))


def chen_concat(a: TruncatedSignature, b: TruncatedSignature) -> TruncatedSignature:
    """Signature of the concatenation: level n is sum_p a[p] (x) b[n - p]."""
    if a.dim != b.dim or a.depth != b.depth:
        raise MonosigError(
            f"cannot concatenate signatures of shape ({a.dim}, {a.depth}) and ({b.dim}, {b.depth})"
        )
    levels = []
    for n in range(a.depth + 1):
        acc = np.zeros(a.dim**n)
        for p in range(n + 1):
            acc += np.outer(a.levels[p], b.levels[n - p]).ravel()
        levels.append(acc)
    return TruncatedSignature(a.dim, a.depth, tuple(levels))


def _extend_by_segment(levels: list, delta: np.ndarray, depth: int) -> list:
    # chen_concat(levels, segment_signature(delta)) evaluated by Horner's scheme
    out = [levels[0]]
    for n in range(1, depth + 1):
        acc = levels[0]
        for p in range(1, n + 1):
            acc = np.outer(acc, delta).ravel() / (n - p + 1) + levels[p]
        out.append(acc)
    return out


def path_signature(
    path: MonotonePath, depth: int, allow_deep: bool = False
) -> TruncatedSignature:
    """Truncated signature of a piecewise-linear path.

    Segments are folded in left to right, so results are bit-reproducible.
    """
    _check_depth(depth, allow_deep)
    d = path.dim
    levels = [np.ones(1)] + [np.zeros(d**n) for n in range(1, depth + 1)]
    for delta in path.segments:
        if np.any(delta > 0):
            levels = _extend_by_segment(levels, delta, depth)
    return TruncatedSignature(d, depth, tuple(levels))


def quadrature_oracle(path: MonotonePath, word: Sequence[int]) -> float:
    """Iterated integral of ``word`` by nested Gauss-Legendre quadrature.

    Each segment is run over a unit time interval, where the derivative is
    constant. The inner integrals are polynomials of degree < len(word) on
    each segment, so a rule with len(word) nodes per segment is exact.
    Cost grows like (n_segments * len(word)) ** len(word).
    """
    word = tuple(int(i) for i in word)
    if len(word) > MAX_ORACLE_LENGTH:
        raise MonosigError("oracle depth exceeded")
    if not word:
        return 1.0
    seg = np.asarray(path.segments, dtype=float)
    if max(word) >= seg.shape[1] or min(word) < 0:
        raise MonosigError("word letter outside path dimension")
    nodes, weights = np.polynomial.legendre.leggauss(len(word))
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights

    def inner(m: int, t: float) -> float:
        # integral over 0 < u_1 < ... < u_m < t of prod_j gamma'^{word[j]}(u_j)
        if m == 0:
            return 1.0
        letter = word[m - 1]
        total = 0.0
        full = int(np.floor(t))
        for s in range(min(full + 1, seg.shape[0])):
            hi = min(t, s + 1.0)
            width = hi - s
            if width <= 0 or seg[s, letter] == 0:
                continue
            for x, w in zip(nodes, weights):
                total += w * width * seg[s, letter] * inner(m - 1, s + x * width)
        return total

    return float(inner(len(word), float(seg.shape[0])))
