"""Probability weights on words and their block symmetrisations.

For a unit-length monotone path the level-N coefficients times N! form a
probability distribution on words of length N. Grouping the letters of a
word into consecutive blocks of sizes ``partition`` and recording how many
of each letter fall into each block gives the symmetrised weights; the
per-block marginals of those are the probability matrices used to invert
the signature.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .exceptions import MonosigError, SignatureNotNormalizedError
from .signature import TruncatedSignature

__all__ = [
    "WordDistribution",
    "SymmetrizedWeights",
    "ProbMatrix",
    "word_weights",
    "letter_count_marginal",
    "symmetrized_weights",
    "symmetrized_weights_bruteforce",
    "piece_marginals",
    "independence_report",
    "block_classes",
]

RENORMALIZE_LIMIT = 1e-6
EXACT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WordDistribution:
    """Probabilities of the ``dim**depth`` words of length ``depth``.

    ``defect`` records how far the raw weights summed away from one before
    renormalisation.
    """

    dim: int
    depth: int
    weights: np.ndarray
    defect: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size != self.dim**self.depth:
            raise MonosigError("weights must have dim**depth entries")
        if np.any(w < 0):
            raise MonosigError("negative word weight")
        if abs(math.fsum(w) - 1.0) > EXACT_TOL:
            raise MonosigError("word weights do not sum to one")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __getitem__(self, word) -> float:
        idx = 0
        for letter in word:
            idx = idx * self.dim + int(letter)
        return float(self.weights[idx])

    @classmethod
    def from_samples(cls, indices, dim: int, depth: int) -> "WordDistribution":
        """Empirical distribution of sampled word indices."""
        indices = np.asarray(indices, dtype=np.int64)
        counts = np.bincount(indices, minlength=dim**depth).astype(float)
        return cls(dim, depth, counts / counts.sum())


def word_weights(sig: TruncatedSignature, N: int) -> WordDistribution:
    """Word probabilities ``N! * C(w)`` from level ``N`` of ``sig``.

    ``sig`` must come from a path of unit l1 length. Weights whose sum is
    off by at most 1e-6 are renormalised and the defect kept.
    """
    if N > sig.depth:
        raise MonosigError(f"signature depth {sig.depth} is below N={N}")
    if N < 0:
        raise MonosigError("N must be non-negative")
    level = np.asarray(sig.levels[N], dtype=float)
    if np.any(level < 0):
        raise MonosigError("negative signature coefficient: path is not monotone")
    fact = float(math.factorial(N))
    total = math.fsum(level) * fact
    defect = total - 1.0
    if not abs(defect) <= RENORMALIZE_LIMIT:
        raise SignatureNotNormalizedError(
            f"signature not normalized: level {N} sums to {total:.12g} / N!"
        )
    weights = level * fact
    if abs(defect) > EXACT_TOL:
        weights = weights / total
    return WordDistribution(sig.dim, N, weights, defect)


def block_classes(n: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Letter-count classes of words of length ``n``.

    Returns ``(classes, labels)``: the count vectors in lexicographic order,
    shape (n_classes, dim), and the class id of every word index. For
    ``dim == 2`` the class id equals the number of ``e_1`` letters.
    """
    idx = np.arange(dim**n)
    counts = np.zeros((idx.size, dim), dtype=np.int64)
    for pos in range(n):
        digit = (idx // dim ** (n - 1 - pos)) % dim
        counts[idx, digit] += 1
    classes, labels = np.unique(counts, axis=0, return_inverse=True)
    return classes, labels.ravel()


def _check_partition(partition: Sequence[int], depth: int) -> tuple[int, ...]:
    partition = tuple(int(n) for n in partition)
    if not partition or any(n < 0 for n in partition):
        raise MonosigError("partition must be a non-empty list of non-negative sizes")
    if sum(partition) != depth:
        raise MonosigError(
            f"partition {partition} sums to {sum(partition)}, expected {depth}"
        )
    return partition


@dataclass(frozen=True, eq=False)
class SymmetrizedWeights:
    """Joint law of per-block letter counts.

    ``table[c_1, ..., c_k]`` is the weight of block-count matrix whose row j
    is ``classes[j][c_j]``.
    """

    dim: int
    partition: tuple
    classes: tuple
    table: np.ndarray

    def __getitem__(self, counts) -> float:
        index = []
        for cls_j, row in zip(self.classes, counts):
            hit = np.flatnonzero(np.all(cls_j == np.asarray(row), axis=1))
            if hit.size == 0:
                return 0.0
            index.append(hit[0])
        return float(self.table[tuple(index)])

    def items(self) -> Iterator[tuple[tuple, float]]:
        for index in itertools.product(*(range(len(c)) for c in self.classes)):
            counts = tuple(tuple(int(x) for x in self.classes[j][c]) for j, c in enumerate(index))
            yield counts, float(self.table[index])

    def as_dict(self) -> dict:
        return dict(self.items())

    def coarsen(self, groups: Sequence[int]) -> "SymmetrizedWeights":
        """Merge consecutive blocks, ``groups[g]`` blocks at a time."""
        groups = tuple(int(g) for g in groups)
        if sum(groups) != len(self.partition) or any(g < 1 for g in groups):
            raise MonosigError("groups must cover the blocks exactly")
        bounds = np.concatenate([[0], np.cumsum(groups)])
        new_partition = tuple(
            sum(self.partition[a:b]) for a, b in zip(bounds[:-1], bounds[1:])
        )
        new_classes = tuple(block_classes(n, self.dim)[0] for n in new_partition)
        lookup = [
            {tuple(int(x) for x in row): i for i, row in enumerate(c)} for c in new_classes
        ]
        table = np.zeros(tuple(len(c) for c in new_classes))
        for counts, weight in self.items():
            if weight == 0.0:
                continue
            arr = np.asarray(counts)
            key = tuple(
                lookup[g][tuple(int(x) for x in arr[a:b].sum(axis=0))]
                for g, (a, b) in enumerate(zip(bounds[:-1], bounds[1:]))
            )
            table[key] += weight
        return SymmetrizedWeights(self.dim, new_partition, new_classes, table)

    def to_dict(self) -> dict:
        return {
            "partition": list(self.partition),
            "entries": [
                {"counts": [list(row) for row in counts], "weight": weight}
                for counts, weight in self.items()
            ],
        }


def symmetrized_weights(dist: WordDistribution, partition: Sequence[int]) -> SymmetrizedWeights:
    """Joint block-count weights by collapsing one block at a time.

    The word weights are viewed as a k-way array indexed by the sub-words
    of each block; each axis is then contracted against the one-hot map
    from sub-word to letter-count class.
    """
    partition = _check_partition(partition, dist.depth)
    d = dist.dim
    classes = []
    table = dist.weights.reshape(tuple(d**n for n in partition))
    for j, n in enumerate(partition):
        cls_j, labels = block_classes(n, d)
        onehot = np.zeros((labels.size, len(cls_j)))
        onehot[np.arange(labels.size), labels] = 1.0
        table = np.moveaxis(np.moveaxis(table, j, -1) @ onehot, -1, j)
        classes.append(cls_j)
    return SymmetrizedWeights(d, partition, tuple(classes), table)


def symmetrized_weights_bruteforce(
    dist: WordDistribution, partition: Sequence[int]
) -> dict:
    """Reference implementation: walk every word and tally its block counts."""
    partition = _check_partition(partition, dist.depth)
    d = dist.dim
    out: dict = {}
    bounds = np.concatenate([[0], np.cumsum(partition)])
    for index, word in enumerate(itertools.product(range(d), repeat=dist.depth)):
        key = tuple(
            tuple(word[a:b].count(i) for i in range(d))
            for a, b in zip(bounds[:-1], bounds[1:])
        )
        out[key] = out.get(key, 0.0) + float(dist.weights[index])
    return out


def letter_count_marginal(dist: WordDistribution) -> dict:
    """Law of the total letter counts of a random word, keyed by count tuple."""
    S = symmetrized_weights(dist, (dist.depth,))
    return {counts[0]: weight for counts, weight in S.items()}


@dataclass(frozen=True, eq=False)
class ProbMatrix:
    """Per-block marginal laws of the letter counts.

    ``rows[j][c]`` is the probability that block j has count vector
    ``classes[j][c]``.
    """

    dim: int
    partition: tuple
    classes: tuple
    rows: tuple

    @property
    def matrix(self) -> np.ndarray:
        """Two-letter layout: entry (j, m) is P(block j has m letters e_1)."""
        if self.dim != 2:
            raise MonosigError("matrix layout is only defined for dim == 2")
        out = np.zeros((len(self.partition), max(self.partition) + 1))
        for j, (cls_j, row) in enumerate(zip(self.classes, self.rows)):
            out[j, cls_j[:, 0]] = row
        return out

    def argmax(self) -> tuple[list, list]:
        """Row-wise most likely count vectors and a tie flag per row.

        Ties go to the lexicographically largest count vector, which for two
        letters is the one with more ``e_1`` steps.
        """
        winners, ties = [], []
        for cls_j, row in zip(self.classes, self.rows):
            best = row.max()
            hits = np.flatnonzero(row >= best - 1e-12 * max(best, 1.0))
            winners.append(tuple(int(x) for x in cls_j[hits[-1]]))
            ties.append(bool(hits.size > 1))
        return winners, ties

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["j", "m", "weight"])
        for j, (cls_j, row) in enumerate(zip(self.classes, self.rows), start=1):
            for counts, weight in zip(cls_j, row):
                m = str(counts[0]) if self.dim == 2 else ":".join(str(c) for c in counts)
                writer.writerow([j, m, f"{weight:.6g}"])
        return buf.getvalue()


def piece_marginals(S: SymmetrizedWeights) -> ProbMatrix:
    k = len(S.partition)
    rows = []
    for j in range(k):
        others = tuple(a for a in range(k) if a != j)
        rows.append(S.table.sum(axis=others) if others else S.table.copy())
    return ProbMatrix(S.dim, S.partition, S.classes, tuple(rows))


def independence_report(S: SymmetrizedWeights) -> dict:
    """Compare the joint block-count law with the product of its marginals."""
    P = piece_marginals(S)
    product = P.rows[0]
    for row in P.rows[1:]:
        product = np.multiply.outer(product, row)
    joint_idx = np.unravel_index(np.argmax(S.table), S.table.shape)
    prod_idx = np.unravel_index(np.argmax(product), product.shape)

    def counts(index):
        return [[int(x) for x in S.classes[j][c]] for j, c in enumerate(index)]

    return {
        "max_abs_difference": float(np.max(np.abs(S.table - product))),
        "joint_argmax": counts(joint_idx),
        "product_argmax": counts(prod_idx),
        "argmax_agrees": bool(tuple(joint_idx) == tuple(prod_idx)),
    }
