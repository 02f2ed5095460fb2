"""Reconstructing a monotone path from its signature.

Two routes are provided: the maximum-weight block polygon built from the
per-block probability matrix, and direct sampling of lattice paths with
probabilities ``N! * C(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .exceptions import CapabilityError, MonosigError
from .paths import CandidatePath, MonotonePath
from .signature import TruncatedSignature, index_word
from .words import (
    ProbMatrix,
    WordDistribution,
    piece_marginals,
    symmetrized_weights,
    word_weights,
)

__all__ = [
    "RNG_ALGORITHM",
    "Reconstruction",
    "uniform_partition",
    "mle_reconstruct",
    "sample_word",
    "sample_words",
    "word_to_lattice",
    "block_polygon",
    "equivalence_bound_check",
    "empirical_prob_matrix",
    "render_svg",
]

RNG_ALGORITHM = "numpy.PCG64/inverse-cdf"


def uniform_partition(k: int, n: int) -> tuple[int, ...]:
    if k < 1 or n < 0:
        raise MonosigError("need k >= 1 and n >= 0")
    return (n,) * k


@dataclass(frozen=True, eq=False)
class Reconstruction:
    estimator: CandidatePath
    prob_matrix: ProbMatrix
    partition: tuple
    argmax: list
    ties: list
    joint: bool = False

    @property
    def argmax_m(self) -> list:
        """Winning ``e_1`` count of every block."""
        return [counts[0] for counts in self.argmax]

    def to_dict(self) -> dict:
        return {
            "partition": list(self.partition),
            "argmax": self.argmax_m if self.prob_matrix.dim == 2 else [list(c) for c in self.argmax],
            "ties": list(self.ties),
            "mode": "joint" if self.joint else "rowwise",
            "estimator": dict(self.estimator.to_dict(), segments=self.estimator.increments.tolist()),
        }


def _estimator_from_counts(counts: Sequence[Sequence[int]], partition) -> CandidatePath:
    N = sum(partition)
    inc = np.asarray(counts, dtype=float) / N
    keep = np.asarray(partition) > 0
    breaks = np.concatenate([[0.0], np.cumsum(np.asarray(partition)[keep])]) / N
    return CandidatePath.from_increments(inc[keep], breaks)


def mle_reconstruct(
    sig: TruncatedSignature, partition: Sequence[int], joint: bool = False
) -> Reconstruction:
    """Maximum-weight piecewise-linear estimate of the path.

    By default each block's direction is the argmax of its own marginal
    row. With ``joint=True`` the argmax is taken over the joint block-count
    law instead. Ties go to the larger ``e_1`` count and are flagged.
    """
    partition = tuple(int(n) for n in partition)
    N = sum(partition)
    if N > sig.depth:
        raise CapabilityError(f"signature depth {sig.depth} is below N={N}")
    S = symmetrized_weights(word_weights(sig, N), partition)
    P = piece_marginals(S)
    if joint:
        flat = S.table.ravel()
        best = flat.max()
        hits = np.flatnonzero(flat >= best - 1e-12 * max(best, 1.0))
        # classes are sorted ascending, so the last hit is lexicographically largest
        index = np.unravel_index(hits[-1], S.table.shape)
        counts = [tuple(int(x) for x in S.classes[j][c]) for j, c in enumerate(index)]
        ties = [bool(hits.size > 1)] * len(partition)
    else:
        counts, ties = P.argmax()
    return Reconstruction(
        _estimator_from_counts(counts, partition), P, partition, counts, ties, joint
    )


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_words(dist: WordDistribution, size: int, seed=None) -> np.ndarray:
    """Draw ``size`` word indices by inverse CDF over the lexicographic order."""
    cdf = np.cumsum(dist.weights)
    cdf /= cdf[-1]
    u = _rng(seed).random(size)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def sample_word(dist: WordDistribution, seed=None) -> tuple[int, ...]:
    idx = int(sample_words(dist, 1, seed)[0])
    return index_word(idx, dist.depth, dist.dim)


def word_to_lattice(word: Sequence[int], dim: Optional[int] = None) -> CandidatePath:
    """Unit-speed lattice path taking a step of 1/N along each letter."""
    word = [int(i) for i in word]
    if not word:
        raise MonosigError("word must be non-empty")
    dim = max(word) + 1 if dim is None else dim
    N = len(word)
    inc = np.zeros((N, dim))
    inc[np.arange(N), word] = 1.0 / N
    return CandidatePath.from_increments(inc)


def block_polygon(word: Sequence[int], partition: Sequence[int], dim: Optional[int] = None) -> CandidatePath:
    """Chords of the word's lattice path between consecutive block boundaries."""
    lattice = word_to_lattice(word, dim)
    N = len(word)
    bounds = np.concatenate([[0], np.cumsum(partition)])
    bounds = np.unique(bounds)
    return CandidatePath(bounds / N, lattice.points[bounds])


def equivalence_bound_check(word: Sequence[int], partition: Sequence[int], dim: Optional[int] = None) -> dict:
    """Sup distance (pointwise l1) between a lattice path and its block polygon.

    Both curves are linear between multiples of 1/N, so the supremum is
    attained on that grid.
    """
    partition = tuple(int(n) for n in partition)
    if len(word) != sum(partition):
        raise MonosigError("word length must equal the partition total")
    lattice = word_to_lattice(word, dim)
    poly = block_polygon(word, partition, lattice.dim)
    grid = lattice.breakpoints
    distance = float(np.max(np.abs(lattice.points - poly(grid)).sum(axis=1)))
    bound = max(partition) / len(word)
    return {"distance": distance, "bound": bound, "holds": distance <= bound + 1e-12}


def empirical_prob_matrix(indices, dim: int, partition: Sequence[int]) -> ProbMatrix:
    dist = WordDistribution.from_samples(indices, dim, sum(partition))
    return piece_marginals(symmetrized_weights(dist, partition))


_COLOURS = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"]


def render_svg(paths: Mapping[str, object], size: int = 400) -> str:
    """Overlay of 2-D paths in the unit square as an SVG document.

    Values are ``MonotonePath``, ``CandidatePath`` or (n, 2) point arrays.
    """
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 1 1">',
        '<rect x="0" y="0" width="1" height="1" fill="white" stroke="#999999" stroke-width="0.004"/>',
        '<g transform="translate(0,1) scale(1,-1)">',
    ]
    for i, (label, path) in enumerate(paths.items()):
        if isinstance(path, MonotonePath):
            pts = path.to_candidate().points
        elif isinstance(path, CandidatePath):
            pts = path.points
        else:
            pts = np.asarray(path, dtype=float)
        if pts.shape[1] != 2:
            raise MonosigError("SVG output supports two-dimensional paths only")
        coords = " ".join(f"{x:.6g},{y:.6g}" for x, y in pts[:, :2])
        colour = _COLOURS[i % len(_COLOURS)]
        lines.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="0.006" points="{coords}">'
            f"<title>{label}</title></polyline>"
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
