"""Monotone piecewise-linear paths.

Paths are stored as lists of segment increments. Smooth paths enter the
library only through :func:`discretize`, which replaces them by the chord
polygon on a uniform time mesh.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .exceptions import DegeneratePathError, MonosigError, NotMonotoneError

__all__ = [
    "MonotonePath",
    "CandidatePath",
    "normalize",
    "discretize",
    "evaluate",
    "poly_components",
    "path_from_poly_spec",
    "load_path",
]

_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MonotonePath:
    """Piecewise-linear path with componentwise non-negative increments.

    Parameters
    ----------
    segments : array-like of shape (n_segments, dim)
        Increment of the path over each linear piece.
    """

    segments: np.ndarray

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=float)
        if seg.ndim != 2 or seg.shape[0] == 0 or seg.shape[1] == 0:
            raise MonosigError(
                f"segments must be a non-empty 2-D array, got shape {seg.shape}"
            )
        if not np.all(np.isfinite(seg)):
            raise MonosigError("segments contain non-finite values")
        if np.any(seg < 0):
            raise NotMonotoneError("negative increment: path is not monotone")
        if not np.any(seg > 0):
            raise DegeneratePathError("degenerate path: zero length")
        object.__setattr__(self, "segments", _readonly(seg))

    @property
    def dim(self) -> int:
        return self.segments.shape[1]

    @property
    def n_segments(self) -> int:
        return self.segments.shape[0]

    @property
    def length(self) -> float:
        """l1 length, i.e. the sum of all increments."""
        return float(np.sum(self.segments))

    @property
    def increment(self) -> np.ndarray:
        return self.segments.sum(axis=0)

    def scaled(self, c: float) -> "MonotonePath":
        if not c > 0:
            raise MonosigError("scale factor must be positive")
        return MonotonePath(self.segments * c)

    def subdivided(self, parts: int = 2) -> "MonotonePath":
        """Split every segment into ``parts`` equal pieces."""
        return MonotonePath(np.repeat(self.segments / parts, parts, axis=0))

    def to_candidate(self) -> "CandidatePath":
        """The same path at natural (l1 arc-length) parametrisation on [0, 1]."""
        seg = self.segments[self.segments.sum(axis=1) > 0]
        lengths = seg.sum(axis=1)
        breaks = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
        breaks[-1] = 1.0
        points = np.vstack([np.zeros(self.dim), np.cumsum(seg, axis=0)])
        return CandidatePath(breaks, points)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "segments": self.segments.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MonotonePath":
        segments = np.asarray(data["segments"], dtype=float)
        if "dim" in data and segments.ndim == 2 and segments.shape[1] != int(data["dim"]):
            raise MonosigError("'dim' does not match segment width")
        return cls(segments)

    def __repr__(self):
        return f"MonotonePath(dim={self.dim}, n_segments={self.n_segments}, length={self.length:.6g})"


@dataclass(frozen=True, eq=False)
class CandidatePath:
    """Continuous piecewise-linear path on an explicit time grid in [0, 1].

    ``points[m]`` is the value at ``breakpoints[m]``; the path starts at 0.
    Candidates need not be monotone, the rate functions decide feasibility.
    """

    breakpoints: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.breakpoints, dtype=float)
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if q.ndim != 1 or q.size < 2 or pts.shape[0] != q.size:
            raise MonosigError("breakpoints and points must have matching lengths >= 2")
        if abs(q[0]) > _TOL or abs(q[-1] - 1.0) > _TOL or np.any(np.diff(q) <= 0):
            raise MonosigError("breakpoints must increase strictly from 0 to 1")
        if np.any(np.abs(pts[0]) > _TOL):
            raise MonosigError("candidate paths start at the origin")
        object.__setattr__(self, "breakpoints", _readonly(q))
        object.__setattr__(self, "points", _readonly(pts))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    @property
    def slopes(self) -> np.ndarray:
        return self.increments / self.durations[:, None]

    def is_monotone(self, tol: float = _TOL) -> bool:
        return bool(np.all(self.increments >= -tol))

    def is_unit_speed(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.slopes.sum(axis=1) - 1.0) <= tol))

    def __call__(self, q):
        return evaluate(self, q)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "breakpoints": self.breakpoints.tolist(),
            "points": self.points.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CandidatePath":
        if "segments" in data:
            return MonotonePath.from_dict(data).to_candidate()
        return cls(data["breakpoints"], data["points"])

    @classmethod
    def from_increments(cls, increments, breakpoints=None) -> "CandidatePath":
        """Build from per-piece increments, on an equal grid unless given."""
        inc = np.atleast_2d(np.asarray(increments, dtype=float))
        if breakpoints is None:
            breakpoints = np.linspace(0.0, 1.0, inc.shape[0] + 1)
        points = np.vstack([np.zeros(inc.shape[1]), np.cumsum(inc, axis=0)])
        return cls(breakpoints, points)


def normalize(path: MonotonePath) -> MonotonePath:
    """Rescale ``path`` to unit l1 length, dropping zero-increment segments."""
    seg = np.asarray(path.segments, dtype=float)
    total = np.sum(seg)
    if not total > 0:
        raise DegeneratePathError("degenerate path")
    seg = seg[seg.sum(axis=1) > 0] / total
    return MonotonePath(seg)


def discretize(
    component_functions: Union[Callable, Sequence[Callable]], mesh: float
) -> MonotonePath:
    """Chord polygon of a smooth path sampled on the grid ``0, mesh, ..., 1``.

    ``component_functions`` is either one callable returning the point at
    time ``t`` or a sequence of scalar callables, one per coordinate.
    """
    if not mesh > 0:
        raise MonosigError("mesh must be positive")
    n_steps = int(round(1.0 / mesh))
    if n_steps < 1 or abs(n_steps * mesh - 1.0) > _TOL:
        raise MonosigError(f"mesh {mesh} does not divide [0, 1]")
    t = np.arange(n_steps + 1) / n_steps
    if callable(component_functions):
        pts = np.array([np.atleast_1d(component_functions(ti)) for ti in t], dtype=float)
    else:
        pts = np.column_stack(
            [np.array([f(ti) for ti in t], dtype=float) for f in component_functions]
        )
    inc = np.diff(pts, axis=0)
    if np.any(inc < 0):
        raise NotMonotoneError("not monotone on mesh")
    return MonotonePath(inc)


def evaluate(path: CandidatePath, q):
    """Linear interpolation of a candidate path at time(s) ``q`` in [0, 1]."""
    qa = np.asarray(q, dtype=float)
    if np.any(qa < 0) or np.any(qa > 1):
        raise MonosigError("evaluation time outside [0, 1]")
    out = np.column_stack(
        [np.interp(qa.ravel(), path.breakpoints, path.points[:, i]) for i in range(path.dim)]
    )
    if qa.ndim == 0:
        return out[0]
    return out.reshape(qa.shape + (path.dim,))


def poly_components(coeffs) -> list[Callable[[float], float]]:
    """Coordinate functions t -> sum_r coeffs[i][r] * t**r."""
    return [np.polynomial.Polynomial(np.asarray(c, dtype=float)) for c in coeffs]


def path_from_poly_spec(spec: dict, mesh: float) -> MonotonePath:
    if spec.get("kind") != "poly":
        raise MonosigError(f"unsupported smooth path kind {spec.get('kind')!r}")
    return discretize(poly_components(spec["coeffs"]), mesh)


def load_path(filename) -> MonotonePath:
    with open(filename) as fh:
        return MonotonePath.from_dict(json.load(fh))
