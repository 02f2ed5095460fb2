"""Rate functions and the conditioned Poisson model behind the word weights.

A unit-speed monotone reference path drives d Poisson letter streams whose
total is a rate-one process. Conditioned on N arrivals in [0, 1], the word
of arrivals has law ``N! * C(w)``. The rate functions here are evaluated
exactly on piecewise-linear inputs: every integrand is constant between
consecutive points of the common breakpoint refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .exceptions import CapabilityError, MonosigError
from .invert import RNG_ALGORITHM, word_to_lattice
from .paths import CandidatePath, MonotonePath, normalize
from .signature import MAX_DEPTH, path_signature
from .words import WordDistribution, word_weights

__all__ = [
    "RateEval",
    "PoissonWordSample",
    "rate_I",
    "rate_W",
    "rate_WQ",
    "rate_finite_dim",
    "rate_XT",
    "rate_XT_presubstitution",
    "simulate_conditioned_word",
    "simulate_words",
    "tv_distance",
    "empirical_decay",
    "sup_ball_event",
    "simulation_report",
    "MAX_ENUMERATION_DEPTH",
]

MAX_ENUMERATION_DEPTH = 14
FEAS_TOL = 1e-9
_CHUNK = 1 << 17


@dataclass(frozen=True)
class RateEval:
    value: float
    feasible: bool = True
    violation: str = ""

    def __float__(self):
        return float(self.value)

    def __str__(self):
        if math.isinf(self.value) and self.violation:
            return f"+inf ({self.violation})"
        return f"{self.value:.12g}"


def _infeasible(reason: str) -> RateEval:
    return RateEval(math.inf, False, reason)


def rate_I(x: float, y: float) -> float:
    """Relative entropy density x log(x / y), with 0 log(0 / y) = 0."""
    if x < 0 or y < 0:
        raise MonosigError("rate_I is defined for non-negative arguments only")
    if x == 0:
        return 0.0
    if y == 0:
        return math.inf
    return x * (math.log(x) - math.log(y))


def _I(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    x, y = np.broadcast_arrays(x, y)
    pos = x > 0
    out[pos & (y <= 0)] = math.inf
    ok = pos & (y > 0)
    out[ok] = x[ok] * (np.log(x[ok]) - np.log(y[ok]))
    return out


def _reference_candidate(reference) -> CandidatePath:
    if isinstance(reference, CandidatePath):
        ref = reference
    else:
        if abs(reference.length - 1.0) > FEAS_TOL:
            raise MonosigError("reference path must have unit l1 length; call normalize first")
        ref = reference.to_candidate()
    if not (ref.is_monotone() and ref.is_unit_speed()):
        raise MonosigError("reference must be monotone and at unit speed")
    return ref


def _piece_values(path: CandidatePath, values: np.ndarray, at: np.ndarray) -> np.ndarray:
    """Per-piece ``values`` of ``path`` at interior times ``at``."""
    idx = np.searchsorted(path.breakpoints, at, side="right") - 1
    return values[np.clip(idx, 0, len(path.breakpoints) - 2)]


def _clean_slopes(path: CandidatePath) -> np.ndarray:
    s = path.slopes
    return np.where(np.abs(s) <= 1e-13, 0.0, s)


def _check_A(path: CandidatePath, name: str):
    if not path.is_monotone(FEAS_TOL):
        return _infeasible(f"A non-decreasing ({name})")
    return None


def rate_W(candidate: CandidatePath, reference) -> RateEval:
    """Sum over letters of the integral of I(psi', gamma') on [0, 1]."""
    ref = _reference_candidate(reference)
    if candidate.dim != ref.dim:
        raise MonosigError("candidate and reference dimensions differ")
    bad = _check_A(candidate, "psi")
    if bad:
        return bad
    if abs(candidate.points[-1].sum() - 1.0) > FEAS_TOL:
        return _infeasible("A^d_1 endpoint")
    grid = np.union1d(candidate.breakpoints, ref.breakpoints)
    mids = 0.5 * (grid[1:] + grid[:-1])
    dt = np.diff(grid)
    psi_dot = np.maximum(_piece_values(candidate, _clean_slopes(candidate), mids), 0.0)
    gamma_dot = _piece_values(ref, _clean_slopes(ref), mids)
    dens = _I(psi_dot, gamma_dot)
    if np.any(np.isinf(dens)):
        return RateEval(math.inf, True, "candidate moves where the reference is flat")
    return RateEval(math.fsum((dt[:, None] * dens).ravel()))


def rate_WQ(psi: CandidatePath, phi: CandidatePath, reference) -> RateEval:
    """Rate of the pair (W_N, Q_N): that of W plus the constraint sum_i psi^i = phi."""
    if phi.dim != 1:
        raise MonosigError("phi must be scalar")
    bad = _check_A(phi, "phi")
    if bad:
        return bad
    grid = np.union1d(psi.breakpoints, phi.breakpoints)
    if np.max(np.abs(psi(grid).sum(axis=1) - phi(grid)[:, 0])) > FEAS_TOL:
        return _infeasible("sum of psi equals phi")
    return rate_W(psi, reference)


def rate_finite_dim(z, times: Sequence[float], reference) -> float:
    """Finite-dimensional rate of the path values ``z[j] = psi(times[j+1])``.

    ``z`` has shape (k, d); ``times`` is ``0 = u_0 < ... < u_k = 1``.
    """
    ref = _reference_candidate(reference)
    u = np.asarray(times, dtype=float)
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if u.ndim != 1 or u.size != z.shape[0] + 1:
        raise MonosigError("need k + 1 partition times for k rows of z")
    if abs(u[0]) > 1e-12 or abs(u[-1] - 1.0) > 1e-12 or np.any(np.diff(u) <= 0):
        raise MonosigError("partition times must increase strictly from 0 to 1")
    if z.shape[1] != ref.dim:
        raise MonosigError("z has the wrong dimension")
    zz = np.vstack([np.zeros(ref.dim), z])
    dz = np.diff(zz, axis=0)
    if np.any(dz < -FEAS_TOL) or abs(z[-1].sum() - 1.0) > FEAS_TOL:
        return math.inf
    dz = np.maximum(dz, 0.0)
    dgamma = np.maximum(np.diff(ref(u), axis=0), 0.0)
    du = np.diff(u)[:, None]
    return math.fsum((du * _I(dz / du, dgamma / du)).ravel())


def _check_time_change(zeta: CandidatePath, xi: CandidatePath):
    if xi.dim != 1:
        raise MonosigError("time change xi must be scalar")
    bad = _check_A(zeta, "zeta")
    if bad:
        return bad
    if not zeta.is_unit_speed(FEAS_TOL):
        return _infeasible("unit speed")
    if np.any(xi.increments[:, 0] <= 0):
        return _infeasible("xi strictly increasing")
    if xi.points[-1, 0] > 1.0 + FEAS_TOL:
        return _infeasible("xi range within [0, 1]")
    return None


def rate_XT(zeta: CandidatePath, xi: CandidatePath, reference) -> RateEval:
    """Closed-form rate of the unit-speed lattice path and its time change.

    Sum over letters of the integral over q of
    zeta'(q) log(zeta'(q) / (gamma'(xi(q)) xi'(q))).
    """
    ref = _reference_candidate(reference)
    bad = _check_time_change(zeta, xi)
    if bad:
        return bad
    xi_q, xi_t = xi.breakpoints, xi.points[:, 0]
    t_end = xi_t[-1]
    inner = ref.breakpoints[(ref.breakpoints > 0) & (ref.breakpoints < t_end)]
    grid = np.unique(np.concatenate([zeta.breakpoints, xi_q, np.interp(inner, xi_t, xi_q)]))
    mids = 0.5 * (grid[1:] + grid[:-1])
    dq = np.diff(grid)
    zeta_dot = np.maximum(_piece_values(zeta, _clean_slopes(zeta), mids), 0.0)
    xi_dot = _piece_values(xi, xi.slopes[:, 0], mids)
    gamma_dot = _piece_values(ref, _clean_slopes(ref), np.interp(mids, xi_q, xi_t))
    dens = _I(zeta_dot, gamma_dot * xi_dot[:, None])
    if np.any(np.isinf(dens)):
        return RateEval(math.inf, True, "candidate moves where the reference is flat")
    return RateEval(math.fsum((dq[:, None] * dens).ravel()))


def rate_XT_presubstitution(zeta: CandidatePath, xi: CandidatePath, reference) -> RateEval:
    """The same rate evaluated in real time as the (W, Q) rate of
    ``(zeta o xi^-1, xi^-1)``, both held constant after ``xi(1)``."""
    ref = _reference_candidate(reference)
    bad = _check_time_change(zeta, xi)
    if bad:
        return bad
    xi_q, xi_t = xi.breakpoints, xi.points[:, 0]
    t_end = xi_t[-1]
    t = np.concatenate([np.interp(zeta.breakpoints, xi_q, xi_t), xi_t, [1.0]])
    t = np.unique(np.clip(t, 0.0, 1.0))
    t = t[np.concatenate([[True], np.diff(t) > 1e-14])]
    t[-1] = 1.0
    q = np.interp(np.minimum(t, t_end), xi_t, xi_q)
    psi = CandidatePath(t, zeta(q))
    phi = CandidatePath(t, q)
    return rate_WQ(psi, phi, ref)


@dataclass(frozen=True, eq=False)
class PoissonWordSample:
    """One conditioned Poisson draw and its time changes.

    ``T_N`` maps index fraction j/N to the j-th arrival time (linear in
    between); ``Q_N`` is its inverse on [0, tau_N]. ``W_N`` is the scaled
    letter-count path, linear between arrivals, so ``X_N = W_N o T_N``.
    """

    word: tuple
    arrival_times: np.ndarray
    dim: int

    @property
    def N(self) -> int:
        return len(self.word)

    @property
    def index_grid(self) -> np.ndarray:
        return np.arange(self.N + 1) / self.N

    @property
    def time_grid(self) -> np.ndarray:
        return np.concatenate([[0.0], self.arrival_times])

    def T(self, q):
        return np.interp(q, self.index_grid, self.time_grid)

    def Q(self, t):
        return np.interp(t, self.time_grid, self.index_grid)

    def W(self, t):
        pts = word_to_lattice(self.word, self.dim).points
        return np.column_stack([np.interp(t, self.time_grid, pts[:, i]) for i in range(self.dim)])

    def X(self) -> CandidatePath:
        return word_to_lattice(self.word, self.dim)


def _letters(ref: CandidatePath, tau: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Letter i at time tau with probability gamma'^i(tau), driven by uniforms u."""
    probs = _piece_values(ref, np.maximum(_clean_slopes(ref), 0.0), tau)
    cum = np.cumsum(probs, axis=-1)
    cum /= cum[..., -1:]
    return np.argmax(u[..., None] < cum, axis=-1)


def simulate_conditioned_word(reference, N: int, seed=None) -> PoissonWordSample:
    ref = _reference_candidate(reference)
    rng = np.random.Generator(np.random.PCG64(seed))
    tau = np.sort(rng.random(N))
    letters = _letters(ref, tau, rng.random(N))
    return PoissonWordSample(tuple(int(i) for i in letters), tau, ref.dim)


def simulate_words(reference, N: int, trials: int, seed=None) -> np.ndarray:
    """Word indices of ``trials`` independent conditioned Poisson draws.

    Arrival times are N sorted uniforms (exact conditioning on N arrivals).
    Each chunk of trials gets its own spawned seed, so the output does not
    depend on how chunks are scheduled.
    """
    ref = _reference_candidate(reference)
    d = ref.dim
    out = np.empty(trials, dtype=np.int64)
    n_chunks = -(-trials // _CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(max(n_chunks, 1))
    powers = d ** np.arange(N - 1, -1, -1, dtype=np.int64)
    for c in range(n_chunks):
        lo, hi = c * _CHUNK, min(trials, (c + 1) * _CHUNK)
        rng = np.random.Generator(np.random.PCG64(seeds[c]))
        tau = np.sort(rng.random((hi - lo, N)), axis=1)
        letters = _letters(ref, tau, rng.random((hi - lo, N)))
        out[lo:hi] = letters @ powers
    return out


def tv_distance(p, q) -> float:
    p = np.asarray(getattr(p, "weights", p), dtype=float)
    q = np.asarray(getattr(q, "weights", q), dtype=float)
    return 0.5 * math.fsum(np.abs(p - q))


def _all_letters(N: int, d: int) -> np.ndarray:
    idx = np.arange(d**N)
    return np.stack([(idx // d ** (N - 1 - j)) % d for j in range(N)], axis=1)


def sup_ball_event(center: CandidatePath, radius: float) -> Callable[[np.ndarray], np.ndarray]:
    """Words whose unit-speed lattice path is within ``radius`` of ``center``
    in sup norm (pointwise l1)."""

    def event(letters: np.ndarray) -> np.ndarray:
        n_words, N = letters.shape
        grid = np.union1d(np.arange(N + 1) / N, center.breakpoints)
        steps = np.zeros((n_words, N + 1, center.dim))
        steps[np.arange(n_words)[:, None], np.arange(1, N + 1)[None, :], letters] = 1.0 / N
        lattice = np.cumsum(steps, axis=1)
        pos = np.minimum(np.floor(grid * N).astype(int), N - 1)
        frac = grid * N - pos
        X = lattice[:, pos, :] + frac[None, :, None] * (lattice[:, pos + 1, :] - lattice[:, pos, :])
        dist = np.abs(X - center(grid)[None]).sum(axis=2).max(axis=1)
        return dist <= radius

    return event


EventSpec = Union[str, Callable[[np.ndarray], np.ndarray]]


def _first_half_e1(letters: np.ndarray) -> np.ndarray:
    half = letters.shape[1] // 2
    return np.all(letters[:, :half] == 0, axis=1)


def empirical_decay(reference: MonotonePath, event: EventSpec, N_list: Iterable[int]) -> list:
    """Exact rows ``(N, P^N(event), -log(P^N(event)) / N)``.

    ``event`` is ``"all_e1"``, ``"first_half_e1"`` or a predicate on an
    (n_words, N) letter array. Predicates are evaluated on every word, so
    N is capped at MAX_ENUMERATION_DEPTH for them.
    """
    N_list = [int(N) for N in N_list]
    if not N_list or min(N_list) < 1:
        raise MonosigError("N_list must contain positive integers")
    if event == "first_half_e1":
        event = _first_half_e1
    elif isinstance(event, str) and event != "all_e1":
        raise MonosigError(f"unknown event {event!r}")
    cap = MAX_DEPTH if event == "all_e1" else MAX_ENUMERATION_DEPTH
    if max(N_list) > cap:
        raise CapabilityError(f"N={max(N_list)} exceeds the exact-enumeration cap {cap}")
    sig = path_signature(normalize(reference), max(N_list))
    rows = []
    for N in N_list:
        dist = word_weights(sig, N)
        if event == "all_e1":
            prob = float(dist.weights[0])
        else:
            mask = event(_all_letters(N, dist.dim))
            prob = math.fsum(dist.weights[mask])
        decay = -math.log(prob) / N if prob > 0 else math.inf
        rows.append((N, prob, decay))
    return rows


def simulation_report(reference: MonotonePath, N: int, trials: int, seed: int) -> dict:
    """Total variation between simulated word frequencies and ``N! * C(w)``."""
    ref = normalize(reference)
    exact = word_weights(path_signature(ref, N), N)
    empirical = WordDistribution.from_samples(simulate_words(ref, N, trials, seed), ref.dim, N)
    return {
        "trials": int(trials),
        "N": int(N),
        "tv_distance": tv_distance(empirical, exact),
        "seed": seed,
        "algorithm": RNG_ALGORITHM.split("/")[0] + "/order-statistics",
    }
