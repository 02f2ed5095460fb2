"""Command-line front end.

Exit codes: 0 success, 1 a verification threshold failed, 2 malformed
input, 3 validation error (e.g. non-monotone path), 4 capability error
(e.g. signature too shallow).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._validation import check_partition
from .exceptions import CapabilityError, MonosigError
from .invert import RNG_ALGORITHM, mle_reconstruct, render_svg, sample_words
from .ldp import empirical_decay, rate_W, rate_XT, simulation_report
from .paths import CandidatePath, MonotonePath, normalize, path_from_poly_spec
from .signature import TruncatedSignature, index_word, path_signature
from .words import (
    WordDistribution,
    letter_count_marginal,
    piece_marginals,
    symmetrized_weights,
    word_weights,
)


class InputError(Exception):
    """Malformed or unreadable input file."""


def _read_json(filename):
    try:
        with open(filename) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {filename}: {exc}") from exc


def _sha256(filename) -> str:
    return hashlib.sha256(Path(filename).read_bytes()).hexdigest()


def _metadata(args, inputs) -> dict:
    return {
        "version": __version__,
        "command": args.command,
        "seed": getattr(args, "seed", None),
        "inputs": {str(f): _sha256(f) for f in inputs if f},
    }


def _load_path(args) -> MonotonePath | None:
    """Path from --path or --poly, or None if neither was given."""
    try:
        if getattr(args, "path", None):
            return MonotonePath.from_dict(_read_json(args.path))
        if getattr(args, "poly", None):
            return path_from_poly_spec(_read_json(args.poly), args.mesh)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed path file: {exc!r}") from exc
    return None


def _input_files(args) -> list:
    return [getattr(args, name, None) for name in ("sig", "path", "poly", "candidate", "time_change")]


def _load_signature(args, depth: int) -> TruncatedSignature:
    if getattr(args, "sig", None):
        try:
            sig = TruncatedSignature.from_dict(_read_json(args.sig))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed signature file: {exc!r}") from exc
        if sig.depth < depth:
            raise CapabilityError(f"signature depth {sig.depth} is below required depth {depth}")
        return sig
    path = _load_path(args)
    if path is None:
        raise InputError("one of --sig, --path or --poly is required")
    return path_signature(normalize(path), depth)


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def cmd_sign(args) -> int:
    path = _load_path(args)
    if path is None:
        raise InputError("one of --path or --poly is required")
    if not args.raw:
        path = normalize(path)
    sig = path_signature(path, args.depth, allow_deep=args.allow_deep)
    L = path.length
    for n, total in enumerate(sig.level_sums()):
        expected = L**n / math.factorial(n)
        print(
            f"level {n}  sum={total:.12g}  L^n/n!={expected:.12g}  "
            f"rel_err={abs(total - expected) / expected:.3g}",
            file=sys.stderr,
        )
    doc = sig.to_dict()
    doc["metadata"] = _metadata(args, _input_files(args))
    _emit(_dumps(doc), args.out)
    return 0


def cmd_invert(args) -> int:
    partition = check_partition(args.k, args.n, args.partition)
    N = sum(partition)
    sig = _load_signature(args, N)
    rec = mle_reconstruct(sig, partition, joint=args.joint)
    if args.format == "json":
        doc = rec.to_dict()
        doc["prob_matrix"] = [row.tolist() for row in rec.prob_matrix.rows]
        doc["metadata"] = _metadata(args, _input_files(args))
        _emit(_dumps(doc), args.out)
    else:
        _emit(rec.prob_matrix.to_csv(), args.out)
    if args.svg:
        overlay = {}
        truth = _load_path(args)
        if truth is not None:
            overlay["true path"] = normalize(truth)
        overlay[f"estimate partition={list(partition)}"] = rec.estimator
        Path(args.svg).write_text(render_svg(overlay))
    return 0


def cmd_sample(args) -> int:
    partition = check_partition(args.k, args.n, args.partition) if (
        args.partition or (args.k and args.n)) else None
    N = sum(partition) if partition else args.depth
    if N is None:
        raise InputError("give --depth or a partition")
    sig = _load_signature(args, N)
    dist = word_weights(sig, N)
    idx = sample_words(dist, args.trials, args.seed)
    words = [list(index_word(int(i), N, dist.dim)) for i in idx]
    endpoints = [(np.bincount(w, minlength=dist.dim) / N).tolist() for w in words]
    empirical = WordDistribution.from_samples(idx, dist.dim, N)
    doc = {
        "metadata": _metadata(args, _input_files(args)),
        "algorithm": RNG_ALGORITHM,
        "N": N,
        "words": words,
        "endpoints": endpoints,
        "letter_count_marginal": [
            {"counts": list(c), "empirical": p, "exact": letter_count_marginal(dist)[c]}
            for c, p in letter_count_marginal(empirical).items()
        ],
    }
    if partition:
        P = piece_marginals(symmetrized_weights(empirical, partition))
        doc["partition"] = list(partition)
        doc["piece_marginals"] = [row.tolist() for row in P.rows]
    _emit(_dumps(doc), args.out)
    return 0


def _load_candidate(filename) -> CandidatePath:
    try:
        return CandidatePath.from_dict(_read_json(filename))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed candidate file: {exc!r}") from exc


def cmd_rate(args) -> int:
    ref = _load_path(args)
    if ref is None:
        raise InputError("a reference --path or --poly is required")
    ref = normalize(ref)
    candidate = _load_candidate(args.candidate)
    lines = [f"rate_W: {rate_W(candidate, ref)}"]
    if args.time_change:
        xi = _load_candidate(args.time_change)
        lines.append(f"rate_XT: {rate_XT(candidate, xi, ref)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    ref = _load_path(args)
    if ref is None:
        raise InputError("a reference --path or --poly is required")
    report = simulation_report(ref, args.depth, args.trials, args.seed)
    report["threshold"] = args.threshold
    report["pass"] = report["tv_distance"] <= args.threshold
    report["metadata"] = _metadata(args, _input_files(args))
    _emit(_dumps(report), args.out)
    return 0 if report["pass"] else 1


def cmd_decay(args) -> int:
    ref = _load_path(args)
    if ref is None:
        raise InputError("a reference --path or --poly is required")
    Ns = [int(x) for x in args.Ns.split(",") if x.strip()]
    rows = empirical_decay(ref, args.event, Ns)
    text = "N,probability,decay_rate\n" + "".join(
        f"{N},{p:.6g},{r:.6g}\n" for N, p, r in rows
    )
    _emit(text, args.out)
    return 0


def _add_inputs(p, sig=False):
    if sig:
        p.add_argument("--sig", help="signature JSON file (takes precedence; --path/--poly then only feed --svg)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--path", help="path JSON file {dim, segments}")
    g.add_argument("--poly", help="polynomial path spec JSON file")
    p.add_argument("--mesh", type=float, default=0.01, help="time mesh for --poly (default 0.01)")


def _add_partition(p):
    p.add_argument("--k", type=int, help="number of blocks")
    p.add_argument("--n", type=int, help="letters per block")
    p.add_argument("--partition", help="explicit block sizes, e.g. 4,4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monosig", description="Signatures and signature inversion for monotone paths."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sign", help="compute a truncated signature")
    _add_inputs(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--raw", action="store_true", help="do not normalise to unit length")
    p.add_argument("--allow-deep", action="store_true", help="lift the depth cap")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("invert", help="probability matrix and maximum-weight estimate")
    _add_inputs(p, sig=True)
    _add_partition(p)
    p.add_argument("--joint", action="store_true", help="argmax over the joint block-count law")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--svg", help="write an overlay of the true and estimated path")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("sample", help="sample lattice paths with weights N! C(w)")
    _add_inputs(p, sig=True)
    _add_partition(p)
    p.add_argument("--depth", type=int, help="word length N")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("rate", help="evaluate rate functions on a candidate path")
    _add_inputs(p)
    p.add_argument("--candidate", required=True)
    p.add_argument("--time-change", help="scalar time change xi for the (X, T) rate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("simulate", help="conditioned Poisson Monte Carlo check")
    _add_inputs(p)
    p.add_argument("--depth", type=int, required=True, help="number of arrivals N")
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.02)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decay", help="exact finite-N decay rates of an event")
    _add_inputs(p)
    p.add_argument("--event", choices=["all_e1", "first_half_e1"], default="all_e1")
    p.add_argument("--Ns", default="1,2,4,8,12,16,20")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) is not None and getattr(args, "trials", 1) < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "mesh", 1.0) <= 0:
        print("error: --mesh must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except MonosigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
