"""Command-line front end: realize, subdivide, rank4-demo.

Exit codes: 0 success, 1 verification failure, 2 input or genericity error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bipartite as bp
from . import polytope as pt
from . import subdivision as sd
from . import subsets as ss
from . import tropical as tr
from .biconvex import PolytropeType, polytrope_type_from_json
from .errors import InputError
from .matroid import Matroid

OK, FAILED, BAD_INPUT = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_blocks(text: str) -> list[int]:
    try:
        sizes = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad --blocks value {text!r}") from exc
    if not sizes:
        raise InputError("--blocks is empty")
    return sizes


def load_type(args) -> tuple[PolytropeType, object]:
    """A polytrope type from --matrix (matrix or type JSON) or a generic --k/--seed matrix."""
    if args.matrix:
        path = Path(args.matrix)
        if not path.exists():
            raise InputError(f"no such file: {path}")
        text = path.read_text()
        if text.lstrip().startswith("{"):
            return polytrope_type_from_json(json.loads(text)), None
        V = tr.read_matrix(path)
    else:
        if args.k is None:
            raise InputError("give --matrix or --k")
        if args.k < 2:
            raise InputError("--k must be at least 2")
        V = tr.random_generic_matrix(args.k, args.seed)
    return tr.realize_type(V), V


def cmd_realize(args) -> int:
    T, V = load_type(args)
    doc = T.to_json()
    if V is not None:
        doc["matrix"] = tr.matrix_to_json(V)
    doc["maximal"] = T.is_maximal()
    _emit(_dump(doc), args.out)
    if not T.is_maximal():
        print(f"type has {len(T.vertices)} of {T.max_vertices} vertices", file=sys.stderr)
        return FAILED
    return OK


def cmd_subdivide(args) -> int:
    T, _ = load_type(args)
    sizes = parse_blocks(args.blocks) if args.blocks else [2] * T.k
    if len(sizes) != T.k:
        raise InputError(f"{len(sizes)} blocks for k={T.k}")
    P = bp.Partition.from_sizes(sizes)
    S = sd.build_sigma_star(T, P)
    rep = sd.verify_subdivision(S, samples=args.samples, seed=args.seed)
    duality = sd.check_duality(S, T, P, rep) if rep.ok else None
    ok = rep.ok and bool(duality)
    if args.format == "dot":
        _emit(rep.dual.to_dot(), args.out)
    else:
        doc = rep.to_json()
        doc["cells_bases"] = [len(c) for c in S.cells]
        doc["vertices"] = [v.to_json()["C"] for v in T.vertices]
        doc["duality"] = {"ok": bool(duality), "reason": duality.reason if duality is not None else "not verified"}
        _emit(_dump(doc), args.out)
    for f in rep.failures[:10]:
        print("FAIL:", f, file=sys.stderr)
    if duality is not None and not duality:
        print("FAIL:", duality.reason, file=sys.stderr)
    return OK if ok else FAILED


def cmd_rank4_demo(args) -> int:
    sizes = parse_blocks(args.blocks) if args.blocks else [2, 2, 2, 2]
    if len(sizes) != 4:
        raise InputError("rank4-demo needs exactly 4 blocks")
    P = bp.Partition.from_sizes(sizes)
    failures: list[str] = []

    tilde = sd.build_tilde(P)
    trep = sd.verify_subdivision(tilde, samples=args.samples, seed=args.seed)
    failures += [f"tilde: {f}" for f in trep.failures]
    if len(tilde) != 14:
        failures.append(f"tilde has {len(tilde)} cells")

    splits = []
    for cell, I, lo, hi in sd.all_splits(P):
        splits.append({"cell": str(cell), "I": sorted(I), "bases": [len(lo), len(hi)]})

    T = tr.realize_type(tr.random_generic_matrix(4, args.seed))
    sigma = sd.build_sigma_star(T, P)
    stray = sd.refines(sigma, tilde)
    if stray:
        failures.append(f"cells {stray} of the Sigma* subdivision lie in no tilde cell")

    Q = pt.BasePolytope(Matroid(P.n, 4, tuple(sorted(tilde.common_bases(), key=ss.lex_key))))
    support = pt.quotient_support(tilde, Q)
    quotients = pt.quotient_tiling(tilde, Q)

    scan = sd.splits_lemma_scan(sd.lemma71_family(args.scan_max_n))
    if not scan.ok:
        failures.append(f"splits lemma: {len(scan.violations)} violations")

    doc = {
        "blocks": sizes,
        "tilde": {
            "cells": [str(c) for c in tilde.labels],
            "bases": [len(c) for c in tilde.cells],
            "verified": trep.ok,
        },
        "splits": splits,
        "refinement": {"seed": args.seed, "sigma_cells": len(sigma), "ok": not stray},
        "quotient": {
            "support_f_vector": support.f_vector(),
            "cell_f_vectors": [q.f_vector() for q in quotients],
        },
        "splits_lemma_scan": {k: v for k, v in scan.to_json().items() if k != "violations"}
        | {"violations": len(scan.violations)},
        "failures": failures,
    }
    _emit(_dump(doc), args.out)
    for f in failures:
        print("FAIL:", f, file=sys.stderr)
    return FAILED if failures else OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropmat", description="Polytropes and dual matroid subdivisions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, blocks=True):
        sp.add_argument("--k", type=int, help="use a generic random k x k matrix")
        sp.add_argument("--matrix", help="CSV/JSON matrix, or a type JSON")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write output here instead of stdout")
        if blocks:
            sp.add_argument("--blocks", help="block sizes, e.g. 2,2,2,2")

    r = sub.add_parser("realize", help="combinatorial type of a polytrope")
    common(r, blocks=False)
    r.set_defaults(func=cmd_realize)

    s = sub.add_parser("subdivide", help="build and verify the dual matroid subdivision")
    common(s)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.set_defaults(func=cmd_subdivide)

    d = sub.add_parser("rank4-demo", help="rank-4 catalog, splits and the splits-lemma scan")
    d.add_argument("--blocks", default="2,2,2,2")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--samples", type=int, default=300)
    d.add_argument("--scan-max-n", type=int, default=7)
    d.add_argument("--out")
    d.set_defaults(func=cmd_rank4_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
