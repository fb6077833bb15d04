"""``analog-ecc`` command line: heights, verification campaigns and the ABFT demo.

Exit codes: 0 success, 1 failed check or cross-check disagreement, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import abft
from . import constructions as cons
from . import experiments as ex
from . import heights as ht
from . import numerics as nx

SEED_ENV = "ANALOG_ECC_SEED"


class InputError(ValueError):
    pass


def _default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value else 0


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None,
                   help="json (default), csv, or text (abft demo grid; the default there)")
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    modes = p.add_mutually_exclusive_group()
    modes.add_argument("--mode", choices=nx.MODES, default=None)
    modes.add_argument("--rational", dest="mode", action="store_const", const=nx.RATIONAL)
    modes.add_argument("--float", dest="mode", action="store_const", const=nx.FLOAT)


def _code_source(p: argparse.ArgumentParser):
    p.add_argument("--construct", choices=("problem-b", "block", "random"))
    p.add_argument("--parity", help="parity-check matrix as {rows, cols, data} JSON")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="analog-ecc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    h1 = sub.add_parser("h1", help="1-height and threshold of a code")
    _code_source(h1)
    h1.add_argument("--method", choices=ht.METHODS, default="auto")
    h1.add_argument("--cross-check", action="store_true", help="run every applicable method and compare")
    _common(h1)

    verify = sub.add_parser("verify", help="run a verification campaign")
    verify.add_argument("campaign", choices=("bounds", "trace", "tightness", "decoder"))
    _code_source(verify)
    verify.add_argument("--r", type=int, default=2)
    verify.add_argument("--trials", type=int, default=None)
    verify.add_argument("--max-n", type=int, default=12)
    verify.add_argument("--delta", type=float, default=1.0)
    verify.add_argument("--scale", type=int, default=1, help="multiply trial counts (e.g. 10)")
    verify.add_argument("--threads", type=int, default=1, help="worker processes")
    _common(verify)

    ab = sub.add_parser("abft", help="partitioned checksum GEMM")
    ab.add_argument("action", choices=("demo", "run"))
    ab.add_argument("--m", type=int, default=4)
    ab.add_argument("--l", dest="ell", type=int, default=4)
    ab.add_argument("--n", type=int, default=4)
    ab.add_argument("--parts", type=int, default=2, help="row and column partition count")
    ab.add_argument("--row-parts", type=int)
    ab.add_argument("--col-parts", type=int)
    ab.add_argument("--trials", type=int, default=1000)
    ab.add_argument("--magnitude", type=float, default=1e3)
    _common(ab)
    return parser


def _load_code(args, mode: str) -> ht.CodeSpec:
    if args.parity:
        if args.construct:
            raise InputError("give either --parity or --construct, not both")
        try:
            with open(args.parity) as fh:
                H = nx.matrix_from_json(json.load(fh), mode)
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.parity}: {exc}") from exc
        return ht.CodeSpec(H, name=os.path.basename(args.parity))
    if not args.construct or args.n is None:
        raise InputError("need --parity FILE or --construct KIND --n N")
    kind = args.construct.replace("-", "_")
    if kind in ("block", "random") and args.k is None:
        raise InputError(f"--construct {args.construct} needs --k")
    spec = cons.to_json(kind, args.n, args.k, args.seed)
    return cons.from_json(spec, mode)


def _emit(args, payload, rows=None):
    if args.format == "text":
        raise InputError("--format text is only available for 'abft demo'")
    if args.format == "csv":
        if rows is None:
            rows = [payload]
        text = ex.CampaignReport("", {}, rows=rows).to_csv()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def cmd_h1(args) -> int:
    mode = args.mode or nx.FLOAT
    code = _load_code(args, mode)
    if args.cross_check:
        reports = {m: ht.code_h1(code, m) for m in ht.applicable_methods(code)}
        agreement = ex.oracle_agreement(code)
        payload = {"reports": {m: r.to_json() for m, r in reports.items()}, "agree": agreement["agree"]}
        _emit(args, payload, [{k: v for k, v in r.to_json().items() if k != "witness"}
                              for r in reports.values()])
        return 0 if agreement["agree"] else 1
    try:
        report = ht.code_h1(code, args.method)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = report.to_json()
    payload["n"], payload["k"] = code.n, code.k
    payload["lower_bound"] = nx.format_scalar(ht.h1_lower_bound(code.n, code.k))
    _emit(args, payload, [{k: v for k, v in payload.items() if k != "witness"}])
    return 0


DEFAULT_TRIALS = {"bounds": 100, "trace": 1000, "decoder": 1000}


def cmd_verify(args) -> int:
    seed = args.seed
    trials = (args.trials or DEFAULT_TRIALS.get(args.campaign, 0)) * args.scale
    if args.campaign == "bounds":
        if args.n is None or args.k is None:
            raise InputError("bounds needs --n and --k")
        report = ex.lower_bound_campaign(args.n, args.k, trials, seed, workers=args.threads)
    elif args.campaign == "trace":
        if args.n is None:
            raise InputError("trace needs --n")
        report = ex.trace_lemma_campaign(args.n, args.r, trials, seed, workers=args.threads)
    elif args.campaign == "tightness":
        report = ex.tightness_suite(args.max_n)
    else:
        if not args.construct and not args.parity:
            args.construct, args.n = "problem-b", args.n or 8
        code = _load_code(args, args.mode or nx.FLOAT)
        report = ex.decoder_campaign(code, args.delta, trials, seed)
    _emit(args, report.to_json(), report.rows)
    if not report.passed:
        seeds = sorted({f.get("seed") for f in report.failures if f.get("seed") is not None})
        print(f"FAIL: {len(report.failures)} failures; seeds: {seeds}", file=sys.stderr)
        return 1
    return 0


def cmd_abft(args) -> int:
    layout = abft.AbftLayout(args.m, args.ell, args.n,
                             args.row_parts or args.parts, args.col_parts or args.parts)
    if args.action == "demo":
        import numpy as np

        rng = np.random.default_rng(args.seed)
        mode = args.mode or nx.RATIONAL
        A = nx.as_array(rng.integers(-4, 5, (layout.m, layout.ell)), mode)
        B = nx.as_array(rng.integers(-4, 5, (layout.ell, layout.n)), mode)
        Cp = abft.protected_gemm(abft.encode_left(A, layout), abft.encode_right(B, layout))
        text = abft.render(Cp)
        legend = "r = checksum row (p1' C), c = checksum column (C p2), * = corner (p1' C p2)"
        if args.format in ("json", "csv"):
            _emit(args, {"layout": vars(layout), "shape": list(Cp.data.shape),
                         "cells": [[abft.AbftLayout.classify(layout, i, j)[0] for j in range(Cp.data.shape[1])]
                                   for i in range(Cp.data.shape[0])],
                         "product": nx.matrix_to_json(Cp.data), "violations": len(abft.verify(Cp, 0))})
        else:
            out = sys.stdout if args.output == "-" else open(args.output, "w")
            out.write(text + "\n" + legend + "\n")
            if out is not sys.stdout:
                out.close()
        return 0
    report = ex.abft_campaign(layout, args.trials * 1, args.magnitude, args.seed)
    _emit(args, report.to_json(), report.rows)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    if args.format is None:
        args.format = "text" if getattr(args, "action", None) == "demo" else "json"
    handlers = {"h1": cmd_h1, "verify": cmd_verify, "abft": cmd_abft}
    try:
        return handlers[args.command](args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
