"""Command-line front end.

Every command prints one JSON object with at least the keys ``result``,
``value``, ``metric``, ``reason`` and ``witnesses``.  Exit status is 0 for a
finite (or positive) answer, 10 for an infinite (or negative) one and 2 for
invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import scc_paths, strongly_connected_components, trim
from .errors import TransducerError
from .fstio import load_fst
from .fvdist import finite_valued_distance, is_unambiguous
from .kcheck import delta_max, k_bounded
from .metrics import Metric, conjugacy_witnesses, conjugate
from .oracle import oracle_distance, oracle_relative
from .reldist import finite_relative, full_product, relative_distance

EXIT_OK, EXIT_INFINITE, EXIT_INPUT = 0, 10, 2


def _jsonable(x):
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, tuple) and all(isinstance(c, str) and len(c) == 1 for c in x):
        return "".join(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if x == float("inf"):
        return None
    return x


def _payload(result, value=None, metric=None, reason="", witnesses=(), **extra):
    out = {"result": result, "value": value, "metric": metric, "reason": reason,
           "witnesses": _jsonable(list(witnesses))}
    out.update({k: _jsonable(v) for k, v in extra.items()})
    return out


def _single(path):
    doc = load_fst(path)
    if len(doc) != 1:
        raise TransducerError(f"{path}: expected exactly one machine, found {len(doc)}")
    return doc[0]


def _distance_payload(res, metric):
    if res.is_finite:
        return _payload("finite", res.value, metric, res.reason, res.witnesses), EXIT_OK
    return _payload("infinite", None, metric, res.reason, res.witnesses), EXIT_INFINITE


def cmd_distance(args):
    res = finite_valued_distance(list(load_fst(args.left)), list(load_fst(args.right)),
                                 args.metric, parallel=args.parallel)
    return _distance_payload(res, args.metric)


def cmd_reldist(args):
    res = relative_distance(_single(args.fn), list(load_fst(args.rel)), args.metric)
    return _distance_payload(res, args.metric)


def cmd_check_finite(args):
    report = finite_relative(_single(args.fn), list(load_fst(args.rel)))
    witnesses = []
    if report.missing is not None:
        witnesses.append({"input": report.missing})
    for cls in report.classes:
        for p in cls.paths:
            witnesses.append({"class": sorted(cls.P), "path": p.path, "tape": p.witness})
    result = "finite" if report.finite else "infinite"
    return (_payload(result, None, args.metric, report.reason, witnesses),
            EXIT_OK if report.finite else EXIT_INFINITE)


def cmd_check_k(args):
    product = full_product(_single(args.fn), list(load_fst(args.rel)))
    ok = k_bounded(product, args.k, args.metric)
    reason = f"every input is within {args.k} edits" if ok else f"some input needs more than {args.k} edits"
    return (_payload("within" if ok else "exceeds", args.k, args.metric, reason,
                     [{"delta_max": delta_max(product), "states": product.num_states}]),
            EXIT_OK if ok else EXIT_INFINITE)


def cmd_conj(args):
    ok = conjugate(args.u, args.v)
    wit = sorted(conjugacy_witnesses(args.u, args.v, max(len(args.u), 1)), key=lambda z: (len(z), z))
    return (_payload("conjugate" if ok else "not-conjugate", None, None,
                     "cyclic shifts" if ok else "not cyclic shifts", wit, conjugate=ok),
            EXIT_OK if ok else EXIT_INFINITE)


def _trend_payload(rep, metric):
    witnesses = []
    if rep.mismatch is not None:
        witnesses.append({"input": rep.mismatch, "domain": "mismatch"})
    per_length = {str(n): v for n, v in rep.per_length.items()}
    bounded = rep.classification == "bounded-plateau" and rep.mismatch is None
    return (_payload(rep.classification, rep.plateau_value if bounded else None, metric,
                     "observed up to the given length", witnesses, per_length=per_length),
            EXIT_OK if bounded else EXIT_INFINITE)


def cmd_oracle_distance(args):
    rep = oracle_distance(list(load_fst(args.left)), list(load_fst(args.right)), args.max_len, args.metric)
    return _trend_payload(rep, args.metric)


def cmd_oracle_reldist(args):
    rep = oracle_relative(_single(args.fn), list(load_fst(args.rel)), args.max_len, args.metric)
    return _trend_payload(rep, args.metric)


def cmd_inspect(args):
    machines = []
    for m in load_fst(args.file):
        t = trim(m)
        sccs = strongly_connected_components(t)
        machines.append({
            "name": m.name,
            "states": m.num_states,
            "sequential": m.is_sequential,
            "complete": m.is_complete,
            "trim": m.is_trim,
            "unambiguous": is_unambiguous(m),
            "sccs": [sorted(t.labels[q] for q in c) for c in sccs],
            "paths": len(scc_paths(t)),
        })
    return _payload("ok", len(machines), None, "machine summary", [], machines=machines), EXIT_OK


COMMANDS = {
    "distance": cmd_distance,
    "reldist": cmd_reldist,
    "check-finite": cmd_check_finite,
    "check-k": cmd_check_k,
    "conj": cmd_conj,
    "oracle-distance": cmd_oracle_distance,
    "oracle-reldist": cmd_oracle_reldist,
    "inspect": cmd_inspect,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--metric", choices=[m.value for m in Metric], default="lev")
    common.add_argument("--json", action=argparse.BooleanOptionalAction, default=True,
                        help="print JSON (default) or a one-line summary")
    common.add_argument("--parallel", type=int, default=None, metavar="N")

    parser = argparse.ArgumentParser(prog="tdist", description="Edit distances between transducers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="distance between two unions")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    for name, helptext in (("reldist", "relative distance of a function to a union"),
                           ("check-finite", "finiteness verdict with per-path witnesses"),
                           ("check-k", "is the relative distance at most k?")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--fn", required=True)
        p.add_argument("--rel", required=True)
        if name == "check-k":
            p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("conj", parents=[common], help="are two words conjugate?")
    p.add_argument("u")
    p.add_argument("v")

    p = sub.add_parser("oracle-distance", parents=[common], help="brute-force distance trend")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--max-len", type=int, default=8)

    p = sub.add_parser("oracle-reldist", parents=[common], help="brute-force relative distance trend")
    p.add_argument("--fn", required=True)
    p.add_argument("--rel", required=True)
    p.add_argument("--max-len", type=int, default=8)

    p = sub.add_parser("inspect", parents=[common], help="flags, components and paths")
    p.add_argument("file")
    return parser


def execute(argv=None) -> tuple[dict, int]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_OK if exc.code == 0 else EXIT_INPUT
        return _payload("error" if code else "help", reason="invalid command line"), code
    try:
        payload, code = COMMANDS[args.command](args)
    except (TransducerError, OSError) as exc:
        payload, code = _payload("error", None, getattr(args, "metric", None), str(exc)), EXIT_INPUT
    payload["_json"] = args.json
    return payload, code


def main(argv=None) -> int:
    payload, code = execute(argv)
    as_json = payload.pop("_json", True)
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        value = "" if payload["value"] is None else f" {payload['value']}"
        print(f"{payload['result']}{value}: {payload['reason']}")
    return code


if __name__ == "__main__":
    sys.exit(main())
