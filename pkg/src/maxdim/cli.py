"""Command-line front end.

Exit codes: 0 when every value is exact and every check passes, 2 when a cap
or timeout left lower bounds or skipped groups, 1 on errors and violations.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict

from . import __version__
from .constructors import construct
from .gqp import GqpGroup, invariants_gqp, md_gqp
from .group import CapExceeded, GroupError
from .invariants import BRUTE_CAP, compute_invariants
from .verify import DEFAULT_MAX, TARGETS, sweep

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


def _report(command: list, **fields) -> dict:
    out = {"tool": "maxdim", "version": __version__, "command": command}
    out.update(fields)
    return out


def _emit(rep: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(rep, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


def _value(value, status, certificate=None, elapsed_ms=0.0) -> dict:
    return {"value": value, "status": status, "certificate": certificate,
            "elapsed_ms": round(elapsed_ms, 3)}


def _error(command, exc, as_json, started, **extra) -> int:
    # a cap leaves nothing computed: skipped rather than failed
    status = "skipped" if isinstance(exc, CapExceeded) else "fail"
    rep = _report(command, status=status, error=f"{type(exc).__name__}: {exc}", **extra,
                  elapsed_ms=round(1000 * (time.monotonic() - started), 3))
    if as_json:
        _emit(rep, True, [])
    else:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_PARTIAL if isinstance(exc, CapExceeded) else EXIT_ERROR


def cmd_invariants(args, command) -> int:
    which = ("m", "md", "i") if args.which == "all" else (args.which,)
    t = time.monotonic()
    try:
        G = construct(args.group)
        order = G.order
        gq = G.meta.get("gqp")
        if gq is not None and order > BRUTE_CAP:
            # too large for the generic searches: structured routes
            r = invariants_gqp(gq, budget=args.timeout if args.timeout else "default")
            values = {
                "m": _value(r.m, r.m_status, {"route": r.details.get("m_route")}),
                "md": _value(r.md, r.md_status, {"family": r.details.get("md_family")}),
                "i": _value(r.i, r.i_status, {"base_series": r.details.get("base_series")}),
            }
            values = {k: v for k, v in values.items() if k in which}
        else:
            rep = compute_invariants(G, which, mode=args.mode, timeout=args.timeout)
            values = {k: asdict(getattr(rep, k)) for k in which}
            for v in values.values():
                v["elapsed_ms"] = round(v["elapsed_ms"], 3)
    except (GroupError, ValueError) as exc:
        return _error(command, exc, args.json, t, group=args.group)
    status = "exact" if all(v["status"] == "exact" for v in values.values()) else "lower_bound"
    rep = _report(command, group=args.group, order=order, status=status, invariants=values,
                  elapsed_ms=round(1000 * (time.monotonic() - t), 3))
    lines = [f"group {args.group} (order {order})"]
    for k, v in values.items():
        lines.append(f"  {k:<3} = {v['value']}  [{v['status']}]")
    _emit(rep, args.json, lines)
    return EXIT_OK if status == "exact" else EXIT_PARTIAL


def cmd_gqp(args, command) -> int:
    t = time.monotonic()
    try:
        gq = GqpGroup(args.p, args.q)
        if args.compute == "family":
            fam = gq.lemma33_family()
            body = {"family": _value(len(fam), "lower_bound", {
                "labels": fam.labels,
                "witnesses": [str(w) for w in fam.witnesses],
                "general_position": True,
            })}
            lines = [f"G_(q={args.q},p={args.p}): general-position family of size {len(fam)}"]
            lines += [f"  {lab}  witness {w}" for lab, w in zip(fam.labels, fam.witnesses)]
        elif args.compute == "md":
            if args.budget is None and args.p > 3:
                fam = gq.lemma33_family()
                res = _value(len(fam), "lower_bound", {"labels": fam.labels})
            else:
                budget = 300.0 if args.budget is None else args.budget
                r = md_gqp(gq, budget=budget)
                res = _value(r.value, r.status, {"labels": r.labels, "nodes": r.nodes},
                             1000 * r.elapsed)
            body = {"md": res}
            lines = [f"md = {res['value']}  [{res['status']}]"]
        else:
            r = invariants_gqp(gq, budget="default" if args.budget is None else args.budget)
            body = {
                "m": _value(r.m, r.m_status),
                "md": _value(r.md, r.md_status, {"family": r.details.get("md_family")}),
                "i": _value(r.i, r.i_status, {"base_series": r.details.get("base_series")}),
            }
            lines = [f"{k:<3} = {v['value']}  [{v['status']}]" for k, v in body.items()]
    except (GroupError, ValueError) as exc:
        return _error(command, exc, args.json, t, p=args.p, q=args.q)
    # the family is certified, but as a value of md it is only a lower bound
    exact = all(v["status"] == "exact" for v in body.values()) or args.compute == "family"
    rep = _report(command, group=gq.spec, order=gq.order, p=args.p, q=args.q,
                  status="exact" if exact else "lower_bound", invariants=body,
                  elapsed_ms=round(1000 * (time.monotonic() - t), 3))
    _emit(rep, args.json, lines)
    return EXIT_OK if exact else EXIT_PARTIAL


def cmd_verify(args, command) -> int:
    t = time.monotonic()
    try:
        res = sweep(args.target, args.max_order, threads=args.threads)
    except (GroupError, ValueError) as exc:
        return _error(command, exc, args.json, t, target=args.target)
    d = res.to_dict()
    for c in d["checks"]:
        c["elapsed_ms"] = round(c["elapsed_ms"], 3)
    d["elapsed_ms"] = round(d["elapsed_ms"], 3)
    status = "fail" if res.violations else ("skipped" if res.skipped else "exact")
    rep = _report(command, status=status, **d)
    lines = [f"{c.status:<8} {c.group:<40} {c.order:>5}  {json.dumps(c.data, sort_keys=True)}"
             for c in res.checked]
    lines.append(f"{args.target}: {len(res.checked)} groups checked, "
                 f"{len(res.violations)} violations, {len(res.skipped)} skipped")
    _emit(rep, args.json, lines)
    if res.violations:
        return EXIT_ERROR
    return EXIT_PARTIAL if res.skipped else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxdim", description="m, i and MaxDim of finite groups")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("invariants", help="compute m, md, i of one group")
    p.add_argument("--group", required=True, help="group spec, e.g. sym:3 or gqp:2,3")
    p.add_argument("--which", choices=("m", "md", "i", "all"), default="all")
    p.add_argument("--mode", choices=("brute", "chief"), default="brute",
                   help="route for m: exhaustive search or chief series")
    p.add_argument("--timeout", type=float, default=None, help="seconds per search")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gqp", help="the wreath-type groups G_(q,p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--compute", choices=("md", "family", "report"), default="report")
    p.add_argument("--budget", type=float, default=None, help="seconds for the md search")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="sweep the corpus for one statement")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--max-order", type=int, default=None,
                   help="defaults: " + ", ".join(f"{k}={v}" for k, v in DEFAULT_MAX.items()))
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--json", action="store_true")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    handler = {"invariants": cmd_invariants, "gqp": cmd_gqp, "verify": cmd_verify}[args.cmd]
    return handler(args, argv)


if __name__ == "__main__":
    sys.exit(main())
