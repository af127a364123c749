"""Command-line front end: every subcommand prints one JSON report.

Exit status 0 means a verdict was reached (a refutation counts), 1 means the
run was inconclusive or hit a search budget, 2 means bad arguments or input.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from pathlib import Path

from .errors import CycleGoodError, ParameterError
from .formats import format_coloring, read_coloring, read_graph
from .gadgets import build_doubling_gadget, build_gadget_with_return, build_small_gadget
from .graph import Graph, TwoColoring
from .oracle import exact_ramsey_oracle
from .profile import load_profile
from .ramsey import (
    REFUTES,
    UNDECIDED,
    RamseyInstance,
    bipartite_engine,
    connected_engine,
    lower_bound_coloring,
    prove_main,
    refuting_coloring_general,
    verify_refutation,
)


class UsageError(Exception):
    pass


def _sizes(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("size list is empty")
    return vals


def _coloring_json(c: TwoColoring) -> dict:
    return {"kind": "coloring", "order": c.order, "red_edges": [list(e) for e in c.red.edges()]}


def _read(path: str, reader):
    try:
        return reader(path)
    except (OSError, ValueError, CycleGoodError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _random_host(spec: str, seed: int) -> Graph:
    try:
        n_txt, p_txt = spec.split(",")
        n, p = int(n_txt), float(p_txt)
    except ValueError:
        raise UsageError(f"--random expects N,p (got {spec!r})") from None
    rng = random.Random(seed)
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


# ---------------------------------------------------------------- subcommands

def cmd_generate(args, profile) -> tuple[int, dict]:
    inst = RamseyInstance(args.n, tuple(sorted(args.sizes)))
    if args.construction == "lower-bound":
        c = lower_bound_coloring(inst, args.g_order)
        g_order = inst.n if args.g_order is None else args.g_order
        value = (g_order - 1) * (inst.k - 1) + inst.sigma - 1
    else:
        if args.r is None:
            raise UsageError("general construction needs --r")
        c = refuting_coloring_general(inst, args.r)
        m_r = inst.sizes[args.r - 1]
        value = (inst.k - args.r) * (inst.n - 1) + args.r * (m_r - 1)
    assert value == c.order
    if args.coloring_out:
        Path(args.coloring_out).write_text(format_coloring(c))
    report = {
        "verdict": "generated",
        "witness": _coloring_json(c),
        "trace": [{"stage": "construction", "name": args.construction, "order": c.order, "formula": value, "implied_lower_bound": value + 1}],
    }
    return 0, report


def cmd_verify(args, profile) -> tuple[int, dict]:
    c = _read(args.coloring, read_coloring)
    inst = RamseyInstance(args.n, tuple(sorted(args.sizes)))
    rep = verify_refutation(c, inst, profile.search_budget)
    w = rep.witness.to_json() if rep.witness is not None else None
    report = {"verdict": rep.status, "witness": w, "trace": [{"stage": "verify", "order": c.order, "reason": rep.reason}]}
    return (1 if rep.status == UNDECIDED else 0), report


def cmd_gadget(args, profile) -> tuple[int, dict]:
    g = _read(args.graph, read_graph) if args.graph else _random_host(args.random or "400,0.75", args.seed)
    if args.kind == "small":
        b = build_small_gadget(g, args.m, args.k, args.r, profile, args.seed)
        gadget, trace, extra = b.gadget, b.trace, {}
    elif args.kind == "doubling":
        b = build_doubling_gadget(g, args.m, args.k, args.r, profile, args.seed)
        gadget, trace, extra = b.gadget, b.trace, {}
    else:
        lam = args.lam if args.lam is not None else int(profile.connect_lambda)
        mu = args.mu if args.mu is not None else int(profile.connect_mu)
        b = build_gadget_with_return(g, args.m, args.k, lam, mu, profile, args.seed)
        gadget, trace, extra = b.result.gadget, b.trace, {"return_path": list(b.result.return_path)}
    errs = gadget.check(g)
    witness = gadget.to_json() | extra
    report = {"verdict": "gadget" if not errs else "invalid-gadget", "witness": witness, "trace": list(trace) + [{"stage": "check", "errors": errs}]}
    return (0 if not errs else 1), report


def cmd_engine(args, profile) -> tuple[int, dict]:
    c = _read(args.coloring, read_coloring)
    sizes = tuple(sorted(args.sizes))
    if args.kind == "bipartite":
        if len(sizes) != 2:
            raise UsageError("bipartite engine needs two part sizes")
        v = bipartite_engine(c, args.n, sizes[0], sizes[1], profile, args.seed)
    elif args.kind == "connected":
        if len(set(sizes)) != 1:
            raise UsageError("connected engine needs equal part sizes")
        v = connected_engine(c, args.n, sizes[0], len(sizes), profile, args.seed)
    else:
        v = prove_main(c, RamseyInstance(args.n, sizes), profile, args.seed)
    out = v.to_json()
    return (0 if v.decided else 1), out


def cmd_oracle(args, profile) -> tuple[int, dict]:
    res = exact_ramsey_oracle(args.n, sorted(args.sizes), args.nmax, args.mode, profile.search_budget, args.threads)
    body = res.to_json()
    report = {
        "verdict": body["bound"],
        "witness": body["refuter"],
        "trace": body["levels"],
        "R": body["R"],
        "mode": body["mode"],
    }
    return (0 if res.complete else 1), report


def cmd_selftest(args, profile) -> tuple[int, dict]:
    checks = []
    for n, sizes in ((6, (2, 2, 2)), (5, (1, 1)), (7, (1, 2, 3))):
        inst = RamseyInstance(n, sizes)
        ok = verify_refutation(lower_bound_coloring(inst), inst).status == REFUTES
        checks.append({"check": f"lower-bound n={n} sizes={list(sizes)}", "ok": ok})
    for n, sizes, want in ((3, [1, 1], 3), (5, [1, 2], 5)):
        got = exact_ramsey_oracle(n, sizes, 7).value
        checks.append({"check": f"oracle n={n} sizes={sizes}", "ok": got == want, "value": got})
    inst = RamseyInstance(5, (1, 2))
    pairs = list(itertools.combinations(range(5), 2))
    bad = 0
    for bits in range(1 << len(pairs)):
        c = TwoColoring(Graph(5, [e for i, e in enumerate(pairs) if bits >> i & 1]))
        v = bipartite_engine(c, 5, 1, 2, profile, args.seed)
        bad += not (v.decided and v.kind != "refuted" and v.check(c, inst))
    checks.append({"check": "every coloring of K_5 has red C_5 or blue K_{1,2}", "ok": bad == 0, "failures": bad})
    ok = all(ch["ok"] for ch in checks)
    return (0 if ok else 1), {"verdict": "pass" if ok else "fail", "witness": None, "trace": checks}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", default="desk", help="paper, desk or file:<path>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record elapsed_ms (reports stop being byte-stable)")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="cyclegood", description="Cycle-versus-multipartite Ramsey certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build a refuting clique coloring")
    g.add_argument("construction", choices=["lower-bound", "general"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--sizes", type=_sizes, required=True)
    g.add_argument("--g-order", type=int, dest="g_order")
    g.add_argument("--r", type=int)
    g.add_argument("--coloring-out", dest="coloring_out", help="also write the coloring file")
    g.set_defaults(handler=cmd_generate)

    v = sub.add_parser("verify", parents=[common], help="decide whether a coloring refutes an instance")
    v.add_argument("--coloring", required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--sizes", type=_sizes, required=True)
    v.set_defaults(handler=cmd_verify)

    gd = sub.add_parser("gadget", parents=[common], help="build and check a gadget")
    gd.add_argument("kind", choices=["small", "doubling", "return"])
    gd.add_argument("--graph", help="host graph file (edge list or graph6)")
    gd.add_argument("--random", help="random host N,p when no --graph is given")
    gd.add_argument("--m", type=int, required=True)
    gd.add_argument("--k", type=int, default=2)
    gd.add_argument("--r", type=int, default=1)
    gd.add_argument("--lam", type=int)
    gd.add_argument("--mu", type=int)
    gd.set_defaults(handler=cmd_gadget)

    e = sub.add_parser("engine", parents=[common], help="find a red C_n or blue multipartite witness")
    e.add_argument("kind", choices=["bipartite", "connected", "main"])
    e.add_argument("--coloring", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--sizes", type=_sizes, required=True)
    e.set_defaults(handler=cmd_engine)

    o = sub.add_parser("oracle", parents=[common], help="exact Ramsey number for tiny instances")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--sizes", type=_sizes, required=True)
    o.add_argument("--nmax", type=int, required=True)
    o.add_argument("--mode", choices=["full", "pruned"], default="pruned")
    o.set_defaults(handler=cmd_oracle)

    s = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    s.set_defaults(handler=cmd_selftest)
    return p


def run(argv: list[str] | None = None) -> tuple[int, str, str | None]:
    """Parse, dispatch and render; returns (exit status, report text, output path)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), "", None
    start = time.perf_counter()
    try:
        profile = load_profile(args.profile)
        status, body = args.handler(args, profile)
    except (UsageError, ParameterError) as exc:
        msg = {"command": args.command, "error": str(exc), "verdict": "usage-error"}
        return 2, json.dumps(msg, sort_keys=True), None
    except CycleGoodError as exc:
        status = 1
        profile = load_profile(args.profile)
        body = {"verdict": "inconclusive", "witness": None, "trace": list(getattr(exc, "trace", [])), "error": str(exc)}
    report = {
        "command": args.command,
        "profile": profile.to_json(),
        "seed": args.seed,
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 3) if args.timing else None,
        "witness": None,
        "trace": [],
    }
    report.update(body)
    return status, json.dumps(report, sort_keys=True, default=str), args.out


def main(argv: list[str] | None = None) -> int:
    status, text, out = run(argv)
    if not text:
        return status
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text, file=sys.stderr if status == 2 else sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
