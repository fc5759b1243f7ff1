"""Command-line front end.

Exit codes: 0 affirmative verdict or success, 1 negative verdict,
2 usage or input error, 3 inconclusive (a search gave up before
exhausting the space it promised to cover).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import axioms, btac, kripke, solver, syntax, translate
from .solver import InconclusiveError, SolverConfig


def _report(args, payload, human):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _load_model(path):
    with open(path) as fh:
        text = fh.read()
    first = text.strip().splitlines()[0].strip()
    if first == "btac":
        m = btac.parse_model(text)
        bad = btac.validate_model(m)
        if bad:
            raise ValueError("invalid model: " + "; ".join(bad))
        return m
    return kripke.parse_model(text)


def _cfg(args):
    return SolverConfig(agent_universe=args.agents,
                        world_bound_override=getattr(args, "bound", None))


def _witness_payload(witness):
    if witness is None:
        return None
    model, world = witness
    return {"world": world, "model": kripke.format_model(model)}


def cmd_parse(args):
    f = syntax.parse(args.formula)
    payload = {"formula": syntax.pretty(f),
               "length": syntax.length(f),
               "subformulas": len(syntax.subformulas(f)),
               "agents": sorted(syntax.agents(f)),
               "language": syntax.language_tag(f).value}
    _report(args, payload,
            f"{payload['formula']}\nlength: {payload['length']}  "
            f"sf: {payload['subformulas']}  agents: {payload['agents']}  "
            f"language: {payload['language']}")
    return 0


def cmd_check(args):
    m = _load_model(args.modelfile)
    f = syntax.parse(args.formula)
    if isinstance(m, btac.BtacModel):
        w, _, h = args.at.partition("/")
        if not h:
            raise ValueError("btac index must look like moment/history")
        value = btac.eval(m, (w, h), f)
    else:
        value = kripke.mc(m, args.at, f)
    _report(args, {"holds": value}, "true" if value else "false")
    return 0 if value else 1


def cmd_sat(args):
    f = syntax.parse(args.formula)
    cfg = _cfg(args)
    if args.engine == "oracle":
        res = solver.oracle(f, args.max_worlds, cfg)
    elif args.agents == 1 and len(syntax.agents(f)) <= 1:
        res = solver.sat_single_agent(f, cfg)
    else:
        res = solver.sat(f, cfg)
    payload = {"verdict": res.verdict, "stats": res.stats,
               "witness": _witness_payload(res.witness)}
    human = res.verdict
    if res.witness:
        human += "\nworld: " + res.witness[1]
        human += "\n" + kripke.format_model(res.witness[0]).rstrip()
    _report(args, payload, human)
    return 0 if res.verdict == "SAT" else 1


def cmd_valid(args):
    f = syntax.parse(args.formula)
    verdict = solver.valid(f, _cfg(args))
    _report(args, {"valid": verdict}, "valid" if verdict else "not valid")
    return 0 if verdict else 1


def cmd_translate(args):
    f = syntax.parse(args.formula)
    out = translate.tr(f) if args.to == "cstit" else translate.tr_prime(f)
    _report(args, {"formula": syntax.pretty(out),
                   "length": syntax.length(out)},
            syntax.pretty(out))
    return 0


def cmd_filter(args):
    m = _load_model(args.modelfile)
    if isinstance(m, btac.BtacModel):
        raise ValueError("filter expects a kripke or moment model")
    if isinstance(m, kripke.MomentModel):
        m = kripke.moment_to_kripke(m)
    f = syntax.parse(args.formula)
    out = kripke.filtrate(m, f)
    text = kripke.format_model(out)
    _report(args, {"model": text, "worlds": len(out.worlds)}, text.rstrip())
    return 0


def cmd_prove(args):
    with open(args.derivationfile) as fh:
        d = axioms.parse_derivation(fh.read())
    r = axioms.check(d)
    payload = {"accepted": r.ok, "line": r.line, "message": r.message}
    human = ("accepted: " + r.message if r.ok
             else f"rejected at line {r.line}: {r.message}")
    _report(args, payload, human)
    return 0 if r.ok else 1


def cmd_axiom(args):
    bindings, agents = {}, {}
    for item in args.bind or []:
        key, _, value = item.partition("=")
        if not value:
            raise ValueError(f"--bind needs key=value, got {item!r}")
        if value.lstrip("-").isdigit():
            agents[key] = int(value)
        else:
            bindings[key] = syntax.parse(value)
    f = axioms.instantiate(args.name, bindings, agents, args.k)
    _report(args, {"formula": syntax.pretty(f),
                   "length": syntax.length(f)}, syntax.pretty(f))
    return 0


def cmd_oracle(args):
    f = syntax.parse(args.formula)
    res = solver.oracle(f, args.max_worlds, _cfg(args))
    payload = {"verdict": res.verdict, "stats": res.stats,
               "witness": _witness_payload(res.witness)}
    human = res.verdict
    if res.witness:
        human += "\nworld: " + res.witness[1]
        human += "\n" + kripke.format_model(res.witness[0]).rstrip()
    _report(args, payload, human)
    return 0 if res.verdict == "SAT" else 1


def cmd_sweep(args):
    rep = axioms.semantic_audit(args.schema, args.max_k,
                                models=args.models,
                                max_points=args.max_points)
    ok = not rep["counterexamples"]
    human = (f"{rep['instances']} instances, "
             f"{len(rep['counterexamples'])} counterexamples")
    for ce in rep["counterexamples"][:5]:
        human += f"\n  {ce['instance']} fails"
    rep_json = {k: v for k, v in rep.items() if k != "counterexamples"}
    rep_json["counterexamples"] = [
        {"instance": ce["instance"], "valuation": ce["valuation"],
         "point": ce["point"]} for ce in rep["counterexamples"]]
    _report(args, rep_json, human)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stitkit",
        description="Workbench for multi-agent STIT logics")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true",
                       help="machine-readable report")
        p.add_argument("--threads", type=int, default=1,
                       help="reserved; solving is single-threaded")
        return p

    p = add("parse", cmd_parse, help="echo canonical form and measures")
    p.add_argument("formula")

    p = add("check", cmd_check, help="evaluate a formula in a model file")
    p.add_argument("modelfile")
    p.add_argument("formula")
    p.add_argument("--at", required=True,
                   help="world id, or moment/history for btac models")

    for name, fn in (("sat", cmd_sat), ("valid", cmd_valid)):
        p = add(name, fn, help=f"decide {name}isfiability"
                if name == "sat" else "decide validity")
        p.add_argument("formula")
        p.add_argument("--agents", type=int, required=True,
                       help="size of the agent universe")
        p.add_argument("--bound", type=int, default=None)
        if name == "sat":
            p.add_argument("--engine", choices=["search", "oracle"],
                           default="search")
            p.add_argument("--max-worlds", type=int, default=3,
                           help="world cap for --engine oracle")

    p = add("translate", cmd_translate, help="translate between languages")
    p.add_argument("formula")
    p.add_argument("--to", choices=["cstit", "dstit"], required=True)

    p = add("filter", cmd_filter, help="filtrate a model through a formula")
    p.add_argument("modelfile")
    p.add_argument("formula")

    p = add("prove", cmd_prove, help="check a Hilbert derivation file")
    p.add_argument("derivationfile")

    p = add("axiom", cmd_axiom, help="print an axiom schema instance")
    p.add_argument("name", choices=list(axioms.SCHEMA_NAMES))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--bind", action="append",
                   help="slot=FORMULA or agentparam=INDEX, repeatable")

    p = add("oracle", cmd_oracle, help="brute-force satisfiability")
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--agents", type=int, default=None)

    p = add("sweep", cmd_sweep, help="validity sweep of an axiom schema")
    p.add_argument("--schema", required=True,
                   choices=list(axioms.SCHEMA_NAMES))
    p.add_argument("--models", choices=["btac", "kripke"], default="btac")
    p.add_argument("--max-k", type=int, default=1)
    p.add_argument("--max-points", type=int, default=3)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if getattr(args, "agents", None) is None and args.command == "oracle":
        args.agents = max(syntax.agents(syntax.parse(args.formula)),
                          default=0) + 1
    try:
        return args.fn(args)
    except (InconclusiveError, TimeoutError) as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
