"""Command-line front end.

Exit status is 0 when every requested check passed (and no graph was
truncated), 1 when a check failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ars, enumeration, generalized, reduction, trs
from .kernel import is_standard
from .syntax import ParseError, parse_term, show, show_type
from .typecheck import infer

CHECKS = ("correspondence", "measure", "diamond", "preservation", "peaks", "progress",
          "safety", "confluence", "quasistuck", "wn", "generic")


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_type(args):
    m = parse_term(args.term)
    ty = reduction.typable(m)
    _emit(args, {"term": show(m), "type": show_type(ty) if ty else None},
          show_type(ty) if ty else "untypable")
    return 0


def cmd_infer(args):
    t = parse_term(args.term)
    if not is_standard(t):
        print("infer: not a standard term", file=sys.stderr)
        return 2
    ty = infer((), t)
    _emit(args, {"term": show(t), "type": show_type(ty) if ty else None},
          show_type(ty) if ty else "untypable")
    return 0


def cmd_reduce(args):
    m = parse_term(args.term)
    tr = reduction.run(m, args.rel, args.strategy, args.fuel)
    _emit(args, {"start": show(m), "steps": tr.to_list(), "normal": tr.normal,
                 "fuel_exhausted": tr.exhausted},
          "\n".join(tr.lines()))
    return 0


def cmd_graph(args):
    m = parse_term(args.term)
    g = enumeration.build_graph(m, args.rel, args.cap)
    if args.dot:
        sys.stdout.write(g.to_dot())
    else:
        nfs = [show(g.nodes[i]) for i in g.normal_forms()]
        _emit(args, {"nodes": len(g.nodes), "edges": len(g.edges),
                     "truncated": g.truncated, "normal_forms": nfs},
              f"nodes={len(g.nodes)} edges={len(g.edges)} truncated={g.truncated}\n"
              + "\n".join(f"normal form: {s}" for s in nfs))
    return 1 if g.truncated else 0


def cmd_gentype(args):
    m = parse_term(args.term)
    res = generalized.generalized_typable(m, args.fuel, args.cap)
    payload = {"term": show(m), "found": res.found, "explored": res.explored,
               "complete": res.complete}
    if res.found:
        payload["type"] = show_type(res.type)
        payload["trace"] = res.trace.to_list()
        text = "\n".join(res.trace.lines()) + f"\ntype: {show_type(res.type)}"
    else:
        text = ("not generalized typable" if res.complete
                else f"no type found within bounds ({res.explored} terms explored)")
    if args.all_types:
        tys, complete = generalized.reachable_types(m, args.fuel, args.cap)
        payload["reachable_types"] = sorted(show_type(t) for t in tys)
        if len(tys) > 1:
            text += "\nnote: several types reachable: " + ", ".join(payload["reachable_types"])
    _emit(args, payload, text)
    return 0 if res.found else 1


def run_check(name, size, type_depth, cap=5_000):
    """Run one corpus check; returns a list of reports."""
    terms = lambda: enumeration.corpus(size, type_depth)  # noqa: E731
    if name == "correspondence":
        return [enumeration.correspondence_oracle(terms())]
    if name == "measure":
        return [enumeration.measure_oracle(terms())]
    if name == "preservation":
        return [enumeration.preservation_oracle(terms(), "b"),
                enumeration.preservation_oracle(terms(), "c")]
    if name == "peaks":
        return [enumeration.peak_completion_oracle(terms())]
    if name == "progress":
        return [enumeration.progress_oracle(terms())]
    if name == "safety":
        return [enumeration.safety_oracle(terms())]
    if name == "quasistuck":
        return [enumeration.quasi_stuck_oracle(terms())]
    if name == "wn":
        return [enumeration.weak_normalization_oracle(terms())]
    if name == "generic":
        return [enumeration.generic_preservation_oracle(terms(), cap)]
    if name in ("confluence", "diamond"):
        diamond = enumeration.Report("diamond")
        measure = enumeration.Report("measure-in-graphs")
        conf = enumeration.combined_confluence_oracle(
            terms(), cap,
            graph_checks=[lambda g: enumeration.graph_diamond_check(g, diamond),
                          lambda g: enumeration.graph_measure_check(g, measure)])
        return [conf, diamond, measure] if name == "confluence" else [diamond, measure]
    raise ValueError(name)


def cmd_check(args):
    names = CHECKS if args.which == "all" else (args.which,)
    reports = []
    for name in names:
        reports += run_check(name, args.size, args.type_depth, args.cap)
    if args.json:
        print(json.dumps([r.as_dict() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.summary())
            for v in r.violations[:5]:
                print(f"  violation: {v}")
    return 0 if all(r.ok for r in reports) else 1


def _load_ars(args):
    if args.action == "example3":
        return ars.example_3()
    if args.action == "example10":
        return ars.example_10()
    if not args.file:
        raise ParseError("ars analyze needs a file")
    with open(args.file) as fh:
        return ars.parse_ars(fh.read())


def cmd_ars(args):
    g = _load_ars(args)
    if args.dot:
        sys.stdout.write(ars.to_dot(g))
        return 0
    props = {}
    for rel in ("a", "b", "ab"):
        props[rel] = {
            "terminating": ars.is_terminating(g, rel),
            "deterministic": ars.is_deterministic(g, rel),
            "diamond": ars.has_diamond(g, rel),
            "locally_confluent": ars.is_locally_confluent(g, rel),
            "confluent": ars.is_confluent(g, rel),
        }
    combined = ars.check_confluence_conditions(g)
    nfs = ars.common_normal_forms(g)
    payload = {"properties": props, "combined_confluence": combined.as_dict(),
               "common_normal_forms": sorted(nfs, key=str)}
    lines = []
    for rel, p in props.items():
        lines.append(f"{rel}: " + " ".join(f"{k}={v}" for k, v in p.items()))
    lines.append("combined confluence hypotheses:")
    lines += combined.lines()
    lines.append(f"normal forms reachable from one node: {sorted(nfs, key=str)}")
    _emit(args, payload, "\n".join(lines))
    return 0


def _load_trs(spec):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in trs.BUILTINS:
            raise ParseError(f"unknown builtin {name!r}; have {sorted(trs.BUILTINS)}")
        return trs.builtin(name)
    with open(spec) as fh:
        return trs.parse_trs(fh.read())


def cmd_trs(args):
    system = _load_trs(args.system)
    if args.action == "normalize":
        if not args.term:
            raise ParseError("trs normalize needs a term")
        t = trs.parse_fo_term(args.term, system.variables)
        res = trs.fo_normalize(system, t, args.fuel)
        status = "normal" if res.normal else ("loop" if res.loop else "fuel-exhausted")
        payload = {"term": str(res.term), "steps": res.steps, "status": status}
        text = f"{res.term}\n({status} after {res.steps} steps)"
        if res.loop:
            payload["loop"] = [str(x) for x in res.loop]
            text += "\nloop: " + " -> ".join(payload["loop"])
        _emit(args, payload, text)
        return 0 if res.normal else 1
    if args.action == "cps":
        cps = trs.critical_pairs(system)
        _emit(args, [{"peak": str(c.peak), "left": str(c.left), "right": str(c.right),
                      "overlap": c.describe()} for c in cps],
              f"{len(cps)} critical pairs\n" + "\n".join(map(str, cps)))
        return 0
    if args.action == "termination":
        res = trs.lpo_terminates(system)
        payload = {"termination": "yes" if res.proved else "unknown",
                   "precedence": res.precedence}
        text = str(res)
        if not res.proved:
            loops = trs.find_loops(system)
            payload["loops"] = [[str(x) for x in w.terms] for w in loops]
            text += "".join(f"\nloop from lhs of rule {w.rule_index + 1}: {w}" for w in loops)
        _emit(args, payload, text)
        return 0 if res.proved else 1
    res = trs.confluence(system, args.fuel)
    text = res.verdict
    if args.verbose or res.verdict != "confluent":
        text += f"\ntermination: {res.termination}\ncritical pairs: {len(res.pairs)}"
        if res.witness:
            text += "\nwitness: " + ", ".join(map(str, res.witness))
        text += "".join(f"\nloop from lhs of rule {w.rule_index + 1}: {w}" for w in res.loops)
    _emit(args, res.as_dict(), text)
    return 0 if res.verdict == "confluent" else 1


def build_parser():
    p = argparse.ArgumentParser(prog="rewritelab",
                                description="Simple typing as abstract reduction.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("type", help="abstract typability")
    s.add_argument("term")
    s.set_defaults(func=cmd_type)

    s = sub.add_parser("infer", help="standard type inference")
    s.add_argument("term")
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("reduce", help="print a reduction trace")
    s.add_argument("--rel", choices=reduction.RELATIONS, default="b")
    s.add_argument("--strategy", choices=("leftmost",), default="leftmost")
    s.add_argument("--fuel", type=int, default=reduction.DEFAULT_FUEL)
    s.add_argument("term")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("graph", help="bounded reduction graph")
    s.add_argument("--rel", choices=reduction.RELATIONS, default="ba")
    s.add_argument("--cap", type=int, default=10_000)
    s.add_argument("--dot", action="store_true")
    s.add_argument("term")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("gentype", help="generalized (ca) typability search")
    s.add_argument("--fuel", type=int, default=generalized.DEFAULT_DEPTH)
    s.add_argument("--cap", type=int, default=generalized.DEFAULT_NODE_CAP)
    s.add_argument("--all-types", action="store_true",
                   help="explore the whole bounded graph and list every reachable type")
    s.add_argument("term")
    s.set_defaults(func=cmd_gentype)

    s = sub.add_parser("check", help="enumeration oracles")
    s.add_argument("which", choices=CHECKS + ("all",))
    s.add_argument("--size", type=int, default=5)
    s.add_argument("--type-depth", type=int, default=1)
    s.add_argument("--cap", type=int, default=5_000)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("ars", help="finite ARS analysis")
    s.add_argument("action", choices=("analyze", "example3", "example10"))
    s.add_argument("file", nargs="?")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_ars)

    s = sub.add_parser("trs", help="first-order rewriting engine")
    s.add_argument("action", choices=("normalize", "cps", "termination", "confluence"))
    s.add_argument("system", help="TRS file, builtin:uniform or builtin:extended")
    s.add_argument("term", nargs="?")
    s.add_argument("--fuel", type=int, default=10_000)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_trs)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, trs.TRSFormatError, ars.ARSFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
