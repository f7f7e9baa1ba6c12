"""Command line front-end: ``aptkernel <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from statistics import mean

from .axioms import check_axioms
from .graphio import GraphFormatError, parse_k, read_graph, write_graph
from .kernel import (CUBIC, QUADRATIC, BoundViolation, Instance, Kernel, ModulatorTooLarge,
                     Unsupported, Yes, bound_constants, dispatch_case, kernel_size_bound,
                     kernelize, thresholds)
from .oracle import UNIFORM, CYCLIC_TRIANGLES, POLICIES, ContractViolation, corpus_graph, equivalence_check
from .properties import NoDivergenceWitness, builtin, property_constants

EXIT_KERNEL = 0
EXIT_ERROR = 1
EXIT_YES = 10
EXIT_UNSUPPORTED = 20
EXIT_TOO_LARGE = 21

OUTCOME_EXIT = {Kernel.tag: EXIT_KERNEL, Yes.tag: EXIT_YES,
                Unsupported.tag: EXIT_UNSUPPORTED, ModulatorTooLarge.tag: EXIT_TOO_LARGE}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[Fraction]:
    """``"1..100"`` (inclusive integer range), ``"1/4,1/2"`` or a single value."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(Fraction(i) for i in range(int(lo), int(hi) + 1))
        elif part:
            out.append(Fraction(part))
    if not out:
        raise ValueError(f"empty range {text!r}")
    return out


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    return value


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def run_report(inst: Instance, outcome, seconds: float | None = None) -> dict:
    report = {
        "instance": {"n": inst.g.n, "m": inst.g.m, "k": inst.k, "property": inst.pi.name},
        "outcome": outcome.tag,
        "rules": {k: v for k, v in outcome.stats.items() if k.startswith("rule")},
    }
    if isinstance(outcome, Yes):
        report["witness"] = {"lemma": outcome.witness.lemma, **outcome.witness.detail}
    elif isinstance(outcome, Kernel):
        report["kernel"] = {"n": outcome.g.n, "m": outcome.g.m, "k": outcome.k,
                            "bound": outcome.bound, "case": outcome.case,
                            "modulator": sorted(outcome.s),
                            "utilization": f"{outcome.g.n / outcome.bound:.6f}"}
    elif isinstance(outcome, Unsupported):
        report["reason"] = outcome.reason
    else:
        report["modulator"] = {"size": outcome.size, "limit": outcome.limit,
                               "method": outcome.method}
    if seconds is not None:
        report["timings"] = {"kernelize_seconds": round(seconds, 6)}
    return report


def _print_text(report: dict, indent: str = ""):
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_text(value, indent + "  ")
        else:
            print(f"{indent}{key}: {_jsonable(value)}")


def cmd_kernelize(args) -> int:
    g = read_graph(args.graph)
    pi = builtin(args.property)
    inst = Instance(g, parse_k(args.k), pi)
    start = time.perf_counter()
    outcome = kernelize(inst)
    seconds = time.perf_counter() - start if args.timings else None
    report = run_report(inst, outcome, seconds)
    if args.json:
        print(dumps(report))
    else:
        _print_text(report)
    if args.write_kernel and isinstance(outcome, Kernel):
        with open(args.write_kernel, "w", encoding="utf-8") as fh:
            fh.write(write_graph(outcome.g))
    return OUTCOME_EXIT[outcome.tag]


def constants_report(name: str, ks=(1, 2, 3)) -> dict:
    pi = builtin(name)
    consts = property_constants(pi)
    case = dispatch_case(pi)
    bc = bound_constants(consts)
    report = {"property": pi.name, "lambda": pi.lam, "j": consts.j, "a": consts.a,
              "inf_ak": consts.inf_ak, "case": case,
              "bound_constants": {"c1": bc.c1, "c2": bc.c2, "c3": bc.c3, "leading": bc.leading},
              "thresholds": {}}
    for k in ks:
        t = thresholds(consts, k).as_dict()
        t["kernel_bound"] = kernel_size_bound(consts, k, CUBIC if case == CUBIC else QUADRATIC)
        report["thresholds"][str(k)] = t
    return report


def cmd_constants(args) -> int:
    report = constants_report(args.property)
    if args.json:
        print(dumps(report))
    else:
        _print_text(report)
    return 0


def cmd_check_axioms(args) -> int:
    report = check_axioms(builtin(args.property), args.n_max)
    if args.json:
        print(dumps(report.as_dict()))
    else:
        print(f"property: {report.property}  n_max: {report.n_max}")
        for axiom, info in report.as_dict()["axioms"].items():
            print(f"  {axiom}: {'pass' if info['passed'] else 'FAIL'} ({info['checked']} checked)")
            for ce in info["counterexamples"]:
                print(f"    counterexample: {ce}")
    return 0 if report.ok else EXIT_ERROR


def default_policy(pi) -> str:
    return CYCLIC_TRIANGLES if pi.kind == "oriented" else UNIFORM


def cmd_verify(args) -> int:
    pi = builtin(args.property)
    policy = args.policy or default_policy(pi)
    seeds = [int(s) for s in parse_range(args.seeds)]
    ks = parse_range(args.k)
    counts: dict[str, int] = {}
    failures = []
    for seed in seeds:
        g = corpus_graph(seed, pi, policy, args.max_vertices)
        for k in ks:
            try:
                r = equivalence_check(Instance(g, k, pi))
            except ContractViolation as exc:
                failures.append({"seed": seed, "k": k, "violation": exc.payload})
                continue
            except BoundViolation as exc:
                failures.append({"seed": seed, "k": k, "bound_violation": str(exc)})
                continue
            key = f"{r.outcome}:{'yes' if r.answer else 'no'}"
            counts[key] = counts.get(key, 0) + 1
    report = {"property": pi.name, "policy": policy, "seeds": len(seeds), "k": ks,
              "instances": len(seeds) * len(ks), "outcomes": counts,
              "violations": len(failures), "failures": failures[:10]}
    if args.json:
        print(dumps(report))
    else:
        _print_text({k: v for k, v in report.items() if k != "failures"})
        for f in failures[:10]:
            print(f"FAILURE: {_jsonable(f)}")
    return EXIT_ERROR if failures else 0


def bench_rows(name: str, ks, seeds, policy=None, max_vertices: int = 12) -> list[dict]:
    pi = builtin(name)
    policy = policy or default_policy(pi)
    consts = property_constants(pi)
    case = CUBIC if dispatch_case(pi) == CUBIC else QUADRATIC
    graphs = [corpus_graph(s, pi, policy, max_vertices) for s in seeds]
    rows = []
    for k in ks:
        sizes = []
        for g in graphs:
            out = kernelize(Instance(g, k, pi))
            if isinstance(out, Kernel):
                sizes.append(out.g.n)
        bound = kernel_size_bound(consts, k, case)
        avg = mean(sizes) if sizes else 0
        rows.append({"k": k, "instances": len(graphs), "kernels": len(sizes),
                     "mean_kernel_vertices": round(float(avg), 3), "bound": bound,
                     "utilization": f"{avg / bound:.3e}"})
    return rows


def format_table(rows: list[dict], fmt: str) -> str:
    cols = ["k", "instances", "kernels", "mean_kernel_vertices", "bound", "utilization"]
    cells = [[str(_jsonable(r[c])) for c in cols] for r in rows]
    if fmt == "csv":
        return "\n".join([",".join(cols)] + [",".join(c) for c in cells]) + "\n"
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    lines += ["| " + " | ".join(c) + " |" for c in cells]
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    rows = bench_rows(args.property, parse_range(args.k),
                      [int(s) for s in parse_range(args.seeds)], args.policy, args.max_vertices)
    sys.stdout.write(format_table(rows, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aptkernel", description="Kernelization for above-guarantee subgraph problems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("kernelize", help="kernelize one instance")
    k.add_argument("--graph", required=True, help="apt-graph v1 file")
    k.add_argument("--property", required=True, help="bipartite | qcol:q | acyclic-oriented")
    k.add_argument("--k", required=True, help="positive rational p/q with q dividing 4")
    k.add_argument("--json", action="store_true")
    k.add_argument("--timings", action="store_true", help="include wall-clock timings")
    k.add_argument("--write-kernel", metavar="FILE", help="write the kernel graph here")
    k.set_defaults(func=cmd_kernelize)

    c = sub.add_parser("constants", help="print property constants and thresholds")
    c.add_argument("--property", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_constants)

    a = sub.add_parser("check-axioms", help="check the extendibility axioms on small graphs")
    a.add_argument("--property", required=True)
    a.add_argument("--n-max", type=int, default=None)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_check_axioms)

    v = sub.add_parser("verify", help="compare kernelize against brute force on a seeded corpus")
    v.add_argument("--property", required=True)
    v.add_argument("--seeds", default="1..100")
    v.add_argument("--k", default="1..3")
    v.add_argument("--policy", choices=POLICIES, default=None)
    v.add_argument("--max-vertices", type=int, default=12)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="kernel size against bound for a range of k")
    b.add_argument("--property", required=True)
    b.add_argument("--k", default="1..4")
    b.add_argument("--seeds", default="1..20")
    b.add_argument("--policy", choices=POLICIES, default=None)
    b.add_argument("--max-vertices", type=int, default=12)
    b.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, OSError, ValueError, NoDivergenceWitness) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
