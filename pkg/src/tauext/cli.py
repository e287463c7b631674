"""Command line: ``tauext {enumerate,tau,extend,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 a resource cap was
hit, 3 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__, formats, homology
from .algebra import AlgebraError
from .opext import VerificationReport, extend, verify_extension_theorems
from .rep import OracleCapExceeded, loewy_word
from .tautilt import DEFAULT_NODE_CAP, CapExceeded, STPoset, enumerate_stau, is_sincere

EXIT_OK, EXIT_FAIL, EXIT_CAP, EXIT_INPUT = 0, 1, 2, 3
DEFAULT_DIM_CAP = 64


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        with open(p, "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()


def algebra_summary(alg) -> dict:
    return {
        "field": alg.p,
        "vertices": list(alg.vertices),
        "arrows": [[a.name, a.source, a.target] for a in alg.quiver.arrows],
        "relations": [r.text() for r in alg.relations],
        "dim": alg.dim,
    }


def enumeration_document(poset: STPoset, digest: str = "") -> dict:
    reg = poset.registry
    nodes = []
    for i, pair in enumerate(poset.nodes):
        nodes.append({
            "id": i,
            "level": poset.levels[i],
            "label": poset.node_label(i),
            "summands": poset.summand_labels(i),
            "summand_dims": [list(reg.modules[k].dims) for k in poset.node_summand_ids[i]],
            "projective": pair.proj_names,
            "semibrick": poset.semibrick_labels(i),
            "sincere": is_sincere(pair.module),
        })
    edges = [{"from": a, "to": b, "mutated": reg.labels[k]} for a, b, k in poset.edges]
    return {
        "tool": "tauext",
        "version": __version__,
        "command": "enumerate",
        "input_sha256": digest,
        "algebra": algebra_summary(poset.algebra),
        "counts": {"nodes": len(nodes), "edges": len(edges)},
        "nodes": nodes,
        "edges": edges,
    }


def verification_document(report: VerificationReport, digest: str = "") -> dict:
    a, b = report.counts
    return {
        "tool": "tauext",
        "version": __version__,
        "command": "verify",
        "input_sha256": digest,
        "algebra": algebra_summary(report.ext.A),
        "extension": algebra_summary(report.ext.B),
        "module": loewy_word(report.ext.X),
        "counts": {"A": a, "B": b},
        "count_line": report.count_line(),
        "all_passed": report.all_passed,
        "checks": [{"node": r.node, "label": r.label, "check": r.check, "status": r.status, "witness": r.witness}
                   for r in report.rows],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _dot_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(poset: STPoset, name: str = "stau") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=box];"]
    for i in range(len(poset)):
        bricks = "{" + ", ".join(poset.semibrick_labels(i)) + "}"
        label = _dot_string(poset.node_label(i))[:-1] + "\\n" + _dot_string(bricks)[1:]
        lines.append(f"  n{i} [label={label}];")
    for a, b, k in poset.edges:
        lines.append(f"  n{a} -> n{b} [label={_dot_string(poset.registry.labels[k])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_enumerate(args) -> int:
    alg = formats.read_algebra(args.algebra, args.field)
    poset = enumerate_stau(alg, args.max_nodes, workers=args.workers, dim_cap=args.dim_cap)
    doc = enumeration_document(poset, _digest([args.algebra]))
    if args.json:
        _write(args.json, dumps(doc))
    if args.dot:
        _write(args.dot, to_dot(poset))
    if not args.json or args.json != "-":
        print(f"{len(poset)} support tau-tilting pairs, {len(poset.edges)} arrows")
        for n in doc["nodes"]:
            print(f"  {n['id']:>3}  {n['label']:<24} bricks {{{', '.join(n['semibrick'])}}}")
        for e in doc["edges"]:
            print(f"  {e['from']} -> {e['to']}  ({e['mutated']})")
    return EXIT_OK


def cmd_tau(args) -> int:
    alg = formats.read_algebra(args.algebra, args.field)
    m = formats.read_module(args.module, alg)
    t = homology.tau_inv(m) if args.inverse else homology.tau(m).module
    print(f"{loewy_word(t)}  dim {' '.join(map(str, t.dims))}")
    return EXIT_OK


def cmd_extend(args) -> int:
    alg = formats.read_algebra(args.algebra, args.field)
    m = formats.read_module(args.module, alg)
    ext = extend(alg, m, args.vertex_name)
    text = formats.emit_algebra(ext.B)
    _write(args.output or "-", text)
    return EXIT_OK


def cmd_verify(args) -> int:
    alg = formats.read_algebra(args.algebra, args.field)
    m = formats.read_module(args.module, alg)
    report = verify_extension_theorems(alg, m, node_cap=args.max_nodes, dim_cap=args.dim_cap,
                                       vertex_name=args.vertex_name, workers=args.workers)
    if args.json:
        _write(args.json, dumps(verification_document(report, _digest([args.algebra, args.module]))))
    if not args.json or args.json != "-":
        print(f"{'node':>4}  {'pair':<24} check  status  witness")
        for r in report.rows:
            node = "" if r.node < 0 else str(r.node)
            print(f"{node:>4}  {r.label:<24} {r.check:<5}  {r.status:<6}  {r.witness}")
        print(report.count_line())
        print("all checks passed" if report.all_passed else f"{len(report.failures())} checks failed")
    return EXIT_OK if report.all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tauext", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tauext {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="prime p; overrides the algebra file")
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--max-nodes", type=int, default=DEFAULT_NODE_CAP)
    caps.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    caps.add_argument("--workers", type=int, default=1)
    caps.add_argument("--json", metavar="PATH", help="write the JSON result document ('-' for stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common, caps], help="support tau-tilting pairs and Hasse arrows")
    p.add_argument("algebra")
    p.add_argument("--dot", metavar="PATH", help="write the Hasse quiver in DOT")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("tau", parents=[common], help="AR translate of a module")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("--inverse", action="store_true", help="compute the inverse translate instead")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("extend", parents=[common], help="one-point extension A[X] as an algebra file")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("--vertex-name", default="a")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", parents=[common, caps], help="check the lifting statements for A[X]")
    p.add_argument("algebra")
    p.add_argument("module")
    p.add_argument("--vertex-name", default="a")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CapExceeded, OracleCapExceeded) as exc:
        print(f"tauext: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except formats.FormatError as exc:
        print(f"tauext: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AlgebraError, ValueError, OSError) as exc:
        print(f"tauext: {exc}", file=sys.stderr)
        return EXIT_INPUT
