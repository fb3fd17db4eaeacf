"""Command-line frontend: invariant reports, moves, classification, the
algebra evaluator, and the built-in verification suite.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
Reports go to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import classify as C
from . import cohn
from . import exprs
from . import graphs as G
from . import k0 as K
from . import moves as M
from . import verify


class InputError(ValueError):
    pass


def _load_graph(ref):
    """A graph argument is either a built-in name or a path to a graph file."""
    if ref in G.builtin_names():
        return G.builtin(ref)
    if not os.path.exists(ref):
        raise InputError("no built-in graph or file named %r (built-ins: %s)"
                         % (ref, ", ".join(G.builtin_names())))
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError("cannot read %r: %s" % (ref, exc)) from None
    try:
        return G.parse_graph(text)
    except G.GraphError as exc:
        where = " (line %d)" % exc.line if getattr(exc, "line", None) else ""
        raise InputError("%s: %s%s" % (ref, exc, where)) from None


def _size_cap(default):
    raw = os.environ.get("LPA_SIZE_CAP")
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError("LPA_SIZE_CAP must be an integer, got %r" % raw)


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.checks = []  # (name, ok, details)
        self.outputs = {}
        self.lines = []

    def check(self, name, ok, details=""):
        self.checks.append((name, bool(ok), details))

    def say(self, line):
        self.lines.append(line)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    def emit(self, as_json, out=None):
        out = out or sys.stdout
        if as_json:
            doc = {
                "command": self.command,
                "inputs": self.inputs,
                "checks": [{"name": n, "status": "pass" if ok else "fail",
                            "details": d} for n, ok, d in self.checks],
                "outputs": self.outputs,
            }
            print(json.dumps(doc, indent=2), file=out)
        else:
            for line in self.lines:
                print(line, file=out)
            for name, ok, details in self.checks:
                mark = "pass" if ok else "FAIL"
                suffix = " (%s)" % details if details else ""
                print("  [%s] %s%s" % (mark, name, suffix), file=out)
        return 0 if self.passed else 1


def _det_text(g):
    """Determinant for sink-free graphs, presentation shape otherwise."""
    if g.vertices and all(g.out_degree(v) > 0 for v in g.vertices):
        return str(K.graph_determinant(g))
    mat = K.presentation_matrix(g)
    return "n/a (%dx%d presentation)" % (mat.rows, mat.cols)


def _invariant_line(g):
    group, _ = K.k0_presentation(g)
    spi = G.is_spi(g)
    return "%s ; det=%s ; SPI=%s" % (
        group.render(), _det_text(g), "yes" if spi.is_spi else "no")


def cmd_info(args):
    g = _load_graph(args.graph)
    rep = Report("info", {"graph": args.graph})
    group, classes = K.k0_presentation(g)
    spi = G.is_spi(g)
    rep.say(_invariant_line(g))
    rep.say("vertices: %d, edges: %d" % (len(g.vertices), len(g.edges)))
    rep.outputs = {
        "k0": group.render(),
        "det": _det_text(g),
        "spi": spi.is_spi,
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "vertex_classes": {v: list(classes[v].coords) for v in g.vertices},
    }
    return rep


def cmd_spi(args):
    g = _load_graph(args.graph)
    rep = Report("spi", {"graph": args.graph})
    spi = G.is_spi(g)
    rep.say("SPI: %s" % ("yes" if spi.is_spi else "no"))
    for tag, payload in spi.failures:
        rep.say("  obstruction: %s %s" % (tag, payload))
    rep.outputs = {"spi": spi.is_spi,
                   "failures": [[tag, list(map(str, payload)) if
                                 isinstance(payload, (list, tuple)) else payload]
                                for tag, payload in spi.failures]}
    return rep


def cmd_k0(args):
    g = _load_graph(args.graph)
    rep = Report("k0", {"graph": args.graph})
    group, classes = K.k0_presentation(g)
    rep.say(group.render())
    for v in g.vertices:
        rep.say("  [%s] = (%s)" % (v, ",".join(str(c) for c in classes[v].coords)))
    rep.outputs = {"k0": group.render(),
                   "free_rank": group.free_rank,
                   "invariant_factors": list(group.invariant_factors),
                   "unit_class": list(group.unit_class),
                   "vertex_classes": {v: list(classes[v].coords)
                                      for v in g.vertices}}
    return rep


def cmd_det(args):
    g = _load_graph(args.graph)
    rep = Report("det", {"graph": args.graph})
    text = _det_text(g)
    rep.say("det(I - A^t) = %s" % text)
    rep.outputs = {"det": text}
    return rep


def cmd_move(args):
    g = _load_graph(args.graph)
    rep = Report("move", {"graph": args.graph, "move": args.move,
                          "at": args.at, "complete_at": args.complete_at})
    if args.move == "cohn":
        if args.complete_at is None:
            raise InputError("move cohn needs --complete-at v1,v2,...")
        params = [v for v in args.complete_at.split(",") if v]
    else:
        if args.at is None:
            raise InputError("move %s needs --at <vertex>" % args.move)
        params = args.at
    try:
        mrep = M.apply_move_with_report(g, args.move, params)
    except M.MoveError as exc:
        raise InputError(str(exc)) from None
    rendered = G.render_graph(mrep.output_graph)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
        rep.say("wrote %s" % args.out)
    else:
        rep.say(rendered.rstrip("\n"))
    rep.say("before: %s" % mrep.before["k0"])
    rep.say("after:  %s" % mrep.after["k0"])
    for name, ok, details in mrep.checks:
        rep.check(name, ok, details)
    rep.outputs = {"before": mrep.before, "after": mrep.after,
                   "graph": json.loads(rendered),
                   "out_path": args.out}
    return rep


def cmd_classify(args):
    g = _load_graph(args.first)
    h = _load_graph(args.second)
    rep = Report("classify", {"first": args.first, "second": args.second})
    verdict = C.compare(g, h, cap=_size_cap(K.DEFAULT_GROUP_CAP))
    rep.say("verdict: %s" % verdict.tag)
    for key, val in sorted(verdict.justification.items()):
        rep.say("  %s: %s" % (key, val))
    rep.outputs = verdict.to_dict()
    return rep


def cmd_algebra(args):
    g = _load_graph(args.graph)
    if args.complete_at is None:
        ctx = cohn.AlgebraContext.leavitt(g)
    else:
        completed = [v for v in args.complete_at.split(",") if v]
        try:
            ctx = cohn.AlgebraContext.relative(g, completed)
        except cohn.AlgebraError as exc:
            raise InputError(str(exc)) from None
    rep = Report("algebra", {"graph": args.graph,
                             "complete_at": args.complete_at,
                             "expression": args.expression})
    try:
        x = exprs.parse_expression(ctx, args.expression)
    except exprs.ParseError as exc:
        raise InputError(str(exc)) from None
    except cohn.ResourceError as exc:
        raise InputError(str(exc)) from None
    text = cohn.format_element(x)
    rep.say(text)
    rep.outputs = {"normal_form": text}
    return rep


def cmd_verify_paper(args):
    rep = Report("verify-paper", {"filter": args.filter})
    known = verify.blocks()
    if args.filter is not None and args.filter not in known:
        raise InputError("unknown block %r (known: %s)"
                         % (args.filter, ", ".join(known)))
    rows = verify.full_suite()
    for block, name, ok, details in rows:
        if args.filter is not None and block != args.filter:
            continue
        rep.check("%s: %s" % (block, name), ok, details)
    rep.outputs = {"total": len(rep.checks),
                   "failed": sum(1 for _, ok, _ in rep.checks if not ok)}
    return rep


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lpa",
        description="Invariants, moves, and symbolic checks for graph algebras")
    parser.add_argument("--json", action="store_true",
                        help="emit the report as JSON")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def graph_cmd(name, help_text, func):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="built-in graph name or path to a graph file")
        p.set_defaults(func=func)
        return p

    graph_cmd("info", "invariant summary for a graph", cmd_info)
    graph_cmd("spi", "check the simple purely-infinite criteria", cmd_spi)
    graph_cmd("k0", "pointed K0 presentation and vertex classes", cmd_k0)
    graph_cmd("det", "det(I - A^t), or the presentation shape", cmd_det)

    p = sub.add_parser("move", help="apply a graph move and verify its effect")
    p.add_argument("move", choices=sorted(M.MOVES))
    p.add_argument("graph")
    p.add_argument("--at", help="vertex for splice and source moves")
    p.add_argument("--complete-at",
                   help="comma-separated vertex set V for the cohn move")
    p.add_argument("--out", help="write the output graph to this path")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("classify", help="compare two graphs by invariants")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("algebra", help="normalize an algebra expression")
    p.add_argument("graph")
    p.add_argument("expression")
    p.add_argument("--complete-at",
                   help="vertex set V defining the relative algebra "
                        "(default: all regular vertices)")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("verify-paper",
                       help="re-run every built-in identity check")
    p.add_argument("--filter", help="run only one block: %s"
                   % ", ".join(verify.blocks()))
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except G.GraphError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (cohn.AlgebraError, K.CapExceeded, G.SizeLimitError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return rep.emit(args.json)


if __name__ == "__main__":
    sys.exit(main())
