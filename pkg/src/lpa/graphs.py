"""Finite directed multigraphs: parsing, structural predicates, isomorphism.

Vertex order is declaration order and fixes all matrix indexing downstream.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .matrices import IntMatrix

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")

DEFAULT_ISO_CAP = 12


class GraphError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class SizeLimitError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple  # vertex identifiers, declaration order
    edges: tuple     # (edge id, source, range) triples, declaration order

    # caches keyed off the frozen payload
    _out: dict = field(default_factory=dict, compare=False, repr=False)
    _in: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        seen_v = set()
        for v in self.vertices:
            if not IDENT_RE.match(v):
                raise GraphError("bad vertex identifier %r" % v)
            if v in seen_v:
                raise GraphError("duplicate vertex identifier %r" % v)
            seen_v.add(v)
        seen_e = set()
        for name, src, rng in self.edges:
            if not IDENT_RE.match(name):
                raise GraphError("bad edge identifier %r" % name)
            if name in seen_e:
                raise GraphError("duplicate edge identifier %r" % name)
            seen_e.add(name)
            if src not in seen_v:
                raise GraphError("edge %r has undeclared source %r" % (name, src))
            if rng not in seen_v:
                raise GraphError("edge %r has undeclared range %r" % (name, rng))
        out = {v: [] for v in self.vertices}
        inn = {v: [] for v in self.vertices}
        for name, src, rng in self.edges:
            out[src].append((name, src, rng))
            inn[rng].append((name, src, rng))
        self._out.update(out)
        self._in.update(inn)

    def out_edges(self, v):
        return list(self._out[v])

    def in_edges(self, v):
        return list(self._in[v])

    def out_degree(self, v):
        return len(self._out[v])

    def has_vertex(self, v):
        return v in self._out

    def edge(self, name):
        for e in self.edges:
            if e[0] == name:
                return e
        raise GraphError("no edge %r" % name)

    def successors(self, v):
        return [e[2] for e in self._out[v]]

    def identifiers(self):
        return set(self.vertices) | {e[0] for e in self.edges}


@dataclass(frozen=True)
class SpiReport:
    is_spi: bool
    failures: tuple  # (tag, payload) pairs

    def __post_init__(self):
        assert self.is_spi == (len(self.failures) == 0)


def _find_line(text, ident):
    needle = '"%s"' % ident
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def parse_graph(text: str) -> Graph:
    """Parse the JSON graph file format; errors carry a line position."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError("syntax error: %s" % exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError('expected an object with "vertices" and "edges" keys')
    vertices = doc["vertices"]
    edges = doc["edges"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError('"vertices" must be an array of identifier strings')
    if not isinstance(edges, list):
        raise GraphError('"edges" must be an array')
    triples = []
    for item in edges:
        if (not isinstance(item, list) or len(item) != 3
                or not all(isinstance(x, str) for x in item)):
            raise GraphError("each edge must be a 3-element array of strings: %r" % (item,))
        triples.append(tuple(item))
    try:
        return Graph(tuple(vertices), tuple(triples))
    except GraphError as exc:
        ident = None
        m = re.search(r"'([^']*)'", str(exc))
        if m:
            ident = m.group(1)
        line = _find_line(text, ident) if ident else None
        raise GraphError(str(exc), line=line) from None


def render_graph(g: Graph) -> str:
    doc = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}
    return json.dumps(doc, indent=2) + "\n"


def regular_vertices(g: Graph):
    """Vertices with out-degree >= 1 (finite graphs: regular = non-sink)."""
    return {v for v in g.vertices if g.out_degree(v) >= 1}


def adjacency_matrix(g: Graph) -> IntMatrix:
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    counts = [[0] * n for _ in range(n)]
    for _, src, rng in g.edges:
        counts[index[src]][index[rng]] += 1
    return IntMatrix.from_rows(counts) if n else IntMatrix.zeros(0, 0)


def _reach_sets(g: Graph):
    """Reachable-vertex set for every vertex (not counting the empty path... v reaches itself)."""
    reach = {}
    for v in g.vertices:
        seen = {v}
        stack = [v]
        while stack:
            w = stack.pop()
            for nxt in g.successors(w):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        reach[v] = seen
    return reach


def strongly_connected_components(g: Graph):
    """SCCs by mutual reachability; fine at desk scale."""
    reach = _reach_sets(g)
    comps = []
    assigned = set()
    for v in g.vertices:
        if v in assigned:
            continue
        comp = tuple(w for w in g.vertices if w in reach[v] and v in reach[w])
        comps.append(comp)
        assigned.update(comp)
    return comps


def _is_cyclic_scc(g: Graph, comp):
    if len(comp) > 1:
        return True
    v = comp[0]
    return any(e[2] == v for e in g.out_edges(v))


def exit_free_cycles(g: Graph):
    """Cycles without an exit: they live in the out-degree-1 functional subgraph."""
    cycles = []
    seen = set()
    for start in g.vertices:
        if start in seen or g.out_degree(start) != 1:
            continue
        chain = []
        pos = {}
        v = start
        while v not in pos and g.out_degree(v) == 1 and v not in seen:
            pos[v] = len(chain)
            chain.append(v)
            v = g.successors(v)[0]
        if v in pos:
            cycles.append(tuple(chain[pos[v]:]))
        seen.update(chain)
    return cycles


def is_spi(g: Graph) -> SpiReport:
    """Simple purely-infinite test for finite graphs.

    True iff no cycle is exit-free, the graph has no sinks and every vertex
    reaches every cyclic strongly connected component, and at least one cycle
    exists.
    """
    failures = []
    for cyc in exit_free_cycles(g):
        failures.append(("cycle-without-exit", cyc))
    sinks = [v for v in g.vertices if g.out_degree(v) == 0]
    for v in sinks:
        failures.append(("sink", v))
    cyclic = [c for c in strongly_connected_components(g) if _is_cyclic_scc(g, c)]
    if not cyclic:
        failures.append(("no cycle", None))
    else:
        reach = _reach_sets(g)
        for v in g.vertices:
            for comp in cyclic:
                if not (reach[v] & set(comp)):
                    failures.append(("unreachable", (v, comp)))
    return SpiReport(not failures, tuple(failures))


def _simple_first_return_cycles(g: Graph, u, limit=None):
    """Simple cycles based at u (distinct intermediate vertices), as edge tuples."""
    found = []

    def dfs(v, path_edges, visited):
        for name, _, rng in g.out_edges(v):
            if rng == u:
                found.append(tuple(path_edges + [name]))
                if limit is not None and len(found) >= limit:
                    return True
            elif rng not in visited:
                if dfs(rng, path_edges + [name], visited | {rng}):
                    return True
        return False

    dfs(u, [], {u})
    return found


def supports_two_return_paths(g: Graph, u) -> bool:
    """Whether u supports at least two return paths.

    Either two distinct simple first-return cycles at u exist, or one exists
    and some intermediate vertex of a first-return cycle lies on a cycle
    avoiding u (which manufactures a second return path).
    """
    if not g.has_vertex(u):
        raise GraphError("no vertex %r" % u)
    cycles = _simple_first_return_cycles(g, u, limit=2)
    if len(cycles) >= 2:
        return True
    if not cycles:
        return False
    rest = Graph(
        tuple(v for v in g.vertices if v != u),
        tuple(e for e in g.edges if e[1] != u and e[2] != u),
    )
    cyclic = set()
    for comp in strongly_connected_components(rest):
        if _is_cyclic_scc(rest, comp):
            cyclic.update(comp)
    intermediates = set()
    for cyc in _simple_first_return_cycles(g, u):
        for name in cyc:
            _, src, rng = g.edge(name)
            if rng != u:
                intermediates.add(rng)
    return bool(intermediates & cyclic)


def _parallel_counts(g: Graph):
    counts = {}
    for _, src, rng in g.edges:
        counts[(src, rng)] = counts.get((src, rng), 0) + 1
    return counts


def graph_isomorphic(g: Graph, h: Graph, max_vertices=DEFAULT_ISO_CAP):
    """Backtracking graph isomorphism; returns (vertex map, edge map) or None.

    Deterministic: first match in backtracking order by declaration.
    """
    if len(g.vertices) > max_vertices or len(h.vertices) > max_vertices:
        raise SizeLimitError(
            "isomorphism search limited to %d vertices" % max_vertices)
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None

    gc, hc = _parallel_counts(g), _parallel_counts(h)

    def profile(graph, counts, v):
        out = sorted(counts[k] for k in counts if k[0] == v)
        inn = sorted(counts[k] for k in counts if k[1] == v)
        return (tuple(out), tuple(inn), counts.get((v, v), 0))

    gprof = {v: profile(g, gc, v) for v in g.vertices}
    hprof = {v: profile(h, hc, v) for v in h.vertices}
    if sorted(gprof.values()) != sorted(hprof.values()):
        return None

    n = len(g.vertices)
    mapping = {}
    used = set()

    def consistent(v, w):
        if gprof[v] != hprof[w]:
            return False
        for v2, w2 in mapping.items():
            if gc.get((v, v2), 0) != hc.get((w, w2), 0):
                return False
            if gc.get((v2, v), 0) != hc.get((w2, w), 0):
                return False
        return gc.get((v, v), 0) == hc.get((w, w), 0)

    def backtrack(i):
        if i == n:
            return True
        v = g.vertices[i]
        for w in h.vertices:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    if not backtrack(0):
        return None

    # edge bijection: pair up parallel classes in declaration order
    h_by_pair = {}
    for e in h.edges:
        h_by_pair.setdefault((e[1], e[2]), []).append(e[0])
    edge_map = {}
    taken = {k: 0 for k in h_by_pair}
    for name, src, rng in g.edges:
        key = (mapping[src], mapping[rng])
        edge_map[name] = h_by_pair[key][taken[key]]
        taken[key] += 1
    return dict(mapping), edge_map


def _fresh(name, taken):
    if name not in taken:
        return name
    k = 2
    while "%s_%d" % (name, k) in taken:
        k += 1
    return "%s_%d" % (name, k)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """g followed by h; h's identifiers are suffixed on collision."""
    taken = g.identifiers()
    vmap, emap = {}, {}
    for v in h.vertices:
        vmap[v] = _fresh(v, taken)
        taken.add(vmap[v])
    for name, _, _ in h.edges:
        emap[name] = _fresh(name, taken)
        taken.add(emap[name])
    vertices = g.vertices + tuple(vmap[v] for v in h.vertices)
    edges = g.edges + tuple(
        (emap[name], vmap[src], vmap[rng]) for name, src, rng in h.edges)
    return Graph(vertices, edges)


_BUILTINS = {}


def _register(name, vertices, edges):
    _BUILTINS[name] = Graph(tuple(vertices), tuple(edges))


_register("E_star",
          ["v1", "v2"],
          [("e1", "v1", "v1"), ("e2", "v1", "v2"),
           ("e3", "v2", "v1"), ("e4", "v2", "v2")])

_register("E_star_star",
          ["w1", "w2", "w3", "w4"],
          [("f1", "w1", "w1"), ("f2", "w1", "w2"), ("f3", "w2", "w1"),
           ("f4", "w2", "w2"), ("f5", "w1", "w3"), ("f6", "w3", "w1"),
           ("f7", "w3", "w3"), ("f8", "w3", "w4"), ("f9", "w4", "w3"),
           ("f10", "w4", "w4")])

_register("F_star",
          ["v1", "v2", "v1'"],
          [("e1", "v1", "v1"), ("e2", "v1", "v2"),
           ("e3", "v2", "v1"), ("e4", "v2", "v2"),
           ("e1'", "v1", "v1'"), ("e3'", "v2", "v1'")])

_register("F_star_star",
          ["w1", "w2", "w3", "w4", "w1'"],
          [("f1", "w1", "w1"), ("f2", "w1", "w2"), ("f3", "w2", "w1"),
           ("f4", "w2", "w2"), ("f5", "w1", "w3"), ("f6", "w3", "w1"),
           ("f7", "w3", "w3"), ("f8", "w3", "w4"), ("f9", "w4", "w3"),
           ("f10", "w4", "w4"),
           ("f1'", "w1", "w1'"), ("f3'", "w2", "w1'"), ("f6'", "w3", "w1'")])

_register("R3",
          ["u"],
          [("g1", "u", "u"), ("g2", "u", "u"), ("g3", "u", "u")])


def builtin(name: str) -> Graph:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise GraphError("unknown builtin graph %r (known: %s)"
                         % (name, ", ".join(sorted(_BUILTINS)))) from None


def builtin_names():
    return sorted(_BUILTINS)
