"""Open strings on a finite directed graph.

The ambient space is a directed multigraph, objects are vertex subsets,
and an open string state is a formal sum of edge paths from one object
to another.  Composition concatenates paths whose junction matches, and
cutting splits a path at its interior visits to a label.  The headline
identity is exact, junction term included:

    cut(p.q, L) = cut(p, L).q + p.cut(q, L) + junction_term(p, q, L)

where the junction term is p (x) q exactly when the junction vertex lies
in L *and* is an interior visit of the composite, i.e. both factors have
positive length (a constant factor puts the junction on the boundary,
where interior cutting cannot see it).  So the derivation compatibility
of composition and cutting holds on the nose precisely when junctions
avoid the cutting label, and the boundary cuts vanish precisely when
endpoints avoid it.  Constant (length-zero) paths are genuine states:
they are the identities and the output of the boundary cuts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dialgebra import AxiomReport, Witness
from .linear import FormalSum, tensor
from .textio import DEFAULT_SEED, FormatError, iter_statements

__all__ = [
    "AmbientGraph",
    "GraphPath",
    "LabelMismatchError",
    "PathChain",
    "chain",
    "compose",
    "cut_at_index",
    "cut_boundary",
    "cut_interior",
    "cut_pairs_left",
    "cut_pairs_right",
    "GraphSuiteResult",
    "enumerate_paths",
    "graph_suite",
    "identity",
    "junction_term",
    "pair_compose_left",
    "pair_compose_right",
    "parse_graph",
    "random_graph",
    "random_label",
    "restrict_end",
    "restrict_start",
    "serialize_graph",
]


class LabelMismatchError(ValueError):
    """Composition of chains whose junction labels differ."""


@dataclass(frozen=True)
class GraphPath:
    """An edge path: a start vertex and a composable edge sequence.

    The empty edge sequence is the constant path at the start vertex.
    """

    start: str
    edges: tuple

    degree = 0

    def sort_key(self):
        return (len(self.edges), self.start, self.edges)

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return ".".join(self.edges) if self.edges else f"@{self.start}"


class AmbientGraph:
    """A finite directed multigraph with named vertices, edges, labels."""

    def __init__(self, name, vertices, edges, labels=()):
        self.name = str(name)
        self.vertices = frozenset(str(v) for v in vertices)
        cleaned = {}
        for eid, (src, dst) in dict(edges).items():
            eid, src, dst = str(eid), str(src), str(dst)
            if src not in self.vertices or dst not in self.vertices:
                raise ValueError(f"edge {eid} uses undeclared vertices")
            cleaned[eid] = (src, dst)
        self.edges = cleaned
        named = {}
        for lname, verts in dict(labels).items():
            verts = frozenset(str(v) for v in verts)
            if not verts <= self.vertices:
                raise ValueError(f"label {lname} uses undeclared vertices")
            named[str(lname)] = verts
        self.labels = named

    def label(self, name):
        try:
            return self.labels[name]
        except KeyError:
            known = ", ".join(sorted(self.labels)) or "(none)"
            raise ValueError(f"unknown label {name!r}; known labels: {known}") from None

    def as_label(self, value):
        """A vertex subset from a label name or an iterable of vertices."""
        if isinstance(value, str):
            return self.label(value)
        verts = frozenset(str(v) for v in value)
        if not verts <= self.vertices:
            raise ValueError("label is not a subset of the graph's vertices")
        return verts

    def path(self, start, edges=()):
        """A validated GraphPath; edges must chain and start must match."""
        start = str(start)
        if start not in self.vertices:
            raise ValueError(f"unknown vertex {start!r}")
        at = start
        out = []
        for eid in edges:
            eid = str(eid)
            if eid not in self.edges:
                raise ValueError(f"unknown edge {eid!r}")
            src, dst = self.edges[eid]
            if src != at:
                raise ValueError(f"edge {eid} starts at {src}, path is at {at}")
            out.append(eid)
            at = dst
        return GraphPath(start, tuple(out))

    def parse_path(self, text):
        """Parse '@v' (constant) or 'e1.e2.e3' (edge sequence)."""
        text = text.strip()
        if text.startswith("@"):
            return self.path(text[1:])
        edges = text.split(".")
        first = edges[0]
        if first not in self.edges:
            raise ValueError(f"unknown edge {first!r}")
        return self.path(self.edges[first][0], edges)

    def path_end(self, p):
        return self.edges[p.edges[-1]][1] if p.edges else p.start

    def path_vertices(self, p):
        """The visited vertex sequence v0..vk."""
        out = [p.start]
        for eid in p.edges:
            out.append(self.edges[eid][1])
        return tuple(out)

    def __repr__(self):
        return (f"AmbientGraph({self.name!r}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)})")


@dataclass(frozen=True)
class PathChain:
    """An open string state: paths from the domain object to the codomain."""

    graph: AmbientGraph
    domain: frozenset
    codomain: frozenset
    sum: FormalSum

    def __post_init__(self):
        for p, _ in self.sum.iterterms():
            if p.start not in self.domain:
                raise ValueError(f"path {p} does not start in the domain")
            if self.graph.path_end(p) not in self.codomain:
                raise ValueError(f"path {p} does not end in the codomain")

    @property
    def is_zero(self):
        return self.sum.is_zero

    def with_sum(self, new_sum):
        return PathChain(self.graph, self.domain, self.codomain, new_sum)


def chain(graph, domain, codomain, paths):
    """Convenience: a PathChain from (path, coefficient) pairs or paths."""
    terms = []
    for item in paths:
        if isinstance(item, GraphPath):
            terms.append((item, 1))
        else:
            terms.append(item)
    return PathChain(graph, graph.as_label(domain), graph.as_label(codomain),
                     FormalSum(terms))


def _compose_sums(graph, s1, s2):
    acc = {}
    for p, cp in s1.iterterms():
        end = graph.path_end(p)
        for q, cq in s2.iterterms():
            if q.start == end:
                t = GraphPath(p.start, p.edges + q.edges)
                c = cp * cq
                prev = acc.get(t)
                acc[t] = c if prev is None else prev + c
    return FormalSum(acc)


def compose(x, y):
    """Concatenate matching paths; the junction labels must agree."""
    if x.graph is not y.graph:
        raise ValueError("chains live on different graphs")
    if x.codomain != y.domain:
        raise LabelMismatchError("label mismatch: codomain of the first chain "
                                 "differs from domain of the second")
    return PathChain(x.graph, x.domain, y.codomain,
                     _compose_sums(x.graph, x.sum, y.sum))


def identity(graph, label):
    """The sum of constant paths over the object: the unit of composition."""
    verts = graph.as_label(label)
    return PathChain(graph, verts, verts,
                     FormalSum((GraphPath(v, ()), 1) for v in sorted(verts)))


def restrict_start(x, sub):
    """Keep the terms starting in the subobject."""
    sub = x.graph.as_label(sub)
    if not sub <= x.domain:
        raise ValueError("restriction target is not a subset of the domain")
    kept = FormalSum((p, c) for p, c in x.sum.iterterms() if p.start in sub)
    return PathChain(x.graph, sub, x.codomain, kept)


def restrict_end(x, sub):
    """Keep the terms ending in the subobject."""
    sub = x.graph.as_label(sub)
    if not sub <= x.codomain:
        raise ValueError("restriction target is not a subset of the codomain")
    kept = FormalSum((p, c) for p, c in x.sum.iterterms()
                     if x.graph.path_end(p) in sub)
    return PathChain(x.graph, x.domain, sub, kept)


def _cut_term(graph, p, i):
    prefix = GraphPath(p.start, p.edges[:i])
    suffix = GraphPath(graph.path_end(prefix), p.edges[i:])
    return (prefix, suffix)


def _state_sum(x, graph=None):
    """The FormalSum behind a PathChain, or a raw sum/path passed directly."""
    if isinstance(x, PathChain):
        return x.graph, x.sum
    if isinstance(x, GraphPath):
        return graph, FormalSum.term(x)
    return graph, x


def cut_interior(x, label, graph=None):
    """Split each path at every interior visit to the label.

    Returns a sum of 2-tensors prefix (x) suffix; endpoints do not count
    as cutting sites.
    """
    graph, s = _state_sum(x, graph)
    return _cut_sum_interior(graph, s, graph.as_label(label))


def cut_at_index(x, i, label, graph=None):
    """Split at one fixed interior index, when that vertex is in the label."""
    if i < 0:
        raise ValueError("cut index must be nonnegative")
    graph, s = _state_sum(x, graph)
    verts = graph.as_label(label)
    acc = {}
    for p, c in s.iterterms():
        if 0 < i < len(p.edges) and graph.path_vertices(p)[i] in verts:
            t = _cut_term(graph, p, i)
            prev = acc.get(t)
            acc[t] = c if prev is None else prev + c
    return FormalSum(acc)


def cut_boundary(x, which, label, graph=None):
    """Split off a constant path at the start or end when it lies in the
    label: the boundary (time 0 / time 1) cuts."""
    if which not in ("start", "end"):
        raise ValueError("which must be 'start' or 'end'")
    graph, s = _state_sum(x, graph)
    verts = graph.as_label(label)
    acc = {}
    for p, c in s.iterterms():
        if which == "start":
            if p.start in verts:
                t = (GraphPath(p.start, ()), p)
                acc[t] = acc.get(t, 0) + c
        else:
            end = graph.path_end(p)
            if end in verts:
                t = (p, GraphPath(end, ()))
                acc[t] = acc.get(t, 0) + c
    return FormalSum(acc)


def junction_term(graph, p, q, label):
    """The junction correction of the cut-of-composition identity.

    Equals p (x) q when the junction vertex (end of p = start of q) lies
    in the label and is a genuine interior visit of p.q, which requires
    both factors to have positive length; zero otherwise.
    """
    verts = graph.as_label(label)
    junction = graph.path_end(p)
    if junction != q.start:
        raise ValueError("paths do not compose at a common junction")
    if p.edges and q.edges and junction in verts:
        return tensor(FormalSum.term(p), FormalSum.term(q))
    return FormalSum.zero()


# -- tensor-level helpers (module actions and double cuts) -------------------


def pair_compose_right(graph, t, y):
    """(p (x) q).y = p (x) (q.y) on sums of path 2-tensors."""
    ysum = y.sum if isinstance(y, PathChain) else y
    acc = FormalSum.zero()
    for (p, q), c in t.iterterms():
        right = _compose_sums(graph, FormalSum.term(q), ysum)
        if right:
            acc = acc + c * tensor(FormalSum.term(p), right)
    return acc


def pair_compose_left(graph, x, t):
    """x.(p (x) q) = (x.p) (x) q on sums of path 2-tensors."""
    xsum = x.sum if isinstance(x, PathChain) else x
    acc = FormalSum.zero()
    for (p, q), c in t.iterterms():
        left = _compose_sums(graph, xsum, FormalSum.term(p))
        if left:
            acc = acc + c * tensor(left, FormalSum.term(q))
    return acc


def _cut_sum_interior(graph, s, verts):
    acc = {}
    for p, c in s.iterterms():
        visited = graph.path_vertices(p)
        for i in range(1, len(p.edges)):
            if visited[i] in verts:
                t = _cut_term(graph, p, i)
                acc[t] = acc.get(t, 0) + c
    return FormalSum(acc)


def cut_pairs_left(graph, t, label):
    """(cut (x) id): cut the first factor of each 2-tensor, giving 3-tensors."""
    verts = graph.as_label(label)
    acc = FormalSum.zero()
    for (p, q), c in t.iterterms():
        cp = _cut_sum_interior(graph, FormalSum.term(p), verts)
        if cp:
            acc = acc + c * tensor(cp, FormalSum.term(q))
    return acc


def cut_pairs_right(graph, t, label):
    """(id (x) cut): cut the second factor of each 2-tensor."""
    verts = graph.as_label(label)
    acc = FormalSum.zero()
    for (p, q), c in t.iterterms():
        cq = _cut_sum_interior(graph, FormalSum.term(q), verts)
        if cq:
            acc = acc + c * tensor(FormalSum.term(p), cq)
    return acc


# -- populations -------------------------------------------------------------


def enumerate_paths(graph, max_len):
    """Every path of length 0..max_len, in canonical order."""
    by_source = {}
    for eid, (src, _) in graph.edges.items():
        by_source.setdefault(src, []).append(eid)
    for src in by_source:
        by_source[src].sort()
    out = [GraphPath(v, ()) for v in sorted(graph.vertices)]
    frontier = list(out)
    for _ in range(max_len):
        grown = []
        for p in frontier:
            at = graph.path_end(p)
            for eid in by_source.get(at, ()):
                grown.append(GraphPath(p.start, p.edges + (eid,)))
        out.extend(grown)
        frontier = grown
    return out


def random_graph(rng, max_vertices=5, max_edges=8, name=None):
    """A seeded random multigraph with every vertex subset sampleable."""
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(1, n + 1)]
    m = rng.randint(1, max_edges)
    edges = {}
    for k in range(1, m + 1):
        edges[f"e{k}"] = (rng.choice(vertices), rng.choice(vertices))
    return AmbientGraph(name or "random", vertices, edges)


def random_label(rng, graph):
    verts = sorted(graph.vertices)
    return frozenset(v for v in verts if rng.random() < 0.5)


GRAPH_SUITE_LAWS = (
    "associativity",
    "unit",
    "junction-cut",
    "derivation-off-label",
    "fixed-index",
    "double-cut",
)


@dataclass
class GraphSuiteResult:
    """Outcome of the seeded random-graph identity suite."""

    graph_count: int
    seed: int
    counts: dict
    reports: dict

    @property
    def ok(self):
        return all(r.holds for r in self.reports.values())


def graph_suite(count=50, max_len=4, seed=DEFAULT_SEED, max_vertices=5,
                max_edges=8, pair_limit=150, pair_cap=120, triple_limit=60,
                triple_cap=40):
    """Check the composition/cut identities on seeded random graphs.

    Per graph, unit laws run over every path of length <= max_len.  The
    pair identities (cut of a composition with its junction term, the
    derivation form off the label, the fixed-index identity) and the
    double-cut coassociativity run over all composable pairs drawn from
    the full path set, or from a seeded subsample of ``pair_cap`` paths
    when the graph is dense enough to exceed ``pair_limit`` paths (a
    many-loop rose has thousands).  Associativity runs over composable
    triples with the same density safeguard, plus multi-term random
    chains to exercise bilinearity.
    """
    rng = random.Random(seed)
    counts = dict.fromkeys(GRAPH_SUITE_LAWS, 0)
    reports = {law: AxiomReport(law, True, None) for law in GRAPH_SUITE_LAWS}

    def fail(law, inputs, lhs, rhs, detail):
        if reports[law].holds:
            reports[law] = AxiomReport(law, False,
                                       Witness(tuple(inputs), lhs, rhs, detail))

    def term(p):
        return FormalSum.term(p)

    for gi in range(count):
        graph = random_graph(rng, max_vertices, max_edges, name=f"g{gi}")
        label = random_label(rng, graph)
        first = random_label(rng, graph)
        second = frozenset(v for v in sorted(graph.vertices)
                           if v not in first and rng.random() < 0.5)
        where = (f"graph {graph.name}, label {{{', '.join(sorted(label))}}}")
        paths = enumerate_paths(graph, max_len)
        pair_pool = (paths if len(paths) <= pair_limit
                     else rng.sample(paths, pair_cap))
        triple_pool = (paths if len(paths) <= triple_limit
                       else rng.sample(paths, triple_cap))

        def by_start(pool):
            grouped = {}
            for p in pool:
                grouped.setdefault(p.start, []).append(p)
            return grouped

        # unit laws, exhaustively
        ids = FormalSum((GraphPath(v, ()), 1) for v in sorted(graph.vertices))
        for p in paths:
            counts["unit"] += 1
            left = _compose_sums(graph, ids, term(p))
            right = _compose_sums(graph, term(p), ids)
            if left != term(p) or right != term(p):
                fail("unit", (p,), left, right, f"graph {graph.name}")

        # associativity over composable triples (basis level) ...
        grouped = by_start(triple_pool)
        for a in triple_pool:
            for b in grouped.get(graph.path_end(a), ()):
                ab = GraphPath(a.start, a.edges + b.edges)
                for c in grouped.get(graph.path_end(b), ()):
                    counts["associativity"] += 1
                    left = GraphPath(a.start, ab.edges + c.edges)
                    right = GraphPath(a.start, a.edges + b.edges + c.edges)
                    if left != right:
                        fail("associativity", (a, b, c), term(left),
                             term(right), f"graph {graph.name}")
        # ... and on random multi-term chains (bilinearity)
        for _ in range(10):
            sums = []
            for _ in range(3):
                picks = [(rng.choice(paths), rng.randint(1, 3)),
                         (rng.choice(paths), rng.randint(-3, -1))]
                sums.append(FormalSum(picks))
            s1, s2, s3 = sums
            counts["associativity"] += 1
            left = _compose_sums(graph, _compose_sums(graph, s1, s2), s3)
            right = _compose_sums(graph, s1, _compose_sums(graph, s2, s3))
            if left != right:
                fail("associativity", ("chains",), left, right,
                     f"graph {graph.name}")

        # pair identities over composable pairs
        grouped = by_start(pair_pool)
        for a in pair_pool:
            for b in grouped.get(graph.path_end(a), ()):
                ab = term(GraphPath(a.start, a.edges + b.edges))
                lhs = _cut_sum_interior(graph, ab, label)
                base = (pair_compose_right(
                            graph, _cut_sum_interior(graph, term(a), label),
                            term(b))
                        + pair_compose_left(
                            graph, term(a),
                            _cut_sum_interior(graph, term(b), label)))
                counts["junction-cut"] += 1
                expected = base + junction_term(graph, a, b, label)
                if lhs != expected:
                    fail("junction-cut", (a, b), lhs, expected, where)
                if graph.path_end(a) not in label:
                    counts["derivation-off-label"] += 1
                    if lhs != base:
                        fail("derivation-off-label", (a, b), lhs, base, where)
                for i in range(1, len(a.edges)):
                    counts["fixed-index"] += 1
                    left = cut_at_index(ab, i, label, graph)
                    right = pair_compose_right(
                        graph, cut_at_index(term(a), i, label, graph), term(b))
                    if left != right:
                        fail("fixed-index", (a, b, i), left, right, where)

        # double interior cuts with disjoint labels commute
        pair_label = (f"graph {graph.name}, labels "
                      f"{{{', '.join(sorted(first))}}} / "
                      f"{{{', '.join(sorted(second))}}}")
        for p in pair_pool:
            counts["double-cut"] += 1
            left = cut_pairs_left(
                graph, _cut_sum_interior(graph, term(p), second), first)
            right = cut_pairs_right(
                graph, _cut_sum_interior(graph, term(p), first), second)
            if left != right:
                fail("double-cut", (p,), left, right, pair_label)

    return GraphSuiteResult(graph_count=count, seed=seed, counts=counts,
                            reports=reports)


# -- text format -------------------------------------------------------------
#
#   graph <name>
#   vertex <id>
#   edge <id> <from> <to>
#   label <name> <v1> <v2> ...


def parse_graph(text):
    name = None
    vertices = []
    edges = {}
    labels = {}
    for lineno, tokens in iter_statements(text):
        head = tokens[0]
        if name is None:
            if head != "graph" or len(tokens) != 2:
                raise FormatError(lineno, "expected header 'graph <name>'")
            name = tokens[1]
            continue
        if head == "graph":
            raise FormatError(lineno, "duplicate 'graph' header")
        if head == "vertex":
            if len(tokens) != 2:
                raise FormatError(lineno, "expected 'vertex <id>'")
            if tokens[1] in vertices:
                raise FormatError(lineno, f"duplicate vertex {tokens[1]!r}")
            vertices.append(tokens[1])
        elif head == "edge":
            if len(tokens) != 4:
                raise FormatError(lineno, "expected 'edge <id> <from> <to>'")
            eid, src, dst = tokens[1:]
            if eid in edges:
                raise FormatError(lineno, f"duplicate edge {eid!r}")
            if src not in vertices or dst not in vertices:
                raise FormatError(lineno, f"edge {eid} uses undeclared vertices")
            edges[eid] = (src, dst)
        elif head == "label":
            if len(tokens) < 2:
                raise FormatError(lineno, "expected 'label <name> <v1> ...'")
            lname = tokens[1]
            if lname in labels:
                raise FormatError(lineno, f"duplicate label {lname!r}")
            for v in tokens[2:]:
                if v not in vertices:
                    raise FormatError(lineno, f"label {lname} uses undeclared vertex {v!r}")
            labels[lname] = frozenset(tokens[2:])
        else:
            raise FormatError(lineno, f"unknown statement {head!r}")
    if name is None:
        raise FormatError(1, "missing 'graph <name>' header")
    return AmbientGraph(name, vertices, edges, labels)


def serialize_graph(graph):
    lines = [f"graph {graph.name}"]
    for v in sorted(graph.vertices):
        lines.append(f"vertex {v}")
    for eid in sorted(graph.edges):
        src, dst = graph.edges[eid]
        lines.append(f"edge {eid} {src} {dst}")
    for lname in sorted(graph.labels):
        verts = " ".join(sorted(graph.labels[lname]))
        lines.append(f"label {lname} {verts}".rstrip())
    return "\n".join(lines) + "\n"
