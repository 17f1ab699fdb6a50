"""Positive-boundary two-dimensional TQFT over a dialgebra.

A bordism is a DAG of four generators: pants (2 in, 1 out, interpreted
as the product), copants (1 in, 2 out, the coproduct), cylinder (the
identity) and twist (the graded swap).  Both boundaries stay positive:
every DAG has at least one input and one output, and there are no cap
or cup generators.

Evaluation interprets the DAG as a linear map and applies it to an
input tensor, Koszul signs included.  Every connected DAG has a
topological type (genus, inputs, outputs); the canonical evaluation
builds the fold-handles-unfold normal form of that type.  Decomposition
independence -- every DAG of one type evaluating identically -- is
exactly the property gated by ``gate_frobenius``; ``invariance_scan``
tests it over seeded families of DAGs generated from the normal form by
type-preserving local moves, and doubles as the sensitivity harness for
dialgebras that fail the gate.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field

from .linear import FormalSum, _components
from .textio import DEFAULT_SEED, FormatError, iter_statements

__all__ = [
    "BordismDag",
    "InvarianceFailure",
    "InvarianceReport",
    "KIND_ARITY",
    "TopologicalType",
    "TqftGateWarning",
    "canonical_eval",
    "evaluate",
    "gate_frobenius",
    "invariance_scan",
    "normal_form",
    "parse_bordism",
    "random_decomposition",
    "serialize_bordism",
    "topological_type",
]

KIND_ARITY = {
    "pants": (2, 1),
    "copants": (1, 2),
    "cylinder": (1, 1),
    "twist": (2, 2),
}

GATE_AXIOMS = {
    "closed": ("associativity", "coassociativity", "commutativity",
               "cocommutativity", "module"),
    "open": ("associativity", "coassociativity", "module"),
}


class TqftGateWarning(UserWarning):
    """A canonical evaluation ran on a dialgebra failing the gate."""


@dataclass(frozen=True)
class TopologicalType:
    """The homeomorphism type of a connected positive-boundary bordism."""

    genus: int
    inputs: int
    outputs: int
    connected: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.inputs < 1 or self.outputs < 1:
            raise ValueError("positive boundary requires inputs >= 1 and "
                             "outputs >= 1")

    def __str__(self):
        return f"(g={self.genus}, m={self.inputs}, n={self.outputs})"


# -- ports --------------------------------------------------------------------
#
# A producer port is ("in", k) or (node, "out", k); a consumer port is
# ("out", k) or (node, "in", k).  Wires map each consumer to the unique
# producer feeding it.  Port indices are 1-based.


def _render_port(port):
    if len(port) == 2:
        return f"{port[0]}.{port[1]}"
    node, side, k = port
    return f"{node}.{side}.{k}"


def _parse_port(text, lineno):
    parts = text.split(".")
    try:
        k = int(parts[-1])
    except ValueError:
        raise FormatError(lineno, f"port {text!r} has no numeric index") from None
    if k < 1:
        raise FormatError(lineno, f"port index in {text!r} must be >= 1")
    if len(parts) == 2 and parts[0] in ("in", "out"):
        return (parts[0], k)
    if len(parts) == 3 and parts[1] in ("in", "out"):
        return (parts[0], parts[1], k)
    raise FormatError(lineno, f"malformed port {text!r}")


def _is_producer(port):
    return (len(port) == 2 and port[0] == "in") or \
           (len(port) == 3 and port[1] == "out")


class BordismDag:
    """A wired DAG of pants/copants/cylinder/twist generators."""

    def __init__(self, name, inputs, outputs, nodes, wires):
        self.name = str(name)
        self.inputs = int(inputs)
        self.outputs = int(outputs)
        if self.inputs < 1 or self.outputs < 1:
            raise ValueError("positive boundary requires at least one input "
                             "and one output")
        self.nodes = {}
        for nid, kind in dict(nodes).items():
            nid = str(nid)
            if kind not in KIND_ARITY:
                raise ValueError(f"unknown generator kind {kind!r}")
            if "." in nid or nid in ("in", "out"):
                raise ValueError(f"invalid node id {nid!r}")
            self.nodes[nid] = kind
        self.wires = dict(wires)
        self._validate_ports()
        self._order = self._topological_order()

    def _producer_ports(self):
        ports = [("in", k) for k in range(1, self.inputs + 1)]
        for nid, kind in self.nodes.items():
            for j in range(1, KIND_ARITY[kind][1] + 1):
                ports.append((nid, "out", j))
        return ports

    def _consumer_ports(self):
        ports = [("out", k) for k in range(1, self.outputs + 1)]
        for nid, kind in self.nodes.items():
            for j in range(1, KIND_ARITY[kind][0] + 1):
                ports.append((nid, "in", j))
        return ports

    def _validate_ports(self):
        consumers = set(self._consumer_ports())
        producers = set(self._producer_ports())
        wired_consumers = set(self.wires)
        if wired_consumers != consumers:
            missing = sorted(map(_render_port, consumers - wired_consumers))
            extra = sorted(map(_render_port, wired_consumers - consumers))
            parts = []
            if missing:
                parts.append("unwired ports: " + ", ".join(missing))
            if extra:
                parts.append("unknown ports: " + ", ".join(extra))
            raise ValueError("; ".join(parts))
        used = list(self.wires.values())
        used_set = set(used)
        if len(used) != len(used_set) or used_set != producers:
            dangling = sorted(map(_render_port, producers - used_set))
            unknown = sorted(map(_render_port, used_set - producers))
            parts = []
            if dangling:
                parts.append("dangling ports: " + ", ".join(dangling))
            if unknown:
                parts.append("unknown ports: " + ", ".join(unknown))
            if not parts:
                parts.append("a port is wired more than once")
            raise ValueError("; ".join(parts))

    def _topological_order(self):
        # node-level dependency edges: producer node -> consumer node
        deps = {nid: set() for nid in self.nodes}
        for consumer, producer in self.wires.items():
            if len(consumer) == 3 and len(producer) == 3:
                deps[consumer[0]].add(producer[0])
        order = []
        ready = sorted(nid for nid, d in deps.items() if not d)
        pending = {nid: set(d) for nid, d in deps.items() if d}
        while ready:
            nid = ready.pop(0)
            order.append(nid)
            newly = []
            for other, d in pending.items():
                d.discard(nid)
                if not d:
                    newly.append(other)
            for other in newly:
                del pending[other]
            ready = sorted(ready + newly)
        if pending:
            raise ValueError("bordism wiring has a cycle")
        return order

    def topological_order(self):
        return list(self._order)

    def __repr__(self):
        return (f"BordismDag({self.name!r}, m={self.inputs}, n={self.outputs}, "
                f"nodes={len(self.nodes)})")


# -- text format --------------------------------------------------------------
#
#   bordism <name>
#   in <m>
#   out <n>
#   node <id> pants|copants|cylinder|twist
#   wire <src-port> <dst-port>


def parse_bordism(text):
    name = None
    inputs = outputs = None
    nodes = {}
    wires = {}
    for lineno, tokens in iter_statements(text):
        head = tokens[0]
        if name is None:
            if head != "bordism" or len(tokens) != 2:
                raise FormatError(lineno, "expected header 'bordism <name>'")
            name = tokens[1]
            continue
        if head == "in" or head == "out":
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FormatError(lineno, f"expected '{head} <count>'")
            count = int(tokens[1])
            if count < 1:
                raise FormatError(lineno, "positive boundary requires at "
                                          f"least one '{head}' port")
            if head == "in":
                inputs = count
            else:
                outputs = count
        elif head == "node":
            if len(tokens) != 3:
                raise FormatError(lineno, "expected 'node <id> <kind>'")
            nid, kind = tokens[1:]
            if kind not in KIND_ARITY:
                raise FormatError(lineno, f"unknown generator kind {kind!r}")
            if nid in nodes:
                raise FormatError(lineno, f"duplicate node {nid!r}")
            if "." in nid or nid in ("in", "out"):
                raise FormatError(lineno, f"invalid node id {nid!r}")
            nodes[nid] = kind
        elif head == "wire":
            if len(tokens) != 3:
                raise FormatError(lineno, "expected 'wire <src> <dst>'")
            src = _parse_port(tokens[1], lineno)
            dst = _parse_port(tokens[2], lineno)
            if not _is_producer(src):
                raise FormatError(lineno, f"{tokens[1]!r} is not a source port")
            if _is_producer(dst):
                raise FormatError(lineno, f"{tokens[2]!r} is not a destination port")
            for port, token in ((src, tokens[1]), (dst, tokens[2])):
                if len(port) == 3:
                    if port[0] not in nodes:
                        raise FormatError(lineno, f"undeclared node {port[0]!r}")
                    a_in, a_out = KIND_ARITY[nodes[port[0]]]
                    if port[2] > (a_out if port[1] == "out" else a_in):
                        raise FormatError(lineno, f"port {token!r} is out of "
                                          f"range for a {nodes[port[0]]} node")
                else:
                    limit = inputs if port[0] == "in" else outputs
                    if limit is not None and port[1] > limit:
                        raise FormatError(lineno,
                                          f"port {token!r} is out of range")
            if dst in wires:
                raise FormatError(lineno,
                                  f"port {tokens[2]!r} wired more than once")
            wires[dst] = src
        else:
            raise FormatError(lineno, f"unknown statement {head!r}")
    if name is None:
        raise FormatError(1, "missing 'bordism <name>' header")
    if inputs is None:
        raise FormatError(1, "missing 'in <m>' declaration")
    if outputs is None:
        raise FormatError(1, "missing 'out <n>' declaration")
    try:
        return BordismDag(name, inputs, outputs, nodes, wires)
    except ValueError as exc:
        raise FormatError(1, str(exc)) from None


def serialize_bordism(dag):
    lines = [f"bordism {dag.name}", f"in {dag.inputs}", f"out {dag.outputs}"]
    for nid in sorted(dag.nodes):
        lines.append(f"node {nid} {dag.nodes[nid]}")
    rendered = sorted((_render_port(dst), _render_port(src))
                      for dst, src in dag.wires.items())
    for dst, src in rendered:
        lines.append(f"wire {src} {dst}")
    return "\n".join(lines) + "\n"


# -- evaluation ---------------------------------------------------------------


def _koszul_reorder_sign(comps, new_order):
    """Sign of reordering tensor factors to positions ``new_order``."""
    sign = 1
    for i in range(len(new_order)):
        di = comps[new_order[i]].degree
        if di % 2 == 0:
            continue
        for j in range(i + 1, len(new_order)):
            if new_order[i] > new_order[j] and comps[new_order[j]].degree % 2:
                sign = -sign
    return sign


def _coerce_input(v, arity):
    if not isinstance(v, FormalSum):
        v = FormalSum.term(v)
    if v.is_zero:
        return v
    if v.arity != arity:
        raise ValueError(f"input has arity {v.arity}, bordism expects {arity}")
    return v


def evaluate(dialgebra, dag, v, sector="closed"):
    """Apply the linear map the DAG denotes to an input tensor.

    The closed sector allows all four generators; the open sector is
    planar and rejects twist nodes.
    """
    if sector not in ("closed", "open"):
        raise ValueError("sector must be 'closed' or 'open'")
    if sector == "open":
        twisted = sorted(n for n, k in dag.nodes.items() if k == "twist")
        if twisted:
            raise ValueError("open-sector bordisms are planar; twist nodes "
                             "not allowed: " + ", ".join(twisted))
    v = _coerce_input(v, dag.inputs)
    if v.is_zero:
        return FormalSum.zero()
    known = set(dialgebra.symbols)
    slots = [("in", k) for k in range(1, dag.inputs + 1)]
    terms = {}
    for term, coeff in v.iterterms():
        comps = _components(term)
        for b in comps:
            if b not in known:
                raise ValueError(f"input symbol {b!r} is not in the "
                                 f"dialgebra basis")
        terms[comps] = terms.get(comps, 0) + coeff

    for nid in dag.topological_order():
        kind = dag.nodes[nid]
        a_in, a_out = KIND_ARITY[kind]
        idx = [slots.index(dag.wires[(nid, "in", j)])
               for j in range(1, a_in + 1)]
        if kind == "cylinder":
            slots[idx[0]] = (nid, "out", 1)
            continue
        rest_pos = [i for i in range(len(slots)) if i not in idx]
        new_order = rest_pos + idx
        new_terms = {}
        for comps, c in terms.items():
            sign = _koszul_reorder_sign(comps, new_order)
            args = tuple(comps[i] for i in idx)
            rest = tuple(comps[i] for i in rest_pos)
            if kind == "pants":
                out_rows = dialgebra.product.row(args)
            elif kind == "copants":
                out_rows = dialgebra.coproduct.row(args)
            else:  # twist
                x, y = args
                tsign = -1 if (x.degree % 2) and (y.degree % 2) else 1
                out_rows = {(y, x): tsign}
            for out, w in out_rows.items():
                key = rest + out
                val = new_terms.get(key, 0) + c * sign * w
                if val:
                    new_terms[key] = val
                elif key in new_terms:
                    del new_terms[key]
        terms = new_terms
        slots = [slots[i] for i in rest_pos]
        slots.extend((nid, "out", j) for j in range(1, a_out + 1))

    out_positions = [slots.index(dag.wires[("out", k)])
                     for k in range(1, dag.outputs + 1)]
    result = {}
    for comps, c in terms.items():
        sign = _koszul_reorder_sign(comps, out_positions)
        key = tuple(comps[i] for i in out_positions)
        val = result.get(key, 0) + c * sign
        if val:
            result[key] = val
        elif key in result:
            del result[key]
    return FormalSum(result)


def gate_frobenius(dialgebra, sector="closed"):
    """The Frobenius gate: the axiom reports decomposition independence
    requires, keyed by axiom name."""
    return {axiom: dialgebra.check(axiom) for axiom in GATE_AXIOMS[sector]}


def gate_ok(reports):
    return all(r.holds for r in reports.values())


def topological_type(dag):
    """The (genus, inputs, outputs) type of a connected DAG.

    Genus comes from Euler-characteristic bookkeeping: pants and copants
    have characteristic -1, cylinders and twists 0, and gluing along
    circles adds, so 2 - 2g - (m + n) = -(pants + copants).
    """
    pants = sum(1 for k in dag.nodes.values() if k == "pants")
    copants = sum(1 for k in dag.nodes.values() if k == "copants")

    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        parent.setdefault(x, x)
        parent.setdefault(y, y)
        parent[find(x)] = find(y)

    def element(port):
        return port[0] if len(port) == 3 else port

    for nid in dag.nodes:
        parent.setdefault(nid, nid)
    for consumer, producer in dag.wires.items():
        union(element(consumer), element(producer))
    roots = {find(x) for x in parent}
    if len(roots) > 1:
        raise ValueError("bordism is not connected")
    doubled = 2 - dag.inputs - dag.outputs + pants + copants
    if doubled % 2:
        raise ValueError("inconsistent Euler characteristic")
    return TopologicalType(doubled // 2, dag.inputs, dag.outputs)


def normal_form(T):
    """The fold-handles-unfold decomposition of a topological type.

    A left comb of pants folds the m inputs, g handle blocks (copants
    then pants) follow, and a right comb of copants unfolds to the n
    outputs.
    """
    nodes = {}
    wires = {}
    producer = ("in", 1)
    for k in range(2, T.inputs + 1):
        nid = f"f{k - 1}"
        nodes[nid] = "pants"
        wires[(nid, "in", 1)] = producer
        wires[(nid, "in", 2)] = ("in", k)
        producer = (nid, "out", 1)
    for i in range(1, T.genus + 1):
        split, join = f"hs{i}", f"hj{i}"
        nodes[split] = "copants"
        nodes[join] = "pants"
        wires[(split, "in", 1)] = producer
        wires[(join, "in", 1)] = (split, "out", 1)
        wires[(join, "in", 2)] = (split, "out", 2)
        producer = (join, "out", 1)
    if T.outputs == 1:
        wires[("out", 1)] = producer
    else:
        for k in range(1, T.outputs):
            nid = f"u{k}"
            nodes[nid] = "copants"
            wires[(nid, "in", 1)] = producer
            wires[("out", k)] = (nid, "out", 1)
            producer = (nid, "out", 2)
        wires[("out", T.outputs)] = producer
    name = f"normal-g{T.genus}-m{T.inputs}-n{T.outputs}"
    return BordismDag(name, T.inputs, T.outputs, nodes, wires)


def canonical_eval(dialgebra, T, v, sector="closed"):
    """Evaluate the normal form of the type on the input.

    When the dialgebra fails the Frobenius gate the value is still
    computed (it is the normal form's value) but a TqftGateWarning is
    attached, because the number is then decomposition-dependent.
    """
    reports = gate_frobenius(dialgebra, sector)
    if not gate_ok(reports):
        failing = ", ".join(sorted(a for a, r in reports.items() if not r.holds))
        warnings.warn(
            TqftGateWarning(
                f"dialgebra {dialgebra.name!r} fails the Frobenius gate "
                f"({failing}); canonical value is decomposition-dependent"),
            stacklevel=2)
    return evaluate(dialgebra, normal_form(T), v, sector)


# -- type-preserving moves ----------------------------------------------------


def _reverse_wires(wires):
    return {producer: consumer for consumer, producer in wires.items()}


def _fresh_id(nodes, prefix):
    k = 1
    while f"{prefix}{k}" in nodes:
        k += 1
    return f"{prefix}{k}"


def _move_assoc(nodes, wires, rev, rng):
    sites = []
    for p2, kind in nodes.items():
        if kind != "pants":
            continue
        for port in (1, 2):
            src = wires[(p2, "in", port)]
            if len(src) == 3 and nodes.get(src[0]) == "pants" and src[1] == "out":
                sites.append((src[0], p2, port))
    if not sites:
        return False
    p1, p2, port = rng.choice(sorted(sites))
    if port == 1:
        # (x.y).z -> x.(y.z)
        x = wires[(p1, "in", 1)]
        y = wires[(p1, "in", 2)]
        z = wires[(p2, "in", 2)]
        wires[(p1, "in", 1)] = y
        wires[(p1, "in", 2)] = z
        wires[(p2, "in", 1)] = x
        wires[(p2, "in", 2)] = (p1, "out", 1)
    else:
        # x.(y.z) -> (x.y).z
        x = wires[(p2, "in", 1)]
        y = wires[(p1, "in", 1)]
        z = wires[(p1, "in", 2)]
        wires[(p1, "in", 1)] = x
        wires[(p1, "in", 2)] = y
        wires[(p2, "in", 1)] = (p1, "out", 1)
        wires[(p2, "in", 2)] = z
    return True


def _move_coassoc(nodes, wires, rev, rng):
    sites = []
    for c2, kind in nodes.items():
        if kind != "copants":
            continue
        src = wires[(c2, "in", 1)]
        if len(src) == 3 and nodes.get(src[0]) == "copants" and src[1] == "out":
            sites.append((src[0], c2, src[2]))
    if not sites:
        return False
    c1, c2, port = rng.choice(sorted(sites))
    if port == 1:
        # (split first output again) -> (split second output again)
        x = rev[(c2, "out", 1)]
        y = rev[(c2, "out", 2)]
        z = rev[(c1, "out", 2)]
        wires[(c2, "in", 1)] = (c1, "out", 2)
        wires[x] = (c1, "out", 1)
        wires[y] = (c2, "out", 1)
        wires[z] = (c2, "out", 2)
    else:
        x = rev[(c1, "out", 1)]
        y = rev[(c2, "out", 1)]
        z = rev[(c2, "out", 2)]
        wires[(c2, "in", 1)] = (c1, "out", 1)
        wires[x] = (c2, "out", 1)
        wires[y] = (c2, "out", 2)
        wires[z] = (c1, "out", 2)
    return True


def _move_frobenius_expand(nodes, wires, rev, rng):
    # split-of-product -> zigzag, in one of the two Frobenius shapes
    sites = []
    for c, kind in nodes.items():
        if kind != "copants":
            continue
        src = wires[(c, "in", 1)]
        if len(src) == 3 and nodes.get(src[0]) == "pants":
            sites.append((src[0], c))
    if not sites:
        return False
    p, c = rng.choice(sorted(sites))
    x = wires[(p, "in", 1)]
    y = wires[(p, "in", 2)]
    o1 = rev[(c, "out", 1)]
    o2 = rev[(c, "out", 2)]
    if rng.random() < 0.5:
        # split x, multiply its tail into y
        wires[(c, "in", 1)] = x
        wires[o1] = (c, "out", 1)
        wires[(p, "in", 1)] = (c, "out", 2)
        wires[(p, "in", 2)] = y
        wires[o2] = (p, "out", 1)
    else:
        # split y, multiply x into its head
        wires[(c, "in", 1)] = y
        wires[(p, "in", 1)] = x
        wires[(p, "in", 2)] = (c, "out", 1)
        wires[o1] = (p, "out", 1)
        wires[o2] = (c, "out", 2)
    return True


def _move_frobenius_collapse(nodes, wires, rev, rng):
    sites = []
    for p, kind in nodes.items():
        if kind != "pants":
            continue
        for port in (1, 2):
            src = wires[(p, "in", port)]
            if len(src) == 3 and nodes.get(src[0]) == "copants":
                if port == 1 and src[2] == 2:
                    sites.append((src[0], p, 1))
                if port == 2 and src[2] == 1:
                    sites.append((src[0], p, 2))
    if not sites:
        return False
    c, p, shape = rng.choice(sorted(sites))
    if shape == 1:
        x = wires[(c, "in", 1)]
        y = wires[(p, "in", 2)]
        o1 = rev[(c, "out", 1)]
        o2 = rev[(p, "out", 1)]
    else:
        x = wires[(p, "in", 1)]
        y = wires[(c, "in", 1)]
        o1 = rev[(p, "out", 1)]
        o2 = rev[(c, "out", 2)]
    wires[(p, "in", 1)] = x
    wires[(p, "in", 2)] = y
    wires[(c, "in", 1)] = (p, "out", 1)
    wires[o1] = (c, "out", 1)
    wires[o2] = (c, "out", 2)
    return True


def _move_twist_insert(nodes, wires, rev, rng):
    consumers = sorted(wires, key=_render_port)
    if len(consumers) < 2:
        return False
    d1, d2 = rng.sample(consumers, 2)
    p1, p2 = wires[d1], wires[d2]
    t1 = _fresh_id(nodes, "t")
    nodes[t1] = "twist"
    t2 = _fresh_id(nodes, "t")
    nodes[t2] = "twist"
    wires[(t1, "in", 1)] = p1
    wires[(t1, "in", 2)] = p2
    wires[(t2, "in", 1)] = (t1, "out", 1)
    wires[(t2, "in", 2)] = (t1, "out", 2)
    wires[d1] = (t2, "out", 1)
    wires[d2] = (t2, "out", 2)
    return True


def _move_twist_cancel(nodes, wires, rev, rng):
    sites = []
    for t2, kind in nodes.items():
        if kind != "twist":
            continue
        a = wires[(t2, "in", 1)]
        b = wires[(t2, "in", 2)]
        if (len(a) == 3 and a[0] == b[0] and nodes.get(a[0]) == "twist"
                and a[1:] == ("out", 1) and b[1:] == ("out", 2)):
            sites.append((a[0], t2))
    if not sites:
        return False
    t1, t2 = rng.choice(sorted(sites))
    d1 = rev[(t2, "out", 1)]
    d2 = rev[(t2, "out", 2)]
    p1 = wires[(t1, "in", 1)]
    p2 = wires[(t1, "in", 2)]
    for nid in (t1, t2):
        del nodes[nid]
        del wires[(nid, "in", 1)]
        del wires[(nid, "in", 2)]
    wires[d1] = p1
    wires[d2] = p2
    return True


def _move_twist_absorb(nodes, wires, rev, rng):
    sites = []
    for nid, kind in nodes.items():
        if kind == "pants":
            a = wires[(nid, "in", 1)]
            b = wires[(nid, "in", 2)]
            if (len(a) == 3 and a[0] == b[0] and nodes.get(a[0]) == "twist"
                    and a[1:] == ("out", 1) and b[1:] == ("out", 2)):
                sites.append(("pants", a[0], nid))
        elif kind == "twist":
            a = wires[(nid, "in", 1)]
            b = wires[(nid, "in", 2)]
            if (len(a) == 3 and a[0] == b[0] and nodes.get(a[0]) == "copants"
                    and a[1:] == ("out", 1) and b[1:] == ("out", 2)):
                sites.append(("copants", nid, a[0]))
    if not sites:
        return False
    shape, t_or_t, other = rng.choice(sorted(sites))
    if shape == "pants":
        t, p = t_or_t, other
        wires[(p, "in", 1)] = wires[(t, "in", 2)]
        wires[(p, "in", 2)] = wires[(t, "in", 1)]
        del nodes[t]
        del wires[(t, "in", 1)]
        del wires[(t, "in", 2)]
    else:
        t, c = t_or_t, other
        d1 = rev[(t, "out", 1)]
        d2 = rev[(t, "out", 2)]
        wires[d1] = (c, "out", 2)
        wires[d2] = (c, "out", 1)
        del nodes[t]
        del wires[(t, "in", 1)]
        del wires[(t, "in", 2)]
    return True


def _move_twist_emit(nodes, wires, rev, rng):
    sites = []
    for nid, kind in nodes.items():
        if kind == "pants":
            sites.append(("pants", nid))
        elif kind == "copants":
            sites.append(("copants", nid))
    if not sites:
        return False
    shape, nid = rng.choice(sorted(sites))
    t = _fresh_id(nodes, "t")
    nodes[t] = "twist"
    if shape == "pants":
        a = wires[(nid, "in", 1)]
        b = wires[(nid, "in", 2)]
        wires[(t, "in", 1)] = a
        wires[(t, "in", 2)] = b
        wires[(nid, "in", 1)] = (t, "out", 1)
        wires[(nid, "in", 2)] = (t, "out", 2)
    else:
        d1 = rev[(nid, "out", 1)]
        d2 = rev[(nid, "out", 2)]
        wires[(t, "in", 1)] = (nid, "out", 1)
        wires[(t, "in", 2)] = (nid, "out", 2)
        wires[d1] = (t, "out", 1)
        wires[d2] = (t, "out", 2)
    return True


def _move_cylinder_insert(nodes, wires, rev, rng):
    consumers = sorted(wires, key=_render_port)
    d = rng.choice(consumers)
    k = _fresh_id(nodes, "k")
    nodes[k] = "cylinder"
    wires[(k, "in", 1)] = wires[d]
    wires[d] = (k, "out", 1)
    return True


def _move_cylinder_delete(nodes, wires, rev, rng):
    sites = sorted(n for n, k in nodes.items() if k == "cylinder")
    if not sites:
        return False
    k = rng.choice(sites)
    d = rev[(k, "out", 1)]
    wires[d] = wires[(k, "in", 1)]
    del nodes[k]
    del wires[(k, "in", 1)]
    return True


_MOVES = {
    "assoc": _move_assoc,
    "coassoc": _move_coassoc,
    "frobenius-expand": _move_frobenius_expand,
    "frobenius-collapse": _move_frobenius_collapse,
    "twist-insert": _move_twist_insert,
    "twist-cancel": _move_twist_cancel,
    "twist-absorb": _move_twist_absorb,
    "twist-emit": _move_twist_emit,
    "cylinder-insert": _move_cylinder_insert,
    "cylinder-delete": _move_cylinder_delete,
}

_PLANAR_MOVES = ("assoc", "coassoc", "frobenius-expand", "frobenius-collapse",
                 "cylinder-insert", "cylinder-delete")


def random_decomposition(T, seed, allow_twist=True):
    """A seed-deterministic DAG of the given type.

    Starts from the normal form and applies randomly chosen local moves;
    every intermediate DAG is revalidated (wiring, acyclicity, connected
    topological type), so the result provably has type T.
    """
    rng = random.Random(seed)
    base = normal_form(T)
    name = f"type-g{T.genus}-m{T.inputs}-n{T.outputs}-seed{seed}"
    dag = BordismDag(name, T.inputs, T.outputs, base.nodes, base.wires)
    move_names = sorted(_MOVES) if allow_twist else sorted(_PLANAR_MOVES)
    steps = rng.randint(6, 14)
    applied = 0
    attempts = 0
    while applied < steps and attempts < 40 * steps:
        attempts += 1
        move = _MOVES[rng.choice(move_names)]
        nodes = dict(dag.nodes)
        wires = dict(dag.wires)
        if not move(nodes, wires, _reverse_wires(wires), rng):
            continue
        try:
            candidate = BordismDag(name, T.inputs, T.outputs, nodes, wires)
            if topological_type(candidate) != TopologicalType(
                    T.genus, T.inputs, T.outputs):
                continue
        except ValueError:
            continue
        dag = candidate
        applied += 1
    return dag


# -- invariance harness -------------------------------------------------------


@dataclass(frozen=True)
class InvarianceFailure:
    """One decomposition disagreeing with the canonical value."""

    type: TopologicalType
    sample_index: int
    seed: int
    dag: BordismDag
    input: tuple
    expected: FormalSum
    got: FormalSum

    def describe(self):
        arg = "*".join(str(b) for b in self.input)
        return (f"type {self.type}, sample {self.sample_index} "
                f"(seed {self.seed}): on {arg} expected {self.expected}, "
                f"got {self.got}")


@dataclass
class InvarianceReport:
    """Outcome of comparing random decompositions against normal forms."""

    dialgebra_name: str
    sector: str
    genus_max: int
    ports_max: int
    samples: int
    seed: int
    gate: dict
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def gate_ok(self):
        return gate_ok(self.gate)

    @property
    def ok(self):
        return not self.failures


def invariance_scan(dialgebra, genus_max=2, ports_max=3, samples=20,
                    seed=DEFAULT_SEED, sector="closed", stop_early=False):
    """Compare random decompositions of every type against normal forms.

    For a gate-passing dialgebra every comparison must agree (move
    invariance); for a gate-failing one a recorded failure is the
    sensitivity witness: two decompositions of one type with different
    values.
    """
    report = InvarianceReport(dialgebra.name, sector, genus_max, ports_max,
                              samples, seed, gate_frobenius(dialgebra, sector))
    rng = random.Random(seed)
    allow_twist = sector == "closed"
    basis = dialgebra.symbols
    for genus in range(genus_max + 1):
        for m in range(1, ports_max + 1):
            for n in range(1, ports_max + 1):
                T = TopologicalType(genus, m, n)
                inputs = [FormalSum.term(t)
                          for t in itertools.product(basis, repeat=m)]
                expected = [evaluate(dialgebra, normal_form(T), u, sector)
                            for u in inputs]
                for s in range(samples):
                    sub_seed = rng.randrange(1 << 30)
                    dag = random_decomposition(T, sub_seed, allow_twist)
                    for u, want in zip(inputs, expected):
                        got = evaluate(dialgebra, dag, u, sector)
                        report.checked += 1
                        if got != want:
                            term = _components(next(iter(u.iterterms()))[0])
                            report.failures.append(InvarianceFailure(
                                T, s, sub_seed, dag, term, want, got))
                            if stop_early:
                                return report
    return report
