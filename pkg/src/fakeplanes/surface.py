"""Blow-up engine for rational surfaces with a real structure.

Classes are written in the basis formed by the generators of the minimal
model followed by the total transforms of the exceptional curves, so that
proper transforms are obtained by subtraction and every self-intersection
shown in a dual graph is computed from the lattice.
"""

from __future__ import annotations

import itertools
import json
from math import gcd
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .exactalg import IntMatrix
from .lattice import DivisorClass, RealLattice, pair


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    label: str
    coeffs: tuple[int, ...]
    partner: Optional[str] = None

    @property
    def real(self) -> bool:
        return self.partner is None


@dataclass(frozen=True)
class PointSpec:
    """A blow-up center given by the curves passing through it.

    With ``conjugate=True`` the point is non-real and its conjugate point,
    lying on the conjugate curves, is blown up at the same time.
    """

    incidences: tuple[tuple[str, int], ...]
    conjugate: bool = False

    def __post_init__(self):
        for label, m in self.incidences:
            if m < 1:
                raise SurfaceError(f"multiplicity of {label} must be positive")

    @classmethod
    def on(cls, *labels: str, conjugate: bool = False, mult: Optional[Sequence[int]] = None):
        mult = mult or [1] * len(labels)
        return cls(tuple(zip(labels, mult)), conjugate)


@dataclass(frozen=True)
class BlowUpRecord:
    point: PointSpec
    labels: tuple[str, ...]


def basis_name(curve_label: str) -> str:
    return f"e[{curve_label}]"


def conj_name(label: str) -> str:
    return label + "~"


@dataclass(frozen=True)
class SurfaceModel:
    lattice: RealLattice
    curves: tuple[Curve, ...] = ()
    boundary: tuple[str, ...] = ()
    history: tuple[BlowUpRecord, ...] = ()

    # lookup helpers

    def labels(self) -> list[str]:
        return [c.label for c in self.curves]

    def curve(self, label: str) -> Curve:
        for c in self.curves:
            if c.label == label:
                return c
        raise SurfaceError(f"unknown curve {label!r}")

    def has_curve(self, label: str) -> bool:
        return any(c.label == label for c in self.curves)

    def cls(self, label: str) -> DivisorClass:
        return DivisorClass(self.lattice, self.curve(label).coeffs)

    def klass(self, coeffs) -> DivisorClass:
        return self.lattice.vector(coeffs)

    def canonical(self) -> DivisorClass:
        return self.lattice.canonical_class()

    def conjugate_label(self, label: str) -> str:
        c = self.curve(label)
        return label if c.real else c.partner

    def self_intersection(self, label: str) -> int:
        c = self.cls(label)
        return pair(c, c)

    def intersection(self, a: str, b: str) -> int:
        return pair(self.cls(a), self.cls(b))

    @property
    def picard_rank(self) -> int:
        return self.lattice.rank

    # construction

    def add_curve(self, label: str, klass, partner: Optional[str] = None) -> "SurfaceModel":
        """Register a real curve, or a conjugate pair when ``partner`` is given."""
        if isinstance(klass, DivisorClass):
            coeffs = klass.coeffs
        elif isinstance(klass, dict):
            coeffs = self.lattice.vector(klass).coeffs
        else:
            coeffs = tuple(klass)
        if len(coeffs) != self.lattice.rank:
            raise SurfaceError("class length does not match the lattice")
        new = [label] if partner is None else [label, partner]
        for lab in new:
            if self.has_curve(lab):
                raise SurfaceError(f"curve {lab!r} already registered")
        conj = self.lattice.conjugate(coeffs)
        if partner is None:
            if conj != tuple(coeffs):
                raise SurfaceError(f"class of real curve {label!r} is not invariant")
            added = (Curve(label, tuple(coeffs)),)
        else:
            # conjugate fibres or lines may well share an invariant class
            added = (Curve(label, tuple(coeffs), partner), Curve(partner, conj, label))
        return replace(self, curves=self.curves + added)

    def with_boundary(self, labels: Iterable[str]) -> "SurfaceModel":
        labels = tuple(labels)
        for lab in labels:
            other = self.conjugate_label(lab)
            if other not in labels:
                raise SurfaceError(f"boundary must contain the conjugate {other!r} of {lab!r}")
        return replace(self, boundary=labels)

    def rename(self, mapping: dict[str, str]) -> "SurfaceModel":
        def r(x):
            return mapping.get(x, x)
        curves = tuple(Curve(r(c.label), c.coeffs, None if c.partner is None else r(c.partner))
                       for c in self.curves)
        return replace(self, curves=curves, boundary=tuple(r(b) for b in self.boundary))

    def blow_up(self, point: PointSpec, label: str,
                conj_label: Optional[str] = None) -> tuple["SurfaceModel", tuple[str, ...]]:
        inc = dict()
        for lab, m in point.incidences:
            self.curve(lab)
            inc[lab] = inc.get(lab, 0) + m
        if not point.conjugate:
            for lab in inc:
                c = self.curve(lab)
                if not c.real and c.partner not in inc:
                    raise SurfaceError(
                        f"a real point cannot lie on {lab!r} without its conjugate {c.partner!r}")
                if not c.real and inc[lab] != inc[c.partner]:
                    raise SurfaceError(f"conjugate curves {lab!r} and {c.partner!r} need equal multiplicities")
            new_labels = (label,)
        else:
            conj_label = conj_label or conj_name(label)
            new_labels = (label, conj_label)
        for lab in new_labels:
            if self.has_curve(lab):
                raise SurfaceError(f"curve {lab!r} already registered")

        n = self.lattice.rank
        k = len(new_labels)
        canonical = list(self.lattice.canonical) + [1] * k
        swaps = [(basis_name(label), basis_name(conj_label))] if point.conjugate else []
        lat = self.lattice.extend([basis_name(x) for x in new_labels], [-1] * k, canonical, swaps)

        # subtractions in the new coordinates: index n is e, n + 1 is its conjugate
        sub: dict[str, list[int]] = {c.label: [0, 0] for c in self.curves}
        for lab, m in inc.items():
            sub[lab][0] += m
            if point.conjugate:
                sub[self.conjugate_label(lab)][1] += m
        curves = []
        for c in self.curves:
            s = sub[c.label]
            curves.append(Curve(c.label, c.coeffs + tuple(-x for x in s[:k]), c.partner))
        unit = [tuple(int(j == n + i) for j in range(n + k)) for i in range(k)]
        if point.conjugate:
            curves.append(Curve(label, unit[0], conj_label))
            curves.append(Curve(conj_label, unit[1], label))
        else:
            curves.append(Curve(label, unit[0]))
        record = BlowUpRecord(point, new_labels)
        return SurfaceModel(lat, tuple(curves), self.boundary, self.history + (record,)), new_labels

    # convenience wrapper for scripts
    def blow_up_at(self, *on: str, label: str, conjugate: bool = False,
                   mult: Optional[Sequence[int]] = None, conj_label: Optional[str] = None):
        model, _ = self.blow_up(PointSpec.on(*on, conjugate=conjugate, mult=mult), label, conj_label)
        return model

    def dual_graph(self, subset: Optional[Iterable[str]] = None) -> "DualGraph":
        labels = list(self.boundary if subset is None else subset)
        nodes = []
        for lab in labels:
            c = self.curve(lab)
            nodes.append(Node(lab, self.self_intersection(lab), c.partner))
        edges = []
        for a, b in itertools.combinations(labels, 2):
            w = self.intersection(a, b)
            if w:
                edges.append((a, b, w))
        return DualGraph(tuple(nodes), tuple(edges))

    def boundary_issues(self) -> list[str]:
        """Negative intersections between distinct boundary curves."""
        out = []
        for a, b in itertools.combinations(self.boundary, 2):
            w = self.intersection(a, b)
            if w < 0:
                out.append(f"{a}.{b} = {w} < 0")
        return out


def projective_plane(line: str = "L") -> SurfaceModel:
    """CP^2 with its standard real structure; basis is the line class."""
    lat = RealLattice(("l",), IntMatrix([[1]]), (-3,), (0,))
    model = SurfaceModel(lat)
    return model.add_curve(line, (1,)) if line else model


def hirzebruch(n: int) -> SurfaceModel:
    """The Hirzebruch surface F_n with basis (C0, f)."""
    if n < 0:
        raise SurfaceError("Hirzebruch index must be non-negative")
    lat = RealLattice(("C0", "f"), IntMatrix([[-n, 1], [1, 0]]), (-2, -(n + 2)), (0, 1))
    return SurfaceModel(lat)


def _ratio_less(a: tuple[int, int], b: tuple[int, int]) -> bool:
    # a[1]/a[0] < b[1]/b[0]
    return a[1] * b[0] < b[1] * a[0]


def euclid_chain_path(target: tuple[int, int]) -> list[str]:
    """Sides taken by the blow-up chain reaching ``target``; 'first'/'second'.

    Entry k tells which old curve the (k+2)-th blow-up center lies on
    together with the previous exceptional curve.
    """
    mu_minus, mu_plus = target
    if not (1 <= mu_minus <= mu_plus):
        raise SurfaceError(f"chain target {target} must satisfy 1 <= mu- <= mu+")
    if gcd(mu_minus, mu_plus) != 1:
        raise SurfaceError(f"chain target {target} is not coprime")
    u, v = (1, 0), (0, 1)
    steps = []
    while True:
        w = (u[0] + v[0], u[1] + v[1])
        if w == (mu_minus, mu_plus):
            return steps
        if _ratio_less(w, (mu_minus, mu_plus)):
            steps.append("second")
            u = w
        else:
            steps.append("first")
            v = w


def euclid_chain_blow_up(s: SurfaceModel, c1: str, c2: str, target: tuple[int, int],
                         labels: Sequence[str], conjugate: bool = False
                         ) -> tuple[SurfaceModel, list[str], tuple[int, int]]:
    """Blow up the point c1 ∩ c2 and then infinitely near points until an
    exceptional curve appears with multiplicity ``target[0]`` in the total
    transform of c1 and ``target[1]`` in that of c2.

    Returns the model, the labels used (last one is the (-1)-curve) and the
    coefficient pair of that last curve.
    """
    if s.intersection(c1, c2) < 1:
        raise SurfaceError(f"{c1} and {c2} do not meet")
    path = euclid_chain_path(target)
    if len(labels) < len(path) + 1:
        raise SurfaceError(f"chain to {target} needs {len(path) + 1} labels")
    left, right = (c1, (1, 0)), (c2, (0, 1))
    used = []
    for k in range(len(path) + 1):
        lab = labels[k]
        s, _ = s.blow_up(PointSpec.on(left[0], right[0], conjugate=conjugate), lab)
        used.append(lab)
        w = (left[1][0] + right[1][0], left[1][1] + right[1][1])
        if k < len(path):
            if path[k] == "second":
                left = (lab, w)
            else:
                right = (lab, w)
    return s, used, w


def chain_labels(prefix: str, count: int, start: int = 1) -> list[str]:
    return [f"{prefix}{i}" for i in range(start, start + count)]


def chain_length(target: tuple[int, int]) -> int:
    return len(euclid_chain_path(target)) + 1


# dual graphs

@dataclass(frozen=True)
class Node:
    label: str
    self_int: int
    partner: Optional[str] = None

    @property
    def real(self) -> bool:
        return self.partner is None


@dataclass(frozen=True)
class DualGraph:
    nodes: tuple[Node, ...]
    edges: tuple[tuple[str, str, int], ...] = ()

    @classmethod
    def from_data(cls, nodes, edges=()) -> "DualGraph":
        """Build from ``[(label, self_int[, partner])]`` and ``[(a, b[, w])]``."""
        ns = tuple(n if isinstance(n, Node) else Node(*n) for n in nodes)
        es = tuple((e[0], e[1], e[2] if len(e) > 2 else 1) for e in edges)
        return cls(ns, es)

    def labels(self) -> list[str]:
        return [n.label for n in self.nodes]

    def node(self, label: str) -> Node:
        for n in self.nodes:
            if n.label == label:
                return n
        raise KeyError(label)

    def weight(self, a: str, b: str) -> int:
        for x, y, w in self.edges:
            if {x, y} == {a, b}:
                return w
        return 0

    def adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {n.label: {} for n in self.nodes}
        for a, b, w in self.edges:
            adj[a][b] = adj[a].get(b, 0) + w
            adj[b][a] = adj[b].get(a, 0) + w
        return adj

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        adj = self.adjacency()
        seen = {self.nodes[0].label}
        stack = [self.nodes[0].label]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.nodes)

    def is_tree(self) -> bool:
        """Connected, simple edges only, and edge count one less than nodes."""
        return (self.is_connected() and all(w == 1 for _, _, w in self.edges)
                and len(self.edges) == len(self.nodes) - 1)

    def is_chain(self) -> bool:
        adj = self.adjacency()
        return self.is_tree() and all(len(v) <= 2 for v in adj.values())

    def chain_order(self) -> list[str]:
        """Labels of a chain from one end to the other."""
        if not self.is_chain():
            raise ValueError("graph is not a chain")
        adj = self.adjacency()
        start = next((x for x in self.labels() if len(adj[x]) <= 1))
        order, prev = [start], None
        while len(order) < len(self.nodes):
            nxt = next(y for y in adj[order[-1]] if y != prev)
            prev = order[-1]
            order.append(nxt)
        return order

    def to_json_obj(self) -> dict:
        return {
            "nodes": [{"label": n.label, "self": n.self_int, "real": n.real,
                       **({"partner": n.partner} if n.partner else {})} for n in self.nodes],
            "edges": [[a, b, w] for a, b, w in self.edges],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DualGraph":
        nodes = tuple(Node(n["label"], int(n["self"]), n.get("partner")) for n in obj["nodes"])
        edges = tuple((e[0], e[1], int(e[2]) if len(e) > 2 else 1) for e in obj.get("edges", []))
        return cls(nodes, edges)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    def to_dot(self, name: str = "boundary") -> str:
        lines = [f'graph "{name}" {{']
        for n in self.nodes:
            attrs = f'label="{n.label} ({n.self_int})"'
            if not n.real:
                attrs += ", style=dashed"
            lines.append(f'  "{n.label}" [{attrs}];')
        for a, b, w in self.edges:
            attr = f' [label="{w}"]' if w != 1 else ""
            lines.append(f'  "{a}" -- "{b}"{attr};')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def same_as(self, other: "DualGraph") -> list[str]:
        """Label-preserving comparison; returns a list of differences."""
        diffs = []
        mine = {n.label: n.self_int for n in self.nodes}
        theirs = {n.label: n.self_int for n in other.nodes}
        for lab in sorted(set(mine) | set(theirs)):
            if mine.get(lab) != theirs.get(lab):
                diffs.append(f"node {lab}: {mine.get(lab)} != {theirs.get(lab)}")
        labs = sorted(set(mine) & set(theirs))
        for a, b in itertools.combinations(labs, 2):
            if self.weight(a, b) != other.weight(a, b):
                diffs.append(f"edge {a}-{b}: {self.weight(a, b)} != {other.weight(a, b)}")
        return diffs


def graphs_isomorphic(a: DualGraph, b: DualGraph) -> bool:
    """Weighted isomorphism (self-intersections and edge weights) by backtracking."""
    if len(a.nodes) != len(b.nodes) or len(a.edges) != len(b.edges):
        return False
    aw = {n.label: n.self_int for n in a.nodes}
    bw = {n.label: n.self_int for n in b.nodes}
    if sorted(aw.values()) != sorted(bw.values()):
        return False
    aadj, badj = a.adjacency(), b.adjacency()

    def signature(adj, w, x):
        return (w[x], tuple(sorted((w[y], m) for y, m in adj[x].items())))

    asig = {x: signature(aadj, aw, x) for x in aw}
    bsig = {x: signature(badj, bw, x) for x in bw}
    if sorted(asig.values()) != sorted(bsig.values()):
        return False
    order = sorted(aw, key=lambda x: -len(aadj[x]))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in bw:
            if y in used or bsig[y] != asig[x]:
                continue
            if any(badj[y].get(mapping[q], 0) != aadj[x].get(q, 0) for q in mapping):
                continue
            mapping[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return extend(0)
