"""Birational rewriting of curve configurations.

A :class:`CurveConfig` only remembers self-intersections, pairwise
intersection numbers, realness and the Picard rank.  Blowing up a point
and contracting a (-1)-curve act on that data by the usual rules, which
is enough to replay sequences of elementary transformations and compare
the outcome with a target dual graph.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .surface import DualGraph, Node, SurfaceModel


class MoveError(ValueError):
    pass


class EndpointMismatch(MoveError):
    def __init__(self, diffs: Sequence[str]):
        self.diffs = list(diffs)
        super().__init__("endpoint mismatch: " + "; ".join(self.diffs))


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CurveConfig:
    curves: tuple[Node, ...]
    inter: dict = field(default_factory=dict, hash=False)
    picard_rank: int = 0

    def __post_init__(self):
        labels = self.labels()
        if len(set(labels)) != len(labels):
            raise MoveError("duplicate curve labels")
        clean = {}
        for (a, b), w in self.inter.items():
            if a == b:
                raise MoveError("self-intersections belong to the node, not the table")
            if a not in labels or b not in labels:
                raise MoveError(f"intersection names unknown curve {a!r} or {b!r}")
            if w < 0:
                raise MoveError(f"negative intersection {a}.{b} = {w}")
            if w:
                clean[_key(a, b)] = w
        object.__setattr__(self, "inter", clean)
        for n in self.curves:
            if n.partner is not None:
                p = self.node(n.partner)
                if p.partner != n.label:
                    raise MoveError(f"{n.label} and {n.partner} are not mutually conjugate")
                if p.self_int != n.self_int:
                    raise MoveError(f"conjugate curves {n.label}, {p.label} differ in self-intersection")

    def labels(self) -> list[str]:
        return [n.label for n in self.curves]

    def node(self, label: str) -> Node:
        for n in self.curves:
            if n.label == label:
                return n
        raise MoveError(f"unknown curve {label!r}")

    def self_int(self, label: str) -> int:
        return self.node(label).self_int

    def meet(self, a: str, b: str) -> int:
        if a == b:
            return self.self_int(a)
        return self.inter.get(_key(a, b), 0)

    def conjugate(self, label: str) -> str:
        n = self.node(label)
        return label if n.partner is None else n.partner

    def to_graph(self, labels: Optional[Iterable[str]] = None) -> DualGraph:
        labs = self.labels() if labels is None else list(labels)
        nodes = tuple(self.node(x) for x in labs)
        edges = tuple((a, b, self.meet(a, b)) for a, b in itertools.combinations(labs, 2)
                      if self.meet(a, b))
        return DualGraph(nodes, edges)

    def to_json_obj(self) -> dict:
        return {
            "curves": [{"label": n.label, "self": n.self_int, "real": n.real,
                        **({"partner": n.partner} if n.partner else {})} for n in self.curves],
            "inter": [[a, b, w] for (a, b), w in sorted(self.inter.items())],
            "picard_rank": self.picard_rank,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CurveConfig":
        curves = tuple(Node(c["label"], int(c["self"]), c.get("partner")) for c in obj["curves"])
        inter = {}
        for e in obj.get("inter", []):
            inter[_key(e[0], e[1])] = inter.get(_key(e[0], e[1]), 0) + int(e[2] if len(e) > 2 else 1)
        return cls(curves, inter, int(obj.get("picard_rank", 0)))

    @classmethod
    def from_model(cls, s: SurfaceModel, labels: Optional[Iterable[str]] = None) -> "CurveConfig":
        """Configuration of the given curves (default: the boundary) of a model."""
        labs = list(s.boundary if labels is None else labels)
        for lab in labs:
            if s.conjugate_label(lab) not in labs:
                raise MoveError(f"configuration needs the conjugate of {lab}")
        nodes = tuple(Node(x, s.self_intersection(x), s.curve(x).partner) for x in labs)
        inter = {}
        for a, b in itertools.combinations(labs, 2):
            w = s.intersection(a, b)
            if w < 0:
                raise MoveError(f"curves {a}, {b} have negative intersection {w}")
            if w:
                inter[_key(a, b)] = w
        return cls(nodes, inter, s.picard_rank)

    @classmethod
    def from_graph(cls, g: DualGraph, picard_rank: int) -> "CurveConfig":
        return cls(g.nodes, {_key(a, b): w for a, b, w in g.edges}, picard_rank)


def _replace_nodes(c: CurveConfig, changes: dict[str, int], extra: Sequence[Node] = ()) -> tuple[Node, ...]:
    out = []
    for n in c.curves:
        out.append(Node(n.label, n.self_int + changes.get(n.label, 0), n.partner))
    return tuple(out) + tuple(extra)


def _blow_up_point(c: CurveConfig, on: dict[str, int], new: Node) -> CurveConfig:
    """Blow up one point without any real-structure bookkeeping."""
    for a, b in itertools.combinations(on, 2):
        if c.meet(a, b) < on[a] * on[b]:
            raise MoveError(f"{a} and {b} do not meet at the blown-up point")
    changes = {lab: -m * m for lab, m in on.items()}
    inter = dict(c.inter)
    for a, b in itertools.combinations(on, 2):
        inter[_key(a, b)] = inter.get(_key(a, b), 0) - on[a] * on[b]
    for lab, m in on.items():
        inter[_key(lab, new.label)] = m
    nodes = _replace_nodes(c, changes, [new])
    return CurveConfig(nodes, inter, c.picard_rank + 1)


def blow_up_config(c: CurveConfig, on: Sequence[str] | dict[str, int], real: bool = True,
                   label: Optional[str] = None, conj_label: Optional[str] = None,
                   mult: Optional[Sequence[int]] = None) -> CurveConfig:
    """Blow up a real point, or a pair of conjugate points when ``real`` is False.

    For a pair the point lies on the curves ``on`` and its conjugate on
    their conjugates.
    """
    if isinstance(on, dict):
        inc = dict(on)
    else:
        mult = list(mult) if mult else [1] * len(on)
        inc = dict(zip(on, mult))
    for lab in inc:
        c.node(lab)
    label = label or _fresh(c, "X")
    if label in c.labels():
        raise MoveError(f"label {label!r} already used")
    if real:
        for lab in inc:
            n = c.node(lab)
            if n.partner is not None and n.partner not in inc:
                raise MoveError(f"real point on {lab} must also lie on its conjugate {n.partner}")
        return _blow_up_point(c, inc, Node(label, -1))
    conj_label = conj_label or label + "~"
    if conj_label in c.labels():
        raise MoveError(f"label {conj_label!r} already used")
    # temporarily drop partners so the intermediate state is a valid config
    first = _blow_up_point(_strip(c), inc, Node(label, -1))
    conj_inc: dict[str, int] = {}
    for lab, m in inc.items():
        other = c.conjugate(lab)
        conj_inc[other] = conj_inc.get(other, 0) + m
    second = _blow_up_point(first, conj_inc, Node(conj_label, -1))
    return _restore(second, c, {label: conj_label})


def _strip(c: CurveConfig) -> CurveConfig:
    return CurveConfig(tuple(Node(n.label, n.self_int) for n in c.curves), c.inter, c.picard_rank)


def _restore(stripped: CurveConfig, original: CurveConfig, new_pairs: dict[str, str]) -> CurveConfig:
    partners = {n.label: n.partner for n in original.curves if n.partner}
    for a, b in new_pairs.items():
        partners[a], partners[b] = b, a
    nodes = tuple(Node(n.label, n.self_int, partners.get(n.label)) for n in stripped.curves)
    return CurveConfig(nodes, stripped.inter, stripped.picard_rank)


def _fresh(c: CurveConfig, prefix: str) -> str:
    used = set(c.labels())
    for i in itertools.count(1):
        if f"{prefix}{i}" not in used:
            return f"{prefix}{i}"


def _contract(c: CurveConfig, label: str) -> CurveConfig:
    if c.self_int(label) != -1:
        raise MoveError(f"{label} is not a (-1)-curve (self-intersection {c.self_int(label)})")
    others = [x for x in c.labels() if x != label]
    hit = {x: c.meet(x, label) for x in others}
    changes = {x: hit[x] ** 2 for x in others}
    inter = {}
    for a, b in itertools.combinations(others, 2):
        w = c.meet(a, b) + hit[a] * hit[b]
        if w:
            inter[_key(a, b)] = w
    nodes = tuple(Node(n.label, n.self_int + changes[n.label], n.partner)
                  for n in c.curves if n.label != label)
    return CurveConfig(nodes, inter, c.picard_rank - 1)


def contract_config(c: CurveConfig, label: str) -> CurveConfig:
    """Contract a real (-1)-curve."""
    n = c.node(label)
    if n.self_int != -1:
        raise MoveError(f"{label} is not a (-1)-curve (self-intersection {n.self_int})")
    if n.partner is not None:
        raise MoveError(f"{label} is not real; contract it together with {n.partner}")
    return _contract(c, label)


def contract_pair(c: CurveConfig, label: str) -> CurveConfig:
    """Contract two disjoint conjugate (-1)-curves."""
    n = c.node(label)
    if n.partner is None:
        raise MoveError(f"{label} is real; a pair contraction needs a conjugate pair")
    if n.self_int != -1:
        raise MoveError(f"{label} is not a (-1)-curve (self-intersection {n.self_int})")
    if c.meet(label, n.partner) != 0:
        raise MoveError(f"{label} and {n.partner} meet; they cannot be contracted together")
    partner = n.partner
    out = _contract(_contract(_strip(c), label), partner)
    return _restore(out, c, {})


def forget_curve(c: CurveConfig, label: str) -> CurveConfig:
    """Stop tracking a curve (and its conjugate); the surface is unchanged."""
    drop = {label, c.conjugate(label)}
    nodes = tuple(n for n in c.curves if n.label not in drop)
    inter = {k: w for k, w in c.inter.items() if not (set(k) & drop)}
    return CurveConfig(nodes, inter, c.picard_rank)


# scripts

MOVE_OPS = ("blowup", "contract", "contract_pair", "forget")

@dataclass(frozen=True)
class Move:
    op: str
    on: tuple[str, ...] = ()
    real: bool = True
    mult: tuple[int, ...] = ()
    label: Optional[str] = None
    conj_label: Optional[str] = None

    def to_json_obj(self) -> dict:
        d: dict = {"op": self.op}
        if self.op == "blowup":
            d["on"] = list(self.on)
            d["real"] = self.real
            if self.mult:
                d["mult"] = list(self.mult)
        if self.label is not None:
            d["label"] = self.label
        if self.conj_label is not None:
            d["conj_label"] = self.conj_label
        return d

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Move":
        op = obj.get("op")
        if op not in MOVE_OPS:
            raise MoveError(f"unknown move {op!r}")
        return cls(op, tuple(obj.get("on", ())), bool(obj.get("real", True)),
                   tuple(obj.get("mult", ())), obj.get("label"), obj.get("conj_label"))


def blowup(*on: str, label: str, real: bool = True, conj_label: Optional[str] = None,
           mult: Sequence[int] = ()) -> Move:
    return Move("blowup", tuple(on), real, tuple(mult), label, conj_label)


def contract(label: str) -> Move:
    return Move("contract", label=label)


def contract_both(label: str) -> Move:
    return Move("contract_pair", label=label)


def forget(label: str) -> Move:
    return Move("forget", label=label)


def apply_move(c: CurveConfig, m: Move) -> CurveConfig:
    if m.op == "blowup":
        return blow_up_config(c, list(m.on), m.real, m.label, m.conj_label, list(m.mult) or None)
    if m.label is None:
        raise MoveError(f"{m.op} needs a label")
    if m.op == "contract":
        return contract_config(c, m.label)
    if m.op == "forget":
        return forget_curve(c, m.label)
    return contract_pair(c, m.label)


@dataclass(frozen=True)
class MoveScript:
    start: CurveConfig
    moves: tuple[Move, ...]
    expect: Optional[DualGraph] = None
    expect_picard_rank: Optional[int] = None
    name: str = ""

    def to_json_obj(self) -> dict:
        d = {"name": self.name, "start": self.start.to_json_obj(),
             "moves": [m.to_json_obj() for m in self.moves]}
        if self.expect is not None:
            d["expect"] = self.expect.to_json_obj()
            if self.expect_picard_rank is not None:
                d["expect"]["picard_rank"] = self.expect_picard_rank
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MoveScript":
        try:
            start = CurveConfig.from_json_obj(obj["start"])
            moves = tuple(Move.from_json_obj(m) for m in obj["moves"])
        except (KeyError, TypeError) as exc:
            raise MoveError(f"malformed move script: {exc}") from None
        expect = None
        rank = None
        if obj.get("expect") is not None:
            expect = DualGraph.from_json_obj(obj["expect"])
            rank = obj["expect"].get("picard_rank")
        return cls(start, moves, expect, rank, obj.get("name", ""))

    @classmethod
    def load(cls, path: str | Path) -> "MoveScript":
        return cls.from_json_obj(json.loads(Path(path).read_text()))


def run_script(c: CurveConfig, script: MoveScript | Sequence[Move]) -> CurveConfig:
    moves = script.moves if isinstance(script, MoveScript) else script
    for m in moves:
        c = apply_move(c, m)
    return c


def assert_endpoint(c: CurveConfig, expected: DualGraph, picard_rank: Optional[int] = None) -> bool:
    """Exact comparison with an expected graph; labels must agree."""
    diffs = c.to_graph().same_as(expected)
    realness_mine = {n.label: n.partner for n in c.curves}
    for n in expected.nodes:
        if n.label in realness_mine and realness_mine[n.label] != n.partner:
            diffs.append(f"node {n.label}: conjugate {realness_mine[n.label]} != {n.partner}")
    if picard_rank is not None and picard_rank != c.picard_rank:
        diffs.append(f"picard rank {c.picard_rank} != {picard_rank}")
    if diffs:
        raise EndpointMismatch(diffs)
    return True


def run_and_check(script: MoveScript) -> CurveConfig:
    end = run_script(script.start, script)
    if script.expect is not None:
        assert_endpoint(end, script.expect, script.expect_picard_rank)
    return end
