import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fakeplanes.moves import (
    CurveConfig,
    EndpointMismatch,
    MoveError,
    MoveScript,
    blow_up_config,
    blowup,
    contract,
    contract_config,
    contract_pair,
    forget,
    forget_curve,
    run_and_check,
)
from fakeplanes.surface import DualGraph, Node, PointSpec, hirzebruch, projective_plane


@st.composite
def configs(draw):
    n = draw(st.integers(1, 5))
    labels = [f"C{i}" for i in range(n)]
    nodes = tuple(Node(x, draw(st.integers(-4, 3))) for x in labels)
    inter = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = draw(st.integers(0, 2))
            if w:
                inter[(labels[i], labels[j])] = w
    # an optional conjugate pair
    if draw(st.booleans()):
        s = draw(st.integers(-3, 1))
        nodes += (Node("P", s, "P~"), Node("P~", s, "P"))
        for x in labels:
            w = draw(st.integers(0, 1))
            if w:
                inter[(x, "P")] = w
                inter[(x, "P~")] = w
    return CurveConfig(nodes, inter, draw(st.integers(1, 6)))


@settings(max_examples=150)
@given(configs(), st.data())
def test_real_blow_up_then_contract_is_identity(c, data):
    real = [n.label for n in c.curves if n.partner is None]
    on = data.draw(st.lists(st.sampled_from(real), max_size=2, unique=True))
    if len(on) == 2 and c.meet(*on) == 0:
        on = on[:1]
    b = blow_up_config(c, on, label="NEW")
    assert b.picard_rank == c.picard_rank + 1
    assert contract_config(b, "NEW").to_json_obj() == c.to_json_obj()


@settings(max_examples=100)
@given(configs(), st.data())
def test_pair_blow_up_then_contract_is_identity(c, data):
    on = data.draw(st.lists(st.sampled_from(c.labels()), max_size=1))
    b = blow_up_config(c, on, real=False, label="N")
    assert b.node("N").partner == "N~"
    assert contract_pair(b, "N").to_json_obj() == c.to_json_obj()


def _hirzebruch_with_curves():
    s = hirzebruch(1).add_curve("S", {"C0": 1}).add_curve("T", {"C0": 1, "f": 1})
    s = s.add_curve("F", {"f": 1}).add_curve("G", {"f": 1}, partner="G~")
    return s


@pytest.mark.parametrize("point", [
    PointSpec.on("S", "F"), PointSpec.on("T", "F"), PointSpec.on("F"),
    PointSpec.on("T", "G", conjugate=True), PointSpec.on("G", conjugate=True),
])
def test_configuration_blow_up_agrees_with_lattice_blow_up(point):
    s = _hirzebruch_with_curves()
    labels = ["S", "T", "F", "G", "G~"]
    via_lattice, _ = s.blow_up(point, "X")
    lattice_route = CurveConfig.from_model(via_lattice, labels + (["X", "X~"] if point.conjugate else ["X"]))
    on = [lab for lab, _ in point.incidences]
    config_route = blow_up_config(CurveConfig.from_model(s, labels), on, real=not point.conjugate, label="X")
    assert lattice_route.to_json_obj() == config_route.to_json_obj()


def test_contract_requires_minus_one_curve():
    c = CurveConfig((Node("A", -2), Node("B", -1)), {("A", "B"): 1}, 3)
    with pytest.raises(MoveError, match="not a \\(-1\\)-curve"):
        contract_config(c, "A")


def test_contract_pair_rules():
    c = CurveConfig((Node("A", -1, "A~"), Node("A~", -1, "A")), {("A", "A~"): 1}, 3)
    with pytest.raises(MoveError):
        contract_pair(c, "A")
    r = CurveConfig((Node("R", -1),), {}, 2)
    with pytest.raises(MoveError):
        contract_pair(r, "R")


def test_forget_drops_conjugates():
    c = CurveConfig((Node("A", 0), Node("P", -1, "P~"), Node("P~", -1, "P")),
                    {("A", "P"): 1, ("A", "P~"): 1}, 3)
    f = forget_curve(c, "P~")
    assert f.labels() == ["A"] and f.inter == {}


def test_move_script_json_roundtrip():
    start = CurveConfig((Node("A", 0), Node("B", 1)), {("A", "B"): 1}, 2)
    expect = DualGraph.from_data([("A", -1), ("B", 0), ("X", -1)], [("A", "X"), ("B", "X")])
    script = MoveScript(start, (blowup("A", "B", label="X"),), expect, 3, "toy")
    again = MoveScript.from_json_obj(script.to_json_obj())
    assert again.to_json() == script.to_json()
    run_and_check(again)


def test_endpoint_mismatch_lists_differences():
    start = CurveConfig((Node("A", 0),), {}, 2)
    script = MoveScript(start, (blowup("A", label="X"), forget("X")),
                        DualGraph.from_data([("A", 0)]), 3, "bad")
    with pytest.raises(EndpointMismatch) as info:
        run_and_check(script)
    assert "node A: -1 != 0" in info.value.diffs


def test_contract_move_in_script():
    start = CurveConfig((Node("A", 1), Node("E", -1)), {("A", "E"): 1}, 2)
    end = run_and_check(MoveScript(start, (contract("E"),), DualGraph.from_data([("A", 2)]), 1))
    assert end.self_int("A") == 2


def test_real_point_on_a_single_conjugate_curve_rejected():
    c = CurveConfig((Node("P", 0, "P~"), Node("P~", 0, "P")), {}, 3)
    with pytest.raises(MoveError):
        blow_up_config(c, ["P"])


def test_from_model_uses_engine_intersections():
    s = projective_plane().add_curve("M", {"l": 1})
    c = CurveConfig.from_model(s, ["L", "M"])
    assert c.meet("L", "M") == 1 and c.self_int("L") == 1 and c.picard_rank == 1
