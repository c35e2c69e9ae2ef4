from fractions import Fraction

import pytest

from fakeplanes.kodaira import (
    EquivalenceError,
    FibrationDescriptor,
    Fiber,
    KodairaError,
    a1_fibration_verdict,
    chain_boundary_evidence,
    effective_multiple_check,
    general_type_claim,
    hypersurface_fibration,
    kod1_conditions,
    kod1_conditions_conjugate,
    log_canonical,
    positive_part_check,
    solve_rational,
)
from fakeplanes.lattice import pair
from fakeplanes.surface import DualGraph, projective_plane


def test_log_canonical_of_a_line_complement():
    s = projective_plane().with_boundary(["L"])
    assert log_canonical(s).coeffs == (-2,)


def test_effective_multiple_rejects_wrong_combination():
    s = projective_plane(line="").add_curve("Q", {"l": 3}).with_boundary(["Q"])
    # K + B = 0 for a plane cubic
    ev = effective_multiple_check(s, 1, {})
    assert ev.verdict == "kappa_zero_evidence"
    with pytest.raises(EquivalenceError):
        effective_multiple_check(s, 1, {"Q": 1})


def test_solve_rational():
    assert solve_rational([[2, 0], [0, 3]], [Fraction(1), Fraction(1)]) == [Fraction(1, 2), Fraction(1, 3)]
    assert solve_rational([[1, 1]], [Fraction(1), Fraction(2)]) is None


def test_positive_part_requires_square_zero_fiber():
    s = projective_plane().with_boundary(["L"])
    with pytest.raises(KodairaError):
        positive_part_check(s, None, s.cls("L"), [])


@pytest.mark.parametrize("mu_plus,eta", [((2, 3), Fraction(1, 6)), ((3, 4), Fraction(5, 12))])
def test_kod1_eta_exact(mu_plus, eta):
    c = kod1_conditions(2, [1, 1], mu_plus)
    assert c.eta == eta


def test_kod1_conditions_name_the_failure():
    c = kod1_conditions(2, [1, 1], [2, 2])
    assert not c.passed and any("positivity" in f for f in c.failures)
    c = kod1_conditions(2, [1, 1], [2, 4])
    assert not c.passed and any("unimodularity" in f for f in c.failures)
    with pytest.raises(KodairaError):
        kod1_conditions(2, [2, 1], [2, 3])


def test_kod1_conjugate_conditions():
    c = kod1_conditions_conjugate(1, [2], [3])
    assert c.passed and c.eta == Fraction(1, 3) and abs(c.det) == 3
    bad = kod1_conditions_conjugate(1, [1], [2])
    assert not bad.passed


def test_fibration_criteria():
    one = FibrationDescriptor("real_line", (Fiber(5),))
    assert a1_fibration_verdict(one) == (True, True)
    even = FibrationDescriptor("real_line", (Fiber(4),))
    assert a1_fibration_verdict(even) == (False, False)
    two = FibrationDescriptor("real_line", (Fiber(3), Fiber(5)))
    assert a1_fibration_verdict(two) == (True, False)
    nonreal = FibrationDescriptor("real_line", (Fiber(2, real=False), Fiber(3)))
    assert a1_fibration_verdict(nonreal)[0]


def test_hypersurface_fibration_validation():
    f = hypersurface_fibration(2, [2, 3], [3, 5])
    assert [x.multiplicity for x in f.fibers] == [3, 5]
    with pytest.raises(KodairaError):
        hypersurface_fibration(1, [2], [4])


def test_general_type_claim_hypotheses():
    good = DualGraph.from_data([("o", -1), ("a", -2), ("b", -3), ("c", -2)],
                               [("o", "a"), ("o", "b"), ("o", "c")])
    assert general_type_claim(good).verdict == "kappa_two_claimed"
    bad = DualGraph.from_data([("o", -1), ("a", -2)], [("o", "a")])
    ev = general_type_claim(bad)
    assert ev.verdict == "inconclusive" and "meets only 1" in ev.notes[0]


def test_chain_boundary_evidence():
    chain = DualGraph.from_data([("a", 1), ("b", 0)], [("a", "b")])
    assert chain_boundary_evidence(chain, True).verdict == "kappa_minus_infinity_certified"
    assert chain_boundary_evidence(chain, False).verdict == "inconclusive"


def test_pencil_positive_part_on_small_example():
    # three lines through x plus a general line: K + B equals the fiber class exactly
    s = projective_plane(line="")
    for lab in ("A", "B", "C", "C1"):
        s = s.add_curve(lab, {"l": 1})
    s = s.blow_up_at("A", "B", "C", label="X").with_boundary(["X", "C1", "A", "B", "C"])
    fiber = s.klass({"l": 1, "e[X]": -1})
    assert pair(fiber, fiber) == 0
    ev = positive_part_check(s, None, fiber, [])
    assert ev.notes[0] == "eta = 1"
