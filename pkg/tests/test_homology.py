import pytest

from fakeplanes.exactalg import IntMatrix
from fakeplanes.homology import HomologyError, Verdict, acyclicity, real_plane_verdict
from fakeplanes.surface import PointSpec, projective_plane


def test_conic_complement():
    s = projective_plane(line="").add_curve("Q", {"l": 2}).with_boundary(["Q"])
    v = real_plane_verdict(s)
    assert v.h1_torsion == (2,)
    assert v.q_acyclic and not v.z_acyclic
    assert not v.h2_iso and not v.real_plane


def test_line_complement_is_z_acyclic():
    s = projective_plane().with_boundary(["L"])
    v = real_plane_verdict(s)
    assert v.z_acyclic and v.h2_iso and v.real_plane


def test_non_square_map_is_not_acyclic():
    a = acyclicity(IntMatrix([[1, 0]]))
    assert not a.q_acyclic and a.determinant is None


def test_conjugate_pair_of_lines():
    # two conjugate lines: H1 = Z, so not Q-acyclic
    s = projective_plane(line="").add_curve("M", {"l": 1}, partner="M~").with_boundary(["M", "M~"])
    v = real_plane_verdict(s)
    assert not v.q_acyclic and not v.real_plane


def test_blown_up_pair_boundary_h2():
    # CP^2 blown up at a conjugate pair, boundary the line through them and the two exceptionals
    s = projective_plane()
    s, _ = s.blow_up(PointSpec.on("L", conjugate=True), "E")
    s = s.with_boundary(["L", "E", "E~"])
    v = real_plane_verdict(s)
    assert v.z_acyclic and v.h2_iso and v.real_plane


def test_verdict_invariants_enforced():
    with pytest.raises(HomologyError):
        Verdict(True, True, q_acyclic=False, z_acyclic=True, h1_torsion=(), h2_iso=True,
                boundary_real_nonempty=True, real_plane=False)
    with pytest.raises(HomologyError):
        Verdict(True, True, q_acyclic=True, z_acyclic=False, h1_torsion=(3,), h2_iso=False,
                boundary_real_nonempty=True, real_plane=True)
