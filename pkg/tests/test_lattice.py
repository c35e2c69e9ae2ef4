import pytest

from fakeplanes.exactalg import IntMatrix
from fakeplanes.lattice import (
    GModuleMap,
    LatticeError,
    RealLattice,
    galois_h2,
    h2_induced,
    pair,
)


def plane_blown_up_at_pair():
    return RealLattice.build(["l", "e", "e~"], [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
                             canonical=[-3, 1, 1], swaps=[("e", "e~")])


def test_pairing_and_conjugation():
    lat = plane_blown_up_at_pair()
    u = lat.vector({"l": 1, "e": -1})
    assert pair(u, u) == 0
    assert u.conjugate().as_dict() == {"l": 1, "e~": -1}
    assert pair(u, u.conjugate()) == 1


def test_invalid_involution_rejected():
    with pytest.raises(LatticeError):
        RealLattice.build(["a", "b"], [[1, 0], [0, -1]], swaps=[("a", "b")])


def test_extend_adds_orthogonal_exceptional_classes():
    lat = RealLattice.build(["l"], [[1]], canonical=[-3])
    ext = lat.extend(["e", "e~"], [-1, -1], [-3, 1, 1], [("e", "e~")])
    assert ext.rank == 3
    assert ext.gram == IntMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    assert ext.involution == (0, 2, 1)


@pytest.mark.parametrize("fixed,pairs", [(1, 0), (3, 0), (1, 1), (2, 2), (0, 3)])
def test_h2_dimension_counts_fixed_basis_vectors(fixed, pairs):
    # for a permutation module, H^2 has one generator per fixed basis vector
    basis = [f"f{i}" for i in range(fixed)]
    swaps = []
    for i in range(pairs):
        basis += [f"p{i}", f"p{i}~"]
        swaps.append((f"p{i}", f"p{i}~"))
    n = len(basis)
    lat = RealLattice.build(basis, IntMatrix.identity(n), swaps=swaps)
    assert galois_h2(lat).dimension == fixed


def test_h2_induced_is_mod2_on_trivial_structures():
    src = RealLattice.build(["a", "b"], IntMatrix.zeros(2, 2))
    tgt = RealLattice.build(["x", "y"], IntMatrix.zeros(2, 2))
    m = IntMatrix([[3, 2], [1, 1]])
    assert h2_induced(GModuleMap(src, tgt, m)).tolist() == [[1, 0], [1, 1]]


def test_h2_induced_with_a_conjugate_pair():
    lat = plane_blown_up_at_pair()
    # boundary: a real curve of class l and a conjugate pair of classes e, e~
    src = RealLattice.build(["C", "E", "E~"], IntMatrix.zeros(3, 3), swaps=[("E", "E~")])
    m = GModuleMap(src, lat, IntMatrix.identity(3))
    assert m.is_equivariant()
    h = h2_induced(m)
    assert h.tolist() == [[1]]


def test_non_equivariant_map_rejected():
    lat = plane_blown_up_at_pair()
    src = RealLattice.build(["a"], IntMatrix.zeros(1, 1))
    m = GModuleMap(src, lat, IntMatrix([[0], [1], [0]]))
    assert not m.is_equivariant()
    with pytest.raises(LatticeError):
        h2_induced(m)
